//! Command-line front end for the `alcove` library.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use alcove::ajs::Ajs;
use alcove::bm::{self, BmReport, ScanOutcome};
use alcove::gsheaf::bott_samelson_sheaf;
use alcove::hecke::Hecke;
use alcove::structure::{gkm_prime_set, MomentGraph};
use alcove::weyl::AffineWeyl;
use alcove::{AffineWeylElem, Field, FieldSpec, PrimeField, Rationals, Word};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Expands `$body` once per field type, with `$k` bound to the field.
macro_rules! on_field {
    ($spec:expr, |$k:ident| $body:expr) => {
        match $spec {
            FieldSpec::Q => {
                let $k = Rationals;
                $body
            }
            FieldSpec::Fp(p) => {
                let $k = PrimeField::new(p)?;
                $body
            }
        }
    };
}

#[derive(Parser, Debug)]
#[command(name = "alcove", version, about = "Kazhdan-Lusztig combinatorics, moment graph sheaves and Braden-MacPherson verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Affine type, written with a trailing `~` (A1~, A2~, B2~, G2~, ...).
    #[arg(long = "type", global = true, default_value = "A1~")]
    ty: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// `Q` or `Fp` (with `--p`); `F5` and `F_5` are accepted too.
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Worker threads for `verify` and `scan`; output order does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root system and affine Weyl group data.
    Describe,
    /// The Kazhdan-Lusztig polynomial `h_{x,y}`.
    Kl {
        #[arg(long, default_value = "")]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Bott-Samelson element and sheaf of a word.
    Bs {
        #[arg(long)]
        word: String,
    },
    /// Moment graph of a Bruhat ideal, or of `Ĝ°` without `--ideal`.
    Graph {
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Primes at which the GKM condition fails.
    Gkm {
        #[arg(long)]
        ideal: Option<String>,
    },
    /// The Braden-MacPherson sheaf of `w` compared with KL values.
    Bm {
        #[arg(long)]
        w: String,
        #[arg(long)]
        cutoff: Option<i32>,
    },
    /// Check stalk ranks against `h_{x,w}(1)` for many `w`; nonzero exit on mismatch.
    Verify {
        /// All `w` with `l(w) <= lmax`.
        #[arg(long, conflicts_with = "w")]
        lmax: Option<usize>,
        #[arg(long)]
        w: Option<String>,
        /// Check only this many elements, drawn with `--seed`.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cutoff: Option<i32>,
    },
    /// Compare `F_p` stalk ranks with `Q`; nonzero exit on a jump or a GKM failure.
    Scan {
        #[arg(long)]
        w: String,
        /// Comma separated, e.g. `2,3,5,7`.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long)]
        cutoff: Option<i32>,
    },
    /// The bound `U` for a word, and its minimum over reduced words of `w`.
    Bound {
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        w: Option<String>,
    },
    /// Rank vector of `𝒯^{s_l} ∘ ⋯ ∘ 𝒯^{s_1}(P₀)`.
    AjsTrack {
        #[arg(long)]
        word: String,
    },
}

fn field_spec(cli: &Cli) -> Result<FieldSpec> {
    let f = cli.field.trim();
    let spec = match f {
        "Q" | "q" => FieldSpec::Q,
        "Fp" | "fp" | "F_p" => FieldSpec::Fp(cli.p.context("--field Fp needs --p")?),
        other => {
            let digits = other.trim_start_matches(['F', 'f']).trim_start_matches('_');
            FieldSpec::Fp(digits.parse().with_context(|| format!("unrecognized field `{other}`"))?)
        }
    };
    if let FieldSpec::Fp(p) = spec {
        PrimeField::new(p)?;
    }
    Ok(spec)
}

fn word_label(g: &AffineWeyl, x: &AffineWeylElem) -> String {
    let s = g.word_string(x);
    if s.is_empty() {
        "e".into()
    } else {
        s
    }
}

fn print_json(v: &Value) {
    // A closed pipe (`| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().ok();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` signals a mismatch.
fn run(cli: &Cli) -> Result<bool> {
    let g = AffineWeyl::from_label(&cli.ty)?;
    match &cli.command {
        Command::Describe => describe(cli, &g),
        Command::Kl { x, y } => {
            let h = Hecke::new(g.clone());
            let (x, y) = (g.parse(x)?, g.parse(y)?);
            let p = h.kl_poly(&x, &y);
            match cli.format {
                Format::Json => print_json(&json!({"x": word_label(&g, &x), "y": word_label(&g, &y), "h": p.to_string(), "coefficients": p})),
                _ => println!("{p}"),
            }
            Ok(true)
        }
        Command::Bs { word } => {
            let word: Word = word.parse()?;
            g.check_word(&word)?;
            let h = Hecke::new(g.clone());
            let elem = h.bott_samelson(&word);
            let hecke: BTreeMap<String, String> = elem.terms().map(|(x, p)| (word_label(&g, x), p.to_string())).collect();
            let stalks = on_field!(field_spec(cli)?, |k| bs_stalks(&k, &g, &word)?);
            match cli.format {
                Format::Json => print_json(&json!({"word": word.to_string(), "hecke": hecke, "stalks": stalks})),
                _ => {
                    for (x, p) in &hecke {
                        println!("{x:>10}  {p:<24}  {:?}", stalks.get(x).cloned().unwrap_or_default());
                    }
                }
            }
            Ok(true)
        }
        Command::Graph { ideal } => {
            let graph = graph_for(&g, ideal.as_deref())?;
            match cli.format {
                Format::Dot => print!("{}", graph.to_dot(&g)),
                Format::Json => print_json(&serde_json::to_value(graph.to_json(&g))?),
                Format::Table => {
                    for e in graph.to_json(&g).edges {
                        println!("{:>10} -- {:<10} {}", e.a, e.b, e.label);
                    }
                }
            }
            Ok(true)
        }
        Command::Gkm { ideal } => {
            let graph = graph_for(&g, ideal.as_deref())?;
            let primes: Vec<u64> = gkm_prime_set(&graph).into_iter().collect();
            match cli.format {
                Format::Json => print_json(&json!({"violating_primes": primes})),
                _ => println!("{}", primes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
            }
            Ok(true)
        }
        Command::Bm { w, cutoff } => {
            let h = Hecke::new(g.clone());
            let w = g.parse(w)?;
            let rep = on_field!(field_spec(cli)?, |k| bm::verify_conjecture(&k, &h, &w, *cutoff)?);
            emit_report(cli, &rep)?;
            Ok(rep.matches)
        }
        Command::Verify { lmax, w, sample, seed, cutoff } => verify(cli, &g, *lmax, w.as_deref(), *sample, *seed, *cutoff),
        Command::Scan { w, primes, cutoff } => {
            let w = g.parse(w)?;
            let (qranks, out) = bm::prime_scan(&g, &w, primes, *cutoff)?;
            let ok = out.values().all(ScanOutcome::matches);
            match cli.format {
                Format::Json => print_json(&json!({"w": word_label(&g, &w), "q_ranks": qranks, "primes": out, "all_match": ok})),
                _ => {
                    for (p, o) in &out {
                        match o {
                            ScanOutcome::Computed { jumps, .. } if jumps.is_empty() => println!("{p:>6}  match"),
                            ScanOutcome::Computed { jumps, .. } => println!("{p:>6}  jumps at {}", jumps.join(" ")),
                            ScanOutcome::Rejected(e) => println!("{p:>6}  rejected: {e}"),
                        }
                    }
                }
            }
            Ok(ok)
        }
        Command::Bound { word, w } => {
            let h = Hecke::new(g.clone());
            let mut out = serde_json::Map::new();
            if let Some(word) = word {
                let word: Word = word.parse()?;
                g.check_word(&word)?;
                out.insert("word".into(), json!(word.to_string()));
                if !word.is_empty() {
                    out.insert("components".into(), serde_json::to_value(h.bound_components(&word))?);
                }
                out.insert("U".into(), json!(h.bound_u(&word).to_string()));
            }
            if let Some(w) = w {
                let w = g.parse(w)?;
                out.insert("w".into(), json!(word_label(&g, &w)));
                out.insert("U_min".into(), json!(h.bound_u_min(&w).to_string()));
            }
            if out.is_empty() {
                bail!("bound needs --word or --w");
            }
            match cli.format {
                Format::Json => print_json(&Value::Object(out)),
                _ => {
                    for (k, v) in out {
                        println!("{k:>10}  {v}");
                    }
                }
            }
            Ok(true)
        }
        Command::AjsTrack { word } => {
            let word: Word = word.parse()?;
            let v = on_field!(field_spec(cli)?, |k| ajs_json(k, &g, &word)?);
            match cli.format {
                Format::Json => print_json(&v),
                _ => {
                    for (f, n) in v["ranks"].as_object().into_iter().flatten() {
                        println!("{f:>10}  {n}");
                    }
                }
            }
            Ok(true)
        }
    }
}

fn bs_stalks<F: Field>(k: &F, g: &AffineWeyl, word: &Word) -> alcove::Result<BTreeMap<String, Vec<i32>>> {
    let s = bott_samelson_sheaf(k, g, word)?;
    Ok(s.graph().vertices().iter().enumerate().map(|(i, x)| (word_label(g, x), s.stalk(i).degrees().to_vec())).collect())
}

fn ajs_json<F: Field>(k: F, g: &AffineWeyl, word: &Word) -> alcove::Result<Value> {
    let a = Ajs::new(k, g)?;
    let m = a.track(word)?;
    Ok(serde_json::to_value(a.to_json(&m)).expect("serializable"))
}

fn graph_for(g: &AffineWeyl, ideal: Option<&str>) -> Result<MomentGraph> {
    Ok(match ideal {
        Some(w) => MomentGraph::ideal(g, &g.parse(w)?),
        None => MomentGraph::restricted(g),
    })
}

fn describe(cli: &Cli, g: &AffineWeyl) -> Result<bool> {
    let rd = g.root_datum();
    let roots: Vec<Value> = rd.positive_roots().iter().map(|r| json!({"simple": r.simple, "weight": r.weight})).collect();
    let boxed: Vec<String> = g.antifundamental_box().iter().map(|x| word_label(g, x)).collect();
    let v = json!({
        "type": rd.label(),
        "rank": rd.rank(),
        "cartan": rd.cartan(),
        "positive_roots": roots,
        "highest_root": rd.highest_root().simple,
        "coxeter_number": rd.coxeter_number(),
        "generators": g.num_gens(),
        "box": boxed,
        "w_hat0": word_label(g, &g.w_hat0()),
        "w_circ_size": g.w_circ().len(),
    });
    match cli.format {
        Format::Json => print_json(&v),
        _ => {
            for (k, x) in v.as_object().unwrap() {
                println!("{k:>16}  {x}");
            }
        }
    }
    Ok(true)
}

fn emit_report(cli: &Cli, rep: &BmReport) -> Result<()> {
    match cli.format {
        Format::Json => print_json(&serde_json::to_value(rep)?),
        _ => print_table(rep),
    }
    Ok(())
}

fn print_table(rep: &BmReport) {
    println!("w = {}  field = {}  cutoff = {}  match = {}", rep.w, rep.field, rep.cutoff, rep.matches);
    println!("{:>10}  {:>4}  {:>6}  {:<16}  {:<20}  {}", "x", "rank", "h(1)", "degrees", "h_{x,w}", "equal");
    for r in &rep.rows {
        println!("{:>10}  {:>4}  {:>6}  {:<16}  {:<20}  {}", r.x, r.rank, r.kl_at_one, format!("{:?}", r.degrees), r.kl.to_string(), r.equal);
    }
}

fn verify(cli: &Cli, g: &AffineWeyl, lmax: Option<usize>, w: Option<&str>, sample: Option<usize>, seed: u64, cutoff: Option<i32>) -> Result<bool> {
    let mut ws = match (lmax, w) {
        (_, Some(w)) => vec![g.parse(w)?],
        (Some(l), None) => g.elements_up_to_length(l),
        (None, None) => bail!("verify needs --lmax or --w"),
    };
    g.sort(&mut ws);
    if let Some(n) = sample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ws.shuffle(&mut rng);
        ws.truncate(n);
        g.sort(&mut ws);
    }
    let spec = field_spec(cli)?;
    let h = Hecke::new(g.clone());
    let results: Vec<std::result::Result<BmReport, String>> = {
        use rayon::prelude::*;
        ws.par_iter()
            .map(|w| verify_one(spec, &h, w, cutoff).map_err(|e| format!("{}: {e:#}", word_label(g, w))))
            .collect()
    };
    let ok = results.iter().all(|r| matches!(r, Ok(rep) if rep.matches));
    match cli.format {
        Format::Json => {
            let items: Vec<Value> = results
                .iter()
                .map(|r| match r {
                    Ok(rep) => serde_json::to_value(rep).expect("serializable"),
                    Err(e) => json!({"error": e}),
                })
                .collect();
            print_json(&json!({"type": g.root_datum().label(), "field": spec.label(), "results": items, "all_match": ok}));
        }
        _ => {
            for r in &results {
                match r {
                    Ok(rep) => print_table(rep),
                    Err(e) => println!("error: {e}"),
                }
                println!();
            }
            println!("all_match = {ok}");
        }
    }
    Ok(ok)
}

fn verify_one(spec: FieldSpec, h: &Hecke, w: &AffineWeylElem, cutoff: Option<i32>) -> Result<BmReport> {
    Ok(on_field!(spec, |k| bm::verify_conjecture(&k, h, w, cutoff)?))
}
