mod common;

use std::collections::BTreeMap;

use alcove::gsheaf::{bott_samelson_sheaf, GradedFree, LengthFn, Sheaf};
use alcove::hecke::Hecke;
use alcove::weyl::AffineWeyl;
use alcove::{AffineWeylElem, Field, Order, PrimeField, Rationals, Word};
use common::{all_words, group};

fn lf(order: Order) -> LengthFn {
    match order {
        Order::Bruhat => LengthFn::Bruhat,
        Order::Generic => LengthFn::Delta,
    }
}

fn subq<F: Field>(g: &AffineWeyl, f: &Sheaf<F>, x: &AffineWeylElem, order: Order) -> Vec<i32> {
    match f.graph().index_of(x) {
        Some(i) => f.subquotient(g, i, order).unwrap().degrees().to_vec(),
        None => vec![],
    }
}

fn union(a: &[i32], b: &[i32], shift: i32) -> Vec<i32> {
    let mut v: Vec<i32> = a.iter().chain(b).map(|d| d + shift).collect();
    v.sort_unstable();
    v
}

/// Vertices `y` with `x ⊴ y` inside the graph.
fn up_set(g: &AffineWeyl, verts: &[AffineWeylElem], x: &AffineWeylElem, order: Order) -> Vec<usize> {
    (0..verts.len()).filter(|&i| g.leq(order, x, &verts[i])).collect()
}

fn cases() -> Vec<(AffineWeyl, Vec<Word>)> {
    let a1 = group("A1~");
    let a2 = group("A2~");
    let mut w1 = all_words(&a1, 3);
    w1.insert(0, Word::empty());
    let mut w2 = all_words(&a2, 2);
    w2.insert(0, Word::empty());
    vec![(a1, w1), (a2, w2)]
}

#[test]
fn translation_splits_subquotients() {
    for (g, words) in cases() {
        for word in &words {
            let f = bott_samelson_sheaf(&Rationals, &g, word).unwrap();
            for s in 0..g.num_gens() as u8 {
                let mut ws = word.clone();
                ws.0.push(s);
                let tf = bott_samelson_sheaf(&Rationals, &g, &ws).unwrap();
                for order in [Order::Bruhat, Order::Generic] {
                    for x in tf.graph().vertices() {
                        let xs = x.mul(g.gen(s));
                        if !g.leq(order, x, &xs) {
                            continue;
                        }
                        let (fx, fxs) = (subq(&g, &f, x, order), subq(&g, &f, &xs, order));
                        let ctx = format!("{} s={s} x={} {order:?}", ws, g.word_string(x));
                        assert_eq!(subq(&g, &tf, x, order), union(&fx, &fxs, 2), "{ctx}");
                        assert_eq!(subq(&g, &tf, &xs, order), union(&fx, &fxs, 0), "{ctx}");
                    }
                }
            }
        }
    }
}

#[test]
fn translation_acts_on_characters_by_rho() {
    for (g, words) in cases() {
        let h = Hecke::new(g.clone());
        for word in &words {
            let f = bott_samelson_sheaf(&Rationals, &g, word).unwrap();
            let l = word.len() as i32;
            for s in 0..g.num_gens() as u8 {
                let mut ws = word.clone();
                ws.0.push(s);
                let tf = bott_samelson_sheaf(&Rationals, &g, &ws).unwrap();
                for order in [Order::Bruhat, Order::Generic] {
                    let before = f.character(&g, order, lf(order), l).unwrap();
                    let after = tf.character(&g, order, lf(order), l + 1).unwrap();
                    assert_eq!(after, h.rho(&before, s, order), "{ws} {order:?}");
                }
            }
        }
    }
}

#[test]
fn subquotients_exhaust_sections() {
    for (g, words) in cases() {
        for word in words.iter().filter(|w| w.len() <= 2) {
            let f = bott_samelson_sheaf(&Rationals, &g, word).unwrap();
            let all: Vec<usize> = (0..f.graph().num_vertices()).collect();
            let secs = f.sections(&all, f.default_cutoff(&g, &all)).unwrap().module();
            let stalk_rank: usize = f.stalks().iter().map(GradedFree::rank).sum();
            assert_eq!(secs.rank(), stalk_rank, "{word}");
            for order in [Order::Bruhat, Order::Generic] {
                let mut degs: Vec<i32> = f.graph().vertices().iter().flat_map(|x| subq(&g, &f, x, order)).collect();
                degs.sort_unstable();
                assert_eq!(secs.degrees(), degs.as_slice(), "{word} {order:?}");
            }
        }
    }
}

#[test]
fn restriction_to_open_sets_is_onto() {
    for (g, words) in cases() {
        for word in words.iter().filter(|w| w.len() <= 3 && (g.rank() == 1 || w.len() <= 2)) {
            let f = bott_samelson_sheaf(&Rationals, &g, word).unwrap();
            let verts = f.graph().vertices().to_vec();
            for order in [Order::Bruhat, Order::Generic] {
                for x in &verts {
                    let open = up_set(&g, &verts, x, order);
                    for d in 0..=2 * word.len() as i32 + 2 {
                        assert!(f.restriction_onto(&open, d), "{word} {order:?} x={} d={d}", g.word_string(x));
                    }
                }
            }
        }
    }
}

#[test]
fn ranks_agree_over_large_primes() {
    let g = group("A2~");
    let k = PrimeField::new(7).unwrap();
    for word in all_words(&g, 3) {
        let q = bott_samelson_sheaf(&Rationals, &g, &word).unwrap();
        let p = bott_samelson_sheaf(&k, &g, &word).unwrap();
        let r = |s: &[GradedFree]| s.iter().map(|m| m.degrees().to_vec()).collect::<Vec<_>>();
        assert_eq!(r(q.stalks()), r(p.stalks()), "{word}");
    }
}

#[test]
fn stalk_ranks_are_bott_samelson_values() {
    for (g, words) in cases() {
        let h = Hecke::new(g.clone());
        for word in &words {
            let f = bott_samelson_sheaf(&Rationals, &g, word).unwrap();
            let expect: BTreeMap<AffineWeylElem, i64> = h.bott_samelson(word).terms().map(|(x, p)| (x.clone(), p.eval_one())).collect();
            for (i, x) in f.graph().vertices().iter().enumerate() {
                assert_eq!(f.stalk(i).rank() as i64, expect.get(x).copied().unwrap_or(0), "{word} at {}", g.word_string(x));
            }
        }
    }
}
