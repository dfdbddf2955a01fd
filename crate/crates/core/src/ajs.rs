//! The combinatorial category of Andersen, Jantzen and Soergel: objects on
//! alcoves or on one orbit of walls, the two families of translation
//! functors, the constants relating them, and exact comparison of the
//! `S^β`-submodules `M(F, β)`.
//!
//! Every `M(F)` is free over `S^∅` with all generators in degree 0, since the
//! functors never shift. Each `M(F, β)` is stored by generators with entries
//! in `S^∅`; objects built from `P₀` have exactly one generator per ambient
//! coordinate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::{Field, Scalar};
use crate::poly::{Eliminator, Poly};
use crate::rootsys::Root;
use crate::weyl::{AffineWeyl, AffineWeylElem, Facet, WallCoset, Word};
use crate::{Error, Result};

/// A fraction `num / Π α^e` over positive roots `α`, reduced so that no
/// denominator root divides the numerator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalRingElem<E> {
    pub num: Poly<E>,
    pub den: BTreeMap<usize, u32>,
}

/// `S^∅` (all positive roots inverted) or `S^β` (all but `β`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalRing {
    Full,
    Beta(usize),
}

/// Three-valued outcome of a submodule comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Equal,
    Unequal,
    Inconclusive,
}

/// Which facets an object lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orbit {
    Alcoves,
    Walls(u8),
}

/// Generators of `M(F, β)` inside `M(F) ⊕ M(β↑F)` (first `n1` coordinates,
/// then `n2`), or inside `M(F)` alone when `β↑F = F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation<E> {
    pub n1: usize,
    pub n2: usize,
    pub gens: Vec<Vec<LocalRingElem<E>>>,
}

impl<E: Scalar> Presentation<E> {
    pub fn empty(n1: usize, n2: usize) -> Self {
        Presentation { n1, n2, gens: Vec::new() }
    }
    pub fn ambient(&self) -> usize {
        self.n1 + self.n2
    }
}

/// An object of the category: stalk ranks `rk M(F)` on its support and the
/// presentations `M(F, β)` with nonzero ambient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AjsObject<E> {
    pub orbit: Orbit,
    pub stalks: BTreeMap<Facet, usize>,
    pub local: BTreeMap<(Facet, usize), Presentation<E>>,
}

impl<E: Scalar> AjsObject<E> {
    pub fn rank(&self, f: &Facet) -> usize {
        self.stalks.get(f).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.stalks.values().all(|&n| n == 0)
    }
}

/// The summand counts of `M(F, β) ≅ V_F^a ⊕ V_{β↑F}^b ⊕ P^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct L4Shape {
    pub v: usize,
    pub vup: usize,
    pub p: usize,
}

/// Root data and field, with the positive roots prepared as linear forms in
/// the finite weight variables.
pub struct Ajs<F: Field> {
    k: F,
    g: AffineWeyl,
    roots: Vec<Root>,
    forms: Vec<Eliminator<F::Elem>>,
    nvars: usize,
}

impl<F: Field> fmt::Debug for Ajs<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ajs({}, {})", self.g.root_datum().label(), self.k.label())
    }
}

impl<F: Field> Ajs<F> {
    /// Requires characteristic not 2 (not 3 for `G2`) and pairwise
    /// non-proportional positive roots over `k`.
    pub fn new(k: F, g: &AffineWeyl) -> Result<Self> {
        let p = k.characteristic();
        if p == 2 {
            return Err(Error::CharTwo);
        }
        let rd = g.root_datum();
        if p == 3 && rd.label().starts_with('G') {
            return Err(Error::BadField("characteristic 3 is excluded for G2".into()));
        }
        let roots = rd.positive_roots().to_vec();
        let forms: Vec<Eliminator<F::Elem>> = roots
            .iter()
            .map(|r| Eliminator::new(&k, &r.weight).ok_or_else(|| Error::BadField(format!("a root vanishes over {}", k.label()))))
            .collect::<Result<_>>()?;
        for i in 0..forms.len() {
            for j in 0..i {
                if forms[i].reduce(&forms[j].form).is_zero() {
                    return Err(Error::BadField(format!("two positive roots are proportional over {}", k.label())));
                }
            }
        }
        Ok(Ajs { nvars: rd.rank(), k, g: g.clone(), roots, forms })
    }

    pub fn group(&self) -> &AffineWeyl {
        &self.g
    }
    pub fn field(&self) -> &F {
        &self.k
    }
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root_index(&self, r: &Root) -> Option<usize> {
        self.roots.iter().position(|q| q.simple == r.simple)
    }

    // Scalars.

    pub fn lre_scalar(&self, c: F::Elem) -> LocalRingElem<F::Elem> {
        LocalRingElem { num: Poly::constant(self.nvars, c), den: BTreeMap::new() }
    }
    pub fn lre_one(&self) -> LocalRingElem<F::Elem> {
        self.lre_scalar(self.k.one())
    }
    pub fn lre_zero(&self) -> LocalRingElem<F::Elem> {
        LocalRingElem { num: Poly::zero(self.nvars), den: BTreeMap::new() }
    }
    /// The positive root `α_i` as an element.
    pub fn lre_root(&self, i: usize) -> LocalRingElem<F::Elem> {
        LocalRingElem { num: self.forms[i].form.clone(), den: BTreeMap::new() }
    }
    /// `α_i^{-1}`.
    pub fn lre_root_inv(&self, i: usize) -> LocalRingElem<F::Elem> {
        LocalRingElem { num: Poly::constant(self.nvars, self.k.one()), den: BTreeMap::from([(i, 1)]) }
    }

    fn reduce(&self, mut x: LocalRingElem<F::Elem>) -> LocalRingElem<F::Elem> {
        if x.num.is_zero() {
            x.den.clear();
            return x;
        }
        for (&i, e) in x.den.iter_mut() {
            while *e > 0 {
                match self.forms[i].divide(&x.num) {
                    Some(q) => {
                        x.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        x.den.retain(|_, e| *e > 0);
        x
    }

    fn root_power(&self, i: usize, e: u32) -> Poly<F::Elem> {
        self.forms[i].form.pow(e, &self.k.one())
    }

    pub fn mul(&self, a: &LocalRingElem<F::Elem>, b: &LocalRingElem<F::Elem>) -> LocalRingElem<F::Elem> {
        let mut den = a.den.clone();
        for (&i, &e) in &b.den {
            *den.entry(i).or_insert(0) += e;
        }
        self.reduce(LocalRingElem { num: a.num.mul(&b.num), den })
    }

    pub fn add(&self, a: &LocalRingElem<F::Elem>, b: &LocalRingElem<F::Elem>) -> LocalRingElem<F::Elem> {
        let keys: BTreeSet<usize> = a.den.keys().chain(b.den.keys()).copied().collect();
        let mut den = BTreeMap::new();
        let mut na = a.num.clone();
        let mut nb = b.num.clone();
        for i in keys {
            let ea = a.den.get(&i).copied().unwrap_or(0);
            let eb = b.den.get(&i).copied().unwrap_or(0);
            let m = ea.max(eb);
            na = na.mul(&self.root_power(i, m - ea));
            nb = nb.mul(&self.root_power(i, m - eb));
            den.insert(i, m);
        }
        self.reduce(LocalRingElem { num: na.add(&nb), den })
    }

    pub fn neg(&self, a: &LocalRingElem<F::Elem>) -> LocalRingElem<F::Elem> {
        LocalRingElem { num: a.num.neg(), den: a.den.clone() }
    }

    /// Splits `p = r · Π α_i^{m_i}` with `r` divisible by no positive root.
    fn strip_roots(&self, p: &Poly<F::Elem>) -> (Poly<F::Elem>, BTreeMap<usize, u32>) {
        let mut r = p.clone();
        let mut m = BTreeMap::new();
        if r.is_zero() {
            return (r, m);
        }
        for (i, f) in self.forms.iter().enumerate() {
            while let Some(q) = f.divide(&r) {
                r = q;
                *m.entry(i).or_insert(0) += 1;
            }
        }
        (r, m)
    }

    /// The inverse, when it exists in `S^∅` (a scalar times roots to integer powers).
    pub fn inv(&self, a: &LocalRingElem<F::Elem>) -> Option<LocalRingElem<F::Elem>> {
        let (r, m) = self.strip_roots(&a.num);
        if r.total_degree() != Some(0) {
            return None;
        }
        let c = r.terms().next()?.1.inv()?;
        let mut num = Poly::constant(self.nvars, c);
        for (&i, &e) in &a.den {
            num = num.mul(&self.root_power(i, e));
        }
        Some(self.reduce(LocalRingElem { num, den: m }))
    }

    /// `β`-adic valuation; `None` for zero.
    pub fn valuation(&self, a: &LocalRingElem<F::Elem>, beta: usize) -> Option<i64> {
        if a.num.is_zero() {
            return None;
        }
        let (_, m) = self.strip_roots(&a.num);
        Some(m.get(&beta).copied().unwrap_or(0) as i64 - a.den.get(&beta).copied().unwrap_or(0) as i64)
    }

    pub fn in_ring(&self, a: &LocalRingElem<F::Elem>, ring: LocalRing) -> bool {
        match ring {
            LocalRing::Full => true,
            LocalRing::Beta(b) => a.den.get(&b).copied().unwrap_or(0) == 0,
        }
    }

    pub fn is_unit_in(&self, a: &LocalRingElem<F::Elem>, ring: LocalRing) -> bool {
        match self.inv(a) {
            None => false,
            Some(i) => self.in_ring(a, ring) && self.in_ring(&i, ring),
        }
    }

    /// Cohomological degree (variables have degree 2); `None` if inhomogeneous or zero.
    pub fn degree(&self, a: &LocalRingElem<F::Elem>) -> Option<i32> {
        let d = a.num.homogeneous_degree()? as i32;
        Some(2 * (d - a.den.values().map(|&e| e as i32).sum::<i32>()))
    }

    pub fn render(&self, a: &LocalRingElem<F::Elem>) -> String {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("w{i}")).collect();
        let num = a.num.render(&names);
        if a.den.is_empty() {
            return num;
        }
        let den: Vec<String> = a
            .den
            .iter()
            .map(|(&i, &e)| {
                let name = self.root_name(i);
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        format!("({num})/({})", den.join("*"))
    }

    fn root_name(&self, i: usize) -> String {
        let s: Vec<String> = self.roots[i].simple.iter().map(i64::to_string).collect();
        format!("a[{}]", s.join(","))
    }

    fn s_beta_sign_negative(&self, beta: usize, alpha: &Root) -> bool {
        let rd = self.g.root_datum();
        let b = &self.roots[beta];
        let c = rd.pair(&alpha.weight, b);
        let img: Vec<i64> = alpha.simple.iter().zip(&b.simple).map(|(a, bb)| a - c * bb).collect();
        !img.iter().all(|&x| x >= 0)
    }

    // Facet geometry.

    pub fn beta_up(&self, f: &Facet, beta: usize) -> Facet {
        self.g.facet_beta_up(f, &self.roots[beta])
    }

    pub fn beta_down(&self, f: &Facet, beta: usize) -> Facet {
        match f {
            Facet::Alcove(w) => Facet::Alcove(self.g.beta_down(w, &self.roots[beta])),
            Facet::Wall(b) => Facet::Wall(self.g.beta_down_wall(b, &self.roots[beta])),
        }
    }

    fn ambient_dims(&self, m: &AjsObject<F::Elem>, f: &Facet, beta: usize) -> (usize, usize, bool) {
        let up = self.beta_up(f, beta);
        if up == *f {
            (m.rank(f), 0, true)
        } else {
            (m.rank(f), m.rank(&up), false)
        }
    }

    fn pres(&self, m: &AjsObject<F::Elem>, f: &Facet, beta: usize) -> Presentation<F::Elem> {
        if let Some(p) = m.local.get(&(f.clone(), beta)) {
            return p.clone();
        }
        let (n1, n2, _) = self.ambient_dims(m, f, beta);
        Presentation::empty(n1, n2)
    }

    /// Facets `F` for which `M(F, β)` can be nonzero.
    fn local_keys(&self, stalks: &BTreeMap<Facet, usize>) -> Vec<(Facet, usize)> {
        let mut out = BTreeSet::new();
        for (f, &n) in stalks {
            if n == 0 {
                continue;
            }
            for b in 0..self.roots.len() {
                out.insert((f.clone(), b));
                out.insert((self.beta_down(f, b), b));
            }
        }
        out.into_iter().collect()
    }

    fn unit_vec(&self, n: usize, i: usize) -> Vec<LocalRingElem<F::Elem>> {
        (0..n).map(|j| if i == j { self.lre_one() } else { self.lre_zero() }).collect()
    }

    // Objects and functors.

    /// `P₀`: `S^∅` at `A_e`, with `M(A_e, β)` and `M(β↓A_e, β)` equal to `S^β`.
    pub fn p0(&self) -> AjsObject<F::Elem> {
        let ae = Facet::Alcove(self.g.identity());
        let stalks = BTreeMap::from([(ae.clone(), 1)]);
        let mut local = BTreeMap::new();
        for b in 0..self.roots.len() {
            local.insert((ae.clone(), b), Presentation { n1: 1, n2: 0, gens: vec![self.unit_vec(1, 0)] });
            local.insert((self.beta_down(&ae, b), b), Presentation { n1: 0, n2: 1, gens: vec![self.unit_vec(1, 0)] });
        }
        AjsObject { orbit: Orbit::Alcoves, stalks, local }
    }

    fn wall_sides(&self, b: &Facet) -> (Facet, Facet) {
        let Facet::Wall(w) = b else { panic!("expected a wall") };
        let (m, p) = self.g.wall_sides(w);
        (Facet::Alcove(m), Facet::Alcove(p))
    }

    fn wall_of(&self, a: &Facet, s: u8) -> Facet {
        let Facet::Alcove(w) = a else { panic!("expected an alcove") };
        Facet::Wall(self.g.wall_of(w, s))
    }

    fn wall_coset(f: &Facet) -> &WallCoset {
        match f {
            Facet::Wall(w) => w,
            Facet::Alcove(_) => panic!("expected a wall"),
        }
    }

    fn on_stalks(&self, m: &AjsObject<F::Elem>, s: u8) -> BTreeMap<Facet, usize> {
        let mut stalks = BTreeMap::new();
        for (a, &n) in &m.stalks {
            if n == 0 {
                continue;
            }
            let b = self.wall_of(a, s);
            let (bm, bp) = self.wall_sides(&b);
            stalks.insert(b, m.rank(&bm) + m.rank(&bp));
        }
        stalks
    }

    fn out_stalks(&self, n: &AjsObject<F::Elem>) -> BTreeMap<Facet, usize> {
        let mut stalks = BTreeMap::new();
        for (b, &r) in &n.stalks {
            if r == 0 {
                continue;
            }
            let (bm, bp) = self.wall_sides(b);
            stalks.insert(bm, r);
            stalks.insert(bp, r);
        }
        stalks
    }

    /// `𝒯_on^s`, or its primed variant scaling `M(B_±, β)` by `((a_{B_±}^β)^{-1}, 1)`.
    fn on_impl(&self, m: &AjsObject<F::Elem>, s: u8, primed: bool) -> AjsObject<F::Elem> {
        assert_eq!(m.orbit, Orbit::Alcoves, "on-the-wall functor needs an object on alcoves");
        let stalks = self.on_stalks(m, s);
        let mut local = BTreeMap::new();
        for (b, beta) in self.local_keys(&stalks) {
            let (bm, bp) = self.wall_sides(&b);
            let rk = |f: &Facet| stalks.get(f).copied().unwrap_or(0);
            let scaled = |a: &Facet| -> Presentation<F::Elem> {
                let p = self.pres(m, a, beta);
                if !primed {
                    return p;
                }
                let c = self.inv(&self.a_const(a, beta, s)).expect("a is a unit");
                self.scale_block(&p, &c)
            };
            let up = self.beta_up(&b, beta);
            let p = if up == b {
                debug_assert_eq!(self.beta_up(&bm, beta), bp);
                let pm = scaled(&bm);
                Presentation { n1: rk(&b), n2: 0, gens: pm.gens }
            } else {
                let (cm, cp) = self.wall_sides(&up);
                let (r_bm, r_bp, r_cm) = (m.rank(&bm), m.rank(&bp), m.rank(&cm));
                let n1 = r_bm + r_bp;
                let n2 = rk(&up);
                let off_c = |f: &Facet| if *f == cm { n1 } else if *f == cp { n1 + r_cm } else { panic!("β↑ of a side is a side of β↑B") };
                let mut gens = Vec::new();
                for (side, off_side) in [(&bm, 0), (&bp, r_bm)] {
                    let ps = scaled(side);
                    let off_up = off_c(&self.beta_up(side, beta));
                    for gvec in &ps.gens {
                        let mut v = vec![self.lre_zero(); n1 + n2];
                        for i in 0..ps.n1 {
                            v[off_side + i] = gvec[i].clone();
                        }
                        for i in 0..ps.n2 {
                            v[off_up + i] = gvec[ps.n1 + i].clone();
                        }
                        gens.push(v);
                    }
                }
                Presentation { n1, n2, gens }
            };
            if p.ambient() > 0 {
                local.insert((b, beta), p);
            }
        }
        AjsObject { orbit: Orbit::Walls(s), stalks, local }
    }

    /// `𝒯_out^s`, or its primed variant.
    fn out_impl(&self, n: &AjsObject<F::Elem>, primed: bool) -> AjsObject<F::Elem> {
        let Orbit::Walls(s) = n.orbit else { panic!("out-of-the-wall functor needs an object on walls") };
        let stalks = self.out_stalks(n);
        let mut local = BTreeMap::new();
        let zero = self.lre_zero();
        for (a, beta) in self.local_keys(&stalks) {
            let ab = self.wall_of(&a, s);
            let rk = |f: &Facet| stalks.get(f).copied().unwrap_or(0);
            let up = self.beta_up(&a, beta);
            let (n1, n2) = (rk(&a), rk(&up));
            let mut gens = Vec::new();
            if self.beta_up(&ab, beta) == ab {
                let (am, _) = self.wall_sides(&ab);
                let p = self.pres(n, &ab, beta);
                if a == am {
                    // {(βx + y, y)}, primed {(x + a y, y)}.
                    debug_assert_eq!(self.wall_of(&up, s), ab);
                    let bcoef = self.lre_root(beta);
                    let acoef = self.a_const(&a, beta, s);
                    for gv in &p.gens {
                        let mut v1 = Vec::with_capacity(n1 + n2);
                        let mut v2 = Vec::with_capacity(n1 + n2);
                        if primed {
                            v1.extend(gv.iter().cloned());
                            v1.extend(std::iter::repeat(zero.clone()).take(n2));
                            v2.extend(gv.iter().map(|x| self.mul(&acoef, x)));
                            v2.extend(gv.iter().cloned());
                        } else {
                            v1.extend(gv.iter().map(|x| self.mul(&bcoef, x)));
                            v1.extend(std::iter::repeat(zero.clone()).take(n2));
                            v2.extend(gv.iter().cloned());
                            v2.extend(gv.iter().cloned());
                        }
                        gens.push(v1);
                        gens.push(v2);
                    }
                } else {
                    // β·N(Ā, β) ⊕ N(\overline{β↑A}, β), primed without the β.
                    let c = self.wall_of(&up, s);
                    let q = self.pres(n, &c, beta);
                    let bcoef = self.lre_root(beta);
                    for gv in &p.gens {
                        let mut v: Vec<_> = gv.iter().map(|x| if primed { x.clone() } else { self.mul(&bcoef, x) }).collect();
                        v.extend(std::iter::repeat(zero.clone()).take(n2));
                        gens.push(v);
                    }
                    for gv in &q.gens {
                        let mut v = vec![zero.clone(); n1];
                        v.extend(gv.iter().cloned());
                        gens.push(v);
                    }
                }
            } else {
                debug_assert_eq!(self.wall_of(&up, s), self.beta_up(&ab, beta));
                let p = self.pres(n, &ab, beta);
                let p = if primed { self.scale_block(&p, &self.a_const(&a, beta, s)) } else { p };
                gens = p.gens;
            }
            if n1 + n2 > 0 {
                local.insert((a, beta), Presentation { n1, n2, gens });
            }
        }
        AjsObject { orbit: Orbit::Alcoves, stalks, local }
    }

    pub fn t_on(&self, m: &AjsObject<F::Elem>, s: u8) -> AjsObject<F::Elem> {
        self.on_impl(m, s, false)
    }
    pub fn t_out(&self, n: &AjsObject<F::Elem>) -> AjsObject<F::Elem> {
        self.out_impl(n, false)
    }
    pub fn t_on_prime(&self, m: &AjsObject<F::Elem>, s: u8) -> AjsObject<F::Elem> {
        self.on_impl(m, s, true)
    }
    pub fn t_out_prime(&self, n: &AjsObject<F::Elem>) -> AjsObject<F::Elem> {
        self.out_impl(n, true)
    }
    /// `𝒯^s = 𝒯_out^s ∘ 𝒯_on^s`.
    pub fn t(&self, m: &AjsObject<F::Elem>, s: u8) -> AjsObject<F::Elem> {
        self.t_out(&self.t_on(m, s))
    }
    pub fn t_prime(&self, m: &AjsObject<F::Elem>, s: u8) -> AjsObject<F::Elem> {
        self.t_out_prime(&self.t_on_prime(m, s))
    }

    /// `𝒯^{s_l} ∘ ⋯ ∘ 𝒯^{s_1}(P₀)`.
    pub fn track(&self, word: &Word) -> Result<AjsObject<F::Elem>> {
        self.g.check_word(word)?;
        Ok(word.0.iter().fold(self.p0(), |m, &s| self.t(&m, s)))
    }

    pub fn track_prime(&self, word: &Word) -> Result<AjsObject<F::Elem>> {
        self.g.check_word(word)?;
        Ok(word.0.iter().fold(self.p0(), |m, &s| self.t_prime(&m, s)))
    }

    /// Multiplies the first `n1` coordinates of every generator by `c`.
    pub fn scale_block(&self, p: &Presentation<F::Elem>, c: &LocalRingElem<F::Elem>) -> Presentation<F::Elem> {
        let gens = p.gens.iter().map(|g| g.iter().enumerate().map(|(i, x)| if i < p.n1 { self.mul(c, x) } else { x.clone() }).collect()).collect();
        Presentation { n1: p.n1, n2: p.n2, gens }
    }

    /// `rk M(F)` on the support.
    pub fn rank_vector(&self, m: &AjsObject<F::Elem>) -> BTreeMap<Facet, usize> {
        m.stalks.iter().filter(|(_, &n)| n > 0).map(|(f, &n)| (f.clone(), n)).collect()
    }

    // Constants.

    /// `a_A^β` for the fixed simple reflection `s`.
    pub fn a_const(&self, a: &Facet, beta: usize, s: u8) -> LocalRingElem<F::Elem> {
        let ab = self.wall_of(a, s);
        let alpha = self.g.wall_root(Self::wall_coset(&ab));
        if !self.s_beta_sign_negative(beta, &alpha) {
            return self.lre_one();
        }
        let ai = self.root_index(&alpha).expect("positive root");
        let (am, _) = self.wall_sides(&ab);
        if *a == am {
            self.lre_root_inv(ai)
        } else {
            self.neg(&self.lre_root(ai))
        }
    }

    /// `d_F^β` for an alcove or a wall.
    pub fn d_const(&self, f: &Facet, beta: usize) -> LocalRingElem<F::Elem> {
        match f {
            Facet::Alcove(w) => {
                let up = self.g.beta_up(w, &self.roots[beta]);
                let (qa, qb) = (self.g.alcove_point(w), self.g.alcove_point(&up));
                let mut den = BTreeMap::new();
                for (i, alpha) in self.roots.iter().enumerate() {
                    let lo = self.g.pair(alpha, &qa).floor().to_integer();
                    let hi = self.g.pair(alpha, &qb).floor().to_integer();
                    if hi > lo && self.s_beta_sign_negative(beta, alpha) {
                        den.insert(i, (hi - lo) as u32);
                    }
                }
                LocalRingElem { num: Poly::constant(self.nvars, self.k.one()), den }
            }
            Facet::Wall(b) => {
                let (bm, _) = self.g.wall_sides(b);
                let dm = self.d_const(&Facet::Alcove(bm), beta);
                let alpha = self.g.wall_root(b);
                if self.s_beta_sign_negative(beta, &alpha) {
                    self.mul(&self.lre_root(self.root_index(&alpha).unwrap()), &dm)
                } else {
                    dm
                }
            }
        }
    }

    /// The functor `γ` (or `γ^{-1}`) built from `γ^{β,-}_F = d_F^β`, `γ^{β,+}_F = 1`,
    /// and `γ_B^β = 1` on walls fixed by `β↑`.
    pub fn gamma(&self, m: &AjsObject<F::Elem>, inverse: bool) -> AjsObject<F::Elem> {
        let mut out = m.clone();
        for ((f, beta), p) in out.local.iter_mut() {
            if self.beta_up(f, *beta) == *f {
                continue;
            }
            let d = self.d_const(f, *beta);
            let c = if inverse { self.inv(&d).expect("d is a unit") } else { d };
            *p = self.scale_block(p, &c);
        }
        out
    }

    /// `γ^{s,-1} ∘ 𝒯'_on ∘ γ`.
    pub fn t_on_gamma(&self, m: &AjsObject<F::Elem>, s: u8) -> AjsObject<F::Elem> {
        self.gamma(&self.t_on_prime(&self.gamma(m, false), s), true)
    }

    /// `γ^{-1} ∘ 𝒯'_out ∘ γ^s`.
    pub fn t_out_gamma(&self, n: &AjsObject<F::Elem>) -> AjsObject<F::Elem> {
        self.gamma(&self.t_out_prime(&self.gamma(n, false)), true)
    }

    // Exact comparison of S^β-submodules.

    /// `det` of columns with entries in `S^∅`.
    fn det(&self, cols: &[Vec<LocalRingElem<F::Elem>>]) -> LocalRingElem<F::Elem> {
        let n = cols.len();
        if n == 0 {
            return self.lre_one();
        }
        let mut den = BTreeMap::new();
        let mut mat: Vec<Vec<Poly<F::Elem>>> = vec![Vec::with_capacity(n); n];
        for col in cols {
            let mut l: BTreeMap<usize, u32> = BTreeMap::new();
            for x in col {
                for (&i, &e) in &x.den {
                    let v = l.entry(i).or_insert(0);
                    *v = (*v).max(e);
                }
            }
            for (r, x) in col.iter().enumerate() {
                let mut p = x.num.clone();
                for (&i, &e) in &l {
                    p = p.mul(&self.root_power(i, e - x.den.get(&i).copied().unwrap_or(0)));
                }
                mat[r].push(p);
            }
            for (i, e) in l {
                *den.entry(i).or_insert(0) += e;
            }
        }
        let (_, _, d) = bareiss(mat, &self.k);
        self.reduce(LocalRingElem { num: d, den })
    }

    fn rank(&self, cols: &[Vec<LocalRingElem<F::Elem>>], nrows: usize) -> (usize, Vec<usize>) {
        let mut mat: Vec<Vec<Poly<F::Elem>>> = vec![Vec::with_capacity(cols.len()); nrows];
        for col in cols {
            let mut l: BTreeMap<usize, u32> = BTreeMap::new();
            for x in col {
                for (&i, &e) in &x.den {
                    let v = l.entry(i).or_insert(0);
                    *v = (*v).max(e);
                }
            }
            for (r, x) in col.iter().enumerate() {
                let mut p = x.num.clone();
                for (&i, &e) in &l {
                    p = p.mul(&self.root_power(i, e - x.den.get(&i).copied().unwrap_or(0)));
                }
                mat[r].push(p);
            }
        }
        let (rank, rows, _) = bareiss(mat, &self.k);
        (rank, rows)
    }

    /// Whether `x` lies in the `S^β`-span of the independent columns `ys`;
    /// `None` if `ys` are dependent.
    fn member(&self, ys: &[Vec<LocalRingElem<F::Elem>>], x: &[LocalRingElem<F::Elem>], n: usize, beta: usize) -> Option<bool> {
        let (r, rows) = self.rank(ys, n);
        if r < ys.len() {
            return None;
        }
        let mut ext = ys.to_vec();
        ext.push(x.to_vec());
        if self.rank(&ext, n).0 > r {
            return Some(false);
        }
        if r == 0 {
            return Some(true);
        }
        let sub = |v: &[LocalRingElem<F::Elem>]| rows.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
        let ysub: Vec<_> = ys.iter().map(|c| sub(c)).collect();
        let d = self.det(&ysub);
        let vd = self.valuation(&d, beta).expect("independent columns");
        let (rest, _) = self.strip_roots(&d.num);
        for i in 0..r {
            let mut cols = ysub.clone();
            cols[i] = sub(x);
            let ni = self.det(&cols);
            if ni.num.is_zero() {
                continue;
            }
            if self.valuation(&ni, beta).unwrap() < vd || ni.num.div_exact(&rest).is_none() {
                return Some(false);
            }
        }
        Some(true)
    }

    /// Equality of the `S^β`-spans of two generator lists in the same ambient.
    /// Decided exactly when both lists are linearly independent; otherwise
    /// `Inconclusive`.
    pub fn submodule_equal(&self, x: &Presentation<F::Elem>, y: &Presentation<F::Elem>, beta: usize) -> Verdict {
        let n = x.ambient();
        if n != y.ambient() || x.n1 != y.n1 {
            return Verdict::Unequal;
        }
        let mut undecided = false;
        for (a, b) in [(x, y), (y, x)] {
            for v in &a.gens {
                match self.member(&b.gens, v, n, beta) {
                    Some(false) => return Verdict::Unequal,
                    Some(true) => {}
                    None => undecided = true,
                }
            }
        }
        if undecided {
            Verdict::Inconclusive
        } else {
            Verdict::Equal
        }
    }

    /// Whether the generators span a full-rank module (`rk = n1 + n2`).
    pub fn generically_full(&self, p: &Presentation<F::Elem>) -> bool {
        self.rank(&p.gens, p.ambient()).0 == p.ambient()
    }

    /// Decomposes `M(F, β)` into `V_F`, `V_{β↑F}` and `P` summands. Valid when
    /// `S^β` is a principal ideal domain (rank one); returns `None` when the
    /// presentation is not of that shape. The shape holds exactly when `β`
    /// kills both projections modulo the module, and the number of `P`
    /// summands is then the `β`-adic index of the module in the sum of its
    /// projections.
    pub fn l4_shape(&self, p: &Presentation<F::Elem>, beta: usize) -> Option<L4Shape> {
        let n = p.ambient();
        if p.gens.len() != n || !self.generically_full(p) {
            return None;
        }
        if p.n2 == 0 {
            return Some(L4Shape { v: p.n1, vup: 0, p: 0 });
        }
        let b = self.lre_root(beta);
        let zero = self.lre_zero();
        for g in &p.gens {
            let first: Vec<_> = (0..n).map(|i| if i < p.n1 { self.mul(&b, &g[i]) } else { zero.clone() }).collect();
            let second: Vec<_> = (0..n).map(|i| if i >= p.n1 { self.mul(&b, &g[i]) } else { zero.clone() }).collect();
            for v in [first, second] {
                if self.member(&p.gens, &v, n, beta) != Some(true) {
                    return None;
                }
            }
        }
        let vx = self.valuation(&self.det(&p.gens), beta)?;
        let proj = |lo: usize, hi: usize| -> Option<i64> {
            let cols: Vec<Vec<_>> = p.gens.iter().map(|g| g[lo..hi].to_vec()).collect();
            let k = hi - lo;
            let mut best: Option<i64> = None;
            for subset in subsets(cols.len(), k) {
                let sel: Vec<_> = subset.iter().map(|&i| cols[i].clone()).collect();
                if let Some(v) = self.valuation(&self.det(&sel), beta) {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
            best
        };
        let c = vx - proj(0, p.n1)? - proj(p.n1, n)?;
        if c < 0 || c as usize > p.n1.min(p.n2) {
            return None;
        }
        let c = c as usize;
        Some(L4Shape { v: p.n1 - c, vup: p.n2 - c, p: c })
    }

    /// Facet label for output: alcove words, walls as `word|s`.
    pub fn facet_label(&self, f: &Facet) -> String {
        let w = |x: &AffineWeylElem| {
            let s = self.g.word_string(x);
            if s.is_empty() {
                "e".to_string()
            } else {
                s
            }
        };
        match f {
            Facet::Alcove(x) => w(x),
            Facet::Wall(b) => format!("{}|{}", w(&b.rep), b.s),
        }
    }

    pub fn to_json(&self, m: &AjsObject<F::Elem>) -> AjsJson {
        let ranks = self.rank_vector(m).iter().map(|(f, &n)| (self.facet_label(f), n)).collect();
        let mut shapes = BTreeMap::new();
        if self.nvars == 1 {
            for ((f, beta), p) in &m.local {
                let tag = match self.l4_shape(p, *beta) {
                    Some(s) => format!("V^{} Vup^{} P^{}", s.v, s.vup, s.p),
                    None => "unresolved".into(),
                };
                let r: Vec<String> = self.roots[*beta].simple.iter().map(i64::to_string).collect();
                shapes.insert(format!("{} / a[{}]", self.facet_label(f), r.join(",")), tag);
            }
        }
        AjsJson { orbit: m.orbit, ranks, shapes }
    }
}

/// Output record: rank vector keyed by facet labels, plus summand shapes
/// where they are computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AjsJson {
    pub orbit: Orbit,
    pub ranks: BTreeMap<String, usize>,
    pub shapes: BTreeMap<String, String>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Fraction-free elimination of a polynomial matrix. Returns the rank, the
/// original indices of the pivot rows, and the determinant (zero unless
/// square of full rank).
pub(crate) fn bareiss<F: Field>(mut m: Vec<Vec<Poly<F::Elem>>>, k: &F) -> (usize, Vec<usize>, Poly<F::Elem>) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let nvars = m.first().and_then(|r| r.first()).map_or(1, Poly::nvars);
    let mut perm: Vec<usize> = (0..nrows).collect();
    let mut prev = Poly::constant(nvars, k.one());
    let mut sign = false;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        if p != r {
            m.swap(p, r);
            perm.swap(p, r);
            sign = !sign;
        }
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let t = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][c] = Poly::zero(nvars);
        }
        prev = m[r][c].clone();
        r += 1;
    }
    let det = if nrows == ncols && r == nrows {
        if sign {
            prev.neg()
        } else {
            prev
        }
    } else {
        Poly::zero(nvars)
    };
    let mut rows: Vec<usize> = perm[..r].to_vec();
    rows.sort_unstable();
    (r, rows, det)
}
