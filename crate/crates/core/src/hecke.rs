//! The affine Hecke algebra in the normalized basis `T̃_x = v^{l(x)} T_x`,
//! its Kazhdan-Lusztig basis, the periodic module and the bound `U`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::laurent::LaurentPoly;
use crate::rootsys::is_positive_affine;
use crate::weyl::{AffineWeyl, AffineWeylElem, Order, Word};

/// A finitely supported combination `Σ p_x T̃_x` (or `Σ p_x A_x` in the
/// periodic module, or `Σ p_x W_x` for characters).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeElem {
    terms: HashMap<AffineWeylElem, LaurentPoly>,
}

/// Elements of the periodic module share the representation.
pub type PeriodicElem = HeckeElem;

impl HeckeElem {
    pub fn zero() -> Self {
        Self::default()
    }
    pub fn basis(x: AffineWeylElem) -> Self {
        Self::term(x, LaurentPoly::one())
    }
    pub fn term(x: AffineWeylElem, p: LaurentPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(x, &p);
        e
    }
    pub fn add_term(&mut self, x: AffineWeylElem, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_default();
        *slot = &*slot + p;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, x: &AffineWeylElem) -> LaurentPoly {
        self.terms.get(x).cloned().unwrap_or_default()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&AffineWeylElem, &LaurentPoly)> {
        self.terms.iter()
    }
    pub fn support(&self) -> Vec<AffineWeylElem> {
        self.terms.keys().cloned().collect()
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (x, p) in &o.terms {
            r.add_term(x.clone(), p);
        }
        r
    }
    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (x, p) in &o.terms {
            r.add_term(x.clone(), &-p);
        }
        r
    }
    pub fn scale(&self, p: &LaurentPoly) -> Self {
        let mut r = Self::zero();
        for (x, q) in &self.terms {
            r.add_term(x.clone(), &(q * p));
        }
        r
    }
    /// Coefficients sorted canonically, keyed by reduced words.
    pub fn to_words(&self, g: &AffineWeyl) -> BTreeMap<(usize, Word), LaurentPoly> {
        self.terms.iter().map(|(x, p)| (g.sort_key(x), p.clone())).collect()
    }
    /// Render as `{"word": "poly", ...}` in canonical order.
    pub fn render(&self, g: &AffineWeyl) -> String {
        let parts: Vec<String> = self.to_words(g).into_iter().map(|((_, w), p)| format!("{}: {}", if w.is_empty() { "e".into() } else { w.to_string() }, p)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// The Hecke algebra of an affine Weyl group, with memoized KL elements.
pub struct Hecke {
    g: AffineWeyl,
    kl: RwLock<HashMap<AffineWeylElem, HeckeElem>>,
    dual: RwLock<HashMap<AffineWeylElem, HeckeElem>>,
}

impl Hecke {
    pub fn new(g: AffineWeyl) -> Self {
        Hecke { g, kl: RwLock::new(HashMap::new()), dual: RwLock::new(HashMap::new()) }
    }

    pub fn group(&self) -> &AffineWeyl {
        &self.g
    }

    pub fn one(&self) -> HeckeElem {
        HeckeElem::basis(self.g.identity())
    }

    /// `T_x = v^{-l(x)} T̃_x`.
    pub fn t_standard(&self, x: &AffineWeylElem) -> HeckeElem {
        HeckeElem::term(x.clone(), LaurentPoly::v(-(self.g.length(x) as i32)))
    }

    /// `H̄_s = T̃_s + v T̃_e`.
    pub fn kl_simple(&self, s: u8) -> HeckeElem {
        let mut h = HeckeElem::basis(self.g.gen(s).clone());
        h.add_term(self.g.identity(), &LaurentPoly::v(1));
        h
    }

    /// `a · H̄_s`.
    pub fn mul_kl_simple(&self, a: &HeckeElem, s: u8) -> HeckeElem {
        let gs = self.g.gen(s);
        let mut r = HeckeElem::zero();
        for (y, p) in a.terms() {
            let ys = y.mul(gs);
            let up = self.g.length(&ys) > self.g.length(y);
            r.add_term(ys, p);
            r.add_term(y.clone(), &p.shift(if up { 1 } else { -1 }));
        }
        r
    }

    /// `a · T̃_s = a · H̄_s - v a`.
    pub fn mul_t_simple(&self, a: &HeckeElem, s: u8) -> HeckeElem {
        self.mul_kl_simple(a, s).sub(&a.scale(&LaurentPoly::v(1)))
    }

    pub fn mul(&self, a: &HeckeElem, b: &HeckeElem) -> HeckeElem {
        let mut r = HeckeElem::zero();
        for (y, p) in b.terms() {
            let word = self.g.reduced_word(y);
            let mut acc = a.scale(p);
            for &s in &word.0 {
                acc = self.mul_t_simple(&acc, s);
            }
            r = r.add(&acc);
        }
        r
    }

    /// `d(T̃_x)`: product of `d(T̃_s) = T̃_s + (v - v^{-1})` over a reduced word.
    fn dual_basis(&self, x: &AffineWeylElem) -> HeckeElem {
        if let Some(h) = self.dual.read().expect("cache lock").get(x) {
            return h.clone();
        }
        let word = self.g.reduced_word(x);
        let h = match word.0.split_last() {
            None => self.one(),
            Some((&s, rest)) => {
                let prev = self.dual_basis(&self.g.from_word(&Word(rest.to_vec())));
                let corr = LaurentPoly::from_pairs([(1, 1), (-1, -1)]);
                self.mul_t_simple(&prev, s).add(&prev.scale(&corr))
            }
        };
        self.dual.write().expect("cache lock").insert(x.clone(), h.clone());
        h
    }

    /// The bar involution: semilinear for `v ↦ v^{-1}`, `T_x ↦ T_{x^{-1}}^{-1}`.
    pub fn duality(&self, a: &HeckeElem) -> HeckeElem {
        let mut r = HeckeElem::zero();
        for (x, p) in a.terms() {
            r = r.add(&self.dual_basis(x).scale(&p.bar()));
        }
        r
    }

    /// The self-dual KL element `H̄_x`.
    pub fn kl_element(&self, x: &AffineWeylElem) -> HeckeElem {
        if let Some(h) = self.kl.read().expect("cache lock").get(x) {
            return h.clone();
        }
        let l = self.g.length(x);
        let h = if l == 0 {
            self.one()
        } else {
            let s = (0..self.g.num_gens() as u8).find(|&s| self.g.is_right_descent(x, s)).expect("descent exists");
            let xs = x.mul(self.g.gen(s));
            let prev = self.kl_element(&xs);
            let mut h = self.mul_kl_simple(&prev, s);
            let mut lower: Vec<(AffineWeylElem, i64)> = prev
                .terms()
                .filter(|(z, p)| *z != &xs && p.coeff(1) != 0 && self.g.is_right_descent(z, s))
                .map(|(z, p)| (z.clone(), p.coeff(1)))
                .collect();
            lower.sort_by_cached_key(|(z, _)| self.g.sort_key(z));
            for (z, mu) in lower {
                h = h.sub(&self.kl_element(&z).scale(&LaurentPoly::monomial(0, mu)));
            }
            h
        };
        self.kl.write().expect("cache lock").insert(x.clone(), h.clone());
        h
    }

    /// `h_{y,x}`, the coefficient of `T̃_y` in `H̄_x`.
    pub fn kl_poly(&self, y: &AffineWeylElem, x: &AffineWeylElem) -> LaurentPoly {
        self.kl_element(x).coeff(y)
    }

    /// `H̄_{s_1} ⋯ H̄_{s_l}`.
    pub fn bott_samelson(&self, word: &Word) -> HeckeElem {
        word.0.iter().fold(self.one(), |acc, &s| self.mul_kl_simple(&acc, s))
    }

    /// `ρ_{s,⊴}(W_x)`.
    pub fn rho_action(&self, x: &AffineWeylElem, s: u8, order: Order) -> HeckeElem {
        let xs = x.mul(self.g.gen(s));
        let up = match order {
            Order::Bruhat => self.g.length(&xs) > self.g.length(x),
            Order::Generic => self.g.delta_length(&xs) > self.g.delta_length(x),
        };
        let mut r = HeckeElem::basis(xs);
        r.add_term(x.clone(), &LaurentPoly::v(if up { 1 } else { -1 }));
        r
    }

    /// `ρ_{s,⊴}` extended linearly.
    pub fn rho(&self, m: &HeckeElem, s: u8, order: Order) -> HeckeElem {
        let mut r = HeckeElem::zero();
        for (x, p) in m.terms() {
            r = r.add(&self.rho_action(x, s, order).scale(p));
        }
        r
    }

    /// The right action on the periodic module: `H̄_s` acts by `ρ_{s,⪰}`,
    /// `T̃_s` by `ρ_{s,⪰} - v`.
    pub fn periodic_act(&self, m: &PeriodicElem, h: &HeckeElem) -> PeriodicElem {
        let mut r = PeriodicElem::zero();
        for (y, p) in h.terms() {
            let mut acc = m.scale(p);
            for &s in &self.g.reduced_word(y).0 {
                acc = self.rho(&acc, s, Order::Generic).sub(&acc.scale(&LaurentPoly::v(1)));
            }
            r = r.add(&acc);
        }
        r
    }

    /// `(r, d, N, l)` for the bound `U` of a word.
    pub fn bound_components(&self, word: &Word) -> BoundComponents {
        let bs = self.bott_samelson(word);
        let r = bs.terms().map(|(_, a)| a.eval_one()).max().unwrap_or(1);
        let d = bs.terms().map(|(_, a)| a.derivative_at_one()).max().unwrap_or(0);
        let n = self.label_height_bound(word);
        BoundComponents { r: r as u64, d: d as u64, n: n as u64, l: word.len() as u64 }
    }

    /// Largest height of a label on the full subgraph spanned by everything
    /// below some subword product.
    fn label_height_bound(&self, word: &Word) -> i64 {
        let mut products: HashSet<AffineWeylElem> = HashSet::from([self.g.identity()]);
        for &s in &word.0 {
            let ext: Vec<_> = products.iter().map(|x| x.mul(self.g.gen(s))).collect();
            products.extend(ext);
        }
        let verts = self.g.ideal_union(&products.into_iter().collect::<Vec<_>>());
        let rd = self.g.root_datum();
        let mut best = 0;
        for (i, x) in verts.iter().enumerate() {
            for y in &verts[i + 1..] {
                if let Some(lab) = self.g.reflection_of_edge(x, y) {
                    debug_assert!(is_positive_affine(&lab));
                    best = best.max(lab.height(rd));
                }
            }
        }
        best
    }

    pub fn bound_u(&self, word: &Word) -> BigUint {
        if word.is_empty() {
            return BigUint::one();
        }
        self.bound_components(word).u()
    }

    /// Minimum of `U` over the reduced words of `w`; `1` for the identity.
    pub fn bound_u_min(&self, w: &AffineWeylElem) -> BigUint {
        self.g.reduced_words(w).iter().map(|s| self.bound_u(s)).min().unwrap_or_else(BigUint::one)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BoundComponents {
    pub r: u64,
    pub d: u64,
    pub n: u64,
    pub l: u64,
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

impl BoundComponents {
    /// `r! (r! (r-1)! N^{l+2d})^r`.
    pub fn u(&self) -> BigUint {
        let inner = factorial(self.r) * factorial(self.r.saturating_sub(1)) * BigUint::from(self.n).pow((self.l + 2 * self.d) as u32);
        factorial(self.r) * inner.pow(self.r as u32)
    }
}
