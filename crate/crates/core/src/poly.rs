//! Sparse multivariate polynomials over an exact field.
//!
//! Variables are indexed `0..nvars`; in the symmetric algebra of the affine
//! weight lattice they are the fundamental weights followed by `δ`. Every
//! variable has cohomological degree 2, so a polynomial of total degree `m`
//! sits in degree `2m`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::field::{Field, Scalar};

/// Exponent vector. Derived `Ord` is lexicographic with variable 0 most significant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mono(pub Vec<u16>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Mono(e)
    }
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }
    pub fn mul(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        let mut e = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            if a < b {
                return None;
            }
            e.push(a - b);
        }
        Some(Mono(e))
    }
}

/// All monomials of total degree `d` in `nvars` variables, skipping variable
/// `skip` if given. Order is descending lexicographic and deterministic.
pub fn monomials(nvars: usize, d: usize, skip: Option<usize>) -> Vec<Mono> {
    fn rec(i: usize, left: usize, cur: &mut Vec<u16>, skip: Option<usize>, out: &mut Vec<Mono>) {
        let n = cur.len();
        if i + 1 == n {
            if Some(i) == skip {
                if left == 0 {
                    out.push(Mono(cur.clone()));
                }
            } else {
                cur[i] = left as u16;
                out.push(Mono(cur.clone()));
                cur[i] = 0;
            }
            return;
        }
        if Some(i) == skip {
            rec(i + 1, left, cur, skip, out);
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            rec(i + 1, left - e, cur, skip, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Mono(vec![]));
        }
        return out;
    }
    let mut cur = vec![0u16; nvars];
    rec(0, d, &mut cur, skip, &mut out);
    out
}

/// Number of monomials of degree `d` in `n` variables.
pub fn count_monomials(n: usize, d: usize) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    // C(d + n - 1, n - 1)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..(n - 1) {
        num *= (d + n - 1 - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<E> {
    nvars: usize,
    terms: BTreeMap<Mono, E>,
}

impl<E: Scalar> Poly<E> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: E) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono::one(nvars), c);
        }
        p
    }

    pub fn monomial(m: Mono, c: E) -> Self {
        let mut p = Self::zero(m.0.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// `Σ c_i X_i`.
    pub fn linear(coeffs: &[E]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Mono::var(n, i), c.clone());
            }
        }
        p
    }

    /// Linear form with integer coefficients mapped into the field.
    pub fn linear_int<F: Field<Elem = E>>(k: &F, coeffs: &[i64]) -> Self {
        let c: Vec<E> = coeffs.iter().map(|&a| k.from_i64(a)).collect();
        Self::linear(&c)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &E)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&E> {
        self.terms.get(m)
    }

    /// Maximal total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(Mono::degree).max()
    }

    /// Total degree if all terms share it.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Mono::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn add_term(&mut self, m: Mono, c: E) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let s = x.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, c: &E) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn mul_mono(&self, m: &Mono, c: &E) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, x)| (a.mul(m), x.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32, one: &E) -> Self {
        let mut acc = Self::constant(self.nvars, one.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading term in lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &E)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        let (lm, lc) = g.leading()?;
        let lc_inv = lc.inv()?;
        let mut r = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((m, c)) = r.leading() {
            let t = m.div(lm)?;
            let f = c.clone() * lc_inv.clone();
            r = r.sub(&g.mul_mono(&t, &f));
            q.add_term(t, f);
        }
        Some(q)
    }

    /// Replace variable `j` by the polynomial `sub` (which must not involve `j`).
    pub fn substitute(&self, j: usize, sub: &Self, one: &E) -> Self {
        let mut powers: Vec<Self> = vec![Self::constant(self.nvars, one.clone())];
        let mut r = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[j] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(sub);
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[j] = 0;
            r = r.add(&powers[e].mul_mono(&rest, c));
        }
        r
    }

    pub fn eval(&self, point: &[E], zero: &E, one: &E) -> E {
        let mut acc = zero.clone();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t * point[i].clone();
                }
            }
            acc = acc + t;
        }
        let _ = one;
        acc
    }

    /// Render with the given variable names, highest lex term first.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let neg = cs.starts_with('-');
            let mag = cs.trim_start_matches('-');
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let is_const = m.degree() == 0;
            if mag != "1" || is_const {
                s.push_str(mag);
                if !is_const {
                    s.push('*');
                }
            }
            let mut first = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    s.push('*');
                }
                first = false;
                s.push_str(&names[i]);
                if e > 1 {
                    let _ = write!(s, "^{e}");
                }
            }
        }
        s
    }
}

/// A linear form prepared for reduction modulo itself: variable `elim` is
/// eliminated via `X_elim = -(Σ_{i≠elim} c_i X_i) / c_elim`.
#[derive(Clone, Debug)]
pub struct Eliminator<E> {
    pub elim: usize,
    pub form: Poly<E>,
    sub: Poly<E>,
    one: E,
}

impl<E: Scalar> Eliminator<E> {
    /// `None` if the form vanishes in the field.
    pub fn new<F: Field<Elem = E>>(k: &F, coeffs: &[i64]) -> Option<Self> {
        let c: Vec<E> = coeffs.iter().map(|&a| k.from_i64(a)).collect();
        let elim = (0..c.len()).rev().find(|&i| !c[i].is_zero())?;
        let inv = c[elim].inv()?;
        let mut sub = Poly::zero(c.len());
        for (i, ci) in c.iter().enumerate() {
            if i != elim && !ci.is_zero() {
                sub.add_term(Mono::var(c.len(), i), -(ci.clone() * inv.clone()));
            }
        }
        Some(Eliminator { elim, form: Poly::linear(&c), sub, one: k.one() })
    }

    /// Normal form modulo the linear form: a polynomial free of `elim`.
    pub fn reduce(&self, p: &Poly<E>) -> Poly<E> {
        if p.terms.keys().all(|m| m.0[self.elim] == 0) {
            return p.clone();
        }
        p.substitute(self.elim, &self.sub, &self.one)
    }

    /// Exact quotient by the linear form, if divisible.
    pub fn divide(&self, p: &Poly<E>) -> Option<Poly<E>> {
        if !self.reduce(p).is_zero() {
            return None;
        }
        // Synthetic division with respect to the eliminated variable.
        let j = self.elim;
        let cj = self.form.terms.get(&Mono::var(p.nvars, j)).cloned()?;
        let cj_inv = cj.inv()?;
        let mut r = p.clone();
        let mut q = Poly::zero(p.nvars);
        loop {
            let top = r.terms.iter().filter(|(m, _)| m.0[j] > 0).max_by_key(|(m, _)| m.0[j]).map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = top else { break };
            let mut t = m;
            t.0[j] -= 1;
            let f = c * cj_inv.clone();
            r = r.sub(&self.form.mul_mono(&t, &f));
            q.add_term(t, f);
        }
        r.is_zero().then_some(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn monomial_counts_match_enumeration() {
        for n in 1..5 {
            for d in 0..6 {
                assert_eq!(monomials(n, d, None).len(), count_monomials(n, d));
                if n > 1 {
                    assert_eq!(monomials(n, d, Some(n - 1)).len(), count_monomials(n - 1, d));
                }
            }
        }
    }

    #[test]
    fn exact_division() {
        let k = Rationals;
        let x = Poly::linear_int(&k, &[1, 0]);
        let y = Poly::linear_int(&k, &[0, 1]);
        let f = x.add(&y).mul(&x.sub(&y));
        assert_eq!(f.div_exact(&x.add(&y)).unwrap(), x.sub(&y));
        assert!(f.div_exact(&x).is_none());
    }

    #[test]
    fn eliminator_reduces_and_divides() {
        let k = PrimeField::new(5).unwrap();
        let e = Eliminator::new(&k, &[2, 1]).unwrap();
        assert_eq!(e.elim, 1);
        let f = e.form.mul(&Poly::linear_int(&k, &[1, 3]));
        assert!(e.reduce(&f).is_zero());
        assert_eq!(e.divide(&f).unwrap(), Poly::linear_int(&k, &[1, 3]));
        assert!(e.divide(&Poly::linear_int(&k, &[1, 0])).is_none());
    }
}
