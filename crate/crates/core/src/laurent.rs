//! Laurent polynomials in `v` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Sparse map exponent -> coefficient; zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }
    /// `c v^e`.
    pub fn monomial(e: i32, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }
    /// `v^e`.
    pub fn v(e: i32) -> Self {
        Self::monomial(e, 1)
    }
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: i32, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, e: i32) -> i64 {
        self.terms.get(&e).copied().unwrap_or(0)
    }
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }
    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }
    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// The ring involution `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        Self::from_pairs(self.terms().map(|(e, c)| (-e, c)))
    }
    /// Multiply by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self::from_pairs(self.terms().map(|(e, c)| (e + k, c)))
    }
    pub fn scale(&self, k: i64) -> Self {
        Self::from_pairs(self.terms().map(|(e, c)| (e, c * k)))
    }
    /// Value at `v = 1`.
    pub fn eval_one(&self) -> i64 {
        self.terms.values().sum()
    }
    /// Derivative evaluated at `v = 1`.
    pub fn derivative_at_one(&self) -> i64 {
        self.terms().map(|(e, c)| e as i64 * c).sum()
    }
    /// Terms of strictly positive degree.
    pub fn positive_part(&self) -> Self {
        Self::from_pairs(self.terms().filter(|&(e, _)| e > 0))
    }
    pub fn to_pairs(&self) -> Vec<(i32, i64)> {
        self.terms().collect()
    }

    /// Parse the output of `Display`, e.g. `"v^3 - 2v + 1 + v^-1"`.
    pub fn parse(s: &str) -> Result<Self, crate::Error> {
        let bad = |why: &str| crate::Error::Parse { input: s.to_string(), reason: why.to_string() };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = 1;
            if let Some(r) = rest.strip_prefix('+') {
                if first {
                    return Err(bad("leading '+'"));
                }
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r;
            } else if !first {
                return Err(bad("expected '+' or '-'"));
            }
            first = false;
            let end = rest[1..].find(['+', '-']).map(|i| i + 1).unwrap_or(rest.len());
            // A '-' right after '^' belongs to the exponent.
            let end = {
                let mut e = end;
                while e < rest.len() && rest.as_bytes()[e - 1] == b'^' {
                    e = rest[e + 1..].find(['+', '-']).map(|i| i + e + 1).unwrap_or(rest.len());
                }
                e
            };
            let term = &rest[..end];
            rest = &rest[end..];
            let (c, e) = match term.find('v') {
                None => (term.parse::<i64>().map_err(|_| bad("bad constant"))?, 0),
                Some(i) => {
                    let c = if i == 0 { 1 } else { term[..i].parse::<i64>().map_err(|_| bad("bad coefficient"))? };
                    let tail = &term[i + 1..];
                    let e = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^').ok_or_else(|| bad("expected '^'"))?.parse::<i32>().map_err(|_| bad("bad exponent"))?
                    };
                    (c, e)
                }
            };
            p.add_term(e, sign * c);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let mag = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "v")?,
                (1, m) => write!(f, "{m}v")?,
                (e, 1) => write!(f, "v^{e}")?,
                (e, m) => write!(f, "{m}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(i32, i64)>::deserialize(d)?;
        Ok(Self::from_pairs(pairs))
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, c);
        }
        r
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, -c);
        }
        r
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_descends() {
        let p = LaurentPoly::from_pairs([(3, 1), (1, -2), (0, 1), (-1, 1)]);
        assert_eq!(p.to_string(), "v^3 - 2v + 1 + v^-1");
        assert_eq!(LaurentPoly::parse(&p.to_string()).unwrap(), p);
        assert_eq!(LaurentPoly::v(3).to_string(), "v^3");
        assert_eq!(LaurentPoly::monomial(-2, -3).to_string(), "-3v^-2");
        assert_eq!(LaurentPoly::parse("-3v^-2").unwrap(), LaurentPoly::monomial(-2, -3));
    }

    #[test]
    fn bar_is_involution() {
        let p = LaurentPoly::from_pairs([(2, 5), (-1, 3)]);
        assert_eq!(p.bar().bar(), p);
        assert_eq!(p.eval_one(), 8);
        assert_eq!(p.derivative_at_one(), 7);
    }
}
