//! Finite root data, affine weights and affine roots.
//!
//! Weights are written in the fundamental-weight basis, roots additionally in
//! the simple-root basis, coroots in the simple-coroot basis. The affine
//! weight lattice appends the coordinate of `δ`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

/// A finite root, with all the coordinates we need.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    /// Coefficients in the simple roots.
    pub simple: Vec<i64>,
    /// Coordinates in the fundamental weights.
    pub weight: Vec<i64>,
    /// The coroot in simple-coroot coefficients.
    pub coroot: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple.iter().sum()
    }
    pub fn is_positive(&self) -> bool {
        self.simple.iter().all(|&c| c >= 0)
    }
    pub fn neg(&self) -> Root {
        let n = |v: &Vec<i64>| v.iter().map(|a| -a).collect();
        Root { simple: n(&self.simple), weight: n(&self.weight), coroot: n(&self.coroot) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    kind: char,
    rank: usize,
    /// `cartan[i][j] = <α_i, α_j^∨>`.
    cartan: Vec<Vec<i64>>,
    /// Positive roots sorted by height, then by simple coordinates.
    positive: Vec<Root>,
    highest: usize,
}

impl RootDatum {
    /// Builds the datum for labels like `A2`, `B2`, `G2`; a trailing `~`
    /// (affine notation) is accepted and ignored.
    pub fn new(label: &str) -> Result<Self, Error> {
        let unknown = || Error::UnknownType(label.to_string());
        let s = label.trim().trim_end_matches('~');
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let rank: usize = chars.as_str().parse().map_err(|_| unknown())?;
        let cartan = cartan_matrix(kind, rank).ok_or_else(unknown)?;
        Ok(Self::from_cartan(kind, cartan))
    }

    fn from_cartan(kind: char, cartan: Vec<Vec<i64>>) -> Self {
        let r = cartan.len();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        let mut positive = Vec::new();
        for i in 0..r {
            let mut simple = vec![0; r];
            simple[i] = 1;
            let mut coroot = vec![0; r];
            coroot[i] = 1;
            queue.push_back((simple, coroot));
        }
        while let Some((simple, coroot)) = queue.pop_front() {
            if !seen.insert(simple.clone()) {
                continue;
            }
            for i in 0..r {
                // s_i β = β - <β, α_i^∨> α_i ;  s_i β^∨ = β^∨ - <α_i, β^∨> α_i^∨
                let pair: i64 = (0..r).map(|j| simple[j] * cartan[j][i]).sum();
                let copair: i64 = (0..r).map(|j| coroot[j] * cartan[i][j]).sum();
                let mut s2 = simple.clone();
                s2[i] -= pair;
                let mut c2 = coroot.clone();
                c2[i] -= copair;
                if s2.iter().all(|&c| c >= 0) && s2.iter().any(|&c| c > 0) && !seen.contains(&s2) {
                    queue.push_back((s2, c2));
                }
            }
            let weight = (0..r).map(|j| (0..r).map(|i| simple[i] * cartan[i][j]).sum()).collect();
            positive.push(Root { simple, weight, coroot });
        }
        positive.sort_by_key(|r| (r.height(), std::cmp::Reverse(r.simple.clone())));
        let highest = positive.len() - 1;
        RootDatum { kind, rank: r, cartan, positive, highest }
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }
    pub fn simple_root(&self, i: usize) -> &Root {
        self.positive.iter().find(|r| r.height() == 1 && r.simple[i] == 1).expect("simple root present")
    }
    pub fn highest_root(&self) -> &Root {
        &self.positive[self.highest]
    }
    pub fn coxeter_number(&self) -> i64 {
        self.highest_root().height() + 1
    }
    /// Index of a positive root given by simple coordinates.
    pub fn root_index(&self, simple: &[i64]) -> Option<usize> {
        self.positive.iter().position(|r| r.simple == simple)
    }
    /// The root (positive or negative) with the given simple coordinates.
    pub fn root(&self, simple: &[i64]) -> Option<Root> {
        if let Some(i) = self.root_index(simple) {
            return Some(self.positive[i].clone());
        }
        let neg: Vec<i64> = simple.iter().map(|a| -a).collect();
        self.root_index(&neg).map(|i| self.positive[i].neg())
    }
    /// `<λ, β^∨>` for `λ` in weight coordinates.
    pub fn pair(&self, weight: &[i64], root: &Root) -> i64 {
        weight.iter().zip(&root.coroot).map(|(a, b)| a * b).sum()
    }
    /// Weight coordinates of the root with the given simple coordinates.
    pub fn simple_to_weight(&self, simple: &[i64]) -> Vec<i64> {
        (0..self.rank).map(|j| (0..self.rank).map(|i| simple[i] * self.cartan[i][j]).sum()).collect()
    }
    /// `2ρ` in weight coordinates.
    pub fn two_rho(&self) -> Vec<i64> {
        vec![2; self.rank]
    }
    /// Number of variables of the affine symmetric algebra (weights plus `δ`).
    pub fn affine_nvars(&self) -> usize {
        self.rank + 1
    }
    /// Variable names: `w1..wr` for fundamental weights and `d` for `δ`.
    pub fn var_names(&self) -> Vec<String> {
        let mut v: Vec<String> = (1..=self.rank).map(|i| format!("w{i}")).collect();
        v.push("d".into());
        v
    }
}

fn cartan_matrix(kind: char, n: usize) -> Option<Vec<Vec<i64>>> {
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    // `link(i, j, a, b)`: <α_i, α_j^∨> = a and <α_j, α_i^∨> = b (zero-based).
    let mut link = |i: usize, j: usize, a: i64, b: i64| {
        c[i][j] = a;
        c[j][i] = b;
    };
    match (kind, n) {
        ('A', n) if n >= 1 => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
        ('B', n) if n >= 2 => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -2, -1);
        }
        ('C', n) if n >= 2 => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -1, -2);
        }
        ('D', n) if n >= 4 => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 3, n - 1, -1, -1);
        }
        ('E', n) if (6..=8).contains(&n) => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
        }
        ('F', 4) => {
            link(0, 1, -1, -1);
            link(1, 2, -2, -1);
            link(2, 3, -1, -1);
        }
        ('G', 2) => link(0, 1, -1, -3),
        _ => return None,
    }
    Some(c)
}

/// An element of the affine weight lattice: weight coordinates plus a `δ`
/// coefficient. Nonzero elements have cohomological degree 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineWeight {
    pub x: Vec<i64>,
    pub delta: i64,
}

impl AffineWeight {
    pub fn new(x: Vec<i64>, delta: i64) -> Self {
        AffineWeight { x, delta }
    }
    pub fn zero(rank: usize) -> Self {
        AffineWeight { x: vec![0; rank], delta: 0 }
    }
    pub fn delta(rank: usize) -> Self {
        AffineWeight { x: vec![0; rank], delta: 1 }
    }
    pub fn is_zero(&self) -> bool {
        self.delta == 0 && self.x.iter().all(|&a| a == 0)
    }
    pub fn add(&self, o: &Self) -> Self {
        AffineWeight { x: self.x.iter().zip(&o.x).map(|(a, b)| a + b).collect(), delta: self.delta + o.delta }
    }
    pub fn scale(&self, k: i64) -> Self {
        AffineWeight { x: self.x.iter().map(|a| a * k).collect(), delta: self.delta * k }
    }
    pub fn neg(&self) -> Self {
        self.scale(-1)
    }
    /// Linear-form coefficients over the variables `(ϖ_1, .., ϖ_r, δ)`.
    pub fn coords(&self) -> Vec<i64> {
        let mut v = self.x.clone();
        v.push(self.delta);
        v
    }
}

/// The affine root `α_n = (α, 0) - nδ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineRoot {
    pub alpha: Root,
    pub n: i64,
}

impl AffineRoot {
    pub fn new(alpha: Root, n: i64) -> Self {
        AffineRoot { alpha, n }
    }
    pub fn value(&self) -> AffineWeight {
        AffineWeight { x: self.alpha.weight.clone(), delta: -self.n }
    }
    pub fn neg(&self) -> Self {
        AffineRoot { alpha: self.alpha.neg(), n: -self.n }
    }
    /// Coefficient `m` of `δ` when written as `α + mδ`.
    pub fn delta_coeff(&self) -> i64 {
        -self.n
    }
    /// Height in the simple affine roots, for positive affine roots.
    pub fn height(&self, rd: &RootDatum) -> i64 {
        self.delta_coeff() * rd.coxeter_number() + self.alpha.height()
    }
}

impl fmt::Display for AffineRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.delta_coeff();
        let mut out = String::new();
        match m {
            0 => {}
            1 => out.push('δ'),
            -1 => out.push_str("-δ"),
            m => out.push_str(&format!("{m}δ")),
        }
        for (i, &c) in self.alpha.simple.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                out.push_str(&format!("{sign}α{}", i + 1));
            } else {
                out.push_str(&format!("{sign}{mag}α{}", i + 1));
            }
        }
        write!(f, "{out}")
    }
}

/// Whether `ar` lies in `{α + mδ : m > 0} ∪ R⁺`.
pub fn is_positive_affine(ar: &AffineRoot) -> bool {
    let m = ar.delta_coeff();
    m > 0 || (m == 0 && ar.alpha.is_positive())
}

/// The unique element of `{ar, -ar}` that is a positive affine root.
pub fn normalize_label(ar: &AffineRoot) -> Result<AffineRoot, Error> {
    if ar.alpha.simple.iter().all(|&c| c == 0) {
        return Err(Error::ZeroRoot);
    }
    Ok(if is_positive_affine(ar) { ar.clone() } else { ar.neg() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_coxeter_numbers() {
        for (l, n, h) in [("A1", 1, 2), ("A2", 3, 3), ("B2", 4, 4), ("G2", 6, 6), ("A3", 6, 4), ("D4", 12, 6), ("F4", 24, 12), ("E6", 36, 12), ("E8", 120, 30)] {
            let rd = RootDatum::new(l).unwrap();
            assert_eq!(rd.positive_roots().len(), n, "{l}");
            assert_eq!(rd.coxeter_number(), h, "{l}");
        }
        assert!(RootDatum::new("X3").is_err());
        assert!(RootDatum::new("D3").is_err());
    }

    #[test]
    fn label_normalization() {
        let rd = RootDatum::new("A1~").unwrap();
        let a = rd.simple_root(0).clone();
        let lowered = AffineRoot::new(a.clone(), 1);
        assert!(!is_positive_affine(&lowered));
        let up = normalize_label(&lowered).unwrap();
        assert_eq!(up, AffineRoot::new(a.neg(), -1));
        assert_eq!(up.to_string(), "δ-α1");
        assert_eq!(up.height(&rd), 1);
        assert_eq!(normalize_label(&AffineRoot::new(a.neg(), 0)).unwrap().alpha, a);
    }
}
