//! The affine Weyl group, its alcove geometry and its two partial orders.
//!
//! Points of `V*` are written in simple-coroot coordinates, so that pairing a
//! weight (fundamental-weight coordinates) with a point is a dot product. An
//! element acts as `v ↦ M v + t` with `M` an integer matrix and `t` in the
//! coroot lattice.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rootsys::{normalize_label, AffineRoot, AffineWeight, Root, RootDatum};
use crate::Error;

/// Which partial order a construction refers to. `Generic` is the order `⪯`
/// generated by `w ⪯ s_{α,n} w` whenever `A_w` lies below `H_{α,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Order {
    Bruhat,
    Generic,
}

/// A word in the simple affine reflections; letter 0 is `s_{γ,1}`, letters
/// `1..=r` are the finite simple reflections.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&c| c < 10) {
            for c in &self.0 {
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for Word {
    type Err = Error;
    /// Accepts `"010"`, `"0,1,0"`, `"(0,1,0)"`, `""` and `"e"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |why: &str| Error::Parse { input: s.to_string(), reason: why.to_string() };
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() || t == "e" {
            return Ok(Word::empty());
        }
        if t.contains(',') {
            t.split(',')
                .map(|p| p.trim().parse::<u8>().map_err(|_| bad("letters must be integers")))
                .collect::<Result<Vec<_>, _>>()
                .map(Word)
        } else {
            t.chars().map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| bad("letters must be digits"))).collect::<Result<Vec<_>, _>>().map(Word)
        }
    }
}

/// `v ↦ M v + t`. Equality and hashing use `(M, t)` only.
#[derive(Clone, Debug)]
pub struct AffineWeylElem {
    r: usize,
    m: Vec<i64>,
    minv: Vec<i64>,
    t: Vec<i64>,
}

impl PartialEq for AffineWeylElem {
    fn eq(&self, o: &Self) -> bool {
        self.m == o.m && self.t == o.t
    }
}
impl Eq for AffineWeylElem {}
impl Hash for AffineWeylElem {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.m.hash(h);
        self.t.hash(h);
    }
}
impl PartialOrd for AffineWeylElem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for AffineWeylElem {
    fn cmp(&self, o: &Self) -> Ordering {
        (&self.m, &self.t).cmp(&(&o.m, &o.t))
    }
}

fn matmul(r: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut c = vec![0; r * r];
    for i in 0..r {
        for k in 0..r {
            let x = a[i * r + k];
            if x != 0 {
                for j in 0..r {
                    c[i * r + j] += x * b[k * r + j];
                }
            }
        }
    }
    c
}

fn matvec(r: usize, a: &[i64], v: &[i64]) -> Vec<i64> {
    (0..r).map(|i| (0..r).map(|j| a[i * r + j] * v[j]).sum()).collect()
}

impl AffineWeylElem {
    pub fn identity(r: usize) -> Self {
        let mut m = vec![0; r * r];
        for i in 0..r {
            m[i * r + i] = 1;
        }
        AffineWeylElem { r, minv: m.clone(), m, t: vec![0; r] }
    }

    /// `s_{α,n}`, the reflection in `H_{α,n} = {⟨α, v⟩ = n}`.
    pub fn reflection(alpha: &Root, n: i64) -> Self {
        let r = alpha.weight.len();
        let mut m = vec![0; r * r];
        for i in 0..r {
            for j in 0..r {
                m[i * r + j] = i64::from(i == j) - alpha.coroot[i] * alpha.weight[j];
            }
        }
        let t = alpha.coroot.iter().map(|c| c * n).collect();
        AffineWeylElem { r, minv: m.clone(), m, t }
    }

    /// Translation by `μ` in simple-coroot coordinates.
    pub fn translation(mu: &[i64]) -> Self {
        let mut e = Self::identity(mu.len());
        e.t = mu.to_vec();
        e
    }

    pub fn rank(&self) -> usize {
        self.r
    }
    pub fn matrix(&self) -> &[i64] {
        &self.m
    }
    pub fn translation_part(&self) -> &[i64] {
        &self.t
    }
    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.r)
    }
    /// The image in the finite Weyl group.
    pub fn finite_part(&self) -> Self {
        AffineWeylElem { r: self.r, m: self.m.clone(), minv: self.minv.clone(), t: vec![0; self.r] }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = self.r;
        let mv = matvec(r, &self.m, &o.t);
        AffineWeylElem {
            r,
            m: matmul(r, &self.m, &o.m),
            minv: matmul(r, &o.minv, &self.minv),
            t: mv.iter().zip(&self.t).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let r = self.r;
        let t = matvec(r, &self.minv, &self.t).into_iter().map(|a| -a).collect();
        AffineWeylElem { r, m: self.minv.clone(), minv: self.m.clone(), t }
    }

    /// Action on a point of `V*`.
    pub fn apply(&self, p: &[Rational64]) -> Vec<Rational64> {
        let r = self.r;
        (0..r)
            .map(|i| {
                let mut acc = Rational64::from_integer(self.t[i]);
                for j in 0..r {
                    acc += p[j] * self.m[i * r + j];
                }
                acc
            })
            .collect()
    }

    /// The dual action on affine weights: `(λ, ν) ↦ (M^{-T} λ, ν - ⟨λ, M^{-1} t⟩)`.
    pub fn act_dual(&self, w: &AffineWeight) -> AffineWeight {
        let r = self.r;
        let x: Vec<i64> = (0..r).map(|i| (0..r).map(|j| self.minv[j * r + i] * w.x[j]).sum()).collect();
        let mt = matvec(r, &self.minv, &self.t);
        let shift: i64 = w.x.iter().zip(&mt).map(|(a, b)| a * b).sum();
        AffineWeight { x, delta: w.delta - shift }
    }

    /// Action of the finite part on a root.
    pub fn act_root(&self, rd: &RootDatum, root: &Root) -> Root {
        let w = self.finite_part().act_dual(&AffineWeight::new(root.weight.clone(), 0));
        rd.positive_roots()
            .iter()
            .find(|p| p.weight == w.x)
            .cloned()
            .or_else(|| rd.positive_roots().iter().find(|p| p.weight.iter().zip(&w.x).all(|(a, b)| *a == -b)).map(Root::neg))
            .expect("Weyl group permutes roots")
    }
}

/// A wall of type `s`: the coset `{w, ws}` stored by its shorter element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WallCoset {
    pub s: u8,
    pub rep: AffineWeylElem,
}

/// A facet: an alcove or a wall.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Facet {
    Alcove(AffineWeylElem),
    Wall(WallCoset),
}

/// The affine Weyl group of a root datum, with cached geometry.
#[derive(Clone, Debug)]
pub struct AffineWeyl {
    rd: RootDatum,
    gens: Vec<AffineWeylElem>,
    p_e: Vec<Rational64>,
    wall_points: Vec<Vec<Rational64>>,
}

impl AffineWeyl {
    pub fn new(rd: RootDatum) -> Self {
        let r = rd.rank();
        let h = rd.coxeter_number();
        let mut gens = vec![AffineWeylElem::reflection(rd.highest_root(), 1)];
        for i in 0..r {
            gens.push(AffineWeylElem::reflection(rd.simple_root(i), 0));
        }
        let solve = |vals: &[Rational64]| solve_cartan(&rd, vals);
        let p_e = solve(&vec![Rational64::new(1, h); r]);
        let mut wall_points = vec![solve(&vec![Rational64::new(1, h - 1); r])];
        for i in 0..r {
            let mut vals = vec![Rational64::new(1, h); r];
            vals[i] = Rational64::zero();
            wall_points.push(solve(&vals));
        }
        AffineWeyl { rd, gens, p_e, wall_points }
    }

    pub fn from_label(label: &str) -> Result<Self, Error> {
        Ok(Self::new(RootDatum::new(label)?))
    }

    pub fn root_datum(&self) -> &RootDatum {
        &self.rd
    }
    pub fn rank(&self) -> usize {
        self.rd.rank()
    }
    pub fn identity(&self) -> AffineWeylElem {
        AffineWeylElem::identity(self.rank())
    }
    /// The simple affine reflections, index 0 being `s_{γ,1}`.
    pub fn simple_reflections(&self) -> &[AffineWeylElem] {
        &self.gens
    }
    pub fn gen(&self, s: u8) -> &AffineWeylElem {
        &self.gens[s as usize]
    }
    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn check_word(&self, w: &Word) -> Result<(), Error> {
        match w.0.iter().find(|&&c| c as usize >= self.gens.len()) {
            Some(c) => Err(Error::Parse { input: w.to_string(), reason: format!("letter {c} exceeds the rank {}", self.rank()) }),
            None => Ok(()),
        }
    }

    /// The product of the letters, left to right.
    pub fn from_word(&self, w: &Word) -> AffineWeylElem {
        w.0.iter().fold(self.identity(), |acc, &c| acc.mul(self.gen(c)))
    }

    pub fn parse(&self, s: &str) -> Result<AffineWeylElem, Error> {
        let w: Word = s.parse()?;
        self.check_word(&w)?;
        Ok(self.from_word(&w))
    }

    /// An interior point of the alcove `A_w`.
    pub fn alcove_point(&self, w: &AffineWeylElem) -> Vec<Rational64> {
        w.apply(&self.p_e)
    }

    /// An interior point of the wall of `A_w` of type `s`.
    pub fn wall_point(&self, w: &AffineWeylElem, s: u8) -> Vec<Rational64> {
        w.apply(&self.wall_points[s as usize])
    }

    /// `⟨α, p⟩` for a root in weight coordinates.
    pub fn pair(&self, alpha: &Root, p: &[Rational64]) -> Rational64 {
        alpha.weight.iter().zip(p).fold(Rational64::zero(), |acc, (&a, &b)| acc + b * a)
    }

    fn floors(&self, w: &AffineWeylElem) -> impl Iterator<Item = i64> + '_ {
        let q = self.alcove_point(w);
        self.rd.positive_roots().iter().map(move |a| self.pair(a, &q).floor().to_integer())
    }

    /// Number of hyperplanes separating `A_e` and `A_w`.
    pub fn length(&self, w: &AffineWeylElem) -> usize {
        self.floors(w).map(|k| k.unsigned_abs() as usize).sum()
    }

    /// Signed hyperplane count: `+1` for each hyperplane with `A_e` below and
    /// `A_w` above, `-1` for the converse.
    pub fn delta_length(&self, w: &AffineWeylElem) -> i64 {
        self.floors(w).sum()
    }

    pub fn is_left_descent(&self, s: u8, w: &AffineWeylElem) -> bool {
        self.length(&self.gen(s).mul(w)) < self.length(w)
    }
    pub fn is_right_descent(&self, w: &AffineWeylElem, s: u8) -> bool {
        self.length(&w.mul(self.gen(s))) < self.length(w)
    }

    /// The lexicographically smallest reduced word.
    pub fn reduced_word(&self, w: &AffineWeylElem) -> Word {
        let mut out = Vec::new();
        let mut cur = w.clone();
        let mut l = self.length(&cur);
        while l > 0 {
            let (s, next) = (0..self.gens.len() as u8)
                .map(|s| (s, self.gen(s).mul(&cur)))
                .find(|(_, n)| self.length(n) < l)
                .expect("nonidentity has a left descent");
            out.push(s);
            cur = next;
            l -= 1;
        }
        Word(out)
    }

    pub fn word_string(&self, w: &AffineWeylElem) -> String {
        self.reduced_word(w).to_string()
    }

    /// Canonical sort key: length, then reduced word.
    pub fn sort_key(&self, w: &AffineWeylElem) -> (usize, Word) {
        (self.length(w), self.reduced_word(w))
    }

    pub fn sort(&self, v: &mut [AffineWeylElem]) {
        v.sort_by_cached_key(|w| self.sort_key(w));
    }

    /// Whether `w` is a word with no cancellation.
    pub fn is_reduced(&self, w: &Word) -> bool {
        self.length(&self.from_word(w)) == w.len()
    }

    /// Bruhat order via the lifting property: for `ys < y`,
    /// `x ≤ y ⟺ min(x, xs) ≤ ys`.
    pub fn bruhat_leq(&self, x: &AffineWeylElem, y: &AffineWeylElem) -> bool {
        let (mut x, mut y) = (x.clone(), y.clone());
        let (mut lx, mut ly) = (self.length(&x), self.length(&y));
        loop {
            if lx > ly {
                return false;
            }
            if ly == 0 {
                return x.is_identity();
            }
            if lx == ly {
                return x == y;
            }
            let s = (0..self.gens.len() as u8).find(|&s| self.is_right_descent(&y, s)).expect("descent exists");
            y = y.mul(self.gen(s));
            ly -= 1;
            let xs = x.mul(self.gen(s));
            let lxs = self.length(&xs);
            if lxs < lx {
                x = xs;
                lx = lxs;
            }
        }
    }

    /// `{x : x ≤ w}` in canonical order.
    pub fn bruhat_ideal(&self, w: &AffineWeylElem) -> Vec<AffineWeylElem> {
        let word = self.reduced_word(w);
        let mut set: HashSet<AffineWeylElem> = HashSet::from([self.identity()]);
        for &s in &word.0 {
            let g = self.gen(s);
            let ext: Vec<_> = set.iter().map(|x| x.mul(g)).collect();
            set.extend(ext);
        }
        let mut v: Vec<_> = set.into_iter().collect();
        self.sort(&mut v);
        v
    }

    /// Union of the Bruhat ideals of the given elements.
    pub fn ideal_union(&self, ws: &[AffineWeylElem]) -> Vec<AffineWeylElem> {
        let mut set = HashSet::new();
        for w in ws {
            set.extend(self.bruhat_ideal(w));
        }
        let mut v: Vec<_> = set.into_iter().collect();
        self.sort(&mut v);
        v
    }

    /// All elements of length at most `l`, in canonical order.
    pub fn elements_up_to_length(&self, l: usize) -> Vec<AffineWeylElem> {
        let mut seen = HashSet::from([self.identity()]);
        let mut frontier = vec![self.identity()];
        for _ in 0..l {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &self.gens {
                    let x = w.mul(g);
                    if seen.insert(x.clone()) {
                        next.push(x);
                    }
                }
            }
            frontier = next;
        }
        let mut v: Vec<_> = seen.into_iter().collect();
        self.sort(&mut v);
        v
    }

    /// If `y x^{-1}` is a reflection `s_{α,n}`, its normalized label.
    pub fn reflection_of_edge(&self, x: &AffineWeylElem, y: &AffineWeylElem) -> Option<AffineRoot> {
        let z = y.mul(&x.inverse());
        self.as_reflection(&z)
    }

    /// `Some(label)` iff `z` is an affine reflection.
    pub fn as_reflection(&self, z: &AffineWeylElem) -> Option<AffineRoot> {
        let r = self.rank();
        for a in self.rd.positive_roots() {
            let fin = AffineWeylElem::reflection(a, 0);
            if fin.m != z.m {
                continue;
            }
            let k = a.coroot.iter().position(|&c| c != 0)?;
            if z.t[k] % a.coroot[k] != 0 {
                return None;
            }
            let n = z.t[k] / a.coroot[k];
            if (0..r).all(|i| z.t[i] == n * a.coroot[i]) {
                return normalize_label(&AffineRoot::new(a.clone(), n)).ok();
            }
            return None;
        }
        None
    }

    /// The reflection across the hyperplane of an affine root.
    pub fn reflection_of(&self, ar: &AffineRoot) -> AffineWeylElem {
        AffineWeylElem::reflection(&ar.alpha, ar.n)
    }

    /// For a reflection `t = s_{α,n}` (α > 0): whether `x ⪯ t x`, i.e. `A_x`
    /// lies below `H_{α,n}`.
    pub fn generic_step_up(&self, x: &AffineWeylElem, alpha: &Root, n: i64) -> bool {
        let q = self.alcove_point(x);
        self.pair(alpha, &q) < Rational64::from_integer(n)
    }

    /// Comparison of `x` and `y = t x` for an affine reflection `t`.
    pub fn compare_adjacent(&self, x: &AffineWeylElem, y: &AffineWeylElem, order: Order) -> Ordering {
        if x == y {
            return Ordering::Equal;
        }
        match order {
            Order::Bruhat => self.length(x).cmp(&self.length(y)),
            Order::Generic => {
                let lab = self.reflection_of_edge(x, y).expect("adjacent elements");
                let (alpha, n) = if lab.alpha.is_positive() { (lab.alpha.clone(), lab.n) } else { (lab.alpha.neg(), -lab.n) };
                if self.generic_step_up(x, &alpha, n) {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    fn potential(&self, q: &[Rational64]) -> Rational64 {
        q.iter().fold(Rational64::zero(), |a, &b| a + b) * 2
    }

    /// `x ⪯ y` in the generic order, by searching chains of upward
    /// reflections. The potential `⟨2ρ, q⟩` strictly increases along chains,
    /// which bounds the search.
    pub fn generic_leq(&self, x: &AffineWeylElem, y: &AffineWeylElem) -> bool {
        if x == y {
            return true;
        }
        let fy = self.potential(&self.alcove_point(y));
        if self.potential(&self.alcove_point(x)) >= fy {
            return false;
        }
        let mut seen = HashSet::from([x.clone()]);
        let mut queue = VecDeque::from([x.clone()]);
        while let Some(z) = queue.pop_front() {
            let q = self.alcove_point(&z);
            let fz = self.potential(&q);
            for a in self.rd.positive_roots() {
                let av = self.pair(a, &q);
                let step: i64 = 2 * a.coroot.iter().sum::<i64>();
                let mut n = av.floor().to_integer() + 1;
                while (Rational64::from_integer(n) - av) * step <= fy - fz {
                    let next = AffineWeylElem::reflection(a, n).mul(&z);
                    if next == *y {
                        return true;
                    }
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                    n += 1;
                }
            }
        }
        false
    }

    pub fn leq(&self, order: Order, x: &AffineWeylElem, y: &AffineWeylElem) -> bool {
        match order {
            Order::Bruhat => self.bruhat_leq(x, y),
            Order::Generic => self.generic_leq(x, y),
        }
    }

    /// The length function attached to an order: `l` or `δ`.
    pub fn order_length(&self, order: Order, w: &AffineWeylElem) -> i64 {
        match order {
            Order::Bruhat => self.length(w) as i64,
            Order::Generic => self.delta_length(w),
        }
    }

    /// `β↑A_w = s_{β,n} A_w` with `n` minimal such that `A_w` is below `H_{β,n}`.
    pub fn beta_up(&self, w: &AffineWeylElem, beta: &Root) -> AffineWeylElem {
        let n = self.pair(beta, &self.alcove_point(w)).floor().to_integer() + 1;
        AffineWeylElem::reflection(beta, n).mul(w)
    }

    /// Inverse of `beta_up` on alcoves.
    pub fn beta_down(&self, w: &AffineWeylElem, beta: &Root) -> AffineWeylElem {
        let n = self.pair(beta, &self.alcove_point(w)).floor().to_integer();
        AffineWeylElem::reflection(beta, n).mul(w)
    }

    /// The wall of type `s` of `A_w`.
    pub fn wall_of(&self, w: &AffineWeylElem, s: u8) -> WallCoset {
        let ws = w.mul(self.gen(s));
        let rep = if self.length(&ws) < self.length(w) { ws } else { w.clone() };
        WallCoset { s, rep }
    }

    /// The affine root whose hyperplane contains the wall, with finite part positive.
    pub fn wall_hyperplane(&self, b: &WallCoset) -> (Root, i64) {
        let t = b.rep.mul(self.gen(b.s)).mul(&b.rep.inverse());
        let lab = self.as_reflection(&t).expect("conjugate of a simple reflection");
        if lab.alpha.is_positive() {
            (lab.alpha, lab.n)
        } else {
            (lab.alpha.neg(), -lab.n)
        }
    }

    /// `α_B`: the positive finite root orthogonal to the wall.
    pub fn wall_root(&self, b: &WallCoset) -> Root {
        self.wall_hyperplane(b).0
    }

    /// `(B₋, B₊)`: the adjacent alcoves below and above the wall's hyperplane.
    pub fn wall_sides(&self, b: &WallCoset) -> (AffineWeylElem, AffineWeylElem) {
        let (alpha, n) = self.wall_hyperplane(b);
        let other = b.rep.mul(self.gen(b.s));
        if self.generic_step_up(&b.rep, &alpha, n) {
            (b.rep.clone(), other)
        } else {
            (other, b.rep.clone())
        }
    }

    pub fn wall_minus(&self, b: &WallCoset) -> AffineWeylElem {
        self.wall_sides(b).0
    }
    pub fn wall_plus(&self, b: &WallCoset) -> AffineWeylElem {
        self.wall_sides(b).1
    }

    /// `β↑B` for a wall; equals `B` when `B` lies on some `H_{β,m}`.
    pub fn beta_up_wall(&self, b: &WallCoset, beta: &Root) -> WallCoset {
        let v = self.pair(beta, &self.wall_point(&b.rep, b.s));
        let n = v.ceil().to_integer();
        let moved = AffineWeylElem::reflection(beta, n).mul(&b.rep);
        self.wall_of(&moved, b.s)
    }

    /// Inverse of `beta_up_wall`.
    pub fn beta_down_wall(&self, b: &WallCoset, beta: &Root) -> WallCoset {
        let v = self.pair(beta, &self.wall_point(&b.rep, b.s));
        let n = v.floor().to_integer();
        let moved = AffineWeylElem::reflection(beta, n).mul(&b.rep);
        self.wall_of(&moved, b.s)
    }

    pub fn facet_beta_up(&self, f: &Facet, beta: &Root) -> Facet {
        match f {
            Facet::Alcove(w) => Facet::Alcove(self.beta_up(w, beta)),
            Facet::Wall(b) => Facet::Wall(self.beta_up_wall(b, beta)),
        }
    }

    /// Elements whose alcoves lie in the box `-1 < ⟨α_i, v⟩ < 0`.
    pub fn antifundamental_box(&self) -> Vec<AffineWeylElem> {
        let bound: i64 = self.rd.positive_roots().iter().map(Root::height).sum();
        let one = Rational64::one();
        let mut out: Vec<_> = self
            .elements_up_to_length(bound as usize)
            .into_iter()
            .filter(|w| {
                let q = self.alcove_point(w);
                (0..self.rank()).all(|i| {
                    let v = self.pair(self.rd.simple_root(i), &q);
                    v < Rational64::zero() && v > -one
                })
            })
            .collect();
        self.sort(&mut out);
        out
    }

    /// The box alcove that is smallest for `⪯` (the one of least `δ`).
    pub fn w_hat0(&self) -> AffineWeylElem {
        self.antifundamental_box().into_iter().min_by_key(|w| (self.delta_length(w), self.reduced_word(w))).expect("box is nonempty")
    }

    /// `Ŵ° = {w : w ≤ ŵ₀}`.
    pub fn w_circ(&self) -> Vec<AffineWeylElem> {
        self.bruhat_ideal(&self.w_hat0())
    }

    /// Index of each element of a list.
    pub fn index_map(v: &[AffineWeylElem]) -> HashMap<AffineWeylElem, usize> {
        v.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()
    }

    /// Reduced words of `w`, all of them.
    pub fn reduced_words(&self, w: &AffineWeylElem) -> Vec<Word> {
        let mut memo: BTreeMap<(usize, Word), Vec<Word>> = BTreeMap::new();
        self.reduced_words_rec(w, &mut memo)
    }

    fn reduced_words_rec(&self, w: &AffineWeylElem, memo: &mut BTreeMap<(usize, Word), Vec<Word>>) -> Vec<Word> {
        let key = self.sort_key(w);
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let l = key.0;
        let out = if l == 0 {
            vec![Word::empty()]
        } else {
            let mut out = Vec::new();
            for s in 0..self.gens.len() as u8 {
                let ws = w.mul(self.gen(s));
                if self.length(&ws) < l {
                    for mut p in self.reduced_words_rec(&ws, memo) {
                        p.0.push(s);
                        out.push(p);
                    }
                }
            }
            out.sort();
            out
        };
        memo.insert(key, out.clone());
        out
    }
}

/// Solves `C p = vals` where row `i` of `C` is `α_i` in weight coordinates.
fn solve_cartan(rd: &RootDatum, vals: &[Rational64]) -> Vec<Rational64> {
    let r = rd.rank();
    let c = rd.cartan();
    let mut a: Vec<Vec<Rational64>> = (0..r)
        .map(|i| {
            let mut row: Vec<Rational64> = (0..r).map(|j| Rational64::from_integer(c[i][j])).collect();
            row.push(vals[i]);
            row
        })
        .collect();
    for col in 0..r {
        let p = (col..r).find(|&i| !a[i][col].is_zero()).expect("Cartan matrix is invertible");
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for i in 0..r {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[r]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> AffineWeyl {
        AffineWeyl::from_label("A1~").unwrap()
    }

    #[test]
    fn dual_action_examples() {
        let g = a1();
        let a = g.root_datum().simple_root(0).clone();
        let s1 = AffineWeylElem::reflection(&a, 1);
        let img = s1.act_dual(&AffineWeight::new(a.weight.clone(), 0));
        assert_eq!(img, AffineWeight::new(vec![-2], 2));
        assert_eq!(s1.act_dual(&AffineWeight::delta(1)), AffineWeight::delta(1));
    }

    #[test]
    fn lengths_and_delta() {
        let g = a1();
        let s0 = g.parse("0").unwrap();
        let s1 = g.parse("1").unwrap();
        assert_eq!(g.delta_length(&s0), 1);
        assert_eq!(g.delta_length(&s1), -1);
        assert_eq!(g.length(&g.parse("0101").unwrap()), 4);
        assert_eq!(g.length(&g.parse("00").unwrap()), 0);
        assert_eq!(g.bruhat_ideal(&g.parse("010").unwrap()).len(), 6);
    }

    #[test]
    fn edge_labels() {
        let g = a1();
        let e = g.identity();
        assert_eq!(g.reflection_of_edge(&e, &g.parse("0").unwrap()).unwrap().to_string(), "δ-α1");
        assert_eq!(g.reflection_of_edge(&e, &g.parse("1").unwrap()).unwrap().to_string(), "α1");
        assert!(g.reflection_of_edge(&g.parse("01").unwrap(), &e).is_none());
    }

    #[test]
    fn box_and_w_hat0() {
        let g = a1();
        assert_eq!(g.antifundamental_box(), vec![g.parse("1").unwrap()]);
        assert_eq!(g.w_circ().len(), 2);
        let g2 = AffineWeyl::from_label("A2~").unwrap();
        // |W| divided by the index of the coroot lattice in the coweight lattice.
        assert_eq!(g2.antifundamental_box().len(), 2);
        assert_eq!(g2.length(&g2.w_hat0()), 4);
        assert_eq!(AffineWeyl::from_label("B2").unwrap().antifundamental_box().len(), 4);
        assert_eq!(AffineWeyl::from_label("G2").unwrap().antifundamental_box().len(), 12);
    }
}
