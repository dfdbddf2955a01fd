//! Moment graphs on finite sets of affine Weyl group elements, the structure
//! algebra of congruence tuples, and GKM analysis.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::{prime_factors, Field, Scalar};
use crate::poly::{Eliminator, Poly};
use crate::rootsys::{AffineRoot, AffineWeight, Root};
use crate::weyl::{AffineWeyl, AffineWeylElem, Order};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    /// Endpoints as vertex indices, `a < b`.
    pub a: usize,
    pub b: usize,
    /// Normalized positive affine root.
    pub label: AffineRoot,
}

/// A full subgraph of the affine Bruhat graph, or of its quotient by a simple
/// reflection `s` (vertices are then minimal coset representatives).
#[derive(Clone, Debug)]
pub struct MomentGraph {
    vertices: Vec<AffineWeylElem>,
    index: HashMap<AffineWeylElem, usize>,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    edge_index: HashMap<(usize, usize), usize>,
    quotient: Option<u8>,
}

impl MomentGraph {
    /// The full subgraph on `verts` (sorted canonically).
    pub fn full_subgraph(g: &AffineWeyl, verts: &[AffineWeylElem]) -> Self {
        let mut vertices = verts.to_vec();
        g.sort(&mut vertices);
        vertices.dedup();
        let n = vertices.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let edges: Vec<Edge> = pairs
            .par_iter()
            .filter_map(|&(a, b)| g.reflection_of_edge(&vertices[a], &vertices[b]).map(|label| Edge { a, b, label }))
            .collect();
        Self::assemble(vertices, edges, None)
    }

    /// `Ĝ_{≤w}`.
    pub fn ideal(g: &AffineWeyl, w: &AffineWeylElem) -> Self {
        Self::full_subgraph(g, &g.bruhat_ideal(w))
    }

    /// `Ĝ°`.
    pub fn restricted(g: &AffineWeyl) -> Self {
        Self::full_subgraph(g, &g.w_circ())
    }

    /// The quotient graph on cosets `{x, xs}`; two cosets are joined when some
    /// reflection maps one onto the other.
    pub fn quotient(g: &AffineWeyl, graph: &MomentGraph, s: u8) -> Self {
        let gs = g.gen(s);
        let mut reps: Vec<AffineWeylElem> = graph
            .vertices
            .iter()
            .map(|x| {
                let xs = x.mul(gs);
                if g.length(&xs) < g.length(x) {
                    xs
                } else {
                    x.clone()
                }
            })
            .collect();
        g.sort(&mut reps);
        reps.dedup();
        let n = reps.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let y = &reps[b];
                let lab = g.reflection_of_edge(&reps[a], y).or_else(|| g.reflection_of_edge(&reps[a], &y.mul(gs)));
                if let Some(label) = lab {
                    edges.push(Edge { a, b, label });
                }
            }
        }
        Self::assemble(reps, edges, Some(s))
    }

    fn assemble(vertices: Vec<AffineWeylElem>, edges: Vec<Edge>, quotient: Option<u8>) -> Self {
        let index = AffineWeyl::index_map(&vertices);
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut edge_index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            adj[e.a].push(i);
            adj[e.b].push(i);
            edge_index.insert((e.a, e.b), i);
        }
        MomentGraph { vertices, index, edges, adj, edge_index, quotient }
    }

    pub fn vertices(&self) -> &[AffineWeylElem] {
        &self.vertices
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn index_of(&self, x: &AffineWeylElem) -> Option<usize> {
        self.index.get(x).copied()
    }
    pub fn contains(&self, x: &AffineWeylElem) -> bool {
        self.index.contains_key(x)
    }
    /// Edge ids incident to vertex `i`.
    pub fn incident(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }
    pub fn other_end(&self, edge: usize, i: usize) -> usize {
        let e = &self.edges[edge];
        if e.a == i {
            e.b
        } else {
            e.a
        }
    }
    /// The edge joining vertices `a` and `b`, in either order.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }
    pub fn quotient_of(&self) -> Option<u8> {
        self.quotient
    }

    /// Edge ids from `i` to vertices above it in the given order.
    pub fn up_edges(&self, g: &AffineWeyl, i: usize, order: Order) -> Vec<usize> {
        self.adj[i]
            .iter()
            .copied()
            .filter(|&e| g.compare_adjacent(&self.vertices[i], &self.vertices[self.other_end(e, i)], order).is_lt())
            .collect()
    }

    pub fn to_dot(&self, g: &AffineWeyl) -> String {
        let name = |x: &AffineWeylElem| {
            let w = g.word_string(x);
            if w.is_empty() {
                "e".to_string()
            } else {
                w
            }
        };
        let mut s = String::from("graph moment {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{}\";", name(v));
        }
        for e in &self.edges {
            let _ = writeln!(s, "  \"{}\" -- \"{}\" [label=\"{}\"];", name(&self.vertices[e.a]), name(&self.vertices[e.b]), e.label);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, g: &AffineWeyl) -> GraphJson {
        let words: Vec<String> = self.vertices.iter().map(|x| g.word_string(x)).collect();
        GraphJson {
            vertices: words.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { a: words[e.a].clone(), b: words[e.b].clone(), label: e.label.to_string(), coords: e.label.value().coords() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub a: String,
    pub b: String,
    pub label: String,
    /// Label in fundamental-weight coordinates followed by the `δ` coefficient.
    pub coords: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

/// A tuple of polynomials indexed by the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZElement<E> {
    pub coords: Vec<Poly<E>>,
}

impl<E: Scalar> ZElement<E> {
    /// The diagonal image of a constant.
    pub fn constant(graph: &MomentGraph, nvars: usize, c: E) -> Self {
        ZElement { coords: vec![Poly::constant(nvars, c); graph.num_vertices()] }
    }
    pub fn add(&self, o: &Self) -> Self {
        ZElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.add(b)).collect() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        ZElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.sub(b)).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        ZElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.mul(b)).collect() }
    }
    pub fn scale(&self, c: &E) -> Self {
        ZElement { coords: self.coords.iter().map(|a| a.scale(c)).collect() }
    }
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Poly::is_zero)
    }
}

/// The linear form of an affine weight.
pub fn weight_poly<F: Field>(k: &F, w: &AffineWeight) -> Poly<F::Elem> {
    Poly::linear_int(k, &w.coords())
}

/// Whether `z_a ≡ z_b mod α(E)` for every edge.
pub fn z_membership<F: Field>(k: &F, z: &ZElement<F::Elem>, graph: &MomentGraph) -> bool {
    graph.edges.iter().all(|e| {
        let diff = z.coords[e.a].sub(&z.coords[e.b]);
        match Eliminator::new(k, &e.label.value().coords()) {
            Some(el) => el.reduce(&diff).is_zero(),
            None => diff.is_zero(),
        }
    })
}

/// `c(λ)_x = x(λ)`.
pub fn c_lambda<F: Field>(k: &F, lambda: &AffineWeight, graph: &MomentGraph) -> ZElement<F::Elem> {
    ZElement { coords: graph.vertices.iter().map(|x| weight_poly(k, &x.act_dual(lambda))).collect() }
}

/// `z_x = ½(β - x w^{-1}(β))`: vanishes at `w` and lies in `β + kδ` or `kδ`
/// along the orbit `Ŵ^β w` according to parity.
pub fn dinz_element<F: Field>(k: &F, beta: &Root, w: &AffineWeylElem, graph: &MomentGraph) -> Result<ZElement<F::Elem>, Error> {
    if k.characteristic() == 2 {
        return Err(Error::CharTwo);
    }
    let half = k.from_i64(2).inv().expect("odd characteristic");
    let b = AffineWeight::new(beta.weight.clone(), 0);
    let winv_b = w.inverse().act_dual(&b);
    let coords = graph
        .vertices
        .iter()
        .map(|x| weight_poly(k, &b.add(&x.act_dual(&winv_b).neg())).scale(&half))
        .collect();
    Ok(ZElement { coords })
}

/// If `x ∈ Ŵ^β` (generated by the `s_{β,n}`), whether its length is odd.
pub fn beta_subgroup_parity(g: &AffineWeyl, x: &AffineWeylElem, beta: &Root) -> Option<bool> {
    let r = g.rank();
    let t = x.translation_part();
    let k = beta.coroot.iter().position(|&c| c != 0)?;
    if t[k] % beta.coroot[k] != 0 {
        return None;
    }
    let n = t[k] / beta.coroot[k];
    if (0..r).any(|i| t[i] != n * beta.coroot[i]) {
        return None;
    }
    let fin = x.finite_part();
    if fin.is_identity() {
        Some(false)
    } else if fin == AffineWeylElem::reflection(beta, 0) {
        Some(true)
    } else {
        None
    }
}

/// The parity condition: for `x ∈ Ŵ^β` with `xw` a vertex, `z_{xw} ∈ kδ` for
/// even `l(x)` and `z_{xw} ∈ β + kδ` for odd `l(x)`.
pub fn dinz_parity_holds<F: Field>(k: &F, g: &AffineWeyl, z: &ZElement<F::Elem>, beta: &Root, w: &AffineWeylElem, graph: &MomentGraph) -> bool {
    let n = g.rank() + 1;
    let winv = w.inverse();
    graph.vertices.iter().enumerate().all(|(i, y)| {
        let Some(odd) = beta_subgroup_parity(g, &y.mul(&winv), beta) else { return true };
        let mut rest = z.coords[i].clone();
        if odd {
            rest = rest.sub(&weight_poly(k, &AffineWeight::new(beta.weight.clone(), 0)));
        }
        let ok = rest.terms().all(|(m, _)| (0..n - 1).all(|j| m.0[j] == 0) && m.degree() == 1);
        ok
    })
}

/// `z = z⁺ + c(α_t) z'` with `z⁺, z'` invariant under `σ_t`, `σ_t(z)_w = z_{wt}`.
pub fn sigma_decompose<F: Field>(
    k: &F,
    z: &ZElement<F::Elem>,
    t: &AffineWeylElem,
    alpha_t: &AffineRoot,
    graph: &MomentGraph,
) -> Result<(ZElement<F::Elem>, ZElement<F::Elem>), Error> {
    if k.characteristic() == 2 {
        return Err(Error::CharTwo);
    }
    let half = k.from_i64(2).inv().expect("odd characteristic");
    let partner: Vec<usize> = graph
        .vertices
        .iter()
        .map(|w| graph.index_of(&w.mul(t)).ok_or_else(|| Error::Precondition("vertex set is not stable under t".into())))
        .collect::<Result<_, _>>()?;
    let mut plus = Vec::new();
    let mut prime = Vec::new();
    for (i, w) in graph.vertices.iter().enumerate() {
        let j = partner[i];
        plus.push(z.coords[i].add(&z.coords[j]).scale(&half));
        let minus = z.coords[i].sub(&z.coords[j]).scale(&half);
        let c = weight_poly(k, &w.act_dual(&alpha_t.value()));
        let q = minus.div_exact(&c).ok_or_else(|| Error::Division(format!("anti-invariant part at {} is not divisible", i)))?;
        prime.push(q);
    }
    Ok((ZElement { coords: plus }, ZElement { coords: prime }))
}

/// Gcd of the 2×2 minors of two integer vectors; zero iff they are parallel.
pub fn minor_gcd(u: &[i64], v: &[i64]) -> i64 {
    let mut g = 0i64;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            g = g.gcd(&(u[i] * v[j] - u[j] * v[i]));
        }
    }
    g
}

/// A pair of edges at a common vertex whose labels become dependent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkmViolation {
    pub vertex: usize,
    pub edges: (usize, usize),
    pub minor_gcd: i64,
}

/// Violations over a field of characteristic `p` (0 for `Q`).
pub fn gkm_check(graph: &MomentGraph, p: u64) -> Vec<GkmViolation> {
    let mut out = Vec::new();
    for (v, inc) in graph.adj.iter().enumerate() {
        for (i, &e1) in inc.iter().enumerate() {
            for &e2 in &inc[i + 1..] {
                let g = minor_gcd(&graph.edges[e1].label.value().coords(), &graph.edges[e2].label.value().coords());
                let bad = if p == 0 { g == 0 } else { g == 0 || g % p as i64 == 0 };
                if bad {
                    out.push(GkmViolation { vertex: v, edges: (e1, e2), minor_gcd: g });
                }
            }
        }
    }
    out
}

/// Exactly the primes for which some pair of labels at a vertex becomes dependent.
pub fn gkm_prime_set(graph: &MomentGraph) -> BTreeSet<u64> {
    let gcds: BTreeSet<i64> = graph
        .adj
        .par_iter()
        .flat_map_iter(|inc| {
            let mut local = Vec::new();
            for (i, &e1) in inc.iter().enumerate() {
                for &e2 in &inc[i + 1..] {
                    local.push(minor_gcd(&graph.edges[e1].label.value().coords(), &graph.edges[e2].label.value().coords()));
                }
            }
            local
        })
        .collect();
    gcds.into_iter().filter(|&g| g != 0).flat_map(|g| prime_factors(g.unsigned_abs())).collect()
}

/// Minor gcd of every pair of labels meeting at a vertex, keyed by vertex word.
pub fn gkm_report(g: &AffineWeyl, graph: &MomentGraph) -> BTreeMap<String, Vec<(String, String, i64)>> {
    let mut out = BTreeMap::new();
    for (v, inc) in graph.adj.iter().enumerate() {
        let mut rows = Vec::new();
        for (i, &e1) in inc.iter().enumerate() {
            for &e2 in &inc[i + 1..] {
                let (l1, l2) = (&graph.edges[e1].label, &graph.edges[e2].label);
                rows.push((l1.to_string(), l2.to_string(), minor_gcd(&l1.value().coords(), &l2.value().coords())));
            }
        }
        out.insert(g.word_string(&graph.vertices[v]), rows);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn a1_graphs() {
        let g = AffineWeyl::from_label("A1~").unwrap();
        let gr = MomentGraph::ideal(&g, &g.parse("010").unwrap());
        assert_eq!(gr.num_vertices(), 6);
        assert_eq!(gkm_prime_set(&gr), BTreeSet::from([2]));
        let r = MomentGraph::restricted(&g);
        assert_eq!(r.edges().len(), 1);
        assert_eq!(r.edges()[0].label.to_string(), "α1");
        assert!(gkm_prime_set(&r).is_empty());
        let small = MomentGraph::full_subgraph(&g, &[g.identity(), g.parse("1").unwrap()]);
        let q = MomentGraph::quotient(&g, &small, 1);
        assert_eq!((q.num_vertices(), q.edges().len()), (1, 0));
    }

    #[test]
    fn dinz_examples() {
        let k = Rationals;
        let g = AffineWeyl::from_label("A1~").unwrap();
        let gr = MomentGraph::ideal(&g, &g.parse("010").unwrap());
        let beta = g.root_datum().simple_root(0).clone();
        let z = dinz_element(&k, &beta, &g.identity(), &gr).unwrap();
        assert!(z_membership(&k, &z, &gr));
        let names = g.root_datum().var_names();
        let at = |w: &str| z.coords[gr.index_of(&g.parse(w).unwrap()).unwrap()].render(&names);
        assert_eq!(at(""), "0");
        assert_eq!(at("1"), "2*w1");
        assert_eq!(at("0"), "2*w1 - d");
        assert!(dinz_parity_holds(&k, &g, &z, &beta, &g.identity(), &gr));
    }
}
