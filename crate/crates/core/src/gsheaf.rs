//! Sheaves on moment graphs with graded free stalks over the symmetric algebra
//! of the affine weight lattice: translation functors, sections, subquotients
//! and graded characters.
//!
//! Degrees are cohomological, so every variable has degree 2. A generator of
//! degree `d` contributes `v^d` to the graded rank, and the shift `⟨n⟩` lowers
//! every degree by `n`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::field::{Field, Scalar};
use crate::hecke::HeckeElem;
use crate::laurent::LaurentPoly;
use crate::linalg::{EchelonSpan, Matrix};
use crate::poly::{count_monomials, monomials, Eliminator, Mono, Poly};
use crate::structure::MomentGraph;
use crate::weyl::{AffineWeyl, AffineWeylElem, Order, Word};
use crate::{Error, Result};

/// Multiset of generator degrees of a graded free module, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedFree {
    degrees: Vec<i32>,
}

impl GradedFree {
    pub fn new(mut degrees: Vec<i32>) -> Self {
        degrees.sort_unstable();
        GradedFree { degrees }
    }
    pub fn zero() -> Self {
        GradedFree::default()
    }
    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }
    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }
    /// `Σ v^{d_i}` over generator degrees.
    pub fn rk(&self) -> LaurentPoly {
        LaurentPoly::from_pairs(self.degrees.iter().map(|&d| (d, 1)))
    }
    /// `⟨n⟩`.
    pub fn shift(&self, n: i32) -> Self {
        GradedFree { degrees: self.degrees.iter().map(|d| d - n).collect() }
    }
    pub fn union(&self, o: &Self) -> Self {
        GradedFree::new(self.degrees.iter().chain(&o.degrees).copied().collect())
    }
    /// Dimension of the degree-`d` piece over a polynomial ring in `nvars` variables.
    pub fn dim(&self, d: i32, nvars: usize) -> usize {
        self.degrees
            .iter()
            .filter(|&&k| d >= k && (d - k) % 2 == 0)
            .map(|&k| count_monomials(nvars, ((d - k) / 2) as usize))
            .sum()
    }
    pub fn max_degree(&self) -> Option<i32> {
        self.degrees.last().copied()
    }
    pub fn min_degree(&self) -> Option<i32> {
        self.degrees.first().copied()
    }
}

/// A matrix of polynomials; entry `(i, j)` is homogeneous of degree
/// `col_deg[j] - row_deg[i]` when the matrix is homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<E> {
    pub row_deg: Vec<i32>,
    pub col_deg: Vec<i32>,
    pub entries: Vec<Vec<Poly<E>>>,
}

impl<E: Scalar> PolyMatrix<E> {
    pub fn zero(row_deg: Vec<i32>, col_deg: Vec<i32>, nvars: usize) -> Self {
        let entries = vec![vec![Poly::zero(nvars); col_deg.len()]; row_deg.len()];
        PolyMatrix { row_deg, col_deg, entries }
    }
    pub fn identity(deg: Vec<i32>, nvars: usize, one: &E) -> Self {
        let mut m = Self::zero(deg.clone(), deg, nvars);
        for (i, row) in m.entries.iter_mut().enumerate() {
            row[i] = Poly::constant(nvars, one.clone());
        }
        m
    }
    pub fn rows(&self) -> usize {
        self.row_deg.len()
    }
    pub fn cols(&self) -> usize {
        self.col_deg.len()
    }
    pub fn is_homogeneous(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, p)| {
                p.is_zero() || {
                    let want = self.col_deg[j] - self.row_deg[i];
                    want >= 0 && want % 2 == 0 && p.homogeneous_degree() == Some((want / 2) as usize)
                }
            })
        })
    }
    /// Image of the column vector `v`, reduced modulo the eliminator.
    pub fn apply(&self, v: &[Poly<E>], elim: &Eliminator<E>, nvars: usize) -> Vec<Poly<E>> {
        self.entries
            .iter()
            .map(|row| {
                let mut acc = Poly::zero(nvars);
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                elim.reduce(&acc)
            })
            .collect()
    }
    pub fn render(&self, names: &[String]) -> Vec<Vec<String>> {
        self.entries.iter().map(|row| row.iter().map(|p| p.render(names)).collect()).collect()
    }
}

/// Stalk on an edge: a free module over `S/α(E)`, with the maps from both ends.
#[derive(Clone, Debug)]
pub struct EdgeStalk<E> {
    pub module: GradedFree,
    pub elim: Eliminator<E>,
    /// From the endpoint `edge.a`.
    pub rho_a: PolyMatrix<E>,
    /// From the endpoint `edge.b`.
    pub rho_b: PolyMatrix<E>,
}

/// Coordinates of the degree-`d` piece of a graded free module.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub blocks: Vec<(usize, Vec<Mono>)>,
    pub offsets: Vec<usize>,
    pub index: HashMap<(usize, Mono), usize>,
    pub dim: usize,
}

impl Layout {
    pub fn new(degrees: &[i32], d: i32, nvars: usize, skip: Option<usize>) -> Self {
        let mut blocks = Vec::new();
        let mut offsets = Vec::new();
        let mut index = HashMap::new();
        let mut dim = 0;
        for (j, &k) in degrees.iter().enumerate() {
            if d < k || (d - k) % 2 != 0 {
                continue;
            }
            let ms = monomials(nvars, ((d - k) / 2) as usize, skip);
            offsets.push(dim);
            for (t, m) in ms.iter().enumerate() {
                index.insert((j, m.clone()), dim + t);
            }
            dim += ms.len();
            blocks.push((j, ms));
        }
        Layout { blocks, offsets, index, dim }
    }

    pub fn coords<E: Scalar>(&self, v: &[Poly<E>], zero: &E) -> Vec<E> {
        let mut out = vec![zero.clone(); self.dim];
        for (j, p) in v.iter().enumerate() {
            for (m, c) in p.terms() {
                let i = self.index[&(j, m.clone())];
                out[i] = c.clone();
            }
        }
        out
    }

    pub fn element<E: Scalar>(&self, c: &[E], ngens: usize, nvars: usize) -> Vec<Poly<E>> {
        let mut out = vec![Poly::zero(nvars); ngens];
        for ((j, ms), &off) in self.blocks.iter().zip(&self.offsets) {
            for (t, m) in ms.iter().enumerate() {
                if !c[off + t].is_zero() {
                    out[*j] = out[*j].add(&Poly::monomial(m.clone(), c[off + t].clone()));
                }
            }
        }
        out
    }

    /// Multiplication by variable `i` from `self` (degree `d - 2`) into `to` (degree `d`).
    pub fn times_var<E: Scalar>(&self, to: &Layout, i: usize, c: &[E], zero: &E) -> Vec<E> {
        let mut out = vec![zero.clone(); to.dim];
        for ((j, ms), &off) in self.blocks.iter().zip(&self.offsets) {
            for (t, m) in ms.iter().enumerate() {
                if !c[off + t].is_zero() {
                    let mut mm = m.clone();
                    mm.0[i] += 1;
                    out[to.index[&(*j, mm)]] = c[off + t].clone();
                }
            }
        }
        out
    }
}

/// Degree-`d` matrix of a polynomial matrix from `src` coordinates to `dst`
/// coordinates, reducing modulo the eliminator.
pub(crate) fn degree_matrix<F: Field>(k: &F, m: &PolyMatrix<F::Elem>, elim: &Eliminator<F::Elem>, src: &Layout, dst: &Layout) -> Matrix<F::Elem> {
    let one = k.one();
    let mut out = Matrix::zeros(dst.dim, src.dim, &k.zero());
    for ((j, ms), &off) in src.blocks.iter().zip(&src.offsets) {
        for (t, mono) in ms.iter().enumerate() {
            for (i, row) in m.entries.iter().enumerate() {
                let e = &row[*j];
                if e.is_zero() {
                    continue;
                }
                let p = elim.reduce(&e.mul_mono(mono, &one));
                for (mm, c) in p.terms() {
                    let r = dst.index[&(i, mm.clone())];
                    out.set(r, off + t, c.clone());
                }
            }
        }
    }
    out
}

/// A sheaf on a finite moment graph. Stalks at vertices are graded free over
/// `S`, edge stalks graded free over `S/α(E)`, and the restriction maps are
/// homogeneous of degree 0 with entries reduced modulo the edge label.
#[derive(Clone, Debug)]
pub struct Sheaf<F: Field> {
    k: F,
    graph: Arc<MomentGraph>,
    nvars: usize,
    stalks: Vec<GradedFree>,
    edges: Vec<EdgeStalk<F::Elem>>,
}

/// Per-degree basis of a section space, one coordinate vector per vertex slot.
pub(crate) type SectionVec<E> = Vec<Vec<E>>;

/// Global sections over a vertex set, as a graded module.
#[derive(Clone, Debug)]
pub struct Sections<E> {
    /// Vertex indices, in the slot order used by the generators.
    pub vertices: Vec<usize>,
    pub cutoff: i32,
    /// Dimension over the field in each degree up to the cutoff.
    pub dims: BTreeMap<i32, usize>,
    pub generators: Vec<SectionGen<E>>,
}

/// A minimal homogeneous generator; `components[t]` lists the coefficients in
/// the stalk generators of vertex slot `t`.
#[derive(Clone, Debug)]
pub struct SectionGen<E> {
    pub degree: i32,
    pub components: Vec<Vec<Poly<E>>>,
}

impl<E> Sections<E> {
    pub fn module(&self) -> GradedFree {
        GradedFree::new(self.generators.iter().map(|g| g.degree).collect())
    }
}

/// Which length weights the character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LengthFn {
    Bruhat,
    Delta,
}

impl LengthFn {
    pub fn eval(self, g: &AffineWeyl, x: &AffineWeylElem) -> i64 {
        match self {
            LengthFn::Bruhat => g.length(x) as i64,
            LengthFn::Delta => g.delta_length(x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeStalkJson {
    pub a: String,
    pub b: String,
    pub label: String,
    pub degrees: Vec<i32>,
    pub rho_a: Vec<Vec<String>>,
    pub rho_b: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafJson {
    pub field: String,
    pub stalks: Vec<(String, Vec<i32>)>,
    pub edges: Vec<EdgeStalkJson>,
}

/// The result of the first half of a translation: a sheaf on the quotient
/// graph whose stalk at a coset `{a, as}` (with `a` the shorter element) is
/// `Γ({a, as})`, together with the two components of each generator.
#[derive(Clone, Debug)]
pub struct QuotientSheaf<F: Field> {
    pub s: u8,
    /// The `s`-invariant graph the sheaf came from.
    pub base: Arc<MomentGraph>,
    pub sheaf: Sheaf<F>,
    /// Per coset, per generator: coefficients at `a` and at `as`.
    pub components: Vec<Vec<(Vec<Poly<F::Elem>>, Vec<Poly<F::Elem>>)>>,
}

fn gkm_eliminator<F: Field>(k: &F, graph: &MomentGraph, e: usize) -> Result<Eliminator<F::Elem>> {
    let label = &graph.edges()[e].label;
    Eliminator::new(k, &label.value().coords())
        .ok_or_else(|| Error::Gkm { field: k.label(), detail: format!("label {label} vanishes") })
}

impl<F: Field> Sheaf<F> {
    /// Assembles a sheaf from its parts, checking shapes and that every edge
    /// map is homogeneous and free of the eliminated variable.
    pub fn from_parts(k: F, graph: Arc<MomentGraph>, nvars: usize, stalks: Vec<GradedFree>, edges: Vec<EdgeStalk<F::Elem>>) -> Result<Self> {
        if stalks.len() != graph.num_vertices() || edges.len() != graph.edges().len() {
            return Err(Error::Precondition("stalk counts do not match the graph".into()));
        }
        let sh = Sheaf { k, graph, nvars, stalks, edges };
        sh.check()?;
        Ok(sh)
    }

    fn check(&self) -> Result<()> {
        for (i, (e, st)) in self.graph.edges().iter().zip(&self.edges).enumerate() {
            for (m, from) in [(&st.rho_a, e.a), (&st.rho_b, e.b)] {
                let ok = m.rows() == st.module.rank()
                    && m.cols() == self.stalks[from].rank()
                    && m.row_deg == st.module.degrees()
                    && m.col_deg == self.stalks[from].degrees()
                    && m.is_homogeneous()
                    && m.entries.iter().flatten().all(|p| p.terms().all(|(mm, _)| mm.0[st.elim.elim] == 0));
                if !ok {
                    return Err(Error::Precondition(format!("edge {i} has an inconsistent restriction map")));
                }
            }
        }
        Ok(())
    }

    /// `ℬ_e`: rank one in degree 0 at the identity, zero elsewhere.
    pub fn b_e(k: F, g: &AffineWeyl, graph: Arc<MomentGraph>) -> Result<Self> {
        let e = graph.index_of(&g.identity()).ok_or_else(|| Error::Precondition("graph does not contain e".into()))?;
        let nvars = g.rank() + 1;
        let mut stalks = vec![GradedFree::zero(); graph.num_vertices()];
        stalks[e] = GradedFree::new(vec![0]);
        let edges = (0..graph.edges().len())
            .map(|i| {
                let elim = gkm_eliminator(&k, &graph, i)?;
                let ed = &graph.edges()[i];
                Ok(EdgeStalk {
                    module: GradedFree::zero(),
                    elim,
                    rho_a: PolyMatrix::zero(vec![], stalks[ed.a].degrees().to_vec(), nvars),
                    rho_b: PolyMatrix::zero(vec![], stalks[ed.b].degrees().to_vec(), nvars),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(k, graph, nvars, stalks, edges)
    }

    pub fn field(&self) -> &F {
        &self.k
    }
    pub fn graph(&self) -> &Arc<MomentGraph> {
        &self.graph
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn stalk(&self, i: usize) -> &GradedFree {
        &self.stalks[i]
    }
    pub fn stalks(&self) -> &[GradedFree] {
        &self.stalks
    }
    pub fn edge_stalk(&self, e: usize) -> &EdgeStalk<F::Elem> {
        &self.edges[e]
    }
    pub fn stalk_at(&self, x: &AffineWeylElem) -> GradedFree {
        self.graph.index_of(x).map(|i| self.stalks[i].clone()).unwrap_or_default()
    }
    /// `ρ_{v,E}` for an endpoint `v` of edge `e`.
    pub fn rho(&self, e: usize, v: usize) -> &PolyMatrix<F::Elem> {
        if self.graph.edges()[e].a == v {
            &self.edges[e].rho_a
        } else {
            &self.edges[e].rho_b
        }
    }
    /// Vertices with a nonzero stalk.
    pub fn support(&self) -> Vec<usize> {
        (0..self.stalks.len()).filter(|&i| !self.stalks[i].is_zero()).collect()
    }

    /// `ℱ⟨n⟩`.
    pub fn shift(&self, n: i32) -> Self {
        let mut out = self.clone();
        for s in &mut out.stalks {
            *s = s.shift(n);
        }
        for e in &mut out.edges {
            e.module = e.module.shift(n);
            for m in [&mut e.rho_a, &mut e.rho_b] {
                m.row_deg.iter_mut().for_each(|d| *d -= n);
                m.col_deg.iter_mut().for_each(|d| *d -= n);
            }
        }
        out
    }

    pub(crate) fn vertex_layout(&self, v: usize, d: i32) -> Layout {
        Layout::new(self.stalks[v].degrees(), d, self.nvars, None)
    }

    pub(crate) fn edge_layout(&self, e: usize, d: i32) -> Layout {
        Layout::new(self.edges[e].module.degrees(), d, self.nvars, Some(self.edges[e].elim.elim))
    }

    /// Degree-`d` matrix of `ρ_{v,E}`.
    pub(crate) fn rho_matrix(&self, e: usize, v: usize, d: i32) -> (Matrix<F::Elem>, Layout, Layout) {
        let src = self.vertex_layout(v, d);
        let dst = self.edge_layout(e, d);
        let m = degree_matrix(&self.k, self.rho(e, v), &self.edges[e].elim, &src, &dst);
        (m, src, dst)
    }

    /// A basis of `Γ(Ω)` in degree `d`, built one vertex at a time as a fiber
    /// product over the edges back to the vertices already placed.
    pub(crate) fn section_basis(&self, omega: &[usize], d: i32) -> (Vec<Layout>, Vec<SectionVec<F::Elem>>) {
        let zero = self.k.zero();
        let layouts: Vec<Layout> = omega.iter().map(|&v| self.vertex_layout(v, d)).collect();
        let mut basis: Vec<SectionVec<F::Elem>> = Vec::new();
        for (t, &x) in omega.iter().enumerate() {
            let lx = &layouts[t];
            let cons: Vec<(usize, usize)> = (0..t)
                .filter_map(|u| self.graph.edge_between(omega[u], x).map(|e| (e, u)))
                .filter(|&(e, _)| !self.edges[e].module.is_zero())
                .collect();
            if lx.dim == 0 {
                basis.iter_mut().for_each(|s| s.push(Vec::new()));
                continue;
            }
            if cons.is_empty() {
                basis.iter_mut().for_each(|s| s.push(vec![zero.clone(); lx.dim]));
                for i in 0..lx.dim {
                    let mut s: SectionVec<F::Elem> = layouts[..t].iter().map(|l| vec![zero.clone(); l.dim]).collect();
                    let mut c = vec![zero.clone(); lx.dim];
                    c[i] = self.k.one();
                    s.push(c);
                    basis.push(s);
                }
                continue;
            }
            // Columns: coordinates at x, then the previous basis.
            let mut blocks = Vec::new();
            let mut nrows = 0;
            for &(e, u) in &cons {
                let (mx, _, le) = self.rho_matrix(e, x, d);
                let (my, _, _) = self.rho_matrix(e, omega[u], d);
                blocks.push((mx, my, u, nrows));
                nrows += le.dim;
            }
            let ncols = lx.dim + basis.len();
            let mut a = Matrix::zeros(nrows, ncols, &zero);
            for (mx, my, u, r0) in &blocks {
                for r in 0..mx.rows() {
                    for c in 0..lx.dim {
                        let v = mx.get(r, c);
                        if !v.is_zero() {
                            a.set(r0 + r, c, -v.clone());
                        }
                    }
                }
                for (i, s) in basis.iter().enumerate() {
                    let img = my.mul_vec(&s[*u], &zero);
                    for (r, v) in img.into_iter().enumerate() {
                        if !v.is_zero() {
                            a.set(r0 + r, lx.dim + i, v);
                        }
                    }
                }
            }
            let pivots = a.rref();
            let mut is_pivot = vec![false; ncols];
            pivots.iter().for_each(|&p| is_pivot[p] = true);
            let old_pivots: Vec<(usize, usize)> = pivots.iter().enumerate().filter(|(_, &p)| p >= lx.dim).map(|(r, &p)| (r, p - lx.dim)).collect();
            let x_pivots: Vec<(usize, usize)> = pivots.iter().enumerate().filter(|(_, &p)| p < lx.dim).map(|(r, &p)| (r, p)).collect();
            let mut next = Vec::new();
            for f in (0..ncols).filter(|&j| !is_pivot[j]) {
                let mut s: SectionVec<F::Elem> = if f >= lx.dim {
                    basis[f - lx.dim].clone()
                } else {
                    layouts[..t].iter().map(|l| vec![zero.clone(); l.dim]).collect()
                };
                for &(r, i) in &old_pivots {
                    let c = a.get(r, f);
                    if !c.is_zero() {
                        for (slot, src) in s.iter_mut().zip(&basis[i]) {
                            for (dv, sv) in slot.iter_mut().zip(src) {
                                if !sv.is_zero() {
                                    *dv = dv.clone() - c.clone() * sv.clone();
                                }
                            }
                        }
                    }
                }
                let mut xc = vec![zero.clone(); lx.dim];
                if f < lx.dim {
                    xc[f] = self.k.one();
                }
                for &(r, p) in &x_pivots {
                    xc[p] = -a.get(r, f).clone();
                }
                s.push(xc);
                next.push(s);
            }
            basis = next;
        }
        (layouts, basis)
    }

    /// Default cutoff: the top stalk degree on `Ω` plus twice the spread of
    /// lengths over `Ω`, plus 4.
    pub fn default_cutoff(&self, g: &AffineWeyl, omega: &[usize]) -> i32 {
        let top = omega.iter().filter_map(|&v| self.stalks[v].max_degree()).max().unwrap_or(0);
        let lens: Vec<usize> = omega.iter().map(|&v| g.length(&self.graph.vertices()[v])).collect();
        let spread = lens.iter().max().unwrap_or(&0) - lens.iter().min().unwrap_or(&0);
        top + 2 * spread as i32 + 4
    }

    /// `Γ(Ω, ℱ)` with minimal homogeneous generators. Fails if the section
    /// module is not free on the generators found, or if a generator appears
    /// in the top two even degrees below the cutoff.
    pub fn sections(&self, omega: &[usize], cutoff: i32) -> Result<Sections<F::Elem>> {
        let zero = self.k.zero();
        let dmin = omega.iter().filter_map(|&v| self.stalks[v].min_degree()).min().unwrap_or(0);
        let degs: Vec<i32> = (dmin..=cutoff).collect();
        let per: Vec<(Vec<Layout>, Vec<SectionVec<F::Elem>>)> = degs.par_iter().map(|&d| self.section_basis(omega, d)).collect();
        let mut dims = BTreeMap::new();
        let mut generators = Vec::new();
        for (idx, &d) in degs.iter().enumerate() {
            let (lay, basis) = &per[idx];
            dims.insert(d, basis.len());
            let total: usize = lay.iter().map(|l| l.dim).sum();
            let mut span = EchelonSpan::new(total);
            if idx >= 2 {
                let (lay2, basis2) = &per[idx - 2];
                for s in basis2 {
                    for i in 0..self.nvars {
                        let v: Vec<F::Elem> = s.iter().zip(lay2).zip(lay).flat_map(|((c, l2), l)| l2.times_var(l, i, c, &zero)).collect();
                        span.insert(&v);
                    }
                }
            }
            for s in basis {
                let flat: Vec<F::Elem> = s.iter().flatten().cloned().collect();
                if span.insert(&flat) {
                    let components = s
                        .iter()
                        .zip(lay)
                        .zip(omega)
                        .map(|((c, l), &v)| l.element(c, self.stalks[v].rank(), self.nvars))
                        .collect();
                    generators.push(SectionGen { degree: d, components });
                }
            }
        }
        let out = Sections { vertices: omega.to_vec(), cutoff, dims, generators };
        let free = out.module();
        for (&d, &dim) in &out.dims {
            if free.dim(d, self.nvars) != dim {
                return Err(Error::NotFree(format!("sections have dimension {dim} in degree {d}, a free module on the generators has {}", free.dim(d, self.nvars))));
            }
        }
        if let Some(g) = out.generators.iter().find(|g| g.degree > cutoff - 4) {
            return Err(Error::CutoffInstability { degree: g.degree, cutoff });
        }
        Ok(out)
    }

    /// Dimensions of `Γ(Ω)` in degrees `dmin..=dmax`.
    pub fn section_dims(&self, omega: &[usize], dmin: i32, dmax: i32) -> BTreeMap<i32, usize> {
        (dmin..=dmax).into_par_iter().map(|d| (d, self.section_basis(omega, d).1.len())).collect()
    }

    /// Whether `Γ(ℱ) → Γ(Ω)` is onto in degree `d`.
    pub fn restriction_onto(&self, sub: &[usize], d: i32) -> bool {
        let mut order = sub.to_vec();
        order.extend((0..self.stalks.len()).filter(|v| !sub.contains(v)));
        let (_, all) = self.section_basis(&order, d);
        let (lay, part) = self.section_basis(sub, d);
        let total: usize = lay.iter().map(|l| l.dim).sum();
        let mut span = EchelonSpan::new(total);
        for s in &all {
            let v: Vec<F::Elem> = s[..sub.len()].iter().flatten().cloned().collect();
            span.insert(&v);
        }
        span.rank() == part.len()
    }

    /// `ℱ_{[x]}`: elements of `ℱ^x` killed by `ρ_{x,E}` for every edge to a
    /// vertex above `x` in `order`, fitted to a free module.
    pub fn subquotient(&self, g: &AffineWeyl, x: usize, order: Order) -> Result<GradedFree> {
        let stalk = &self.stalks[x];
        if stalk.is_zero() {
            return Ok(GradedFree::zero());
        }
        let ups: Vec<usize> = self.graph.up_edges(g, x, order).into_iter().filter(|&e| !self.edges[e].module.is_zero()).collect();
        if ups.is_empty() {
            return Ok(stalk.clone());
        }
        let zero = self.k.zero();
        let rank = stalk.rank();
        let dmin = stalk.min_degree().unwrap();
        // The kernel contains the product of the labels times the stalk.
        let hard = stalk.max_degree().unwrap() + 2 * ups.len() as i32 + 4;
        let mut gens: Vec<i32> = Vec::new();
        let mut prev: HashMap<i32, (Layout, Vec<Vec<F::Elem>>)> = HashMap::new();
        let mut d = dmin;
        loop {
            let lx = self.vertex_layout(x, d);
            let mut blocks = Vec::new();
            let mut nrows = 0;
            for &e in &ups {
                let (m, _, le) = self.rho_matrix(e, x, d);
                nrows += le.dim;
                blocks.push(m);
            }
            let mut a = Matrix::zeros(nrows, lx.dim, &zero);
            let mut r0 = 0;
            for m in &blocks {
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        a.set(r0 + r, c, m.get(r, c).clone());
                    }
                }
                r0 += m.rows();
            }
            let kernel = if lx.dim == 0 { Vec::new() } else { a.kernel(&self.k) };
            let mut span = EchelonSpan::new(lx.dim);
            if let Some((l2, k2)) = prev.get(&(d - 2)) {
                for v in k2 {
                    for i in 0..self.nvars {
                        span.insert(&l2.times_var(&lx, i, v, &zero));
                    }
                }
            }
            for v in &kernel {
                if span.insert(v) {
                    gens.push(d);
                }
            }
            let free = GradedFree::new(gens.clone());
            if free.dim(d, self.nvars) != kernel.len() {
                return Err(Error::NotFree(format!("subquotient at vertex {x} in degree {d}")));
            }
            prev.insert(d, (lx, kernel));
            prev.remove(&(d - 3));
            let last = gens.last().copied().unwrap_or(dmin);
            if gens.len() > rank {
                return Err(Error::NotFree(format!("subquotient at vertex {x} needs more than {rank} generators")));
            }
            if gens.len() == rank && d >= last + 4 {
                break;
            }
            if d >= hard {
                return Err(Error::CutoffInstability { degree: last, cutoff: hard });
            }
            d += 1;
        }
        Ok(GradedFree::new(gens))
    }

    /// `h_{⊴,l}(ℱ⟨n⟩) = Σ_x v^{l(x)} rk ℱ_{[x]}⟨n⟩ W_x`.
    pub fn character(&self, g: &AffineWeyl, order: Order, lf: LengthFn, shift: i32) -> Result<HeckeElem> {
        let parts: Vec<Result<(usize, GradedFree)>> =
            (0..self.stalks.len()).into_par_iter().map(|x| Ok((x, self.subquotient(g, x, order)?))).collect();
        let mut h = HeckeElem::zero();
        for p in parts {
            let (x, m) = p?;
            if m.is_zero() {
                continue;
            }
            let w = &self.graph.vertices()[x];
            h.add_term(w.clone(), &m.shift(shift).rk().shift(lf.eval(g, w) as i32));
        }
        Ok(h)
    }

    /// `θ̃ˢ = ϑ̃ˢ_out ∘ ϑ̃ˢ_on`.
    pub fn theta(&self, g: &AffineWeyl, s: u8) -> Result<Self> {
        tsout(g, &tson(g, self, s)?)
    }

    pub fn to_json(&self, g: &AffineWeyl) -> SheafJson {
        let names = g.root_datum().var_names();
        let word = |i: usize| g.word_string(&self.graph.vertices()[i]);
        SheafJson {
            field: self.k.label(),
            stalks: (0..self.stalks.len()).map(|i| (word(i), self.stalks[i].degrees().to_vec())).collect(),
            edges: self
                .graph
                .edges()
                .iter()
                .zip(&self.edges)
                .map(|(e, st)| EdgeStalkJson {
                    a: word(e.a),
                    b: word(e.b),
                    label: e.label.to_string(),
                    degrees: st.module.degrees().to_vec(),
                    rho_a: st.rho_a.render(&names),
                    rho_b: st.rho_b.render(&names),
                })
                .collect(),
        }
    }
}

/// `ϑ̃ˢ_on`. The sheaf is first extended by zero to `V ∪ Vs`.
pub fn tson<F: Field>(g: &AffineWeyl, f: &Sheaf<F>, s: u8) -> Result<QuotientSheaf<F>> {
    let k = f.k.clone();
    let nvars = f.nvars;
    let gs = g.gen(s);
    let old = &f.graph;
    let mut verts: Vec<AffineWeylElem> = old.vertices().to_vec();
    verts.extend(old.vertices().iter().map(|x| x.mul(gs)));
    let base = Arc::new(MomentGraph::full_subgraph(g, &verts));
    let quot = Arc::new(MomentGraph::quotient(g, &base, s));

    // Stalks: two-point sections.
    let per_coset: Vec<Result<(GradedFree, Vec<(Vec<Poly<F::Elem>>, Vec<Poly<F::Elem>>)>)>> = quot
        .vertices()
        .par_iter()
        .map(|a| {
            let ia = old.index_of(a);
            let ias = old.index_of(&a.mul(gs));
            let omega: Vec<usize> = [ia, ias].into_iter().flatten().collect();
            let top = omega.iter().filter_map(|&v| f.stalks[v].max_degree()).max();
            let Some(top) = top else { return Ok((GradedFree::zero(), Vec::new())) };
            let secs = f.sections(&omega, top + 6)?;
            let comps = secs
                .generators
                .iter()
                .map(|gen| {
                    let mut it = gen.components.iter();
                    let ca = if ia.is_some() { it.next().unwrap().clone() } else { Vec::new() };
                    let cas = if ias.is_some() { it.next().unwrap().clone() } else { Vec::new() };
                    (ca, cas)
                })
                .collect();
            Ok((secs.module(), comps))
        })
        .collect();
    let mut stalks = Vec::new();
    let mut components = Vec::new();
    for r in per_coset {
        let (m, c) = r?;
        stalks.push(m);
        components.push(c);
    }

    let old_edge = |x: &AffineWeylElem, y: &AffineWeylElem| -> Option<usize> { old.edge_between(old.index_of(x)?, old.index_of(y)?) };
    // `ρ_{x,E}` applied to a list of columns, or nothing if the edge is absent.
    let push = |e: Option<usize>, x: &AffineWeylElem, cols: &[Vec<Poly<F::Elem>>], elim: &Eliminator<F::Elem>| -> Vec<Vec<Poly<F::Elem>>> {
        match e {
            None => cols.iter().map(|_| Vec::new()).collect(),
            Some(e) => {
                let m = f.rho(e, old.index_of(x).unwrap());
                cols.iter().map(|c| m.apply(c, elim, nvars)).collect()
            }
        }
    };
    let mut edges = Vec::new();
    for (qi, qe) in quot.edges().iter().enumerate() {
        let elim = gkm_eliminator(&k, &quot, qi)?;
        let a = &quot.vertices()[qe.a];
        let b = &quot.vertices()[qe.b];
        let (as_, bs) = (a.mul(gs), b.mul(gs));
        // E joins a to b' and Es joins as to b's.
        let (b1, b1s) = if g.reflection_of_edge(a, b).is_some() { (b.clone(), bs.clone()) } else { (bs.clone(), b.clone()) };
        let e_old = old_edge(a, &b1);
        let es_old = old_edge(&as_, &b1s);
        let mut degs: Vec<i32> = Vec::new();
        for e in [e_old, es_old].into_iter().flatten() {
            degs.extend(f.edges[e].module.degrees());
        }
        let ca: Vec<_> = components[qe.a].iter().map(|(x, _)| x.clone()).collect();
        let cas: Vec<_> = components[qe.a].iter().map(|(_, y)| y.clone()).collect();
        let b_is_b1 = &b1 == b;
        let cb1: Vec<_> = components[qe.b].iter().map(|(x, y)| if b_is_b1 { x.clone() } else { y.clone() }).collect();
        let cb1s: Vec<_> = components[qe.b].iter().map(|(x, y)| if b_is_b1 { y.clone() } else { x.clone() }).collect();
        let stack = |top: Vec<Vec<Poly<F::Elem>>>, bot: Vec<Vec<Poly<F::Elem>>>, col_deg: &GradedFree| -> PolyMatrix<F::Elem> {
            let mut m = PolyMatrix::zero(degs.clone(), col_deg.degrees().to_vec(), nvars);
            for (j, (t, b)) in top.into_iter().zip(bot).enumerate() {
                for (i, p) in t.into_iter().chain(b).enumerate() {
                    m.entries[i][j] = p;
                }
            }
            m
        };
        // Rows are reordered by degree so they match the sorted module.
        let mut perm: Vec<usize> = (0..degs.len()).collect();
        perm.sort_by_key(|&i| degs[i]);
        let sort_rows = |m: PolyMatrix<F::Elem>| PolyMatrix {
            row_deg: perm.iter().map(|&i| m.row_deg[i]).collect(),
            col_deg: m.col_deg.clone(),
            entries: perm.iter().map(|&i| m.entries[i].clone()).collect(),
        };
        let rho_a = sort_rows(stack(push(e_old, a, &ca, &elim), push(es_old, &as_, &cas, &elim), &stalks[qe.a]));
        let rho_b = sort_rows(stack(push(e_old, &b1, &cb1, &elim), push(es_old, &b1s, &cb1s, &elim), &stalks[qe.b]));
        edges.push(EdgeStalk { module: GradedFree::new(degs.clone()), elim, rho_a, rho_b });
    }
    let sheaf = Sheaf::from_parts(k, quot, nvars, stalks, edges)?;
    Ok(QuotientSheaf { s, base, sheaf, components })
}

/// `ϑ̃ˢ_out`: stalks are pulled back from cosets; the edge between `x` and `xs` carries
/// `𝒢/α𝒢` with the canonical maps, other edges the stalk of the image edge.
pub fn tsout<F: Field>(g: &AffineWeyl, q: &QuotientSheaf<F>) -> Result<Sheaf<F>> {
    let gs = g.gen(q.s);
    let quot = &q.sheaf.graph;
    let base = q.base.clone();
    let k = q.sheaf.k.clone();
    let nvars = q.sheaf.nvars;
    let one = k.one();
    let coset = |x: &AffineWeylElem| -> usize {
        quot.index_of(x).or_else(|| quot.index_of(&x.mul(gs))).expect("vertex set is s-invariant")
    };
    let stalks: Vec<GradedFree> = base.vertices().iter().map(|x| q.sheaf.stalks[coset(x)].clone()).collect();
    let mut edges = Vec::new();
    for (i, e) in base.edges().iter().enumerate() {
        let elim = gkm_eliminator(&k, &base, i)?;
        let (x, y) = (&base.vertices()[e.a], &base.vertices()[e.b]);
        let (cx, cy) = (coset(x), coset(y));
        if cx == cy {
            let m = q.sheaf.stalks[cx].clone();
            let id = PolyMatrix::identity(m.degrees().to_vec(), nvars, &one);
            edges.push(EdgeStalk { module: m, elim, rho_a: id.clone(), rho_b: id });
        } else {
            let qe = quot.edge_between(cx, cy).ok_or_else(|| Error::Precondition("missing quotient edge".into()))?;
            let st = &q.sheaf.edges[qe];
            let rho_a = q.sheaf.rho(qe, cx).clone();
            let rho_b = q.sheaf.rho(qe, cy).clone();
            edges.push(EdgeStalk { module: st.module.clone(), elim, rho_a, rho_b });
        }
    }
    Sheaf::from_parts(k, base, nvars, stalks, edges)
}

/// `θ̃^{s_l} ∘ ⋯ ∘ θ̃^{s_1}(ℬ_e)` for the word `s_1 ⋯ s_l`, unshifted.
pub fn bott_samelson_sheaf<F: Field>(k: &F, g: &AffineWeyl, word: &Word) -> Result<Sheaf<F>> {
    g.check_word(word)?;
    let graph = Arc::new(MomentGraph::full_subgraph(g, &[g.identity()]));
    let mut f = Sheaf::b_e(k.clone(), g, graph)?;
    for &s in &word.0 {
        f = f.theta(g, s)?;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn a1() -> AffineWeyl {
        AffineWeyl::from_label("A1~").unwrap()
    }

    #[test]
    fn theta_of_b_e() {
        let g = a1();
        let f = bott_samelson_sheaf(&Rationals, &g, &"0".parse().unwrap()).unwrap();
        assert_eq!(f.stalks().iter().map(GradedFree::rank).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(f.edge_stalk(0).module.rank(), 1);
        let all: Vec<usize> = (0..2).collect();
        let secs = f.sections(&all, 8).unwrap();
        assert_eq!(secs.module().degrees(), &[0, 2]);
    }

    #[test]
    fn subquotients_of_theta_one() {
        let g = a1();
        let f = bott_samelson_sheaf(&Rationals, &g, &"1".parse().unwrap()).unwrap();
        let e = f.graph().index_of(&g.identity()).unwrap();
        let one = f.graph().index_of(&g.parse("1").unwrap()).unwrap();
        assert_eq!(f.subquotient(&g, e, Order::Bruhat).unwrap().degrees(), &[2]);
        assert_eq!(f.subquotient(&g, one, Order::Bruhat).unwrap().degrees(), &[0]);
        let ch = f.character(&g, Order::Bruhat, LengthFn::Bruhat, 0).unwrap();
        assert_eq!(ch.coeff(&g.identity()).to_string(), "v^2");
        assert_eq!(ch.coeff(&g.parse("1").unwrap()).to_string(), "v");
    }

    #[test]
    fn two_letter_word_ranks() {
        let g = a1();
        let f = bott_samelson_sheaf(&Rationals, &g, &"01".parse().unwrap()).unwrap();
        for w in ["", "0", "1", "01"] {
            assert_eq!(f.stalk_at(&g.parse(w).unwrap()).rank(), 1, "{w}");
        }
    }
}
