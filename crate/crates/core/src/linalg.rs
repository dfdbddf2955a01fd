//! Dense exact linear algebra over a `Field`.

use crate::field::{Field, Scalar};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Scalar> Matrix<E> {
    pub fn zeros(rows: usize, cols: usize, zero: &E) -> Self {
        Matrix { rows, cols, data: vec![zero.clone(); rows * cols] }
    }

    /// All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn identity<F: Field<Elem = E>>(k: &F, n: usize) -> Self {
        let mut m = Self::zeros(n, n, &k.zero());
        for i in 0..n {
            m.set(i, i, k.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul_vec(&self, x: &[E], zero: &E) -> Vec<E> {
        (0..self.rows)
            .map(|i| {
                let mut acc = zero.clone();
                for (a, b) in self.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        self.rref_tracked(None)
    }

    fn rref_tracked(&mut self, mut track: Option<&mut Matrix<E>>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            self.swap_rows(r, p);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(r, p);
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            self.scale_row(r, &inv);
            if let Some(t) = track.as_deref_mut() {
                t.scale_row(r, &inv);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    self.axpy_row(i, r, &f);
                    if let Some(t) = track.as_deref_mut() {
                        t.axpy_row(i, r, &f);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn scale_row(&mut self, i: usize, f: &E) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            if !v.is_zero() {
                *v = v.clone() * f.clone();
            }
        }
    }

    /// row_i -= f * row_src
    fn axpy_row(&mut self, i: usize, src: usize, f: &E) {
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                let v = &mut self.data[i * self.cols + j];
                *v = v.clone() - f.clone() * s;
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn kernel<F: Field<Elem = E>>(&self, k: &F) -> Vec<Vec<E>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![k.zero(); self.cols];
            v[free] = k.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Solves `A x = b` for many right-hand sides, from `P A = R` with `R` reduced.
#[derive(Clone, Debug)]
pub struct Solver<E> {
    p: Matrix<E>,
    r: Matrix<E>,
    pivots: Vec<usize>,
}

impl<E: Scalar> Solver<E> {
    pub fn new<F: Field<Elem = E>>(k: &F, a: &Matrix<E>) -> Self {
        let mut r = a.clone();
        let mut p = Matrix::identity(k, a.rows);
        let pivots = r.rref_tracked(Some(&mut p));
        Solver { p, r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A solution of `A x = b` (free variables set to zero), if one exists.
    pub fn solve<F: Field<Elem = E>>(&self, k: &F, b: &[E]) -> Option<Vec<E>> {
        let pb = self.p.mul_vec(b, &k.zero());
        if pb[self.pivots.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![k.zero(); self.r.cols];
        for (i, &c) in self.pivots.iter().enumerate() {
            x[c] = pb[i].clone();
        }
        Some(x)
    }
}

/// An incrementally grown subspace kept in echelon form.
#[derive(Clone, Debug)]
pub struct EchelonSpan<E> {
    dim: usize,
    rows: Vec<(usize, Vec<E>)>,
}

impl<E: Scalar> EchelonSpan<E> {
    pub fn new(dim: usize) -> Self {
        EchelonSpan { dim, rows: Vec::new() }
    }
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` modulo the span; zero iff `v` lies in it.
    pub fn reduce(&self, v: &[E]) -> Vec<E> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for (a, b) in w.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *a = a.clone() - f.clone() * b.clone();
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[E]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[E]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else { return false };
        let inv = w[p].inv().expect("nonzero");
        let w: Vec<E> = w.into_iter().map(|x| if x.is_zero() { x } else { x * inv.clone() }).collect();
        self.rows.push((p, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(rows: Vec<Vec<i64>>) -> Matrix<num_rational::BigRational> {
        let k = Rationals;
        let cols = rows[0].len();
        Matrix::from_rows(cols, rows.into_iter().map(|r| r.into_iter().map(|a| k.from_i64(a)).collect()).collect())
    }

    #[test]
    fn kernel_is_annihilated() {
        let k = Rationals;
        let a = q(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        let ker = a.kernel(&k);
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0], &k.zero()).iter().all(Scalar::is_zero));
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn solver_finds_preimages() {
        let k = PrimeField::new(7).unwrap();
        let rows = vec![vec![1, 2, 0], vec![0, 1, 1], vec![1, 3, 1]];
        let a = Matrix::from_rows(3, rows.into_iter().map(|r| r.into_iter().map(|x| k.from_i64(x)).collect()).collect());
        let s = Solver::new(&k, &a);
        let b: Vec<_> = [3, 1, 4].iter().map(|&x| k.from_i64(x)).collect();
        let x = s.solve(&k, &b).unwrap();
        assert_eq!(a.mul_vec(&x, &k.zero()), b);
        let bad: Vec<_> = [1, 0, 0].iter().map(|&x| k.from_i64(x)).collect();
        assert!(s.solve(&k, &bad).is_none());
    }

    #[test]
    fn span_membership() {
        let k = Rationals;
        let mut s = EchelonSpan::new(3);
        let e = |v: [i64; 3]| v.iter().map(|&a| k.from_i64(a)).collect::<Vec<_>>();
        assert!(s.insert(&e([0, 1, 1])));
        assert!(s.insert(&e([1, 1, 0])));
        assert!(!s.insert(&e([1, 2, 1])));
        assert!(s.contains(&e([2, 3, 1])));
        assert!(!s.contains(&e([0, 0, 1])));
    }
}
