#![allow(dead_code)]

use std::collections::HashSet;

use alcove::structure::{c_lambda, dinz_element, MomentGraph, ZElement};
use alcove::weyl::AffineWeyl;
use alcove::{AffineWeight, AffineWeylElem, Field, Word};
use rand::Rng;

pub fn group(label: &str) -> AffineWeyl {
    AffineWeyl::from_label(label).unwrap()
}

/// Every word of length `1..=maxl` over the generators (the empty word excluded).
pub fn all_words(g: &AffineWeyl, maxl: usize) -> Vec<Word> {
    let n = g.num_gens() as u8;
    let mut out = Vec::new();
    let mut cur = vec![Vec::<u8>::new()];
    for _ in 0..maxl {
        let next: Vec<Vec<u8>> = cur.iter().flat_map(|w| (0..n).map(move |s| [w.as_slice(), &[s]].concat())).collect();
        out.extend(next.iter().cloned().map(Word));
        cur = next;
    }
    out
}

/// Bruhat ideal by brute force: products of all subwords of one reduced word.
pub fn subword_ideal(g: &AffineWeyl, y: &AffineWeylElem) -> HashSet<AffineWeylElem> {
    let w = g.reduced_word(y);
    let l = w.len();
    (0u32..1 << l)
        .map(|mask| Word((0..l).filter(|i| mask >> i & 1 == 1).map(|i| w.0[i]).collect()))
        .map(|sub| g.from_word(&sub))
        .collect()
}

/// `M·Σ_{α>0} α^∨` in simple-coroot coordinates.
pub fn deep_dominant(g: &AffineWeyl, m: i64) -> Vec<i64> {
    let mut lam = vec![0; g.rank()];
    for a in g.root_datum().positive_roots() {
        for (l, c) in lam.iter_mut().zip(&a.coroot) {
            *l += m * c;
        }
    }
    lam
}

pub fn factorial(n: u64) -> num_bigint::BigUint {
    (1..=n).map(num_bigint::BigUint::from).product()
}

/// A random element of `𝒵(Ω)`: a combination of products of `c(λ)`s, a
/// `dinz` element and a constant.
pub fn random_z<F: Field>(k: &F, g: &AffineWeyl, graph: &MomentGraph, rng: &mut impl Rng) -> ZElement<F::Elem> {
    let r = g.rank();
    let n = r + 1;
    let mut basis: Vec<AffineWeight> = (0..r)
        .map(|i| {
            let mut x = vec![0; r];
            x[i] = 1;
            AffineWeight::new(x, 0)
        })
        .collect();
    basis.push(AffineWeight::delta(r));
    let c: Vec<_> = basis.iter().map(|l| c_lambda(k, l, graph)).collect();
    let mut z = ZElement::constant(graph, n, k.from_i64(rng.gen_range(-3..4)));
    for _ in 0..3 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        z = z.add(&c[i].mul(&c[j]).scale(&k.from_i64(rng.gen_range(-5..6))));
    }
    let roots = g.root_datum().positive_roots();
    let beta = &roots[rng.gen_range(0..roots.len())];
    let w = &graph.vertices()[rng.gen_range(0..graph.num_vertices())];
    let d = dinz_element(k, beta, w, graph).unwrap();
    z.add(&d.mul(&c[rng.gen_range(0..n)]).scale(&k.from_i64(rng.gen_range(-5..6))))
}

