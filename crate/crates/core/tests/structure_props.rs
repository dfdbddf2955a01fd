mod common;

use alcove::field::is_prime;
use alcove::structure::{c_lambda, dinz_element, dinz_parity_holds, gkm_check, gkm_prime_set, sigma_decompose, z_membership, MomentGraph, ZElement};
use alcove::weyl::AffineWeyl;
use alcove::{AffineWeight, Field, PrimeField, Rationals};
use common::{group, random_z};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample_graphs() -> Vec<(AffineWeyl, MomentGraph)> {
    let mut v = Vec::new();
    for (ty, w) in [("A1~", "010"), ("A2~", "010"), ("A2~", "0121"), ("B2~", "012")] {
        let g = group(ty);
        let gr = MomentGraph::ideal(&g, &g.parse(w).unwrap());
        v.push((g, gr));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn z_is_closed_under_sum_and_product(seed in any::<u64>(), which in 0usize..4) {
        let (g, gr) = &sample_graphs()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_z(&Rationals, g, gr, &mut rng);
        let b = random_z(&Rationals, g, gr, &mut rng);
        prop_assert!(z_membership(&Rationals, &a, gr));
        prop_assert!(z_membership(&Rationals, &a.add(&b), gr));
        prop_assert!(z_membership(&Rationals, &a.mul(&b), gr));
    }

    #[test]
    fn perturbed_tuple_leaves_z(seed in any::<u64>()) {
        // Breaking one coordinate of a Z-element by a generic linear form leaves Z.
        let (g, gr) = &sample_graphs()[1];
        let k = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut z = random_z(&k, g, gr, &mut rng);
        let i = rng.gen_range(0..gr.num_vertices());
        let bump = alcove::poly::Poly::linear_int(&k, &[1, 3, 7]);
        z.coords[i] = z.coords[i].add(&bump);
        prop_assert!(!z_membership(&k, &z, gr));
    }
}

#[test]
fn gkm_prime_set_matches_per_prime_checks() {
    for (g, gr) in sample_graphs() {
        let set = gkm_prime_set(&gr);
        for p in (2..60).filter(|&p| is_prime(p)) {
            assert_eq!(set.contains(&p), !gkm_check(&gr, p).is_empty(), "{} p={p}", g.root_datum().label());
        }
    }
    let g = group("A1~");
    assert_eq!(gkm_prime_set(&MomentGraph::restricted(&g)).len(), 0);
}

#[test]
fn dinz_elements_over_fp() {
    let k = PrimeField::new(5).unwrap();
    for (g, gr) in sample_graphs() {
        for beta in g.root_datum().positive_roots() {
            for w in gr.vertices() {
                let z = dinz_element(&k, beta, w, &gr).unwrap();
                assert!(z_membership(&k, &z, &gr));
                assert!(dinz_parity_holds(&k, &g, &z, beta, w, &gr));
                assert!(z.coords[gr.index_of(w).unwrap()].is_zero());
            }
        }
    }
}

#[test]
fn sigma_decompose_examples() {
    let k = Rationals;
    let g = group("A1~");
    let gr = MomentGraph::ideal(&g, &g.parse("01").unwrap());
    let t = g.gen(1).clone();
    let at = g.as_reflection(&t).unwrap();
    let c = c_lambda(&k, &at.value(), &gr);
    let (plus, prime) = sigma_decompose(&k, &c, &t, &at, &gr).unwrap();
    assert!(plus.is_zero());
    assert_eq!(prime, ZElement::constant(&gr, 2, k.from_i64(1)));
    let d = c_lambda(&k, &AffineWeight::delta(1), &gr);
    let (plus, prime) = sigma_decompose(&k, &d, &t, &at, &gr).unwrap();
    assert_eq!(plus, d);
    assert!(prime.is_zero());
}
