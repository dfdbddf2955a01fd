mod common;

use alcove::bm::{bm_sheaf, bm_sheaf_in_order, check_bm_properties, check_mone, default_cutoff, smooth_locus, verify_conjecture};
use alcove::hecke::Hecke;
use alcove::{Error, PrimeField, Rationals};
use common::group;

#[test]
fn bm_sheaves_satisfy_defining_properties() {
    for (ty, l) in [("A1~", 5), ("A2~", 3)] {
        let g = group(ty);
        for w in g.elements_up_to_length(l) {
            let s = bm_sheaf(&Rationals, &g, &w, None).unwrap();
            check_bm_properties(&g, &s, &w, default_cutoff(&g, &w)).unwrap_or_else(|e| panic!("{ty} {}: {e}", g.word_string(&w)));
        }
    }
}

#[test]
fn processing_order_does_not_matter() {
    let g = group("A2~");
    for w in g.elements_up_to_length(4).into_iter().filter(|w| g.length(w) == 4) {
        let a = bm_sheaf(&Rationals, &g, &w, None).unwrap();
        // Another linear extension: by length, ties broken by the reversed word.
        let mut order = g.bruhat_ideal(&w);
        order.sort_by_cached_key(|x| (std::cmp::Reverse(g.length(x)), std::cmp::Reverse(g.reduced_word(x))));
        let b = bm_sheaf_in_order(&Rationals, &g, &w, &order, None).unwrap();
        for x in a.graph().vertices() {
            assert_eq!(a.stalk_at(x), b.stalk_at(x), "{} at {}", g.word_string(&w), g.word_string(x));
        }
    }
}

#[test]
fn order_must_start_at_w_and_descend() {
    let g = group("A1~");
    let w = g.parse("010").unwrap();
    let mut order = g.bruhat_ideal(&w);
    assert!(matches!(bm_sheaf_in_order(&Rationals, &g, &w, &order, None), Err(Error::Precondition(_))));
    order.reverse();
    order.swap(1, 5);
    assert!(matches!(bm_sheaf_in_order(&Rationals, &g, &w, &order, None), Err(Error::Precondition(_))));
}

#[test]
fn low_cutoff_is_reported() {
    let g = group("A2~");
    let w = g.parse("01201").unwrap();
    assert!(matches!(bm_sheaf(&Rationals, &g, &w, Some(4)), Err(Error::CutoffInstability { .. })));
}

#[test]
fn gkm_gate_rejects_bad_primes() {
    let g = group("A2~");
    let w = g.parse("0121").unwrap();
    let err = bm_sheaf(&PrimeField::new(3).unwrap(), &g, &w, None).unwrap_err();
    assert!(matches!(err, Error::Gkm { .. }), "{err}");
    assert!(bm_sheaf(&PrimeField::new(5).unwrap(), &g, &w, None).is_ok());
}

#[test]
fn singular_rank_two_stalks() {
    let h = Hecke::new(group("A2~"));
    let g = h.group().clone();
    let w = g.parse("01201").unwrap();
    let rep = verify_conjecture(&Rationals, &h, &w, None).unwrap();
    assert!(rep.matches);
    let singular: Vec<&str> = rep.rows.iter().filter(|r| r.rank > 1).map(|r| r.x.as_str()).collect();
    assert_eq!(singular, ["e", "0", "1", "01"]);
    assert!(rep.rows.iter().filter(|r| r.rank > 1).all(|r| r.degrees == [0, 2]));
    let smooth = smooth_locus(&Rationals, &g, &w).unwrap();
    assert_eq!(smooth.len(), rep.rows.len() - 4);
    assert!(check_mone(&PrimeField::new(5).unwrap(), &h, &w).unwrap());
}

#[test]
fn graded_ranks_track_kl_polynomials() {
    let h = Hecke::new(group("A2~"));
    let g = h.group().clone();
    for w in g.elements_up_to_length(4) {
        let rep = verify_conjecture(&Rationals, &h, &w, None).unwrap();
        assert!(rep.rows.iter().all(|r| r.graded_equal), "{}", rep.w);
    }
}
