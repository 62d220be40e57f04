//! Lyndon basis invariants: the Witt count, triangularity with unit leading
//! coefficients, exact coordinate round trips, and compatibility with the
//! lowest Magnus layer.

use bcc_core::lie::{bracketing, lie_coordinates, lyndon_words, LieError};
use bcc_core::magnus::{weight, HomogeneousComponent};
use bcc_core::words::FreeWord;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Independent count oracle: Witt formula W(d, n) = (1/n) Σ_{m|n} μ(m) d^{n/m}.
fn witt(d: u64, n: u64) -> u64 {
    let mobius = |mut m: u64| -> i64 {
        let mut mu = 1i64;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if m > 1 {
            mu = -mu;
        }
        mu
    };
    let total: i64 = (1..=n)
        .filter(|m| n % m == 0)
        .map(|m| mobius(m) * (d as i64).pow((n / m) as u32))
        .sum();
    (total / n as i64) as u64
}

#[test]
fn lyndon_count_matches_witt_formula() {
    for d in 1..=3u64 {
        for n in 1..=8u64 {
            let got = lyndon_words(d as usize, n as usize).len() as u64;
            assert_eq!(got, witt(d, n), "W({d},{n})");
        }
    }
}

#[test]
fn witt_oracle_sanity() {
    assert_eq!(witt(2, 2), 1);
    assert_eq!(witt(2, 3), 2);
    assert_eq!(witt(2, 6), 9);
    assert_eq!(witt(3, 4), 18);
}

#[test]
fn antisymmetry_sanity() {
    let sym = HomogeneousComponent::from_terms(
        2,
        2,
        [(vec![1, 2], BigInt::from(1)), (vec![2, 1], BigInt::from(1))],
    );
    assert_eq!(lie_coordinates(&sym).unwrap_err(), LieError::NotLieElement);
    let anti = HomogeneousComponent::from_terms(
        2,
        2,
        [(vec![1, 2], BigInt::from(1)), (vec![2, 1], BigInt::from(-1))],
    );
    assert_eq!(lie_coordinates(&anti).unwrap().coords(), &[BigInt::from(1)]);
}

#[test]
fn surface_relator_coordinates() {
    // degree-2 layer of [x1,y1][x2,y2] over rank 4: coefficient 1 on the
    // Lyndon brackets (1,2) and (3,4), zero elsewhere
    let mut raw = Vec::new();
    for i in 0..2usize {
        let (x, y) = (2 * i + 1, 2 * i + 2);
        for (g, e) in [(x, 1), (y, 1), (x, -1i64), (y, -1)] {
            raw.push((g, BigInt::from(e)));
        }
    }
    let w = FreeWord::reduce(4, raw).unwrap();
    let (n, layer) = weight(&w, 4).unwrap();
    assert_eq!(n, 2);
    let v = lie_coordinates(&layer).unwrap();
    let basis = lyndon_words(4, 2);
    assert_eq!(v.coords().len(), basis.len());
    for (word, coeff) in basis.iter().zip(v.coords()) {
        let expect = if word == &vec![1, 2] || word == &vec![3, 4] { 1 } else { 0 };
        assert_eq!(coeff, &BigInt::from(expect), "basis word {word:?}");
    }
}

fn coeff_vector(d: usize, n: usize) -> impl Strategy<Value = Vec<i64>> {
    let count = lyndon_words(d, n).len();
    prop::collection::vec(-9i64..=9, count)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coordinates_round_trip(
        (d, n, coeffs) in (1usize..=3, 1usize..=6).prop_flat_map(|(d, n)| {
            let count = lyndon_words(d, n).len();
            (Just(d), Just(n), prop::collection::vec(-9i64..=9, count))
        }),
    ) {
        let basis = lyndon_words(d, n);
        prop_assume!(!basis.is_empty());
        let mut h = HomogeneousComponent::zero(d, n);
        for (word, c) in basis.iter().zip(&coeffs) {
            h.sub_scaled(&BigInt::from(-*c), &bracketing(d, word));
        }
        if h.is_zero() {
            // all-zero combination: nothing to recover
            prop_assert!(coeffs.iter().all(|c| *c == 0));
        } else {
            let v = lie_coordinates(&h).unwrap();
            let expect: Vec<BigInt> = coeffs.iter().map(|c| BigInt::from(*c)).collect();
            prop_assert_eq!(v.coords(), &expect[..]);
        }
    }

    #[test]
    fn magnus_layer_is_a_lie_element(
        raw in prop::collection::vec((1usize..=3, prop_oneof![Just(-1i64), Just(1i64)]), 1..=10),
    ) {
        let w = FreeWord::reduce(3, raw.iter().map(|(g, e)| (*g, BigInt::from(*e)))).unwrap();
        prop_assume!(!w.is_empty());
        let (_, layer) = weight(&w, 12).unwrap();
        prop_assert!(lie_coordinates(&layer).is_ok());
    }

    #[test]
    fn small_vectors_round_trip(coeffs in coeff_vector(2, 4)) {
        let basis = lyndon_words(2, 4);
        let mut h = HomogeneousComponent::zero(2, 4);
        for (word, c) in basis.iter().zip(&coeffs) {
            h.sub_scaled(&BigInt::from(-*c), &bracketing(2, word));
        }
        if !h.is_zero() {
            let v = lie_coordinates(&h).unwrap();
            let expect: Vec<BigInt> = coeffs.iter().map(|c| BigInt::from(*c)).collect();
            prop_assert_eq!(v.coords(), &expect[..]);
        }
    }
}
