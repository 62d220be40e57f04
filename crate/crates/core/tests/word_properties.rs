//! Word-level invariants: idempotence of reduction, inverse cancellation,
//! the abelianization homomorphism law, cyclic-reduction conjugacy, and the
//! parser round trip.

use bcc_core::words::{FreeWord, Presentation};
use num_bigint::BigInt;
use proptest::prelude::*;

type Raw = Vec<(usize, i64)>;

fn raw_word(rank: usize, max_len: usize) -> impl Strategy<Value = Raw> {
    prop::collection::vec((1..=rank, -3i64..=3), 0..=max_len)
}

fn build(rank: usize, raw: &[(usize, i64)]) -> FreeWord {
    FreeWord::reduce(rank, raw.iter().map(|(g, e)| (*g, BigInt::from(*e)))).unwrap()
}

proptest! {
    #[test]
    fn reduce_is_idempotent(raw in raw_word(3, 16)) {
        let once = build(3, &raw);
        let twice = FreeWord::reduce(3, once.letters().to_vec()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn word_times_inverse_is_trivial(raw in raw_word(3, 16)) {
        let w = build(3, &raw);
        prop_assert!(w.concat(&w.inverse()).unwrap().is_empty());
        prop_assert!(w.inverse().concat(&w).unwrap().is_empty());
    }

    #[test]
    fn exponent_sums_are_a_homomorphism(a in raw_word(3, 12), b in raw_word(3, 12)) {
        let u = build(3, &a);
        let v = build(3, &b);
        let uv = u.concat(&v).unwrap();
        let expect: Vec<BigInt> = u
            .exponent_sums()
            .iter()
            .zip(v.exponent_sums())
            .map(|(x, y)| x + y)
            .collect();
        prop_assert_eq!(uv.exponent_sums(), expect);
    }

    #[test]
    fn cyclic_reduce_is_a_conjugation(raw in raw_word(3, 16)) {
        let w = build(3, &raw);
        let (g, core) = w.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        let rebuilt = g.concat(&core).unwrap().concat(&g.inverse()).unwrap();
        prop_assert_eq!(rebuilt, w);
    }

    #[test]
    fn presentation_round_trips(raw in raw_word(3, 12)) {
        let w = build(3, &raw);
        let (_, core) = w.cyclic_reduce();
        prop_assume!(!core.is_empty());
        let names = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        let text = format!(
            "< {} | {} >",
            names.join(", "),
            core.letters()
                .iter()
                .map(|(g, e)| format!("{}^{}", names[g - 1], e))
                .collect::<Vec<_>>()
                .join(" ")
        );
        let p = Presentation::parse(&text).unwrap();
        let again = Presentation::parse(&p.to_string()).unwrap();
        prop_assert_eq!(p, again);
    }
}
