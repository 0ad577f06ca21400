//! Randomized invariants spanning module boundaries: algebraic laws of the
//! Hilbert symbol, postconditions of the constructive solvers, and
//! round-trip guarantees of decompositions and certificates.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use integrality::exact_arith::{
    denominator, is_integer, padic_valuation, parse_rational, rational_from, Place, Valuation,
};
use integrality::formula::{
    check_certificate, eval_t1, prove_t1, refutation_certificate, refute, t1_witness_certificate,
    FormulaId, PairWitnessT1,
};
use integrality::quaternion::{
    hilbert_symbol, ramified_primes, solve_conic, ConicOutcome, QuatParams,
};
use integrality::trace_sets::{decompose_t, in_s_global, SHIFT_RANGE};
use integrality::Rational;

fn rational() -> impl Strategy<Value = Rational> {
    ((-200i64..=200).prop_filter("nonzero", |n| *n != 0), 1i64..=24)
        .prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

const PLACES: [Place; 7] = [
    Place::Infinite,
    Place::Finite(2),
    Place::Finite(3),
    Place::Finite(5),
    Place::Finite(7),
    Place::Finite(11),
    Place::Finite(97),
];

proptest! {
    #[test]
    fn rational_parsing_round_trips(n in -100_000i64..=100_000, d in 1i64..=100_000) {
        let x = Rational::new(BigInt::from(n), BigInt::from(d));
        prop_assert_eq!(&parse_rational(&x.to_string()).unwrap(), &x);
        prop_assert_eq!(&parse_rational(&format!("{n}/{d}")).unwrap(), &x);
    }

    #[test]
    fn valuations_are_additive(x in rational(), y in rational(), p in prop::sample::select(vec![2u64, 3, 5, 13])) {
        let (Valuation::Finite(vx), Valuation::Finite(vy)) =
            (padic_valuation(&x, p), padic_valuation(&y, p))
        else {
            return Err(TestCaseError::fail("nonzero rationals have finite valuation"));
        };
        prop_assert_eq!(padic_valuation(&(&x * &y), p), Valuation::Finite(vx + vy));
    }

    #[test]
    fn hilbert_symbol_is_bimultiplicative_and_symmetric(
        a in rational(),
        b in rational(),
        c in rational(),
    ) {
        for v in PLACES {
            prop_assert_eq!(hilbert_symbol(&a, &b, v), hilbert_symbol(&b, &a, v));
            prop_assert_eq!(
                hilbert_symbol(&a, &(&b * &c), v),
                hilbert_symbol(&a, &b, v) * hilbert_symbol(&a, &c, v)
            );
            // Scaling by a square changes nothing.
            let scaled = &a * rational_from(9);
            prop_assert_eq!(hilbert_symbol(&scaled, &b, v), hilbert_symbol(&a, &b, v));
        }
    }

    #[test]
    fn hilbert_symbol_norm_identities(a in rational()) {
        for v in PLACES {
            prop_assert_eq!(hilbert_symbol(&a, &(-&a), v), 1);
            let one_minus = rational_from(1) - &a;
            if !one_minus.is_zero() {
                prop_assert_eq!(hilbert_symbol(&a, &one_minus, v), 1);
            }
        }
    }

    #[test]
    fn ramification_has_even_parity_and_symmetry(a in rational(), b in rational()) {
        let d1 = ramified_primes(&QuatParams::new(a.clone(), b.clone()).unwrap()).unwrap();
        let total = d1.finite_primes.len() + usize::from(d1.infinite_ramified);
        prop_assert_eq!(total % 2, 0);
        let d2 = ramified_primes(&QuatParams::new(b.clone(), a.clone()).unwrap()).unwrap();
        prop_assert_eq!(&d1, &d2);
        // The class of a quaternion algebra depends on its parameters only
        // through square classes.
        let d3 = ramified_primes(&QuatParams::new(&a * rational_from(25), b).unwrap()).unwrap();
        prop_assert_eq!(&d1, &d3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conic_solutions_satisfy_the_equation(a in rational(), b in rational(), c in rational()) {
        match solve_conic(&a, &b, &c).unwrap() {
            ConicOutcome::Solved(x, y) => {
                prop_assert_eq!(&a * &x * &x + &b * &y * &y, c);
            }
            ConicOutcome::Unsolvable { obstruction } => {
                // The reported place certifies the failure on the
                // homogenized form.
                let (ac, bc) = (&a * &c, &b * &c);
                prop_assert_eq!(hilbert_symbol(&ac, &bc, obstruction), -1);
            }
        }
    }

    #[test]
    fn decompositions_round_trip(t in -3000i64..=3000, pair in prop::sample::select(vec![(7i64, 7i64), (3, 2), (5, 7)])) {
        let params = QuatParams::new(rational_from(pair.0), rational_from(pair.1)).unwrap();
        let t = rational_from(t);
        let d = decompose_t(&params, &t).unwrap();
        prop_assert!(d.n < SHIFT_RANGE);
        prop_assert_eq!(&d.s + &d.s_prime + rational_from(d.n as i64), t.clone());
        prop_assert!(in_s_global(&params, &d.s).unwrap());
        prop_assert!(in_s_global(&params, &d.s_prime).unwrap());
        prop_assert_eq!(decompose_t(&params, &t).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn witness_certificates_round_trip(t in -50i64..=50) {
        let t = rational_from(t);
        let (a, b) = (rational_from(7), rational_from(7));
        let witness = prove_t1(&t, &a, &b).unwrap();
        prop_assert!(eval_t1(&t, &a, &b, &witness));
        let cert = t1_witness_certificate(&t, &[PairWitnessT1 { a, b, witness }]);
        prop_assert_eq!(check_certificate(&cert, &t).unwrap(), true);
        prop_assert_eq!(check_certificate(&cert, &(&t + rational_from(1))).unwrap(), false);
    }

    #[test]
    fn refutation_certificates_round_trip(n in -500i64..=500, d in 2i64..=60) {
        let t = Rational::new(BigInt::from(n), BigInt::from(d));
        prop_assume!(!is_integer(&t));
        prop_assert!(denominator(&t) > BigInt::from(1));
        let cert = refute(&t, FormulaId::T2).unwrap();
        let json = refutation_certificate(&t, &cert);
        prop_assert_eq!(check_certificate(&json, &t).unwrap(), true);
    }
}
