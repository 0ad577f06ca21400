//! Ramification sets: the places where H_{a,b} is a division algebra.
//!
//! Only 2, the primes of num/den of a and b, and the infinite place can
//! ramify (at any other p both arguments are units and the odd-p closed form
//! is identically +1), so scanning that finite candidate list is complete.

use num_traits::Signed;

use crate::error::Result;
use crate::exact_arith::{factorize, Place};
use crate::quaternion::{hilbert_symbol, QuatParams, RamificationSet};

/// Computes the ramification set of H_{a,b}.
///
/// Errors only propagate from factoring num/den of a and b
/// ([`crate::Error::BudgetExceeded`] for inputs beyond desk scale).
pub fn ramified_primes(params: &QuatParams) -> Result<RamificationSet> {
    let mut candidates = vec![2u64];
    for x in [params.a(), params.b()] {
        for part in [x.numer(), x.denom()] {
            candidates.extend(factorize(&part.abs())?.primes());
        }
    }
    candidates.sort_unstable();
    candidates.dedup();

    let finite_primes: Vec<u64> = candidates
        .into_iter()
        .filter(|&p| hilbert_symbol(params.a(), params.b(), Place::Finite(p)) == -1)
        .collect();
    let infinite_ramified = hilbert_symbol(params.a(), params.b(), Place::Infinite) == -1;
    let set = RamificationSet {
        finite_primes,
        infinite_ramified,
    };
    // The product formula forces an even number of ramified places; a parity
    // failure here would mean the symbol itself is broken.
    assert!(set.parity_holds(), "ramification parity violated for {params}");
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{parse_rational, rational_from};

    fn delta(a: i64, b: i64) -> RamificationSet {
        let params = QuatParams::new(rational_from(a), rational_from(b)).unwrap();
        ramified_primes(&params).unwrap()
    }

    #[test]
    fn frozen_sets() {
        assert_eq!(delta(7, 7).finite_primes, vec![2, 7]);
        assert!(!delta(7, 7).infinite_ramified);
        assert_eq!(delta(1, 1).finite_primes, Vec::<u64>::new());
        assert_eq!(delta(3, 2).finite_primes, vec![2, 3]);
        assert_eq!(delta(3, 17).finite_primes, vec![3, 17]);
        assert_eq!(delta(3, 3).finite_primes, vec![2, 3]);
        assert_eq!(delta(2, 5).finite_primes, vec![2, 5]);
        assert_eq!(delta(5, 7).finite_primes, vec![5, 7]);
        assert_eq!(delta(-1, -1).finite_primes, vec![2]);
        assert!(delta(-1, -1).infinite_ramified);
    }

    #[test]
    fn rational_parameters() {
        let params = QuatParams::new(
            parse_rational("2/3").unwrap(),
            parse_rational("5/7").unwrap(),
        )
        .unwrap();
        let set = ramified_primes(&params).unwrap();
        // Square scaling: (2/3, 5/7) has the same symbols as (6, 35).
        assert_eq!(set, delta(6, 35));
    }

    #[test]
    fn parity_and_positivity_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let mut nonzero = |range: std::ops::RangeInclusive<i64>| loop {
                let n = rng.gen_range(range.clone());
                if n != 0 {
                    return n;
                }
            };
            let (a, b) = (nonzero(-99..=99), nonzero(-99..=99));
            let set = delta(a, b);
            assert!(set.parity_holds(), "(a, b) = ({a}, {b})");
            if a > 0 || b > 0 {
                assert!(!set.infinite_ramified, "(a, b) = ({a}, {b})");
            }
            for &p in &set.finite_primes {
                let div = 2 * a.unsigned_abs() as u128 * b.unsigned_abs() as u128;
                assert_eq!(div % p as u128, 0, "prime {p} outside candidates");
            }
        }
    }
}
