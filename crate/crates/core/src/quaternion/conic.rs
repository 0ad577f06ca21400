//! Constructive solver for a x^2 + b y^2 = c over Q.
//!
//! Strategy: scan for a local obstruction first (a place v where the Hilbert
//! symbol of the homogenized form is -1); report Unsolvable only with such a
//! witness. Otherwise a solution exists (Hasse principle), and it is found by
//! a small deterministic search followed by Lagrange descent on the
//! homogenized squarefree form. Every success is substitution-verified before
//! return. Search failure without an obstruction is a budget error, never a
//! claim of unsolvability.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{crt, factorize, sqrt_mod, two_squares_int, Place};
use crate::quaternion::hilbert_symbol;
use crate::Rational;

/// Outcome of [`solve_conic`]: a verified solution, or a named obstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConicOutcome {
    Solved(Rational, Rational),
    Unsolvable { obstruction: Place },
}

/// Solves a x^2 + b y^2 = c exactly, or exhibits a local obstruction.
pub fn solve_conic(a: &Rational, b: &Rational, c: &Rational) -> Result<ConicOutcome> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(Error::PreconditionViolation(
            "solve_conic needs nonzero a, b, c".into(),
        ));
    }
    let ac = a * c;
    let bc = b * c;
    if let Some(obstruction) = conic_obstruction(a, b, c)? {
        return Ok(ConicOutcome::Unsolvable { obstruction });
    }

    if let Some((x, y)) = small_search(a, b, c) {
        return Ok(ConicOutcome::Solved(x, y));
    }

    let (x, y) = descend_homogeneous(a, b, c, &ac, &bc)?;
    let (x, y) = (x.abs(), y.abs());
    assert_eq!(a * &x * &x + b * &y * &y, *c, "descent produced a non-solution");
    Ok(ConicOutcome::Solved(x, y))
}

/// First place where a x^2 + b y^2 = c has no local point, if any.
///
/// Homogenized, the conic is (ac) X^2 + (bc) Y^2 = Z^2, which has a point at
/// v iff the Hilbert symbol (ac, bc)_v is +1. Only infinity, 2, and the
/// primes of a, b, c can carry -1, and they are scanned in that order; every
/// other place is +1 by the closed form, so a clear scan plus the product
/// formula leaves no obstruction at all and a rational point exists.
fn conic_obstruction(a: &Rational, b: &Rational, c: &Rational) -> Result<Option<Place>> {
    let ac = a * c;
    let bc = b * c;
    if hilbert_symbol(&ac, &bc, Place::Infinite) == -1 {
        return Ok(Some(Place::Infinite));
    }
    let mut candidates = vec![2u64];
    for x in [a, b, c] {
        for part in [x.numer(), x.denom()] {
            candidates.extend(factorize(&part.abs())?.primes());
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    for p in candidates {
        if hilbert_symbol(&ac, &bc, Place::Finite(p)) == -1 {
            return Ok(Some(Place::Finite(p)));
        }
    }
    Ok(None)
}

/// Deterministic scan over small rationals; keeps desk examples exact and
/// stable (e.g. (1,1,2) -> (1,1)).
fn small_search(a: &Rational, b: &Rational, c: &Rational) -> Option<(Rational, Rational)> {
    let candidates: Vec<Rational> = [(0, 1), (1, 1), (1, 2), (2, 1), (1, 3), (2, 3), (3, 2), (3, 1)]
        .into_iter()
        .map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
        .collect();
    for x in &candidates {
        for y in &candidates {
            if a * x * x + b * y * y == *c {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

/// Finds a nontrivial rational (X, Y, Z) on (ac) X^2 + (bc) Y^2 = Z^2 by
/// descent, then extracts an affine solution of a x^2 + b y^2 = c.
fn descend_homogeneous(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    ac: &Rational,
    bc: &Rational,
) -> Result<(Rational, Rational)> {
    // ac = A_int / den^2 with A_int = num * den, so X picks up a factor den.
    let a_int = ac.numer() * ac.denom();
    let b_int = bc.numer() * bc.denom();
    let (sa, ma) = squarefree_part(&a_int)?;
    let (sb, mb) = squarefree_part(&b_int)?;
    let (u, v, w) = descend(&sa, &sb)?;
    // sa u^2 + sb v^2 = w^2 scales to A_int (u mb)^2 + B_int (v ma)^2 = (ma mb w)^2.
    let x_h = Rational::from_integer(u * &mb * ac.denom());
    let y_h = Rational::from_integer(v * &ma * bc.denom());
    let z_h = Rational::from_integer(&ma * &mb * w);
    debug_assert_eq!(ac * &x_h * &x_h + bc * &y_h * &y_h, &z_h * &z_h);

    if !z_h.is_zero() {
        return Ok((c * &x_h / &z_h, c * &y_h / &z_h));
    }
    // Z = 0: the conic degenerates into the line pair x = +-tau y scaled, with
    // tau^2 = -b/a; factor a(x - tau y)(x + tau y) = c directly.
    let tau = &x_h / &y_h;
    debug_assert_eq!(&tau * &tau, -(b / a));
    let ca = c / a;
    let one = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    let x = (&one + &ca) / &two;
    let y = (&ca - &one) / (&two * &tau);
    Ok((x, y))
}

/// The squarefree part with sign, and the leftover square root:
/// n = result.0 * result.1^2.
fn squarefree_part(n: &BigInt) -> Result<(BigInt, BigInt)> {
    let f = factorize(n).map_err(descent_budget)?;
    let mut sf = BigInt::from(f.sign);
    let mut m = BigInt::one();
    for (p, e) in f.factors {
        let p = BigInt::from(p);
        if e % 2 == 1 {
            sf *= &p;
        }
        m *= p.pow(e / 2);
    }
    Ok((sf, m))
}

fn descent_budget(e: Error) -> Error {
    match e {
        Error::BudgetExceeded(msg) => {
            Error::SearchBudgetExceeded(format!("factorization during descent: {msg}"))
        }
        other => other,
    }
}

/// Lagrange descent: a nontrivial integer solution of a u^2 + b v^2 = w^2 for
/// squarefree nonzero a, b, assuming the form is solvable (callers have ruled
/// out every local obstruction; each descent step preserves solvability).
fn descend(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    debug_assert!(!a.is_zero() && !b.is_zero());
    if a.is_one() {
        return Ok((BigInt::one(), BigInt::zero(), BigInt::one()));
    }
    if b.is_one() {
        return Ok((BigInt::zero(), BigInt::one(), BigInt::one()));
    }
    if a.magnitude() < b.magnitude() {
        let (v, u, w) = descend(b, a)?;
        return Ok((u, v, w));
    }
    if *b == BigInt::from(-1) {
        // a > 0 here: a < 0 with b = -1 is obstructed at infinity, which the
        // caller has excluded.
        assert!(a.is_positive(), "(negative, -1) form cannot reach descent");
        let (s, t) = two_squares_int(a.magnitude())
            .map_err(descent_budget)?
            .expect("a form solvable everywhere locally splits off two squares");
        return Ok((BigInt::one(), BigInt::from(s), BigInt::from(t)));
    }
    // Now |a| >= |b| >= 2. Find t with t^2 = b mod |a| via the prime
    // factorization of the squarefree a; local solvability at each odd p | a
    // guarantees the square root exists.
    let fa = factorize(a).map_err(descent_budget)?;
    let mut congruences = Vec::new();
    for (p, _) in &fa.factors {
        let bp = b.mod_floor(&BigInt::from(*p));
        let bp = u64::try_from(&bp).expect("residue fits");
        let root = if *p == 2 {
            bp % 2
        } else {
            sqrt_mod(bp, *p).expect("b is a square mod odd primes of a on a solvable form")
        };
        congruences.push((BigInt::from(root), BigInt::from(*p)));
    }
    let (mut t, modulus) = crt(&congruences)?;
    debug_assert_eq!(modulus, a.abs());
    if &t + &t > modulus {
        t -= &modulus;
    }
    // t^2 - b = a c m^2 with c squarefree; |t| <= |a|/2 gives |c| <= |a|/4 + 1,
    // so the pair keeps shrinking and the recursion terminates.
    let d = &t * &t - b;
    assert!(
        !d.is_zero(),
        "t^2 = b is impossible for squarefree |b| >= 2"
    );
    let e = &d / a;
    debug_assert_eq!(a * &e, d);
    let (c, m) = squarefree_part(&e)?;
    let (u, v, w) = descend(&c, b)?;
    // c u^2 + b v^2 = w^2 maps to (a, b) via X = c m u, Y = t v + w, Z = t w + b v.
    let x = &c * &m * u;
    let y = &t * &v + &w;
    let z = &t * w + b * v;
    let g = x.gcd(&y).gcd(&z);
    debug_assert!(!g.is_zero(), "descent transform lost nontriviality");
    let (x, y, z) = (x / &g, y / &g, z / &g);
    debug_assert_eq!(a * &x * &x + b * &y * &y, &z * &z);
    Ok((x, y, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{parse_rational, rational_from};

    fn solve(a: &str, b: &str, c: &str) -> ConicOutcome {
        solve_conic(
            &parse_rational(a).unwrap(),
            &parse_rational(b).unwrap(),
            &parse_rational(c).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn pinned_small_solutions() {
        assert_eq!(
            solve("1", "1", "2"),
            ConicOutcome::Solved(rational_from(1), rational_from(1))
        );
        assert_eq!(
            solve("2", "3", "5"),
            ConicOutcome::Solved(rational_from(1), rational_from(1))
        );
    }

    #[test]
    fn obstructions_are_named() {
        assert_eq!(
            solve("1", "1", "-1"),
            ConicOutcome::Unsolvable {
                obstruction: Place::Infinite
            }
        );
        // x^2 + y^2 = 7: the homogenized symbol (7,7)_2 already fails.
        assert_eq!(
            solve("1", "1", "7"),
            ConicOutcome::Unsolvable {
                obstruction: Place::Finite(2)
            }
        );
        // 7 x^2 + 7 y^2 = 5/4 is obstructed at 2 (and at 7).
        assert_eq!(
            solve("7", "7", "5/4"),
            ConicOutcome::Unsolvable {
                obstruction: Place::Finite(2)
            }
        );
    }

    #[test]
    fn descent_is_exercised_and_exact() {
        // Solution exists but lies outside the small-search grid.
        let a = parse_rational("2").unwrap();
        let b = parse_rational("3").unwrap();
        let c = parse_rational("197/49").unwrap();
        match solve_conic(&a, &b, &c).unwrap() {
            ConicOutcome::Solved(x, y) => {
                assert_eq!(&a * &x * &x + &b * &y * &y, c);
            }
            other => panic!("expected a solution, got {other:?}"),
        }
    }

    #[test]
    fn random_planted_solutions_round_trip() {
        use rand::{Rng, SeedableRng};
        fn nonzero(rng: &mut rand_chacha::ChaCha8Rng, lo: i64, hi: i64) -> i64 {
            loop {
                let n = rng.gen_range(lo..=hi);
                if n != 0 {
                    return n;
                }
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let mut solved_by_descent = 0;
        for trial in 0..250 {
            let a = rational_from(nonzero(&mut rng, -30, 30));
            let b = rational_from(nonzero(&mut rng, -30, 30));
            let x0 = Rational::new(nonzero(&mut rng, -9, 9).into(), rng.gen_range(1i64..=6).into());
            let y0 = Rational::new(nonzero(&mut rng, -9, 9).into(), rng.gen_range(1i64..=6).into());
            let c = &a * &x0 * &x0 + &b * &y0 * &y0;
            if c.is_zero() {
                continue;
            }
            match solve_conic(&a, &b, &c).unwrap() {
                ConicOutcome::Solved(x, y) => {
                    assert_eq!(&a * &x * &x + &b * &y * &y, c, "trial {trial}");
                    if x != x0.abs() || y != y0.abs() {
                        solved_by_descent += 1;
                    }
                }
                ConicOutcome::Unsolvable { obstruction } => {
                    panic!("planted solution ({x0}, {y0}) reported unsolvable at {obstruction}")
                }
            }
        }
        assert!(solved_by_descent > 50, "descent path under-exercised");
    }

    #[test]
    fn deterministic() {
        let run = || solve("5", "-7", "13/9");
        assert_eq!(run(), run());
    }

    #[test]
    fn rejects_zero_coefficients() {
        assert!(matches!(
            solve_conic(
                &rational_from(0),
                &rational_from(1),
                &rational_from(1)
            ),
            Err(Error::PreconditionViolation(_))
        ));
    }
}
