//! Local and global square tests for nonzero rationals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::modular::legendre;
use super::valuation::{padic_valuation, reduce_unit_mod, Valuation};
use super::Place;
use crate::error::{Error, Result};
use crate::Rational;

/// Is x a square in the completion Q_v?
///
/// * v = infinity: x > 0.
/// * v = p odd: v_p(x) even and the unit part a residue mod p.
/// * v = 2: v_2(x) even and the unit part = 1 mod 8.
///
/// Requires x != 0 (0 is a degenerate square everywhere; callers that can see
/// zero must branch first).
pub fn is_square_local(x: &Rational, v: &Place) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::PreconditionViolation(
            "is_square_local requires x != 0".into(),
        ));
    }
    match *v {
        Place::Infinite => Ok(x.is_positive()),
        Place::Finite(p) => {
            let val = match padic_valuation(x, p) {
                Valuation::Finite(v) => v,
                Valuation::Infinite => unreachable!("x != 0"),
            };
            if val % 2 != 0 {
                return Ok(false);
            }
            let unit = x * Rational::from_integer(BigInt::from(p)).pow(-val as i32);
            if p == 2 {
                Ok(reduce_unit_mod(&unit, 2, 8)? == 1)
            } else {
                Ok(legendre(reduce_unit_mod(&unit, p, p)?, p) == 1)
            }
        }
    }
}

/// Is x a square in Q itself? (Exact: numerator and denominator must both be
/// perfect squares and x >= 0.)
pub fn is_square_rational(x: &Rational) -> bool {
    sqrt_rational(x).is_some()
}

/// The exact nonnegative square root of x, when one exists in Q.
pub fn sqrt_rational(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let num = x.numer().magnitude().sqrt();
    let den = x.denom().magnitude().sqrt();
    let candidate = Rational::new(BigInt::from(num), BigInt::from(den));
    if &candidate * &candidate == *x {
        Some(candidate)
    } else {
        None
    }
}
