//! Hilbert symbols (a, b)_v over Q by the classical closed forms.
//!
//! (a, b)_v = +1 iff z^2 = a x^2 + b y^2 has a nonzero solution over the
//! completion at v. The closed forms need only valuations, Legendre symbols,
//! and the unit residues mod 4 and 8; a brute-force solvability oracle lives
//! in the test suite, never in this path.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact_arith::{legendre, padic_valuation, reduce_unit_mod, Place, Valuation};
use crate::Rational;

/// Computes (a, b)_v for nonzero rationals. Panics on zero input (the symbol
/// is undefined there); callers validate via [`super::QuatParams`] or locally.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: Place) -> i8 {
    assert!(
        !a.numer().is_zero() && !b.numer().is_zero(),
        "hilbert symbol needs nonzero arguments"
    );
    match v {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(2) => hilbert_at_2(a, b),
        Place::Finite(p) => hilbert_at_odd(a, b, p),
    }
}

/// Odd p: for a = p^alpha u, b = p^beta w (u, w units),
/// (a,b)_p = (-1)^(alpha beta eps(p)) (u|p)^beta (w|p)^alpha
/// where eps(p) = (p-1)/2 mod 2 and (.|p) is the Legendre symbol.
fn hilbert_at_odd(a: &Rational, b: &Rational, p: u64) -> i8 {
    let (alpha, u) = unit_part(a, p);
    let (beta, w) = unit_part(b, p);
    let eps = ((p - 1) / 2 % 2) as i64;
    let mut exponent = alpha * beta * eps;
    if legendre(u, p) == -1 {
        exponent += beta;
    }
    if legendre(w, p) == -1 {
        exponent += alpha;
    }
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// p = 2: with eps(u) = (u-1)/2 mod 2 (u mod 4) and
/// omega(u) = (u^2-1)/8 mod 2 (u mod 8),
/// (a,b)_2 = (-1)^(eps(u) eps(w) + alpha omega(w) + beta omega(u)).
fn hilbert_at_2(a: &Rational, b: &Rational) -> i8 {
    let (alpha, u8) = unit_part_mod(a, 2, 8);
    let (beta, w8) = unit_part_mod(b, 2, 8);
    let eps = |r: u64| u64::from(r % 4 == 3);
    let omega = |r: u64| u64::from(r == 3 || r == 5);
    let exponent = eps(u8) * eps(w8) + alpha.unsigned_abs() % 2 * omega(w8)
        + beta.unsigned_abs() % 2 * omega(u8);
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// (v_p(x), unit part of x mod p) for x != 0.
fn unit_part(x: &Rational, p: u64) -> (i64, u64) {
    unit_part_mod(x, p, p)
}

/// (v_p(x), residue of x p^(-v_p(x)) mod m) where p | m.
///
/// For x = num/den the unit part reduces as num' * den'^(-1) mod m once the
/// p-powers are stripped, so no big-integer division is needed.
fn unit_part_mod(x: &Rational, p: u64, m: u64) -> (i64, u64) {
    let val = match padic_valuation(x, p) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => unreachable!("nonzero input"),
    };
    let shift = i32::try_from(-val).expect("desk-scale valuation");
    let unit = x * Rational::from_integer(BigInt::from(p)).pow(shift);
    let residue = reduce_unit_mod(&unit, p, m).expect("unit part has valuation 0");
    (val, residue)
}
