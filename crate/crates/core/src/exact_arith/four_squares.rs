//! Four-square decompositions of nonnegative rationals.
//!
//! r = m/d is reduced to the integer m*d (since r = (m*d)/d^2), which is
//! decomposed by descent: pick the largest first square, reduce to a
//! three-square instance, and close with a two-square representation built
//! from the factorization (Cornacchia roots for p = 1 mod 4, Gaussian-integer
//! products). The scans are deterministic, so outputs are reproducible.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::factor::factorize;
use super::modular::sqrt_mod;
use crate::error::{Error, Result};
use crate::Rational;

/// Floor of sqrt(n), exact for all u64 (f64 alone loses precision past 2^53).
fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Writes r >= 0 as a sum of four rational squares, exactly.
///
/// Errors with [`Error::NegativeInput`] for r < 0. The two-square descent
/// factors remainders, so inputs far beyond desk scale (numerator times
/// denominator with a hard-to-factor cofactor) can surface the factorization
/// budget error; inputs with |num|, |den| below 10^6 never do.
pub fn four_squares(r: &Rational) -> Result<[Rational; 4]> {
    if r.is_negative() {
        return Err(Error::NegativeInput(format!("four_squares({r})")));
    }
    if r.is_zero() {
        return Ok(std::array::from_fn(|_| Rational::zero()));
    }
    let den = r.denom().magnitude().clone();
    let n = r.numer().magnitude() * &den;
    let parts = four_squares_int(&n)?;
    let den = BigInt::from(den);
    Ok(parts.map(|x| Rational::new(BigInt::from(x), den.clone())))
}

/// Lagrange decomposition of an integer n >= 0.
///
/// # Termination
/// Some leading square always leaves a three-square remainder (strip a
/// representation of n), and the scan tries every candidate, largest first.
fn four_squares_int(n: &BigUint) -> Result<[BigUint; 4]> {
    if n.is_zero() {
        return Ok(std::array::from_fn(|_| BigUint::zero()));
    }
    // n = 4^k * m: decompose m and double k times.
    let twos = n.trailing_zeros().unwrap_or(0);
    let k = twos / 2;
    let m = n >> (2 * k);
    let mut x1 = m.sqrt();
    loop {
        let rem = &m - &x1 * &x1;
        if let Some([a, b, c]) = three_squares_int(&rem)? {
            let scale = |v: BigUint| v << k;
            return Ok([scale(x1), scale(a), scale(b), scale(c)]);
        }
        assert!(
            !x1.is_zero(),
            "every nonnegative integer is a sum of four squares"
        );
        x1 -= 1u32;
    }
}

/// Three-square decomposition, or None for m = 4^j (8k + 7).
fn three_squares_int(m: &BigUint) -> Result<Option<[BigUint; 3]>> {
    if m.is_zero() {
        return Ok(Some(std::array::from_fn(|_| BigUint::zero())));
    }
    let twos = m.trailing_zeros().unwrap_or(0);
    let j = twos / 2;
    let m = m >> (2 * j);
    if (&m % 8u32) == BigUint::from(7u32) {
        return Ok(None);
    }
    let mut x = m.sqrt();
    loop {
        let rem = &m - &x * &x;
        if let Some((a, b)) = two_squares_int(&rem)? {
            let scale = |v: BigUint| v << j;
            return Ok(Some([scale(x), scale(a), scale(b)]));
        }
        // m is not 4^j (8k+7), so a representation exists and the descending
        // scan cannot run past zero.
        assert!(!x.is_zero(), "three-square theorem");
        x -= 1u32;
    }
}

/// Two-square decomposition from the factorization, or None when some prime
/// p = 3 mod 4 divides n to an odd power.
pub fn two_squares_int(n: &BigUint) -> Result<Option<(BigUint, BigUint)>> {
    if n.is_zero() {
        return Ok(Some((BigUint::zero(), BigUint::zero())));
    }
    let f = factorize(&BigInt::from(n.clone()))?;
    // Gaussian integer x + yi accumulating one representation per factor.
    let (mut x, mut y) = (BigInt::one(), BigInt::zero());
    for (p, e) in f.factors {
        if p == 2 {
            for _ in 0..e {
                // multiply by 1 + i
                (x, y) = (&x - &y, x + y);
            }
        } else if p % 4 == 1 {
            let (a, b) = cornacchia(p);
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            for _ in 0..e {
                (x, y) = (&x * &a - &y * &b, &x * &b + &y * &a);
            }
        } else {
            if e % 2 != 0 {
                return Ok(None);
            }
            let scale = BigInt::from(p).pow(e / 2);
            x *= &scale;
            y *= scale;
        }
    }
    let (x, y) = (x.magnitude().clone(), y.magnitude().clone());
    debug_assert_eq!(&x * &x + &y * &y, *n);
    Ok(Some(if x <= y { (x, y) } else { (y, x) }))
}

/// p = a^2 + b^2 for prime p = 1 mod 4 via the Hermite-Serret walk on
/// gcd(p, sqrt(-1)).
fn cornacchia(p: u64) -> (u64, u64) {
    let z = sqrt_mod(p - 1, p).expect("-1 is a residue mod p = 1 mod 4");
    let (mut a, mut b) = (p, z);
    // Euclid remainders of (p, sqrt(-1)); the first one below sqrt(p) is a leg.
    while isqrt_u64(p) < b {
        (a, b) = (b, a % b);
    }
    let rem = p - b * b;
    let c = isqrt_u64(rem);
    debug_assert_eq!(c * c, rem, "p - b^2 must be a perfect square");
    (b.min(c), b.max(c))
}
