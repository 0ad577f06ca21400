//! p-adic valuations and residue maps on canonical rationals.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::modular::invmod;
use crate::error::{Error, Result};
use crate::Rational;

/// v_p(x): an integer for x != 0, infinite for x = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_nonnegative(self) -> bool {
        match self {
            Valuation::Finite(v) => v >= 0,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// Exponent of p in n (n != 0).
fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut n = n.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// v_p(x) = v_p(num) - v_p(den). Satisfies v_p(xy) = v_p(x) + v_p(y).
pub fn padic_valuation(x: &Rational, p: u64) -> Valuation {
    debug_assert!(super::modular::is_prime_u64(p));
    if x.is_zero() {
        return Valuation::Infinite;
    }
    // Canonical form: at most one of num, den is divisible by p.
    Valuation::Finite(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
}

/// red_p(x) in F_p = {0, ..., p-1} for p-integral x.
///
/// Errors with [`Error::NotPIntegral`] when v_p(x) < 0, i.e. p divides the
/// canonical denominator.
pub fn reduce_mod_p(x: &Rational, p: u64) -> Result<u64> {
    reduce_unit_mod(x, p, p)
}

/// x mod m for a modulus m that is a power of p, defined whenever the
/// denominator is a unit mod m. Used for residues mod p as well as the mod-4
/// and mod-8 classes of 2-adic units.
pub fn reduce_unit_mod(x: &Rational, p: u64, m: u64) -> Result<u64> {
    let n = mod_to_u64(x.numer(), m);
    let d = mod_to_u64(x.denom(), m);
    let d_inv = invmod(d, m).ok_or_else(|| Error::NotPIntegral {
        x: x.to_string(),
        p,
    })?;
    Ok(super::modular::mulmod(n, d_inv, m))
}

/// n mod m in [0, m).
pub fn mod_to_u64(n: &BigInt, m: u64) -> u64 {
    let m_big = BigInt::from(m);
    let r = ((n % &m_big) + &m_big) % &m_big;
    r.to_u64().expect("reduced residue fits u64")
}
