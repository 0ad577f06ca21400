//! Chinese remainder theorem over BigInt moduli.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Combines congruences x = r_i (mod m_i) into (x, M) with 0 <= x < M = prod m_i.
///
/// Moduli must be >= 1 and pairwise coprime. Empty input yields (0 mod 1).
pub fn crt(congruences: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt)> {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in congruences {
        if m < &BigInt::one() {
            return Err(Error::InvalidInput(format!("modulus {m} must be >= 1")));
        }
        let g = modulus.gcd(m);
        if !g.is_one() {
            return Err(Error::NotCoprime(format!("gcd({modulus}, {m}) = {g}")));
        }
        // Solve x' = x (mod modulus), x' = r (mod m): x' = x + modulus * k
        // with k = (r - x) * modulus^{-1} (mod m).
        let inv = mod_inverse(&modulus, m).ok_or_else(|| {
            Error::NotCoprime(format!("{modulus} not invertible mod {m}"))
        })?;
        let k = ((r - &x) * inv).mod_floor(m);
        x += &modulus * k;
        modulus *= m;
        x = x.mod_floor(&modulus);
    }
    Ok((x, modulus))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}
