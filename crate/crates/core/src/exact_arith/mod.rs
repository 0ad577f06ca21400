//! Exact arithmetic over Q: canonical rationals, places of Q, factorization,
//! p-adic valuations, local squares, CRT and four-square decompositions.
//!
//! Everything here is integer-exact; budget errors signal inputs too large for
//! desk scale, never mathematical failure.

mod crt;
mod factor;
mod four_squares;
pub mod modular;
mod squares;
mod valuation;

pub use crt::crt;
pub use factor::{factorize, factorize_with, primes_up_to, FactorBudget, Factorization};
pub use four_squares::{four_squares, two_squares_int};
pub use modular::{invmod, is_prime_u64, legendre, mulmod, powmod, smallest_nonresidue, sqrt_mod};
pub use squares::{is_square_local, is_square_rational};
pub use valuation::{padic_valuation, reduce_mod_p, reduce_unit_mod, Valuation};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A place of Q: a finite prime or the archimedean place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl Place {
    /// Constructs a finite place, verifying primality.
    pub fn finite(p: u64) -> Result<Place> {
        if modular::is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        if s == "inf" || s == "infinity" || s == "oo" {
            return Ok(Place::Infinite);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("place must be a prime or 'inf', got {s:?}")))?;
        Place::finite(p)
    }
}

/// Parses the `"num/den"` wire format ("5", "-3/7") into canonical form.
/// Rejects zero denominators instead of panicking.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            BigInt::from_str(n.trim()).map_err(|_| bad())?,
            BigInt::from_str(d.trim()).map_err(|_| bad())?,
        ),
        None => (BigInt::from_str(s.trim()).map_err(|_| bad())?, BigInt::from(1)),
    };
    if den.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Serde adapter: rationals as `"num/den"` strings in JSON.
pub mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::parse_rational;
    use crate::Rational;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

/// Convenience: integer-valued rational from an i64.
pub fn rational_from(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `true` iff x is a (rational) integer.
pub fn is_integer(x: &Rational) -> bool {
    x.is_integer()
}

/// The positive denominator of x in canonical form.
pub fn denominator(x: &Rational) -> BigInt {
    x.denom().abs()
}
