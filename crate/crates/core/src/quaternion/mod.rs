//! Quaternion algebras H_{a,b} over Q: Hilbert symbols at every place,
//! ramification sets, and a constructive solver for the norm-one equation
//! with prescribed reduced trace.
//!
//! H_{a,b} has basis 1, i, j, ij with i^2 = a, j^2 = b, ij = -ji. The places
//! where it stays a division algebra are read off Hilbert symbols; they drive
//! every integrality certificate downstream.

mod conic;
mod hilbert;
mod norm_trace;
mod ramification;

pub use conic::{solve_conic, ConicOutcome};
pub use hilbert::hilbert_symbol;
pub use norm_trace::solve_norm_trace;
pub(crate) use norm_trace::local_trace_condition;
pub use ramification::ramified_primes;

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::Rational;

/// Parameters (a, b) of the quaternion algebra H_{a,b}; both nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatParams {
    a: Rational,
    b: Rational,
}

impl QuatParams {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::PreconditionViolation(
                "quaternion parameters must be nonzero".into(),
            ));
        }
        Ok(QuatParams { a, b })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }
}

impl fmt::Display for QuatParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// A quaternion x1 + x2 i + x3 j + x4 ij with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatElem {
    pub x1: Rational,
    pub x2: Rational,
    pub x3: Rational,
    pub x4: Rational,
}

impl QuatElem {
    pub fn new(x1: Rational, x2: Rational, x3: Rational, x4: Rational) -> Self {
        QuatElem { x1, x2, x3, x4 }
    }
}

/// Reduced trace: 2 x1.
pub fn reduced_trace(e: &QuatElem) -> Rational {
    &e.x1 + &e.x1
}

/// Reduced norm: x1^2 - a x2^2 - b x3^2 + ab x4^2.
pub fn reduced_norm(e: &QuatElem, params: &QuatParams) -> Rational {
    let sq = |r: &Rational| r * r;
    sq(&e.x1) - params.a() * sq(&e.x2) - params.b() * sq(&e.x3)
        + params.a() * params.b() * sq(&e.x4)
}

/// The finite primes where H_{a,b} ramifies, plus the archimedean flag.
///
/// The finite part is the ramification set proper; the infinite flag exists
/// so the even-cardinality invariant over all places can be checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationSet {
    /// Sorted, deduplicated.
    pub finite_primes: Vec<u64>,
    pub infinite_ramified: bool,
}

impl RamificationSet {
    pub fn contains(&self, p: u64) -> bool {
        self.finite_primes.binary_search(&p).is_ok()
    }

    /// Ramified places come in pairs: |finite| + infinite is even.
    pub fn parity_holds(&self) -> bool {
        (self.finite_primes.len() + usize::from(self.infinite_ramified)) % 2 == 0
    }
}
