//! Exact decision engine for the question "is this rational number an integer?",
//! answered with independently checkable certificates.
//!
//! The engine works over quaternion algebras H_{a,b} on Q (i^2 = a, j^2 = b,
//! ij = -ji). The ramification set of H_{a,b} (the places where it stays a
//! division algebra) is computed from Hilbert symbols, and the set of reduced
//! traces of norm-one quaternions cuts out p-integrality conditions. Combining
//! finitely many parameter pairs pins down exactly the rational integers, which
//! turns integrality into two polynomial identities:
//!
//! * a positive witness is a tuple of rationals making a fixed
//!   universal-existential polynomial vanish ([`formula::eval_t1`],
//!   [`formula::eval_t2`]);
//! * a refutation names a prime p with v_p(t) < 0 together with a parameter
//!   pair whose quaternion algebra is ramified at p ([`formula::refute`]).
//!
//! Everything is exact: arbitrary-precision rationals, no floating point.
//! [`verify`] re-proves the finite, desk-checkable lemma instances by
//! exhaustion and emits JSON reports; the `integrality` binary exposes the
//! whole engine on the command line.

// Divisibility tests and half-exponents stay in their written arithmetic
// form: `n % p == 0` and `(q + 1) / 2` mirror the formulas they implement.
#![allow(clippy::manual_is_multiple_of, clippy::manual_div_ceil)]

pub mod error;
pub mod exact_arith;
pub mod finite_field;
pub mod formula;
pub mod quaternion;
pub mod trace_sets;
pub mod verify;

pub use error::{Error, Result};

/// Canonical-form arbitrary-precision rational: gcd(num, den) = 1, den > 0.
/// `FromStr`/`Display` use the `"num/den"` wire format ("5", "-3/7").
pub type Rational = num_rational::BigRational;

pub use exact_arith::Place;
