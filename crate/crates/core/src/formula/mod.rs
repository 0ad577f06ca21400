//! The two polynomial formulas, their exact evaluators, witness provers,
//! refuters, and the top-level classifier.
//!
//! Both formulas are universally quantified over (a, b) with a block of
//! existentials inside, so membership cannot be decided by enumeration.
//! Instead: integers get constructive witnesses (per sampled and adversarial
//! (a, b), each verified by exact substitution), and non-integers get a
//! refutation certificate naming one (a, b) and a prime p where the witness
//! search provably cannot succeed. The two verdicts are asymmetric by nature;
//! certificate metadata says so.

pub mod certificate;

pub use certificate::{
    check_certificate, classification_certificate, refutation_certificate,
    t1_witness_certificate, t2_witness_certificate, CERTIFICATE_VERSION,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact_arith::{
    denominator, factorize, is_integer, is_prime_u64, padic_valuation, rational_from, Place,
    Valuation,
};
use crate::exact_arith::four_squares;
use crate::finite_field::find_nonresidue;
use crate::quaternion::{hilbert_symbol, solve_norm_trace, QuatParams};
use crate::trace_sets::{decompose_t, SHIFT_RANGE};
use crate::Rational;

/// Which of the two formulas a certificate refers to: T1 is the variant with
/// 17 existentials and free (a, b); T2 is the 7-existential variant built on
/// the substituted coefficients a^2+b^2+1 and a^2+a+1+b^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaId {
    T1,
    T2,
}

impl FormulaId {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::T1 => "T1",
            FormulaId::T2 => "T2",
        }
    }
}

impl std::str::FromStr for FormulaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T1" | "t1" => Ok(FormulaId::T1),
            "T2" | "t2" => Ok(FormulaId::T2),
            other => Err(Error::InvalidInput(format!("unknown formula id {other:?}"))),
        }
    }
}

/// Witness for the T1 formula: 16 rationals plus the shift n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessT1 {
    pub a_sq: [Rational; 4],
    pub b_sq: [Rational; 4],
    pub x: [Rational; 4],
    pub y: [Rational; 4],
    pub n: u64,
}

/// Witness for the T2 formula: quaternion coordinates x, the y-coordinates
/// y2..y4 shared by all product factors, and the index n of the factor that
/// vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessT2 {
    pub x: [Rational; 4],
    pub y2: Rational,
    pub y3: Rational,
    pub y4: Rational,
    pub n: u64,
}

/// A complete disproof: at the named prime p (a denominator prime of t) the
/// quaternion algebra for (a, b) is ramified, so no witness for that (a, b)
/// exists. Everything is recomputable from (formula_id, p, a, b) and t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefutationCert {
    pub formula_id: FormulaId,
    pub p: u64,
    pub a: Rational,
    pub b: Rational,
    pub valuation: i64,
}

/// One verified (a, b) |-> witness record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitnessT1 {
    pub a: Rational,
    pub b: Rational,
    pub witness: WitnessT1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitnessT2 {
    pub a: Rational,
    pub b: Rational,
    pub witness: WitnessT2,
}

/// Witnesses backing an Integer verdict: adversarial pairs plus seeded
/// samples, for both formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessBundle {
    pub t1: Vec<PairWitnessT1>,
    pub t2: Vec<PairWitnessT2>,
}

/// Classifier output. Integer verdicts are backed by sampled witnesses (the
/// universal quantifier cannot be exhausted); NonInteger verdicts are
/// complete proofs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Integer(WitnessBundle),
    NonInteger(RefutationCert),
}

fn norm_slack(v: &[Rational; 4], a: &Rational, b: &Rational) -> Rational {
    let ab = a * b;
    &v[0] * &v[0] - a * &v[1] * &v[1] - b * &v[2] * &v[2] + ab * &v[3] * &v[3]
        - Rational::one()
}

/// (n)(n-1)...(n-2309), squared: zero exactly when n is one of the shifts.
fn shift_product_term(n: u64) -> Rational {
    if n < SHIFT_RANGE {
        return Rational::zero();
    }
    let mut prod = BigInt::one();
    for k in 0..SHIFT_RANGE {
        prod *= BigInt::from(n - k);
    }
    Rational::from_integer(&prod * &prod)
}

/// Exact evaluation of the T1 polynomial at (t, a, b, w); true iff zero.
pub fn eval_t1(t: &Rational, a: &Rational, b: &Rational, w: &WitnessT1) -> bool {
    let sum_sq = |v: &[Rational; 4]| v.iter().map(|z| z * z).sum::<Rational>();
    let factor_a = a + sum_sq(&w.a_sq);
    let factor_b = b + sum_sq(&w.b_sq);
    if factor_a.is_zero() || factor_b.is_zero() {
        return true;
    }
    let sq = |z: Rational| &z * &z;
    let n = rational_from(w.n as i64);
    let two = rational_from(2);
    let linear = &two * &w.x[0] + &two * &w.y[0] + &n - t;
    let bracket = sq(norm_slack(&w.x, a, b))
        + sq(norm_slack(&w.y, a, b))
        + shift_product_term(w.n)
        + sq(linear);
    bracket.is_zero()
}

/// The substituted coefficients of the T2 formula, both strictly positive for
/// every rational (a, b).
pub fn t2_coefficients(a: &Rational, b: &Rational) -> (Rational, Rational) {
    let big_a = a * a + b * b + Rational::one();
    let big_b = a * a + a + Rational::one() + b * b;
    (big_a, big_b)
}

/// Exact evaluation of the T2 formula; the product over all 2310 factors is
/// never expanded: the declared factor index w.n must itself vanish.
pub fn eval_t2(t: &Rational, a: &Rational, b: &Rational, w: &WitnessT2) -> bool {
    let (big_a, big_b) = t2_coefficients(a, b);
    if !norm_slack(&w.x, &big_a, &big_b).is_zero() {
        return false;
    }
    if w.n >= SHIFT_RANGE {
        return false;
    }
    let four = rational_from(4);
    let head = rational_from(w.n as i64) - t - rational_from(2) * &w.x[0];
    let factor = &head * &head - &four * &big_a * &w.y2 * &w.y2 - &four * &big_b * &w.y3 * &w.y3
        + &four * &big_a * &big_b * &w.y4 * &w.y4
        - four;
    factor.is_zero()
}

fn zeros4() -> [Rational; 4] {
    std::array::from_fn(|_| Rational::zero())
}

fn quat_coords(e: &crate::quaternion::QuatElem) -> [Rational; 4] {
    [e.x1.clone(), e.x2.clone(), e.x3.clone(), e.x4.clone()]
}

/// Builds a verified T1 witness for integer t at the pair (a, b).
///
/// a <= 0 or b <= 0 makes the corresponding four-square factor vanish and the
/// bracket is irrelevant; otherwise t splits as s + s' + n and two norm-1
/// quaternions with traces s and s' zero the bracket.
pub fn prove_t1(t: &Rational, a: &Rational, b: &Rational) -> Result<WitnessT1> {
    if !is_integer(t) {
        return Err(Error::NotInteger(t.to_string()));
    }
    let witness = if !a.is_positive() {
        WitnessT1 {
            a_sq: four_squares(&-a)?,
            b_sq: zeros4(),
            x: zeros4(),
            y: zeros4(),
            n: 0,
        }
    } else if !b.is_positive() {
        WitnessT1 {
            a_sq: zeros4(),
            b_sq: four_squares(&-b)?,
            x: zeros4(),
            y: zeros4(),
            n: 0,
        }
    } else {
        let params = QuatParams::new(a.clone(), b.clone())?;
        let d = decompose_t(&params, t)?;
        let x = solve_norm_trace(&params, &d.s)?;
        let y = solve_norm_trace(&params, &d.s_prime)?;
        WitnessT1 {
            a_sq: zeros4(),
            b_sq: zeros4(),
            x: quat_coords(&x),
            y: quat_coords(&y),
            n: d.n,
        }
    };
    assert!(eval_t1(t, a, b, &witness), "witness failed its own formula");
    Ok(witness)
}

/// Builds a verified T2 witness for integer t at the pair (a, b): decompose t
/// for the substituted coefficients, give x the trace -s (so the declared
/// factor head becomes -s'), and take y2..y4 from a quaternion of trace s'.
pub fn prove_t2(t: &Rational, a: &Rational, b: &Rational) -> Result<WitnessT2> {
    if !is_integer(t) {
        return Err(Error::NotInteger(t.to_string()));
    }
    let (big_a, big_b) = t2_coefficients(a, b);
    let params = QuatParams::new(big_a, big_b)?;
    let d = decompose_t(&params, t)?;
    let x = solve_norm_trace(&params, &-&d.s)?;
    let y = solve_norm_trace(&params, &d.s_prime)?;
    let witness = WitnessT2 {
        x: quat_coords(&x),
        y2: y.x2,
        y3: y.x3,
        y4: y.x4,
        n: d.n,
    };
    assert!(eval_t2(t, a, b, &witness), "witness failed its own formula");
    Ok(witness)
}

/// Smallest prime dividing the denominator of a non-integer.
fn smallest_denominator_prime(t: &Rational) -> Result<u64> {
    let f = factorize(&denominator(t))?;
    Ok(f.factors[0].0)
}

/// Builds a refutation certificate for non-integer t: p = the smallest
/// denominator prime, and an (a, b) whose algebra (after T2's substitution if
/// applicable) is ramified at p. The symbol is recomputed before returning.
pub fn refute(t: &Rational, formula_id: FormulaId) -> Result<RefutationCert> {
    if is_integer(t) {
        return Err(Error::IsInteger(t.to_string()));
    }
    let p = smallest_denominator_prime(t)?;
    let valuation = match padic_valuation(t, p) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => unreachable!("non-integer t is nonzero"),
    };
    debug_assert!(valuation < 0);
    let (a, b) = match formula_id {
        FormulaId::T1 => {
            if p == 2 {
                (rational_from(7), rational_from(7))
            } else {
                (rational_from(p as i64), rational_from(find_nonresidue(p)? as i64))
            }
        }
        FormulaId::T2 => match p {
            2 | 3 => (rational_from(-1), rational_from(1)),
            5 | 7 => (rational_from(2), rational_from(0)),
            _ => curve_lift_pair(p)?,
        },
    };
    let cert = RefutationCert { formula_id, p, a, b, valuation };
    assert!(
        check_refutation(&cert, t),
        "refutation recipe failed its own check at p = {p}"
    );
    Ok(cert)
}

/// For p >= 11: integers (a, b) with a = c x0^2 and b = y0 mod p on the curve
/// c^2 x0^4 + y0^2 + 1 = 0 mod p (c the smallest nonresidue). Then
/// a^2 + b^2 + 1 has p-valuation exactly 1 (the representative a is bumped by
/// p if needed) and a^2 + a + 1 + b^2 = a mod p is a nonresidue, so the
/// symbol at p is -1.
fn curve_lift_pair(p: u64) -> Result<(Rational, Rational)> {
    let lift = curve_lift_raw(p)?;
    Ok((
        Rational::from_integer(BigInt::from(lift.a)),
        Rational::from_integer(BigInt::from(lift.y0)),
    ))
}

/// A curve-derived parameter pair for [`curve_lift_pair`] in integer form:
/// a (bumped when needed) together with the witnessing curve point, whose
/// y0 doubles as the parameter b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct CurveLift {
    pub a: u64,
    pub x0: u64,
    pub y0: u64,
}

pub(crate) fn curve_lift_raw(p: u64) -> Result<CurveLift> {
    debug_assert!(p >= 11 && is_prime_u64(p));
    let c = find_nonresidue(p)?;
    for x0 in 1..p {
        let x0_sq = mulmod_u64(x0, x0, p);
        let cx2 = mulmod_u64(c, x0_sq, p);
        let c2x4 = mulmod_u64(cx2, cx2, p);
        // y0^2 = -1 - c^2 x0^4 mod p
        let rhs = (2 * p - 1 - c2x4) % p;
        let Some(y0) = crate::exact_arith::sqrt_mod(rhs, p) else {
            continue;
        };
        let mut a = cx2;
        let (big_a, big_b) = (BigInt::from(a), BigInt::from(y0));
        let p_sq = BigInt::from(p) * BigInt::from(p);
        if ((&big_a * &big_a + &big_b * &big_b + BigInt::one()) % &p_sq).is_zero() {
            // Re-lift the representative so the valuation stays exactly 1.
            a += p;
            let big_a = BigInt::from(a);
            debug_assert!(!((&big_a * &big_a + &big_b * &big_b + BigInt::one()) % &p_sq).is_zero());
        }
        return Ok(CurveLift { a, x0, y0 });
    }
    Err(Error::SearchExhausted(format!(
        "no curve point mod {p}; impossible for p >= 11"
    )))
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Recomputes everything a refutation claims; never trusts stored fields.
pub fn check_refutation(cert: &RefutationCert, t: &Rational) -> bool {
    if !is_prime_u64(cert.p) {
        return false;
    }
    let val = match padic_valuation(t, cert.p) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => return false,
    };
    if val >= 0 || val != cert.valuation {
        return false;
    }
    match cert.formula_id {
        FormulaId::T1 => {
            cert.a.is_positive()
                && cert.b.is_positive()
                && hilbert_symbol(&cert.a, &cert.b, Place::Finite(cert.p)) == -1
        }
        FormulaId::T2 => {
            let (big_a, big_b) = t2_coefficients(&cert.a, &cert.b);
            hilbert_symbol(&big_a, &big_b, Place::Finite(cert.p)) == -1
        }
    }
}

/// Adversarial T1 pairs: the anchor (7,7) covering p = 2, then
/// (p, smallest nonresidue) for odd p <= 23.
fn adversarial_t1_pairs() -> Vec<(Rational, Rational)> {
    let mut pairs = vec![(rational_from(7), rational_from(7))];
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
        let b = find_nonresidue(p).expect("odd prime");
        pairs.push((rational_from(p as i64), rational_from(b as i64)));
    }
    pairs
}

fn random_pair(rng: &mut ChaCha8Rng) -> (Rational, Rational) {
    let part = |rng: &mut ChaCha8Rng| {
        Rational::new(
            BigInt::from(rng.gen_range(-50i64..=50)),
            BigInt::from(rng.gen_range(1i64..=6)),
        )
    };
    (part(rng), part(rng))
}

/// Decides integrality of t. Non-integers get a complete refutation (for the
/// T1 formula, as the classifier's canonical certificate); integers get a
/// bundle of verified witnesses over adversarial plus `sample_count` seeded
/// pairs for each formula.
pub fn classify(t: &Rational, sample_count: usize, seed: u64) -> Result<Verdict> {
    if !is_integer(t) {
        let cert = refute(t, FormulaId::T1)?;
        return Ok(Verdict::NonInteger(cert));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t1 = Vec::new();
    let mut t1_pairs = adversarial_t1_pairs();
    for _ in 0..sample_count {
        t1_pairs.push(random_pair(&mut rng));
    }
    for (a, b) in t1_pairs {
        let witness = prove_t1(t, &a, &b)?;
        t1.push(PairWitnessT1 { a, b, witness });
    }
    let mut t2 = Vec::new();
    let mut t2_pairs = vec![
        (rational_from(0), rational_from(0)),
        (rational_from(-1), rational_from(1)),
        (rational_from(2), rational_from(0)),
    ];
    for _ in 0..sample_count {
        t2_pairs.push(random_pair(&mut rng));
    }
    for (a, b) in t2_pairs {
        let witness = prove_t2(t, &a, &b)?;
        t2.push(PairWitnessT2 { a, b, witness });
    }
    Ok(Verdict::Integer(WitnessBundle { t1, t2 }))
}
