//! Exhaustive re-verification of the finite, desk-checkable lemma instances.
//!
//! Each sweep walks every instance in a fixed deterministic order and builds
//! a [`LemmaReport`]: pass/fail per instance, counterexamples listed by
//! minimal reproducing instance, and wall time. A report passes iff its
//! counterexample list is empty. Wall time is measurement, not content;
//! everything else is rerun-identical for fixed arguments and seed. Sweeps
//! check structure only: the density statements attached to the same
//! material are not decidable by finite enumeration and are deliberately out
//! of scope, which each report states in its conventions.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{
    factorize, legendre, padic_valuation, rational_from, reduce_mod_p, Place, Valuation,
};
use crate::finite_field::{
    compute_uq, count_norm_trace_curve, find_nonresidue, fq_context, prime_powers_up_to,
    sumset_covers, DEFAULT_FIELD_BOUND,
};
use crate::formula::curve_lift_raw;
use crate::quaternion::{hilbert_symbol, ramified_primes, QuatParams};
use crate::Rational;

/// One checked instance of a lemma sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub instance: String,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of one lemma sweep. `pass` holds iff `counterexamples` is empty,
/// and the counterexamples are exactly the failing instances, in sweep
/// order. `wall_ms` is the only field exempt from rerun determinism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma_id: String,
    pub parameters: String,
    pub conventions: Vec<String>,
    pub instances: Vec<InstanceResult>,
    pub counterexamples: Vec<String>,
    pub pass: bool,
    pub wall_ms: u64,
}

impl LemmaReport {
    fn assemble(
        lemma_id: &str,
        parameters: String,
        conventions: Vec<String>,
        instances: Vec<InstanceResult>,
        started: std::time::Instant,
    ) -> LemmaReport {
        let counterexamples: Vec<String> = instances
            .iter()
            .filter(|i| !i.pass)
            .map(|i| i.instance.clone())
            .collect();
        LemmaReport {
            lemma_id: lemma_id.into(),
            parameters,
            conventions,
            instances,
            pass: counterexamples.is_empty(),
            counterexamples,
            wall_ms: started.elapsed().as_millis() as u64,
        }
    }
}

const DENSITY_NOTE: &str = "set-theoretic structure only; density statements are not finitely \
     checkable and are not verified";
const NONSPLIT_NOTE: &str =
    "'fails to split' includes ramified primes: split means two distinct prime divisors";

/// Re-proves the trace-residue facts for every prime power q <= q_max by
/// exhaustion: U_q is nonempty of size (q-1)/2 (odd q) or q/2 (even q); for
/// q > 11 the sumset U_q + U_q is all of F_q; and for q >= 23 the witness
/// curve behind the sumset statement has a positive point count within the
/// genus-one lower bound q + 1 - 2 sqrt(q) - 12 > 0 for every nonzero sum.
pub fn verify_uq_lemma(q_max: u64) -> Result<LemmaReport> {
    if q_max > DEFAULT_FIELD_BOUND {
        return Err(Error::BoundExceeded(format!(
            "exhaustive field sweeps stop at q = {DEFAULT_FIELD_BOUND}, got {q_max}"
        )));
    }
    let started = std::time::Instant::now();
    let mut instances = Vec::new();
    for (p, k) in prime_powers_up_to(q_max) {
        let ctx = fq_context(p, k)?;
        let q = ctx.q();
        let uq = compute_uq(&ctx);
        let expected = if p == 2 { q / 2 } else { (q - 1) / 2 };
        let mut failures = Vec::new();
        if uq.is_empty() {
            failures.push("U_q is empty".to_string());
        }
        if uq.len() as u64 != expected {
            failures.push(format!("|U_q| = {}, expected {expected}", uq.len()));
        }
        let mut checked = format!("nonempty, |U_q| = {expected}");
        if q > 11 {
            if !sumset_covers(&ctx) {
                failures.push("U_q + U_q misses part of F_q".to_string());
            }
            checked.push_str(", sumset covers F_q");
        }
        if q >= 23 {
            let bound_holds = |count: u64| {
                // count >= q + 1 - 2 sqrt(q) - 12, kept in integers:
                // deficit <= 2 sqrt(q) iff deficit <= 0 or deficit^2 <= 4q.
                let deficit = q as i64 - 11 - count as i64;
                deficit <= 0 || deficit * deficit <= 4 * q as i64
            };
            let mut min_count = u64::MAX;
            for a in ctx.elements().filter(|a| !a.is_zero()) {
                let count = count_norm_trace_curve(&ctx, &a);
                min_count = min_count.min(count);
                if count == 0 || !bound_holds(count) {
                    failures.push(format!(
                        "curve count {count} at a = {} breaks the lower bound",
                        ctx.index_of(&a)
                    ));
                }
            }
            checked.push_str(&format!(", curve counts >= max(1, bound), min {min_count}"));
        }
        instances.push(InstanceResult {
            instance: format!("q = {q}"),
            pass: failures.is_empty(),
            detail: if failures.is_empty() { checked } else { failures.join("; ") },
        });
    }
    Ok(LemmaReport::assemble(
        "trace-residue sets U_q",
        format!("prime powers q <= {q_max}"),
        vec![DENSITY_NOTE.into()],
        instances,
        started,
    ))
}

/// Re-proves the per-prime recipe pinning p inside a ramification set with
/// positive parameters: (7, 7) for p = 2, (p, smallest nonresidue) for odd
/// p. Each pair is pushed through the full ramification computation.
pub fn verify_intersection_recipes(p_max: u64) -> Result<LemmaReport> {
    let started = std::time::Instant::now();
    let mut instances = Vec::new();
    for p in crate::exact_arith::primes_up_to(p_max) {
        let (a, b) = if p == 2 { (7, 7) } else { (p, find_nonresidue(p)?) };
        let params = QuatParams::new(rational_from(a as i64), rational_from(b as i64))?;
        let delta = ramified_primes(&params)?;
        let positive = a > 0 && b > 0;
        let pinned = delta.contains(p);
        instances.push(InstanceResult {
            instance: format!("p = {p}"),
            pass: positive && pinned,
            detail: format!(
                "(a, b) = ({a}, {b}), finite ramification {:?}",
                delta.finite_primes
            ),
        });
    }
    Ok(LemmaReport::assemble(
        "ramification pinning recipes",
        format!("primes p <= {p_max}"),
        vec![],
        instances,
        started,
    ))
}

/// Re-proves the recipe making the coefficient pair (a^2+b^2+1,
/// a^2+a+1+b^2) ramify at p: fixed pairs for p <= 7, the quartic-curve lift
/// for p >= 11. The symbol is recomputed at every p; for p >= 11 the lift is
/// additionally checked to give the coefficient p-valuation exactly 1 and a
/// nonresidue reduction.
pub fn verify_some_ts(p_max: u64) -> Result<LemmaReport> {
    let started = std::time::Instant::now();
    let mut instances = Vec::new();
    for p in crate::exact_arith::primes_up_to(p_max) {
        let (a, b, point) = match p {
            2 | 3 => (rational_from(-1), rational_from(1), None),
            5 | 7 => (rational_from(2), rational_from(0), None),
            _ => {
                let lift = curve_lift_raw(p)?;
                (
                    rational_from(lift.a as i64),
                    rational_from(lift.y0 as i64),
                    Some((lift.x0, lift.y0)),
                )
            }
        };
        let big_a = &a * &a + &b * &b + rational_from(1);
        let big_b = &a * &a + &a + rational_from(1) + &b * &b;
        let mut failures = Vec::new();
        if hilbert_symbol(&big_a, &big_b, Place::Finite(p)) != -1 {
            failures.push(format!("symbol at {p} is not -1"));
        }
        if p >= 11 {
            if padic_valuation(&big_a, p) != Valuation::Finite(1) {
                failures.push(format!("{big_a} does not have valuation exactly 1"));
            }
            let red_b = reduce_mod_p(&big_b, p)?;
            if red_b != reduce_mod_p(&a, p)? {
                failures.push(format!("second coefficient is {red_b}, not a, mod {p}"));
            }
            if legendre(red_b, p) != -1 {
                failures.push(format!("second coefficient reduces to a residue mod {p}"));
            }
        }
        let detail = match point {
            Some((x0, y0)) => format!(
                "(a, b) = ({a}, {b}) from curve point (x0, y0) = ({x0}, {y0})"
            ),
            None => format!("(a, b) = ({a}, {b}), fixed recipe"),
        };
        instances.push(InstanceResult {
            instance: format!("p = {p}"),
            pass: failures.is_empty(),
            detail: if failures.is_empty() { detail } else { failures.join("; ") },
        });
    }
    Ok(LemmaReport::assemble(
        "coefficient pairs ramified at one prime",
        format!("primes p <= {p_max}"),
        vec![],
        instances,
        started,
    ))
}

/// Splitting behavior of a rational prime in the quadratic field of
/// discriminant class b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitOutcome {
    Split,
    Nonsplit,
}

/// Does p split in Q(sqrt(b))? Requires squarefree b outside {0, 1}. Split
/// means two distinct primes above p: odd p with leg_p(b) = 1, or p = 2 with
/// b = 1 mod 8. Inert and ramified both count as nonsplit.
pub fn splits_in_quadratic(p: u64, b: i64) -> Result<SplitOutcome> {
    if b == 0 || b == 1 {
        return Err(Error::PreconditionViolation(format!(
            "Q(sqrt({b})) is not a quadratic field"
        )));
    }
    let f = factorize(&BigInt::from(b))?;
    if f.factors.iter().any(|&(_, e)| e > 1) {
        return Err(Error::PreconditionViolation(format!("{b} is not squarefree")));
    }
    if !crate::exact_arith::is_prime_u64(p) {
        return Err(Error::PreconditionViolation(format!("{p} is not prime")));
    }
    let split = if p == 2 {
        b.rem_euclid(8) == 1
    } else {
        legendre((b.rem_euclid(p as i64)) as u64, p) == 1
    };
    Ok(if split { SplitOutcome::Split } else { SplitOutcome::Nonsplit })
}

/// Number of deterministic a values scanned per prime in the coverage
/// direction of [`verify_cs_structure`].
const COVERAGE_SCAN: u64 = 400;

/// Re-proves, at desk scale, that ramification sets over varying a land
/// exactly on the primes failing to split in Q(sqrt(b)):
///
/// * containment - for seeded random rational a, every finite ramified
///   prime of (a, b) fails to split;
/// * coverage - every nonsplit prime p <= p_max is hit by some (a, b) with
///   a from a bounded deterministic scan.
pub fn verify_cs_structure(b: u64, p_max: u64, a_samples: u64, seed: u64) -> Result<LemmaReport> {
    splits_in_quadratic(2, b as i64)?; // validates b; the outcome is unused
    let started = std::time::Instant::now();
    let b_rat = rational_from(b as i64);
    let mut instances = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..a_samples {
        let mut numer = 0i64;
        while numer == 0 {
            numer = rng.gen_range(-10_000i64..=10_000);
        }
        let denom = rng.gen_range(1i64..=60);
        let a = Rational::new(BigInt::from(numer), BigInt::from(denom));
        let delta = ramified_primes(&QuatParams::new(a.clone(), b_rat.clone())?)?;
        let offenders: Vec<u64> = delta
            .finite_primes
            .iter()
            .copied()
            .filter(|&p| splits_in_quadratic(p, b as i64).expect("b validated") == SplitOutcome::Split)
            .collect();
        instances.push(InstanceResult {
            instance: format!("containment a = {a}"),
            pass: offenders.is_empty(),
            detail: if offenders.is_empty() {
                format!("ramified {:?}, all nonsplit", delta.finite_primes)
            } else {
                format!("split primes {offenders:?} appear in the ramification set")
            },
        });
    }

    for p in crate::exact_arith::primes_up_to(p_max) {
        if splits_in_quadratic(p, b as i64)? == SplitOutcome::Split {
            continue;
        }
        let hit = (1..=COVERAGE_SCAN).find_map(|a| {
            let params = QuatParams::new(rational_from(a as i64), b_rat.clone()).ok()?;
            let delta = ramified_primes(&params).ok()?;
            delta.contains(p).then_some(a)
        });
        match hit {
            Some(a) => instances.push(InstanceResult {
                instance: format!("coverage p = {p}"),
                pass: true,
                detail: format!("a = {a} ramifies at {p}"),
            }),
            None => {
                return Err(Error::SearchExhausted(format!(
                    "no a <= {COVERAGE_SCAN} ramifies at the nonsplit prime {p} for b = {b}"
                )))
            }
        }
    }

    Ok(LemmaReport::assemble(
        "ramification matches quadratic splitting",
        format!("b = {b}, primes p <= {p_max}, {a_samples} samples, seed {seed}"),
        vec![DENSITY_NOTE.into(), NONSPLIT_NOTE.into()],
        instances,
        started,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_wall(mut r: LemmaReport) -> LemmaReport {
        r.wall_ms = 0;
        r
    }

    #[test]
    fn uq_sweep_to_64_passes() {
        let report = verify_uq_lemma(64).unwrap();
        assert!(report.pass, "{:?}", report.counterexamples);
        assert_eq!(report.instances.len(), 27);
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn uq_sweep_instances_at_23() {
        let report = verify_uq_lemma(23).unwrap();
        assert!(report.pass);
        let qs: Vec<String> = report.instances.iter().map(|i| i.instance.clone()).collect();
        let expected: Vec<String> = [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23]
            .iter()
            .map(|q| format!("q = {q}"))
            .collect();
        assert_eq!(qs, expected);
    }

    #[test]
    fn uq_sweep_small_bound_is_trivial() {
        let report = verify_uq_lemma(3).unwrap();
        assert!(report.pass);
        assert_eq!(report.instances.len(), 2);
    }

    #[test]
    fn uq_sweep_rejects_oversized_bound() {
        assert!(matches!(verify_uq_lemma(100_000), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn intersection_recipes_pass_to_200() {
        let report = verify_intersection_recipes(200).unwrap();
        assert!(report.pass, "{:?}", report.counterexamples);
        assert_eq!(report.instances.len(), 46);
        assert!(report.instances[0].detail.contains("(7, 7)"));
    }

    #[test]
    fn some_ts_recipes_pass_to_200() {
        let report = verify_some_ts(200).unwrap();
        assert!(report.pass, "{:?}", report.counterexamples);
        assert_eq!(report.instances.len(), 46);
        let p11 = report.instances.iter().find(|i| i.instance == "p = 11").unwrap();
        assert!(p11.detail.contains("curve point"), "{}", p11.detail);
    }

    #[test]
    fn quadratic_splitting_frozen_examples() {
        assert_eq!(splits_in_quadratic(7, 2).unwrap(), SplitOutcome::Split);
        assert_eq!(splits_in_quadratic(5, 2).unwrap(), SplitOutcome::Nonsplit);
        assert_eq!(splits_in_quadratic(2, 17).unwrap(), SplitOutcome::Split);
        // -7 = 1 mod 8.
        assert_eq!(splits_in_quadratic(2, -7).unwrap(), SplitOutcome::Split);
        assert_eq!(splits_in_quadratic(2, 2).unwrap(), SplitOutcome::Nonsplit);
        assert!(splits_in_quadratic(7, 1).is_err());
        assert!(splits_in_quadratic(7, 0).is_err());
        assert!(splits_in_quadratic(7, 12).is_err());
        assert!(splits_in_quadratic(6, 5).is_err());
    }

    #[test]
    fn cs_structure_passes_for_two() {
        let report = verify_cs_structure(2, 50, 100, 7).unwrap();
        assert!(report.pass, "{:?}", report.counterexamples);
        // Both directions are present.
        assert!(report.instances.iter().any(|i| i.instance.starts_with("containment")));
        assert!(report.instances.iter().any(|i| i.instance.starts_with("coverage")));
        assert!(report.conventions.iter().any(|c| c.contains("ramified")));
    }

    #[test]
    fn cs_structure_rejects_bad_b() {
        assert!(verify_cs_structure(1, 50, 10, 7).is_err());
        assert!(verify_cs_structure(12, 50, 10, 7).is_err());
    }

    #[test]
    fn reports_are_rerun_identical_modulo_wall_time() {
        let a = zero_wall(verify_uq_lemma(23).unwrap());
        let b = zero_wall(verify_uq_lemma(23).unwrap());
        assert_eq!(a, b);
        let a = zero_wall(verify_cs_structure(2, 30, 25, 99).unwrap());
        let b = zero_wall(verify_cs_structure(2, 30, 25, 99).unwrap());
        assert_eq!(a, b);
        let json = serde_json::to_string(&a).unwrap();
        let back: LemmaReport = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn failing_instances_become_counterexamples() {
        let started = std::time::Instant::now();
        let instances = vec![
            InstanceResult { instance: "q = 4".into(), pass: true, detail: "ok".into() },
            InstanceResult { instance: "q = 9".into(), pass: false, detail: "broken".into() },
        ];
        let report = LemmaReport::assemble("synthetic", "none".into(), vec![], instances, started);
        assert!(!report.pass);
        assert_eq!(report.counterexamples, vec!["q = 9".to_string()]);
    }
}
