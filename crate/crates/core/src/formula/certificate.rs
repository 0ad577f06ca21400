//! Versioned JSON serialization for witness and refutation certificates.
//!
//! Envelope: {version, formula_id, t, kind, payload}. All rationals are
//! strings in lowest terms ("3/2", "-7"); integers omit the denominator.
//! Field order is fixed by struct declaration and serialization is pretty
//! with a trailing newline, so identical inputs give identical bytes.
//! Checking re-parses and re-evaluates everything; stored values are claims,
//! never trusted. Structural problems (bad JSON, unknown version, unknown
//! fields) are errors; a well-formed certificate that fails verification is
//! a clean `false`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::parse_rational;
use crate::formula::{
    check_refutation, eval_t1, eval_t2, FormulaId, PairWitnessT1, PairWitnessT2, RefutationCert,
    Verdict, WitnessT1, WitnessT2,
};
use crate::Rational;

pub const CERTIFICATE_VERSION: u32 = 1;

const INTEGER_BASIS_NOTE: &str = "integer verdicts rest on sampled plus adversarial (a, b) \
     pairs; the universal quantifiers are not exhausted. noninteger verdicts are complete proofs";
const DECOMPOSITION_RULE_NOTE: &str = "trace decompositions pick the smallest shift n, then the \
     smallest nonnegative trace s modulo the product of the ramified primes";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    version: u32,
    formula_id: String,
    t: String,
    kind: String,
    payload: serde_json::Value,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Metadata {
    integer_verdicts: String,
    decomposition_rule: String,
}

impl Metadata {
    fn standard() -> Metadata {
        Metadata {
            integer_verdicts: INTEGER_BASIS_NOTE.into(),
            decomposition_rule: DECOMPOSITION_RULE_NOTE.into(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct T1EntryJson {
    a: String,
    b: String,
    a_sq: [String; 4],
    b_sq: [String; 4],
    x: [String; 4],
    y: [String; 4],
    n: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct T2EntryJson {
    a: String,
    b: String,
    x: [String; 4],
    y2: String,
    y3: String,
    y4: String,
    n: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessPayloadT1 {
    entries: Vec<T1EntryJson>,
    metadata: Metadata,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessPayloadT2 {
    entries: Vec<T2EntryJson>,
    metadata: Metadata,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RefutationPayload {
    p: u64,
    a: String,
    b: String,
    valuation: i64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassificationPayload {
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    t1_entries: Option<Vec<T1EntryJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t2_entries: Option<Vec<T2EntryJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    refutation: Option<RefutationPayload>,
    metadata: Metadata,
}

fn rationals4(v: &[Rational; 4]) -> [String; 4] {
    std::array::from_fn(|i| v[i].to_string())
}

fn parse4(v: &[String; 4]) -> Result<[Rational; 4]> {
    Ok([
        parse_rational(&v[0])?,
        parse_rational(&v[1])?,
        parse_rational(&v[2])?,
        parse_rational(&v[3])?,
    ])
}

fn t1_entry(e: &PairWitnessT1) -> T1EntryJson {
    T1EntryJson {
        a: e.a.to_string(),
        b: e.b.to_string(),
        a_sq: rationals4(&e.witness.a_sq),
        b_sq: rationals4(&e.witness.b_sq),
        x: rationals4(&e.witness.x),
        y: rationals4(&e.witness.y),
        n: e.witness.n,
    }
}

fn t2_entry(e: &PairWitnessT2) -> T2EntryJson {
    T2EntryJson {
        a: e.a.to_string(),
        b: e.b.to_string(),
        x: rationals4(&e.witness.x),
        y2: e.witness.y2.to_string(),
        y3: e.witness.y3.to_string(),
        y4: e.witness.y4.to_string(),
        n: e.witness.n,
    }
}

fn refutation_payload(c: &RefutationCert) -> RefutationPayload {
    RefutationPayload {
        p: c.p,
        a: c.a.to_string(),
        b: c.b.to_string(),
        valuation: c.valuation,
    }
}

fn render(envelope: &Envelope) -> String {
    let mut s = serde_json::to_string_pretty(envelope).expect("static schema");
    s.push('\n');
    s
}

/// Certificate carrying T1 witnesses for the given pairs.
pub fn t1_witness_certificate(t: &Rational, entries: &[PairWitnessT1]) -> String {
    let payload = WitnessPayloadT1 {
        entries: entries.iter().map(t1_entry).collect(),
        metadata: Metadata::standard(),
    };
    render(&Envelope {
        version: CERTIFICATE_VERSION,
        formula_id: "T1".into(),
        t: t.to_string(),
        kind: "witness".into(),
        payload: serde_json::to_value(payload).expect("static schema"),
    })
}

/// Certificate carrying T2 witnesses for the given pairs.
pub fn t2_witness_certificate(t: &Rational, entries: &[PairWitnessT2]) -> String {
    let payload = WitnessPayloadT2 {
        entries: entries.iter().map(t2_entry).collect(),
        metadata: Metadata::standard(),
    };
    render(&Envelope {
        version: CERTIFICATE_VERSION,
        formula_id: "T2".into(),
        t: t.to_string(),
        kind: "witness".into(),
        payload: serde_json::to_value(payload).expect("static schema"),
    })
}

/// Certificate for a refutation.
pub fn refutation_certificate(t: &Rational, cert: &RefutationCert) -> String {
    render(&Envelope {
        version: CERTIFICATE_VERSION,
        formula_id: cert.formula_id.as_str().into(),
        t: t.to_string(),
        kind: "refutation".into(),
        payload: serde_json::to_value(refutation_payload(cert)).expect("static schema"),
    })
}

/// Certificate for a classifier verdict: either the full witness bundle
/// (formula_id "T1+T2") or the canonical refutation.
pub fn classification_certificate(t: &Rational, verdict: &Verdict) -> String {
    let (formula_id, payload) = match verdict {
        Verdict::Integer(bundle) => (
            "T1+T2".to_string(),
            ClassificationPayload {
                verdict: "integer".into(),
                t1_entries: Some(bundle.t1.iter().map(t1_entry).collect()),
                t2_entries: Some(bundle.t2.iter().map(t2_entry).collect()),
                refutation: None,
                metadata: Metadata::standard(),
            },
        ),
        Verdict::NonInteger(cert) => (
            cert.formula_id.as_str().to_string(),
            ClassificationPayload {
                verdict: "noninteger".into(),
                t1_entries: None,
                t2_entries: None,
                refutation: Some(refutation_payload(cert)),
                metadata: Metadata::standard(),
            },
        ),
    };
    render(&Envelope {
        version: CERTIFICATE_VERSION,
        formula_id,
        t: t.to_string(),
        kind: "classification".into(),
        payload: serde_json::to_value(payload).expect("static schema"),
    })
}

fn decode<T: serde::de::DeserializeOwned>(payload: serde_json::Value) -> Result<T> {
    serde_json::from_value(payload)
        .map_err(|e| Error::InvalidInput(format!("malformed certificate payload: {e}")))
}

fn verify_t1_entries(t: &Rational, entries: &[T1EntryJson]) -> Result<bool> {
    if entries.is_empty() {
        return Ok(false);
    }
    for e in entries {
        let (a, b) = (parse_rational(&e.a)?, parse_rational(&e.b)?);
        let w = WitnessT1 {
            a_sq: parse4(&e.a_sq)?,
            b_sq: parse4(&e.b_sq)?,
            x: parse4(&e.x)?,
            y: parse4(&e.y)?,
            n: e.n,
        };
        if !eval_t1(t, &a, &b, &w) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn verify_t2_entries(t: &Rational, entries: &[T2EntryJson]) -> Result<bool> {
    if entries.is_empty() {
        return Ok(false);
    }
    for e in entries {
        let (a, b) = (parse_rational(&e.a)?, parse_rational(&e.b)?);
        let w = WitnessT2 {
            x: parse4(&e.x)?,
            y2: parse_rational(&e.y2)?,
            y3: parse_rational(&e.y3)?,
            y4: parse_rational(&e.y4)?,
            n: e.n,
        };
        if !eval_t2(t, &a, &b, &w) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn verify_refutation(t: &Rational, id: &str, payload: &RefutationPayload) -> Result<bool> {
    let cert = RefutationCert {
        formula_id: id.parse::<FormulaId>()?,
        p: payload.p,
        a: parse_rational(&payload.a)?,
        b: parse_rational(&payload.b)?,
        valuation: payload.valuation,
    };
    Ok(check_refutation(&cert, t))
}

/// Verifies a serialized certificate against t from scratch. Ok(true) iff
/// every claim checks out; structural problems are errors, not falsity.
pub fn check_certificate(json: &str, t: &Rational) -> Result<bool> {
    let envelope: Envelope = serde_json::from_str(json)
        .map_err(|e| Error::InvalidInput(format!("malformed certificate: {e}")))?;
    if envelope.version != CERTIFICATE_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported certificate version {}",
            envelope.version
        )));
    }
    if parse_rational(&envelope.t)? != *t {
        return Ok(false);
    }
    match envelope.kind.as_str() {
        "witness" => match envelope.formula_id.as_str() {
            "T1" => verify_t1_entries(t, &decode::<WitnessPayloadT1>(envelope.payload)?.entries),
            "T2" => verify_t2_entries(t, &decode::<WitnessPayloadT2>(envelope.payload)?.entries),
            other => Err(Error::InvalidInput(format!(
                "witness certificate with formula_id {other:?}"
            ))),
        },
        "refutation" => {
            let payload: RefutationPayload = decode(envelope.payload)?;
            verify_refutation(t, &envelope.formula_id, &payload)
        }
        "classification" => {
            let payload: ClassificationPayload = decode(envelope.payload)?;
            match payload.verdict.as_str() {
                "integer" => {
                    let t1 = payload.t1_entries.ok_or_else(|| {
                        Error::InvalidInput("integer verdict without t1 entries".into())
                    })?;
                    let t2 = payload.t2_entries.ok_or_else(|| {
                        Error::InvalidInput("integer verdict without t2 entries".into())
                    })?;
                    Ok(verify_t1_entries(t, &t1)? && verify_t2_entries(t, &t2)?)
                }
                "noninteger" => {
                    let r = payload.refutation.ok_or_else(|| {
                        Error::InvalidInput("noninteger verdict without refutation".into())
                    })?;
                    verify_refutation(t, &envelope.formula_id, &r)
                }
                other => Err(Error::InvalidInput(format!("unknown verdict {other:?}"))),
            }
        }
        other => Err(Error::InvalidInput(format!("unknown certificate kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational_from;
    use crate::formula::{classify, prove_t1, refute};

    #[test]
    fn classification_round_trips() {
        let t = rational_from(5);
        let verdict = classify(&t, 2, 42).unwrap();
        let json = classification_certificate(&t, &verdict);
        assert!(check_certificate(&json, &t).unwrap());
        // Wrong t: clean failure, not an error.
        assert!(!check_certificate(&json, &rational_from(6)).unwrap());
    }

    #[test]
    fn refutation_round_trips() {
        let t = parse_rational("1/2").unwrap();
        let verdict = classify(&t, 2, 42).unwrap();
        let json = classification_certificate(&t, &verdict);
        assert!(check_certificate(&json, &t).unwrap());
        let cert = refute(&t, FormulaId::T2).unwrap();
        let json = refutation_certificate(&t, &cert);
        assert!(check_certificate(&json, &t).unwrap());
    }

    #[test]
    fn witness_certificates_round_trip() {
        let t = rational_from(3);
        let (a, b) = (rational_from(7), rational_from(7));
        let witness = prove_t1(&t, &a, &b).unwrap();
        let json = t1_witness_certificate(&t, &[PairWitnessT1 { a, b, witness }]);
        assert!(check_certificate(&json, &t).unwrap());
    }

    #[test]
    fn tampering_is_caught() {
        let t = parse_rational("1/2").unwrap();
        let cert = refute(&t, FormulaId::T1).unwrap();
        let json = refutation_certificate(&t, &cert);
        // Swap the recipe parameters for a split pair: well-formed but false.
        let tampered = json.replace("\"7\"", "\"1\"");
        assert_ne!(json, tampered);
        assert!(!check_certificate(&tampered, &t).unwrap());
        // Tampered valuation.
        let tampered = json.replace("\"valuation\": -1", "\"valuation\": -3");
        assert_ne!(json, tampered);
        assert!(!check_certificate(&tampered, &t).unwrap());
    }

    #[test]
    fn structural_damage_is_an_error() {
        let t = parse_rational("1/2").unwrap();
        let cert = refute(&t, FormulaId::T1).unwrap();
        let json = refutation_certificate(&t, &cert);
        assert!(check_certificate("not json", &t).is_err());
        let wrong_version = json.replace("\"version\": 1", "\"version\": 99");
        assert!(check_certificate(&wrong_version, &t).is_err());
        let unknown_kind = json.replace("\"refutation\"", "\"claim\"");
        assert!(check_certificate(&unknown_kind, &t).is_err());
    }

    #[test]
    fn serialization_is_byte_deterministic() {
        let t = rational_from(9);
        let v1 = classify(&t, 3, 7).unwrap();
        let v2 = classify(&t, 3, 7).unwrap();
        assert_eq!(
            classification_certificate(&t, &v1),
            classification_certificate(&t, &v2)
        );
    }
}
