//! Command-line front end for the integrality engine.
//!
//! Exit codes carry the semantic outcome: 0 for affirmative or verified, 1
//! for negative, refuted, or check-failed, 2 for usage and budget errors.
//! Every command is stdin-independent and deterministic given its flags and
//! seed. Rationals cross the boundary as "num/den" strings only.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use integrality::error::Error;
use integrality::exact_arith::{is_prime_u64, parse_rational, Place};
use integrality::formula::{
    check_certificate, classification_certificate, classify, eval_t1, eval_t2, prove_t1, prove_t2,
    refutation_certificate, refute, t1_witness_certificate, t2_witness_certificate, FormulaId,
    PairWitnessT1, PairWitnessT2, Verdict,
};
use integrality::quaternion::{hilbert_symbol, ramified_primes, QuatParams};
use integrality::trace_sets::{decompose_t, in_t, zp_generators};
use integrality::verify::{
    verify_cs_structure, verify_intersection_recipes, verify_some_ts, verify_uq_lemma, LemmaReport,
};
use integrality::Rational;

/// Fixed parameters of the structure-theorem sweep run by `verify-lemmas`:
/// the field Q(sqrt(2)), primes to 50, 100 sampled parameters.
const CS_SWEEP: (u64, u64, u64) = (2, 50, 100);

#[derive(Parser)]
#[command(name = "integrality", version, about = "Exact integrality decisions with checkable certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Hilbert symbol (a, b)_p as 1 or -1
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// A prime, or "inf" for the real place
        p: String,
    },
    /// Decide whether t is an integer; write a certificate either way
    Classify {
        #[arg(allow_hyphen_values = true)]
        t: String,
        /// Seeded random (a, b) pairs backing an integer verdict, per formula
        #[arg(long, default_value_t = 4)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the certificate to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate file against a claimed t
    Check {
        cert: PathBuf,
        #[arg(allow_hyphen_values = true)]
        t: String,
    },
    /// Run the exhaustive lemma sweeps and report pass/fail
    VerifyLemmas {
        #[arg(long, default_value_t = 64)]
        max_q: u64,
        #[arg(long, default_value_t = 200)]
        max_p: u64,
        /// Seed for the sampled half of the structure sweep
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Write the full reports to this file
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the ramified places of the quaternion algebra (a, b)
    Ramified {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Is t in the trace set of (a, b)? Prints MEMBER or NONMEMBER
    InT {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Split t as s + s' + n with both parts in the trace set of (a, b)
    Decompose {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Prove one formula instance for integer t at (a, b); emit the witness
    Prove {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        formula: String,
        /// Write the certificate to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refute integrality of t for one formula; emit the refutation
    Refute {
        #[arg(allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        formula: String,
        /// Write the certificate to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print two parameter pairs whose ramification sets meet exactly in {p}
    ZpGen { p: u64 },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn rat(s: &str) -> Result<Rational, Error> {
    parse_rational(s)
}

fn params(a: &str, b: &str) -> Result<QuatParams, Error> {
    QuatParams::new(rat(a)?, rat(b)?)
}

fn write_or_print(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Hilbert { a, b, p } => {
            let place = match p.as_str() {
                "inf" => Place::Infinite,
                other => {
                    let p: u64 = other
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad place {other:?}")))?;
                    if !is_prime_u64(p) {
                        return Err(Error::InvalidInput(format!("{p} is not prime")));
                    }
                    Place::Finite(p)
                }
            };
            // QuatParams validation rejects the zero arguments the symbol
            // is undefined on.
            let params = params(&a, &b)?;
            println!("{}", hilbert_symbol(params.a(), params.b(), place));
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { t, samples, seed, out } => {
            let t = rat(&t)?;
            let verdict = classify(&t, samples, seed)?;
            let cert = classification_certificate(&t, &verdict);
            match &verdict {
                Verdict::Integer(_) => {
                    println!("INTEGER");
                    if let Some(path) = &out {
                        write_or_print(&cert, &Some(path.clone()))?;
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::NonInteger(r) => {
                    println!("NONINTEGER p={} (a,b)=({},{})", r.p, r.a, r.b);
                    if let Some(path) = &out {
                        write_or_print(&cert, &Some(path.clone()))?;
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Check { cert, t } => {
            let t = rat(&t)?;
            let json = std::fs::read_to_string(&cert)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", cert.display())))?;
            if check_certificate(&json, &t)? {
                println!("VALID");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("INVALID");
                Ok(ExitCode::from(1))
            }
        }
        Command::VerifyLemmas { max_q, max_p, seed, json } => {
            let reports = vec![
                verify_uq_lemma(max_q)?,
                verify_intersection_recipes(max_p)?,
                verify_some_ts(max_p)?,
                verify_cs_structure(CS_SWEEP.0, CS_SWEEP.1, CS_SWEEP.2, seed)?,
            ];
            let all_pass = print_reports(&reports);
            if let Some(path) = &json {
                let text = serde_json::to_string_pretty(&reports)
                    .expect("reports serialize") + "\n";
                write_or_print(&text, &Some(path.clone()))?;
            }
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Ramified { a, b } => {
            let delta = ramified_primes(&params(&a, &b)?)?;
            let mut places: Vec<String> =
                delta.finite_primes.iter().map(u64::to_string).collect();
            if delta.infinite_ramified {
                places.push("inf".into());
            }
            if places.is_empty() {
                println!("none");
            } else {
                println!("{}", places.join(" "));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::InT { t, a, b } => {
            if in_t(&params(&a, &b)?, &rat(&t)?)? {
                println!("MEMBER");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("NONMEMBER");
                Ok(ExitCode::from(1))
            }
        }
        Command::Decompose { t, a, b } => {
            let d = decompose_t(&params(&a, &b)?, &rat(&t)?)?;
            println!("s={} s'={} n={}", d.s, d.s_prime, d.n);
            Ok(ExitCode::SUCCESS)
        }
        Command::Prove { t, a, b, formula, out } => {
            let t = rat(&t)?;
            let (a, b) = (rat(&a)?, rat(&b)?);
            let cert = match formula.parse::<FormulaId>()? {
                FormulaId::T1 => {
                    let witness = prove_t1(&t, &a, &b)?;
                    assert!(eval_t1(&t, &a, &b, &witness), "prover emitted a bad witness");
                    println!("INTEGER T1 n={}", witness.n);
                    t1_witness_certificate(&t, &[PairWitnessT1 { a, b, witness }])
                }
                FormulaId::T2 => {
                    let witness = prove_t2(&t, &a, &b)?;
                    assert!(eval_t2(&t, &a, &b, &witness), "prover emitted a bad witness");
                    println!("INTEGER T2 n={}", witness.n);
                    t2_witness_certificate(&t, &[PairWitnessT2 { a, b, witness }])
                }
            };
            if let Some(path) = &out {
                write_or_print(&cert, &Some(path.clone()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Refute { t, formula, out } => {
            let t = rat(&t)?;
            let cert = refute(&t, formula.parse::<FormulaId>()?)?;
            println!("NONINTEGER p={} (a,b)=({},{})", cert.p, cert.a, cert.b);
            if let Some(path) = &out {
                write_or_print(&refutation_certificate(&t, &cert), &Some(path.clone()))?;
            }
            Ok(ExitCode::from(1))
        }
        Command::ZpGen { p } => {
            let pair = zp_generators(p)?;
            println!(
                "p={} first=({},{}) second=({},{})",
                pair.p,
                pair.first.a(),
                pair.first.b(),
                pair.second.a(),
                pair.second.b()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// One line per report; returns whether every report passed.
fn print_reports(reports: &[LemmaReport]) -> bool {
    let mut all_pass = true;
    for r in reports {
        if r.pass {
            println!("PASS {} [{}] ({} instances, {} ms)",
                r.lemma_id, r.parameters, r.instances.len(), r.wall_ms);
        } else {
            all_pass = false;
            println!("FAIL {} [{}] counterexamples: {}",
                r.lemma_id, r.parameters, r.counterexamples.join("; "));
        }
    }
    all_pass
}
