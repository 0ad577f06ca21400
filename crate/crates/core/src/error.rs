use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the engine. Budget errors mean "input too large for desk
/// scale", never "no solution exists"; mathematical negatives (a conic with a
/// local obstruction, a rational that is not an integer) have their own
/// variants or result types so the two are impossible to conflate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("factorization budget exceeded for {0}")]
    BudgetExceeded(String),

    #[error("negative input: {0}")]
    NegativeInput(String),

    #[error("{x} is not p-integral at p = {p}")]
    NotPIntegral { x: String, p: u64 },

    #[error("crt moduli are not pairwise coprime: {0}")]
    NotCoprime(String),

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("no nonresidue exists in characteristic 2")]
    EvenCharacteristic,

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),

    #[error("s = {0} is not in the trace set at p = {1}")]
    NotInTraceSet(String, u64),

    #[error("t = {0} has v_p(t) < 0 at ramified p = {1}")]
    NotInT(String, u64),

    #[error("deterministic search exhausted: {0}")]
    SearchExhausted(String),

    #[error("t = {0} is not an integer")]
    NotInteger(String),

    #[error("t = {0} is an integer; no refutation exists")]
    IsInteger(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
