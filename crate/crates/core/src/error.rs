use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library reports. `code()` is stable and machine readable.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not an odd prime below 2^31")]
    NotPrime(u64),
    #[error("operands live over different prime fields ({0} and {1})")]
    FieldMismatch(u64, u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("label a({0}) is zero modulo m")]
    ZeroLabel(usize),
    #[error("labels together with m have gcd {0}, so they do not generate Z/m")]
    NotGenerating(u64),
    #[error("labels sum to {0}, which is not divisible by m")]
    SumNonzero(u64),
    #[error("p = {0} divides m = {1}")]
    PDividesM(u64, u64),
    #[error("quotient datum keeps only {0} nonzero labels")]
    QuotientDegenerate(usize),
    #[error("clutching needs a1(r1) + a2(1) = 0 mod m, got {0} + {1} mod {2}")]
    NotAdmissible(u64, u64, u64),
    #[error("parameters out of range: {0}")]
    ParamOutOfRange(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("psi entry undefined here: {0}")]
    PsiHypothesisNotMet(String),
    #[error("term budget exceeded: need about {needed} terms, budget is {budget}")]
    DegreeBudgetExceeded { needed: u128, budget: u64 },
    #[error("prime {0} is in the wrong congruence class: {1}")]
    WrongCongruenceClass(u64, String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::NotPrime(_) => "not_prime",
            Error::FieldMismatch(..) => "field_mismatch",
            Error::DivisionByZero => "division_by_zero",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::ZeroLabel(_) => "zero_label",
            Error::NotGenerating(_) => "not_generating",
            Error::SumNonzero(_) => "sum_nonzero",
            Error::PDividesM(..) => "p_divides_m",
            Error::QuotientDegenerate(_) => "quotient_degenerate",
            Error::NotAdmissible(..) => "not_admissible",
            Error::ParamOutOfRange(_) => "param_out_of_range",
            Error::HypothesisNotMet(_) => "hypothesis_not_met",
            Error::IndexOutOfRange(_) => "index_out_of_range",
            Error::PsiHypothesisNotMet(_) => "psi_hypothesis_not_met",
            Error::DegreeBudgetExceeded { .. } => "budget_exceeded",
            Error::WrongCongruenceClass(..) => "wrong_congruence_class",
            Error::UnsupportedFamily(_) => "unsupported_family",
            Error::Io(_) => "io",
        }
    }

    /// Process exit status used by the binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HypothesisNotMet(_)
            | Error::PsiHypothesisNotMet(_)
            | Error::WrongCongruenceClass(..)
            | Error::UnsupportedFamily(_) => 2,
            Error::DegreeBudgetExceeded { .. } => 3,
            Error::Io(_) => 1,
            _ => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
