use thiserror::Error;

/// Every failure the lab can report.
///
/// Variants map one-to-one onto the error names used in reports and by the
/// CLI exit-code policy (see [`Error::is_budget`] and [`Error::is_bound_violation`]).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("field order {p}^{k} exceeds the configured bound {bound}")]
    FieldTooLarge { p: u64, k: u32, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element code {code} does not belong to a field of order {q}")]
    FieldMismatch { code: u32, q: u32 },
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,

    #[error("{family} requires rank >= {min}, got {rank}")]
    RankTooSmall { family: String, rank: u32, min: u32 },
    #[error("orthogonal groups are only defined here in odd characteristic")]
    CharacteristicTwoOrthogonal,
    #[error("unsupported family or embedding: {0}")]
    UnsupportedFamily(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not an element of the group")]
    NotInGroup,
    #[error("det(Id + X) = 0: point lies on the singular locus of the Cayley map")]
    OnSingularLocus,
    #[error("matrix does not have determinant 1")]
    NotInSL,
    #[error("generator closure has {found} elements, expected {expected}")]
    GeneratorVerificationFailed { expected: String, found: usize },

    #[error("polynomial is not monic")]
    NonMonic,
    #[error("element is not regular semisimple")]
    NotRegularSemisimple,
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded { what: String, needed: String, budget: u64 },

    #[error("the orbit of x under <A> lies inside V; no escape possible")]
    NoEscapePossible,
    #[error("escape length {k} exceeds the bound {bound}")]
    BoundViolated { k: u64, bound: String },
    #[error("no regular semisimple element was found in <A>")]
    NoRegularSemisimple,
    #[error("generating set does not generate the group ({reached} of {order} elements)")]
    NotGenerating { reached: usize, order: String },
    #[error("the set A must contain the identity")]
    IdentityMissing,

    #[error("profile does not reach radius {needed} and is not saturated")]
    InsufficientProfile { needed: u64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("recurrence violated: {0}")]
    RecurrenceViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }

    /// True for errors that mean a checked bound failed, as opposed to bad input.
    pub fn is_bound_violation(&self) -> bool {
        matches!(
            self,
            Error::BoundViolated { .. }
                | Error::RecurrenceViolated(_)
                | Error::NoRegularSemisimple
                | Error::GeneratorVerificationFailed { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
