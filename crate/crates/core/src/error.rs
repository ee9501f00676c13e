use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero scalar")]
    DivisionByZero,

    #[error("denominator vanishes at q = {q}")]
    PoleAtQ { q: f64 },

    #[error("q must lie in the open interval (0, 1), got {0}")]
    InvalidQ(String),

    #[error("cutoff {cutoff} too small: element uses index {needed}")]
    CutoffTooSmall { cutoff: usize, needed: usize },

    #[error("three-term recurrence breaks down at lattice index {0}")]
    RecurrenceBreakdown(usize),

    #[error("ladder coefficient vanishes at k = {k} (l = {l})")]
    DegenerateParameter { l: String, k: i64 },

    #[error("index {k} is outside the module window [{lo}, {hi}]")]
    BoundaryIndex { k: i64, lo: i64, hi: i64 },

    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    #[error("unknown token `{token}` at byte {offset}")]
    UnknownToken { offset: usize, token: String },

    #[error("`{token}` at byte {offset} does not belong to a {kind} expression")]
    MixedKind { offset: usize, token: String, kind: &'static str },

    #[error("invalid element data: {0}")]
    Format(String),
}

impl Error {
    /// Math-domain errors map to CLI exit code 2, everything else to 1.
    pub fn is_math_domain(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZero
                | Error::PoleAtQ { .. }
                | Error::InvalidQ(_)
                | Error::CutoffTooSmall { .. }
                | Error::RecurrenceBreakdown(_)
                | Error::DegenerateParameter { .. }
                | Error::BoundaryIndex { .. }
        )
    }
}
