use thiserror::Error;

use crate::forest::Label;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("label {label} out of range 1..={m}")]
    LabelOutOfRange { label: Label, m: u32 },
    #[error("malformed twisted tree at byte {pos}: ^inf is only allowed at the root")]
    MalformedTwisted { pos: usize },
    #[error("rooted tree {0} cannot appear in an intersection forest")]
    RootedInForest(String),
    #[error("index counts differ: {0} vs {1}")]
    IndexCountMismatch(u32, u32),
    #[error("expected a rooted tree, got {0}")]
    NotRooted(String),
    #[error("tensor is not a Lie element (degree {degree})")]
    NotPrimitive { degree: usize },
    #[error("tree {tree} has order {found}, expected {expected}")]
    OrderMismatch { tree: String, found: usize, expected: usize },
    #[error("eta of <J,J> has an odd coefficient for {0}")]
    OddCoefficient(String),
    #[error("value is not in the bracket kernel")]
    BracketNonzero,
    #[error("tree {0} is not among the group generators")]
    GeneratorMissing(String),
    #[error("cannot collapse an order zero tree {0}")]
    CollapseOrderZero(String),
    #[error("tree {tree} has no univalent vertex {vertex} labeled {label}")]
    NoSuchVertex { tree: String, vertex: usize, label: Label },
    #[error("tree {tree} has no label of multiplicity > {k}")]
    HypothesisViolation { tree: String, k: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::LabelOutOfRange { .. } => "label-out-of-range",
            Error::MalformedTwisted { .. } => "malformed-twisted",
            Error::RootedInForest(_) => "rooted-in-forest",
            Error::IndexCountMismatch(..) => "index-count-mismatch",
            Error::NotRooted(_) => "not-rooted",
            Error::NotPrimitive { .. } => "not-primitive",
            Error::OrderMismatch { .. } => "order-mismatch",
            Error::OddCoefficient(_) => "odd-coefficient",
            Error::BracketNonzero => "bracket-nonzero",
            Error::GeneratorMissing(_) => "generator-missing",
            Error::CollapseOrderZero(_) => "collapse-order-zero",
            Error::NoSuchVertex { .. } => "no-such-vertex",
            Error::HypothesisViolation { .. } => "hypothesis-violation",
            Error::InvalidParameter(_) => "invalid-parameter",
        }
    }

    /// Parse-level errors as opposed to domain errors.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::LabelOutOfRange { .. } | Error::MalformedTwisted { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
