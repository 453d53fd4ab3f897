use thiserror::Error;

use crate::polymatroid::AxiomViolation;

#[derive(Debug, Error)]
pub enum PmError {
    #[error("invalid label {0:?}: labels are nonempty strings over [A-Za-z0-9_]")]
    InvalidLabel(String),
    #[error("duplicate label {0:?} in ground set")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("label {0:?} is already in use")]
    LabelCollision(String),
    #[error("ground set has {n} elements, limit is {max}")]
    TooLarge { n: usize, max: usize },
    #[error("k bound must be positive")]
    ZeroBound,
    #[error("rank table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("subset mask {0:#b} is not contained in the ground set")]
    MaskOutOfRange(u32),
    #[error("missing rank entry for subset {{{0}}}")]
    MissingRank(String),
    #[error("unexpected rank entry {0:?}")]
    ExtraRank(String),
    #[error("{what} overlap on {{{labels}}}")]
    Overlap { what: &'static str, labels: String },
    #[error("not a polymatroid: {} axiom violation(s), first: {}", .0.len(), .0[0])]
    Axioms(Vec<AxiomViolation>),
    #[error("element {label:?} has rank {rank}, above the allowed {max}")]
    RankTooHigh { label: String, rank: u32, max: u32 },
    #[error("{0:?} is a loop")]
    LoopArgument(String),
    #[error("basepoint {label:?} has rank {left} on the left and {right} on the right")]
    BasepointRankMismatch { label: String, left: u32, right: u32 },
    #[error("basepoint {label:?} has rank {rank} in the {side} part, expected 1")]
    BasepointNotPoint { label: String, side: &'static str, rank: u32 },
    #[error("basepoint {label:?} is a separator of the {side} part")]
    BasepointSeparator { label: String, side: &'static str },
    #[error("the {side} part has {len} element(s), at least 2 are required")]
    TooFewElements { side: &'static str, len: usize },
    #[error("basepoint {0:?} is missing from a part")]
    BasepointMissing(String),
    #[error("r(X1) + r(X2) = {sum}, but an exact 2-separation needs r(E) + 1 = {expected}")]
    NotExactTwoSeparation { sum: u32, expected: u32 },
    #[error("blocks do not partition the ground set: {0}")]
    NotPartition(String),
    #[error("{0}")]
    Precondition(String),
    #[error("malformed polymatroid file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
