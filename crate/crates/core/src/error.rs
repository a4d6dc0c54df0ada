use thiserror::Error;

pub type Result<T, E = OmError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmError {
    #[error("ground set size {0} is outside 1..=32")]
    GroundSetSize(usize),

    #[error("signed vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("positive and negative parts overlap on {0}")]
    Overlap(String),

    #[error("illegal sign character {0:?} (expected one of '+', '-', '0')")]
    IllegalCharacter(char),

    #[error("ground sets differ: {left} vs {right}")]
    GroundSetMismatch { left: usize, right: usize },

    #[error("element list {0:?} is empty, out of range or not strictly increasing")]
    BadElementList(Vec<usize>),

    #[error("refusing to enumerate 2^{0} completions (limit is 2^20)")]
    TooManyCompletions(usize),

    #[error("rank {rank} is out of range for {n} elements")]
    RankOutOfRange { n: usize, rank: usize },

    #[error("m2 chirotope needs an even ground set of size >= 2, got {0}")]
    OddGroundSet(usize),

    #[error("chirotope has {found} values, expected {expected}")]
    ChirotopeLength { expected: usize, found: usize },

    #[error("chirotope is identically zero")]
    ZeroChirotope,

    #[error("restriction to {0:?} drops the rank")]
    RankDrop(Vec<usize>),

    #[error("element {0} is a loop; contraction is degenerate")]
    LoopContraction(usize),

    #[error("operation requires a uniform chirotope")]
    NonUniform,

    #[error("composition closure exceeded {0} covectors")]
    ClosureBound(usize),

    #[error("empty cocircuit set")]
    EmptyCocircuits,

    #[error("tope {0} is not full-support and canonical")]
    BadTope(String),

    #[error("support {support} has size {found}, expected rank + 1 = {expected}")]
    SupportSize {
        support: String,
        expected: usize,
        found: usize,
    },

    #[error("no circuit is supported on {0}")]
    NoCircuit(String),

    #[error("{count} distinct circuits are supported on {support}")]
    MultipleCircuits { support: String, count: usize },

    #[error("{what} is limited to ground sets of at most {limit} elements, got {n}")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
