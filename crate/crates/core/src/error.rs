use core::fmt;

/// Errors surfaced by the engine, strategies, and verifiers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `n` must be a positive even vertex count.
    OddOrZeroN(u32),
    /// A strategy needed an unsaturated vertex and none was available.
    NoUnsaturatedVertex,
    /// No legal circle placement exists for the current square.
    NoLegalCircle { square: u32 },
    /// A strategy proposed a circle equal to the square (self-loop).
    SelfLoop { vertex: u32 },
    /// A strategy proposed an edge that already exists.
    DuplicateEdge { square: u32, circle: u32 },
    /// Internal bookkeeping is inconsistent (a bug, not a caller error).
    StateCorruption(&'static str),
    /// A round cap was exhausted before the stop condition held.
    RoundCapExhausted { cap: u64, unsaturated: u32 },
    /// Vertex index out of range.
    VertexOutOfRange { vertex: u32, n: u32 },
    /// Arc stream fed to a tracker was not in round order.
    OutOfOrderRound { expected: u64, got: u64 },
    /// The maximum-matching oracle refuses instances above its size cap.
    OracleCapExceeded { n: u32, cap: u32 },
    /// ODE integration left the admissible region before its event fired.
    GuardViolated { s: f64 },
    /// ODE integration reached `s_max` without triggering its event.
    EventNotFound { s_max: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OddOrZeroN(n) => {
                write!(f, "vertex count must be even and positive, got {n}")
            }
            Error::NoUnsaturatedVertex => write!(f, "no unsaturated vertex available"),
            Error::NoLegalCircle { square } => {
                write!(f, "no legal circle placement for square on vertex {square}")
            }
            Error::SelfLoop { vertex } => write!(f, "self-loop proposed at vertex {vertex}"),
            Error::DuplicateEdge { square, circle } => {
                write!(f, "edge {square}-{circle} already present")
            }
            Error::StateCorruption(what) => write!(f, "state corruption: {what}"),
            Error::RoundCapExhausted { cap, unsaturated } => {
                write!(
                    f,
                    "round cap {cap} exhausted with {unsaturated} unsaturated vertices"
                )
            }
            Error::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for n={n}")
            }
            Error::OutOfOrderRound { expected, got } => {
                write!(f, "arc round {got} out of order (expected {expected})")
            }
            Error::OracleCapExceeded { n, cap } => {
                write!(f, "matching oracle capped at n={cap}, got n={n}")
            }
            Error::GuardViolated { s } => {
                write!(f, "integration left the admissible region at s={s}")
            }
            Error::EventNotFound { s_max } => {
                write!(f, "no event before s_max={s_max}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
