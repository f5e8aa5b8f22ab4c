use thiserror::Error;

/// Errors shared by every engine in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside a function's domain, or a constructor invariant failed.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two summands of a disjoint combination overlap on positive measure.
    #[error("overlapping supports: {0}")]
    Overlap(String),

    /// The log-log slope of a dilation profile drifts across nested windows.
    #[error("unstable index fit: {0}")]
    FitUnstable(String),

    /// The second function is not dominated by the first on the probe grid.
    #[error("domination order violated: {0}")]
    EmbedOrder(String),

    /// A Young-function candidate is not increasing and convex from zero.
    #[error("non-convex modular function: {0}")]
    NonConvex(String),

    /// A value left the representable range of an engine.
    #[error("out of range: {0}")]
    Range(String),

    /// A stated precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    /// A depth or size budget was exceeded.
    #[error("depth limit: {0}")]
    Depth(String),

    /// A spec string or input file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
