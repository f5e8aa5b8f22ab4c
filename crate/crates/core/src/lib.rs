//! Norm engines and embedding tests for rearrangement-invariant function
//! spaces, computed on exact step functions over (0, 1].
//!
//! The crate provides:
//!
//! * [`stepfn`]: distribution functions, decreasing rearrangements and exact
//!   integrals for finitely-valued functions with rational breakpoints;
//! * [`gfun`]: the admissible weight catalog, dilation profiles with index
//!   estimates, ratio conditions and the least concave majorant;
//! * [`norms`]: Lorentz, Marcinkiewicz, quasinorm and Orlicz (Luxemburg)
//!   engines plus fundamental-function evaluators;
//! * [`embed`]: increment-series convergence certificates, the replacement
//!   weight construction, the index-gap embedding chain and the
//!   disjoint-witness search;
//! * [`cex`]: a disjoint family on whose span two norms with vanishing
//!   fundamental-function ratio are equivalent, with certified verification
//!   of every bound in the construction.
//!
//! The `parallel` feature (default on) runs sample loops on a rayon pool;
//! results are derived per sample index from a counter-mode generator, so
//! output is identical with the feature disabled.

pub mod cex;
pub mod embed;
mod error;
pub mod exact;
pub mod gfun;
pub mod norms;
pub mod quad;
pub mod stepfn;
pub mod trend;

pub use error::{Error, Result};
