//! Logarithmic complete monotonicity of weighted gamma-function ratios
//!
//! ```text
//!            Γ(A₁x+a₁)···Γ(A_px+a_p)
//!   W(x) = ───────────────────────────
//!            Γ(B₁x+b₁)···Γ(B_qx+b_q)
//! ```
//!
//! The crate decides whether `W` is logarithmically completely monotone
//! ([`monotonicity::classify`]), evaluates the Fox H-function that represents
//! `W` as a Laplace transform ([`foxh::eval_h`]) and cross-checks the
//! representation with independent quadratures ([`verification`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command line
//! front end and anything else touching the operating system live in the
//! companion `gamma-lcm` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so NaN lands on the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod foxh;
pub mod monotonicity;
pub mod quad;
pub mod ratio;
pub mod specfun;
pub mod verification;

pub use error::{Error, Result};
pub use foxh::{ContourConfig, HEvaluation};
pub use monotonicity::{Classification, ConditionEvidence, ConditionId, ConditionStatus, Verdict};
pub use ratio::{DerivedInvariants, RatioSpec};
pub use specfun::EvalResult;
pub use verification::{ResidualReport, ZeroCountReport};
