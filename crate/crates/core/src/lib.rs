//! Spreading-speed analysis and semi-discrete simulation for nonlocal
//! Fisher-KPP equations ∂ₜu = K∗u − K̄u + u·f(t,u) with time-varying growth.
//!
//! The crate has two halves that check each other:
//!
//! * analysis: kernel transforms, least means of the growth coefficient,
//!   the speed curve λ ↦ ⌊c(λ)⌋ with its minimum (λ*, c*), truncated speeds
//!   and the piecewise speed envelope;
//! * experiment: an RK4 solver for the truncated-domain dynamics, level-set
//!   front tracking against the theoretical envelopes, and numerical
//!   certificates for the comparison structures (super/sub-solutions,
//!   ordering, strict positivity).

pub mod dynamics;
pub mod env;
pub mod error;
pub mod fronts;
pub mod kernel;
pub mod quad;
pub mod scenario;
pub mod speed;
pub mod verify;

pub use error::{Error, Result};
