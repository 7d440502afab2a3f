//! Error terms of the divisor, circle and weight-12 cusp-form problems, the
//! square-root relation series behind their higher power moments, and the
//! numerical machinery that checks predicted moment main terms against direct
//! integration.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] sieves `d`, `r`, `μ`, squarefree kernels and Ramanujan `τ`, and
//!   evaluates the constants `γ`, `ζ(3/2)`, `ζ(3)`.
//! * [`error_terms`] evaluates `Δ`, `P`, `A`, `Δ*` exactly and their truncated
//!   Voronoi expansions.
//! * [`relations`] enumerates and counts solutions of linear relations among
//!   square roots of integers, exactly.
//! * [`series`] computes the truncated series `s_{k;l}(f;y)`, the combinations
//!   `B_k(f)` and the main-term coefficients built from them.
//! * [`moment`] integrates power moments over `[1, T]` and compares them with
//!   the predicted main terms.

pub mod arith;
pub mod calibration;
pub mod dd;
pub mod error;
pub mod error_terms;
pub mod exponents;
pub mod kind;
pub mod moment;
pub mod quad;
pub mod relations;
pub mod series;
pub mod sum;
pub mod verify;

pub use arith::{constants, ArithTable, Constants};
pub use error::{Error, Result};
pub use kind::{CoefficientKind, ErrorTermKind};
