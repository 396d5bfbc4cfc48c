//! Left-invariant Kenmotsu structures on Lie algebras.
//!
//! A structure is a [`MetricLieAlgebra`] (structure constants and an inner
//! product in some basis) together with [`AlmostContactData`] `(φ, ξ)`. The
//! crate verifies the Kenmotsu axioms ([`kenmotsu`]), computes the
//! Levi-Civita product, curvature and Ricci tensor ([`connection`]), reduces a
//! Kenmotsu Lie algebra to the model `g_λ` ([`classify`]) and evaluates the
//! model groups `G_λ` themselves ([`model`]).
//!
//! Batch experiments in [`sweep`] run on rayon when the `parallel` feature is
//! enabled (the default) and sequentially otherwise.

// Checks are written as `!(residual < tol)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod cli;
pub mod connection;
mod error;
pub mod format;
pub mod kenmotsu;
pub mod liealg;
pub mod model;
pub mod numkit;
pub mod parallel;
mod report;
pub mod rng;
pub mod sweep;

pub use classify::{normal_form, reconstruct, NormalForm};
pub use error::{Error, Result};
pub use kenmotsu::{AlmostContactData, VerificationCheck, VerificationReport};
pub use liealg::{pushforward, MetricLieAlgebra, Subspace};
pub use model::{Lambda, ModelPoint};
pub use numkit::{ComplexMatrix, RealMatrix, DEFAULT_TOL};
pub use parallel::Execution;
