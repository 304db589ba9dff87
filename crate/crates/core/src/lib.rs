//! Pseudo-spectral laboratory for the defocusing fractional cubic NLS
//! `i∂ₜu + (−Δ)^α u = −|u|²u` on the rescaled torus, with the I-method
//! modified energies, Strichartz-constant probes and the Picard-iterate
//! growth experiment.

// `!(x > 0.0)` is used deliberately so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod datum;
pub mod dd;
pub mod dynamics;
pub mod error;
pub mod estimates;
pub mod experiment;
pub mod fit;
pub mod illposed;
pub mod imethod;
pub mod par;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};
