//! Recovering vectors from saturated (clipped) frame coefficients.
//!
//! A frame `(x_j)` in ℝⁿ measures `x` through `c_j = ⟨x, x_j⟩`; a sensor
//! with range `λ` reports `φ_λ(c_j) = clamp(c_j, −λ, λ)`. This crate
//! decides when `x` is determined by the clipped data, computes the
//! critical clipping level of a frame, and reconstructs `x` with the
//! linear and saturation-aware frame algorithms.
//!
//! Modules, bottom up: [`numerics`] (dense linear algebra and the seeded
//! generator), [`frames`], [`saturation`], [`packing`], [`recovery`],
//! [`experiments`] and the [`cli`] front end.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod frames;
pub mod numerics;
pub mod packing;
pub mod recovery;
pub mod saturation;

pub use error::{Error, Result};
pub use frames::{Frame, FrameBounds};
pub use numerics::{Mat, Rng};

/// Floats in every text artifact: 17 significant digits, round-trip exact.
pub(crate) fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}
