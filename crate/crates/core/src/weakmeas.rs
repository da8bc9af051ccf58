//! Pre- and post-weak measurement operators and their selective application.
//!
//! The pre-measurement element m₀ = diag(√(1−p), 1) partially collapses a
//! qubit toward |1⟩; the post-measurement element M₀ = diag(1, √(1−q))
//! reverses it. Both are kept branches of two-outcome measurements whose
//! discarded elements m₁ = diag(√p, 0) and M₁ = diag(0, √q) complete the
//! identity. Only the kept branch is ever applied; the discarded outcome
//! shows up solely through the success probability.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qla::{self, Mode, StateVector, C64};

/// Largest admissible singular value of a measurement element.
const CONTRACTIVITY_TOL: f64 = 1e-12;

/// A weak-measurement strength in [0, 1] with its complement stored
/// explicitly, so that `value + complement == 1` holds exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementStrength {
    value: f64,
    complement: f64,
}

impl MeasurementStrength {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(Error::StrengthOutOfRange(value));
        }
        Ok(Self { value, complement: 1.0 - value })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// The complement 1 − value.
    pub fn complement(&self) -> f64 {
        self.complement
    }
}

fn diag2(a: f64, b: f64) -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(a, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(b, 0.0),
        ],
    )
}

/// Kept pre-measurement element m₀ = diag(√(1−p), 1).
pub fn pre_weak_operator(p: f64) -> Result<DMatrix<C64>> {
    let s = MeasurementStrength::new(p)?;
    Ok(diag2(s.complement().sqrt(), 1.0))
}

/// Discarded pre-measurement element m₁ = diag(√p, 0).
pub fn pre_weak_discard(p: f64) -> Result<DMatrix<C64>> {
    let s = MeasurementStrength::new(p)?;
    Ok(diag2(s.value().sqrt(), 0.0))
}

/// Kept post-measurement element M₀ = diag(1, √(1−q)).
pub fn post_weak_operator(q: f64) -> Result<DMatrix<C64>> {
    let s = MeasurementStrength::new(q)?;
    Ok(diag2(1.0, s.complement().sqrt()))
}

/// Discarded post-measurement element M₁ = diag(0, √q).
pub fn post_weak_discard(q: f64) -> Result<DMatrix<C64>> {
    let s = MeasurementStrength::new(q)?;
    Ok(diag2(0.0, s.value().sqrt()))
}

/// Applies a measurement element selectively on one mode, keeping the
/// outcome: the state is left unnormalized and the success probability is
/// the ratio of the new to the old squared norm.
///
/// The operator must be a valid measurement element (no singular value
/// above 1); Pauli corrections pass through the same path since they are
/// unitary.
pub fn apply_selective(
    op: &DMatrix<C64>,
    mode: Mode,
    s: &StateVector,
) -> Result<(StateVector, f64)> {
    let max_sv = op
        .singular_values()
        .iter()
        .copied()
        .fold(0.0f64, f64::max);
    if max_sv > 1.0 + CONTRACTIVITY_TOL {
        return Err(Error::NotContractive(max_sv));
    }
    if s.squared_norm() <= 0.0 {
        return Err(Error::ZeroWeight(s.squared_norm()));
    }
    let out = qla::apply_local(op, &[mode], s)?;
    let success = (out.squared_norm() / s.squared_norm()).clamp(0.0, 1.0);
    Ok((out, success))
}
