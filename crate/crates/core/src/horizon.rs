//! Hawking-channel parameters and the Kruskal-to-Schwarzschild vacuum
//! embedding for a single Dirac mode.
//!
//! An observer hovering outside the event horizon sees the Kruskal vacuum
//! of a fermionic mode of frequency ω as a two-mode state spanning the
//! exterior (region I) and interior (region II) of the horizon:
//!
//! ```text
//! |0⟩ → ζ|0⟩_I|0⟩_II + η|1⟩_I|1⟩_II,      |1⟩ → |1⟩_I|0⟩_II,
//! ```
//!
//! with Fermi-factor coefficients ζ = (e^{−ω/T}+1)^{−1/2} and
//! η = (e^{ω/T}+1)^{−1/2} at Hawking temperature T. Everything is expressed
//! through the dimensionless ratio t = T/ω (Planck units); the black-hole
//! mass enters only through the convenience conversion T = 1/(8πM).

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qla::{self, Mode, StateVector, C64};

/// Mode label for the horizon exterior.
pub const REGION_I: Mode = Mode("I");
/// Mode label for the causally inaccessible horizon interior.
pub const REGION_II: Mode = Mode("II");

/// Below this temperature ratio the coefficients are the exact zero-
/// temperature limit (1, 0); avoids overflow in e^{1/t}.
const ZERO_TEMPERATURE_CUTOFF: f64 = 1e-6;

/// A single Dirac mode of the Hawking channel at scaled temperature t = T/ω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HawkingMode {
    temperature_ratio: f64,
    zeta: f64,
    eta: f64,
}

impl HawkingMode {
    pub fn new(temperature_ratio: f64) -> Result<Self> {
        let (zeta, eta) = mode_coefficients(temperature_ratio)?;
        Ok(Self { temperature_ratio, zeta, eta })
    }

    pub fn temperature_ratio(&self) -> f64 {
        self.temperature_ratio
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn zeta_sq(&self) -> f64 {
        self.zeta * self.zeta
    }

    pub fn eta_sq(&self) -> f64 {
        self.eta * self.eta
    }

    /// The 4×2 isometry taking one Schwarzschild mode to the (I, II) pair.
    pub fn embed_isometry(&self) -> DMatrix<C64> {
        let z = C64::new(self.zeta, 0.0);
        let e = C64::new(self.eta, 0.0);
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        // Columns are the images of |0⟩ and |1⟩; rows index |I II⟩.
        DMatrix::from_row_slice(4, 2, &[z, o, o, o, o, l, e, o])
    }
}

/// Fermi-factor coefficients (ζ, η) at scaled temperature t = T/ω.
pub fn mode_coefficients(t: f64) -> Result<(f64, f64)> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidTemperature(t));
    }
    if t < ZERO_TEMPERATURE_CUTOFF {
        return Ok((1.0, 0.0));
    }
    let zeta = 1.0 / ((-1.0 / t).exp() + 1.0).sqrt();
    let eta = 1.0 / ((1.0 / t).exp() + 1.0).sqrt();
    Ok((zeta, eta))
}

/// Hawking temperature of a black hole of mass M: T = 1/(8πM).
pub fn temperature_from_mass(mass: f64) -> Result<f64> {
    if !mass.is_finite() || mass <= 0.0 {
        return Err(Error::InvalidMass(mass));
    }
    Ok(1.0 / (8.0 * std::f64::consts::PI * mass))
}

/// Replaces the mode `bob` with the region pair (I, II) via the Kruskal
/// vacuum embedding. The map is an isometry, so the squared norm is
/// preserved.
pub fn kruskal_embed(s: &StateVector, bob: Mode, mode: &HawkingMode) -> Result<StateVector> {
    qla::apply_map(&mode.embed_isometry(), &[bob], &[REGION_I, REGION_II], s)
}
