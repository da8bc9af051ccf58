//! Exact simulation of weak-measurement-assisted teleportation of a single
//! fermionic qubit through the Hawking-radiation channel of a Schwarzschild
//! black hole.
//!
//! The crate is organized bottom-up:
//!
//! - [`qla`]: dense complex linear algebra over labeled two-level modes:
//!   tensor products, local operator application, partial trace, fidelity,
//!   and a generic two-qubit concurrence.
//! - [`horizon`]: Hawking-channel coefficients and the Kruskal-vacuum
//!   embedding that splits the infalling observer's mode into the exterior
//!   and interior horizon regions.
//! - [`weakmeas`]: pre- and post-weak measurement operators and their
//!   selective (probabilistic) application.
//! - [`protocol`]: the full teleportation pipeline as both a brute-force
//!   circuit and closed-form evaluators, the two optimal post-measurement
//!   strengths, and the shared-pair entanglement quantities.
//! - [`analysis`]: parameter sweeps, improvement maps, CSV emission, and
//!   the command-line entry point.

pub mod analysis;
pub mod error;
pub mod horizon;
pub mod numeric;
pub mod protocol;
pub mod qla;
pub mod weakmeas;

pub use error::{Error, Result};
pub use horizon::HawkingMode;
pub use protocol::{InputState, ProtocolConfig, ProtocolOutcome, QPolicy};
pub use qla::{DensityMatrix, Mode, StateVector};
pub use weakmeas::MeasurementStrength;
