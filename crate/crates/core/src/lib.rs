//! Density-matrix simulation of entanglement localization from W-like
//! three-qubit states by weak measurement and reversal, with amplitude
//! damping, depolarizing and phase damping noise on the transmitted qubits.
//!
//! Module map:
//! * [`linalg`]: dense complex matrices, partial trace, Jacobi eigensolver
//! * [`states`]: W-like presets and the weighted [`states::DensityMatrix`]
//! * [`channels`]: Kraus noise channels
//! * [`measurements`]: postselected weak/reversal/projective elements
//! * [`entanglement`]: Wootters concurrence and concurrence of assistance
//! * [`protocols`]: the localization pipelines and their closed forms
//! * [`explorer`]: sweeps, reversal-strength optimisation, Pareto fronts
//! * [`format`]: byte-stable number formatting for tabular output

pub mod channels;
pub mod entanglement;
pub mod error;
pub mod explorer;
pub mod format;
pub mod linalg;
pub mod measurements;
pub mod protocols;
pub mod states;

pub use error::{Error, Result};
