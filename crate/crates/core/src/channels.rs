//! Single-qubit noise channels as Kraus sets.
//!
//! The environment is never simulated explicitly: a channel acts on the
//! register through its Kraus sum, which is the system marginal of the
//! corresponding system–environment isometry.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::linalg::{conjugate_local_sum, Complex, ComplexMatrix, ZERO};
use crate::states::DensityMatrix;

pub const COMPLETENESS_TOL: f64 = 1e-12;

/// Noise model applied to the transmitted qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum NoiseKind {
    #[default]
    #[serde(rename = "none")]
    None,
    #[serde(rename = "ad")]
    AmplitudeDamping,
    #[serde(rename = "dp")]
    Depolarizing,
    #[serde(rename = "pd")]
    PhaseDamping,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 4] = [
        NoiseKind::None,
        NoiseKind::AmplitudeDamping,
        NoiseKind::Depolarizing,
        NoiseKind::PhaseDamping,
    ];

    /// The channel of strength `d`, or `None` for the noiseless case.
    pub fn channel(self, d: f64) -> Result<Option<KrausChannel>> {
        match self {
            NoiseKind::None => Ok(None),
            NoiseKind::AmplitudeDamping => amplitude_damping(d).map(Some),
            NoiseKind::Depolarizing => depolarizing(d).map(Some),
            NoiseKind::PhaseDamping => phase_damping(d).map(Some),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::None => "none",
            NoiseKind::AmplitudeDamping => "ad",
            NoiseKind::Depolarizing => "dp",
            NoiseKind::PhaseDamping => "pd",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NoiseKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown noise '{s}' (expected none, ad, dp, pd)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kind: NoiseKind,
    strength: f64,
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Builds a channel from explicit operators, dropping exact-zero ones and
    /// rejecting sets that fail completeness.
    pub fn from_operators(kind: NoiseKind, strength: f64, operators: Vec<ComplexMatrix>) -> Result<Self> {
        if operators.iter().any(|k| k.rows() != 2 || k.cols() != 2) {
            return Err(Error::DimensionMismatch("Kraus operators must be 2x2".into()));
        }
        let operators: Vec<ComplexMatrix> = operators
            .into_iter()
            .filter(|k| k.as_slice().iter().any(|&z| z != ZERO))
            .collect();
        let channel = Self {
            kind,
            strength,
            operators,
        };
        let residual = channel.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::InvalidInput(format!(
                "Kraus operators are not trace preserving (residual {residual:e})"
            )));
        }
        Ok(channel)
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `max |Σ K†K − I|`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(2, 2);
        for k in &self.operators {
            sum = sum.add(&k.adjoint().matmul(k).expect("2x2")).expect("2x2");
        }
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }

    /// `Σ_i K_i ρ K_i†` with each `K_i` acting on `qubit` (1-based).
    pub fn apply_on_qubit(&self, rho: &DensityMatrix, qubit: usize) -> Result<DensityMatrix> {
        let matrix = conjugate_local_sum(rho.matrix(), &self.operators, qubit)?;
        DensityMatrix::new(matrix, rho.weight())
    }

    /// Acts on a bare 2×2 matrix.
    pub fn apply_single(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let dm = DensityMatrix::new(rho.clone(), rho.trace().re)?;
        Ok(self.apply_on_qubit(&dm, 1)?.matrix().clone())
    }
}

fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// Excitation loss with probability `d`:
/// `K0 = diag(1, √(1−d))`, `K1 = √d |0⟩⟨1|`.
pub fn amplitude_damping(d: f64) -> Result<KrausChannel> {
    let d = check_unit("D", d)?;
    KrausChannel::from_operators(
        NoiseKind::AmplitudeDamping,
        d,
        vec![
            ComplexMatrix::from_real_diag(&[1.0, (1.0 - d).sqrt()]),
            ComplexMatrix::from_real(2, 2, &[0.0, d.sqrt(), 0.0, 0.0])?,
        ],
    )
}

/// `ρ ↦ (1−d)ρ + d·I/2`, as `{√(1−3d/4) I, √(d/4) X, √(d/4) Y, √(d/4) Z}`.
pub fn depolarizing(d: f64) -> Result<KrausChannel> {
    let d = check_unit("D", d)?;
    let a = (1.0 - 0.75 * d).sqrt();
    let b = (0.25 * d).sqrt();
    KrausChannel::from_operators(
        NoiseKind::Depolarizing,
        d,
        vec![
            ComplexMatrix::identity(2).scale(a),
            ComplexMatrix::from_real(2, 2, &[0.0, b, b, 0.0])?,
            ComplexMatrix::from_vec(2, 2, vec![ZERO, Complex::new(0.0, -b), Complex::new(0.0, b), ZERO])?,
            ComplexMatrix::from_real_diag(&[b, -b]),
        ],
    )
}

/// Populations fixed, coherences scaled by `√(1−d)`.
pub fn phase_damping(d: f64) -> Result<KrausChannel> {
    let d = check_unit("D", d)?;
    KrausChannel::from_operators(
        NoiseKind::PhaseDamping,
        d,
        vec![
            ComplexMatrix::from_diag(&[real(1.0), real((1.0 - d).sqrt())]),
            ComplexMatrix::from_diag(&[ZERO, real(d.sqrt())]),
        ],
    )
}
