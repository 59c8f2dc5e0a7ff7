//! Initial states: the W-like family, the mixed GW preset, and density
//! matrices with a probability weight for postselected (unnormalised) states.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigs, ComplexMatrix, StateVector};

/// Coefficients of `a1|100⟩ + a2|010⟩ + a3|001⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WLikeCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl WLikeCoefficients {
    pub const NORM_TOL: f64 = 1e-9;

    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let c = Self::check_signs(a1, a2, a3)?;
        let norm_sqr = c.norm_sqr();
        if (norm_sqr - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "W-like coefficients have squared norm {norm_sqr}, expected 1"
            )));
        }
        Ok(c)
    }

    /// Rescales arbitrary non-negative coefficients to unit norm. Returns the
    /// normalised coefficients and the norm that was divided out.
    pub fn normalized(a1: f64, a2: f64, a3: f64) -> Result<(Self, f64)> {
        let c = Self::check_signs(a1, a2, a3)?;
        let norm = c.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput("W-like coefficients are all zero".into()));
        }
        Ok((
            Self {
                a1: a1 / norm,
                a2: a2 / norm,
                a3: a3 / norm,
            },
            norm,
        ))
    }

    fn check_signs(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        for (name, a) in [("a1", a1), ("a2", a2), ("a3", a3)] {
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::InvalidInput(format!("{name} = {a} must be a finite non-negative real")));
            }
        }
        Ok(Self { a1, a2, a3 })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3
    }

    /// `a1 = a2 = 1/2`, `a3 = 1/√2`.
    pub fn paper_default() -> Self {
        Self {
            a1: 0.5,
            a2: 0.5,
            a3: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    /// The symmetric W state, `(|100⟩ + |010⟩ + |001⟩)/√3`.
    pub fn equal() -> Self {
        let a = 1.0 / 3f64.sqrt();
        Self { a1: a, a2: a, a3: a }
    }
}

/// A single-excitation three-qubit state.
pub fn w_like(coeffs: WLikeCoefficients) -> Result<StateVector> {
    let coeffs = WLikeCoefficients::new(coeffs.a1, coeffs.a2, coeffs.a3)?;
    let mut amps = [0.0; 8];
    amps[0b100] = coeffs.a1;
    amps[0b010] = coeffs.a2;
    amps[0b001] = coeffs.a3;
    StateVector::from_real(&amps)
}

/// `(0.1/8)·I₈ + 0.9·|GW⟩⟨GW|` with `|GW⟩ = (2/5)|100⟩ + (2/5)|010⟩ + (√17/5)|001⟩`.
pub fn gw_mixed() -> DensityMatrix {
    let gw = w_like(gw_coefficients()).expect("GW coefficients are normalised");
    let matrix = gw
        .projector()
        .scale(0.9)
        .add(&ComplexMatrix::identity(8).scale(0.1 / 8.0))
        .expect("same shape");
    DensityMatrix {
        n_qubits: 3,
        matrix,
        weight: 1.0,
    }
}

pub fn gw_coefficients() -> WLikeCoefficients {
    WLikeCoefficients {
        a1: 0.4,
        a2: 0.4,
        a3: 17f64.sqrt() / 5.0,
    }
}

/// A density operator on `n_qubits` qubits. `weight` is the probability mass
/// carried by the (possibly unnormalised) matrix, so `trace == weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
    weight: f64,
}

impl DensityMatrix {
    /// Wraps a matrix and its weight without checking positivity; see
    /// [`DensityMatrix::validate`].
    pub fn new(matrix: ComplexMatrix, weight: f64) -> Result<Self> {
        let dim = matrix.rows();
        if !matrix.is_square() || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not a qubit density matrix",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            matrix,
            weight,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        let t = self.trace();
        self.matrix.matmul(&self.matrix).expect("square").trace().re / (t * t)
    }

    /// Rescaled to unit trace with weight 1.
    pub fn normalized(&self) -> Result<DensityMatrix> {
        let t = self.trace();
        if t <= 0.0 {
            return Err(Error::InvalidInput(format!("cannot normalise a state with trace {t}")));
        }
        Ok(DensityMatrix {
            n_qubits: self.n_qubits,
            matrix: self.matrix.scale(1.0 / t),
            weight: 1.0,
        })
    }

    pub fn partial_trace(&self, traced: &[usize]) -> Result<DensityMatrix> {
        let matrix = crate::linalg::partial_trace(&self.matrix, self.n_qubits, traced)?;
        DensityMatrix::new(matrix, self.weight)
    }

    pub fn validate(&self) -> ValidationReport {
        let hermiticity_residual = self.matrix.hermiticity_residual();
        // Eigenvalues of the Hermitian part, so a non-Hermitian input still
        // yields a spectrum to report.
        let hermitian_part = self
            .matrix
            .add(&self.matrix.adjoint())
            .expect("square")
            .scale(0.5);
        let min_eigenvalue = hermitian_eigs(&hermitian_part)
            .map(|e| *e.values.last().expect("non-empty"))
            .unwrap_or(f64::NAN);
        ValidationReport {
            hermiticity_residual,
            min_eigenvalue,
            trace_deviation: (self.trace() - self.weight).abs(),
        }
    }
}

/// `|ψ⟩⟨ψ|` with weight 1.
pub fn pure_to_density(psi: &StateVector) -> DensityMatrix {
    DensityMatrix {
        n_qubits: psi.n_qubits(),
        matrix: psi.projector(),
        weight: 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub trace_deviation: f64,
}

impl ValidationReport {
    pub const TOL: f64 = 1e-10;

    pub fn is_valid(&self) -> bool {
        self.hermiticity_residual <= Self::TOL && self.min_eigenvalue >= -Self::TOL && self.trace_deviation <= Self::TOL
    }
}

/// Named initial states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum InitialState {
    PaperDefault,
    EqualW,
    WLike(WLikeCoefficients),
    GwMixed,
}

impl InitialState {
    pub fn density(&self) -> Result<DensityMatrix> {
        Ok(match self {
            InitialState::PaperDefault => pure_to_density(&w_like(WLikeCoefficients::paper_default())?),
            InitialState::EqualW => pure_to_density(&w_like(WLikeCoefficients::equal())?),
            InitialState::WLike(c) => pure_to_density(&w_like(*c)?),
            InitialState::GwMixed => gw_mixed(),
        })
    }

    /// The pure state vector, when there is one.
    pub fn pure_state(&self) -> Option<StateVector> {
        let coeffs = match self {
            InitialState::PaperDefault => WLikeCoefficients::paper_default(),
            InitialState::EqualW => WLikeCoefficients::equal(),
            InitialState::WLike(c) => *c,
            InitialState::GwMixed => return None,
        };
        w_like(coeffs).ok()
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::PaperDefault => f.write_str("paper-default"),
            InitialState::EqualW => f.write_str("equal-w"),
            InitialState::GwMixed => f.write_str("gw-mixed"),
            InitialState::WLike(c) => write!(f, "w:{},{},{}", c.a1, c.a2, c.a3),
        }
    }
}

impl FromStr for InitialState {
    type Err = Error;

    /// Accepts `paper-default`, `equal-w`, `gw-mixed`, or `w:a1,a2,a3`.
    /// Explicit coefficients must be normalised; use [`parse_w_coefficients`]
    /// to rescale arbitrary ones.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-default" => Ok(InitialState::PaperDefault),
            "equal-w" => Ok(InitialState::EqualW),
            "gw-mixed" => Ok(InitialState::GwMixed),
            _ => {
                let (a1, a2, a3) = parse_w_triple(s)?;
                Ok(InitialState::WLike(WLikeCoefficients::new(a1, a2, a3)?))
            }
        }
    }
}

impl From<InitialState> for String {
    fn from(s: InitialState) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for InitialState {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn parse_w_triple(s: &str) -> Result<(f64, f64, f64)> {
    let body = s.strip_prefix("w:").ok_or_else(|| {
        Error::InvalidInput(format!(
            "unknown initial state '{s}' (expected paper-default, equal-w, gw-mixed, or w:a1,a2,a3)"
        ))
    })?;
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!("'{s}' needs exactly three coefficients")));
    }
    let mut vals = [0.0; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .parse()
            .map_err(|_| Error::InvalidInput(format!("'{p}' is not a number")))?;
    }
    Ok((vals[0], vals[1], vals[2]))
}

/// Parses `w:a1,a2,a3`, rescaling to unit norm. Returns the state and the
/// norm that was divided out (1 for already-normalised input).
pub fn parse_w_coefficients(s: &str) -> Result<(InitialState, f64)> {
    let (a1, a2, a3) = parse_w_triple(s)?;
    let (c, norm) = WLikeCoefficients::normalized(a1, a2, a3)?;
    Ok((InitialState::WLike(c), norm))
}
