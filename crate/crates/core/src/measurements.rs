//! Postselected single-qubit measurement elements.
//!
//! Only the retained branch of each measurement is modelled: the null
//! outcome of a weak measurement, the null outcome of a reversal, or one
//! outcome of a projective measurement. Applying an element yields the
//! unnormalised conditional state, whose weight is multiplied by the
//! branch probability.

use std::fmt;

use serde::Serialize;

use crate::error::{check_unit, Error, Result};
use crate::linalg::{conjugate_local, ComplexMatrix};
use crate::states::DensityMatrix;

/// Below this success probability a branch is reported as impossible.
pub const POSTSELECTION_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "strength", rename_all = "snake_case")]
pub enum OpLabel {
    Weak(f64),
    Reversal(f64),
    Project0,
    Project1,
}

impl fmt::Display for OpLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpLabel::Weak(p) => write!(f, "weak({p})"),
            OpLabel::Reversal(q) => write!(f, "reversal({q})"),
            OpLabel::Project0 => f.write_str("project0"),
            OpLabel::Project1 => f.write_str("project1"),
        }
    }
}

/// A diagonal contraction `diag(m0, m1)` with `0 ≤ m_i ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PostselectedOp {
    operator: ComplexMatrix,
    label: OpLabel,
}

impl PostselectedOp {
    fn diagonal(m0: f64, m1: f64, label: OpLabel) -> Self {
        debug_assert!((0.0..=1.0).contains(&m0) && (0.0..=1.0).contains(&m1));
        Self {
            operator: ComplexMatrix::from_real_diag(&[m0, m1]),
            label,
        }
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.operator
    }

    pub fn label(&self) -> OpLabel {
        self.label
    }

    /// Diagonal entries `(m0, m1)`.
    pub fn diag(&self) -> (f64, f64) {
        (self.operator[(0, 0)].re, self.operator[(1, 1)].re)
    }
}

/// Null-outcome weak measurement of strength `p`: `diag(1, √(1−p))`.
pub fn weak_meas(p: f64) -> Result<PostselectedOp> {
    let p = check_unit("p", p)?;
    Ok(PostselectedOp::diagonal(1.0, (1.0 - p).sqrt(), OpLabel::Weak(p)))
}

/// Reversal measurement of strength `q`: `diag(√(1−q), 1)`.
pub fn reversal_meas(q: f64) -> Result<PostselectedOp> {
    let q = check_unit("q", q)?;
    Ok(PostselectedOp::diagonal((1.0 - q).sqrt(), 1.0, OpLabel::Reversal(q)))
}

/// Computational-basis projector for `outcome` ∈ {0, 1}.
pub fn projector(outcome: u8) -> Result<PostselectedOp> {
    match outcome {
        0 => Ok(PostselectedOp::diagonal(1.0, 0.0, OpLabel::Project0)),
        1 => Ok(PostselectedOp::diagonal(0.0, 1.0, OpLabel::Project1)),
        other => Err(Error::InvalidInput(format!("projector outcome must be 0 or 1, got {other}"))),
    }
}

#[derive(Debug, Clone)]
pub struct Postselected {
    /// `M ρ M†`, with weight = input weight × `success_prob`.
    pub state: DensityMatrix,
    /// Conditional probability of this branch given the input state.
    pub success_prob: f64,
    /// True when `success_prob` fell below [`POSTSELECTION_FLOOR`].
    pub impossible: bool,
}

/// Applies `op` to `qubit` (1-based) and postselects on it.
pub fn apply_postselected(op: &PostselectedOp, rho: &DensityMatrix, qubit: usize) -> Result<Postselected> {
    let input_trace = rho.trace();
    if rho.weight() <= 0.0 || input_trace <= 0.0 {
        return Err(Error::InvalidInput("cannot postselect on a zero-weight state".into()));
    }
    let matrix = conjugate_local(rho.matrix(), op.operator(), qubit)?;
    let success_prob = (matrix.trace().re / input_trace).clamp(0.0, 1.0);
    let state = DensityMatrix::new(matrix, rho.weight() * success_prob)?;
    Ok(Postselected {
        state,
        success_prob,
        impossible: success_prob < POSTSELECTION_FLOOR,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, StateVector};
    use crate::states::{pure_to_density, w_like, WLikeCoefficients};

    fn default_rho() -> DensityMatrix {
        pure_to_density(&w_like(WLikeCoefficients::paper_default()).unwrap())
    }

    fn x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn weak_meas_limits() {
        assert_eq!(weak_meas(0.0).unwrap().operator(), &ComplexMatrix::identity(2));
        assert_eq!(weak_meas(1.0).unwrap().diag(), (1.0, 0.0));
        assert!(weak_meas(1.5).is_err());
        assert!(weak_meas(-0.5).is_err());
    }

    #[test]
    fn weak_meas_composes() {
        for p in [0.1, 0.4, 0.75] {
            let m = weak_meas(p).unwrap();
            let twice = m.operator().matmul(m.operator()).unwrap();
            let once = weak_meas(1.0 - (1.0 - p) * (1.0 - p)).unwrap();
            assert!(twice.max_abs_diff(once.operator()) < 1e-15);
        }
    }

    #[test]
    fn reversal_is_bit_flipped_weak() {
        assert_eq!(reversal_meas(0.0).unwrap().operator(), &ComplexMatrix::identity(2));
        for q in [0.2, 0.5, 0.99] {
            let flipped = x().matmul(weak_meas(q).unwrap().operator()).unwrap().matmul(&x()).unwrap();
            assert!(flipped.max_abs_diff(reversal_meas(q).unwrap().operator()) < 1e-15);
        }
        let (m0, m1) = reversal_meas(0.99).unwrap().diag();
        assert!((m0 - 0.1).abs() < 1e-15);
        assert_eq!(m1, 1.0);
        assert!(reversal_meas(2.0).is_err());
    }

    #[test]
    fn projector_on_basis_state() {
        let rho = pure_to_density(&StateVector::basis(1, 0));
        let out = apply_postselected(&projector(0).unwrap(), &rho, 1).unwrap();
        assert_eq!(out.success_prob, 1.0);
        assert_eq!(out.state.matrix(), rho.matrix());
        assert!(projector(2).is_err());
    }

    #[test]
    fn projective_assistance_on_default_state() {
        let rho = default_rho();
        let zero = apply_postselected(&projector(0).unwrap(), &rho, 3).unwrap();
        assert!((zero.success_prob - 0.5).abs() < 1e-15);
        let one = apply_postselected(&projector(1).unwrap(), &rho, 3).unwrap();
        assert!((one.success_prob - 0.5).abs() < 1e-15);
        // The |1⟩ branch leaves qubits 1, 2 in |00⟩.
        let r12 = one.state.partial_trace(&[3]).unwrap().normalized().unwrap();
        assert!(r12.matrix().max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn weak_measurement_probability_on_default_state() {
        for (p1, p2) in [(0.0, 0.0), (0.3, 0.6), (0.9, 0.1), (1.0, 1.0)] {
            let a = apply_postselected(&weak_meas(p1).unwrap(), &default_rho(), 1).unwrap();
            let b = apply_postselected(&weak_meas(p2).unwrap(), &a.state, 2).unwrap();
            let expected = 1.0 - p1 / 4.0 - p2 / 4.0;
            assert!((b.state.weight() - expected).abs() < 1e-12);
            assert!((a.success_prob * b.success_prob - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_and_orthogonal_outcomes() {
        let rho = default_rho();
        let out = apply_postselected(&weak_meas(0.0).unwrap(), &rho, 2).unwrap();
        assert_eq!(out.success_prob, 1.0);
        assert!(out.state.matrix().max_abs_diff(rho.matrix()) < 1e-15);

        let ground = pure_to_density(&StateVector::basis(3, 0));
        let out = apply_postselected(&projector(1).unwrap(), &ground, 1).unwrap();
        assert_eq!(out.success_prob, 0.0);
        assert!(out.impossible);
    }

    #[test]
    fn rejects_bad_inputs() {
        let rho = default_rho();
        assert!(matches!(
            apply_postselected(&weak_meas(0.5).unwrap(), &rho, 4),
            Err(Error::QubitOutOfRange { .. })
        ));
        let empty = DensityMatrix::new(ComplexMatrix::zeros(8, 8), 0.0).unwrap();
        assert!(apply_postselected(&weak_meas(0.5).unwrap(), &empty, 1).is_err());
    }
}
