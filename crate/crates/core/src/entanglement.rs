//! Two-qubit entanglement: Wootters concurrence and concurrence of
//! assistance for pure three-qubit states.
//!
//! The λ's of the concurrence are the square roots of the eigenvalues of
//! `ρρ̃`. They are computed as the singular values of `√ρ̃·√ρ` by one-sided
//! Jacobi. Taking singular values directly (rather than square roots of
//! the eigenvalues of `√ρ ρ̃ √ρ`) keeps the small λ's accurate to machine
//! precision for the rank-deficient states that W-like protocols produce.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, psd_sqrt, singular_values, Complex, ComplexMatrix, StateVector, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Sorted descending, non-negative.
    pub lambdas: [f64; 4],
}

fn sigma_y_sigma_y() -> ComplexMatrix {
    // σy⊗σy = antidiag(-1, 1, 1, -1)
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 3)] = Complex::new(-1.0, 0.0);
    m[(1, 2)] = Complex::new(1.0, 0.0);
    m[(2, 1)] = Complex::new(1.0, 0.0);
    m[(3, 0)] = Complex::new(-1.0, 0.0);
    m
}

fn check_two_qubit(rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected a 4x4 two-qubit operator, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// `(σy⊗σy) ρ* (σy⊗σy)`.
pub fn spin_flip(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_two_qubit(rho)?;
    let yy = sigma_y_sigma_y();
    yy.matmul(&rho.conj())?.matmul(&yy)
}

/// Wootters concurrence. The input is normalised by its trace first, so
/// unnormalised conditional states are accepted.
pub fn concurrence(rho: &ComplexMatrix) -> Result<ConcurrenceResult> {
    let lambdas = wootters_lambdas(rho)?;
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(ConcurrenceResult { value, lambdas })
}

fn wootters_lambdas(rho: &ComplexMatrix) -> Result<[f64; 4]> {
    check_two_qubit(rho)?;
    let trace = rho.trace().re;
    if trace <= 0.0 || !trace.is_finite() {
        return Err(Error::InvalidInput(format!("two-qubit state has trace {trace}")));
    }
    let sqrt_rho = psd_sqrt(&rho.scale(1.0 / trace))?;
    let sqrt_flipped = spin_flip(&sqrt_rho)?;
    let a = sqrt_flipped.matmul(&sqrt_rho)?;
    let sv = singular_values(&a)?;
    Ok([sv[0], sv[1], sv[2], sv[3]])
}

/// `2|ρ_{10,01}| / tr ρ`, the concurrence of a two-qubit state with no
/// `|11⟩` population (the X-shaped states every W-like protocol produces).
/// Returns `None` when the `|11⟩` population is not negligible.
pub fn w_class_concurrence(rho: &ComplexMatrix) -> Result<Option<f64>> {
    check_two_qubit(rho)?;
    let trace = rho.trace().re;
    if trace <= 0.0 {
        return Err(Error::InvalidInput(format!("two-qubit state has trace {trace}")));
    }
    if rho[(3, 3)].re.abs() > 1e-14 * trace {
        return Ok(None);
    }
    Ok(Some(2.0 * rho[(2, 1)].norm() / trace))
}

/// Concurrence of a (possibly unnormalised) two-qubit pure state
/// `a|00⟩ + b|01⟩ + c|10⟩ + d|11⟩`: `2|ad − bc| / ‖ψ‖²`.
pub fn pure_concurrence(amps: &[Complex; 4]) -> f64 {
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if norm == 0.0 {
        return 0.0;
    }
    2.0 * (amps[0] * amps[3] - amps[1] * amps[2]).norm() / norm
}

fn check_three_qubit_pure(psi: &StateVector) -> Result<()> {
    if psi.n_qubits() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "expected a three-qubit state, got {} qubits",
            psi.n_qubits()
        )));
    }
    if !psi.is_normalized() {
        return Err(Error::InvalidInput(format!(
            "state is not normalised (norm² = {})",
            psi.norm_sqr()
        )));
    }
    Ok(())
}

/// Concurrence of assistance of `pair` for a pure three-qubit state, with
/// the remaining qubit as the assistant: the sum of the Wootters λ's of the
/// reduced pair state.
pub fn concurrence_of_assistance(psi: &StateVector, pair: (usize, usize)) -> Result<f64> {
    check_three_qubit_pure(psi)?;
    let (i, j) = pair;
    if i == j || !(1..=3).contains(&i) || !(1..=3).contains(&j) {
        return Err(Error::InvalidInput(format!("invalid qubit pair ({i}, {j})")));
    }
    let assistant = 6 - i - j;
    let mut reduced = partial_trace(&psi.projector(), 3, &[assistant])?;
    if i > j {
        reduced = swap_qubits(&reduced);
    }
    Ok(wootters_lambdas(&reduced)?.iter().sum())
}

fn swap_qubits(rho: &ComplexMatrix) -> ComplexMatrix {
    let perm = [0, 2, 1, 3];
    let mut out = ComplexMatrix::zeros(4, 4);
    for r in 0..4 {
        for c in 0..4 {
            out[(perm[r], perm[c])] = rho[(r, c)];
        }
    }
    out
}

/// Average concurrence of qubits 1 and 2 after qubit 3 is measured in the
/// basis `{cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩, sin(θ/2)|0⟩ − e^{iφ} cos(θ/2)|1⟩}`,
/// weighting each outcome by its probability.
pub fn assisted_average(psi: &StateVector, theta: f64, phi: f64) -> Result<f64> {
    check_three_qubit_pure(psi)?;
    let (s, c) = (theta / 2.0).sin_cos();
    let e = Complex::from_polar(1.0, phi);
    let basis = [[Complex::new(c, 0.0), e * s], [Complex::new(s, 0.0), -e * c]];
    let amps = psi.amplitudes();
    let mut total = 0.0;
    for m in &basis {
        let mut cond = [ZERO; 4];
        for (pair_idx, slot) in cond.iter_mut().enumerate() {
            *slot = m[0].conj() * amps[pair_idx << 1] + m[1].conj() * amps[(pair_idx << 1) | 1];
        }
        let prob: f64 = cond.iter().map(|z| z.norm_sqr()).sum();
        total += prob * pure_concurrence(&cond);
    }
    Ok(total)
}

/// Slack for rounding in the eigenvalue route when comparing against a target.
pub const ASSISTANCE_TOL: f64 = 1e-12;

/// Whether assistance suffices to reach a pair state of concurrence
/// `target` deterministically, i.e. `C^a ≥ target`.
pub fn assistance_suffices(psi: &StateVector, pair: (usize, usize), target: f64) -> Result<bool> {
    Ok(concurrence_of_assistance(psi, pair)? >= target - ASSISTANCE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::states::{w_like, WLikeCoefficients};

    fn psi_plus() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_real(&[0.0, s, s, 0.0]).unwrap()
    }

    #[test]
    fn spin_flip_examples() {
        let bell = psi_plus().projector();
        assert!(spin_flip(&bell).unwrap().max_abs_diff(&bell) < 1e-15);
        let ground = StateVector::basis(2, 0).projector();
        assert_eq!(spin_flip(&ground).unwrap(), StateVector::basis(2, 3).projector());
        assert!(spin_flip(&ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&psi_plus().projector()).unwrap().value - 1.0).abs() < 1e-12);
        assert!(concurrence(&ComplexMatrix::identity(4).scale(0.25)).unwrap().value.abs() < 1e-12);

        let psi = w_like(WLikeCoefficients::paper_default()).unwrap();
        let r12 = partial_trace(&psi.projector(), 3, &[3]).unwrap();
        assert!((concurrence(&r12).unwrap().value - 0.5).abs() < 1e-12);
        assert!(concurrence(&ComplexMatrix::zeros(4, 4)).is_err());
    }

    #[test]
    fn reduced_default_state_by_hand() {
        // ρ12 = ½|ψ+⟩⟨ψ+| + ½|00⟩⟨00|
        let psi = w_like(WLikeCoefficients::paper_default()).unwrap();
        let r12 = partial_trace(&psi.projector(), 3, &[3]).unwrap();
        let expected = psi_plus()
            .projector()
            .scale(0.5)
            .add(&StateVector::basis(2, 0).projector().scale(0.5))
            .unwrap();
        assert!(r12.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn product_states_have_zero_concurrence() {
        let a = StateVector::new(vec![Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)]).unwrap();
        let b = StateVector::from_real(&[0.28, 0.96]).unwrap();
        let c = concurrence(&a.kron(&b).projector()).unwrap();
        assert!(c.value.abs() < 1e-12, "{c:?}");
    }

    #[test]
    fn projective_limit_is_exactly_zero() {
        let r = StateVector::basis(2, 0).projector();
        assert_eq!(concurrence(&r).unwrap().value, 0.0);
    }

    #[test]
    fn local_unitary_invariance() {
        let h = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0]).unwrap().scale(std::f64::consts::FRAC_1_SQRT_2);
        let phase = ComplexMatrix::from_diag(&[ONE, Complex::from_polar(1.0, 0.7)]);
        let u = h.kron(&phase);
        let psi = w_like(WLikeCoefficients::paper_default()).unwrap();
        let r12 = partial_trace(&psi.projector(), 3, &[3]).unwrap();
        let rotated = u.matmul(&r12).unwrap().matmul(&u.adjoint()).unwrap();
        let c0 = concurrence(&r12).unwrap().value;
        let c1 = concurrence(&rotated).unwrap().value;
        assert!((c0 - c1).abs() < 1e-10);
    }

    #[test]
    fn w_class_shortcut() {
        let psi = w_like(WLikeCoefficients::paper_default()).unwrap();
        let r12 = partial_trace(&psi.projector(), 3, &[3]).unwrap();
        assert!((w_class_concurrence(&r12).unwrap().unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(w_class_concurrence(&ComplexMatrix::identity(4)).unwrap(), None);
    }

    #[test]
    fn coa_examples() {
        let psi = w_like(WLikeCoefficients::paper_default()).unwrap();
        assert!((concurrence_of_assistance(&psi, (1, 2)).unwrap() - 0.5).abs() < 1e-12);

        let bell_with_ancilla = psi_plus().kron(&StateVector::basis(1, 0));
        assert!((concurrence_of_assistance(&bell_with_ancilla, (1, 2)).unwrap() - 1.0).abs() < 1e-12);

        let eq = w_like(WLikeCoefficients::equal()).unwrap();
        assert!((concurrence_of_assistance(&eq, (1, 2)).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((concurrence_of_assistance(&eq, (2, 1)).unwrap() - 2.0 / 3.0).abs() < 1e-12);

        assert!(concurrence_of_assistance(&psi, (1, 1)).is_err());
        let unnormalised = StateVector::from_real(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(concurrence_of_assistance(&unnormalised, (1, 2)).is_err());
    }

    #[test]
    fn assisted_average_examples() {
        let psi = w_like(WLikeCoefficients::paper_default()).unwrap();
        assert!((assisted_average(&psi, 0.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        let ground = StateVector::basis(3, 0);
        for (t, p) in [(0.0, 0.0), (1.0, 2.0), (3.0, 5.0)] {
            assert_eq!(assisted_average(&ground, t, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn assistance_inequality() {
        let psi = w_like(WLikeCoefficients::paper_default()).unwrap();
        assert!(assistance_suffices(&psi, (1, 2), 0.5).unwrap());
        assert!(!assistance_suffices(&psi, (1, 2), 0.6).unwrap());
    }
}
