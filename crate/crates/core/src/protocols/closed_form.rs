//! Analytic expressions for the default W-like state
//! `½|100⟩ + ½|010⟩ + (1/√2)|001⟩`.
//!
//! These are kept independent of the density-matrix pipelines so the two can
//! cross-check each other. Ratios return `None` where the denominator
//! vanishes (every branch postselected away).

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

/// Concurrence after distributed weak measurement and reversal, no noise.
pub fn distributed_concurrence(p1: f64, p2: f64, q1: f64, q2: f64) -> Option<f64> {
    let x1 = (1.0 - p1) * (1.0 - p2) * (1.0 - q1) * (1.0 - q2);
    let num = 0.5 * x1.sqrt();
    let den = 0.25 * (1.0 - p1) * (1.0 - q2) + (1.0 - q1) * (0.5 * (1.0 - q2) + 0.25 * (1.0 - p2));
    ratio(num, den)
}

/// Probability that both weak measurements give the null outcome.
pub fn weak_success(p1: f64, p2: f64) -> f64 {
    1.0 - p1 / 4.0 - p2 / 4.0
}

/// Conditional probability of both reversals succeeding after the weak
/// measurements did.
pub fn reversal_success(p1: f64, p2: f64, q1: f64, q2: f64) -> Option<f64> {
    let num = (1.0 - q1) * (2.0 - p2 - q2) + (1.0 - q2) * (2.0 - p1 - q1);
    ratio(num, 4.0 * weak_success(p1, p2))
}

/// Joint success of the noiseless distributed protocol, `p_w · p_r`.
pub fn distributed_success(p1: f64, p2: f64, q1: f64, q2: f64) -> Option<f64> {
    reversal_success(p1, p2, q1, q2).map(|pr| weak_success(p1, p2) * pr)
}

/// Concurrence after weak measurement and reversal on the assisting qubit.
pub fn local_concurrence(p3: f64, q3: f64) -> Option<f64> {
    ratio(1.0 - q3, (1.0 - p3) + (1.0 - q3))
}

/// Probability of the null outcome of the assistant's weak measurement.
pub fn local_weak_success(p3: f64) -> f64 {
    1.0 - p3 / 2.0
}

/// The assistant's reversal probability as printed, `1 − (p3 + q3)/2`.
/// This already equals the joint probability of both steps.
pub fn local_reversal_success(p3: f64, q3: f64) -> f64 {
    1.0 - (p3 + q3) / 2.0
}

/// Joint success of the fully local protocol (with or without damping).
pub fn local_success(p3: f64, q3: f64) -> f64 {
    local_reversal_success(p3, q3)
}

/// The two-step product `p_w′ · p_r′`. It counts the weak-measurement
/// probability twice and is reported only for comparison.
pub fn local_two_step_success(p3: f64, q3: f64) -> f64 {
    local_weak_success(p3) * local_reversal_success(p3, q3)
}

/// Concurrence of the pair after amplitude damping alone.
pub fn damped_concurrence(d1: f64, d2: f64) -> f64 {
    0.5 * ((1.0 - d1) * (1.0 - d2)).sqrt()
}

/// Concurrence after distributed weak measurement, amplitude damping and
/// reversal.
pub fn distributed_damped_concurrence(p1: f64, p2: f64, q1: f64, q2: f64, d1: f64, d2: f64) -> Option<f64> {
    let x1 = (1.0 - d1) * (1.0 - d2) * (1.0 - p1) * (1.0 - p2) * (1.0 - q1) * (1.0 - q2);
    let den = 0.5 * (1.0 - p1) * (1.0 - d1 * q1) * (1.0 - q2)
        + (1.0 - q1) * ((1.0 - q2) + 0.5 * (1.0 - p2) * (1.0 - d2 * q2));
    ratio(x1.sqrt(), den)
}

/// Success probability of the whole damped distributed protocol.
pub fn distributed_damped_success(p1: f64, p2: f64, q1: f64, q2: f64, d1: f64, d2: f64) -> f64 {
    (1.0 - q1) * (1.0 - p2) * (1.0 - q2 * d2) / 4.0
        + (1.0 - q2) * (1.0 - p1) * (1.0 - q1 * d1) / 4.0
        + (1.0 - q1) * (1.0 - q2) / 2.0
}

/// Concurrence after the fully local protocol with amplitude damping on the
/// transmitted qubits.
pub fn local_damped_concurrence(p3: f64, q3: f64, d1: f64, d2: f64) -> Option<f64> {
    ratio(((1.0 - d1) * (1.0 - d2)).sqrt() * (1.0 - q3), (1.0 - p3) + (1.0 - q3))
}
