//! Entanglement-localization pipelines on three-qubit density matrices.
//!
//! * distributed: weak measurements on qubits 1 and 2 before transmission,
//!   reversals by the receivers afterwards;
//! * fully local: weak measurement and reversal both on the assisting
//!   qubit 3, bracketing the transmission;
//! * projective baseline: the assistant measures qubit 3 and keeps `|0⟩`.
//!
//! Every step is a density-matrix operation. Closed forms live in
//! [`closed_form`] and are attached to an outcome only for configurations
//! they were derived for.

pub mod closed_form;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use verify::{verify_closed_forms, CheckRow, VerifyReport, VERIFY_TOL};

use crate::channels::NoiseKind;
use crate::entanglement::{concurrence, w_class_concurrence};
use crate::error::{check_unit, Error, Result};
use crate::measurements::{apply_postselected, projector, reversal_meas, weak_meas, PostselectedOp};
use crate::states::{DensityMatrix, InitialState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Strategy {
    #[default]
    #[serde(rename = "distributed")]
    Distributed,
    #[serde(rename = "local")]
    FullyLocal,
    #[serde(rename = "projective")]
    ProjectiveBaseline,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Distributed, Strategy::FullyLocal, Strategy::ProjectiveBaseline];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Distributed => "distributed",
            Strategy::FullyLocal => "local",
            Strategy::ProjectiveBaseline => "projective",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown strategy '{s}' (expected distributed, local, projective)")))
    }
}

/// Full parameter tuple. Fields the chosen strategy does not use are kept
/// but ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub strategy: Strategy,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub noise: NoiseKind,
    pub d1: f64,
    pub d2: f64,
    pub initial: InitialState,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        Self {
            strategy: Strategy::Distributed,
            p1: 0.0,
            p2: 0.0,
            p3: 0.0,
            q1: 0.0,
            q2: 0.0,
            q3: 0.0,
            noise: NoiseKind::None,
            d1: 0.0,
            d2: 0.0,
            initial: InitialState::PaperDefault,
        }
    }
}

impl ProtocolParams {
    pub fn distributed(p1: f64, p2: f64, q1: f64, q2: f64) -> Self {
        Self {
            strategy: Strategy::Distributed,
            p1,
            p2,
            q1,
            q2,
            ..Self::default()
        }
    }

    pub fn fully_local(p3: f64, q3: f64) -> Self {
        Self {
            strategy: Strategy::FullyLocal,
            p3,
            q3,
            ..Self::default()
        }
    }

    pub fn projective() -> Self {
        Self {
            strategy: Strategy::ProjectiveBaseline,
            ..Self::default()
        }
    }

    pub fn with_noise(mut self, noise: NoiseKind, d1: f64, d2: f64) -> Self {
        self.noise = noise;
        self.d1 = d1;
        self.d2 = d2;
        self
    }

    pub fn with_initial(mut self, initial: InitialState) -> Self {
        self.initial = initial;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p1", self.p1),
            ("p2", self.p2),
            ("p3", self.p3),
            ("q1", self.q1),
            ("q2", self.q2),
            ("q3", self.q3),
            ("d1", self.d1),
            ("d2", self.d2),
        ] {
            check_unit(name, v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ProtocolOutcome {
    pub params: ProtocolParams,
    /// Unnormalised three-qubit state after the last step; its weight is the
    /// joint success probability.
    pub final_state: DensityMatrix,
    /// Normalised pair state of qubits 1 and 2, absent when postselection
    /// was impossible.
    pub rho12: Option<DensityMatrix>,
    pub success_prob: f64,
    /// Conditional probability of each postselection step, in order.
    pub step_probs: Vec<f64>,
    pub concurrence: Option<f64>,
    pub closed_form_concurrence: Option<f64>,
    pub closed_form_success: Option<f64>,
    pub postselection_impossible: bool,
}

impl ProtocolOutcome {
    /// Concurrence of an arbitrary pair of the final state (e.g. `(1, 3)`).
    pub fn pair_concurrence(&self, pair: (usize, usize)) -> Result<Option<f64>> {
        if self.postselection_impossible {
            return Ok(None);
        }
        let (i, j) = pair;
        if i == j || !(1..=3).contains(&i) || !(1..=3).contains(&j) {
            return Err(Error::InvalidInput(format!("invalid qubit pair ({i}, {j})")));
        }
        let reduced = self.final_state.partial_trace(&[6 - i - j])?;
        Ok(Some(concurrence(reduced.matrix())?.value))
    }

    /// The `2|ρ_{10,01}|/tr` shortcut on the pair state, when it applies.
    pub fn shortcut_concurrence(&self) -> Result<Option<f64>> {
        match &self.rho12 {
            Some(r) => w_class_concurrence(r.matrix()),
            None => Ok(None),
        }
    }
}

struct Pipeline {
    state: DensityMatrix,
    step_probs: Vec<f64>,
    impossible: bool,
}

impl Pipeline {
    fn new(initial: InitialState) -> Result<Self> {
        Ok(Self {
            state: initial.density()?,
            step_probs: Vec::new(),
            impossible: false,
        })
    }

    fn postselect(&mut self, op: PostselectedOp, qubit: usize) -> Result<()> {
        if self.impossible {
            self.step_probs.push(0.0);
            return Ok(());
        }
        let out = apply_postselected(&op, &self.state, qubit)?;
        self.step_probs.push(out.success_prob);
        self.impossible = out.impossible;
        self.state = out.state;
        Ok(())
    }

    fn transmit(&mut self, noise: NoiseKind, d1: f64, d2: f64) -> Result<()> {
        if let Some(ch) = noise.channel(d1)? {
            self.state = ch.apply_on_qubit(&self.state, 1)?;
        }
        if let Some(ch) = noise.channel(d2)? {
            self.state = ch.apply_on_qubit(&self.state, 2)?;
        }
        Ok(())
    }

    fn finish(self, params: &ProtocolParams) -> Result<ProtocolOutcome> {
        let success_prob = if self.impossible { 0.0 } else { self.state.weight() };
        let (rho12, concurrence_value) = if self.impossible {
            (None, None)
        } else {
            let r = self.state.partial_trace(&[3])?.normalized()?;
            let c = concurrence(r.matrix())?.value;
            (Some(r), Some(c))
        };
        Ok(ProtocolOutcome {
            params: *params,
            final_state: self.state,
            rho12,
            success_prob,
            step_probs: self.step_probs,
            concurrence: concurrence_value,
            closed_form_concurrence: closed_form_concurrence(params),
            closed_form_success: closed_form_success(params),
            postselection_impossible: self.impossible,
        })
    }
}

/// Runs whichever pipeline `params.strategy` names.
pub fn run(params: &ProtocolParams) -> Result<ProtocolOutcome> {
    match params.strategy {
        Strategy::Distributed => run_distributed(params),
        Strategy::FullyLocal => run_fully_local(params),
        Strategy::ProjectiveBaseline => run_projective_baseline(params),
    }
}

/// Weak measurements on qubits 1, 2; transmission noise; reversals on 1, 2.
pub fn run_distributed(params: &ProtocolParams) -> Result<ProtocolOutcome> {
    params.validate()?;
    let mut pipe = Pipeline::new(params.initial)?;
    pipe.postselect(weak_meas(params.p1)?, 1)?;
    pipe.postselect(weak_meas(params.p2)?, 2)?;
    pipe.transmit(params.noise, params.d1, params.d2)?;
    pipe.postselect(reversal_meas(params.q1)?, 1)?;
    pipe.postselect(reversal_meas(params.q2)?, 2)?;
    pipe.finish(params)
}

/// Weak measurement on qubit 3; transmission noise on 1, 2; reversal on 3.
pub fn run_fully_local(params: &ProtocolParams) -> Result<ProtocolOutcome> {
    params.validate()?;
    let mut pipe = Pipeline::new(params.initial)?;
    pipe.postselect(weak_meas(params.p3)?, 3)?;
    pipe.transmit(params.noise, params.d1, params.d2)?;
    pipe.postselect(reversal_meas(params.q3)?, 3)?;
    pipe.finish(params)
}

/// Projects qubit 3 onto `|0⟩`. Transmission noise is not applied.
pub fn run_projective_baseline(params: &ProtocolParams) -> Result<ProtocolOutcome> {
    params.validate()?;
    let mut pipe = Pipeline::new(params.initial)?;
    pipe.postselect(projector(0)?, 3)?;
    pipe.finish(params)
}

fn covered(params: &ProtocolParams) -> bool {
    params.initial == InitialState::PaperDefault
}

/// The analytic concurrence for this configuration, if one exists: default
/// initial state with no noise or amplitude damping.
pub fn closed_form_concurrence(params: &ProtocolParams) -> Option<f64> {
    if !covered(params) {
        return None;
    }
    let ProtocolParams {
        p1, p2, p3, q1, q2, q3, d1, d2, ..
    } = *params;
    match (params.strategy, params.noise) {
        (Strategy::Distributed, NoiseKind::None) => closed_form::distributed_concurrence(p1, p2, q1, q2),
        (Strategy::Distributed, NoiseKind::AmplitudeDamping) => {
            closed_form::distributed_damped_concurrence(p1, p2, q1, q2, d1, d2)
        }
        (Strategy::FullyLocal, NoiseKind::None) => closed_form::local_concurrence(p3, q3),
        (Strategy::FullyLocal, NoiseKind::AmplitudeDamping) => closed_form::local_damped_concurrence(p3, q3, d1, d2),
        (Strategy::ProjectiveBaseline, NoiseKind::None) => Some(1.0),
        _ => None,
    }
}

/// The analytic joint success probability, under the same coverage rules
/// as [`closed_form_concurrence`].
pub fn closed_form_success(params: &ProtocolParams) -> Option<f64> {
    if !covered(params) {
        return None;
    }
    let ProtocolParams {
        p1, p2, p3, q1, q2, q3, d1, d2, ..
    } = *params;
    match (params.strategy, params.noise) {
        (Strategy::Distributed, NoiseKind::None) => closed_form::distributed_success(p1, p2, q1, q2),
        (Strategy::Distributed, NoiseKind::AmplitudeDamping) => {
            Some(closed_form::distributed_damped_success(p1, p2, q1, q2, d1, d2))
        }
        (Strategy::FullyLocal, NoiseKind::None | NoiseKind::AmplitudeDamping) => {
            Some(closed_form::local_success(p3, q3))
        }
        (Strategy::ProjectiveBaseline, NoiseKind::None) => Some(0.5),
        _ => None,
    }
}
