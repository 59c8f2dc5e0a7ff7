use std::collections::BTreeMap;

use entloc::explorer::{OptimizeResult, ParamName, ParetoPoint};
use entloc::protocols::{closed_form, ProtocolOutcome, ProtocolParams, Strategy};
use entloc::states::InitialState;
use serde::Serialize;

/// One protocol evaluation as emitted by `localize`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub params: ProtocolParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_normalization: Option<f64>,
    pub concurrence: Option<f64>,
    pub success_prob: f64,
    pub step_probs: Vec<f64>,
    pub c13: Option<f64>,
    pub c23: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_success: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_deviation: Option<f64>,
    /// The two-step product `p_w'·p_r'` quoted for the local strategy,
    /// reported beside the joint probability; informational only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_step_success: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl RunReport {
    pub fn new(out: &ProtocolOutcome, normalization: Option<f64>) -> entloc::Result<Self> {
        let p = &out.params;
        let two_step = (p.strategy == Strategy::FullyLocal
            && out.closed_form_success.is_some()
            && p.initial == InitialState::PaperDefault)
            .then(|| closed_form::local_two_step_success(p.p3, p.q3));
        let concurrence_deviation = match (out.concurrence, out.closed_form_concurrence) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            _ => None,
        };
        Ok(Self {
            params: *p,
            initial_normalization: normalization,
            concurrence: out.concurrence,
            success_prob: out.success_prob,
            step_probs: out.step_probs.clone(),
            c13: out.pair_concurrence((1, 3))?,
            c23: out.pair_concurrence((2, 3))?,
            closed_form_concurrence: out.closed_form_concurrence,
            closed_form_success: out.closed_form_success,
            concurrence_deviation,
            success_deviation: out.closed_form_success.map(|s| (s - out.success_prob).abs()),
            two_step_success: two_step,
            warning: out
                .postselection_impossible
                .then(|| "postselection impossible: the postselected branch has zero probability".to_string()),
            elapsed_ms: None,
        })
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    Infeasible,
}

#[derive(Debug, Serialize)]
pub struct OptimizeReport {
    pub status: Status,
    pub min_success: Option<f64>,
    pub optimum: BTreeMap<String, f64>,
    pub concurrence: Option<f64>,
    pub success_prob: f64,
    pub evaluations: usize,
    pub params: ProtocolParams,
}

impl OptimizeReport {
    pub fn new(result: &OptimizeResult, which: &[ParamName], min_success: Option<f64>) -> Self {
        Self {
            status: if result.feasible { Status::Optimal } else { Status::Infeasible },
            min_success,
            optimum: which.iter().map(|p| (p.name().to_string(), p.get(&result.params))).collect(),
            concurrence: result.concurrence,
            success_prob: result.success_prob,
            evaluations: result.evaluations,
            params: result.params,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FrontPoint {
    pub values: BTreeMap<String, f64>,
    pub concurrence: f64,
    pub success_prob: f64,
}

#[derive(Debug, Serialize)]
pub struct ParetoReport {
    pub base: ProtocolParams,
    pub free: Vec<ParamName>,
    pub density: usize,
    pub points: Vec<FrontPoint>,
}

impl ParetoReport {
    pub fn new(base: ProtocolParams, free: &[ParamName], density: usize, front: &[ParetoPoint]) -> Self {
        let points = front
            .iter()
            .map(|p| FrontPoint {
                values: free
                    .iter()
                    .zip(&p.free_values)
                    .map(|(n, &v)| (n.name().to_string(), v))
                    .collect(),
                concurrence: p.concurrence,
                success_prob: p.success_prob,
            })
            .collect();
        Self {
            base,
            free: free.to_vec(),
            density,
            points,
        }
    }
}

/// Pretty JSON with object keys in sorted order, newline-terminated.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}
