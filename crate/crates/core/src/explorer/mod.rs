//! Parameter sweeps, reversal-strength optimisation and Pareto fronts.
//!
//! Grid points are evaluated in parallel but always assembled in grid order
//! (first axis outermost), so identical specs give identical tables.

mod optimize;
mod pareto;
mod presets;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use optimize::{optimize_reversal, optimize_reversal_with, Objective, OptimizeConfig, OptimizeResult, Q_MAX};
pub use pareto::{pareto_frontier, ParetoPoint};
pub use presets::{preset, PRESET_NAMES};

use crate::error::{Error, Result};
use crate::format::{fmt_num, fmt_opt, write_csv};
use crate::protocols::{run, ProtocolParams};
use crate::states::InitialState;

/// A settable field of [`ProtocolParams`]. `P`, `Q` and `D` set both
/// transmitted-qubit values at once (`p1 = p2`, etc.).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamName {
    P1,
    P2,
    P3,
    Q1,
    Q2,
    Q3,
    D1,
    D2,
    P,
    Q,
    D,
}

impl ParamName {
    pub const ALL: [ParamName; 11] = [
        ParamName::P1,
        ParamName::P2,
        ParamName::P3,
        ParamName::Q1,
        ParamName::Q2,
        ParamName::Q3,
        ParamName::D1,
        ParamName::D2,
        ParamName::P,
        ParamName::Q,
        ParamName::D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParamName::P1 => "p1",
            ParamName::P2 => "p2",
            ParamName::P3 => "p3",
            ParamName::Q1 => "q1",
            ParamName::Q2 => "q2",
            ParamName::Q3 => "q3",
            ParamName::D1 => "d1",
            ParamName::D2 => "d2",
            ParamName::P => "p",
            ParamName::Q => "q",
            ParamName::D => "d",
        }
    }

    pub fn set(self, params: &mut ProtocolParams, value: f64) {
        match self {
            ParamName::P1 => params.p1 = value,
            ParamName::P2 => params.p2 = value,
            ParamName::P3 => params.p3 = value,
            ParamName::Q1 => params.q1 = value,
            ParamName::Q2 => params.q2 = value,
            ParamName::Q3 => params.q3 = value,
            ParamName::D1 => params.d1 = value,
            ParamName::D2 => params.d2 = value,
            ParamName::P => {
                params.p1 = value;
                params.p2 = value;
            }
            ParamName::Q => {
                params.q1 = value;
                params.q2 = value;
            }
            ParamName::D => {
                params.d1 = value;
                params.d2 = value;
            }
        }
    }

    /// Reads the field; tied names report the first qubit's value.
    pub fn get(self, params: &ProtocolParams) -> f64 {
        match self {
            ParamName::P1 | ParamName::P => params.p1,
            ParamName::P2 => params.p2,
            ParamName::P3 => params.p3,
            ParamName::Q1 | ParamName::Q => params.q1,
            ParamName::Q2 => params.q2,
            ParamName::Q3 => params.q3,
            ParamName::D1 | ParamName::D => params.d1,
            ParamName::D2 => params.d2,
        }
    }

    pub fn is_reversal(self) -> bool {
        matches!(self, ParamName::Q1 | ParamName::Q2 | ParamName::Q3 | ParamName::Q)
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamName::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown parameter '{s}'")))
    }
}

/// Parses a comma-separated parameter list such as `q1,q2`.
pub fn parse_param_list(s: &str) -> Result<Vec<ParamName>> {
    s.split(',').map(|p| p.trim().parse()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputColumn {
    Concurrence,
    SuccessProb,
    ClosedFormConcurrence,
    ClosedFormSuccess,
    /// `|concurrence − closed_form_concurrence|`
    Deviation,
    C13,
    C23,
}

impl OutputColumn {
    pub const ALL: [OutputColumn; 7] = [
        OutputColumn::Concurrence,
        OutputColumn::SuccessProb,
        OutputColumn::ClosedFormConcurrence,
        OutputColumn::ClosedFormSuccess,
        OutputColumn::Deviation,
        OutputColumn::C13,
        OutputColumn::C23,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OutputColumn::Concurrence => "concurrence",
            OutputColumn::SuccessProb => "success_prob",
            OutputColumn::ClosedFormConcurrence => "closed_form_concurrence",
            OutputColumn::ClosedFormSuccess => "closed_form_success",
            OutputColumn::Deviation => "deviation",
            OutputColumn::C13 => "c13",
            OutputColumn::C23 => "c23",
        }
    }

    /// The columns every preset emits.
    pub fn standard() -> Vec<OutputColumn> {
        vec![
            OutputColumn::Concurrence,
            OutputColumn::SuccessProb,
            OutputColumn::ClosedFormConcurrence,
            OutputColumn::Deviation,
        ]
    }
}

impl FromStr for OutputColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OutputColumn::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown output column '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: ParamName,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: ParamName, min: f64, max: f64, steps: usize) -> Self {
        Self { param, min, max, steps }
    }

    /// `steps` evenly spaced values from `min` to `max` inclusive.
    pub fn values(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }
}

/// Reversal strengths re-optimised at every grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerPointOptimization {
    pub which: Vec<ParamName>,
    pub objective: Objective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ProtocolParams,
    pub axes: Vec<Axis>,
    pub outputs: Vec<OutputColumn>,
    /// When non-empty, an outermost categorical axis over initial states.
    #[serde(default)]
    pub initials: Vec<InitialState>,
    #[serde(default)]
    pub optimize: Option<PerPointOptimization>,
    /// Free-text lines emitted as `#` comments ahead of the CSV header.
    #[serde(default)]
    pub notes: Vec<String>,
}

impl SweepSpec {
    pub fn new(base: ProtocolParams, axes: Vec<Axis>) -> Self {
        Self {
            base,
            axes,
            outputs: OutputColumn::standard(),
            initials: Vec::new(),
            optimize: None,
            notes: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidInput(format!(
                "a sweep needs one or two axes, got {}",
                self.axes.len()
            )));
        }
        for a in &self.axes {
            if a.steps < 2 {
                return Err(Error::InvalidInput(format!("axis {} needs at least 2 steps", a.param)));
            }
            if !(0.0..=1.0).contains(&a.min) || !(0.0..=1.0).contains(&a.max) || a.min > a.max {
                return Err(Error::InvalidInput(format!(
                    "axis {} range [{}, {}] must lie within [0, 1]",
                    a.param, a.min, a.max
                )));
            }
        }
        if let Some(opt) = &self.optimize {
            if let Some(p) = opt.which.iter().find(|p| !p.is_reversal()) {
                return Err(Error::InvalidInput(format!("only reversal strengths can be optimised, not {p}")));
            }
        }
        self.base.validate()
    }

    fn columns(&self) -> Vec<String> {
        let mut cols = Vec::new();
        if !self.initials.is_empty() {
            cols.push("initial".to_string());
        }
        cols.extend(self.axes.iter().map(|a| a.param.name().to_string()));
        if let Some(opt) = &self.optimize {
            cols.extend(opt.which.iter().map(|p| p.name().to_string()));
        }
        cols.extend(self.outputs.iter().map(|c| c.name().to_string()));
        cols
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub initial: Option<InitialState>,
    /// Axis values followed by any optimised parameters.
    pub inputs: Vec<f64>,
    /// One entry per requested output; `None` when undefined or absent.
    pub outputs: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub notes: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Value of a numeric column (input or output) in `row`.
    pub fn value(&self, row: &SweepRow, name: &str) -> Option<f64> {
        let mut idx = self.column_index(name)?;
        if row.initial.is_some() {
            idx = idx.checked_sub(1)?;
        }
        if idx < row.inputs.len() {
            Some(row.inputs[idx])
        } else {
            row.outputs.get(idx - row.inputs.len()).copied().flatten()
        }
    }

    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                r.initial
                    .iter()
                    .map(|s| s.to_string())
                    .map(|s| if s.contains(',') { format!("\"{s}\"") } else { s })
                    .chain(r.inputs.iter().map(|&x| fmt_num(x)))
                    .chain(r.outputs.iter().map(|&x| fmt_opt(x)))
                    .collect()
            })
            .collect();
        let mut out = String::new();
        for n in &self.notes {
            out.push_str("# ");
            out.push_str(n);
            out.push('\n');
        }
        out.push_str(&write_csv(&self.columns, &rows));
        out
    }
}

fn evaluate_point(spec: &SweepSpec, initial: Option<InitialState>, point: &[f64]) -> Result<SweepRow> {
    let mut params = spec.base;
    if let Some(s) = initial {
        params.initial = s;
    }
    for (axis, &v) in spec.axes.iter().zip(point) {
        axis.param.set(&mut params, v);
    }
    let mut inputs = point.to_vec();
    if let Some(opt) = &spec.optimize {
        let best = optimize_reversal_with(&params, &opt.which, opt.objective, &OptimizeConfig::sweep())?;
        params = best.params;
        inputs.extend(opt.which.iter().map(|p| p.get(&params)));
    }
    let out = run(&params)?;
    let outputs = spec
        .outputs
        .iter()
        .map(|col| {
            Ok(match col {
                OutputColumn::Concurrence => out.concurrence,
                OutputColumn::SuccessProb => Some(out.success_prob),
                OutputColumn::ClosedFormConcurrence => out.closed_form_concurrence,
                OutputColumn::ClosedFormSuccess => out.closed_form_success,
                OutputColumn::Deviation => match (out.concurrence, out.closed_form_concurrence) {
                    (Some(a), Some(b)) => Some((a - b).abs()),
                    _ => None,
                },
                OutputColumn::C13 => out.pair_concurrence((1, 3))?,
                OutputColumn::C23 => out.pair_concurrence((2, 3))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepRow {
        initial,
        inputs,
        outputs,
    })
}

/// Evaluates every grid point of `spec`.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let axis_values: Vec<Vec<f64>> = spec.axes.iter().map(Axis::values).collect();
    let initials: Vec<Option<InitialState>> = if spec.initials.is_empty() {
        vec![None]
    } else {
        spec.initials.iter().copied().map(Some).collect()
    };

    let mut points: Vec<(Option<InitialState>, Vec<f64>)> = Vec::new();
    for &initial in &initials {
        match axis_values.as_slice() {
            [a] => points.extend(a.iter().map(|&x| (initial, vec![x]))),
            [a, b] => {
                for &x in a {
                    points.extend(b.iter().map(|&y| (initial, vec![x, y])));
                }
            }
            _ => unreachable!("validated"),
        }
    }

    let rows = points
        .par_iter()
        .map(|(initial, point)| evaluate_point(spec, *initial, point))
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepTable {
        columns: spec.columns(),
        notes: spec.notes.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::NoiseKind;
    use crate::protocols::closed_form;

    #[test]
    fn axis_values_include_endpoints() {
        let v = Axis::new(ParamName::P1, 0.0, 0.99, 4).values();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[3], 0.99);
        assert!((v[1] - 0.33).abs() < 1e-15);
    }

    #[test]
    fn param_names_round_trip() {
        for p in ParamName::ALL {
            assert_eq!(p.name().parse::<ParamName>().unwrap(), p);
        }
        assert!("x".parse::<ParamName>().is_err());
        let mut params = ProtocolParams::default();
        ParamName::D.set(&mut params, 0.4);
        assert_eq!((params.d1, params.d2), (0.4, 0.4));
    }

    #[test]
    fn sweep_is_row_major_and_matches_closed_form() {
        let spec = SweepSpec::new(
            ProtocolParams::distributed(0.0, 0.0, 0.9, 0.9),
            vec![Axis::new(ParamName::P1, 0.0, 0.5, 3), Axis::new(ParamName::P2, 0.0, 0.8, 2)],
        );
        let table = sweep(&spec).unwrap();
        assert_eq!(table.columns, ["p1", "p2", "concurrence", "success_prob", "closed_form_concurrence", "deviation"]);
        assert_eq!(table.rows.len(), 6);
        assert_eq!(table.rows[1].inputs, vec![0.0, 0.8]);
        assert_eq!(table.rows[2].inputs, vec![0.25, 0.0]);
        for row in &table.rows {
            let dev = table.value(row, "deviation").unwrap();
            assert!(dev <= 1e-9);
            let expected = closed_form::distributed_concurrence(row.inputs[0], row.inputs[1], 0.9, 0.9).unwrap();
            assert!((table.value(row, "concurrence").unwrap() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn sweep_rejects_bad_specs() {
        let base = ProtocolParams::default();
        assert!(sweep(&SweepSpec::new(base, vec![])).is_err());
        assert!(sweep(&SweepSpec::new(base, vec![Axis::new(ParamName::P1, 0.0, 1.0, 1)])).is_err());
        assert!(sweep(&SweepSpec::new(base, vec![Axis::new(ParamName::P1, 0.0, 1.5, 3)])).is_err());
    }

    #[test]
    fn pair_columns() {
        let mut spec = SweepSpec::new(
            ProtocolParams::distributed(0.1, 0.1, 0.0, 0.0),
            vec![Axis::new(ParamName::Q, 0.0, 0.99, 3)],
        );
        spec.outputs = vec![OutputColumn::Concurrence, OutputColumn::C13, OutputColumn::C23];
        let table = sweep(&spec).unwrap();
        let c13: Vec<f64> = table.rows.iter().map(|r| table.value(r, "c13").unwrap()).collect();
        assert!(c13[0] > c13[2]);
    }

    #[test]
    fn categorical_initial_axis() {
        let mut spec = SweepSpec::new(
            ProtocolParams::distributed(0.0, 0.0, 0.0, 0.0).with_noise(NoiseKind::AmplitudeDamping, 0.0, 0.0),
            vec![Axis::new(ParamName::D, 0.0, 0.5, 2)],
        );
        spec.initials = vec![InitialState::PaperDefault, InitialState::EqualW];
        let table = sweep(&spec).unwrap();
        assert_eq!(table.columns[0], "initial");
        assert_eq!(table.rows.len(), 4);
        assert_eq!(table.rows[2].initial, Some(InitialState::EqualW));
        assert!((table.value(&table.rows[2], "concurrence").unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(table.to_csv().starts_with("initial,d,concurrence"));
    }
}
