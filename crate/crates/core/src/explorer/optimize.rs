use serde::{Deserialize, Serialize};

use super::ParamName;
use crate::error::{Error, Result};
use crate::protocols::{run, ProtocolParams};

/// Upper end of the search domain. At `q = 1` every branch of the W-like
/// state is postselected away and the concurrence is undefined.
pub const Q_MAX: f64 = 0.999;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Concurrence,
    /// Maximise concurrence subject to `success_prob ≥ s_min`.
    ConcurrenceAtMinSuccess(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeConfig {
    /// Seed grid points per free axis, indexed by number of free axes − 1.
    pub seeds: [usize; 3],
    /// Coordinate-wise golden-section passes (the first plus refinements).
    pub passes: usize,
    /// Golden-section stops once the bracket is narrower than this.
    pub tol: f64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            seeds: [101, 41, 11],
            passes: 3,
            tol: 1e-9,
        }
    }
}

impl OptimizeConfig {
    /// Lighter settings for per-point optimisation inside sweeps.
    pub fn sweep() -> Self {
        Self {
            seeds: [21, 9, 5],
            passes: 3,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeResult {
    /// Base parameters with the optimal strengths filled in.
    pub params: ProtocolParams,
    pub concurrence: Option<f64>,
    pub success_prob: f64,
    /// False when no evaluated point met the success constraint.
    pub feasible: bool,
    pub evaluations: usize,
}

struct Search<'a> {
    base: &'a ProtocolParams,
    which: &'a [ParamName],
    objective: Objective,
    evaluations: usize,
    best_x: Vec<f64>,
    best_score: f64,
}

impl Search<'_> {
    fn params_at(&self, x: &[f64]) -> ProtocolParams {
        let mut p = *self.base;
        for (name, &v) in self.which.iter().zip(x) {
            name.set(&mut p, v);
        }
        p
    }

    /// Concurrence when feasible; below −1 otherwise, shrinking toward −1
    /// as the constraint is approached so the landscape stays unimodal.
    fn score(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        let out = run(&self.params_at(x))?;
        let Some(c) = out.concurrence else {
            return Ok(-3.0);
        };
        let score = match self.objective {
            Objective::Concurrence => c,
            Objective::ConcurrenceAtMinSuccess(s_min) if out.success_prob >= s_min => c,
            Objective::ConcurrenceAtMinSuccess(s_min) => -1.0 - (s_min - out.success_prob),
        };
        if score > self.best_score {
            self.best_score = score;
            self.best_x = x.to_vec();
        }
        Ok(score)
    }

    fn seed(&mut self, per_axis: usize) -> Result<()> {
        let k = self.which.len();
        let values: Vec<f64> = (0..per_axis)
            .map(|i| if i + 1 == per_axis { Q_MAX } else { Q_MAX * i as f64 / (per_axis - 1) as f64 })
            .collect();
        let mut x = vec![0.0; k];
        for idx in 0..per_axis.pow(k as u32) {
            let mut rest = idx;
            for slot in x.iter_mut().rev() {
                *slot = values[rest % per_axis];
                rest /= per_axis;
            }
            self.score(&x)?;
        }
        Ok(())
    }

    fn golden(&mut self, axis: usize, lo: f64, hi: f64, tol: f64) -> Result<()> {
        let mut x = self.best_x.clone();
        let (mut a, mut b) = (lo, hi);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        x[axis] = c;
        let mut fc = self.score(&x)?;
        x[axis] = d;
        let mut fd = self.score(&x)?;
        while b - a > tol {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                x[axis] = c;
                fc = self.score(&x)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                x[axis] = d;
                fd = self.score(&x)?;
            }
        }
        Ok(())
    }

    /// Success probability at `x`, without touching the incumbent.
    fn success(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        Ok(run(&self.params_at(x))?.success_prob)
    }

    /// Moves `x[j]` onto the level set `success = s_min` by bisection, when
    /// `[0, Q_MAX]` brackets it; otherwise leaves `x` unchanged. The
    /// feasible side of the final bracket is kept.
    fn onto_boundary(&mut self, x: &mut [f64], j: usize, s_min: f64) -> Result<()> {
        let mut lo = x.to_vec();
        let mut hi = x.to_vec();
        lo[j] = 0.0;
        hi[j] = Q_MAX;
        let g_lo = self.success(&lo)? - s_min;
        let g_hi = self.success(&hi)? - s_min;
        if (g_lo >= 0.0) == (g_hi >= 0.0) {
            return Ok(());
        }
        let (mut a, mut b) = (0.0, Q_MAX);
        let mut probe = x.to_vec();
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            probe[j] = mid;
            if (self.success(&probe)? - s_min >= 0.0) == (g_lo >= 0.0) {
                a = mid;
            } else {
                b = mid;
            }
        }
        x[j] = if g_lo >= 0.0 { a } else { b };
        Ok(())
    }

    /// Golden-section search along the constraint boundary: `x[i]` varies
    /// over `[lo, hi]` while `x[j]` is re-solved onto the boundary, since
    /// single-axis moves stall on a curved active constraint.
    fn boundary_golden(&mut self, i: usize, j: usize, lo: f64, hi: f64, s_min: f64, tol: f64) -> Result<()> {
        let start = self.best_x.clone();
        let at = |search: &mut Self, t: f64| -> Result<f64> {
            let mut x = start.clone();
            x[i] = t;
            search.onto_boundary(&mut x, j, s_min)?;
            search.score(&x)
        };
        let (mut a, mut b) = (lo, hi);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = at(self, c)?;
        let mut fd = at(self, d)?;
        while b - a > tol {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = at(self, c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = at(self, d)?;
            }
        }
        Ok(())
    }
}

/// Maximises the objective over the reversal strengths in `which`, each
/// searched on `[0, Q_MAX]`. Uses [`OptimizeConfig::default`].
pub fn optimize_reversal(base: &ProtocolParams, which: &[ParamName], objective: Objective) -> Result<OptimizeResult> {
    optimize_reversal_with(base, which, objective, &OptimizeConfig::default())
}

/// Grid seeding, then coordinate-wise golden-section refinement around the
/// incumbent with the bracket shrinking each pass. Under a success
/// constraint the same passes are repeated along the constraint boundary.
pub fn optimize_reversal_with(
    base: &ProtocolParams,
    which: &[ParamName],
    objective: Objective,
    config: &OptimizeConfig,
) -> Result<OptimizeResult> {
    base.validate()?;
    if let Some(p) = which.iter().find(|p| !p.is_reversal()) {
        return Err(Error::InvalidInput(format!("only reversal strengths can be optimised, not {p}")));
    }
    if which.len() > 3 {
        return Err(Error::InvalidInput("at most three reversal strengths can be optimised".into()));
    }
    if let Objective::ConcurrenceAtMinSuccess(s) = objective {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::InvalidInput(format!("minimum success {s} must lie in (0, 1]")));
        }
    }

    let mut search = Search {
        base,
        which,
        objective,
        evaluations: 0,
        best_x: which.iter().map(|p| p.get(base)).collect(),
        best_score: f64::NEG_INFINITY,
    };
    if which.is_empty() {
        search.score(&[])?;
    } else {
        let per_axis = config.seeds[which.len() - 1].max(2);
        search.seed(per_axis)?;
        let mut half_width = Q_MAX / (per_axis - 1) as f64;
        for _ in 0..config.passes {
            for axis in 0..which.len() {
                let centre = search.best_x[axis];
                let lo = (centre - half_width).max(0.0);
                let hi = (centre + half_width).min(Q_MAX);
                search.golden(axis, lo, hi, config.tol)?;
            }
            half_width *= 0.25;
        }
        if let Objective::ConcurrenceAtMinSuccess(s_min) = objective {
            if which.len() >= 2 {
                let mut half_width = Q_MAX;
                for _ in 0..config.passes {
                    for i in 0..which.len() {
                        for j in (0..which.len()).filter(|&j| j != i) {
                            let centre = search.best_x[i];
                            let lo = (centre - half_width).max(0.0);
                            let hi = (centre + half_width).min(Q_MAX);
                            search.boundary_golden(i, j, lo, hi, s_min, config.tol.max(1e-9))?;
                        }
                    }
                    half_width *= 0.25;
                }
            }
        }
    }

    let params = search.params_at(&search.best_x);
    let out = run(&params)?;
    let feasible = match objective {
        Objective::Concurrence => out.concurrence.is_some(),
        Objective::ConcurrenceAtMinSuccess(s) => out.concurrence.is_some() && out.success_prob >= s,
    };
    Ok(OptimizeResult {
        params,
        concurrence: out.concurrence,
        success_prob: out.success_prob,
        feasible,
        evaluations: search.evaluations,
    })
}
