use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::{ParamName, Q_MAX};
use crate::error::{Error, Result};
use crate::protocols::{run, ProtocolParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoPoint {
    pub params: ProtocolParams,
    /// Values of the free parameters, in the order they were requested.
    pub free_values: Vec<f64>,
    pub concurrence: f64,
    pub success_prob: f64,
}

impl ParetoPoint {
    /// True when `self` is at least as good in both coordinates and
    /// strictly better in one.
    pub fn dominates(&self, other: &ParetoPoint) -> bool {
        self.concurrence >= other.concurrence
            && self.success_prob >= other.success_prob
            && (self.concurrence > other.concurrence || self.success_prob > other.success_prob)
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Evaluates a `grid_density`-per-axis grid over the `free` parameters on
/// `[0, Q_MAX]` and keeps the non-dominated (concurrence, success) points,
/// sorted by success probability descending. Points with undefined
/// concurrence are skipped.
pub fn pareto_frontier(base: &ProtocolParams, free: &[ParamName], grid_density: usize) -> Result<Vec<ParetoPoint>> {
    if grid_density < 8 {
        return Err(Error::InvalidInput(format!("grid density must be at least 8, got {grid_density}")));
    }
    if free.is_empty() || free.len() > 3 {
        return Err(Error::InvalidInput("pareto needs one to three free parameters".into()));
    }
    base.validate()?;
    let values: Vec<f64> = (0..grid_density)
        .map(|i| if i + 1 == grid_density { Q_MAX } else { Q_MAX * i as f64 / (grid_density - 1) as f64 })
        .collect();
    let k = free.len();
    let total = grid_density.pow(k as u32);

    let evaluated = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut x = vec![0.0; k];
            for slot in x.iter_mut().rev() {
                *slot = values[idx % grid_density];
                idx /= grid_density;
            }
            let mut params = *base;
            for (name, &v) in free.iter().zip(&x) {
                name.set(&mut params, v);
            }
            let out = run(&params)?;
            Ok(out.concurrence.map(|c| ParetoPoint {
                params,
                free_values: x,
                concurrence: c,
                success_prob: out.success_prob,
            }))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut points: Vec<ParetoPoint> = evaluated.into_iter().flatten().collect();
    points.sort_by(|a, b| {
        b.success_prob
            .total_cmp(&a.success_prob)
            .then(b.concurrence.total_cmp(&a.concurrence))
            .then_with(|| lex_cmp(&a.free_values, &b.free_values))
    });
    let mut front = Vec::new();
    let mut best_c = f64::NEG_INFINITY;
    for p in points {
        if p.concurrence > best_c {
            best_c = p.concurrence;
            front.push(p);
        }
    }
    Ok(front)
}
