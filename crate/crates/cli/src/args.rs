use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use entloc::channels::NoiseKind;
use entloc::protocols::{ProtocolParams, Strategy};
use entloc::states::{parse_w_coefficients, InitialState};

use crate::Usage;

const PARAM_KEYS: [&str; 11] = [
    "strategy", "p1", "p2", "p3", "q1", "q2", "q3", "noise", "d1", "d2", "initial",
];

/// Flags shared by every command that evaluates a protocol.
#[derive(Args, Debug, Clone, Default)]
pub struct ProtocolArgs {
    /// distributed, local or projective
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q3: Option<String>,
    /// none, ad, dp or pd
    #[arg(long)]
    pub noise: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d2: Option<String>,
    /// paper-default, equal-w, gw-mixed or w:a1,a2,a3
    #[arg(long)]
    pub initial: Option<String>,
    /// key=value file with the same names as the flags; flags win
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
pub struct Resolved {
    pub params: ProtocolParams,
    /// Factor the `w:` coefficients were divided by, when one was given.
    pub normalization: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn read_params_file(path: &PathBuf) -> Result<BTreeMap<String, String>, Usage> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read --params file {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Usage(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        let k = k.trim();
        if !PARAM_KEYS.contains(&k) {
            return Err(Usage(format!("{}:{}: unknown key '{k}'", path.display(), n + 1)));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn unit(name: &str, raw: Option<&String>) -> Result<f64, Usage> {
    let Some(raw) = raw else { return Ok(0.0) };
    let v: f64 = raw
        .parse()
        .map_err(|_| Usage(format!("invalid value for --{name}: '{raw}' is not a number")))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(Usage(format!("invalid value for --{name}: {v} is outside [0, 1]")));
    }
    Ok(v)
}

impl ProtocolArgs {
    pub fn resolve(&self) -> Result<Resolved, Usage> {
        let mut merged = match &self.params {
            Some(path) => read_params_file(path)?,
            None => BTreeMap::new(),
        };
        let flags = [
            ("strategy", &self.strategy),
            ("p1", &self.p1),
            ("p2", &self.p2),
            ("p3", &self.p3),
            ("q1", &self.q1),
            ("q2", &self.q2),
            ("q3", &self.q3),
            ("noise", &self.noise),
            ("d1", &self.d1),
            ("d2", &self.d2),
            ("initial", &self.initial),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                merged.insert(k.to_string(), v.clone());
            }
        }

        let strategy = match merged.get("strategy") {
            Some(s) => s.parse::<Strategy>().map_err(|e| Usage(format!("invalid value for --strategy: {e}")))?,
            None => Strategy::Distributed,
        };
        let noise = match merged.get("noise") {
            Some(s) => s.parse::<NoiseKind>().map_err(|e| Usage(format!("invalid value for --noise: {e}")))?,
            None => NoiseKind::None,
        };
        let (initial, normalization) = match merged.get("initial").map(String::as_str) {
            None => (InitialState::PaperDefault, None),
            Some(s) if s.starts_with("w:") => {
                let (state, factor) =
                    parse_w_coefficients(s).map_err(|e| Usage(format!("invalid value for --initial: {e}")))?;
                (state, Some(factor))
            }
            Some(s) => (
                s.parse().map_err(|e| Usage(format!("invalid value for --initial: {e}")))?,
                None,
            ),
        };
        let get = |k: &str| unit(k, merged.get(k));
        let params = ProtocolParams {
            strategy,
            p1: get("p1")?,
            p2: get("p2")?,
            p3: get("p3")?,
            q1: get("q1")?,
            q2: get("q2")?,
            q3: get("q3")?,
            noise,
            d1: get("d1")?,
            d2: get("d2")?,
            initial,
        };
        Ok(Resolved { params, normalization })
    }
}
