//! `entloc`: evaluate, sweep, verify and optimise entanglement-localization
//! protocols from the command line.

mod args;
mod report;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use entloc::entanglement::{concurrence, concurrence_of_assistance};
use entloc::explorer::{
    optimize_reversal, pareto_frontier, parse_param_list, preset, sweep, Axis, Objective, OutputColumn, ParamName,
    PerPointOptimization, SweepSpec, PRESET_NAMES,
};
use entloc::format::{fmt_num, fmt_opt, write_csv};
use entloc::protocols::{closed_form, run, verify_closed_forms, ProtocolParams, Strategy};
use entloc::states::{pure_to_density, w_like, WLikeCoefficients};

use args::{Format, ProtocolArgs};
use report::{to_json, OptimizeReport, ParetoReport, RunReport};

/// A bad flag, file or preset name. Exits with status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

#[derive(Parser, Debug)]
#[command(name = "entloc", version, about = "Localize three-qubit W-class entanglement onto a qubit pair")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Baseline numbers for the default W-like state
    Demo,
    /// Run one protocol and print its report
    Localize {
        #[command(flatten)]
        protocol: ProtocolArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock time in the report
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate a figure preset or a custom grid
    Sweep {
        /// Named preset (fig1a ... fig4b)
        #[arg(long, conflicts_with = "axis")]
        figure: Option<String>,
        /// Custom axis as name=min:max:steps, given once or twice
        #[arg(long)]
        axis: Vec<String>,
        /// Comma-separated output columns
        #[arg(long)]
        outputs: Option<String>,
        /// Reversal strengths to optimise at every point
        #[arg(long)]
        optimize: Option<String>,
        #[arg(long, requires = "optimize")]
        min_success: Option<f64>,
        #[command(flatten)]
        protocol: ProtocolArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the closed forms against the simulation
    Verify {
        /// Points per axis on [0, 0.99]
        #[arg(long, default_value_t = 9)]
        grid: usize,
        /// Table format; plain text when omitted
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimise reversal strengths
    Optimize {
        #[command(flatten)]
        protocol: ProtocolArgs,
        /// Comma-separated reversal strengths; defaults to those the strategy uses
        #[arg(long)]
        which: Option<String>,
        #[arg(long)]
        min_success: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Concurrence versus success-probability frontier
    Pareto {
        #[command(flatten)]
        protocol: ProtocolArgs,
        /// Comma-separated free parameters; defaults to the strategy's reversal strengths
        #[arg(long)]
        free: Option<String>,
        #[arg(long, default_value_t = 32)]
        density: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn default_reversal(strategy: Strategy) -> anyhow::Result<Vec<ParamName>> {
    match strategy {
        Strategy::Distributed => Ok(vec![ParamName::Q1, ParamName::Q2]),
        Strategy::FullyLocal => Ok(vec![ParamName::Q3]),
        Strategy::ProjectiveBaseline => Err(usage("the projective baseline has no reversal strengths")),
    }
}

fn param_list(flag: &str, raw: &str) -> anyhow::Result<Vec<ParamName>> {
    parse_param_list(raw).map_err(|e| usage(format!("invalid value for --{flag}: {e}")))
}

fn cmd_demo() -> anyhow::Result<ExitCode> {
    let psi = w_like(WLikeCoefficients::paper_default())?;
    let rho12 = pure_to_density(&psi).partial_trace(&[3])?;
    let c = concurrence(rho12.matrix())?.value;
    let coa = concurrence_of_assistance(&psi, (1, 2))?;
    let proj = run(&ProtocolParams::projective())?;
    let text = format!(
        "state=paper-default\nconcurrence={}\ncoa={}\nprojective success={} conditional concurrence={}\n",
        fmt_num(c),
        fmt_num(coa),
        fmt_num(proj.success_prob),
        fmt_opt(proj.concurrence),
    );
    emit(None, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_localize(protocol: &ProtocolArgs, format: Format, out: Option<&PathBuf>, timing: bool) -> anyhow::Result<ExitCode> {
    let resolved = protocol.resolve()?;
    let start = Instant::now();
    let outcome = run(&resolved.params)?;
    let mut report = RunReport::new(&outcome, resolved.normalization)?;
    if timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    let text = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let header: Vec<String> = [
                "concurrence",
                "success_prob",
                "closed_form_concurrence",
                "closed_form_success",
                "deviation",
                "c13",
                "c23",
            ]
            .map(String::from)
            .to_vec();
            let row = vec![
                fmt_opt(report.concurrence),
                fmt_num(report.success_prob),
                fmt_opt(report.closed_form_concurrence),
                fmt_opt(report.closed_form_success),
                fmt_opt(report.concurrence_deviation),
                fmt_opt(report.c13),
                fmt_opt(report.c23),
            ];
            write_csv(&header, &[row])
        }
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_axis(raw: &str) -> anyhow::Result<Axis> {
    let bad = || usage(format!("invalid value for --axis: '{raw}' (expected name=min:max:steps)"));
    let (name, range) = raw.split_once('=').ok_or_else(bad)?;
    let param: ParamName = name.trim().parse().map_err(|e| usage(format!("invalid value for --axis: {e}")))?;
    let parts: Vec<&str> = range.split(':').collect();
    let [min, max, steps] = parts.as_slice() else {
        return Err(bad());
    };
    Ok(Axis::new(
        param,
        min.trim().parse().map_err(|_| bad())?,
        max.trim().parse().map_err(|_| bad())?,
        steps.trim().parse().map_err(|_| bad())?,
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    figure: Option<&str>,
    axes: &[String],
    outputs: Option<&str>,
    optimize: Option<&str>,
    min_success: Option<f64>,
    protocol: &ProtocolArgs,
    format: Format,
    out: Option<&PathBuf>,
) -> anyhow::Result<ExitCode> {
    let mut spec = match figure {
        Some(name) => preset(name)
            .ok_or_else(|| usage(format!("unknown preset '{name}'; valid presets: {}", PRESET_NAMES.join(", "))))?,
        None => {
            if axes.is_empty() {
                return Err(usage("sweep needs --figure or at least one --axis"));
            }
            let resolved = protocol.resolve()?;
            let axes = axes.iter().map(|a| parse_axis(a)).collect::<anyhow::Result<Vec<_>>>()?;
            let mut spec = SweepSpec::new(resolved.params, axes);
            if let Some(f) = resolved.normalization.filter(|&f| f != 1.0) {
                spec.notes.push(format!("initial coefficients divided by {} to unit norm", fmt_num(f)));
            }
            if let Some(raw) = optimize {
                let objective = match min_success {
                    Some(s) => Objective::ConcurrenceAtMinSuccess(s),
                    None => Objective::Concurrence,
                };
                spec.optimize = Some(PerPointOptimization {
                    which: param_list("optimize", raw)?,
                    objective,
                });
            }
            spec
        }
    };
    if let Some(raw) = outputs {
        spec.outputs = raw
            .split(',')
            .map(|c| c.trim().parse::<OutputColumn>())
            .collect::<Result<_, _>>()
            .map_err(|e| usage(format!("invalid value for --outputs: {e}")))?;
    }
    spec.validate().map_err(|e| usage(e.to_string()))?;
    let table = sweep(&spec)?;
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => to_json(&table)?,
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(grid: usize, format: Option<Format>, out: Option<&PathBuf>) -> anyhow::Result<ExitCode> {
    if grid < 2 {
        return Err(usage("invalid value for --grid: need at least 2 points per axis"));
    }
    let report = verify_closed_forms(grid)?;
    let status = |r: &entloc::protocols::CheckRow| match (r.gating, r.passed) {
        (false, _) => "INFO",
        (true, true) => "PASS",
        (true, false) => "FAIL",
    };
    let text = match format {
        Some(Format::Json) => to_json(&report)?,
        Some(Format::Csv) => {
            let header = ["check", "points", "max_deviation", "tolerance", "status"].map(String::from);
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.points.to_string(),
                        fmt_num(r.max_deviation),
                        fmt_num(r.tolerance),
                        status(r).to_string(),
                    ]
                })
                .collect();
            write_csv(&header, &rows)
        }
        None => {
            let mut s = format!("grid={grid} points per axis on [0, 0.99]\n");
            s.push_str(&format!("{:<32} {:>9} {:>22} {:>10}  status\n", "check", "points", "max_deviation", "tolerance"));
            for r in &report.rows {
                s.push_str(&format!(
                    "{:<32} {:>9} {:>22} {:>10}  {}\n",
                    r.name,
                    r.points,
                    fmt_num(r.max_deviation),
                    fmt_num(r.tolerance),
                    status(r)
                ));
            }
            let (p3, q3) = (0.5, 0.5);
            let joint = run(&ProtocolParams::fully_local(p3, q3))?.success_prob;
            let product = closed_form::local_two_step_success(p3, q3);
            s.push_str(&format!(
                "local success at p3={} q3={}: joint={} two_step_product={} difference={}\n",
                fmt_num(p3),
                fmt_num(q3),
                fmt_num(joint),
                fmt_num(product),
                fmt_num((joint - product).abs())
            ));
            s.push_str(if report.passed() { "result: PASS\n" } else { "result: FAIL\n" });
            s
        }
    };
    emit(out, &text)?;
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_optimize(
    protocol: &ProtocolArgs,
    which: Option<&str>,
    min_success: Option<f64>,
    out: Option<&PathBuf>,
) -> anyhow::Result<ExitCode> {
    let base = protocol.resolve()?.params;
    let which = match which {
        Some(raw) => param_list("which", raw)?,
        None => default_reversal(base.strategy)?,
    };
    if let Some(s) = min_success {
        if !(s > 0.0 && s <= 1.0) {
            return Err(usage(format!("invalid value for --min-success: {s} is outside (0, 1]")));
        }
    }
    let objective = min_success.map_or(Objective::Concurrence, Objective::ConcurrenceAtMinSuccess);
    let result = optimize_reversal(&base, &which, objective).map_err(|e| usage(e.to_string()))?;
    let report = OptimizeReport::new(&result, &which, min_success);
    emit(out, &to_json(&report)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_pareto(
    protocol: &ProtocolArgs,
    free: Option<&str>,
    density: usize,
    format: Format,
    out: Option<&PathBuf>,
) -> anyhow::Result<ExitCode> {
    let base = protocol.resolve()?.params;
    let free = match free {
        Some(raw) => param_list("free", raw)?,
        None => match base.strategy {
            Strategy::Distributed => vec![ParamName::Q],
            _ => default_reversal(base.strategy)?,
        },
    };
    let front = pareto_frontier(&base, &free, density).map_err(|e| usage(e.to_string()))?;
    let text = match format {
        Format::Json => to_json(&ParetoReport::new(base, &free, density, &front))?,
        Format::Csv => {
            let header: Vec<String> = free
                .iter()
                .map(|p| p.name().to_string())
                .chain(["concurrence".to_string(), "success_prob".to_string()])
                .collect();
            let rows: Vec<Vec<String>> = front
                .iter()
                .map(|p| {
                    p.free_values
                        .iter()
                        .map(|&v| fmt_num(v))
                        .chain([fmt_num(p.concurrence), fmt_num(p.success_prob)])
                        .collect()
                })
                .collect();
            write_csv(&header, &rows)
        }
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Demo => cmd_demo(),
        Command::Localize {
            protocol,
            format,
            out,
            timing,
        } => cmd_localize(&protocol, format, out.as_ref(), timing),
        Command::Sweep {
            figure,
            axis,
            outputs,
            optimize,
            min_success,
            protocol,
            format,
            out,
        } => cmd_sweep(
            figure.as_deref(),
            &axis,
            outputs.as_deref(),
            optimize.as_deref(),
            min_success,
            &protocol,
            format,
            out.as_ref(),
        ),
        Command::Verify { grid, format, out } => cmd_verify(grid, format, out.as_ref()),
        Command::Optimize {
            protocol,
            which,
            min_success,
            out,
        } => cmd_optimize(&protocol, which.as_deref(), min_success, out.as_ref()),
        Command::Pareto {
            protocol,
            free,
            density,
            format,
            out,
        } => cmd_pareto(&protocol, free.as_deref(), density, format, out.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            // A closed downstream pipe (e.g. `| head`) is not an error.
            if e
                .downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
            {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e:#}");
            let is_usage = e.downcast_ref::<Usage>().is_some()
                || matches!(
                    e.downcast_ref::<entloc::Error>(),
                    Some(entloc::Error::InvalidInput(_) | entloc::Error::OutOfUnitInterval { .. })
                );
            if is_usage {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
