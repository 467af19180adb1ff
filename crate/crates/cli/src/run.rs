//! Executes one scenario into CSV rows and a metadata record.

use std::f64::consts::PI;
use std::time::Instant;

use hopjc::{
    build_propagator_for, concurrence, evolve, prepare_initial, reduce_to_qubits, truncation_bound,
    truncation_leakage, ProtocolRecord, QubitState, Reciprocation, SystemParams,
};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Point, Protocol, Scenario, SweepParameter};
use crate::error::CliError;

/// Sectors whose initial weight is below this are not diagonalized.
pub const SKIP_THRESHOLD: f64 = 1e-20;
/// Leakage above this marks the run as flagged in its metadata.
pub const LEAKAGE_FLAG: f64 = 1e-6;
/// Scenarios whose largest truncation reaches this need `--allow-expensive`.
pub const EXPENSIVE_TRUNCATION: usize = 100;

#[derive(Debug, Clone, Serialize)]
pub struct PointInfo {
    pub alpha: f64,
    pub delta_over_g: f64,
    pub j_over_g: f64,
    pub truncation: usize,
    pub leakage: f64,
    pub skipped_sectors: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub scenario: String,
    pub protocol: Protocol,
    pub truncation: usize,
    pub leakage: f64,
    pub leakage_flagged: bool,
    pub expensive: bool,
    pub max_norm_error: f64,
    pub rows: usize,
    pub wall_time_s: f64,
    pub library_version: &'static str,
    pub cli_version: &'static str,
    pub config_hash: String,
    pub points: Vec<PointInfo>,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
    pub metadata: RunMetadata,
}

/// Largest truncation any point of the scenario will use.
pub fn planned_truncation(scenario: &Scenario) -> Result<usize, CliError> {
    let alpha_max = scenario.points().iter().map(|p| p.alpha).fold(0.0, f64::max);
    let rule = truncation_bound(alpha_max).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(rule.max(scenario.truncation_override.unwrap_or(0)))
}

pub fn is_expensive(scenario: &Scenario) -> Result<bool, CliError> {
    Ok(planned_truncation(scenario)? >= EXPENSIVE_TRUNCATION)
}

pub fn config_hash(scenario: &Scenario) -> String {
    let canonical = serde_json::to_string(scenario).expect("scenario serializes");
    Sha256::digest(canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

struct Ctx<'a> {
    scenario: &'a Scenario,
}

impl Ctx<'_> {
    fn lift(&self, context: String) -> impl FnOnce(hopjc::Error) -> CliError + '_ {
        move |source| match source {
            hopjc::Error::Domain(m) | hopjc::Error::Config(m) => {
                CliError::Config(format!("scenario '{}' at {context}: {m}", self.scenario.name))
            }
            source => CliError::Numerical {
                scenario: self.scenario.name.clone(),
                context,
                source,
            },
        }
    }

    fn params(&self, p: &Point) -> Result<SystemParams, CliError> {
        let params = SystemParams::new(p.delta, p.j, p.alpha).map_err(self.lift(describe(p)))?;
        Ok(params.with_min_truncation(self.scenario.truncation_override.unwrap_or(0)))
    }
}

fn describe(p: &Point) -> String {
    format!("alpha={}, Delta/g={}, J/g={}", p.alpha, p.delta, p.j)
}

pub fn run(scenario: &Scenario) -> Result<ScenarioOutput, CliError> {
    let start = Instant::now();
    let ctx = Ctx { scenario };
    let (header, rows, points, norm_col) = match scenario.protocol {
        Protocol::ConcurrenceSeries => concurrence_series(&ctx)?,
        Protocol::ReciprocationForward | Protocol::ReciprocationFull => reciprocation(&ctx)?,
    };
    let max_norm_error = rows
        .iter()
        .filter_map(|r| r[norm_col])
        .fold(0.0, f64::max);
    let leakage = points.iter().map(|p| p.leakage).fold(0.0, f64::max);
    let metadata = RunMetadata {
        scenario: scenario.name.clone(),
        protocol: scenario.protocol,
        truncation: points.iter().map(|p| p.truncation).max().unwrap_or(0),
        leakage,
        leakage_flagged: leakage >= LEAKAGE_FLAG,
        expensive: is_expensive(scenario)?,
        max_norm_error,
        rows: rows.len(),
        wall_time_s: start.elapsed().as_secs_f64(),
        library_version: hopjc::VERSION,
        cli_version: env!("CARGO_PKG_VERSION"),
        config_hash: config_hash(scenario),
        points,
    };
    Ok(ScenarioOutput { header, rows, metadata })
}

type Table = (Vec<&'static str>, Vec<Vec<Option<f64>>>, Vec<PointInfo>, usize);

fn concurrence_series(ctx: &Ctx) -> Result<Table, CliError> {
    let s = ctx.scenario;
    let qubits = s.initial_qubits.to_state();
    let times = s.times_over_pi();
    let per_point: Vec<(PointInfo, Vec<Vec<Option<f64>>>)> = s
        .points()
        .par_iter()
        .map(|p| {
            let params = ctx.params(p)?;
            let (info, prop, initial) = prepare(ctx, p, &params, &qubits)?;
            let sweep_value = s.sweep.as_ref().map(|sw| match sw.parameter {
                SweepParameter::Alpha => p.alpha,
                SweepParameter::DeltaOverG => p.delta,
                SweepParameter::JOverG => p.j,
            });
            let rows = times
                .par_iter()
                .map(|&tau| {
                    let at = || format!("{}, gt/pi={tau}", describe(p));
                    let state = evolve(&initial, &prop, tau * PI).map_err(ctx.lift(at()))?;
                    let c = concurrence(&reduce_to_qubits(&state)).map_err(ctx.lift(at()))?;
                    let norm_error = (state.norm() - 1.0).abs();
                    let mut row = vec![Some(tau)];
                    if sweep_value.is_some() {
                        row.push(sweep_value);
                    }
                    row.extend([Some(c), Some(norm_error)]);
                    Ok(row)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok((info, rows))
        })
        .collect::<Result<_, CliError>>()?;

    let mut header = vec!["gt_over_pi"];
    if let Some(sw) = &s.sweep {
        header.push(sw.parameter.column());
    }
    header.extend(["concurrence", "norm_error"]);
    let norm_col = header.len() - 1;
    let (points, rows) = flatten(per_point);
    Ok((header, rows, points, norm_col))
}

fn reciprocation(ctx: &Ctx) -> Result<Table, CliError> {
    let s = ctx.scenario;
    let full = s.protocol == Protocol::ReciprocationFull;
    let times = s.times_over_pi();
    let prime = s.prime_times_over_pi();
    let pairs: Vec<(f64, f64)> = match &prime {
        None => times.iter().map(|&t| (t, t)).collect(),
        Some(tp) => times
            .iter()
            .flat_map(|&t| tp.iter().map(move |&u| (t, u)))
            .collect(),
    };
    let per_point: Vec<(PointInfo, Vec<Vec<Option<f64>>>)> = s
        .points()
        .par_iter()
        .map(|p| {
            let params = ctx.params(p)?;
            let (info, prop, _) = prepare(ctx, p, &params, &QubitState::BellPlus)?;
            let protocol = Reciprocation::with_propagator(&params, prop).map_err(ctx.lift(describe(p)))?;
            let rows = pairs
                .par_iter()
                .map(|&(tau, tau_prime)| {
                    let at = || format!("{}, gt/pi={tau}, gt'/pi={tau_prime}", describe(p));
                    let rec: ProtocolRecord = if full {
                        protocol.full_at(tau * PI, tau_prime * PI)
                    } else {
                        protocol.forward_at(tau * PI)
                    }
                    .map_err(ctx.lift(at()))?;
                    let mut row = vec![Some(tau)];
                    if prime.is_some() {
                        row.push(Some(tau_prime));
                    }
                    row.extend([Some(p.alpha), Some(rec.p), rec.epsilon, Some(rec.norm_error)]);
                    if full {
                        row.extend([rec.c_retrieved, rec.c_projected, rec.p_projection]);
                    }
                    Ok(row)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok((info, rows))
        })
        .collect::<Result<_, CliError>>()?;

    let mut header = vec!["gt_over_pi"];
    if prime.is_some() {
        header.push("gt_prime_over_pi");
    }
    header.extend(["alpha", "P", "epsilon", "norm_error"]);
    let norm_col = header.len() - 1;
    if full {
        header.extend(["C_retrieved", "C_projected", "P_projection"]);
    }
    let (points, rows) = flatten(per_point);
    Ok((header, rows, points, norm_col))
}

fn prepare(
    ctx: &Ctx,
    p: &Point,
    params: &SystemParams,
    qubits: &QubitState<f64>,
) -> Result<(PointInfo, hopjc::Propagator, hopjc::PureState), CliError> {
    let initial = prepare_initial(qubits, params).map_err(ctx.lift(describe(p)))?;
    let leakage = truncation_leakage(initial.space().clone(), qubits, params.alpha).map_err(ctx.lift(describe(p)))?;
    let prop = build_propagator_for(params, &initial, SKIP_THRESHOLD).map_err(ctx.lift(describe(p)))?;
    if leakage >= LEAKAGE_FLAG {
        log::warn!(
            "scenario '{}' at {}: truncation M={} leaks {leakage:.2e} of the initial state",
            ctx.scenario.name,
            describe(p),
            params.truncation()
        );
    }
    let info = PointInfo {
        alpha: p.alpha,
        delta_over_g: p.delta,
        j_over_g: p.j,
        truncation: params.truncation(),
        leakage,
        skipped_sectors: prop.skipped().to_vec(),
    };
    Ok((info, prop, initial))
}

fn flatten(per_point: Vec<(PointInfo, Vec<Vec<Option<f64>>>)>) -> (Vec<PointInfo>, Vec<Vec<Option<f64>>>) {
    let mut points = Vec::with_capacity(per_point.len());
    let mut rows = Vec::new();
    for (info, r) in per_point {
        points.push(info);
        rows.extend(r);
    }
    (points, rows)
}

/// Fixed formatting: 12 significant digits, `null` for undefined values.
pub fn format_value(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.11e}"),
        _ => "null".to_string(),
    }
}
