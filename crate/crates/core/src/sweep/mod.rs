//! Loss and frequency scans over the estimation pipeline.
//!
//! Points are evaluated in parallel; results always come back in input
//! order, so output is reproducible byte for byte.

mod config;
mod output;

pub use config::{
    EpsFrequencyMap, EstimationConfig, FrequencyConfig, OutputConfig, OutputFormat, RangeSpec, ScanParams,
    SweepConfig, SweepKind,
};
pub use output::{columns, emit_table, write_table};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::{simulate_point, EstimationResult, KeyRateOptions, ReferenceAnalysis, SideChannelParams};
use crate::pauli::{ModulationErrors, ReferenceStates};

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyRatePoint {
    pub kind: SweepKind,
    pub loss_db: f64,
    pub frequency_ghz: Option<f64>,
    pub eps: f64,
    pub delta: f64,
    pub estimate: Option<EstimationResult>,
    /// `R · f` in keys per second (frequency sweeps only).
    pub key_rate_per_second: Option<f64>,
    /// Failure reason when the estimation did not complete.
    pub error: Option<String>,
}

impl KeyRatePoint {
    /// Per-pulse key rate; failed points count as zero.
    pub fn key_rate(&self) -> f64 {
        self.estimate.map_or(0.0, |e| e.key_rate)
    }
}

/// Per-curve summary of a loss sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary {
    pub eps: f64,
    pub delta: f64,
    /// Largest scanned loss with a positive rate.
    pub cutoff_loss_db: Option<f64>,
    /// The rate is still positive at the last scanned loss.
    pub censored: bool,
    /// A zero-rate point is followed by a positive one further along.
    pub revival: bool,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossSweep {
    pub points: Vec<KeyRatePoint>,
    pub curves: Vec<CurveSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencySummary {
    pub delta: f64,
    pub best_frequency_ghz: f64,
    pub best_rate_per_second: f64,
    /// The maximum is strictly inside the scanned range.
    pub interior: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencySweep {
    pub loss_db: f64,
    pub points: Vec<KeyRatePoint>,
    pub curves: Vec<FrequencySummary>,
}

fn analyses(deltas: &[f64]) -> Result<Vec<std::result::Result<ReferenceAnalysis, String>>> {
    deltas
        .iter()
        .map(|&d| {
            let m = ModulationErrors::uniform(d)?;
            Ok(ReferenceAnalysis::new(ReferenceStates::symmetric(&m)).map_err(|e| e.to_string()))
        })
        .collect()
}

fn evaluate(
    analysis: &std::result::Result<ReferenceAnalysis, String>,
    cfg: &SweepConfig,
    loss_db: f64,
    eps: f64,
    opts: &KeyRateOptions,
) -> std::result::Result<EstimationResult, String> {
    let analysis = analysis.as_ref().map_err(Clone::clone)?;
    let channel = cfg.channel.with_loss(loss_db);
    let side = SideChannelParams::uniform(eps).map_err(|e| e.to_string())?;
    simulate_point(analysis, &channel, &side, opts).map_err(|e| e.to_string())
}

/// Key rate versus loss for every `(ε, δ)` curve in the config.
///
/// Rows are ordered by δ, then ε, then loss. Per-point estimation failures
/// are recorded on the row and the sweep carries on.
pub fn run_loss_sweep(cfg: &SweepConfig) -> Result<LossSweep> {
    cfg.validate()?;
    let opts = cfg.key_rate_options();
    let analyses = analyses(&cfg.scan.delta)?;
    let losses = cfg.loss.values();

    let tasks: Vec<(usize, f64, f64)> = (0..cfg.scan.delta.len())
        .flat_map(|di| {
            let losses = &losses;
            cfg.scan.eps.iter().flat_map(move |&e| losses.iter().map(move |&l| (di, e, l)))
        })
        .collect();

    let points: Vec<KeyRatePoint> = tasks
        .par_iter()
        .map(|&(di, eps, loss_db)| {
            let outcome = evaluate(&analyses[di], cfg, loss_db, eps, &opts);
            KeyRatePoint {
                kind: SweepKind::Loss,
                loss_db,
                frequency_ghz: None,
                eps,
                delta: cfg.scan.delta[di],
                key_rate_per_second: None,
                estimate: outcome.as_ref().ok().copied(),
                error: outcome.err(),
            }
        })
        .collect();

    let curves = points.chunks(losses.len()).map(summarize_curve).collect();
    Ok(LossSweep { points, curves })
}

fn summarize_curve(rows: &[KeyRatePoint]) -> CurveSummary {
    let positive: Vec<bool> = rows.iter().map(|p| p.key_rate() > 0.0).collect();
    let last = positive.iter().rposition(|&p| p);
    let first_zero = positive.iter().position(|&p| !p);
    let revival = matches!((first_zero, last), (Some(z), Some(l)) if z < l);
    let (eps, delta) = (rows[0].eps, rows[0].delta);
    if revival {
        log::warn!("key rate revives after dropping to zero (eps = {eps:e}, delta = {delta}); cutoff is ambiguous");
    }
    CurveSummary {
        eps,
        delta,
        cutoff_loss_db: last.map(|i| rows[i].loss_db),
        censored: positive.last().copied().unwrap_or(false),
        revival,
        failures: rows.iter().filter(|p| p.error.is_some()).count(),
    }
}

/// Key rate per second `R·f` versus system frequency at a fixed loss, with
/// `ε(f)` from the config's map. One curve per δ.
pub fn run_frequency_sweep(cfg: &SweepConfig) -> Result<FrequencySweep> {
    cfg.validate()?;
    let fcfg = cfg
        .frequency
        .ok_or_else(|| Error::Config("frequency sweep needs a [frequency] section with loss_db".into()))?;
    let opts = cfg.key_rate_options();
    let analyses = analyses(&cfg.scan.delta)?;
    let freqs = fcfg.range.values();

    let tasks: Vec<(usize, f64)> = (0..cfg.scan.delta.len())
        .flat_map(|di| {
            let freqs = &freqs;
            freqs.iter().map(move |&f| (di, f))
        })
        .collect();

    let points: Vec<KeyRatePoint> = tasks
        .par_iter()
        .map(|&(di, f)| {
            let eps = fcfg.eps_map.eps_at(f);
            let outcome = evaluate(&analyses[di], cfg, fcfg.loss_db, eps, &opts);
            // GHz → Hz.
            let per_second = outcome.as_ref().ok().map(|e| e.key_rate * f * 1e9);
            KeyRatePoint {
                kind: SweepKind::Frequency,
                loss_db: fcfg.loss_db,
                frequency_ghz: Some(f),
                eps,
                delta: cfg.scan.delta[di],
                key_rate_per_second: per_second,
                estimate: outcome.as_ref().ok().copied(),
                error: outcome.err(),
            }
        })
        .collect();

    let curves = points
        .chunks(freqs.len())
        .map(|rows| {
            let (idx, best) = rows
                .iter()
                .enumerate()
                .map(|(i, p)| (i, p.key_rate_per_second.unwrap_or(0.0)))
                .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
            FrequencySummary {
                delta: rows[0].delta,
                best_frequency_ghz: rows[idx].frequency_ghz.unwrap_or(f64::NAN),
                best_rate_per_second: best,
                interior: best > 0.0 && idx > 0 && idx + 1 < rows.len(),
            }
        })
        .collect();

    Ok(FrequencySweep { loss_db: fcfg.loss_db, points, curves })
}
