//! Monotonicity audits of `D` and `D_G` under channels on the unmeasured
//! party `B`.
//!
//! Each trial compares a measure before and after a channel on `B`. Besides
//! Haar-random channels the audit runs one identity control and a set of
//! ancilla-discard trials on inputs `ρ ⊗ I/2`, where discarding the ancilla
//! must double the geometric discord and leave the entropic one unchanged.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::discord::{discord, geometric_discord, ChannelClass};
use super::entropy::apply_on_b;
use crate::channels::{default_kraus_rank, discard_trailing, identity_channel, random_channel, Channel};
use crate::error::{Error, Result};
use crate::optimize::OptConfig;
use crate::qmat::{DimPair, QOperator};
use crate::random::trial_seed;
use crate::states::{bell_state, random_state, BipartiteState};

/// Allowed increase of `D` under a channel on `B` (optimizer slack).
pub const MONOTONICITY_TOL: f64 = 1e-5;
/// Allowed shortfall of an ancilla-discard trial against `before · (1/Tr σ² − 1)`.
pub const GAMMA_MARGIN_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Measure {
    Discord,
    GeometricDiscord,
}

impl Measure {
    pub fn evaluate(&self, state: &BipartiteState, opt: &OptConfig) -> Result<f64> {
        Ok(match self {
            Measure::Discord => discord(state, ChannelClass::Projective, opt)?.value,
            Measure::GeometricDiscord => geometric_discord(state, opt)?.value,
        })
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Discord => "D",
            Measure::GeometricDiscord => "D_G",
        })
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d" | "discord" => Ok(Measure::Discord),
            "dg" | "d_g" | "geometric" | "geometric_discord" => Ok(Measure::GeometricDiscord),
            other => Err(Error::InvalidConfig(format!("unknown measure '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TrialKind {
    Control,
    Random,
    AncillaDiscard { purity: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditRow {
    pub trial: usize,
    pub seed: u64,
    pub before: f64,
    pub after: f64,
    pub delta: f64,
    pub channel_desc: String,
    pub kind: TrialKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditConfig {
    pub measure: Measure,
    /// Number of random trials (controls and ancilla trials come on top).
    pub trials: usize,
    pub dims: DimPair,
    pub seed: u64,
    /// Ancilla-discard trials; the first one uses the Bell state for two qubits.
    pub gamma_trials: usize,
    pub tolerance: f64,
    pub margin_tolerance: f64,
    pub opt: OptConfig,
}

impl AuditConfig {
    pub fn new(measure: Measure, trials: usize, dims: DimPair, seed: u64) -> Self {
        Self {
            measure,
            trials,
            dims,
            seed,
            gamma_trials: 4,
            tolerance: MONOTONICITY_TOL,
            margin_tolerance: GAMMA_MARGIN_TOL,
            opt: OptConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditSummary {
    pub criterion: String,
    pub max_violation: f64,
    pub violations_above_tolerance: usize,
    pub ancilla_rows: usize,
    /// Largest `after / before` among ancilla-discard rows with `before > 0`.
    pub max_ancilla_ratio: Option<f64>,
    pub ancilla_margin_met: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditTable {
    pub config: AuditConfig,
    pub rows: Vec<AuditRow>,
    pub summary: AuditSummary,
}

/// `(before, after)` for one channel on `B`.
pub fn audit_trial(measure: Measure, state: &BipartiteState, ch_b: &Channel, opt: &OptConfig) -> Result<(f64, f64)> {
    let before = measure.evaluate(state, opt)?;
    let after = measure.evaluate(&apply_on_b(state, ch_b)?, opt)?;
    Ok((before, after))
}

struct TrialPlan {
    seed: u64,
    state: BipartiteState,
    channel: Channel,
    kind: TrialKind,
}

fn plan(cfg: &AuditConfig) -> Result<Vec<TrialPlan>> {
    let DimPair { d_a, d_b } = cfg.dims;
    let mut plans = Vec::with_capacity(cfg.trials + cfg.gamma_trials + 1);

    let s0 = trial_seed(cfg.seed, 0);
    plans.push(TrialPlan {
        seed: s0,
        state: random_state(d_a, d_b, s0),
        channel: identity_channel(d_b),
        kind: TrialKind::Control,
    });

    for i in 1..=cfg.trials {
        let s = trial_seed(cfg.seed, i as u64);
        let d_out = 1 + (i - 1) % (2 * d_b);
        plans.push(TrialPlan {
            seed: s,
            state: random_state(d_a, d_b, s),
            channel: random_channel(d_b, d_out, default_kraus_rank(d_b, d_out), trial_seed(s, 1)),
            kind: TrialKind::Random,
        });
    }

    let sigma = QOperator::identity(2).scale(0.5);
    for g in 0..cfg.gamma_trials {
        let idx = cfg.trials + 1 + g;
        let s = trial_seed(cfg.seed, idx as u64);
        let base = if g == 0 && cfg.dims == DimPair::new(2, 2) { bell_state() } else { random_state(d_a, d_b, s) };
        plans.push(TrialPlan {
            seed: s,
            state: base.with_ancilla(&sigma)?,
            channel: discard_trailing(d_b, 2),
            kind: TrialKind::AncillaDiscard { purity: 0.5 },
        });
    }
    Ok(plans)
}

/// Runs every trial (in parallel) and summarizes against the measure's
/// expected behaviour: no increase beyond tolerance for `D`; at least one
/// ancilla-discard trial reaching the purity margin for `D_G`.
pub fn monotonicity_audit(cfg: &AuditConfig) -> Result<AuditTable> {
    if cfg.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if !(cfg.tolerance > 0.0 && cfg.margin_tolerance > 0.0) {
        return Err(Error::InvalidConfig("tolerances must be positive".into()));
    }
    if cfg.dims.d_a == 0 || cfg.dims.d_b == 0 {
        return Err(Error::InvalidConfig("dimensions must be positive".into()));
    }

    let plans = plan(cfg)?;
    let rows = plans
        .par_iter()
        .enumerate()
        .map(|(trial, p)| {
            let (before, after) = audit_trial(cfg.measure, &p.state, &p.channel, &cfg.opt)?;
            Ok(AuditRow {
                trial,
                seed: p.seed,
                before,
                after,
                delta: after - before,
                channel_desc: p.channel.label().to_string(),
                kind: p.kind,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let summary = summarize(cfg, &rows);
    Ok(AuditTable { config: cfg.clone(), rows, summary })
}

fn summarize(cfg: &AuditConfig, rows: &[AuditRow]) -> AuditSummary {
    let max_violation = rows.iter().map(|r| r.delta).fold(f64::NEG_INFINITY, f64::max);
    let violations_above_tolerance = rows.iter().filter(|r| r.delta > cfg.tolerance).count();
    let ancilla: Vec<(&AuditRow, f64)> = rows
        .iter()
        .filter_map(|r| match r.kind {
            TrialKind::AncillaDiscard { purity } => Some((r, purity)),
            _ => None,
        })
        .collect();
    let max_ancilla_ratio = ancilla
        .iter()
        .filter(|(r, _)| r.before > 1e-12)
        .map(|(r, _)| r.after / r.before)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    let ancilla_margin_met = ancilla.iter().any(|(r, purity)| {
        let margin = r.before * (1.0 / purity - 1.0);
        r.before > 1e-6 && r.delta >= margin - cfg.margin_tolerance
    });

    let (criterion, passed) = match cfg.measure {
        Measure::Discord => {
            (format!("max(after - before) <= {:e} over all trials", cfg.tolerance), max_violation <= cfg.tolerance)
        }
        Measure::GeometricDiscord => (
            format!(
                "some ancilla-discard trial has after - before >= before*(1/Tr(sigma^2) - 1) - {:e}",
                cfg.margin_tolerance
            ),
            ancilla_margin_met,
        ),
    };
    AuditSummary {
        criterion,
        max_violation,
        violations_above_tolerance,
        ancilla_rows: ancilla.len(),
        max_ancilla_ratio,
        ancilla_margin_met,
        passed,
    }
}

impl AuditTable {
    /// CSV with `#` header lines stating the criterion, then
    /// `trial,seed,before,after,delta,channel_desc`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# monotonicity audit of {} under channels on B, dims {}, seed {}\n",
            self.config.measure, self.config.dims, self.config.seed
        ));
        out.push_str(&format!("# criterion: {}\n", self.summary.criterion));
        out.push_str(&format!("# max violation {:?} ; passed {}\n", self.summary.max_violation, self.summary.passed));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["trial", "seed", "before", "after", "delta", "channel_desc"]).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.trial.to_string(),
                r.seed.to_string(),
                format!("{:?}", r.before),
                format!("{:?}", r.after),
                format!("{:?}", r.delta),
                r.channel_desc.clone(),
            ])
            .expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit table serializes")
    }
}
