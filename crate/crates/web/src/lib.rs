//! Browser bindings. Every export returns a JSON string; the `*_report`
//! functions hold the logic so it can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use qdiscord::channels::{default_kraus_rank, discard_trailing, projective_channel, random_channel, MeasurementBasis};
use qdiscord::measures::scaling::{attach_ancilla, qubit_ancilla_with_purity};
use qdiscord::measures::{
    apply_on_b, discord, geometric_discord, info_loss, mutual_info, projection_distance_sq, ChannelClass,
};
use qdiscord::optimize::OptConfig;
use qdiscord::states::{bell_state, example_cc_state, example_post_channel_state, random_state};
use qdiscord::{BipartiteState, QOperator};

/// `bell`, `cc`, `post_channel`, or `random:<seed>` (two qubits).
pub fn named_state(name: &str) -> Result<BipartiteState, String> {
    match name {
        "bell" => Ok(bell_state()),
        "cc" => Ok(example_cc_state()),
        "post_channel" => Ok(example_post_channel_state()),
        other => {
            let seed = other
                .strip_prefix("random:")
                .and_then(|s| s.trim().parse::<u64>().ok())
                .ok_or_else(|| format!("unknown state '{other}'"))?;
            Ok(random_state(2, 2, seed))
        }
    }
}

fn quick_opt() -> OptConfig {
    OptConfig { grid_theta: 32, grid_phi: 64, ..OptConfig::default() }
}

#[derive(Debug, Serialize)]
pub struct ScalingPoint {
    pub purity: f64,
    pub with_ancilla: f64,
    pub predicted: f64,
}

#[derive(Debug, Serialize)]
pub struct ScalingSweep {
    pub state: String,
    pub plain: f64,
    pub points: Vec<ScalingPoint>,
}

/// `D_G` after attaching a qubit ancilla, for `steps` purities from 1/2 to 1.
pub fn scaling_sweep_report(state: &str, steps: usize) -> Result<ScalingSweep, String> {
    let s = named_state(state)?;
    let opt = quick_opt();
    let plain = geometric_discord(&s, &opt).map_err(|e| e.to_string())?.value;
    let steps = steps.clamp(2, 64);
    let points = (0..steps)
        .map(|i| {
            let purity = 0.5 + 0.5 * i as f64 / (steps - 1) as f64;
            let extended = attach_ancilla(&s, &qubit_ancilla_with_purity(purity)).map_err(|e| e.to_string())?;
            let with_ancilla = geometric_discord(&extended, &opt).map_err(|e| e.to_string())?.value;
            Ok(ScalingPoint { purity, with_ancilla, predicted: plain * purity })
        })
        .collect::<Result<_, String>>()?;
    Ok(ScalingSweep { state: state.to_string(), plain, points })
}

#[derive(Debug, Serialize)]
pub struct Landscape {
    pub measure: String,
    pub n_theta: usize,
    pub n_phi: usize,
    /// Row-major over `(θ, φ)`, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

/// The objective minimized by `D_G` (`"geometric"`) or `D` (`"entropic"`)
/// over measurement directions on the Bloch sphere of `A`.
pub fn landscape_report(state: &str, measure: &str, n_theta: usize, n_phi: usize) -> Result<Landscape, String> {
    let s = named_state(state)?;
    let (n_theta, n_phi) = (n_theta.clamp(2, 90), n_phi.clamp(2, 180));
    type Objective<'a> = Box<dyn Fn(&MeasurementBasis) -> qdiscord::Result<f64> + 'a>;
    let eval: Objective = match measure {
        "geometric" => Box::new(|b| projection_distance_sq(&s, b)),
        "entropic" => Box::new(|b| info_loss(&s, &projective_channel(b))),
        other => return Err(format!("unknown measure '{other}'")),
    };
    let mut values = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = std::f64::consts::PI * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            values.push(eval(&MeasurementBasis::from_bloch(theta, phi)).map_err(|e| e.to_string())?);
        }
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Landscape { measure: measure.to_string(), n_theta, n_phi, values, min, max })
}

#[derive(Debug, Serialize)]
pub struct Snapshot {
    pub label: String,
    pub discord: f64,
    pub geometric_discord: f64,
    pub mutual_info: f64,
}

#[derive(Debug, Serialize)]
pub struct ChannelComparison {
    pub channel: String,
    pub before: Snapshot,
    pub after: Snapshot,
}

fn snapshot(label: &str, s: &BipartiteState, opt: &OptConfig) -> Result<Snapshot, String> {
    let err = |e: qdiscord::Error| e.to_string();
    Ok(Snapshot {
        label: label.to_string(),
        discord: discord(s, ChannelClass::Projective, opt).map_err(err)?.value,
        geometric_discord: geometric_discord(s, opt).map_err(err)?.value,
        mutual_info: mutual_info(s).map_err(err)?,
    })
}

/// `D`, `D_G` and `I(A:B)` before and after a channel on `B`.
///
/// `channel` is `discard-mixed-ancilla` (the state first gets a maximally
/// mixed qubit ancilla on `B`, which is then discarded) or `random:<seed>`
/// with output dimension `d_out`.
pub fn channel_on_b_report(state: &str, channel: &str, d_out: usize) -> Result<ChannelComparison, String> {
    let s = named_state(state)?;
    let opt = quick_opt();
    let (start, ch) = if channel == "discard-mixed-ancilla" {
        let mixed = QOperator::identity(2).scale(0.5);
        (s.with_ancilla(&mixed).map_err(|e| e.to_string())?, discard_trailing(2, 2))
    } else {
        let seed = channel
            .strip_prefix("random:")
            .and_then(|x| x.trim().parse::<u64>().ok())
            .ok_or_else(|| format!("unknown channel '{channel}'"))?;
        let d_out = d_out.clamp(1, 4);
        (s, random_channel(2, d_out, default_kraus_rank(2, d_out), seed))
    };
    let after = apply_on_b(&start, &ch).map_err(|e| e.to_string())?;
    Ok(ChannelComparison {
        channel: ch.label().to_string(),
        before: snapshot("before", &start, &opt)?,
        after: snapshot("after", &after, &opt)?,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn scaling_sweep(state: &str, steps: usize) -> Result<String, JsError> {
    to_js(scaling_sweep_report(state, steps))
}

#[wasm_bindgen]
pub fn landscape(state: &str, measure: &str, n_theta: usize, n_phi: usize) -> Result<String, JsError> {
    to_js(landscape_report(state, measure, n_theta, n_phi))
}

#[wasm_bindgen]
pub fn channel_on_b(state: &str, channel: &str, d_out: usize) -> Result<String, JsError> {
    to_js(channel_on_b_report(state, channel, d_out))
}
