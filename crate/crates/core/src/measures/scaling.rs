//! Geometric discord under the ancilla-attach channel `Γ^σ: X ↦ X ⊗ σ` on `B`.
//!
//! For every basis of `A`, `‖ρ⊗σ − Π(ρ⊗σ)‖₂² = ‖ρ − Π(ρ)‖₂² · Tr σ²`, so the
//! minimum scales by the purity of `σ` and discarding the ancilla divides by
//! it.

use serde::Serialize;

use super::discord::{geometric_discord, projection_distance_sq};
use super::entropy::apply_on_b;
use crate::channels::{gamma_sigma, MeasurementBasis};
use crate::error::Result;
use crate::optimize::OptConfig;
use crate::qmat::QOperator;
use crate::random::{haar_unitary, rng_from_seed, trial_seed};
use crate::states::BipartiteState;

/// Tolerance on `|D_G(ρ⊗σ) − D_G(ρ)·Tr σ²|` after independent optimizations.
pub const SCALING_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub before: f64,
    pub after: f64,
    pub purity: f64,
    /// `after / before`; absent when `before` is zero.
    pub ratio: Option<f64>,
    /// Factor applied by discarding the ancilla again: `1 / Tr σ²`.
    pub reverse_factor: f64,
    /// `|after − before · Tr σ²|`.
    pub deviation: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// `Γ^σ` applied on `B`; the ancilla becomes the last factor of `B`.
pub fn attach_ancilla(state: &BipartiteState, sigma: &QOperator) -> Result<BipartiteState> {
    apply_on_b(state, &gamma_sigma(sigma, state.dims().d_b)?)
}

pub fn scaling_demo(
    state: &BipartiteState,
    sigma: &QOperator,
    opt: &OptConfig,
    tolerance: f64,
) -> Result<ScalingReport> {
    let purity = sigma.purity()?;
    let before = geometric_discord(state, opt)?.value;
    let after = geometric_discord(&attach_ancilla(state, sigma)?, opt)?.value;
    let deviation = (after - before * purity).abs();
    Ok(ScalingReport {
        before,
        after,
        purity,
        ratio: (before > 1e-12).then(|| after / before),
        reverse_factor: 1.0 / purity,
        deviation,
        tolerance,
        holds: deviation <= tolerance,
    })
}

/// `|‖ρ⊗σ − Π(ρ⊗σ)‖₂² − ‖ρ − Π(ρ)‖₂² Tr σ²|` for one fixed basis.
pub fn per_projector_scaling_gap(state: &BipartiteState, sigma: &QOperator, basis: &MeasurementBasis) -> Result<f64> {
    let purity = sigma.purity()?;
    let plain = projection_distance_sq(state, basis)?;
    let extended = projection_distance_sq(&attach_ancilla(state, sigma)?, basis)?;
    Ok((extended - plain * purity).abs())
}

/// Deterministic probe bases: Fibonacci-sphere directions for qubits, seeded
/// Haar unitaries otherwise.
pub fn probe_bases(d: usize, count: usize, seed: u64) -> Vec<MeasurementBasis> {
    if d == 2 {
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        return (0..count)
            .map(|k| {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                let theta = z.clamp(-1.0, 1.0).acos();
                let phi = (golden * k as f64).rem_euclid(2.0 * std::f64::consts::PI);
                MeasurementBasis::from_bloch(theta, phi)
            })
            .collect();
    }
    (0..count)
        .map(|k| {
            let u = haar_unitary(d, &mut rng_from_seed(trial_seed(seed, k as u64)));
            MeasurementBasis::new(u).expect("Haar unitary is orthonormal")
        })
        .collect()
}

/// Ancilla with purity `p ∈ [1/2, 1]`: `diag(λ, 1 − λ)` with `λ² + (1 − λ)² = p`.
pub fn qubit_ancilla_with_purity(p: f64) -> QOperator {
    assert!((0.5..=1.0).contains(&p), "qubit purity must lie in [1/2, 1]");
    let lambda = 0.5 * (1.0 + (2.0 * p - 1.0).max(0.0).sqrt());
    QOperator::from_real_diagonal(&[lambda, 1.0 - lambda])
}
