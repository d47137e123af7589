//! Sampled lower bound on `sup_{Λ_B} D_G(B|A)_{Λ_B(ρ)}`.

use rayon::prelude::*;
use serde::Serialize;

use super::discord::{geometric_discord, Argmin, MeasureReport};
use super::entropy::apply_on_b;
use crate::channels::{default_kraus_rank, discard_trailing, gamma_sigma, identity_channel, random_channel, Channel};
use crate::error::Result;
use crate::optimize::OptConfig;
use crate::qmat::{basis_ket, QOperator};
use crate::random::trial_seed;
use crate::states::BipartiteState;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerConfig {
    /// Number of Haar-random channels on `B`.
    pub random_channels: usize,
    /// Output dimensions cycled through by the random channels.
    pub d_out_choices: Vec<usize>,
    /// Also try discarding every trailing factor of `B` (all divisors of `d_B`).
    pub include_discards: bool,
    /// Dimensions of pure ancillas attached with `Γ^σ`.
    pub pure_ancilla_dims: Vec<usize>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            random_channels: 24,
            d_out_choices: vec![1, 2, 3, 4],
            include_discards: true,
            pure_ancilla_dims: vec![2],
        }
    }
}

/// Channels on `B` tried by the sampler; the identity is always first.
pub fn candidate_channels(d_b: usize, sampler: &SamplerConfig, seed: u64) -> Result<Vec<Channel>> {
    let mut out = vec![identity_channel(d_b)];
    if sampler.include_discards {
        for k in (2..d_b).filter(|&k| d_b.is_multiple_of(k)) {
            out.push(discard_trailing(d_b / k, k));
        }
    }
    for &m in &sampler.pure_ancilla_dims {
        let sigma = QOperator::projector(&basis_ket(m, 0));
        out.push(gamma_sigma(&sigma, d_b)?.with_label(format!("attach-pure-ancilla(d={m})")));
    }
    if !sampler.d_out_choices.is_empty() {
        for i in 0..sampler.random_channels {
            let d_out = sampler.d_out_choices[i % sampler.d_out_choices.len()];
            out.push(random_channel(d_b, d_out, default_kraus_rank(d_b, d_out), trial_seed(seed, i as u64)));
        }
    }
    Ok(out)
}

/// Lower-bound estimate of `D̃_G(B|A)`: the largest geometric discord found
/// over the sampled channels on `B`.
///
/// The identity channel is always sampled, so the estimate is never below
/// the plain geometric discord.
pub fn tilde_geometric_discord(
    state: &BipartiteState,
    sampler: &SamplerConfig,
    opt: &OptConfig,
    seed: u64,
) -> Result<MeasureReport> {
    let candidates = candidate_channels(state.dims().d_b, sampler, seed)?;
    let values =
        candidates.par_iter().map(|ch| geometric_discord(&apply_on_b(state, ch)?, opt)).collect::<Result<Vec<_>>>()?;

    // Ties resolve to the earliest candidate, so the identity wins them.
    let (best_idx, best) = values
        .iter()
        .enumerate()
        .fold(None::<(usize, &MeasureReport)>, |acc, (i, r)| match acc {
            Some((_, b)) if b.value >= r.value => acc,
            _ => Some((i, r)),
        })
        .expect("identity is always a candidate");

    let mut optimizer = best.optimizer.clone();
    optimizer.restarts = candidates.len();
    Ok(MeasureReport {
        measure: "tilde_geometric_discord".into(),
        value: best.value,
        argmin: Argmin::Channel(candidates[best_idx].label().to_string()),
        optimizer,
        clamped: best.clamped,
    })
}
