//! The information-loss / conditional-mutual-information identity.
//!
//! For a channel `Λ_A` with Stinespring isometry `V: A → A′C` and
//! `ρ_{A′BC} = V ρ_AB V†`:
//!
//! ```text
//! I(A:B)_ρ − I(A:B)_{Λ_A(ρ)} = I(A′C:B) − I(A′:B) = I(B:C|A′)
//!                            = I(C:A′B) − I(C:A′)
//! ```
//!
//! The last form has `B` only in its first term, so a channel on `B` cannot
//! increase it. Each check computes both sides independently.
//!
//! The check also records `I(A′:BC) − I(A′:C)`. That expression is
//! `I(A′:B|C)`, not `I(B:C|A′)`, and the two disagree in general (for the
//! identity channel on `A` the first is `I(A:B)` and the second is zero).

use rayon::prelude::*;
use serde::Serialize;

use super::entropy::{cond_mutual_info, cond_mutual_info_ab_given_c, cond_mutual_info_via_c, dilate_on_a, info_loss};
use crate::channels::{
    default_kraus_rank, identity_channel, projective_channel, random_channel, Channel, MeasurementBasis,
};
use crate::error::{Error, Result};
use crate::qmat::{DimPair, QOperator};
use crate::random::{haar_unitary, rng_from_seed, trial_seed};
use crate::states::{random_state, BipartiteState};

pub const IDENTITY_TOL: f64 = 1e-10;
pub const CMI_MONOTONE_TOL: f64 = 1e-5;

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub info_loss: f64,
    /// `I(A′C:B) − I(A′:B)` of the dilated state.
    pub cmi: f64,
    /// `I(C:A′B) − I(C:A′)` of the dilated state.
    pub cmi_via_c: f64,
    /// `I(A′:BC) − I(A′:C)` of the dilated state.
    pub a_bc_minus_a_c: f64,
    /// CMI after a channel on `B` acts on the dilated state.
    pub cmi_after_b: f64,
    pub identity_gap: f64,
    /// `|CMI − (I(C:A′B) − I(C:A′))|`.
    pub rewrite_gap: f64,
    /// `|CMI − (I(A′:BC) − I(A′:C))|`; not part of [`IdentityCheck::passes`].
    pub a_bc_form_gap: f64,
    pub cmi_increase: f64,
}

impl IdentityCheck {
    pub fn passes(&self, identity_tol: f64, monotone_tol: f64) -> bool {
        self.identity_gap <= identity_tol && self.rewrite_gap <= identity_tol && self.cmi_increase <= monotone_tol
    }
}

pub fn check_proof_identity(state: &BipartiteState, ch_a: &Channel, ch_b: &Channel) -> Result<IdentityCheck> {
    let loss = info_loss(state, ch_a)?;
    let (tri, dims) = dilate_on_a(state, ch_a)?;
    let cmi = cond_mutual_info(&tri, dims)?;
    let cmi_via_c = cond_mutual_info_via_c(&tri, dims)?;
    let a_bc_minus_a_c = cond_mutual_info_ab_given_c(&tri, dims)?;

    let on_b = ch_b.embed_factor(&dims.as_array(), 1)?;
    let tri_after = on_b.apply(&tri)?.hermitian_part();
    let dims_after = super::entropy::TriDims { d_b: ch_b.d_out(), ..dims };
    let cmi_after_b = cond_mutual_info(&tri_after, dims_after)?;

    Ok(IdentityCheck {
        info_loss: loss,
        cmi,
        cmi_via_c,
        a_bc_minus_a_c,
        cmi_after_b,
        identity_gap: (loss - cmi).abs(),
        rewrite_gap: (cmi - cmi_via_c).abs(),
        a_bc_form_gap: (cmi - a_bc_minus_a_c).abs(),
        cmi_increase: cmi_after_b - cmi,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityTrialKind {
    IdentityOnA,
    ProjectiveOnA,
    Random,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRow {
    pub trial: usize,
    pub seed: u64,
    pub kind: IdentityTrialKind,
    pub channel_a: String,
    pub channel_b: String,
    #[serde(flatten)]
    pub check: IdentityCheck,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityConfig {
    pub trials: usize,
    pub dims: DimPair,
    pub seed: u64,
    pub identity_tol: f64,
    pub monotone_tol: f64,
}

impl IdentityConfig {
    pub fn new(trials: usize, dims: DimPair, seed: u64) -> Self {
        Self { trials, dims, seed, identity_tol: IDENTITY_TOL, monotone_tol: CMI_MONOTONE_TOL }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub config: IdentityConfig,
    pub criterion: String,
    pub rows: Vec<IdentityRow>,
    pub max_identity_gap: f64,
    pub max_rewrite_gap: f64,
    pub max_cmi_increase: f64,
    pub max_a_bc_form_gap: f64,
    pub passed: bool,
}

/// Two control trials (identity and a random projective measurement on `A`)
/// followed by `trials` random `(ρ, Λ_A, Λ_B)` triples.
pub fn verify_identity(cfg: &IdentityConfig) -> Result<IdentityReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let DimPair { d_a, d_b } = cfg.dims;
    let total = cfg.trials + 2;
    let rows = (0..total)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(cfg.seed, trial as u64);
            let state = random_state(d_a, d_b, seed);
            let (kind, ch_a) = match trial {
                0 => (IdentityTrialKind::IdentityOnA, identity_channel(d_a)),
                1 => {
                    let u: QOperator = haar_unitary(d_a, &mut rng_from_seed(trial_seed(seed, 2)));
                    (IdentityTrialKind::ProjectiveOnA, projective_channel(&MeasurementBasis::new(u)?))
                }
                _ => {
                    let d_out = 1 + trial % (d_a + 1);
                    let rank = 1 + trial % default_kraus_rank(d_a, d_out);
                    (IdentityTrialKind::Random, random_channel(d_a, d_out, rank, trial_seed(seed, 2)))
                }
            };
            let d_b_out = 1 + (trial / 2) % (2 * d_b);
            let ch_b = random_channel(d_b, d_b_out, default_kraus_rank(d_b, d_b_out), trial_seed(seed, 3));
            let check = check_proof_identity(&state, &ch_a, &ch_b)?;
            let passed = check.passes(cfg.identity_tol, cfg.monotone_tol);
            Ok(IdentityRow {
                trial,
                seed,
                kind,
                channel_a: ch_a.label().to_string(),
                channel_b: ch_b.label().to_string(),
                check,
                passed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let max = |f: fn(&IdentityCheck) -> f64| rows.iter().map(|r| f(&r.check)).fold(f64::NEG_INFINITY, f64::max);
    Ok(IdentityReport {
        criterion: format!(
            "|info_loss - CMI| <= {:e}, |CMI - (I(C:A'B) - I(C:A'))| <= {:e}, CMI increase under channel on B <= {:e}",
            cfg.identity_tol, cfg.identity_tol, cfg.monotone_tol
        ),
        max_identity_gap: max(|c| c.identity_gap),
        max_rewrite_gap: max(|c| c.rewrite_gap),
        max_cmi_increase: max(|c| c.cmi_increase),
        max_a_bc_form_gap: max(|c| c.a_bc_form_gap),
        passed: rows.iter().all(|r| r.passed),
        rows,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::discord::{discord, Argmin, ChannelClass};
    use crate::optimize::OptConfig;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_channel_gives_zero_loss_and_zero_cmi() {
        let s = random_state(2, 2, 1);
        let c = check_proof_identity(&s, &identity_channel(2), &identity_channel(2)).unwrap();
        assert_abs_diff_eq!(c.info_loss, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.cmi, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn projective_channel_recovers_discord_integrand() {
        let s = random_state(2, 2, 2);
        let r = discord(&s, ChannelClass::Projective, &OptConfig::default()).unwrap();
        let Argmin::Basis(basis) = &r.argmin else { panic!("projective discord reports a basis") };
        let c = check_proof_identity(&s, &projective_channel(basis), &identity_channel(2)).unwrap();
        assert_abs_diff_eq!(c.info_loss, r.value, epsilon = 1e-12);
        assert_abs_diff_eq!(c.cmi, r.value, epsilon = 1e-10);
    }

    #[test]
    fn small_verification_run_passes() {
        let rep = verify_identity(&IdentityConfig::new(10, DimPair::new(2, 2), 7)).unwrap();
        assert!(rep.passed, "{:?}", rep.rows.iter().find(|r| !r.passed));
        assert_eq!(rep.rows.len(), 12);
        assert_eq!(rep.rows[0].kind, IdentityTrialKind::IdentityOnA);
    }

    #[test]
    fn a_bc_form_is_a_different_quantity() {
        // With the identity on A the environment is trivial: I(A′:BC) − I(A′:C)
        // collapses to I(A:B) while I(B:C|A′) vanishes.
        let s = random_state(2, 2, 3);
        let c = check_proof_identity(&s, &identity_channel(2), &identity_channel(2)).unwrap();
        let mi = crate::measures::entropy::mutual_info(&s).unwrap();
        assert_abs_diff_eq!(c.a_bc_minus_a_c, mi, epsilon = 1e-12);
        assert!(c.a_bc_form_gap > 1e-3);
        assert!(c.rewrite_gap < 1e-12);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(verify_identity(&IdentityConfig::new(0, DimPair::new(2, 2), 0)).is_err());
    }
}
