//! Entropic, channel-class and geometric discord of `B|A`.
//!
//! Optimizers return the best value they found, so the reported infima are
//! upper bounds on the true ones. Reported values are re-evaluated through the
//! generic channel path at the optimizer's argmin.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::ser::Serializer;
use serde::Serialize;

use super::entropy::{a_sandwich, info_loss, vn_entropy, weighted_block_entropy};
use crate::channels::{povm_channel, projective_channel, MeasurementBasis, Povm};
use crate::encoding::{encode_entries, Entries};
use crate::error::{Error, Result};
use crate::optimize::{minimize_basis, nelder_mead_polished, OptConfig, OptimizerDiagnostics};
use crate::qmat::{c64, QOperator, Subsystem};
use crate::random::{complex_ginibre, rng_from_seed, trial_seed};
use crate::states::BipartiteState;

/// Values in `(−ZERO_CLAMP, 0)` are reported as exactly zero.
pub const ZERO_CLAMP: f64 = 1e-9;

/// Channel class `T` over which the information loss is minimized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChannelClass {
    /// Complete von Neumann measurements.
    Projective,
    /// Rank-one POVMs with at most `max_outcomes` elements.
    PovmBased { max_outcomes: usize },
}

impl ChannelClass {
    /// POVM class with `d_A²` outcomes.
    pub fn povm_for(d_a: usize) -> Self {
        Self::PovmBased { max_outcomes: d_a * d_a }
    }
}

/// Optimal measurement or channel behind a reported value.
#[derive(Clone, Debug)]
pub enum Argmin {
    Basis(MeasurementBasis),
    Povm(Povm),
    Channel(String),
    None,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ArgminRecord<'a> {
    Basis {
        vectors: Entries,
        #[serde(skip_serializing_if = "Option::is_none")]
        bloch_direction: Option<[f64; 3]>,
    },
    Povm {
        elements: Vec<Entries>,
    },
    Channel {
        description: &'a str,
    },
    None,
}

impl Serialize for Argmin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Argmin::Basis(b) => {
                ArgminRecord::Basis { vectors: encode_entries(b.vectors()), bloch_direction: b.bloch_direction() }
            }
            Argmin::Povm(p) => ArgminRecord::Povm { elements: p.elements().iter().map(encode_entries).collect() },
            Argmin::Channel(d) => ArgminRecord::Channel { description: d },
            Argmin::None => ArgminRecord::None,
        }
        .serialize(s)
    }
}

impl Argmin {
    pub fn describe(&self) -> String {
        match self {
            Argmin::Basis(b) => match b.bloch_direction() {
                Some([x, y, z]) => format!("basis along n = ({x:.6}, {y:.6}, {z:.6})"),
                None => format!("basis in dimension {}", b.dim()),
            },
            Argmin::Povm(p) => format!("rank-one POVM with {} elements", p.len()),
            Argmin::Channel(d) => d.clone(),
            Argmin::None => "-".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureReport {
    pub measure: String,
    pub value: f64,
    pub argmin: Argmin,
    pub optimizer: OptimizerDiagnostics,
    /// Set when a slightly negative value was clamped to zero.
    pub clamped: bool,
}

pub(crate) fn clamp_value(raw: f64) -> Result<(f64, bool)> {
    if raw >= 0.0 {
        Ok((raw, false))
    } else if raw > -ZERO_CLAMP {
        Ok((0.0, true))
    } else {
        Err(Error::NegativeMeasure { value: raw })
    }
}

fn check_guard(state: &BipartiteState, cfg: &OptConfig) -> Result<()> {
    let d_a = state.dims().d_a;
    if d_a > cfg.max_d_a {
        return Err(Error::UnsupportedDimension { d_a, max: cfg.max_d_a });
    }
    Ok(())
}

fn column(u: &DMatrix<Complex64>, i: usize) -> Vec<Complex64> {
    u.column(i).iter().copied().collect()
}

/// `‖ρ − Π(ρ)‖₂²` as a function of the basis `U`: `Tr ρ² − Σᵢ ‖⟨uᵢ|ρ|uᵢ⟩‖₂²`.
fn geometric_objective(state: &BipartiteState) -> impl Fn(&DMatrix<Complex64>) -> f64 + Sync + '_ {
    let dims = state.dims();
    let rho = state.rho().matrix();
    let purity = state.rho().hs_norm_sq();
    move |u| {
        let kept: f64 = (0..dims.d_a).map(|i| a_sandwich(rho, dims.d_a, dims.d_b, &column(u, i)).norm_squared()).sum();
        purity - kept
    }
}

/// Information loss as a function of rank-one measurement vectors `mᵢ`:
/// `S(A) − S(AB) + Σᵢ pᵢ S(ρ_B^i)`.
fn entropic_offset(state: &BipartiteState) -> Result<f64> {
    Ok(vn_entropy(&state.reduced(Subsystem::A))? - vn_entropy(state.rho())?)
}

fn entropic_objective_vectors(state: &BipartiteState, offset: f64, vectors: &[Vec<Complex64>]) -> f64 {
    let dims = state.dims();
    let rho = state.rho().matrix();
    offset + vectors.iter().map(|v| weighted_block_entropy(&a_sandwich(rho, dims.d_a, dims.d_b, v))).sum::<f64>()
}

/// `‖ρ − (Π_A ⊗ id)(ρ)‖₂²` evaluated through the projective channel.
pub fn projection_distance_sq(state: &BipartiteState, basis: &MeasurementBasis) -> Result<f64> {
    let pi = projective_channel(basis).embed(state.dims(), Subsystem::A)?;
    Ok((state.rho() - &pi.apply(state.rho())?).hs_norm_sq())
}

/// Geometric discord `min_Π ‖ρ − Π_A(ρ)‖₂²`, no normalization prefactor.
pub fn geometric_discord(state: &BipartiteState, cfg: &OptConfig) -> Result<MeasureReport> {
    check_guard(state, cfg)?;
    let search = minimize_basis(state.dims().d_a, geometric_objective(state), cfg);
    let basis = MeasurementBasis::new(QOperator::from_matrix(search.unitary))?;
    let (value, clamped) = clamp_value(projection_distance_sq(state, &basis)?)?;
    Ok(MeasureReport {
        measure: "geometric_discord".into(),
        value,
        argmin: Argmin::Basis(basis),
        optimizer: search.diagnostics,
        clamped,
    })
}

/// Discord `inf_{Λ ∈ T} [I(A:B)_ρ − I(A:B)_{Λ_A(ρ)}]` for the given class.
pub fn discord(state: &BipartiteState, class: ChannelClass, cfg: &OptConfig) -> Result<MeasureReport> {
    check_guard(state, cfg)?;
    let d_a = state.dims().d_a;
    let offset = entropic_offset(state)?;
    let objective = |u: &DMatrix<Complex64>| {
        let vectors: Vec<Vec<Complex64>> = (0..d_a).map(|i| column(u, i)).collect();
        entropic_objective_vectors(state, offset, &vectors)
    };
    let search = minimize_basis(d_a, objective, cfg);
    let basis = MeasurementBasis::new(QOperator::from_matrix(search.unitary.clone()))?;

    match class {
        ChannelClass::Projective => {
            let (value, clamped) = clamp_value(info_loss(state, &projective_channel(&basis))?)?;
            Ok(MeasureReport {
                measure: "discord".into(),
                value,
                argmin: Argmin::Basis(basis),
                optimizer: search.diagnostics,
                clamped,
            })
        }
        ChannelClass::PovmBased { max_outcomes } => {
            if max_outcomes < d_a {
                return Err(Error::InvalidConfig(format!(
                    "POVM class needs at least d_A = {d_a} outcomes, got {max_outcomes}"
                )));
            }
            let (povm, diagnostics) =
                optimize_povm(state, offset, &search.unitary, max_outcomes, cfg, search.diagnostics)?;
            let (value, clamped) = clamp_value(info_loss(state, &povm_channel(&povm)?)?)?;
            Ok(MeasureReport {
                measure: "povm_discord".into(),
                value,
                argmin: Argmin::Povm(povm),
                optimizer: diagnostics,
                clamped,
            })
        }
    }
}

/// Rank-one POVM `Mᵢ = S^{-1/2}|aᵢ⟩⟨aᵢ|S^{-1/2}`, `S = Σ |aᵢ⟩⟨aᵢ|`, from raw
/// vectors packed as `(re, im)` pairs. `None` when `S` is near singular.
fn povm_vectors(d: usize, n: usize, x: &[f64]) -> Option<Vec<Vec<Complex64>>> {
    let raw: Vec<DMatrix<Complex64>> =
        (0..n).map(|i| DMatrix::from_fn(d, 1, |a, _| c64(x[2 * (i * d + a)], x[2 * (i * d + a) + 1]))).collect();
    let mut s = DMatrix::<Complex64>::zeros(d, d);
    for a in &raw {
        s += a * a.adjoint();
    }
    let eig = QOperator::from_matrix(s).hermitian_part().eig_hermitian().ok()?;
    let scale = eig.values.last().copied().unwrap_or(0.0);
    if eig.values[0] <= 1e-10 * scale.max(1e-300) {
        return None;
    }
    let inv_sqrt = eig.values.iter().map(|&l| c64(l.powf(-0.5), 0.0));
    let v = eig.vectors.matrix();
    let s_inv_sqrt = v * DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d, inv_sqrt)) * v.adjoint();
    Some(raw.iter().map(|a| (&s_inv_sqrt * a).iter().copied().collect()).collect())
}

fn optimize_povm(
    state: &BipartiteState,
    offset: f64,
    projective_unitary: &DMatrix<Complex64>,
    n: usize,
    cfg: &OptConfig,
    mut diagnostics: OptimizerDiagnostics,
) -> Result<(Povm, OptimizerDiagnostics)> {
    let d = state.dims().d_a;
    let objective = |x: &[f64]| match povm_vectors(d, n, x) {
        Some(vs) => entropic_objective_vectors(state, offset, &vs),
        None => f64::INFINITY,
    };

    // The projective optimum, padded with null vectors, seeds the first start.
    let mut starts = Vec::with_capacity(cfg.povm_restarts + 1);
    let mut x0 = vec![0.0; 2 * d * n];
    for i in 0..d {
        for a in 0..d {
            let z = projective_unitary[(a, i)];
            x0[2 * (i * d + a)] = z.re;
            x0[2 * (i * d + a) + 1] = z.im;
        }
    }
    starts.push(x0);
    for r in 0..cfg.povm_restarts {
        let mut rng = rng_from_seed(trial_seed(cfg.seed ^ 0x90f4, r as u64));
        let g = complex_ginibre(n, d, &mut rng);
        starts.push(g.iter().flat_map(|z| [z.re, z.im]).collect::<Vec<f64>>());
    }

    use rayon::prelude::*;
    let results: Vec<_> = starts
        .par_iter()
        .map(|x0| nelder_mead_polished(objective, x0, 0.1, &OptConfig { max_evals: cfg.max_evals * 4, ..cfg.clone() }))
        .collect();
    let best = results.iter().min_by(|a, b| a.value.total_cmp(&b.value)).expect("at least one POVM start");

    let vectors =
        povm_vectors(d, n, &best.x).ok_or_else(|| Error::InvalidPovm("optimizer returned a singular frame".into()))?;
    let elements = vectors
        .iter()
        .map(|v| {
            let dv = nalgebra::DVector::from_column_slice(v);
            QOperator::projector(&dv).hermitian_part()
        })
        .collect();
    diagnostics.restarts += results.len();
    diagnostics.refinement_iters += results.iter().map(|r| r.iterations).sum::<usize>();
    diagnostics.converged = diagnostics.converged && best.converged;
    Ok((Povm::new(elements)?, diagnostics))
}

/// Closed-form geometric discord for a qubit `A` and any `B`.
///
/// Writing `ρ = ½ Σ_μ σ_μ ⊗ R_μ` with `R_i = Tr_A[(σ_i ⊗ I) ρ]` and
/// `G_ij = Tr(R_i R_j)`, the distance for direction `n` is
/// `½ (Tr G − nᵀ G n)`, minimized by the top eigenvector of `G`. For two
/// qubits this is `¼ (‖x‖² + ‖T‖² − k_max)` in the Bloch parameterization.
pub fn geometric_discord_qubit_closed_form(state: &BipartiteState) -> Result<f64> {
    let dims = state.dims();
    if dims.d_a != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: dims.d_a });
    }
    let rho = state.rho().matrix();
    let (o, i1) = (c64(0.0, 0.0), c64(1.0, 0.0));
    let paulis = [[o, i1, i1, o], [o, c64(0.0, -1.0), c64(0.0, 1.0), o], [i1, o, o, -i1]];
    let r: Vec<DMatrix<Complex64>> = paulis
        .iter()
        .map(|p| {
            // Tr_A[(σ ⊗ I) ρ] = Σ_{a,a′} σ[a′][a] ρ_{(a,·),(a′,·)}
            let mut out = DMatrix::zeros(dims.d_b, dims.d_b);
            for a in 0..2 {
                for a2 in 0..2 {
                    let s = p[a2 * 2 + a];
                    if s == o {
                        continue;
                    }
                    for b in 0..dims.d_b {
                        for b2 in 0..dims.d_b {
                            out[(b, b2)] += s * rho[(a * dims.d_b + b, a2 * dims.d_b + b2)];
                        }
                    }
                }
            }
            out
        })
        .collect();
    let g = Matrix3::from_fn(|i, j| (&r[i] * &r[j]).trace().re);
    let g = (g + g.transpose()) * 0.5;
    let top = SymmetricEigen::new(g).eigenvalues.max();
    Ok(clamp_value(0.5 * (g.trace() - top))?.0)
}
