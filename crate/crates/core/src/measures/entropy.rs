//! Von Neumann entropy, mutual information and conditional mutual information
//! (all in bits).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::qmat::{QOperator, Subsystem};
use crate::states::BipartiteState;

/// `−Σ λ log₂ λ` with `0 log 0 = 0`. Negative entries are treated as zero.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum::<f64>().max(0.0)
}

/// `S(ρ) = −Tr ρ log₂ ρ`.
///
/// Eigenvalues in `[−1e−10, 0)` are clamped to zero.
pub fn vn_entropy(rho: &QOperator) -> Result<f64> {
    rho.validate_density().map_err(Error::InvalidDensity)?;
    let values = rho.eigenvalues_hermitian()?;
    Ok(entropy_of_spectrum(&values))
}

/// Entropy of the marginal on `keep` of a multipartite operator.
pub fn marginal_entropy(rho: &QOperator, dims: &[usize], keep: &[usize]) -> Result<f64> {
    if keep.len() == dims.len() {
        return vn_entropy(rho);
    }
    vn_entropy(&rho.reduce(dims, keep)?)
}

/// `I(X:Y) = S(X) + S(Y) − S(XY)` for disjoint groups of factors.
pub fn mutual_info_groups(rho: &QOperator, dims: &[usize], x: &[usize], y: &[usize]) -> Result<f64> {
    let mut xy: Vec<usize> = x.iter().chain(y).copied().collect();
    xy.sort_unstable();
    Ok(marginal_entropy(rho, dims, x)? + marginal_entropy(rho, dims, y)? - marginal_entropy(rho, dims, &xy)?)
}

/// `I(A:B)` of a bipartite state.
pub fn mutual_info(state: &BipartiteState) -> Result<f64> {
    let s_a = vn_entropy(&state.reduced(Subsystem::A))?;
    let s_b = vn_entropy(&state.reduced(Subsystem::B))?;
    let s_ab = vn_entropy(state.rho())?;
    Ok(s_a + s_b - s_ab)
}

/// Dimensions `(d_A′, d_B, d_C)` of a tripartite state on `A′ ⊗ B ⊗ C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriDims {
    pub d_a: usize,
    pub d_b: usize,
    pub d_c: usize,
}

impl TriDims {
    pub fn as_array(&self) -> [usize; 3] {
        [self.d_a, self.d_b, self.d_c]
    }
}

fn check_tripartite(rho: &QOperator, dims: TriDims) -> Result<()> {
    let n = rho.require_square()?;
    let total = dims.d_a * dims.d_b * dims.d_c;
    if n != total {
        return Err(Error::DimensionMismatch { expected: total, found: n });
    }
    Ok(())
}

/// `I(B:C|A′) = I(A′C:B) − I(A′:B)`.
pub fn cond_mutual_info(rho: &QOperator, dims: TriDims) -> Result<f64> {
    check_tripartite(rho, dims)?;
    let d = dims.as_array();
    Ok(mutual_info_groups(rho, &d, &[0, 2], &[1])? - mutual_info_groups(rho, &d, &[0], &[1])?)
}

/// `I(B:C|A′)` by the chain rule as `I(C:A′B) − I(C:A′)`; `B` enters only
/// the first term, so a channel on `B` cannot increase it.
pub fn cond_mutual_info_via_c(rho: &QOperator, dims: TriDims) -> Result<f64> {
    check_tripartite(rho, dims)?;
    let d = dims.as_array();
    Ok(mutual_info_groups(rho, &d, &[2], &[0, 1])? - mutual_info_groups(rho, &d, &[2], &[0])?)
}

/// `I(A′:BC) − I(A′:C)`, which the chain rule identifies with `I(A′:B|C)`.
/// It differs from `I(B:C|A′)` in general: with `C` trivial it is `I(A′:B)`.
pub fn cond_mutual_info_ab_given_c(rho: &QOperator, dims: TriDims) -> Result<f64> {
    check_tripartite(rho, dims)?;
    let d = dims.as_array();
    Ok(mutual_info_groups(rho, &d, &[0], &[1, 2])? - mutual_info_groups(rho, &d, &[0], &[2])?)
}

/// `(Λ_A ⊗ id_B)(ρ)` as a bipartite state on `A′ ⊗ B`.
pub fn apply_on_a(state: &BipartiteState, ch: &Channel) -> Result<BipartiteState> {
    let dims = state.dims();
    let out = ch.embed(dims, Subsystem::A)?.apply(state.rho())?;
    BipartiteState::new(out.hermitian_part(), crate::qmat::DimPair::new(ch.d_out(), dims.d_b))
}

/// `(id_A ⊗ Λ_B)(ρ)` as a bipartite state on `A ⊗ B′`.
pub fn apply_on_b(state: &BipartiteState, ch: &Channel) -> Result<BipartiteState> {
    let dims = state.dims();
    let out = ch.embed(dims, Subsystem::B)?.apply(state.rho())?;
    BipartiteState::new(out.hermitian_part(), crate::qmat::DimPair::new(dims.d_a, ch.d_out()))
}

/// `I(A:B)_ρ − I(A:B)_{Λ_A(ρ)}`.
pub fn info_loss(state: &BipartiteState, ch_on_a: &Channel) -> Result<f64> {
    if ch_on_a.d_in() != state.dims().d_a {
        return Err(Error::DimensionMismatch { expected: state.dims().d_a, found: ch_on_a.d_in() });
    }
    Ok(mutual_info(state)? - mutual_info(&apply_on_a(state, ch_on_a)?)?)
}

/// `ρ_{A′BC} = (V ⊗ I_B) ρ_AB (V ⊗ I_B)†` with `V` the Stinespring isometry of
/// `ch_on_a`, regrouped as `A′ ⊗ B ⊗ C`.
pub fn dilate_on_a(state: &BipartiteState, ch_on_a: &Channel) -> Result<(QOperator, TriDims)> {
    let dims = state.dims();
    if ch_on_a.d_in() != dims.d_a {
        return Err(Error::DimensionMismatch { expected: dims.d_a, found: ch_on_a.d_in() });
    }
    let v = ch_on_a.stinespring();
    let r = ch_on_a.kraus().len();
    let w = v.tensor(&QOperator::identity(dims.d_b));
    let joint = state.rho().conjugate_by(&w);
    let regrouped = joint.permute_subsystems(&[ch_on_a.d_out(), r, dims.d_b], &[0, 2, 1])?;
    Ok((regrouped, TriDims { d_a: ch_on_a.d_out(), d_b: dims.d_b, d_c: r }))
}

/// `Tr_A[(M ⊗ I) ρ]` for rank-one `M = |v⟩⟨v|`, i.e. `(⟨v| ⊗ I) ρ (|v⟩ ⊗ I)`.
pub(crate) fn a_sandwich(rho: &DMatrix<Complex64>, d_a: usize, d_b: usize, v: &[Complex64]) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(d_b, d_b);
    for a in 0..d_a {
        let ca = v[a].conj();
        if ca == Complex64::new(0.0, 0.0) {
            continue;
        }
        for a2 in 0..d_a {
            let w = ca * v[a2];
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..d_b {
                for b2 in 0..d_b {
                    out[(b, b2)] += w * rho[(a * d_b + b, a2 * d_b + b2)];
                }
            }
        }
    }
    out
}

/// `p S(B/p) = −Σ λ log₂ λ + p log₂ p` for an unnormalized positive block `B`
/// with trace `p`; zero when `p` vanishes.
pub(crate) fn weighted_block_entropy(block: &DMatrix<Complex64>) -> f64 {
    let op = QOperator::from_matrix(block.clone()).hermitian_part();
    let values = op.eigenvalues_hermitian().unwrap_or_else(|_| vec![0.0; block.nrows()]);
    let p: f64 = values.iter().filter(|&&l| l > 0.0).sum();
    if p <= 0.0 {
        return 0.0;
    }
    entropy_of_spectrum(&values) + p * p.log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{completely_depolarizing, identity_channel, random_channel};
    use crate::qmat::{basis_ket, DimPair};
    use crate::random::{hs_density, rng_from_seed};
    use crate::states::{bell_state, example_cc_state, random_state};
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(vn_entropy(bell_state().rho()).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vn_entropy(&QOperator::identity(2).scale(0.5)).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(vn_entropy(&QOperator::identity(4).scale(0.25)).unwrap(), 2.0, epsilon = 1e-14);
        assert!(vn_entropy(&QOperator::from_real_diagonal(&[1.5, -0.5])).is_err());
    }

    #[test]
    fn mutual_info_examples() {
        let a = hs_density(2, &mut rng_from_seed(1));
        let b = hs_density(3, &mut rng_from_seed(2));
        let prod = BipartiteState::new(a.tensor(&b), DimPair::new(2, 3)).unwrap();
        assert_abs_diff_eq!(mutual_info(&prod).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mutual_info(&bell_state()).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mutual_info(&example_cc_state()).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn cmi_of_product_vanishes() {
        let mut rng = rng_from_seed(3);
        let (a, b, c) = (hs_density(2, &mut rng), hs_density(2, &mut rng), hs_density(3, &mut rng));
        let rho = a.tensor(&b).tensor(&c);
        let dims = TriDims { d_a: 2, d_b: 2, d_c: 3 };
        assert_abs_diff_eq!(cond_mutual_info(&rho, dims).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn cmi_of_markov_chain_vanishes() {
        // B – A′ – C: C copies the classical A′ register, B depends on A′ only.
        let mut rng = rng_from_seed(4);
        let probs = [0.3, 0.7];
        let mut rho = QOperator::zeros(12, 12);
        for (i, p) in probs.iter().enumerate() {
            let a = QOperator::projector(&basis_ket(2, i));
            let c = QOperator::projector(&basis_ket(3, i));
            let b = hs_density(2, &mut rng);
            rho = rho + a.tensor(&b).tensor(&c).scale(*p);
        }
        let dims = TriDims { d_a: 2, d_b: 2, d_c: 3 };
        assert_abs_diff_eq!(cond_mutual_info(&rho, dims).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn cmi_of_classical_ghz_vanishes() {
        let rho = QOperator::from_real_diagonal(&[0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
        let dims = TriDims { d_a: 2, d_b: 2, d_c: 2 };
        // I(A′C:B) = 1 + 1 − 1 and I(A′:B) = 1 + 1 − 1: once A′ is known
        // nothing is left for B and C to share.
        assert_abs_diff_eq!(cond_mutual_info(&rho, dims).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn cmi_rejects_bad_dims() {
        let dims = TriDims { d_a: 2, d_b: 2, d_c: 2 };
        assert!(matches!(
            cond_mutual_info(&QOperator::identity(4).scale(0.25), dims),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn info_loss_edge_channels() {
        let s = random_state(2, 2, 5);
        assert_abs_diff_eq!(info_loss(&s, &identity_channel(2)).unwrap(), 0.0, epsilon = 1e-12);
        let full = mutual_info(&s).unwrap();
        assert_abs_diff_eq!(info_loss(&s, &completely_depolarizing(2)).unwrap(), full, epsilon = 1e-12);
        assert!(info_loss(&s, &identity_channel(3)).is_err());
    }

    #[test]
    fn dilation_reduces_to_channel_output() {
        let s = random_state(2, 2, 6);
        let ch = random_channel(2, 3, 2, 7);
        let (tri, dims) = dilate_on_a(&s, &ch).unwrap();
        let reduced = tri.reduce(&dims.as_array(), &[0, 1]).unwrap();
        let direct = apply_on_a(&s, &ch).unwrap();
        assert!(reduced.max_abs_diff(direct.rho()) < 1e-13);
    }

    #[test]
    fn kraus_sum_route_matches_permuted_isometry() {
        // Σᵢⱼ (Kᵢ ⊗ I) ρ (Kⱼ ⊗ I)† ⊗ |i⟩⟨j| is already ordered A′ ⊗ B ⊗ C.
        let s = random_state(2, 2, 8);
        let ch = random_channel(2, 2, 3, 9);
        let (tri, dims) = dilate_on_a(&s, &ch).unwrap();
        let r = ch.kraus().len();
        let id_b = QOperator::identity(2);
        let mut expected = QOperator::zeros(tri.rows(), tri.cols());
        for i in 0..r {
            for j in 0..r {
                let ki = ch.kraus()[i].tensor(&id_b);
                let kj = ch.kraus()[j].tensor(&id_b);
                let block = &(&ki * s.rho()) * &kj.adjoint();
                let eij = QOperator::from_fn(r, r, |a, b| {
                    if a == i && b == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                expected = expected + block.tensor(&eij);
            }
        }
        assert_eq!(dims, TriDims { d_a: 2, d_b: 2, d_c: r });
        assert!(tri.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn block_entropy_matches_normalized_form() {
        let b = hs_density(3, &mut rng_from_seed(10)).scale(0.4);
        let lhs = weighted_block_entropy(b.matrix());
        let rhs = 0.4 * vn_entropy(&b.scale(1.0 / 0.4)).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-13);
        assert_eq!(weighted_block_entropy(&DMatrix::zeros(2, 2)), 0.0);
    }
}
