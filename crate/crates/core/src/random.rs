//! Random ensembles: complex Ginibre matrices, Haar isometries, Dirichlet
//! weights and Hilbert-Schmidt density matrices.
//!
//! Everything takes an explicit RNG; callers derive one per task with
//! [`rng_from_seed`] and [`trial_seed`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::qmat::QOperator;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic per-trial seed derived from a master seed (splitmix64 mixing).
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Matrix of independent standard complex Gaussians.
pub fn complex_ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// Haar-distributed isometry with `cols <= rows` orthonormal columns.
///
/// Gram-Schmidt on a Ginibre matrix is the QR factorization with a positive
/// real `R` diagonal, which is the phase fixing that makes `Q` Haar.
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> QOperator {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let mut m = complex_ginibre(rows, cols, rng);
    orthonormalize_columns(&mut m);
    QOperator::from_matrix(m)
}

pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> QOperator {
    haar_isometry(dim, dim, rng)
}

/// Modified Gram-Schmidt, applied twice for numerical orthogonality.
pub(crate) fn orthonormalize_columns(m: &mut DMatrix<Complex64>) {
    for _pass in 0..2 {
        for j in 0..m.ncols() {
            for k in 0..j {
                let proj = m.column(k).dotc(&m.column(j));
                let qk = m.column(k).into_owned();
                let mut cj = m.column_mut(j);
                cj.axpy(-proj, &qk, Complex64::new(1.0, 0.0));
            }
            let norm = m.column(j).norm();
            m.column_mut(j).unscale_mut(norm);
        }
    }
}

/// Uniform sample from the probability simplex, i.e. Dirichlet(1, ..., 1).
pub fn dirichlet_uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Hilbert-Schmidt ensemble: `G G† / Tr(G G†)` with square Ginibre `G`.
pub fn hs_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> QOperator {
    let g = complex_ginibre(dim, dim, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    QOperator::from_matrix(w.unscale(tr)).hermitian_part()
}
