//! Dense complex linear algebra for small quantum systems.
//!
//! Tensor products use lexicographic ordering: for a pair of factors the joint
//! index is `i_A * d_B + i_B`, and the same convention extends to any number of
//! factors. Every reduction and permutation below follows it.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for Hermiticity, trace and positivity checks.
pub const DENSITY_TOL: f64 = 1e-10;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// Dense complex matrix.
///
/// States and observables are square; Kraus operators and isometries use the
/// same carrier with `rows != cols`.
#[derive(Clone, Debug, PartialEq)]
pub struct QOperator(DMatrix<Complex64>);

/// Subsystem dimensions of a bipartite operator on `A ⊗ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimPair {
    pub d_a: usize,
    pub d_b: usize,
}

impl DimPair {
    pub fn new(d_a: usize, d_b: usize) -> Self {
        Self { d_a, d_b }
    }

    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn as_array(&self) -> [usize; 2] {
        [self.d_a, self.d_b]
    }
}

impl fmt::Display for DimPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.d_a, self.d_b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Spectral decomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: QOperator,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> QOperator {
        let v = self.vectors.matrix();
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        QOperator(v * d * v.adjoint())
    }
}

/// A single failed density-matrix check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Violation {
    NotSquare { rows: usize, cols: usize },
    Hermiticity { deviation: f64 },
    Trace { deviation: f64 },
    Positivity { magnitude: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityViolation {
    pub violations: Vec<Violation>,
}

impl DensityViolation {
    pub fn positivity(&self) -> Option<f64> {
        self.violations.iter().find_map(|v| match v {
            Violation::Positivity { magnitude } => Some(*magnitude),
            _ => None,
        })
    }

    pub fn trace(&self) -> Option<f64> {
        self.violations.iter().find_map(|v| match v {
            Violation::Trace { deviation } => Some(*deviation),
            _ => None,
        })
    }

    pub fn hermiticity(&self) -> Option<f64> {
        self.violations.iter().find_map(|v| match v {
            Violation::Hermiticity { deviation } => Some(*deviation),
            _ => None,
        })
    }
}

impl fmt::Display for DensityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v {
                Violation::NotSquare { rows, cols } => format!("not square ({rows}x{cols})"),
                Violation::Hermiticity { deviation } => {
                    format!("Hermiticity off by {deviation:.3e}")
                }
                Violation::Trace { deviation } => format!("trace off by {deviation:.3e}"),
                Violation::Positivity { magnitude } => {
                    format!("negative eigenvalue of magnitude {magnitude:.3e}")
                }
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

impl QOperator {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex64]) -> Self {
        Self(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    /// `|v⟩⟨v|` for an arbitrary (not necessarily normalized) vector.
    pub fn projector(v: &DVector<Complex64>) -> Self {
        Self(v * v.adjoint())
    }

    /// Column operator `|v⟩` of shape `len × 1`.
    pub fn ket(v: &DVector<Complex64>) -> Self {
        Self(DMatrix::from_column_slice(v.len(), 1, v.as_slice()))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Side length of a square operator.
    pub fn dim(&self) -> usize {
        self.rows()
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare { rows: self.rows(), cols: self.cols() })
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &QOperator) -> QOperator {
        Self(self.0.kronecker(&other.0))
    }

    /// `X ↦ U X U†`.
    pub fn conjugate_by(&self, u: &QOperator) -> QOperator {
        Self(&u.0 * &self.0 * u.0.adjoint())
    }

    /// Hilbert-Schmidt norm `sqrt(Tr X†X)`.
    pub fn hs_norm(&self) -> f64 {
        self.hs_norm_sq().sqrt()
    }

    pub fn hs_norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `‖X − X†‖₂`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.0 - self.0.adjoint()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_part(&self) -> QOperator {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Reduced operator on subsystem `keep` of a bipartite operator.
    pub fn partial_trace(&self, dims: DimPair, keep: Subsystem) -> Result<QOperator> {
        let keep_idx = match keep {
            Subsystem::A => [0],
            Subsystem::B => [1],
        };
        self.reduce(&dims.as_array(), &keep_idx)
    }

    /// Traces out every factor not listed in `keep`.
    ///
    /// `keep` must be strictly increasing; the kept factors stay in their
    /// original order. An empty `keep` returns the full trace as a 1×1 operator.
    pub fn reduce(&self, dims: &[usize], keep: &[usize]) -> Result<QOperator> {
        let n = self.require_square()?;
        let total: usize = dims.iter().product();
        if total != n {
            return Err(Error::DimensionMismatch { expected: total, found: n });
        }
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(keep.iter().all(|&k| k < dims.len()));

        let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
        let strides = strides(dims);
        let keep_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
        let d_keep: usize = keep_dims.iter().product();
        let d_traced: usize = traced_dims.iter().product();

        // Offsets into the full index space for each kept / traced multi-index.
        let keep_offsets = offsets(&keep_dims, keep, &strides);
        let traced_offsets = offsets(&traced_dims, &traced, &strides);

        let mut out = DMatrix::zeros(d_keep, d_keep);
        for (r, &ro) in keep_offsets.iter().enumerate() {
            for (c, &co) in keep_offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for &t in traced_offsets.iter().take(d_traced) {
                    acc += self.0[(ro + t, co + t)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(Self(out))
    }

    /// Reorders tensor factors: factor `k` of the result is factor `perm[k]` of
    /// the input.
    pub fn permute_subsystems(&self, dims: &[usize], perm: &[usize]) -> Result<QOperator> {
        let n = self.require_square()?;
        let total: usize = dims.iter().product();
        if total != n {
            return Err(Error::DimensionMismatch { expected: total, found: n });
        }
        assert_eq!(perm.len(), dims.len(), "permutation length must match factor count");
        let in_strides = strides(dims);
        let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
        // Position in the input index of each output factor.
        let mapped_strides: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();
        let map: Vec<usize> = (0..n)
            .map(|idx| {
                let mut rem = idx;
                let mut src = 0;
                for k in (0..out_dims.len()).rev() {
                    src += (rem % out_dims[k]) * mapped_strides[k];
                    rem /= out_dims[k];
                }
                src
            })
            .collect();
        Ok(Self::from_fn(n, n, |i, j| self.0[(map[i], map[j])]))
    }

    /// Spectral decomposition of a Hermitian operator.
    ///
    /// The input is symmetrized before diagonalization; operators whose
    /// anti-Hermitian part exceeds [`DENSITY_TOL`] are rejected.
    pub fn eig_hermitian(&self) -> Result<HermitianEigen> {
        self.require_square()?;
        let dev = self.hermitian_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let h = self.hermitian_part().0;
        let eig = SymmetricEigen::try_new(h, EIG_EPS, EIG_MAX_ITER).ok_or(Error::EigenNoConvergence)?;
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.rows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(HermitianEigen { values, vectors: Self(vectors) })
    }

    /// Eigenvalues of a Hermitian operator, ascending. Closed form for 1×1 and 2×2.
    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        match (self.rows(), self.cols()) {
            (1, 1) => Ok(vec![self.0[(0, 0)].re]),
            (2, 2) => {
                let dev = self.hermitian_deviation();
                if dev > DENSITY_TOL {
                    return Err(Error::NotHermitian { deviation: dev });
                }
                Ok(hermitian_2x2_eigenvalues(
                    self.0[(0, 0)].re,
                    self.0[(1, 1)].re,
                    (self.0[(0, 1)] + self.0[(1, 0)].conj()) * 0.5,
                )
                .to_vec())
            }
            _ => Ok(self.eig_hermitian()?.values),
        }
    }

    /// Checks Hermiticity, unit trace and positivity at [`DENSITY_TOL`].
    pub fn validate_density(&self) -> std::result::Result<(), DensityViolation> {
        if !self.is_square() {
            return Err(DensityViolation {
                violations: vec![Violation::NotSquare { rows: self.rows(), cols: self.cols() }],
            });
        }
        let mut violations = Vec::new();
        let herm = self.hermitian_deviation();
        if herm > DENSITY_TOL {
            violations.push(Violation::Hermiticity { deviation: herm });
        }
        let tr = self.trace();
        let tr_dev = ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt();
        if tr_dev > DENSITY_TOL {
            violations.push(Violation::Trace { deviation: tr_dev });
        }
        // Positivity is judged on the Hermitian part so a Hermiticity failure
        // does not mask it.
        match self.hermitian_part().eigenvalues_hermitian() {
            Ok(values) => {
                let min = values.first().copied().unwrap_or(0.0);
                if min < -DENSITY_TOL {
                    violations.push(Violation::Positivity { magnitude: -min });
                }
            }
            Err(_) => violations.push(Violation::Positivity { magnitude: f64::NAN }),
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(DensityViolation { violations })
        }
    }

    /// Purity `Tr ρ²` of a valid density matrix.
    pub fn purity(&self) -> Result<f64> {
        self.validate_density().map_err(Error::InvalidDensity)?;
        Ok(self.hs_norm_sq())
    }

    /// Gram deviation `‖V†V − I‖₂` of the columns.
    pub fn isometry_deviation(&self) -> f64 {
        let g = self.0.adjoint() * &self.0;
        (g - DMatrix::<Complex64>::identity(self.cols(), self.cols())).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Function of a Hermitian operator applied through its spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<QOperator> {
        let eig = self.eig_hermitian()?;
        let mapped: Vec<f64> = eig.values.iter().map(|&x| f(x)).collect();
        Ok(HermitianEigen { values: mapped, vectors: eig.vectors }.reconstruct())
    }

    pub fn max_abs_diff(&self, other: &QOperator) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Eigenvalues `(min, max)` of `[[a, b], [b̄, d]]`.
pub(crate) fn hermitian_2x2_eigenvalues(a: f64, d: f64, b: Complex64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = (half * half + b.norm_sqr()).sqrt();
    [mean - r, mean + r]
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn offsets(sub_dims: &[usize], factors: &[usize], strides: &[usize]) -> Vec<usize> {
    let n: usize = sub_dims.iter().product();
    (0..n)
        .map(|idx| {
            let mut rem = idx;
            let mut off = 0;
            for k in (0..sub_dims.len()).rev() {
                off += (rem % sub_dims[k]) * strides[factors[k]];
                rem /= sub_dims[k];
            }
            off
        })
        .collect()
}

impl Add for &QOperator {
    type Output = QOperator;
    fn add(self, rhs: &QOperator) -> QOperator {
        QOperator(&self.0 + &rhs.0)
    }
}

impl Sub for &QOperator {
    type Output = QOperator;
    fn sub(self, rhs: &QOperator) -> QOperator {
        QOperator(&self.0 - &rhs.0)
    }
}

impl Mul for &QOperator {
    type Output = QOperator;
    fn mul(self, rhs: &QOperator) -> QOperator {
        QOperator(&self.0 * &rhs.0)
    }
}

impl Add for QOperator {
    type Output = QOperator;
    fn add(self, rhs: QOperator) -> QOperator {
        QOperator(self.0 + rhs.0)
    }
}

impl Sub for QOperator {
    type Output = QOperator;
    fn sub(self, rhs: QOperator) -> QOperator {
        QOperator(self.0 - rhs.0)
    }
}

impl Mul for QOperator {
    type Output = QOperator;
    fn mul(self, rhs: QOperator) -> QOperator {
        QOperator(self.0 * rhs.0)
    }
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Computational basis ket `|i⟩` in dimension `dim`.
pub fn basis_ket(dim: usize, i: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    v[i] = c64(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::random::complex_ginibre;

    fn plus() -> DVector<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DVector::from_vec(vec![c64(s, 0.0), c64(s, 0.0)])
    }

    #[test]
    fn identity_tensor_identity() {
        let i4 = QOperator::identity(2).tensor(&QOperator::identity(2));
        assert_eq!(i4, QOperator::identity(4));
    }

    #[test]
    fn tensor_of_basis_projectors_is_lexicographic() {
        let p0 = QOperator::projector(&basis_ket(2, 0));
        let p1 = QOperator::projector(&basis_ket(2, 1));
        assert_eq!(p0.tensor(&p1), QOperator::from_real_diagonal(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn tensor_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = QOperator::from_matrix(complex_ginibre(2, 2, &mut rng));
        let y = QOperator::from_matrix(complex_ginibre(2, 2, &mut rng));
        let x2 = QOperator::from_matrix(complex_ginibre(2, 2, &mut rng));
        let y2 = QOperator::from_matrix(complex_ginibre(2, 2, &mut rng));
        let lhs = &x.tensor(&y) * &x2.tensor(&y2);
        let rhs = (&x * &x2).tensor(&(&y * &y2));
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        assert_abs_diff_eq!(x.tensor(&y).hs_norm(), x.hs_norm() * y.hs_norm(), epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = DVector::from_vec(vec![c64(s, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(s, 0.0)]);
        let bell = QOperator::projector(&phi);
        let dims = DimPair::new(2, 2);
        for keep in [Subsystem::A, Subsystem::B] {
            let r = bell.partial_trace(dims, keep).unwrap();
            assert!(r.max_abs_diff(&QOperator::identity(2).scale(0.5)) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = QOperator::from_matrix(complex_ginibre(2, 2, &mut rng));
        let b = QOperator::from_matrix(complex_ginibre(3, 3, &mut rng));
        let ab = a.tensor(&b);
        let dims = DimPair::new(2, 3);
        let ra = ab.partial_trace(dims, Subsystem::A).unwrap();
        assert!(ra.max_abs_diff(&a.scale_complex(b.trace())) < 1e-12);
        let rb = ab.partial_trace(dims, Subsystem::B).unwrap();
        assert!(rb.max_abs_diff(&b.scale_complex(a.trace())) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let x = QOperator::identity(4);
        assert!(matches!(
            x.partial_trace(DimPair::new(2, 3), Subsystem::A),
            Err(Error::DimensionMismatch { expected: 6, found: 4 })
        ));
    }

    #[test]
    fn full_reduction_is_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = QOperator::from_matrix(complex_ginibre(6, 6, &mut rng));
        let dims = DimPair::new(2, 3);
        let a = x.partial_trace(dims, Subsystem::A).unwrap();
        let scalar = a.reduce(&[2], &[]).unwrap();
        assert_eq!(scalar.rows(), 1);
        assert!((scalar.entry(0, 0) - x.trace()).norm() < 1e-12);
    }

    #[test]
    fn permutation_swaps_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = QOperator::from_matrix(complex_ginibre(2, 2, &mut rng));
        let b = QOperator::from_matrix(complex_ginibre(3, 3, &mut rng));
        let c = QOperator::from_matrix(complex_ginibre(2, 2, &mut rng));
        let abc = a.tensor(&b).tensor(&c);
        let cab = abc.permute_subsystems(&[2, 3, 2], &[2, 0, 1]).unwrap();
        assert!(cab.max_abs_diff(&c.tensor(&a).tensor(&b)) < 1e-12);
    }

    #[test]
    fn hs_norm_examples() {
        assert_abs_diff_eq!(QOperator::identity(5).hs_norm(), 5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(QOperator::projector(&plus()).hs_norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn eig_of_diagonal_and_plus() {
        let e = QOperator::from_real_diagonal(&[0.75, 0.25]).eig_hermitian().unwrap();
        assert_abs_diff_eq!(e.values[0], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(e.values[1], 0.75, epsilon = 1e-15);

        let e = QOperator::projector(&plus()).eig_hermitian().unwrap();
        assert_abs_diff_eq!(e.values[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-15);
        let v = e.vectors.matrix().column(1);
        // Up to a global phase the top eigenvector is |+⟩.
        let overlap = (v.adjoint() * plus())[(0, 0)].norm();
        assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let g = QOperator::from_matrix(complex_ginibre(8, 8, &mut rng));
            let h = (&g + &g.adjoint()).scale(0.5);
            let e = h.eig_hermitian().unwrap();
            assert!((&h - &e.reconstruct()).hs_norm() < 1e-10 * 8.0);
            assert!(e.vectors.isometry_deviation() < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let x = QOperator::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        assert!(matches!(x.eig_hermitian(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_handles_degenerate_spectra() {
        for d in [1, 2, 3, 7] {
            let e = QOperator::identity(d).eig_hermitian().unwrap();
            assert!(e.values.iter().all(|&x| (x - 1.0).abs() < 1e-15));
            let z = QOperator::zeros(d, d).eig_hermitian().unwrap();
            assert!(z.values.iter().all(|&x| x.abs() < 1e-15));
        }
    }

    #[test]
    fn two_by_two_closed_form_matches_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let g = QOperator::from_matrix(complex_ginibre(2, 2, &mut rng));
            let h = (&g + &g.adjoint()).scale(0.5);
            let fast = h.eigenvalues_hermitian().unwrap();
            let slow = h.eig_hermitian().unwrap().values;
            assert_abs_diff_eq!(fast[0], slow[0], epsilon = 1e-12);
            assert_abs_diff_eq!(fast[1], slow[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn purity_examples() {
        assert_abs_diff_eq!(QOperator::identity(2).scale(0.5).purity().unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(QOperator::projector(&plus()).purity().unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(QOperator::from_real_diagonal(&[0.9, 0.1]).purity().unwrap(), 0.82, epsilon = 1e-15);
    }

    #[test]
    fn validate_density_reports_each_failure() {
        assert!(QOperator::identity(2).scale(0.5).validate_density().is_ok());

        let v = QOperator::from_real_diagonal(&[1.5, -0.5]).validate_density().unwrap_err();
        assert_abs_diff_eq!(v.positivity().unwrap(), 0.5, epsilon = 1e-15);
        assert!(v.trace().is_none());

        let v = QOperator::from_real_diagonal(&[0.6, 0.6]).validate_density().unwrap_err();
        assert_abs_diff_eq!(v.trace().unwrap(), 0.2, epsilon = 1e-15);
        assert!(v.positivity().is_none());

        let x = QOperator::from_row_slice(2, 2, &[c64(0.5, 0.0), c64(0.3, 0.0), c64(0.0, 0.0), c64(0.5, 0.0)]);
        assert!(x.validate_density().unwrap_err().hermiticity().is_some());
        assert!(QOperator::from_real_diagonal(&[1.5, -0.5]).purity().is_err());
    }
}
