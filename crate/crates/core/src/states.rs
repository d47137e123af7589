//! Bipartite states on `A ⊗ B`, with `A` the measured (first) factor.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encoding::{decode_entries, encode_entries, Entries};
use crate::error::{Error, Result};
use crate::qmat::{basis_ket, c64, DimPair, QOperator, Subsystem, DENSITY_TOL};
use crate::random::{dirichlet_uniform, haar_unitary, hs_density, rng_from_seed};

const SIMPLEX_TOL: f64 = 1e-12;

/// Validated density matrix on `A ⊗ B`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    rho: QOperator,
    dims: DimPair,
}

impl BipartiteState {
    pub fn new(rho: QOperator, dims: DimPair) -> Result<Self> {
        let n = rho.require_square()?;
        if n != dims.total() {
            return Err(Error::DimensionMismatch { expected: dims.total(), found: n });
        }
        rho.validate_density().map_err(Error::InvalidDensity)?;
        Ok(Self { rho, dims })
    }

    pub fn rho(&self) -> &QOperator {
        &self.rho
    }

    pub fn dims(&self) -> DimPair {
        self.dims
    }

    pub fn into_parts(self) -> (QOperator, DimPair) {
        (self.rho, self.dims)
    }

    pub fn reduced(&self, keep: Subsystem) -> QOperator {
        self.rho.partial_trace(self.dims, keep).expect("dimensions checked at construction")
    }

    /// `ρ_AB ⊗ σ`, with the ancilla grouped into `B`: dims `(d_A, d_B·d_σ)`.
    pub fn with_ancilla(&self, sigma: &QOperator) -> Result<Self> {
        let d = sigma.require_square()?;
        Self::new(self.rho.tensor(sigma), DimPair::new(self.dims.d_a, self.dims.d_b * d))
    }

    pub fn to_file(&self) -> StateFile {
        StateFile { d_a: self.dims.d_a, d_b: self.dims.d_b, entries: encode_entries(&self.rho) }
    }

    pub fn from_file(file: &StateFile) -> Result<Self> {
        if file.d_a == 0 || file.d_b == 0 {
            return Err(Error::Encoding("subsystem dimensions must be positive".into()));
        }
        let n = file.d_a * file.d_b;
        let rho = decode_entries(n, n, &file.entries)?;
        Self::new(rho, DimPair::new(file.d_a, file.d_b))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("state file serializes")
    }

    /// Parses the JSON state format. Malformed documents give
    /// [`Error::Encoding`]; well-formed but unphysical ones give the
    /// validation error.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(s).map_err(|e| Error::Encoding(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// JSON layout `{d_A, d_B, entries: [[re, im], ...]}`, entries row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(rename = "d_A")]
    pub d_a: usize,
    #[serde(rename = "d_B")]
    pub d_b: usize,
    pub entries: Entries,
}

/// Data for `Σᵢ pᵢ |i⟩⟨i| ⊗ ρᵢ`.
#[derive(Clone, Debug)]
pub struct CQSpec {
    pub probs: Vec<f64>,
    /// Orthonormal states of `A`; fewer than `d_A` are allowed.
    pub basis: Vec<DVector<Complex64>>,
    pub blocks: Vec<QOperator>,
}

impl CQSpec {
    pub fn validate(&self) -> Result<DimPair> {
        let n = self.probs.len();
        if n == 0 || self.basis.len() != n || self.blocks.len() != n {
            return Err(Error::InvalidProbabilities(format!(
                "{} probabilities, {} basis states and {} blocks",
                n,
                self.basis.len(),
                self.blocks.len()
            )));
        }
        if let Some(p) = self.probs.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidProbabilities(format!("entry {p} outside [0, 1]")));
        }
        let total: f64 = self.probs.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidProbabilities(format!("sum is {total}")));
        }

        let d_a = self.basis[0].len();
        if let Some(v) = self.basis.iter().find(|v| v.len() != d_a) {
            return Err(Error::DimensionMismatch { expected: d_a, found: v.len() });
        }
        let mut gram_dev = 0.0;
        for (i, u) in self.basis.iter().enumerate() {
            for (j, v) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                gram_dev += (u.dotc(v) - c64(target, 0.0)).norm_sqr();
            }
        }
        let gram_dev = gram_dev.sqrt();
        if gram_dev > DENSITY_TOL {
            return Err(Error::NotOrthonormal { deviation: gram_dev });
        }

        let d_b = self.blocks[0].rows();
        for b in &self.blocks {
            if b.rows() != d_b {
                return Err(Error::DimensionMismatch { expected: d_b, found: b.rows() });
            }
            b.validate_density().map_err(Error::InvalidDensity)?;
        }
        Ok(DimPair::new(d_a, d_b))
    }
}

/// Classical-quantum state `Σᵢ pᵢ |i⟩⟨i| ⊗ ρᵢ`.
pub fn cq_state(spec: &CQSpec) -> Result<BipartiteState> {
    let dims = spec.validate()?;
    let mut rho = QOperator::zeros(dims.total(), dims.total());
    for ((p, v), block) in spec.probs.iter().zip(&spec.basis).zip(&spec.blocks) {
        rho = rho + QOperator::projector(v).tensor(block).scale(*p);
    }
    BipartiteState::new(rho.hermitian_part(), dims)
}

fn pure_projector(v: &[Complex64]) -> QOperator {
    QOperator::projector(&DVector::from_column_slice(v))
}

fn plus_ket() -> DVector<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DVector::from_vec(vec![c64(s, 0.0), c64(s, 0.0)])
}

/// `(|0⟩⟨0| ⊗ |0⟩⟨0| + |1⟩⟨1| ⊗ |1⟩⟨1|) / 2`.
pub fn example_cc_state() -> BipartiteState {
    BipartiteState::new(QOperator::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]), DimPair::new(2, 2)).expect("valid state")
}

/// `(|0⟩⟨0| ⊗ |0⟩⟨0| + |+⟩⟨+| ⊗ |1⟩⟨1|) / 2`.
pub fn example_post_channel_state() -> BipartiteState {
    let p0 = QOperator::projector(&basis_ket(2, 0));
    let p1 = QOperator::projector(&basis_ket(2, 1));
    let pp = QOperator::projector(&plus_ket());
    let rho = (p0.tensor(&p0) + pp.tensor(&p1)).scale(0.5);
    BipartiteState::new(rho, DimPair::new(2, 2)).expect("valid state")
}

/// `|Φ⁺⟩⟨Φ⁺|` with `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell_state() -> BipartiteState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = c64(0.0, 0.0);
    let rho = pure_projector(&[c64(s, 0.0), z, z, c64(s, 0.0)]);
    BipartiteState::new(rho, DimPair::new(2, 2)).expect("valid state")
}

/// Hilbert-Schmidt-ensemble sample on `d_A ⊗ d_B`, deterministic in `seed`.
pub fn random_state(d_a: usize, d_b: usize, seed: u64) -> BipartiteState {
    assert!(d_a >= 1 && d_b >= 1, "dimensions must be positive");
    let mut rng = rng_from_seed(seed);
    BipartiteState::new(hs_density(d_a * d_b, &mut rng), DimPair::new(d_a, d_b)).expect("HS sample is a valid state")
}

/// Random classical-quantum state: Haar basis on `A`, Dirichlet(1) weights,
/// Hilbert-Schmidt blocks on `B`.
pub fn random_cq_spec(d_a: usize, d_b: usize, seed: u64) -> CQSpec {
    let mut rng = rng_from_seed(seed);
    let u = haar_unitary(d_a, &mut rng);
    let basis = (0..d_a).map(|i| u.matrix().column(i).into_owned()).collect();
    let probs = dirichlet_uniform(d_a, &mut rng);
    let blocks = (0..d_a).map(|_| hs_density(d_b, &mut rng)).collect();
    CQSpec { probs, basis, blocks }
}

pub fn random_cq_state(d_a: usize, d_b: usize, seed: u64) -> BipartiteState {
    cq_state(&random_cq_spec(d_a, d_b, seed)).expect("random CQ spec is valid")
}
