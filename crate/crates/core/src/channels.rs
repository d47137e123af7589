//! CPTP maps in Kraus form, measurement channels and dilations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encoding::{decode_entries, encode_entries, Entries};
use crate::error::{Error, Result};
use crate::qmat::{basis_ket, c64, DimPair, QOperator, Subsystem, DENSITY_TOL};
use crate::random::{haar_isometry, rng_from_seed};

/// Eigenvalues at or below this are dropped when factorizing POVM elements.
const POVM_EIG_CLAMP: f64 = 1e-12;

/// Completely positive trace-preserving map `ρ ↦ Σᵢ Kᵢ ρ Kᵢ†`.
#[derive(Clone, Debug)]
pub struct Channel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<QOperator>,
    label: String,
}

impl Channel {
    /// Validates shapes and `Σ Kᵢ†Kᵢ = I` to [`DENSITY_TOL`].
    pub fn new(kraus: Vec<QOperator>, label: impl Into<String>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::Encoding("channel needs at least one Kraus operator".into()))?;
        let (d_out, d_in) = (first.rows(), first.cols());
        for k in &kraus {
            if k.rows() != d_out {
                return Err(Error::DimensionMismatch { expected: d_out, found: k.rows() });
            }
            if k.cols() != d_in {
                return Err(Error::DimensionMismatch { expected: d_in, found: k.cols() });
            }
        }
        let ch = Self { d_in, d_out, kraus, label: label.into() };
        let dev = ch.trace_preservation_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::NotTracePreserving { deviation: dev });
        }
        Ok(ch)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[QOperator] {
        &self.kraus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `‖Σ Kᵢ†Kᵢ − I‖₂`.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let mut acc = DMatrix::<Complex64>::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            acc += k.matrix().adjoint() * k.matrix();
        }
        (&QOperator::from_matrix(acc) - &QOperator::identity(self.d_in)).hs_norm()
    }

    pub fn apply(&self, rho: &QOperator) -> Result<QOperator> {
        let n = rho.require_square()?;
        if n != self.d_in {
            return Err(Error::DimensionMismatch { expected: self.d_in, found: n });
        }
        let mut out = DMatrix::<Complex64>::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k.matrix() * rho.matrix() * k.matrix().adjoint();
        }
        Ok(QOperator::from_matrix(out))
    }

    /// `self` after `first`.
    pub fn compose_after(&self, first: &Channel) -> Result<Channel> {
        if first.d_out != self.d_in {
            return Err(Error::DimensionMismatch { expected: self.d_in, found: first.d_out });
        }
        let kraus = self.kraus.iter().flat_map(|a| first.kraus.iter().map(move |b| a * b)).collect();
        Channel::new(kraus, format!("{} . {}", self.label, first.label))
    }

    /// Lifts the channel to act on one factor of a bipartite system.
    pub fn embed(&self, dims: DimPair, side: Subsystem) -> Result<Channel> {
        let position = match side {
            Subsystem::A => 0,
            Subsystem::B => 1,
        };
        self.embed_factor(&dims.as_array(), position)
    }

    /// Lifts the channel to act on factor `position` of `⊗ₖ dims[k]`, with
    /// identity on every other factor. The output keeps the factor order.
    pub fn embed_factor(&self, dims: &[usize], position: usize) -> Result<Channel> {
        assert!(position < dims.len(), "factor index out of range");
        if dims[position] != self.d_in {
            return Err(Error::DimensionMismatch { expected: self.d_in, found: dims[position] });
        }
        let left = QOperator::identity(dims[..position].iter().product());
        let right = QOperator::identity(dims[position + 1..].iter().product());
        let kraus = self.kraus.iter().map(|k| left.tensor(k).tensor(&right)).collect();
        Ok(Channel {
            d_in: dims.iter().product(),
            d_out: dims.iter().product::<usize>() / self.d_in * self.d_out,
            kraus,
            label: self.label.clone(),
        })
    }

    /// Stinespring isometry `V = Σᵢ Kᵢ ⊗ |i⟩_C` of shape `(d_out·r) × d_in`,
    /// environment `C` as the last factor.
    pub fn stinespring(&self) -> QOperator {
        let r = self.kraus.len();
        QOperator::from_fn(self.d_out * r, self.d_in, |row, col| self.kraus[row % r].entry(row / r, col))
    }

    pub fn to_file(&self) -> ChannelFile {
        ChannelFile { d_in: self.d_in, d_out: self.d_out, kraus: self.kraus.iter().map(encode_entries).collect() }
    }

    pub fn from_file(file: &ChannelFile) -> Result<Self> {
        if file.d_in == 0 || file.d_out == 0 {
            return Err(Error::Encoding("channel dimensions must be positive".into()));
        }
        let kraus = file.kraus.iter().map(|e| decode_entries(file.d_out, file.d_in, e)).collect::<Result<Vec<_>>>()?;
        Channel::new(kraus, "file")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("channel file serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(s).map_err(|e| Error::Encoding(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// JSON layout `{d_in, d_out, kraus: [entries, ...]}`; each Kraus operator is
/// `d_out × d_in`, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<Entries>,
}

pub fn identity_channel(dim: usize) -> Channel {
    Channel::new(vec![QOperator::identity(dim)], format!("identity({dim})")).expect("identity is CPTP")
}

pub fn unitary_channel(u: &QOperator) -> Result<Channel> {
    Channel::new(vec![u.clone()], "unitary")
}

/// `X ↦ Tr(X) I/d` via the `d²` Kraus operators `|i⟩⟨j|/√d`.
pub fn completely_depolarizing(dim: usize) -> Channel {
    let s = 1.0 / (dim as f64).sqrt();
    let kraus = (0..dim)
        .flat_map(|i| {
            (0..dim).map(move |j| {
                QOperator::from_fn(dim, dim, |r, c| if r == i && c == j { c64(s, 0.0) } else { c64(0.0, 0.0) })
            })
        })
        .collect();
    Channel::new(kraus, format!("depolarize({dim})")).expect("depolarizing is CPTP")
}

/// `X ↦ X ⊗ σ` on a `d_in`-dimensional input.
///
/// Kraus operators are `I ⊗ √λⱼ|vⱼ⟩` from the spectral decomposition of `σ`.
pub fn gamma_sigma(sigma: &QOperator, d_in: usize) -> Result<Channel> {
    sigma.validate_density().map_err(Error::InvalidDensity)?;
    let d_anc = sigma.dim();
    let eig = sigma.eig_hermitian()?;
    let id = QOperator::identity(d_in);
    let kraus: Vec<QOperator> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.0)
        .map(|(j, &l)| {
            let v = eig.vectors.matrix().column(j).into_owned() * c64(l.sqrt(), 0.0);
            id.tensor(&QOperator::ket(&v))
        })
        .collect();
    Channel::new(kraus, format!("attach-ancilla(d={d_anc})"))
}

/// Discards the trailing factor of `d_keep ⊗ d_discard`: Kraus `I ⊗ ⟨k|`.
pub fn discard_trailing(d_keep: usize, d_discard: usize) -> Channel {
    let id = QOperator::identity(d_keep);
    let kraus = (0..d_discard).map(|k| id.tensor(&QOperator::ket(&basis_ket(d_discard, k)).adjoint())).collect();
    Channel::new(kraus, format!("discard-ancilla(keep={d_keep},discard={d_discard})")).expect("partial trace is CPTP")
}

/// Orthonormal basis of `A` stored as the columns of a unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    vectors: QOperator,
}

impl MeasurementBasis {
    pub fn new(vectors: QOperator) -> Result<Self> {
        vectors.require_square()?;
        let dev = vectors.isometry_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::NotOrthonormal { deviation: dev });
        }
        Ok(Self { vectors })
    }

    pub fn computational(dim: usize) -> Self {
        Self { vectors: QOperator::identity(dim) }
    }

    /// Qubit basis `{|n⟩, |−n⟩}` for the Bloch direction `n(θ, φ)`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        Self { vectors: QOperator::from_matrix(bloch_unitary(theta, phi)) }
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    pub fn vectors(&self) -> &QOperator {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> DVector<Complex64> {
        self.vectors.matrix().column(i).into_owned()
    }

    pub fn projector(&self, i: usize) -> QOperator {
        QOperator::projector(&self.vector(i))
    }

    /// Bloch vector of the first basis state (qubits only).
    pub fn bloch_direction(&self) -> Option<[f64; 3]> {
        if self.dim() != 2 {
            return None;
        }
        let v = self.vector(0);
        let (a, b) = (v[0], v[1]);
        let ab = a.conj() * b;
        Some([2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()])
    }
}

pub(crate) fn bloch_unitary(theta: f64, phi: f64) -> DMatrix<Complex64> {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    DMatrix::from_row_slice(2, 2, &[c64(c, 0.0), -e.conj() * s, e * s, c64(c, 0.0)])
}

/// Positive operators summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    elements: Vec<QOperator>,
}

impl Povm {
    pub fn new(elements: Vec<QOperator>) -> Result<Self> {
        let d = elements.first().ok_or_else(|| Error::InvalidPovm("no elements".into()))?.require_square()?;
        let mut sum = QOperator::zeros(d, d);
        for (i, m) in elements.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(Error::DimensionMismatch { expected: d, found: m.rows() });
            }
            let herm = m.hermitian_deviation();
            if herm > DENSITY_TOL {
                return Err(Error::InvalidPovm(format!("element {i} not Hermitian ({herm:.3e})")));
            }
            let min = m.eigenvalues_hermitian()?[0];
            if min < -DENSITY_TOL {
                return Err(Error::InvalidPovm(format!("element {i} has eigenvalue {min:.3e}")));
            }
            sum = sum + m.clone();
        }
        let dev = (&sum - &QOperator::identity(d)).hs_norm();
        if dev > DENSITY_TOL {
            return Err(Error::InvalidPovm(format!("elements sum to identity only within {dev:.3e}")));
        }
        Ok(Self { elements })
    }

    pub fn from_basis(basis: &MeasurementBasis) -> Self {
        Self { elements: (0..basis.dim()).map(|i| basis.projector(i)).collect() }
    }

    pub fn elements(&self) -> &[QOperator] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `X ↦ Σᵢ |i⟩⟨i| X |i⟩⟨i|`.
pub fn projective_channel(basis: &MeasurementBasis) -> Channel {
    let kraus = (0..basis.dim()).map(|i| basis.projector(i)).collect();
    Channel::new(kraus, "projective").expect("orthonormal basis gives a CPTP map")
}

/// `X ↦ Σᵢ Tr(Mᵢ X) |i⟩⟨i|` with one pointer state per element.
pub fn povm_channel(povm: &Povm) -> Result<Channel> {
    let n = povm.len();
    let mut kraus = Vec::new();
    for (i, m) in povm.elements.iter().enumerate() {
        let eig = m.eig_hermitian()?;
        let pointer = QOperator::ket(&basis_ket(n, i));
        for (k, &l) in eig.values.iter().enumerate() {
            if l <= POVM_EIG_CLAMP {
                continue;
            }
            let v = eig.vectors.matrix().column(k).into_owned() * c64(l.sqrt(), 0.0);
            kraus.push(&pointer * &QOperator::ket(&v).adjoint());
        }
    }
    Channel::new(kraus, format!("povm({n})"))
}

/// `X ↦ ⟨0|X|0⟩ |0⟩⟨0| + ⟨1|X|1⟩ |+⟩⟨+|`: sends `|0⟩⟨0|` to itself and `|1⟩⟨1|`
/// to `|+⟩⟨+|`. Other CPTP completions of those two constraints exist.
pub fn measure_and_prepare_example() -> Channel {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let ket0 = QOperator::ket(&basis_ket(2, 0));
    let ket1 = QOperator::ket(&basis_ket(2, 1));
    let plus = QOperator::ket(&DVector::from_vec(vec![c64(s, 0.0), c64(s, 0.0)]));
    let kraus = vec![&ket0 * &ket0.adjoint(), &plus * &ket1.adjoint()];
    Channel::new(kraus, "measure-and-prepare(0->0, 1->+)").expect("measure-and-prepare is CPTP")
}

/// Kraus rank used when none is requested: `d_in · d_out`.
pub fn default_kraus_rank(d_in: usize, d_out: usize) -> usize {
    d_in * d_out
}

/// Channel obtained by slicing a Haar isometry `d_in → d_out·rank`.
///
/// The rank is raised to `ceil(d_in / d_out)` when smaller, the minimum for
/// which an isometry exists.
pub fn random_channel(d_in: usize, d_out: usize, kraus_rank: usize, seed: u64) -> Channel {
    assert!(d_in >= 1 && d_out >= 1 && kraus_rank >= 1, "dimensions and rank must be positive");
    let rank = kraus_rank.max(d_in.div_ceil(d_out));
    let mut rng = rng_from_seed(seed);
    let v = haar_isometry(d_out * rank, d_in, &mut rng);
    let kraus = (0..rank).map(|i| QOperator::from_fn(d_out, d_in, |o, c| v.entry(o * rank + i, c))).collect();
    Channel::new(kraus, format!("random(d_in={d_in},d_out={d_out},rank={rank},seed={seed})"))
        .expect("sliced isometry is CPTP")
}
