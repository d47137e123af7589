//! Discord-like measures of quantum correlations on finite-dimensional
//! bipartite systems.
//!
//! The measured party is always the first tensor factor `A`. Entropies are in
//! bits; geometric quantities are bare squared Hilbert-Schmidt distances with
//! no normalization prefactor.

pub mod channels;
pub mod encoding;
pub mod error;
pub mod measures;
pub mod optimize;
pub mod qmat;
pub mod random;
pub mod states;

pub use error::{Error, Result};
pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;
pub use qmat::{DimPair, QOperator, Subsystem};
pub use states::BipartiteState;
