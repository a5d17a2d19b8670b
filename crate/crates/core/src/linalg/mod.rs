//! Dense and banded complex linear algebra with Hermitian spectral calculus.

pub mod banded;
pub mod dense;
pub mod doi;
pub mod eigh;

pub use banded::Banded;
pub use dense::{
    commutator, corner_trace, hermitian_trace_norm, hs_norm, max_abs_entry, neg_i_commutator,
    trace, trace_norm, CMat, GeneralOperator, HermitianOperator, C64,
};
pub use doi::doi_transform;
pub use eigh::{apply_function, apply_function_complex, eigh, unitary_conjugate, SpectralDecomposition};
