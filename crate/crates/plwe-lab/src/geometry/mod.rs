//! Numerical number-field geometry: complex roots, the real embedding of
//! a power basis, spectral distortion, Mahler measure, and the
//! RLWE-to-PLWE change of basis for monogenic rings.

mod embedding;
pub mod linalg;
mod roots;

pub use embedding::{
    change_of_basis_monogenic, embedding_matrix, mahler_measure, spectral_distortion,
    spectral_distortion_with_cap, ChangeOfBasis, EmbeddingReport, DEFAULT_DEGREE_CAP,
};
pub use linalg::Mat;
pub use roots::{complex_roots, RootSet};
