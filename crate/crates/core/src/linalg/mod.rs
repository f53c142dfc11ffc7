//! Dense complex linear algebra and constant-matrix sector tools.

pub mod decomp;
pub mod eigen;
pub mod expm;
pub mod lemmas;
pub mod lu;
pub mod matrix;
pub mod sector;

pub use decomp::{
    decompose, rotate, rotation_identity_residual, sesquilinear, MatrixDecomposition,
};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, spectral_norm, HermitianEigen};
pub use expm::{expm, Expm};
pub use lemmas::{lemma_suite, trace_bound_check, trace_bound_excess, LemmaReport};
pub use lu::{solve, LuFactor};
pub use matrix::{inner, vec_norm, CMatrix, RealMatrix};
pub use sector::{
    minimal_sector_angle, sector_angle_of, RejectReason, SectorAngle, SectorRejection, SectorResult,
};
