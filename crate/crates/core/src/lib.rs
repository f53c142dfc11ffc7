//! Numerical checks for sectorial estimates of complex elliptic operators
//! `−div(C ∇u)` with possibly degenerate coefficients.

pub mod angles;
pub mod error;
pub mod field;
pub mod linalg;
pub mod pairing;
pub mod sampling;
pub mod scalar;
pub mod semigroup;

pub use error::{Error, Result};
pub use scalar::{cis, Cx, Real};

/// Double-precision aliases.
pub type Matrix = linalg::CMatrix<f64>;
pub type RealMatrix = linalg::RealMatrix<f64>;
pub type Complex = Cx<f64>;
pub type Field = field::LibraryField<f64>;
pub type Bundle = angles::AngleBundle<f64>;
pub type Angle = linalg::SectorAngle<f64>;
pub type Decomposition = linalg::MatrixDecomposition<f64>;
pub type Operator = semigroup::GridOperator<f64>;
pub type Grid = semigroup::GridFunction<f64>;
pub type Trig = pairing::TrigPoly<f64>;
