//! Curvature invariants, rigging classification, contact structures and
//! normal geodesics for left-invariant sub-Riemannian structures on Lie
//! groups given by structure constants.

pub mod carre;
pub mod catalog;
pub mod error;
pub mod geodesics;
pub mod lie;
pub mod linalg;
pub mod scalar;
pub mod solovev;
pub mod structure;
pub mod tensor;
pub mod wagner;

pub use error::{Error, Result};
pub use lie::{Flag, Grading, GradingFailure, LieAlgebra};
pub use linalg::{Matrix, Subspace, Vector};
pub use scalar::{Rational, Scalar, DEFAULT_TOL};
pub use structure::{OrthonormalFrame, SubRiemannianStructure};
pub use tensor::{Tensor3, Tensor4};
