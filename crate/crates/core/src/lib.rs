//! Exact linear algebra for N-homogeneous algebras and their Koszul duals,
//! with master-theorem checks in Manin's bialgebra `end(A)`.

pub mod builtins;
pub mod error;
pub mod freealg;
pub mod homog;
pub mod koszul;
pub mod linalg;
pub mod manin;
pub mod mmt;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use freealg::{Tensor, Word};
pub use homog::{Algebra, AlgebraClass, AlgebraPresentation};
pub use koszul::KoszulComplex;
pub use manin::ManinBialgebra;
pub use mmt::NumericMatrix;
pub use linalg::{Matrix, SparseVec, Subspace};
pub use scalar::{Field, ParamFraction, Rational};
pub use series::{MultiSeries, UniSeries};
