//! Exact arithmetic: scalars, integer and field matrices, Smith normal form,
//! finite abelian groups and small groups by multiplication table.

pub mod abelian;
pub mod group;
pub mod linalg;
pub mod matrix;
pub mod scalar;

pub use abelian::{AbelianGroup, FinAbGroup, Halving};
pub use group::{classify_order8, GroupLabel, SmallGroup};
pub use linalg::FieldMatrix;
pub use matrix::{smith_normal_form, solve_integer, IntMatrix, Snf};
pub use scalar::{ExactScalar, Field};
