//! Exact verification of commuting nilpotent matrix constructions over
//! the rationals and prime fields.

pub mod algebra;
pub mod closure;
pub mod certificate;
pub mod error;
pub mod field;
pub mod io;
pub mod jordan;
pub mod linalg;
pub mod parallel;
pub mod witnesses;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::Matrix;
