//! Exact arithmetic in Munn algebras `M(D, m, n, P)` over `GF(p)`, `Q` and the
//! rational quaternions, with decomposition engines that emit checkable
//! witnesses and a linear-algebra certifier for zero-product determinedness.

pub mod commutator;
pub mod error;
pub mod idempotent;
pub mod json;
pub mod matrix;
pub mod munn;
pub mod scalars;
pub mod service;
pub mod zpd;

pub use error::{ErrorClass, MunnError, Result};
pub use matrix::Matrix;
pub use munn::{BracketKind, MunnContext, MunnElement, Witness};
pub use scalars::{Scalar, ScalarDomain};
