//! Exact computations on flat affine manifolds and lagrangian foliations,
//! carried out on their holonomy groups.
//!
//! Scalars live in a real quadratic field ℚ(√d) and every result is exact.

pub mod affine;
pub mod catalog;
pub mod check;
pub mod cohomology;
pub mod error;
pub mod holonomy;
pub mod jets;
pub mod linalg;
pub mod lsa;
pub mod manifest;
pub mod par;
pub mod scalar;
pub mod symplectic;
pub mod unipotent;

pub use affine::AffineMap;
pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use manifest::{build_suspension, load_manifest, Manifest};
pub use scalar::Scalar;
