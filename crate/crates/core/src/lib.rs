//! Pointwise Hermitian curvature calculus for holomorphic vector bundles.
//!
//! Every tensor in this crate is the Chern curvature `R[i][j][α][β]` of a
//! Hermitian bundle at a single point, written in an orthonormal fiber frame
//! and with the `√−1/2π` prefactor stripped. On top of that representation
//! the crate provides
//!
//! * bundle constructions (dual, tensor, determinant, direct sum, line twists,
//!   symmetric powers and frame orthonormalization) in [`curvature`];
//! * Nakano, dual-Nakano and Griffiths positivity tests and the Schur
//!   complement block lemma in [`positivity`];
//! * the model geometries of projective and complex hyperbolic space in
//!   [`models`];
//! * exact rational monomial integrals over `P^{r−1}`, their Monte Carlo
//!   cross-check, the induced `L²` metric on symmetric powers and the
//!   Demailly–Skoda identity in [`quadrature`].
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod curvature;
pub mod error;
pub mod linalg;
pub mod models;
pub mod multiindex;
pub mod positivity;
pub mod quadrature;

pub use curvature::{CurvatureTensor, LineCurvature, MetricGram, SymPower};
pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use multiindex::SymIndex;
pub use positivity::{Classification, Method, Verdict};
