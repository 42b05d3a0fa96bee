//! Arithmetic of Shimura curves `X_0^D(N)`.
//!
//! The crate works purely with numerical invariants: the quaternion
//! discriminant `D`, the Eichler level `N`, and Hall divisors `m` of `DN`
//! indexing the Atkin–Lehner involutions `w_m`. On top of that it provides
//!
//! - [`arith`]: factorization, Hall divisors, the Kronecker symbol, `φ` and `ψ`;
//! - [`quadorders`]: imaginary quadratic orders and their class numbers;
//! - [`shimura`]: elliptic-point counts, the genus, and the asymptotic genus bound;
//! - [`cmfix`]: CM-point counts and fixed points of Atkin–Lehner involutions;
//! - [`scan`]: the exhaustive search showing that no `X_0^D(N)` with `N`
//!   squarefree and genus at least 2 has a smooth plane model.

pub mod arith;
pub mod cmfix;
pub mod error;
pub mod quadorders;
pub mod scan;
pub mod shimura;

pub use cmfix::{FixedPointProfile, OrderCount, ProfileEntry, Variant};
pub use error::{Error, Result};
pub use quadorders::{ClassNumberCache, OrderDisc, QuadForm};
pub use scan::{CandidateRecord, Divergence, ScanConfig, ScanParams, ScanReport, Witness};
pub use shimura::CurveLabel;
