//! Power-series solution of the quartic system `s' = c³, c' = −s³`
//! (`s(0) = 0`, `c(0) = 1`) together with the lemniscatic Weierstrass ℘
//! function (`g₂ = 1`, `g₃ = 0`) and the elliptic functions that extend
//! `s²`, `c²` and `s·c` beyond the local solution disc.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: quadrature, the arithmetic-geometric mean and sparse
//!   series evaluation.
//! * [`series`]: Taylor coefficients of `(s, c)` and a Runge–Kutta path
//!   integrator used as an independent oracle.
//! * [`weierstrass`]: ℘ and ℘′ by Laurent series after lattice reduction,
//!   plus the addition, duplication and half-period translation formulas.
//! * [`extensions`]: `S = s²`, `C = c²`, `P = s·c`, `sl`, `sd`, the pole
//!   lattice, the Jacobi/AGM cross-check, and square-root branch tracking.
//! * [`verify`]: named identity suites evaluated over complex grids.

#![allow(clippy::excessive_precision)]

pub mod error;
pub mod extensions;
pub mod geometry;
pub mod numerics;
pub mod series;
pub mod verify;
pub mod weierstrass;

pub use error::{Error, Result};
pub use extensions::{EllipticFn, PoleSet};
pub use numerics::{Complex, Tolerance};
pub use series::{PathPolyline, PathState, RadiusConstants, TaylorPair};
pub use verify::{GridSpec, IdentityReport, Suite, ToleranceProfile};
pub use weierstrass::{LatticeReduction, WeierstrassContext};
