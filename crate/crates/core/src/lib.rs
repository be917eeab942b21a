//! Asymptotic expansions of colored Jones polynomials of torus knots.
//!
//! The crate evaluates J_N(T(a,b); e^{ξ/N}) both from a finite sum and from a
//! contour integral, expands it asymptotically in N, and interprets the
//! exponential terms through Chern–Simons invariants and Reidemeister torsion
//! on the SL(2,ℂ) character variety. A figure-eight knot module carries the
//! hyperbolic counterparts.

pub mod asymptotics;
pub mod charvar;
pub mod contour;
pub mod cs;
pub mod error;
pub mod fig8;
pub mod jones;
pub mod mp;
pub mod precision;
pub mod suite;
pub mod torus;

pub use error::{Error, Result};
pub use mp::Mpc;
pub use precision::Precision;
pub use torus::TorusKnot;
