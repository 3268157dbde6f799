//! Construction and numerical verification of biharmonic functions,
//! bi-eigenfunctions and buckling eigenfunctions on model spaces.

pub mod error;
pub mod expr;
pub mod geometry;
pub mod harmonics;
pub mod jets;
pub mod ode;
pub mod punctured;
pub mod quadrature;
pub mod radial;
pub mod separable;
pub mod sphere;
pub mod verify;

pub use error::{Error, Result};
