//! Numerical lab for parabolic projective structures on the once-punctured torus.

pub mod autoform;
pub mod bifurcation;
pub mod brownian;
pub mod cli;
pub mod devmap;
pub mod error;
pub mod estimators;
pub mod fuchsian;
pub mod modular;
pub mod moebius;
pub mod ode;
pub mod stats;

pub use error::{Error, Result};
