//! Hermitian curvature laboratory.
//!
//! Pointwise tensor calculus for Hermitian metrics on explicit compact complex
//! manifolds (flat and perturbed tori, Hopf surfaces, an Inoue chart), the
//! Gauduchon conformal factor, Yamabe quotients within a conformal class, and
//! exact A-hat genus arithmetic.

pub mod adjoints;
pub mod catalog;
pub mod charclass;
pub mod conformal;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod jet;
pub mod metrics;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod runner;
pub mod spectral;
pub mod tensor;
pub mod yamabe;

pub use error::{CurvError, Result};
pub use num_complex::Complex64 as C64;
