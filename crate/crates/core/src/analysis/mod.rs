//! Norms, exact radial wave fields and the bilinear estimate harness.

pub mod bilinear;
pub mod dalembert;
pub mod norms;
pub mod profile;
pub mod quadrature;

use thiserror::Error;

pub use bilinear::{bilinear_lhs, bilinear_rhs, bilinear_scan, BilinearCase, BilinearPair, BilinearScan, QuadConfig};
pub use dalembert::{dalembert_initial, dalembert_pair, PairValue, WaveData, WaveField};
pub use norms::{w21_surrogate, weighted_bv, NormReport, Parity};
pub use profile::{derivative_measure_norm, RadialProfileFn};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("profile is not compactly supported")]
    Unbounded,
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("derivative of order {order} jumps by {jump:.3e} at r = {at}; the requested norm is infinite")]
    InsufficientRegularity { order: usize, at: f64, jump: f64 },
    #[error("spherical-mean representation needs a nonzero speed")]
    ZeroSpeed,
    #[error("inadmissible speed pair or data: {0}")]
    Inadmissible(String),
    #[error("snapshot grids do not match: {0}")]
    GridMismatch(String),
    #[error("invalid horizon grid: {0}")]
    InvalidGrid(String),
}
