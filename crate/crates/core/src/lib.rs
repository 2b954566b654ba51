//! Rotation-invariant semilinear hyperbolic systems in three space
//! dimensions: structure checks, radial reduction, characteristic
//! diagonalization, simulation and estimate harnesses.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the bottom of this file fix the common choices.

pub mod scalar;
pub mod poly;
pub mod system_model;
pub mod spectral;
pub mod reduction;
pub mod analysis;
pub mod radial_solver;
pub mod cartesian;
pub mod generators;
pub mod io;

pub use analysis::{NormReport, RadialProfileFn, WaveData};
pub use cartesian::{CartesianGrid, CartesianState};
pub use radial_solver::{RadialGrid, RadialState, SimulationConfig, Trajectory};
pub use reduction::{DiagonalRadialSystem, RadialSystem};
pub use scalar::Real;
pub use spectral::CharacteristicSystem;
pub use system_model::{FullMatrices, SystemSpec, Tensor3};

pub type SystemSpec64 = SystemSpec<f64>;
pub type SystemSpec32 = SystemSpec<f32>;
pub type CharacteristicSystem64 = CharacteristicSystem<f64>;
pub type CharacteristicSystem32 = CharacteristicSystem<f32>;
pub type RadialState64 = RadialState<f64>;
pub type RadialState32 = RadialState<f32>;
pub type CartesianState64 = CartesianState<f64>;
pub type CartesianState32 = CartesianState<f32>;
pub type RadialProfile64 = RadialProfileFn<f64>;
pub type RadialProfile32 = RadialProfileFn<f32>;
