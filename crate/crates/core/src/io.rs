//! TOML formats for systems, radial profiles and bilinear wave data.
//!
//! System file:
//!
//! ```toml
//! l = 1
//! m = 1
//! B = [[1.0]]          # l rows of m entries, or a flat row-major list
//! C = [[1.0]]
//! D = [[0.0]]
//! Gamma = [1.0]        # flat, first index slowest: Gamma[k][i][j]
//! Omega = [-1.0]       # Omega[k][s][q]
//! Upsilon = [0.0]      # Upsilon[p][j][q]
//! OmegaBar = [0.0]     # OmegaBar[p][s][q]
//! ```
//!
//! Missing blocks and tensors are zero.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{AnalysisError, RadialProfileFn, WaveData};
use crate::scalar::Real;
use crate::system_model::{SpecError, SystemSpec, Tensor3};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed TOML: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
enum MatrixInput {
    Nested(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    l: usize,
    m: usize,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    b: Option<MatrixInput>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<MatrixInput>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    d: Option<MatrixInput>,
    #[serde(rename = "Gamma", default, skip_serializing_if = "Option::is_none")]
    gamma: Option<Vec<f64>>,
    #[serde(rename = "Omega", default, skip_serializing_if = "Option::is_none")]
    omega: Option<Vec<f64>>,
    #[serde(rename = "Upsilon", default, skip_serializing_if = "Option::is_none")]
    upsilon: Option<Vec<f64>>,
    #[serde(rename = "OmegaBar", default, skip_serializing_if = "Option::is_none")]
    omega_bar: Option<Vec<f64>>,
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })
}

fn matrix<T: Real>(name: &str, input: &Option<MatrixInput>, rows: usize, cols: usize) -> Result<DMatrix<T>, IoError> {
    let flat: Vec<f64> = match input {
        None => return Ok(DMatrix::zeros(rows, cols)),
        Some(MatrixInput::Flat(v)) => v.clone(),
        Some(MatrixInput::Nested(rs)) => {
            if rs.len() != rows || rs.iter().any(|r| r.len() != cols) {
                return Err(IoError::Shape(format!("{name} must be {rows}×{cols}")));
            }
            rs.concat()
        }
    };
    if flat.len() != rows * cols {
        return Err(IoError::Shape(format!("{name} needs {} entries, got {}", rows * cols, flat.len())));
    }
    Ok(DMatrix::from_row_iterator(rows, cols, flat.into_iter().map(T::lit)))
}

fn tensor<T: Real>(name: &str, input: &Option<Vec<f64>>, dims: [usize; 3]) -> Result<Tensor3<T>, IoError> {
    match input {
        None => Ok(Tensor3::zeros(dims)),
        Some(v) => Tensor3::from_flat(dims, v.iter().map(|&x| T::lit(x)).collect())
            .map_err(|_| IoError::Shape(format!("{name} needs {} entries, got {}", dims.iter().product::<usize>(), v.len()))),
    }
}

pub fn parse_system<T: Real>(text: &str) -> Result<SystemSpec<T>, IoError> {
    let f: SystemFile = toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    let (l, m) = (f.l, f.m);
    let spec = SystemSpec {
        l,
        m,
        b: matrix("B", &f.b, l, m)?,
        c: matrix("C", &f.c, m, l)?,
        d: matrix("D", &f.d, m, m)?,
        gamma: tensor("Gamma", &f.gamma, [l, l, l])?,
        omega: tensor("Omega", &f.omega, [l, m, m])?,
        upsilon: tensor("Upsilon", &f.upsilon, [m, l, m])?,
        omega_bar: tensor("OmegaBar", &f.omega_bar, [m, m, m])?,
    };
    spec.ensure_valid()?;
    Ok(spec)
}

pub fn load_system<T: Real>(path: &Path) -> Result<SystemSpec<T>, IoError> {
    parse_system(&read(path)?)
}

/// Writes a spec in the format read by [`parse_system`].
pub fn system_to_toml<T: Real>(spec: &SystemSpec<T>) -> String {
    let rows = |mat: &DMatrix<T>| -> Option<MatrixInput> {
        Some(MatrixInput::Nested((0..mat.nrows()).map(|i| (0..mat.ncols()).map(|j| mat[(i, j)].to_f64_lossy()).collect()).collect()))
    };
    let flat = |t: &Tensor3<T>| Some(t.data().iter().map(|x| x.to_f64_lossy()).collect());
    let f = SystemFile {
        l: spec.l,
        m: spec.m,
        b: rows(&spec.b),
        c: rows(&spec.c),
        d: rows(&spec.d),
        gamma: flat(&spec.gamma),
        omega: flat(&spec.omega),
        upsilon: flat(&spec.upsilon),
        omega_bar: flat(&spec.omega_bar),
    };
    toml::to_string(&f).expect("system file serializes")
}

/// One radial profile in a TOML table, selected by `shape`.
#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileInput {
    Zero,
    Piecewise { breaks: Vec<f64>, coeffs: Vec<Vec<f64>> },
    Tent { a: f64, peak: f64, b: f64, height: f64 },
    Indicator { a: f64, b: f64, height: f64 },
    Bspline { center: f64, width: f64, height: f64 },
}

impl ProfileInput {
    pub fn build<T: Real>(&self) -> Result<RadialProfileFn<T>, AnalysisError> {
        let c = T::lit;
        match self {
            ProfileInput::Zero => Ok(RadialProfileFn::zero()),
            ProfileInput::Piecewise { breaks, coeffs } => RadialProfileFn::from_pieces(
                breaks.iter().map(|&x| c(x)).collect(),
                coeffs.iter().map(|p| p.iter().map(|&x| c(x)).collect()).collect(),
            ),
            ProfileInput::Tent { a, peak, b, height } => RadialProfileFn::tent(c(*a), c(*peak), c(*b), c(*height)),
            ProfileInput::Indicator { a, b, height } => RadialProfileFn::indicator(c(*a), c(*b), c(*height)),
            ProfileInput::Bspline { center, width, height } => RadialProfileFn::bspline(c(*center), c(*width), c(*height)),
        }
    }
}

/// Initial data file: `[[rho]]` tables for density channels and `[[w]]`
/// tables for radial vector channels, in channel order.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilesFile {
    #[serde(default)]
    pub rho: Vec<ProfileInput>,
    #[serde(default)]
    pub w: Vec<ProfileInput>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profiles<T: Real> {
    pub rho: Vec<RadialProfileFn<T>>,
    pub w: Vec<RadialProfileFn<T>>,
}

pub fn parse_profiles<T: Real>(text: &str) -> Result<Profiles<T>, IoError> {
    let f: ProfilesFile = toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    Ok(Profiles {
        rho: f.rho.iter().map(ProfileInput::build).collect::<Result<_, _>>()?,
        w: f.w.iter().map(ProfileInput::build).collect::<Result<_, _>>()?,
    })
}

pub fn load_profiles<T: Real>(path: &Path) -> Result<Profiles<T>, IoError> {
    parse_profiles(&read(path)?)
}

/// Data of one linear wave for the bilinear harness.
///
/// ```toml
/// kind = "duhamel"
/// [phi]
/// shape = "tent"
/// a = 1.0
/// peak = 1.5
/// b = 2.0
/// height = 1.0
/// [psi]
/// shape = "zero"
/// ```
///
/// `kind = "initial"` takes `[rho0]` and `[w0]` tables instead.
#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WaveDataInput {
    Duhamel { phi: ProfileInput, psi: ProfileInput },
    Initial { rho0: ProfileInput, w0: ProfileInput },
}

impl WaveDataInput {
    pub fn build<T: Real>(&self) -> Result<WaveData<T>, AnalysisError> {
        Ok(match self {
            WaveDataInput::Duhamel { phi, psi } => WaveData::Duhamel { phi: phi.build()?, psi: psi.build()? },
            WaveDataInput::Initial { rho0, w0 } => WaveData::Initial { rho0: rho0.build()?, w0: w0.build()? },
        })
    }
}

pub fn parse_wave_data<T: Real>(text: &str) -> Result<WaveData<T>, IoError> {
    let f: WaveDataInput = toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    Ok(f.build()?)
}

pub fn load_wave_data<T: Real>(path: &Path) -> Result<WaveData<T>, IoError> {
    parse_wave_data(&read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ACOUSTIC: &str = "l = 1\nm = 1\nB = [[1.0]]\nC = [1.0]\nGamma = [1.0]\nOmega = [-1.0]\n";

    #[test]
    fn parses_nested_and_flat_blocks() {
        let s: SystemSpec<f64> = parse_system(ACOUSTIC).unwrap();
        assert_eq!(s.b[(0, 0)], 1.0);
        assert_eq!(s.c[(0, 0)], 1.0);
        assert_eq!(s.d[(0, 0)], 0.0);
        assert_eq!(s.gamma.get(0, 0, 0), 1.0);
        assert_eq!(s.omega.get(0, 0, 0), -1.0);
        assert!(s.omega_bar.is_zero());
    }

    #[test]
    fn tensor_order_is_first_index_slowest() {
        let text = "l = 2\nm = 0\nGamma = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]\n";
        let s: SystemSpec<f64> = parse_system(text).unwrap();
        assert_eq!(s.gamma.get(1, 0, 1), 6.0);
        assert_eq!(s.gamma.get(0, 1, 0), 3.0);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(parse_system::<f64>("l = 1\nm = 1\nB = [[1.0, 2.0]]\n"), Err(IoError::Shape(_))));
        assert!(matches!(parse_system::<f64>("l = 1\nm = 1\nGamma = [1.0, 2.0]\n"), Err(IoError::Shape(_))));
        assert!(matches!(parse_system::<f64>("l = 1\nm = 1\nE = 3\n"), Err(IoError::Parse(_))));
        assert!(matches!(parse_system::<f64>("l = 0\nm = 0\n"), Err(IoError::Spec(_))));
    }

    #[test]
    fn system_round_trip() {
        let s: SystemSpec<f64> = parse_system(ACOUSTIC).unwrap();
        let back: SystemSpec<f64> = parse_system(&system_to_toml(&s)).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn profiles_file() {
        let text = r#"
[[rho]]
shape = "bspline"
center = 3.0
width = 0.5
height = 1.0

[[w]]
shape = "piecewise"
breaks = [1.0, 2.0]
coeffs = [[0.0, 1.0]]
"#;
        let p: Profiles<f64> = parse_profiles(text).unwrap();
        assert_eq!(p.rho.len(), 1);
        assert!((p.rho[0].eval(3.0) - 1.0).abs() < 1e-14);
        assert!((p.w[0].eval(1.5) - 0.5).abs() < 1e-15);
        assert!(parse_profiles::<f64>("[[rho]]\nshape = \"cone\"\n").is_err());
    }

    #[test]
    fn wave_data_file() {
        let text = "kind = \"initial\"\n[rho0]\nshape = \"tent\"\na = 1.0\npeak = 1.5\nb = 2.0\nheight = 1.0\n[w0]\nshape = \"zero\"\n";
        let d: WaveData<f64> = parse_wave_data(text).unwrap();
        assert!(matches!(d, WaveData::Initial { .. }));
        assert!(parse_wave_data::<f64>("kind = \"duhamel\"\n[phi]\nshape = \"zero\"\n").is_err());
    }
}
