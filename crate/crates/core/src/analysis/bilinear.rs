//! Space-time L¹ harness for products of waves from different families.
//!
//! LHS(T) = ∫₀ᵀ ∫₀^∞ |r ∂_r[(ρ̃_a + w̃_a)(ρ̃_b + w̃_b)]| dr dτ, evaluated from
//! the exact wave fields with panels split on every kink line and at every
//! time where two kink lines meet.

use rayon::prelude::*;
use serde::Serialize;

use crate::scalar::Real;

use super::dalembert::{WaveData, WaveField};
use super::norms::w21_surrogate;
use super::profile::{derivative_measure_norm, RadialProfileFn};
use super::quadrature::{integrate_panels, panels_from_cuts};
use super::AnalysisError;

/// Which estimate a speed pair falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BilinearCase {
    /// `|λ_a| ≠ |λ_b|`, both nonzero; spherical-mean data.
    DistinctSpeeds,
    /// `λ_a = −λ_b ≠ 0`; initial-value data.
    OppositeSpeeds,
    /// Exactly one speed zero; the frozen family carries initial data.
    ZeroSpeed,
}

impl BilinearCase {
    pub fn classify<T: Real>(la: T, lb: T) -> Result<Self, AnalysisError> {
        let z = T::zero();
        if la == z && lb == z {
            return Err(AnalysisError::Inadmissible("both speeds are zero".into()));
        }
        if la == lb {
            return Err(AnalysisError::Inadmissible(format!(
                "equal speeds λ_a = λ_b = {} carry no bilinear gain",
                la.to_f64_lossy()
            )));
        }
        if la == z || lb == z {
            Ok(BilinearCase::ZeroSpeed)
        } else if la == -lb {
            Ok(BilinearCase::OppositeSpeeds)
        } else {
            Ok(BilinearCase::DistinctSpeeds)
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BilinearCase::DistinctSpeeds => "distinct",
            BilinearCase::OppositeSpeeds => "opposite",
            BilinearCase::ZeroSpeed => "zero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig<T> {
    pub rtol: T,
    pub max_panels_outer: usize,
    pub max_panels_inner: usize,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        QuadConfig { rtol: T::lit(1e-6), max_panels_outer: 20_000, max_panels_inner: 2_000 }
    }
}

/// A validated pair of families ready for integration.
#[derive(Debug, Clone)]
pub struct BilinearPair<T: Real> {
    pub case: BilinearCase,
    a: WaveField<T>,
    b: WaveField<T>,
    trivial: bool,
}

fn expect_kind<T: Real>(data: &WaveData<T>, initial: bool, who: &str, case: BilinearCase) -> Result<(), AnalysisError> {
    let ok = matches!(data, WaveData::Initial { .. }) == initial;
    if ok {
        Ok(())
    } else {
        Err(AnalysisError::Inadmissible(format!(
            "{who} must carry {} data in the {} case",
            if initial { "initial-value" } else { "spherical-mean" },
            case.name()
        )))
    }
}

impl<T: Real> BilinearPair<T> {
    /// Checks the speed pair and data kinds. In the zero case the frozen
    /// family is placed first.
    pub fn new(data_a: &WaveData<T>, data_b: &WaveData<T>, la: T, lb: T) -> Result<Self, AnalysisError> {
        let case = BilinearCase::classify(la, lb)?;
        let (da, db, la, lb) = if case == BilinearCase::ZeroSpeed && lb == T::zero() {
            (data_b, data_a, lb, la)
        } else {
            (data_a, data_b, la, lb)
        };
        match case {
            BilinearCase::DistinctSpeeds => {
                expect_kind(da, false, "family a", case)?;
                expect_kind(db, false, "family b", case)?;
            }
            BilinearCase::OppositeSpeeds => {
                expect_kind(da, true, "family a", case)?;
                expect_kind(db, true, "family b", case)?;
            }
            BilinearCase::ZeroSpeed => {
                expect_kind(da, true, "the zero-speed family", case)?;
                expect_kind(db, false, "the moving family", case)?;
            }
        }
        Ok(BilinearPair {
            case,
            a: WaveField::new(da, la)?,
            b: WaveField::new(db, lb)?,
            trivial: da.is_zero() || db.is_zero(),
        })
    }

    /// Times in `(t0, t1)` where kink lines meet or fold at the origin.
    fn time_breaks(&self, t0: T, t1: T) -> Vec<T> {
        let mut out = Vec::new();
        let fields = [&self.a, &self.b];
        for f in fields {
            let c = f.speed();
            if c > T::zero() {
                for &b in f.intercepts() {
                    out.push(-b / c);
                }
                for (i, &b1) in f.intercepts().iter().enumerate() {
                    for &b2 in &f.intercepts()[i + 1..] {
                        out.push(-(b1 + b2) / (c + c));
                    }
                }
            }
        }
        let (ca, cb) = (self.a.speed(), self.b.speed());
        for &ba in self.a.intercepts() {
            for &bb in self.b.intercepts() {
                if ca != cb {
                    out.push((bb - ba) / (ca - cb));
                }
                if ca + cb > T::zero() {
                    out.push(-(ba + bb) / (ca + cb));
                }
            }
        }
        out.retain(|&t| t > t0 && t < t1);
        out
    }

    /// `∫₀^∞ |r ∂_r(z_a z_b)| dr` at time `tau`.
    pub fn inner(&self, tau: T, cfg: &QuadConfig<T>) -> T {
        let (la, ha) = self.a.support_at(tau);
        let (lb, hb) = self.b.support_at(tau);
        let (lo, hi) = (la.max(lb).max(T::zero()), ha.min(hb));
        if !(hi > lo) {
            return T::zero();
        }
        let mut cuts = self.a.kinks(tau, lo, hi);
        cuts.extend(self.b.kinks(tau, lo, hi));
        let panels = panels_from_cuts(lo, hi, &mut cuts);
        let f = |r: T| {
            let va = self.a.eval(tau, r);
            let vb = self.b.eval(tau, r);
            (r * (va.z_r() * vb.z() + va.z() * vb.z_r())).abs()
        };
        let atol = T::eps() * T::lit(1e3) * (hi - lo);
        integrate_panels(f, &panels, cfg.rtol * T::lit(0.1), atol, cfg.max_panels_inner).value
    }

    /// `∫_{t0}^{t1} inner(τ) dτ` with its error estimate.
    pub fn lhs_segment(&self, t0: T, t1: T, cfg: &QuadConfig<T>) -> (T, T) {
        if self.trivial || !(t1 > t0) {
            return (T::zero(), T::zero());
        }
        let mut cuts = self.time_breaks(t0, t1);
        let panels = panels_from_cuts(t0, t1, &mut cuts);
        let atol = T::eps() * T::lit(1e3) * (t1 - t0);
        let q = integrate_panels(|tau| self.inner(tau, cfg), &panels, cfg.rtol, atol, cfg.max_panels_outer);
        (q.value, q.error)
    }

    /// LHS at every horizon of an increasing grid, accumulated segment by
    /// segment (segments run in parallel).
    pub fn lhs_series(&self, t_grid: &[T], cfg: &QuadConfig<T>) -> Result<Vec<T>, AnalysisError> {
        if t_grid.iter().any(|t| !(*t > T::zero())) || !t_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(AnalysisError::InvalidGrid("horizons must be positive and increasing".into()));
        }
        let mut edges = vec![T::zero()];
        edges.extend_from_slice(t_grid);
        let pieces: Vec<T> = edges.par_windows(2).map(|w| self.lhs_segment(w[0], w[1], cfg).0).collect();
        let mut acc = T::zero();
        Ok(pieces
            .into_iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect())
    }
}

/// `bilinear_lhs` for a single horizon.
pub fn bilinear_lhs<T: Real>(
    data_a: &WaveData<T>,
    data_b: &WaveData<T>,
    la: T,
    lb: T,
    t: T,
    cfg: &QuadConfig<T>,
) -> Result<T, AnalysisError> {
    let pair = BilinearPair::new(data_a, data_b, la, lb)?;
    Ok(pair.lhs_series(&[t], cfg)?[0])
}

fn duhamel_parts<T: Real>(d: &WaveData<T>) -> Result<(&RadialProfileFn<T>, &RadialProfileFn<T>), AnalysisError> {
    match d {
        WaveData::Duhamel { phi, psi } => Ok((phi, psi)),
        _ => Err(AnalysisError::Inadmissible("expected spherical-mean data".into())),
    }
}

fn initial_parts<T: Real>(d: &WaveData<T>) -> Result<(&RadialProfileFn<T>, &RadialProfileFn<T>), AnalysisError> {
    match d {
        WaveData::Initial { rho0, w0 } => Ok((rho0, w0)),
        _ => Err(AnalysisError::Inadmissible("expected initial-value data".into())),
    }
}

/// `‖sφ‖ + ‖(sψ)′‖`.
pub fn low_factor<T: Real>(d: &WaveData<T>) -> Result<T, AnalysisError> {
    let (phi, psi) = duhamel_parts(d)?;
    Ok(derivative_measure_norm(phi.pp(), 0, 1)? + derivative_measure_norm(&psi.pp().mul_identity(), 1, 0)?)
}

/// `‖s²φ′‖ + ‖s(sψ)″‖`.
pub fn high_factor<T: Real>(d: &WaveData<T>) -> Result<T, AnalysisError> {
    let (phi, psi) = duhamel_parts(d)?;
    Ok(derivative_measure_norm(phi.pp(), 1, 2)? + derivative_measure_norm(&psi.pp().mul_identity(), 2, 1)?)
}

/// `‖rρ̃′₀‖ + ‖rw̃′₀‖`.
pub fn initial_low_factor<T: Real>(d: &WaveData<T>) -> Result<T, AnalysisError> {
    let (f, g) = initial_parts(d)?;
    Ok(derivative_measure_norm(f.pp(), 1, 1)? + derivative_measure_norm(g.pp(), 1, 1)?)
}

/// Data-norm factor `Ẇ²¹(ρ̃₀) + Ẇ²¹(w̃₀)`.
pub fn initial_high_factor<T: Real>(d: &WaveData<T>) -> Result<T, AnalysisError> {
    let (f, g) = initial_parts(d)?;
    Ok(w21_surrogate(std::slice::from_ref(f))? + w21_surrogate(std::slice::from_ref(g))?)
}

/// Right-hand side of the estimate for `case`; in the zero case `data_a` is
/// the frozen family.
pub fn bilinear_rhs<T: Real>(data_a: &WaveData<T>, data_b: &WaveData<T>, case: BilinearCase) -> Result<T, AnalysisError> {
    Ok(match case {
        BilinearCase::DistinctSpeeds => low_factor(data_a)? * high_factor(data_b)?,
        BilinearCase::OppositeSpeeds => initial_low_factor(data_a)? * initial_high_factor(data_b)?,
        BilinearCase::ZeroSpeed => initial_low_factor(data_a)? * high_factor(data_b)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BilinearScan<T: Real> {
    pub case: BilinearCase,
    pub lambda_a: T,
    pub lambda_b: T,
    pub t: Vec<T>,
    pub lhs: Vec<T>,
    pub rhs: T,
    /// `lhs / rhs`, `None` where the right-hand side vanishes.
    pub ratio: Vec<Option<T>>,
    pub max_ratio: T,
    /// `Δratio / Δln T` over the last two horizons, relative to `max_ratio`.
    pub tail_slope: T,
}

pub fn bilinear_scan<T: Real>(
    data_a: &WaveData<T>,
    data_b: &WaveData<T>,
    la: T,
    lb: T,
    t_grid: &[T],
    cfg: &QuadConfig<T>,
) -> Result<BilinearScan<T>, AnalysisError> {
    let pair = BilinearPair::new(data_a, data_b, la, lb)?;
    let (da, db) = if pair.case == BilinearCase::ZeroSpeed && lb == T::zero() { (data_b, data_a) } else { (data_a, data_b) };
    let rhs = bilinear_rhs(da, db, pair.case)?;
    let lhs = pair.lhs_series(t_grid, cfg)?;
    let ratio: Vec<Option<T>> = lhs.iter().map(|&v| if rhs > T::zero() { Some(v / rhs) } else { None }).collect();
    let max_ratio = ratio.iter().flatten().fold(T::zero(), |m, &x| m.max(x));
    let n = t_grid.len();
    let tail_slope = match (n >= 2, ratio.get(n.wrapping_sub(1)).copied().flatten(), ratio.get(n.wrapping_sub(2)).copied().flatten()) {
        (true, Some(r1), Some(r0)) if max_ratio > T::zero() => {
            (r1 - r0) / (t_grid[n - 1].ln() - t_grid[n - 2].ln()) / max_ratio
        }
        _ => T::zero(),
    };
    Ok(BilinearScan { case: pair.case, lambda_a: la, lambda_b: lb, t: t_grid.to_vec(), lhs, rhs, ratio, max_ratio, tail_slope })
}
