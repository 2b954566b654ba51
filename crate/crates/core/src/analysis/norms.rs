//! Scaling-invariant data norm and the weighted BV norm of radial fields.

use serde::Serialize;

use crate::scalar::Real;

use super::profile::{derivative_measure_norm, RadialProfileFn};
use super::AnalysisError;

/// `4π Σ ∫₀^∞ (r²|u″| + 2r|u′|) dr` over all channels, with Dirac parts of
/// `u″` included. The three Hessian eigenvalues of a radial function are
/// `u″, u′/r, u′/r`, so this is the L¹ norm of the nuclear norm of the
/// Hessian in ℝ³.
pub fn w21_surrogate<T: Real>(profiles: &[RadialProfileFn<T>]) -> Result<T, AnalysisError> {
    let mut total = T::zero();
    for p in profiles {
        total += derivative_measure_norm(p.pp(), 2, 2)? + T::lit(2.0) * derivative_measure_norm(p.pp(), 1, 1)?;
    }
    Ok(total * T::lit(4.0 * std::f64::consts::PI))
}

/// Weighted BV norm at one time level, per scaling power `α ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormReport<T: Real> {
    pub t: T,
    /// `‖∂_t(ru)‖ + ‖∂_r(ru)‖` summed over channels.
    pub alpha0: T,
    /// `‖L₀∂_t(ru)‖ + ‖L₀∂_r(ru)‖` summed over channels.
    pub alpha1: T,
}

impl<T: Real> NormReport<T> {
    pub fn total(&self) -> T {
        self.alpha0 + self.alpha1
    }
}

/// Parity of a radial channel under `r ↦ −r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Centered difference on a cell-centred grid with a parity ghost at the
/// origin and a one-sided stencil at the outer edge.
fn d_dr<T: Real>(f: &[T], h: T, ghost_sign: T) -> Vec<T> {
    let n = f.len();
    let two_h = h + h;
    (0..n)
        .map(|j| {
            let left = if j == 0 { ghost_sign * f[0] } else { f[j - 1] };
            if j + 1 < n {
                (f[j + 1] - left) / two_h
            } else {
                (f[j] - f[j - 1]) / h
            }
        })
        .collect()
}

fn trapezoid_abs<T: Real>(f: &[T], h: T) -> T {
    let n = f.len();
    if n == 0 {
        return T::zero();
    }
    let inner = f.iter().fold(T::zero(), |s, x| s + x.abs());
    (inner - (f[0].abs() + f[n - 1].abs()) * T::lit(0.5)) * h
}

/// Weighted BV norm of physical radial fields from three consecutive time
/// levels `t − dt, t, t + dt` on the uniform cell-centred grid `r`.
///
/// Each channel `u` enters through `f = r u`; the ghost value at the origin
/// uses the parity of `f` (odd for even `u`, even for odd `u`).
pub fn weighted_bv<T: Real>(
    r: &[T],
    parity: &[Parity],
    t: T,
    dt: T,
    prev: &[Vec<T>],
    cur: &[Vec<T>],
    next: &[Vec<T>],
) -> Result<NormReport<T>, AnalysisError> {
    let n = r.len();
    let channels = parity.len();
    for (name, snap) in [("prev", prev), ("cur", cur), ("next", next)] {
        if snap.len() != channels || snap.iter().any(|c| c.len() != n) {
            return Err(AnalysisError::GridMismatch(format!(
                "{name} snapshot: expected {channels} channels of length {n}"
            )));
        }
    }
    if n < 2 || !(dt > T::zero()) {
        return Err(AnalysisError::GridMismatch("need at least two cells and dt > 0".into()));
    }
    let h = r[1] - r[0];
    let (mut a0, mut a1) = (T::zero(), T::zero());
    let two = T::lit(2.0);
    for c in 0..channels {
        let ghost = match parity[c] {
            Parity::Even => -T::one(),
            Parity::Odd => T::one(),
        };
        let fm: Vec<T> = r.iter().zip(&prev[c]).map(|(&ri, &u)| ri * u).collect();
        let f0: Vec<T> = r.iter().zip(&cur[c]).map(|(&ri, &u)| ri * u).collect();
        let fp: Vec<T> = r.iter().zip(&next[c]).map(|(&ri, &u)| ri * u).collect();
        let ft: Vec<T> = fp.iter().zip(&fm).map(|(&p, &m)| (p - m) / (dt * two)).collect();
        let ftt: Vec<T> = (0..n).map(|j| (fp[j] - f0[j] * two + fm[j]) / (dt * dt)).collect();
        let fr = d_dr(&f0, h, ghost);
        let frt = d_dr(&ft, h, ghost);
        let frr = d_dr(&fr, h, -ghost);
        a0 += trapezoid_abs(&ft, h) + trapezoid_abs(&fr, h);
        let l0_ft: Vec<T> = (0..n).map(|j| t * ftt[j] + r[j] * frt[j]).collect();
        let l0_fr: Vec<T> = (0..n).map(|j| t * frt[j] + r[j] * frr[j]).collect();
        a1 += trapezoid_abs(&l0_ft, h) + trapezoid_abs(&l0_fr, h);
    }
    Ok(NormReport { t, alpha0: a0, alpha1: a1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_surrogate_closed_form() {
        let tent = RadialProfileFn::<f64>::tent(1.0, 2.0, 3.0, 1.0).unwrap();
        let v = w21_surrogate(&[tent]).unwrap();
        assert!((v - 4.0 * std::f64::consts::PI * 26.0).abs() < 1e-10);
    }

    #[test]
    fn zero_profile_zero_norm() {
        assert_eq!(w21_surrogate(&[RadialProfileFn::<f64>::zero()]).unwrap(), 0.0);
    }

    #[test]
    fn discontinuous_profile_rejected() {
        let ind = RadialProfileFn::<f64>::indicator(1.0, 2.0, 1.0).unwrap();
        assert!(w21_surrogate(&[ind]).is_err());
    }

    #[test]
    fn static_state_has_spatial_part_only() {
        let r: Vec<f64> = (0..50).map(|j| (j as f64 + 0.5) * 0.1).collect();
        let u: Vec<f64> = r.iter().map(|&x| (-(x - 2.0).powi(2)).exp()).collect();
        let snap = vec![u];
        let rep = weighted_bv(&r, &[Parity::Even], 1.0, 0.01, &snap, &snap, &snap).unwrap();
        let fr = d_dr(&r.iter().zip(&snap[0]).map(|(a, b)| a * b).collect::<Vec<_>>(), 0.1, -1.0);
        assert!((rep.alpha0 - trapezoid_abs(&fr, 0.1)).abs() < 1e-14);
        let zero = vec![vec![0.0; 50]];
        let z = weighted_bv(&r, &[Parity::Odd], 1.0, 0.01, &zero, &zero, &zero).unwrap();
        assert_eq!(z.total(), 0.0);
    }
}
