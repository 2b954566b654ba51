//! Radial reduction and the characteristic change of variables.
//!
//! For `ρ = ρ(t, r)`, `v_p = (x/r) w_p(t, r)` the full system collapses to
//!
//! ```text
//! ρ_t + B w_r + (2/r) B w = Γ(ρ, ρ) + Ω(w, w)
//! w_t + C ρ_r            = Υ(ρ, w)
//! ```
//!
//! and the cross-product tensor drops out. With `ρ̃ = L[ρ; 0]`, `w̃ = L[0; w]`
//! each family `e` decouples into a pair moving at `λ_e`.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::scalar::Real;
use crate::spectral::{characteristic_system, CharacteristicSystem, SpectralError};
use crate::system_model::{SpecError, SystemSpec, Tensor3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("field dimension mismatch: {0}")]
    Dimension(String),
}

/// Coefficients of the radial system; the cross-product tensor is absent.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSystem<T> {
    pub l: usize,
    pub m: usize,
    pub b: DMatrix<T>,
    pub c: DMatrix<T>,
    pub gamma: Tensor3<T>,
    pub omega: Tensor3<T>,
    pub upsilon: Tensor3<T>,
}

/// The diagonal characteristic form used by the radial solver.
pub type DiagonalRadialSystem<T> = CharacteristicSystem<T>;

pub fn reduce_radial<T: Real>(spec: &SystemSpec<T>) -> Result<RadialSystem<T>, ReductionError> {
    spec.ensure_valid()?;
    Ok(RadialSystem {
        l: spec.l,
        m: spec.m,
        b: spec.b.clone(),
        c: spec.c.clone(),
        gamma: spec.gamma.clone(),
        omega: spec.omega.clone(),
        upsilon: spec.upsilon.clone(),
    })
}

pub fn diagonal_radial_system<T: Real>(spec: &SystemSpec<T>) -> Result<DiagonalRadialSystem<T>, SpectralError> {
    characteristic_system(spec)
}

impl<T: Real> RadialSystem<T> {
    /// Quadratic right-hand side `(Q^ρ, Q^w)` at one point.
    pub fn quadratic_rhs(&self, rho: &[T], w: &[T]) -> (Vec<T>, Vec<T>) {
        let qr = (0..self.l)
            .map(|k| {
                let mut acc = T::zero();
                for i in 0..self.l {
                    for j in 0..self.l {
                        acc += self.gamma.get(k, i, j) * rho[i] * rho[j];
                    }
                }
                for s in 0..self.m {
                    for q in 0..self.m {
                        acc += self.omega.get(k, s, q) * w[s] * w[q];
                    }
                }
                acc
            })
            .collect();
        let qw = (0..self.m)
            .map(|p| {
                let mut acc = T::zero();
                for j in 0..self.l {
                    for q in 0..self.m {
                        acc += self.upsilon.get(p, j, q) * rho[j] * w[q];
                    }
                }
                acc
            })
            .collect();
        (qr, qw)
    }

    /// Full right-hand side of `(ρ_t, w_t)` at radius `r` given values and
    /// radial derivatives.
    pub fn time_derivative(&self, r: T, rho: &[T], w: &[T], rho_r: &[T], w_r: &[T]) -> (Vec<T>, Vec<T>) {
        let (mut qr, mut qw) = self.quadratic_rhs(rho, w);
        let two_over_r = T::lit(2.0) / r;
        for j in 0..self.l {
            for q in 0..self.m {
                qr[j] -= self.b[(j, q)] * (w_r[q] + two_over_r * w[q]);
            }
        }
        for p in 0..self.m {
            for k in 0..self.l {
                qw[p] -= self.c[(p, k)] * rho_r[k];
            }
        }
        (qr, qw)
    }
}

/// Characteristic quadratic sources `(Σ g1 z z, Σ g2 z z)` with `z = ρ̃ + w̃`.
pub fn characteristic_quadratic<T: Real>(sys: &DiagonalRadialSystem<T>, z: &[T]) -> (Vec<T>, Vec<T>) {
    let n = sys.dim();
    let mut s1 = vec![T::zero(); n];
    let mut s2 = vec![T::zero(); n];
    for e in 0..n {
        for a in 0..n {
            if z[a] == T::zero() {
                continue;
            }
            for b in 0..n {
                let zz = z[a] * z[b];
                s1[e] += sys.g1.get(e, a, b) * zz;
                s2[e] += sys.g2.get(e, a, b) * zz;
            }
        }
    }
    (s1, s2)
}

fn check_fields<T>(fields: &[Vec<T>], count: usize, what: &str) -> Result<usize, ReductionError> {
    if fields.len() != count {
        return Err(ReductionError::Dimension(format!("{what}: expected {count} channels, got {}", fields.len())));
    }
    let len = fields.first().map_or(0, Vec::len);
    if fields.iter().any(|f| f.len() != len) {
        return Err(ReductionError::Dimension(format!("{what}: channels have different lengths")));
    }
    Ok(len)
}

/// Pointwise `ρ̃ = L[ρ; 0]`, `w̃ = L[0; w]` on a grid; fields are `[channel][cell]`.
pub fn to_characteristic<T: Real>(
    rho: &[Vec<T>],
    w: &[Vec<T>],
    l_mat: &DMatrix<T>,
) -> Result<(Vec<Vec<T>>, Vec<Vec<T>>), ReductionError> {
    let n = l_mat.nrows();
    if l_mat.ncols() != n || rho.len() + w.len() != n {
        return Err(ReductionError::Dimension(format!(
            "{} + {} physical channels against a {}×{} matrix",
            rho.len(),
            w.len(),
            l_mat.nrows(),
            l_mat.ncols()
        )));
    }
    let nl = rho.len();
    let len_r = check_fields(rho, nl, "rho")?;
    let len_w = check_fields(w, w.len(), "w")?;
    let len = if nl == 0 { len_w } else { len_r };
    if !w.is_empty() && len_w != len {
        return Err(ReductionError::Dimension("rho and w have different lengths".into()));
    }
    let mut rt = vec![vec![T::zero(); len]; n];
    let mut wt = vec![vec![T::zero(); len]; n];
    for e in 0..n {
        for j in 0..nl {
            let c = l_mat[(e, j)];
            if c != T::zero() {
                for (o, &x) in rt[e].iter_mut().zip(&rho[j]) {
                    *o += c * x;
                }
            }
        }
        for q in 0..w.len() {
            let c = l_mat[(e, nl + q)];
            if c != T::zero() {
                for (o, &x) in wt[e].iter_mut().zip(&w[q]) {
                    *o += c * x;
                }
            }
        }
    }
    Ok((rt, wt))
}

/// Inverse of [`to_characteristic`]: `[ρ; w] = R (ρ̃ + w̃)`.
pub fn from_characteristic<T: Real>(
    rho_tilde: &[Vec<T>],
    w_tilde: &[Vec<T>],
    r_mat: &DMatrix<T>,
    l: usize,
) -> Result<(Vec<Vec<T>>, Vec<Vec<T>>), ReductionError> {
    let n = r_mat.nrows();
    if r_mat.ncols() != n || l > n {
        return Err(ReductionError::Dimension(format!("R is {}×{}, l = {l}", r_mat.nrows(), r_mat.ncols())));
    }
    let len = check_fields(rho_tilde, n, "rho_tilde")?;
    if check_fields(w_tilde, n, "w_tilde")? != len {
        return Err(ReductionError::Dimension("rho_tilde and w_tilde have different lengths".into()));
    }
    let mut phys = vec![vec![T::zero(); len]; n];
    for (i, out) in phys.iter_mut().enumerate() {
        for a in 0..n {
            let c = r_mat[(i, a)];
            if c != T::zero() {
                for ((o, &x), &y) in out.iter_mut().zip(&rho_tilde[a]).zip(&w_tilde[a]) {
                    *o += c * (x + y);
                }
            }
        }
    }
    let w = phys.split_off(l);
    Ok((phys, w))
}

/// Same transform at a single point.
pub fn point_to_characteristic<T: Real>(rho: &[T], w: &[T], l_mat: &DMatrix<T>) -> (DVector<T>, DVector<T>) {
    let nl = rho.len();
    let n = l_mat.nrows();
    let mut pr = DVector::zeros(n);
    let mut pw = DVector::zeros(n);
    pr.rows_mut(0, nl).copy_from_slice(rho);
    pw.rows_mut(nl, w.len()).copy_from_slice(w);
    (l_mat * pr, l_mat * pw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::characteristic_system;

    fn acoustic() -> SystemSpec<f64> {
        let mut s = SystemSpec::zeros(1, 1);
        s.b[(0, 0)] = 1.0;
        s.c[(0, 0)] = 1.0;
        s
    }

    #[test]
    fn acoustic_reduces_to_linear_radial_wave() {
        let r = reduce_radial(&acoustic()).unwrap();
        let (rt, wt) = r.time_derivative(2.0, &[0.3], &[0.5], &[1.0], &[-1.0]);
        assert_eq!(rt, vec![-(-1.0 + 0.5)]);
        assert_eq!(wt, vec![-1.0]);
    }

    #[test]
    fn omega_bar_only_has_no_radial_source() {
        let mut s = SystemSpec::<f64>::zeros(1, 2);
        s.omega_bar.set(0, 0, 1, 1.0);
        s.omega_bar.set(1, 1, 0, -2.0);
        let r = reduce_radial(&s).unwrap();
        let (a, b) = r.quadratic_rhs(&[1.0], &[0.3, -0.7]);
        assert!(a.iter().chain(&b).all(|x| *x == 0.0));
    }

    #[test]
    fn identity_transform_pads() {
        let l = DMatrix::<f64>::identity(2, 2);
        let (rt, wt) = to_characteristic(&[vec![1.0, 2.0]], &[vec![3.0, 4.0]], &l).unwrap();
        assert_eq!(rt, vec![vec![1.0, 2.0], vec![0.0, 0.0]]);
        assert_eq!(wt, vec![vec![0.0, 0.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn acoustic_characteristic_variables() {
        let ch = characteristic_system(&acoustic()).unwrap();
        let (rt, wt) = to_characteristic(&[vec![2.0]], &[vec![0.5]], &ch.l).unwrap();
        // L rows (1, −1) and (1, 1).
        let close = |a: f64, b: f64| (a - b).abs() < 1e-14;
        assert!(close(rt[0][0], 2.0) && close(rt[1][0], 2.0));
        assert!(close(wt[0][0], -0.5) && close(wt[1][0], 0.5));
        let (rho, w) = from_characteristic(&rt, &wt, &ch.r, 1).unwrap();
        assert!((rho[0][0] - 2.0).abs() < 1e-14 && (w[0][0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn mismatched_fields_rejected() {
        let l = DMatrix::<f64>::identity(2, 2);
        assert!(to_characteristic(&[vec![1.0]], &[], &l).is_err());
        assert!(to_characteristic(&[vec![1.0]], &[vec![1.0, 2.0]], &l).is_err());
    }
}
