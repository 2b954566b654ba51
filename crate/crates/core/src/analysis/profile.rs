//! Compactly supported piecewise-cubic radial profiles.

use crate::poly::{PiecewisePoly, Poly};
use crate::scalar::Real;

use super::AnalysisError;

/// A compactly supported function of `r ≥ 0` with polynomial pieces of
/// degree at most three.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfileFn<T: Real> {
    pp: PiecewisePoly<T>,
}

/// Cubic B-spline on knots `-2..2`, one polynomial per unit interval written
/// in the local variable `y = x - left knot`.
fn bspline_pieces() -> [[f64; 4]; 4] {
    [
        // (y)^3 / 6
        [0.0, 0.0, 0.0, 1.0 / 6.0],
        // (1 + 3y + 3y^2 - 3y^3) / 6
        [1.0 / 6.0, 0.5, 0.5, -0.5],
        // (4 - 6y^2 + 3y^3) / 6
        [2.0 / 3.0, 0.0, -1.0, 0.5],
        // (1 - y)^3 / 6
        [1.0 / 6.0, -0.5, 0.5, -1.0 / 6.0],
    ]
}

impl<T: Real> RadialProfileFn<T> {
    /// Wraps a piecewise polynomial after checking the profile contract.
    pub fn new(pp: PiecewisePoly<T>) -> Result<Self, AnalysisError> {
        if pp.max_degree() > 3 {
            return Err(AnalysisError::InvalidProfile(format!("degree {} exceeds 3", pp.max_degree())));
        }
        if pp.compact_support().is_none() {
            return Err(AnalysisError::Unbounded);
        }
        if pp.breaks().iter().any(|b| !b.is_finite()) || pp.pieces().iter().any(|p| p.coeffs().iter().any(|c| !c.is_finite())) {
            return Err(AnalysisError::InvalidProfile("non-finite break or coefficient".into()));
        }
        Ok(RadialProfileFn { pp: pp.restrict_nonnegative() })
    }

    /// Breaks `b_0 < … < b_n` and `n` interior pieces in local coordinates.
    pub fn from_pieces(breaks: Vec<T>, coeffs: Vec<Vec<T>>) -> Result<Self, AnalysisError> {
        if breaks.len() < 2 || coeffs.len() + 1 != breaks.len() {
            return Err(AnalysisError::InvalidProfile(format!(
                "{} breaks need {} pieces, got {}",
                breaks.len(),
                breaks.len().saturating_sub(1),
                coeffs.len()
            )));
        }
        if !breaks.windows(2).all(|w| w[0] < w[1]) {
            return Err(AnalysisError::InvalidProfile("breaks must be strictly increasing".into()));
        }
        Self::new(PiecewisePoly::compact(breaks, coeffs.into_iter().map(Poly::new).collect()))
    }

    pub fn zero() -> Self {
        RadialProfileFn { pp: PiecewisePoly::zero() }
    }

    /// `height · 1_[a, b)`.
    pub fn indicator(a: T, b: T, height: T) -> Result<Self, AnalysisError> {
        Self::from_pieces(vec![a, b], vec![vec![height]])
    }

    /// Piecewise-linear tent rising from `a` to `height` at `peak`, back to 0 at `b`.
    pub fn tent(a: T, peak: T, b: T, height: T) -> Result<Self, AnalysisError> {
        if !(a < peak && peak < b) {
            return Err(AnalysisError::InvalidProfile("tent needs a < peak < b".into()));
        }
        Self::from_pieces(
            vec![a, peak, b],
            vec![vec![T::zero(), height / (peak - a)], vec![height, -height / (b - peak)]],
        )
    }

    /// C² cubic B-spline bump centred at `center` with support
    /// `[center − 2·width, center + 2·width]` and peak `height`.
    pub fn bspline(center: T, width: T, height: T) -> Result<Self, AnalysisError> {
        if !(width > T::zero()) {
            return Err(AnalysisError::InvalidProfile("bspline width must be positive".into()));
        }
        let norm = height / T::lit(2.0 / 3.0);
        let breaks: Vec<T> = (0..5).map(|i| center + width * T::lit(i as f64 - 2.0)).collect();
        let pieces = bspline_pieces()
            .iter()
            .map(|c| Poly::new(c.iter().map(|&x| T::lit(x)).collect()).dilate(T::one() / width).scale(norm))
            .collect();
        Self::new(PiecewisePoly::compact(breaks, pieces))
    }

    /// The same profile multiplied by `s`.
    pub fn scaled(&self, s: T) -> Self {
        RadialProfileFn { pp: self.pp.scale(s) }
    }

    /// `λ u(λ r)`.
    pub fn rescaled(&self, lambda: T) -> Self {
        RadialProfileFn { pp: self.pp.rescale(lambda) }
    }

    pub fn pp(&self) -> &PiecewisePoly<T> {
        &self.pp
    }

    pub fn eval(&self, r: T) -> T {
        self.pp.eval(r)
    }

    pub fn derivative(&self, r: T) -> T {
        self.pp.derivative().eval(r)
    }

    /// `[lo, hi]` containing the support.
    pub fn support(&self) -> (T, T) {
        self.pp.compact_support().unwrap_or((T::zero(), T::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.pp.pieces().iter().all(Poly::is_zero)
    }

    /// Largest jump of the function itself at a positive break.
    pub fn max_jump(&self) -> T {
        self.pp
            .jumps(0)
            .into_iter()
            .filter(|(b, _)| *b > T::zero())
            .fold(T::zero(), |m, (_, j)| m.max(j.abs()))
    }
}

impl<T: Real> PiecewisePoly<T> {
    /// Drops everything left of the origin: zero left tail, first break at
    /// or after 0.
    pub fn restrict_nonnegative(&self) -> Self {
        if self.breaks().first().map_or(true, |&b| b >= T::zero()) && self.pieces()[0].is_zero() {
            return self.clone();
        }
        let mut breaks = vec![T::zero()];
        breaks.extend(self.breaks().iter().copied().filter(|&b| b > T::zero()));
        let n = breaks.len();
        let mut pieces = vec![Poly::zero()];
        for k in 0..n {
            let probe = if k + 1 < n { (breaks[k] + breaks[k + 1]) * T::lit(0.5) } else { breaks[k] + T::one() };
            pieces.push(self.local_at(probe, breaks[k]));
        }
        PiecewisePoly::new(breaks, pieces)
    }
}

/// Relative threshold below which a jump counts as absent.
fn jump_tol<T: Real>(h: &PiecewisePoly<T>) -> T {
    let scale = h.coeff_scale().max(h.breaks().iter().fold(T::zero(), |m, b| m.max(b.abs())));
    T::eps() * T::lit(1e4) * scale.max(T::one())
}

/// `∫₀^∞ r^p |h^(k)(r)| dr + Σ_{b>0} b^p |[h^(k−1)]_b|`.
///
/// The second sum is the singular part of `h^(k)` as a measure. Jumps of
/// lower derivatives at positive breaks make the quantity infinite and are
/// reported as an error.
pub fn derivative_measure_norm<T: Real>(h: &PiecewisePoly<T>, k: usize, p: usize) -> Result<T, AnalysisError> {
    let tol = jump_tol(h);
    for order in 0..k.saturating_sub(1) {
        for (b, j) in h.jumps(order) {
            if b > T::zero() && j.abs() > tol {
                return Err(AnalysisError::InsufficientRegularity {
                    order,
                    at: b.to_f64_lossy(),
                    jump: j.to_f64_lossy(),
                });
            }
        }
    }
    let hk = h.nth_derivative(k).mul_power(p);
    let upper = h.breaks().last().copied().unwrap_or(T::zero()).max(T::zero());
    if !hk.pieces().last().map_or(true, Poly::is_zero) {
        return Err(AnalysisError::Unbounded);
    }
    let mut total = hk.abs_integral(T::zero(), upper);
    if k > 0 {
        for (b, j) in h.jumps(k - 1) {
            if b > T::zero() {
                total += b.powi(p as i32) * j.abs();
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bspline_shape() {
        let b = RadialProfileFn::<f64>::bspline(3.0, 0.5, 2.0).unwrap();
        assert!((b.eval(3.0) - 2.0).abs() < 1e-14);
        assert_eq!(b.eval(1.9), 0.0);
        assert_eq!(b.eval(4.1), 0.0);
        // C² across knots.
        for (bk, j) in b.pp().jumps(2) {
            assert!(j.abs() < 1e-12, "second-derivative jump {j} at {bk}");
        }
        assert!(b.pp().jumps(3).iter().any(|(_, j)| j.abs() > 1.0));
    }

    #[test]
    fn bspline_at_origin_is_even_and_clipped() {
        let b = RadialProfileFn::<f64>::bspline(0.0, 1.0, 1.0).unwrap();
        assert_eq!(b.pp().breaks()[0], 0.0);
        assert!((b.eval(0.0) - 1.0).abs() < 1e-15);
        assert!(b.derivative(1e-9).abs() < 1e-8);
        assert!((b.eval(0.5) - (4.0 - 1.5 + 0.375) / 6.0 * 1.5).abs() < 1e-14);
    }

    #[test]
    fn indicator_measure_norms() {
        let ind = RadialProfileFn::<f64>::indicator(1.0, 2.0, 1.0).unwrap();
        assert!((derivative_measure_norm(ind.pp(), 0, 1).unwrap() - 1.5).abs() < 1e-15);
        // ∫ s²|φ'| = 1 + 4
        assert!((derivative_measure_norm(ind.pp(), 1, 2).unwrap() - 5.0).abs() < 1e-14);
        assert!(derivative_measure_norm(ind.pp(), 2, 0).is_err());
    }

    #[test]
    fn profile_rejects_high_degree() {
        assert!(RadialProfileFn::<f64>::from_pieces(vec![0.0, 1.0], vec![vec![0.0, 0.0, 0.0, 0.0, 1.0]]).is_err());
        assert!(RadialProfileFn::<f64>::from_pieces(vec![1.0, 0.0], vec![vec![1.0]]).is_err());
    }
}
