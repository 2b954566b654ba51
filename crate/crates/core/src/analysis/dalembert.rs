//! Exact radial wave fields from spherical means.
//!
//! For a pair `ρ̃_t + λ(w̃_r + 2w̃/r) = 0`, `w̃_t + λρ̃_r = 0` both components
//! solve the radial wave equation with speed `c = |λ|`. Writing the radial
//! solution as `U = H/r` with
//!
//! ```text
//! H(t, r) = K(ct + r) − K(ct − r),   K = ½ A_odd + (1/2c) ∫₀ˣ B_odd,
//! ```
//!
//! where `A_odd`, `B_odd` are the odd extensions of `rU(0, ·)` and `rU_t(0, ·)`,
//! every quantity is a polynomial in `r` between kink lines `r = |ct ± b|`.
//! Dividing that polynomial by `r` coefficient-wise keeps the evaluation exact
//! near the origin, where the spherical-mean cancellation happens.

use crate::poly::{PiecewisePoly, Poly};
use crate::scalar::Real;

use super::profile::RadialProfileFn;
use super::AnalysisError;

/// Data shape of one characteristic family.
#[derive(Debug, Clone, PartialEq)]
pub enum WaveData<T: Real> {
    /// `ρ̃` has zero initial value and initial rate `φ`; `w̃ = ∂_r m` where
    /// `m` is the wave with initial rate `ψ/λ`. Both are spherical means of
    /// the data with no initial displacement.
    Duhamel { phi: RadialProfileFn<T>, psi: RadialProfileFn<T> },
    /// Genuine solution of the linear pair with `ρ̃(0) = rho0`, `w̃(0) = w0`.
    Initial { rho0: RadialProfileFn<T>, w0: RadialProfileFn<T> },
}

impl<T: Real> WaveData<T> {
    pub fn support(&self) -> (T, T) {
        let (a, b) = match self {
            WaveData::Duhamel { phi, psi } => (phi, psi),
            WaveData::Initial { rho0, w0 } => (rho0, w0),
        };
        let merge = |p: &RadialProfileFn<T>| if p.is_zero() { None } else { Some(p.support()) };
        match (merge(a), merge(b)) {
            (Some(x), Some(y)) => (x.0.min(y.0), x.1.max(y.1)),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => (T::zero(), T::zero()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            WaveData::Duhamel { phi, psi } => phi.is_zero() && psi.is_zero(),
            WaveData::Initial { rho0, w0 } => rho0.is_zero() && w0.is_zero(),
        }
    }
}

/// `K` for a wave with odd-extended displacement `a` and velocity `b`,
/// with its first two derivatives.
#[derive(Debug, Clone)]
struct Kernel<T: Real> {
    k: PiecewisePoly<T>,
    k1: PiecewisePoly<T>,
    k2: PiecewisePoly<T>,
    /// Below this radius the window polynomial is divided by `r` exactly.
    r_exact: T,
}

/// `(h/r, (h/r)', (h/r)'')` from the coefficients of `h`.
fn over_r<T: Real>(h: &Poly<T>, r: T) -> (T, T, T) {
    let (mut v, mut d1, mut d2) = (T::zero(), T::zero(), T::zero());
    let inv = T::one() / r;
    let mut pw = inv; // r^(n-1)
    for (n, &c) in h.coeffs().iter().enumerate() {
        let e = T::lit(n as f64 - 1.0);
        v += c * pw;
        d1 += c * e * pw * inv;
        d2 += c * e * (e - T::one()) * pw * inv * inv;
        pw *= r;
    }
    (v, d1, d2)
}

impl<T: Real> Kernel<T> {
    fn new(a: Option<&PiecewisePoly<T>>, b: Option<&PiecewisePoly<T>>, c: T) -> Self {
        let mut k = PiecewisePoly::zero();
        if let Some(a) = a {
            k = k.add(&a.extend_with_parity(-T::one()).scale(T::lit(0.5)));
        }
        if let Some(b) = b {
            let bi = b.extend_with_parity(-T::one()).antiderivative();
            k = k.add(&bi.scale(T::one() / (c + c)));
        }
        let gap = k.breaks().windows(2).fold(T::one(), |g, w| g.min(w[1] - w[0]));
        let k1 = k.derivative();
        let k2 = k1.derivative();
        Kernel { k, k1, k2, r_exact: gap * T::lit(0.1) }
    }

    /// `H` and `J = K'(c0 + r) − K'(c0 − r)` as polynomials in `r` valid on
    /// the window containing `r`.
    fn window(&self, c0: T, r: T) -> (Poly<T>, Poly<T>) {
        let ir = self.k.piece_index(c0 + r);
        let il = self.k.piece_index(c0 - r);
        let pr = self.k.pieces()[ir].shift(c0 - self.k.origin(ir));
        let pl = if il == ir { pr.clone() } else { self.k.pieces()[il].shift(c0 - self.k.origin(il)) };
        let h = pr.sub(&pl.reflect());
        let j = pr.derivative().sub(&pl.derivative().reflect());
        (h, j)
    }

    /// `(U, U_r, U_rr, U_t, U_rt)` at `(c0 = ct, r)`.
    fn eval(&self, c: T, c0: T, r: T) -> [T; 5] {
        if r < self.r_exact {
            let (h, j) = self.window(c0, r);
            let (u, ur, urr) = over_r(&h, r);
            let (jt, jtr, _) = over_r(&j, r);
            return [u, ur, urr, c * jt, c * jtr];
        }
        let (xp, xm) = (c0 + r, c0 - r);
        let (ip, im) = (self.k.piece_index(xp), self.k.piece_index(xm));
        let (kp, km) = (self.k.eval_in(ip, xp), self.k.eval_in(im, xm));
        let (k1p, k1m) = (self.k1.eval_in(ip, xp), self.k1.eval_in(im, xm));
        let (k2p, k2m) = (self.k2.eval_in(ip, xp), self.k2.eval_in(im, xm));
        let inv = T::one() / r;
        let h = (kp - km) * inv;
        let h1 = (k1p + k1m) * inv;
        let h2 = (k2p - k2m) * inv;
        let j = (k1p - k1m) * inv;
        let j1 = (k2p + k2m) * inv;
        let two = T::lit(2.0);
        [h, h1 - h * inv, h2 - (two * h1 - two * h * inv) * inv, c * j, c * (j1 - j * inv)]
    }
}

#[derive(Debug, Clone)]
enum Engine<T: Real> {
    Duhamel { rho: Kernel<T>, w: Kernel<T>, sign: T },
    Initial { pot: Kernel<T> },
    Frozen { f: PiecewisePoly<T>, fd: PiecewisePoly<T>, g: PiecewisePoly<T>, gd: PiecewisePoly<T> },
}

/// Evaluator for `(ρ̃, w̃)` of one family together with radial derivatives.
#[derive(Debug, Clone)]
pub struct WaveField<T: Real> {
    lambda: T,
    c: T,
    support: (T, T),
    engine: Engine<T>,
    /// Signed kink intercepts `β`: kinks sit at `r = |cτ + β|`.
    intercepts: Vec<T>,
}

/// Values of one family at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairValue<T> {
    pub rho: T,
    pub w: T,
    pub rho_r: T,
    pub w_r: T,
}

impl<T: Real> PairValue<T> {
    pub fn z(&self) -> T {
        self.rho + self.w
    }

    pub fn z_r(&self) -> T {
        self.rho_r + self.w_r
    }
}

fn require_continuous<T: Real>(p: &RadialProfileFn<T>, what: &str) -> Result<(), AnalysisError> {
    let tol = T::lit(1e-12) * p.pp().coeff_scale().max(T::one());
    let j = p.max_jump();
    if j > tol {
        return Err(AnalysisError::InvalidProfile(format!(
            "{what} must be continuous (jump {:.3e})",
            j.to_f64_lossy()
        )));
    }
    Ok(())
}

impl<T: Real> WaveField<T> {
    pub fn new(data: &WaveData<T>, lambda: T) -> Result<Self, AnalysisError> {
        let c = lambda.abs();
        let support = data.support();
        let engine = match data {
            WaveData::Duhamel { phi, psi } => {
                if lambda == T::zero() {
                    return Err(AnalysisError::ZeroSpeed);
                }
                require_continuous(psi, "psi")?;
                let sphi = phi.pp().mul_identity();
                let spsi = psi.pp().mul_identity();
                Engine::Duhamel {
                    rho: Kernel::new(None, Some(&sphi), c),
                    w: Kernel::new(None, Some(&spsi), c),
                    sign: lambda.signum(),
                }
            }
            WaveData::Initial { rho0, w0 } => {
                if lambda == T::zero() {
                    Engine::Frozen {
                        f: rho0.pp().clone(),
                        fd: rho0.pp().derivative(),
                        g: w0.pp().clone(),
                        gd: w0.pp().derivative(),
                    }
                } else {
                    require_continuous(rho0, "rho0")?;
                    require_continuous(w0, "w0")?;
                    let g_int = w0.pp().antiderivative();
                    let g0 = g_int.eval(T::zero());
                    let g_int = g_int.add(&PiecewisePoly::new(vec![], vec![Poly::constant(-g0)]));
                    let a = g_int.mul_identity();
                    let b = rho0.pp().mul_identity().scale(-lambda);
                    Engine::Initial { pot: Kernel::new(Some(&a), Some(&b), c) }
                }
            }
        };
        let mut intercepts: Vec<T> = match &engine {
            Engine::Duhamel { rho, w, .. } => rho.k.breaks().iter().chain(w.k.breaks()).copied().collect(),
            Engine::Initial { pot } => pot.k.breaks().to_vec(),
            Engine::Frozen { f, g, .. } => f.breaks().iter().chain(g.breaks()).copied().collect(),
        };
        intercepts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        intercepts.dedup();
        Ok(WaveField { lambda, c, support, engine, intercepts })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn speed(&self) -> T {
        self.c
    }

    pub fn intercepts(&self) -> &[T] {
        &self.intercepts
    }

    /// Radial interval outside which the family vanishes at time `t`.
    pub fn support_at(&self, t: T) -> (T, T) {
        let (lo, hi) = self.support;
        if self.c == T::zero() {
            return (lo, hi);
        }
        let ct = self.c * t;
        ((ct - hi).max(T::zero()), ct + hi)
    }

    /// Radii in `(lo, hi)` where the field is not smooth at time `t`.
    pub fn kinks(&self, t: T, lo: T, hi: T) -> Vec<T> {
        let ct = self.c * t;
        self.intercepts
            .iter()
            .map(|&b| (ct + b).abs())
            .filter(|&x| x > lo && x < hi)
            .collect()
    }

    pub fn eval(&self, t: T, r: T) -> PairValue<T> {
        let c0 = self.c * t;
        match &self.engine {
            Engine::Duhamel { rho, w, sign } => {
                let a = rho.eval(self.c, c0, r);
                let b = w.eval(self.c, c0, r);
                PairValue { rho: a[0], rho_r: a[1], w: *sign * b[1], w_r: *sign * b[2] }
            }
            Engine::Initial { pot } => {
                let v = pot.eval(self.c, c0, r);
                PairValue { rho: -v[3] / self.lambda, rho_r: -v[4] / self.lambda, w: v[1], w_r: v[2] }
            }
            Engine::Frozen { f, fd, g, gd } => PairValue { rho: f.eval(r), rho_r: fd.eval(r), w: g.eval(r), w_r: gd.eval(r) },
        }
    }
}

/// `(ρ̃, w̃)` of the spherical-mean representation with data `φ, ψ`.
pub fn dalembert_pair<T: Real>(
    phi: &RadialProfileFn<T>,
    psi: &RadialProfileFn<T>,
    lambda: T,
    t: T,
    r: T,
) -> Result<(T, T), AnalysisError> {
    if !(r > T::zero()) {
        return Err(AnalysisError::InvalidProfile("evaluation radius must be positive".into()));
    }
    let f = WaveField::new(&WaveData::Duhamel { phi: phi.clone(), psi: psi.clone() }, lambda)?;
    let v = f.eval(t, r);
    Ok((v.rho, v.w))
}

/// Exact solution of the linear pair with speed `lambda` and initial values.
pub fn dalembert_initial<T: Real>(
    rho0: &RadialProfileFn<T>,
    w0: &RadialProfileFn<T>,
    lambda: T,
    t: T,
    r: T,
) -> Result<(T, T), AnalysisError> {
    let f = WaveField::new(&WaveData::Initial { rho0: rho0.clone(), w0: w0.clone() }, lambda)?;
    let v = f.eval(t, r);
    Ok((v.rho, v.w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind() -> RadialProfileFn<f64> {
        RadialProfileFn::<f64>::indicator(1.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn indicator_spherical_mean() {
        let z = RadialProfileFn::<f64>::zero();
        let (rho, w) = dalembert_pair(&ind(), &z, 1.0, 5.0, 4.0).unwrap();
        assert!((rho - 3.0 / 16.0).abs() < 1e-15);
        assert_eq!(w, 0.0);
        let (rho0, _) = dalembert_pair(&ind(), &z, 1.0, 0.0, 1.5).unwrap();
        assert_eq!(rho0, 0.0);
        let (zz, _) = dalembert_pair(&z, &z, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(zz, 0.0);
    }

    #[test]
    fn negative_speed_uses_magnitude() {
        let z = RadialProfileFn::<f64>::zero();
        let (a, _) = dalembert_pair(&ind(), &z, -1.0, 5.0, 4.0).unwrap();
        assert!((a - 3.0 / 16.0).abs() < 1e-15);
        assert!(matches!(dalembert_pair(&ind(), &z, 0.0, 1.0, 1.0), Err(AnalysisError::ZeroSpeed)));
    }

    #[test]
    fn initial_form_reproduces_data() {
        let f = RadialProfileFn::<f64>::bspline(2.0, 0.5, 1.0).unwrap();
        let g = RadialProfileFn::<f64>::tent(1.0, 1.5, 2.5, 0.3).unwrap();
        for &r in &[0.4, 1.2, 1.7, 2.2, 2.9] {
            let (rho, w) = dalembert_initial(&f, &g, -1.5, 0.0, r).unwrap();
            assert!((rho - f.eval(r)).abs() < 1e-13, "r={r}");
            assert!((w - g.eval(r)).abs() < 1e-13, "r={r}");
        }
    }

    #[test]
    fn initial_form_solves_linear_pair() {
        let f = RadialProfileFn::<f64>::bspline(2.0, 0.5, 1.0).unwrap();
        let g = RadialProfileFn::<f64>::bspline(1.5, 0.4, -0.5).unwrap();
        let lam = 1.3;
        let field = WaveField::new(&WaveData::Initial { rho0: f, w0: g }, lam).unwrap();
        let d = 1e-5;
        for &(t, r) in &[(0.5, 1.1), (1.0, 2.3), (2.0, 0.7), (3.0, 4.1)] {
            let v = field.eval(t, r);
            let vp = field.eval(t + d, r);
            let vm = field.eval(t - d, r);
            let rho_t = (vp.rho - vm.rho) / (2.0 * d);
            let w_t = (vp.w - vm.w) / (2.0 * d);
            let res1 = rho_t + lam * (v.w_r + 2.0 * v.w / r);
            let res2 = w_t + lam * v.rho_r;
            assert!(res1.abs() < 1e-6 && res2.abs() < 1e-6, "({t},{r}): {res1} {res2}");
        }
    }

    #[test]
    fn origin_limit_vanishes() {
        let f = RadialProfileFn::<f64>::bspline(1.0, 0.3, 1.0).unwrap();
        let field = WaveField::new(&WaveData::Duhamel { phi: f.clone(), psi: f }, 1.0).unwrap();
        for &r in &[1e-3, 1e-4, 1e-5, 1e-6] {
            let v = field.eval(0.8, r);
            assert!((r * v.z()).abs() < 10.0 * r, "r = {r}: {}", r * v.z());
            assert!(v.z().is_finite());
        }
    }

    #[test]
    fn support_is_an_annulus() {
        let f = RadialProfileFn::<f64>::bspline(1.0, 0.25, 1.0).unwrap();
        let field = WaveField::new(&WaveData::Initial { rho0: f.clone(), w0: RadialProfileFn::<f64>::zero() }, 2.0).unwrap();
        let (lo, hi) = field.support_at(3.0);
        assert_eq!((lo, hi), (4.5, 7.5));
        assert!(field.eval(3.0, 4.4).z().abs() < 1e-12);
        assert!(field.eval(3.0, 7.6).z().abs() < 1e-12);
        assert!(field.eval(3.0, 7.0).z().abs() > 1e-3);
    }
}
