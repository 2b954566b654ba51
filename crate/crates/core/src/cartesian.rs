//! Low-resolution Lax–Friedrichs solver for the full 3D system, used as an
//! independent check of rotational invariance and of the radial reduction.

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::RadialProfileFn;
use crate::scalar::Real;
use crate::system_model::{quadratic_into, FullMatrices, SpecError, SystemSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CartesianError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("stability number {0} exceeds 1")]
    Stability(f64),
    #[error("non-finite value at t = {t}, node {node:?}")]
    NonFinite { t: f64, node: [usize; 3] },
    #[error("not a grid-preserving rotation")]
    NotGridRotation,
}

/// `n` nodes per axis on `[−X, X]³`, origin at the middle node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CartesianGrid<T: Real> {
    half_width: T,
    n: usize,
    hx: T,
}

impl<T: Real> CartesianGrid<T> {
    pub fn new(half_width: T, n: usize) -> Result<Self, CartesianError> {
        if n < 17 || n % 2 == 0 {
            return Err(CartesianError::InvalidGrid(format!("n must be odd and at least 17, got {n}")));
        }
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(CartesianError::InvalidGrid(format!("half-width must be positive, got {half_width}")));
        }
        Ok(CartesianGrid { half_width, n, hx: (half_width + half_width) / T::from_usize_lossy(n - 1) })
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hx(&self) -> T {
        self.hx
    }

    pub fn nodes(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn coord(&self, i: usize) -> T {
        T::from_usize_lossy(i) * self.hx - self.half_width
    }

    /// Linear node index; `x` fastest, `z` slowest.
    #[inline]
    pub fn node(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.n + j) * self.n + i
    }

    pub fn position(&self, i: usize, j: usize, k: usize) -> [T; 3] {
        [self.coord(i), self.coord(j), self.coord(k)]
    }
}

/// All `l + 3m` fields, stored node-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianState<T: Real> {
    pub t: T,
    pub grid: CartesianGrid<T>,
    pub dim: usize,
    pub data: Vec<T>,
}

impl<T: Real> CartesianState<T> {
    pub fn zeros(grid: CartesianGrid<T>, dim: usize) -> Self {
        CartesianState { t: T::zero(), grid, dim, data: vec![T::zero(); grid.nodes() * dim] }
    }

    /// Fills every node with `f(x, out)`.
    pub fn from_fn<F: Fn([T; 3], &mut [T]) + Sync>(grid: CartesianGrid<T>, dim: usize, f: F) -> Self {
        let mut s = Self::zeros(grid, dim);
        let n = grid.n();
        s.data.par_chunks_mut(n * n * dim).enumerate().for_each(|(k, slab)| {
            for j in 0..n {
                for i in 0..n {
                    let o = (j * n + i) * dim;
                    f(grid.position(i, j, k), &mut slab[o..o + dim]);
                }
            }
        });
        s
    }

    pub fn at(&self, i: usize, j: usize, k: usize) -> &[T] {
        let o = self.grid.node(i, j, k) * self.dim;
        &self.data[o..o + self.dim]
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn max_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }
}

/// `dt · Σ‖A_i‖∞ / hx`; the step is stable when this is at most 1.
pub fn stability_number<T: Real>(mats: &FullMatrices<T>, grid: &CartesianGrid<T>, dt: T) -> T {
    dt * mats.inf_norm_sum() / grid.hx()
}

/// One Lax–Friedrichs step with explicit source and clamped boundaries.
pub fn step3d<T: Real>(
    state: &CartesianState<T>,
    mats: &FullMatrices<T>,
    spec: &SystemSpec<T>,
    dt: T,
) -> Result<CartesianState<T>, CartesianError> {
    let dim = state.dim;
    if mats.dim() != dim || spec.full_dim() != dim {
        return Err(CartesianError::InvalidData(format!(
            "state has {dim} fields, matrices {}, system {}",
            mats.dim(),
            spec.full_dim()
        )));
    }
    let grid = state.grid;
    let nu = stability_number(mats, &grid, dt);
    if nu > T::one() + T::lit(1e-12) {
        return Err(CartesianError::Stability(nu.to_f64_lossy()));
    }
    let n = grid.n();
    let a: Vec<Vec<T>> = mats.a.iter().map(|m| (0..dim * dim).map(|x| m[(x / dim, x % dim)]).collect()).collect();
    let coef = dt / (grid.hx() + grid.hx());
    let sixth = T::one() / T::lit(6.0);
    let quad = spec.has_quadratic();
    let src = &state.data;
    let mut out = vec![T::zero(); src.len()];

    out.par_chunks_mut(n * n * dim).enumerate().for_each(|(k, slab)| {
        let mut q = vec![T::zero(); dim];
        let at = |i: usize, j: usize, k: usize| {
            let o = grid.node(i, j, k) * dim;
            &src[o..o + dim]
        };
        for j in 0..n {
            for i in 0..n {
                let (im, ip) = (i.saturating_sub(1), (i + 1).min(n - 1));
                let (jm, jp) = (j.saturating_sub(1), (j + 1).min(n - 1));
                let (km, kp) = (k.saturating_sub(1), (k + 1).min(n - 1));
                let pairs = [(at(ip, j, k), at(im, j, k)), (at(i, jp, k), at(i, jm, k)), (at(i, j, kp), at(i, j, km))];
                let u = at(i, j, k);
                if quad {
                    quadratic_into(spec, u, &mut q);
                }
                let o = (j * n + i) * dim;
                for c in 0..dim {
                    let mut avg = T::zero();
                    let mut flux = T::zero();
                    for (d, (up, dn)) in pairs.iter().enumerate() {
                        avg += up[c] + dn[c];
                        let row = &a[d][c * dim..(c + 1) * dim];
                        for cc in 0..dim {
                            if row[cc] != T::zero() {
                                flux += row[cc] * (up[cc] - dn[cc]);
                            }
                        }
                    }
                    slab[o + c] = avg * sixth - coef * flux + if quad { dt * q[c] } else { T::zero() };
                }
            }
        }
    });

    let next = CartesianState { t: state.t + dt, grid, dim, data: out };
    if let Some(p) = next.data.iter().position(|x| !x.is_finite()) {
        let node = p / dim;
        return Err(CartesianError::NonFinite {
            t: next.t.to_f64_lossy(),
            node: [node % n, (node / n) % n, node / (n * n)],
        });
    }
    Ok(next)
}

/// Runs `steps` steps of size `dt`.
pub fn evolve<T: Real>(
    init: &CartesianState<T>,
    mats: &FullMatrices<T>,
    spec: &SystemSpec<T>,
    dt: T,
    steps: usize,
) -> Result<CartesianState<T>, CartesianError> {
    let mut s = init.clone();
    for _ in 0..steps {
        s = step3d(&s, mats, spec, dt)?;
    }
    Ok(s)
}

/// Step size dividing `t_end` with stability number at most `cfl ≤ 1`.
pub fn time_step3d<T: Real>(mats: &FullMatrices<T>, grid: &CartesianGrid<T>, t_end: T, cfl: T) -> (T, usize) {
    let speed = mats.inf_norm_sum().max(T::eps());
    let dt_max = cfl * grid.hx() / speed;
    let steps = (t_end / dt_max).ceil().to_f64_lossy().max(1.0) as usize;
    (t_end / T::from_usize_lossy(steps), steps)
}

/// `ρ_j(|x|)` and `v_p = (x/|x|) w_p(|x|)`, zero vector part at the origin.
pub fn radialize<T: Real, F: Fn(usize, T) -> T + Sync, G: Fn(usize, T) -> T + Sync>(
    grid: CartesianGrid<T>,
    l: usize,
    m: usize,
    rho: F,
    w: G,
) -> Result<CartesianState<T>, CartesianError> {
    for q in 0..m {
        let w0 = w(q, T::zero());
        if w0.abs() > T::lit(1e-10) {
            return Err(CartesianError::InvalidData(format!("w[{q}](0) = {w0} must vanish")));
        }
    }
    Ok(CartesianState::from_fn(grid, l + 3 * m, |x, out| {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        for j in 0..l {
            out[j] = rho(j, r);
        }
        if r > T::zero() {
            for q in 0..m {
                let wq = w(q, r);
                for a in 0..3 {
                    out[l + 3 * q + a] = x[a] / r * wq;
                }
            }
        }
    }))
}

/// [`radialize`] for piecewise profiles.
pub fn radialize_profiles<T: Real>(
    grid: CartesianGrid<T>,
    rho: &[RadialProfileFn<T>],
    w: &[RadialProfileFn<T>],
) -> Result<CartesianState<T>, CartesianError> {
    radialize(grid, rho.len(), w.len(), |j, r| rho[j].eval(r), |q, r| w[q].eval(r))
}

/// The 26 unit directions `(a, b, c)/|(a, b, c)|`, entries in `{−1, 0, 1}`.
pub fn ray_directions<T: Real>() -> Vec<[T; 3]> {
    let mut out = Vec::with_capacity(26);
    for a in -1i32..=1 {
        for b in -1i32..=1 {
            for c in -1i32..=1 {
                if (a, b, c) == (0, 0, 0) {
                    continue;
                }
                let norm = T::from_usize_lossy((a * a + b * b + c * c) as usize).sqrt();
                out.push([T::lit(a as f64) / norm, T::lit(b as f64) / norm, T::lit(c as f64) / norm]);
            }
        }
    }
    out
}

/// Four-point Lagrange stencil start and weights for coordinate `x`.
fn cubic_stencil<T: Real>(grid: &CartesianGrid<T>, x: T) -> (usize, [T; 4]) {
    let n = grid.n();
    let s = (x + grid.half_width()) / grid.hx();
    let base = (s.floor().to_f64_lossy() as i64 - 1).clamp(0, n as i64 - 4) as usize;
    let y = s - T::from_usize_lossy(base);
    let mut w = [T::one(); 4];
    for (a, wa) in w.iter_mut().enumerate() {
        for b in 0..4 {
            if a != b {
                *wa *= (y - T::from_usize_lossy(b)) / (T::from_usize_lossy(a) - T::from_usize_lossy(b));
            }
        }
    }
    (base, w)
}

/// Tricubic Lagrange interpolation of every field at `x`.
pub fn interpolate<T: Real>(state: &CartesianState<T>, x: [T; 3], out: &mut [T]) {
    let g = &state.grid;
    let (bi, wi) = cubic_stencil(g, x[0]);
    let (bj, wj) = cubic_stencil(g, x[1]);
    let (bk, wk) = cubic_stencil(g, x[2]);
    out.iter_mut().for_each(|v| *v = T::zero());
    for c in 0..4 {
        for b in 0..4 {
            let wbc = wj[b] * wk[c];
            for a in 0..4 {
                let wt = wi[a] * wbc;
                for (o, &u) in out.iter_mut().zip(state.at(bi + a, bj + b, bk + c)) {
                    *o += wt * u;
                }
            }
        }
    }
}

/// Profiles along the 26 rays, indexed `[ray][channel][radius]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSampling<T: Real> {
    pub directions: Vec<[T; 3]>,
    pub radii: Vec<T>,
    pub rho: Vec<Vec<Vec<T>>>,
    /// Vector parts projected on the ray direction.
    pub w: Vec<Vec<Vec<T>>>,
    /// Largest spread between rays over all channels and radii.
    pub spread: T,
}

impl<T: Real> RadialSampling<T> {
    /// Ray average of `ρ` and `w`, indexed `[channel][radius]`.
    pub fn mean(&self) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
        let inv = T::one() / T::from_usize_lossy(self.directions.len());
        let avg = |f: &Vec<Vec<Vec<T>>>| -> Vec<Vec<T>> {
            let (ch, nr) = (f[0].len(), self.radii.len());
            (0..ch)
                .map(|c| (0..nr).map(|k| f.iter().fold(T::zero(), |s, ray| s + ray[c][k]) * inv).collect())
                .collect()
        };
        (avg(&self.rho), avg(&self.w))
    }
}

/// Samples the state along every ray at the given radii.
pub fn sample_radial<T: Real>(state: &CartesianState<T>, l: usize, radii: &[T]) -> Result<RadialSampling<T>, CartesianError> {
    if l > state.dim || (state.dim - l) % 3 != 0 {
        return Err(CartesianError::InvalidData(format!("{} fields incompatible with l = {l}", state.dim)));
    }
    let m = (state.dim - l) / 3;
    let limit = state.grid.half_width();
    if radii.iter().any(|r| !(*r >= T::zero()) || *r > limit) {
        return Err(CartesianError::InvalidData("sampling radii must lie in [0, X]".into()));
    }
    let dirs = ray_directions::<T>();
    let per_ray: Vec<(Vec<Vec<T>>, Vec<Vec<T>>)> = dirs
        .par_iter()
        .map(|d| {
            let mut rho = vec![vec![T::zero(); radii.len()]; l];
            let mut w = vec![vec![T::zero(); radii.len()]; m];
            let mut buf = vec![T::zero(); state.dim];
            for (k, &r) in radii.iter().enumerate() {
                interpolate(state, [d[0] * r, d[1] * r, d[2] * r], &mut buf);
                for j in 0..l {
                    rho[j][k] = buf[j];
                }
                for q in 0..m {
                    w[q][k] = (0..3).fold(T::zero(), |s, a| s + buf[l + 3 * q + a] * d[a]);
                }
            }
            (rho, w)
        })
        .collect();
    let (rho, w): (Vec<_>, Vec<_>) = per_ray.into_iter().unzip();
    let mut spread = T::zero();
    for field in [&rho, &w] {
        let ch = field.first().map_or(0, Vec::len);
        for c in 0..ch {
            for k in 0..radii.len() {
                let (lo, hi) = field.iter().fold((T::max_value().unwrap(), T::min_value().unwrap()), |(lo, hi), ray| {
                    (lo.min(ray[c][k]), hi.max(ray[c][k]))
                });
                spread = spread.max(hi - lo);
            }
        }
    }
    Ok(RadialSampling { directions: dirs, radii: radii.to_vec(), rho, w, spread })
}

/// A rotation mapping the node lattice onto itself: a signed permutation
/// matrix with determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridRotation {
    m: [[i32; 3]; 3],
}

impl GridRotation {
    pub fn new(m: [[i32; 3]; 3]) -> Result<Self, CartesianError> {
        let rows_ok = m.iter().all(|row| row.iter().filter(|x| **x != 0).count() == 1 && row.iter().all(|x| x.abs() <= 1));
        let cols_ok = (0..3).all(|c| m.iter().filter(|row| row[c] != 0).count() == 1);
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if rows_ok && cols_ok && det == 1 {
            Ok(GridRotation { m })
        } else {
            Err(CartesianError::NotGridRotation)
        }
    }

    pub fn identity() -> Self {
        GridRotation { m: [[1, 0, 0], [0, 1, 0], [0, 0, 1]] }
    }

    /// Quarter turn about the `z` axis.
    pub fn quarter_turn_z() -> Self {
        GridRotation { m: [[0, -1, 0], [1, 0, 0], [0, 0, 1]] }
    }

    pub fn entries(&self) -> [[i32; 3]; 3] {
        self.m
    }

    pub fn matrix<T: Real>(&self) -> Matrix3<T> {
        Matrix3::from_fn(|i, j| T::lit(self.m[i][j] as f64))
    }

    fn apply(&self, c: [i64; 3]) -> [i64; 3] {
        let mut out = [0i64; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| self.m[i][j] as i64 * c[j]).sum();
        }
        out
    }
}

/// The 24 rotations of the cube.
pub fn cube_rotations() -> Vec<GridRotation> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(24);
    for p in perms {
        for signs in 0..8 {
            let mut m = [[0i32; 3]; 3];
            for i in 0..3 {
                m[i][p[i]] = if signs >> i & 1 == 1 { -1 } else { 1 };
            }
            if let Ok(r) = GridRotation::new(m) {
                out.push(r);
            }
        }
    }
    out
}

/// `u'(x) = (ρ(Ox), Oᵀ v_p(Ox))`.
pub fn rotate_field<T: Real>(state: &CartesianState<T>, l: usize, rot: &GridRotation) -> Result<CartesianState<T>, CartesianError> {
    let dim = state.dim;
    if l > dim || (dim - l) % 3 != 0 {
        return Err(CartesianError::InvalidData(format!("{dim} fields incompatible with l = {l}")));
    }
    let m = (dim - l) / 3;
    let grid = state.grid;
    let n = grid.n();
    let mid = (n as i64 - 1) / 2;
    let mut out = state.clone();
    out.data.par_chunks_mut(n * n * dim).enumerate().for_each(|(k, slab)| {
        for j in 0..n {
            for i in 0..n {
                let y = rot.apply([i as i64 - mid, j as i64 - mid, k as i64 - mid]);
                let src = state.at((y[0] + mid) as usize, (y[1] + mid) as usize, (y[2] + mid) as usize);
                let o = (j * n + i) * dim;
                slab[o..o + l].copy_from_slice(&src[..l]);
                for p in 0..m {
                    for a in 0..3 {
                        // (Oᵀ v)_a = Σ_b O[b][a] v_b
                        let mut acc = T::zero();
                        for b in 0..3 {
                            let c = rot.m[b][a];
                            if c != 0 {
                                acc += T::lit(c as f64) * src[l + 3 * p + b];
                            }
                        }
                        slab[o + l + 3 * p + a] = acc;
                    }
                }
            }
        }
    });
    Ok(out)
}

/// Largest difference between evolving rotated data and rotating evolved
/// data after `steps` steps.
pub fn rotation_equivariance_check<T: Real>(
    init: &CartesianState<T>,
    mats: &FullMatrices<T>,
    spec: &SystemSpec<T>,
    dt: T,
    steps: usize,
    rot: &GridRotation,
) -> Result<T, CartesianError> {
    let l = spec.l;
    let a = evolve(&rotate_field(init, l, rot)?, mats, spec, dt, steps)?;
    let b = rotate_field(&evolve(init, mats, spec, dt, steps)?, l, rot)?;
    Ok(a.max_diff(&b))
}

/// `max_x |Q(u(x), u(x))|`.
pub fn quadratic_source_max<T: Real>(state: &CartesianState<T>, spec: &SystemSpec<T>) -> T {
    let dim = state.dim;
    state
        .data
        .par_chunks(dim)
        .map(|u| {
            let mut q = vec![T::zero(); dim];
            quadratic_into(spec, u, &mut q);
            q.iter().fold(T::zero(), |m, x| m.max(x.abs()))
        })
        .reduce(T::zero, |a, b| a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system_model::assemble_full_matrices;

    fn acoustic() -> SystemSpec<f64> {
        let mut s = SystemSpec::zeros(1, 1);
        s.b[(0, 0)] = 1.0;
        s.c[(0, 0)] = 1.0;
        s
    }

    fn coupled() -> SystemSpec<f64> {
        let mut s = SystemSpec::zeros(1, 2);
        s.b[(0, 0)] = 1.0;
        s.b[(0, 1)] = 0.5;
        s.c[(0, 0)] = 1.0;
        s.c[(1, 0)] = 0.5;
        s.d[(0, 1)] = 0.3;
        s.d[(1, 0)] = -0.2;
        s.gamma.set(0, 0, 0, 0.4);
        s.omega.set(0, 0, 1, 0.7);
        s.upsilon.set(1, 0, 0, -0.3);
        s.omega_bar.set(0, 0, 1, 0.6);
        s
    }

    fn grid() -> CartesianGrid<f64> {
        CartesianGrid::new(8.0, 17).unwrap()
    }

    fn bump(r: f64) -> f64 {
        RadialProfileFn::bspline(3.0, 1.0, 0.2).unwrap().eval(r)
    }

    #[test]
    fn grid_contract() {
        assert!(CartesianGrid::<f64>::new(1.0, 16).is_err());
        assert!(CartesianGrid::<f64>::new(1.0, 15).is_err());
        let g = grid();
        assert_eq!(g.hx(), 1.0);
        assert_eq!(g.coord(8), 0.0);
    }

    #[test]
    fn zero_and_constant_states() {
        let spec = acoustic();
        let mats = assemble_full_matrices(&spec).unwrap();
        let z = CartesianState::zeros(grid(), 4);
        assert_eq!(step3d(&z, &mats, &spec, 0.3, ).unwrap().max_abs(), 0.0);
        let c = CartesianState::from_fn(grid(), 4, |_, out| out.copy_from_slice(&[1.0, -2.0, 0.5, 3.0]));
        let next = step3d(&c, &mats, &spec, 0.3).unwrap();
        assert!(next.max_diff(&c) < 1e-15);
    }

    #[test]
    fn stability_violation() {
        let spec = acoustic();
        let mats = assemble_full_matrices(&spec).unwrap();
        let z = CartesianState::zeros(grid(), 4);
        assert!(matches!(step3d(&z, &mats, &spec, 0.34), Err(CartesianError::Stability(_))));
    }

    #[test]
    fn radialize_vector_part() {
        let s = radialize(grid(), 1, 1, |_, _| 2.0, |_, r| r).unwrap();
        assert_eq!(s.at(9, 8, 8), &[2.0, 1.0, 0.0, 0.0]);
        assert_eq!(s.at(8, 8, 8), &[2.0, 0.0, 0.0, 0.0]);
        assert!(radialize(grid(), 1, 1, |_, _| 0.0, |_, _| 1.0).is_err());
    }

    #[test]
    fn radial_round_trip_and_spread() {
        let g = CartesianGrid::new(8.0, 49).unwrap();
        let s = radialize(g, 1, 1, |_, r| bump(r), |_, r| r * bump(r)).unwrap();
        let radii: Vec<f64> = (0..30).map(|k| 0.2 * k as f64).collect();
        let smp = sample_radial(&s, 1, &radii).unwrap();
        let (rho, w) = smp.mean();
        for (k, &r) in radii.iter().enumerate() {
            assert!((rho[0][k] - bump(r)).abs() < 5e-3, "rho at {r}");
            assert!((w[0][k] - r * bump(r)).abs() < 2e-2, "w at {r}");
        }
        assert!(smp.spread < 3e-2, "spread {}", smp.spread);
        let skew = CartesianState::from_fn(g, 4, |x, out| out[0] = bump((x[0] - 1.0).abs() + x[1].abs() + x[2].abs()));
        assert!(sample_radial(&skew, 1, &radii).unwrap().spread > 0.1);
    }

    #[test]
    fn rotations_form_the_cube_group() {
        let rots = cube_rotations();
        assert_eq!(rots.len(), 24);
        assert!(GridRotation::new([[-1, 0, 0], [0, 1, 0], [0, 0, 1]]).is_err());
        assert!(GridRotation::new([[1, 1, 0], [0, 1, 0], [0, 0, 1]]).is_err());
    }

    #[test]
    fn scheme_commutes_with_grid_rotations() {
        let spec = coupled();
        let mats = assemble_full_matrices(&spec).unwrap();
        let init = CartesianState::from_fn(grid(), 7, |x, out| {
            for (c, o) in out.iter_mut().enumerate() {
                *o = bump((x[0] - 0.5 * c as f64).abs() + (x[1] + 1.0).abs() + x[2].abs() * 0.5);
            }
        });
        let (dt, _) = time_step3d(&mats, &init.grid, 1.0, 0.9);
        assert_eq!(rotation_equivariance_check(&init, &mats, &spec, dt, 5, &GridRotation::identity()).unwrap(), 0.0);
        for rot in cube_rotations() {
            let d = rotation_equivariance_check(&init, &mats, &spec, dt, 5, &rot).unwrap();
            assert!(d <= 1e-12, "{rot:?}: {d}");
        }
        let mut bad = mats.clone();
        bad.a[0][(0, 1)] += 0.1;
        let d = rotation_equivariance_check(&init, &bad, &spec, dt, 5, &GridRotation::quarter_turn_z()).unwrap();
        assert!(d > 1e-4, "perturbed system discrepancy {d}");
    }

    #[test]
    fn cross_product_source_vanishes_on_radial_data() {
        let mut spec = SystemSpec::<f64>::zeros(1, 2);
        spec.omega_bar.set(0, 0, 1, 1.0);
        spec.omega_bar.set(1, 0, 1, -1.0);
        let g = grid();
        let radial = radialize(g, 1, 2, |_, r| bump(r), |q, r| r * bump(r) * (1.0 + q as f64)).unwrap();
        assert!(quadratic_source_max(&radial, &spec) <= 1e-12);
        let twisted = CartesianState::from_fn(g, 7, |x, out| {
            let b = bump((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt());
            out[1] = b;
            out[5] = b;
        });
        assert!(quadratic_source_max(&twisted, &spec) >= 0.1 * twisted.max_abs().powi(2));
    }
}
