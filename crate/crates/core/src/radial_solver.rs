//! First-order upwind time stepping of the diagonal radial system.
//!
//! Each family `e` is a pair `(ρ̃_e, w̃_e)` with
//!
//! ```text
//! ρ̃_t + λ (w̃_r + 2w̃/r) = Σ g1 z z
//! w̃_t + λ ρ̃_r           = Σ g2 z z,      z = ρ̃ + w̃
//! ```
//!
//! The Riemann pair `p± = ρ̃ ± w̃` is advected at `±λ` on a cell-centred grid
//! that excludes the origin; geometric and quadratic sources are added by
//! explicit Euler from the old state.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{weighted_bv, AnalysisError, NormReport, Parity, RadialProfileFn};
use crate::reduction::{from_characteristic, to_characteristic, DiagonalRadialSystem, ReductionError};
use crate::scalar::Real;
use crate::spectral::{characteristic_system, SpectralError};
use crate::system_model::SystemSpec;

/// Any field magnitude above this is treated as blow-up.
pub const BLOWUP_THRESHOLD: f64 = 1e8;
pub const DEFAULT_CFL: f64 = 0.9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid initial data: {0}")]
    InvalidData(String),
    #[error("CFL number {nu} exceeds {max}")]
    Cfl { nu: f64, max: f64 },
    #[error("blow-up at t = {}, r = {}, channel {}", .0.t, .0.r, .0.channel)]
    BlowUp(BlowUp),
}

/// Where and when a field first left the finite range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowUp {
    pub t: f64,
    pub r: f64,
    pub channel: usize,
}

/// Uniform cell-centred grid on `[0, R_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid<T: Real> {
    r_max: T,
    n: usize,
    h: T,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(r_max: T, n: usize) -> Result<Self, SolverError> {
        if !(r_max > T::zero()) || !r_max.is_finite() {
            return Err(SolverError::InvalidGrid(format!("R_max must be positive, got {r_max}")));
        }
        if n < 8 {
            return Err(SolverError::InvalidGrid(format!("need at least 8 cells, got {n}")));
        }
        Ok(RadialGrid { r_max, n, h: r_max / T::from_usize_lossy(n) })
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn center(&self, j: usize) -> T {
        (T::from_usize_lossy(j) + T::lit(0.5)) * self.h
    }

    pub fn centers(&self) -> Vec<T> {
        (0..self.n).map(|j| self.center(j)).collect()
    }
}

/// Characteristic fields at one time, stored `[channel][cell]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState<T: Real> {
    pub t: T,
    pub rho_tilde: Vec<Vec<T>>,
    pub w_tilde: Vec<Vec<T>>,
    pub grid: RadialGrid<T>,
}

impl<T: Real> RadialState<T> {
    pub fn zeros(grid: RadialGrid<T>, channels: usize) -> Self {
        let z = vec![vec![T::zero(); grid.n()]; channels];
        RadialState { t: T::zero(), rho_tilde: z.clone(), w_tilde: z, grid }
    }

    pub fn channels(&self) -> usize {
        self.rho_tilde.len()
    }

    pub fn max_abs(&self) -> T {
        self.rho_tilde
            .iter()
            .chain(&self.w_tilde)
            .flatten()
            .fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Physical `(ρ, w)` through `[ρ; w] = R(ρ̃ + w̃)`.
    pub fn physical(&self, sys: &DiagonalRadialSystem<T>, l: usize) -> Result<(Vec<Vec<T>>, Vec<Vec<T>>), SolverError> {
        Ok(from_characteristic(&self.rho_tilde, &self.w_tilde, &sys.r, l)?)
    }

    /// First cell holding a non-finite or oversized value.
    fn first_blowup(&self) -> Option<BlowUp> {
        let limit = T::lit(BLOWUP_THRESHOLD);
        for (e, (rc, wc)) in self.rho_tilde.iter().zip(&self.w_tilde).enumerate() {
            for j in 0..self.grid.n() {
                let ok = |x: T| x.is_finite() && x.abs() <= limit;
                if !ok(rc[j]) || !ok(wc[j]) {
                    return Some(BlowUp { t: self.t.to_f64_lossy(), r: self.grid.center(j).to_f64_lossy(), channel: e });
                }
            }
        }
        None
    }
}

/// Samples `ρ_j(r)`, `w_q(r)` at cell centres and changes to characteristic
/// variables. `w_q(0)` must vanish.
pub fn initial_from_fn<T: Real, F: Fn(usize, T) -> T, G: Fn(usize, T) -> T>(
    grid: RadialGrid<T>,
    sys: &DiagonalRadialSystem<T>,
    l: usize,
    rho: F,
    w: G,
) -> Result<RadialState<T>, SolverError> {
    let n = sys.dim();
    if l > n {
        return Err(SolverError::InvalidData(format!("l = {l} exceeds {n} channels")));
    }
    let m = n - l;
    let r = grid.centers();
    let rho_s: Vec<Vec<T>> = (0..l).map(|j| r.iter().map(|&x| rho(j, x)).collect()).collect();
    let w_s: Vec<Vec<T>> = (0..m).map(|q| r.iter().map(|&x| w(q, x)).collect()).collect();
    let scale = w_s.iter().flatten().fold(T::one(), |s, x| s.max(x.abs()));
    for q in 0..m {
        let w0 = w(q, T::zero());
        if w0.abs() > T::lit(1e-10) * scale {
            return Err(SolverError::InvalidData(format!("w[{q}](0) = {w0} must vanish")));
        }
    }
    if rho_s.iter().chain(&w_s).flatten().any(|x| !x.is_finite()) {
        return Err(SolverError::InvalidData("non-finite initial sample".into()));
    }
    let (rt, wt) = to_characteristic(&rho_s, &w_s, &sys.l)?;
    Ok(RadialState { t: T::zero(), rho_tilde: rt, w_tilde: wt, grid })
}

/// [`initial_from_fn`] for piecewise profiles, one per physical channel.
pub fn initial_from_profiles<T: Real>(
    grid: RadialGrid<T>,
    sys: &DiagonalRadialSystem<T>,
    rho: &[RadialProfileFn<T>],
    w: &[RadialProfileFn<T>],
) -> Result<RadialState<T>, SolverError> {
    if rho.len() + w.len() != sys.dim() {
        return Err(SolverError::InvalidData(format!(
            "{} + {} profiles for {} channels",
            rho.len(),
            w.len(),
            sys.dim()
        )));
    }
    initial_from_fn(grid, sys, rho.len(), |j, r| rho[j].eval(r), |q, r| w[q].eval(r))
}

/// Upwind update of one pair with signed Courant number `nu = λ dt / h`.
fn advect<T: Real>(rho: &[T], w: &[T], nu: T) -> (Vec<T>, Vec<T>) {
    if nu == T::zero() {
        return (rho.to_vec(), w.to_vec());
    }
    let n = rho.len();
    let p: Vec<T> = rho.iter().zip(w).map(|(&a, &b)| a + b).collect();
    let q: Vec<T> = rho.iter().zip(w).map(|(&a, &b)| a - b).collect();
    let a = nu.abs();
    // Right-moving member takes its left neighbour; at the origin the ghost
    // of `ρ̃ ± w̃` is `ρ̃ ∓ w̃` of the first cell.
    let right = |u: &[T], ghost: T| -> Vec<T> {
        (0..n).map(|j| u[j] - a * (u[j] - if j == 0 { ghost } else { u[j - 1] })).collect()
    };
    let left = |u: &[T]| -> Vec<T> { (0..n).map(|j| u[j] + a * (u[(j + 1).min(n - 1)] - u[j])).collect() };
    let (pn, qn) = if nu > T::zero() { (right(&p, q[0]), left(&q)) } else { (left(&p), right(&q, p[0])) };
    let half = T::lit(0.5);
    let rho_n = pn.iter().zip(&qn).map(|(&x, &y)| (x + y) * half).collect();
    let w_n = pn.iter().zip(&qn).map(|(&x, &y)| (x - y) * half).collect();
    (rho_n, w_n)
}

fn has_coupling<T: Real>(sys: &DiagonalRadialSystem<T>) -> bool {
    !(sys.g1.is_zero() && sys.g2.is_zero())
}

/// One forward step of size `dt`. `nu_max` bounds `dt·max|λ|/h`.
pub fn step<T: Real>(
    state: &RadialState<T>,
    sys: &DiagonalRadialSystem<T>,
    dt: T,
    nu_max: T,
) -> Result<RadialState<T>, SolverError> {
    let ch = sys.dim();
    if state.channels() != ch || state.w_tilde.len() != ch {
        return Err(SolverError::InvalidData(format!("state has {} channels, system {ch}", state.channels())));
    }
    if !(dt > T::zero()) {
        return Err(SolverError::InvalidData(format!("time step must be positive, got {dt}")));
    }
    let grid = state.grid;
    let h = grid.h();
    let nu = dt * sys.max_speed() / h;
    if nu > nu_max * (T::one() + T::lit(1e-12)) {
        return Err(SolverError::Cfl { nu: nu.to_f64_lossy(), max: nu_max.to_f64_lossy() });
    }
    let n = grid.n();
    let r = grid.centers();
    let two = T::lit(2.0);

    let z: Vec<Vec<T>> = if has_coupling(sys) {
        (0..ch)
            .map(|a| state.rho_tilde[a].iter().zip(&state.w_tilde[a]).map(|(&x, &y)| x + y).collect())
            .collect()
    } else {
        Vec::new()
    };

    let channels: Vec<(Vec<T>, Vec<T>)> = (0..ch)
        .into_par_iter()
        .map(|e| {
            let lam = sys.lambda[e];
            let (mut rho, mut w) = advect(&state.rho_tilde[e], &state.w_tilde[e], lam * dt / h);
            if lam != T::zero() {
                for j in 0..n {
                    rho[j] -= dt * two * lam * state.w_tilde[e][j] / r[j];
                }
            }
            if !z.is_empty() {
                for j in 0..n {
                    let (mut s1, mut s2) = (T::zero(), T::zero());
                    for a in 0..ch {
                        let za = z[a][j];
                        if za == T::zero() {
                            continue;
                        }
                        for b in 0..ch {
                            let zz = za * z[b][j];
                            s1 += sys.g1.get(e, a, b) * zz;
                            s2 += sys.g2.get(e, a, b) * zz;
                        }
                    }
                    rho[j] += dt * s1;
                    w[j] += dt * s2;
                }
            }
            (rho, w)
        })
        .collect();

    let (rho_tilde, w_tilde) = channels.into_iter().unzip();
    let next = RadialState { t: state.t + dt, rho_tilde, w_tilde, grid };
    match next.first_blowup() {
        Some(b) => Err(SolverError::BlowUp(b)),
        None => Ok(next),
    }
}

/// Knobs for [`simulate`] and [`run`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig<T: Real> {
    pub n: usize,
    /// Defaults to support radius + `max|λ|·T` + `2h`.
    pub r_max: Option<T>,
    pub cfl: T,
    /// Keep every `snapshot_stride`-th state; 0 keeps the first and last only.
    pub snapshot_stride: usize,
    /// Weighted-BV norm every `norm_stride` steps; 0 disables it.
    pub norm_stride: usize,
}

impl<T: Real> Default for SimulationConfig<T> {
    fn default() -> Self {
        SimulationConfig { n: 400, r_max: None, cfl: T::lit(DEFAULT_CFL), snapshot_stride: 0, norm_stride: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Real> {
    pub snapshots: Vec<RadialState<T>>,
    pub norms: Vec<NormReport<T>>,
    pub blowup: Option<BlowUp>,
    pub dt: T,
    pub steps: usize,
}

impl<T: Real> Trajectory<T> {
    pub fn last(&self) -> &RadialState<T> {
        self.snapshots.last().expect("trajectory holds the initial state")
    }
}

/// Step size that divides `t_end` evenly and honours the CFL number.
pub fn time_step<T: Real>(t_end: T, h: T, max_speed: T, cfl: T) -> (T, usize) {
    let dt_max = if max_speed > T::zero() { cfl * h / max_speed } else { cfl * h };
    let steps = (t_end / dt_max).ceil().to_f64_lossy().max(1.0) as usize;
    (t_end / T::from_usize_lossy(steps), steps)
}

/// Parity of physical channels: densities even, radial vector parts odd.
fn physical_parity(l: usize, m: usize) -> Vec<Parity> {
    std::iter::repeat(Parity::Even).take(l).chain(std::iter::repeat(Parity::Odd).take(m)).collect()
}

fn stacked<T: Real>(state: &RadialState<T>, sys: &DiagonalRadialSystem<T>, l: usize) -> Result<Vec<Vec<T>>, SolverError> {
    let (mut rho, w) = state.physical(sys, l)?;
    rho.extend(w);
    Ok(rho)
}

/// Marches `init` to `t_end`. Blow-up ends the run early and is reported in
/// the trajectory rather than as an error.
pub fn run<T: Real>(
    sys: &DiagonalRadialSystem<T>,
    l: usize,
    init: RadialState<T>,
    t_end: T,
    cfg: &SimulationConfig<T>,
) -> Result<Trajectory<T>, SolverError> {
    if !(t_end > T::zero()) {
        return Err(SolverError::InvalidData(format!("final time must be positive, got {t_end}")));
    }
    if !(cfg.cfl > T::zero() && cfg.cfl <= T::one()) {
        return Err(SolverError::Cfl { nu: cfg.cfl.to_f64_lossy(), max: 1.0 });
    }
    let grid = init.grid;
    let (dt, steps) = time_step(t_end, grid.h(), sys.max_speed(), cfg.cfl);
    let parity = physical_parity(l, sys.dim() - l);
    let r = grid.centers();
    let t0 = init.t;

    let mut norms = Vec::new();
    let mut prev_phys: Option<Vec<Vec<T>>> = None;
    let mut cur_phys = if cfg.norm_stride > 0 { Some(stacked(&init, sys, l)?) } else { None };
    let mut snapshots = vec![init.clone()];
    let mut cur = init;
    let mut blowup = None;

    for k in 0..steps {
        let mut next = match step(&cur, sys, dt, cfg.cfl) {
            Ok(s) => s,
            Err(SolverError::BlowUp(b)) => {
                blowup = Some(b);
                break;
            }
            Err(e) => return Err(e),
        };
        next.t = t0 + T::from_usize_lossy(k + 1) * dt;
        if cfg.norm_stride > 0 {
            let next_phys = stacked(&next, sys, l)?;
            if let (Some(p), Some(c)) = (&prev_phys, &cur_phys) {
                if k % cfg.norm_stride == 0 {
                    norms.push(weighted_bv(&r, &parity, cur.t, dt, p, c, &next_phys)?);
                }
            }
            prev_phys = cur_phys.take();
            cur_phys = Some(next_phys);
        }
        let last = k + 1 == steps;
        if last || (cfg.snapshot_stride > 0 && (k + 1) % cfg.snapshot_stride == 0) {
            snapshots.push(next.clone());
        }
        cur = next;
    }
    if blowup.is_some() && snapshots.last().map(|s| s.t) != Some(cur.t) {
        snapshots.push(cur);
    }
    Ok(Trajectory { snapshots, norms, blowup, dt, steps })
}

/// Largest point of support over all profiles.
pub fn support_radius<T: Real>(profiles: &[RadialProfileFn<T>]) -> T {
    profiles.iter().fold(T::zero(), |m, p| m.max(p.support().1))
}

/// `R_max` with `R_max = S + c T + 2 R_max / N`.
pub fn default_r_max<T: Real>(support: T, max_speed: T, t_end: T, n: usize) -> T {
    let reach = (support + max_speed * t_end).max(T::one());
    reach / (T::one() - T::lit(2.0) / T::from_usize_lossy(n))
}

/// Diagonalizes `spec`, samples the profiles and runs to `t_end`.
pub fn simulate<T: Real>(
    spec: &SystemSpec<T>,
    rho: &[RadialProfileFn<T>],
    w: &[RadialProfileFn<T>],
    t_end: T,
    cfg: &SimulationConfig<T>,
) -> Result<Trajectory<T>, SolverError> {
    spec.ensure_valid().map_err(ReductionError::from)?;
    if rho.len() != spec.l || w.len() != spec.m {
        return Err(SolverError::InvalidData(format!(
            "expected {} density and {} vector profiles, got {} and {}",
            spec.l,
            spec.m,
            rho.len(),
            w.len()
        )));
    }
    let sys = characteristic_system(spec)?;
    let all: Vec<RadialProfileFn<T>> = rho.iter().chain(w).cloned().collect();
    if cfg.n < 8 {
        return Err(SolverError::InvalidGrid(format!("need at least 8 cells, got {}", cfg.n)));
    }
    let r_max = cfg.r_max.unwrap_or_else(|| default_r_max(support_radius(&all), sys.max_speed(), t_end, cfg.n));
    let grid = RadialGrid::new(r_max, cfg.n)?;
    let init = initial_from_profiles(grid, &sys, rho, w)?;
    run(&sys, spec.l, init, t_end, cfg)
}

/// `h Σ_j |a_j − b_j|` summed over channels.
pub fn l1_distance<T: Real>(a: &[Vec<T>], b: &[Vec<T>], h: T) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).fold(T::zero(), |s, (&p, &q)| s + (p - q).abs()))
        .fold(T::zero(), |s, v| s + v)
        * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::dalembert_initial;
    use crate::system_model::Tensor3;

    fn acoustic() -> SystemSpec<f64> {
        let mut s = SystemSpec::zeros(1, 1);
        s.b[(0, 0)] = 1.0;
        s.c[(0, 0)] = 1.0;
        s
    }

    fn pulse() -> RadialProfileFn<f64> {
        RadialProfileFn::bspline(3.0, 0.5, 1.0).unwrap()
    }

    #[test]
    fn grid_rejects_small() {
        assert!(RadialGrid::<f64>::new(1.0, 7).is_err());
        assert!(RadialGrid::<f64>::new(0.0, 10).is_err());
        let g = RadialGrid::<f64>::new(2.0, 8).unwrap();
        assert_eq!(g.center(0), 0.125);
    }

    #[test]
    fn acoustic_initial_state_applies_l() {
        let sys = characteristic_system(&acoustic()).unwrap();
        let grid = RadialGrid::new(10.0, 50).unwrap();
        let s = initial_from_profiles(grid, &sys, &[pulse()], &[RadialProfileFn::zero()]).unwrap();
        for e in 0..2 {
            for j in 0..50 {
                let want = sys.l[(e, 0)] * pulse().eval(grid.center(j));
                assert!((s.rho_tilde[e][j] - want).abs() < 1e-15);
                assert_eq!(s.w_tilde[e][j], 0.0);
            }
        }
    }

    #[test]
    fn nonzero_w_at_origin_rejected() {
        let sys = characteristic_system(&acoustic()).unwrap();
        let grid = RadialGrid::new(10.0, 50).unwrap();
        let err = initial_from_fn(grid, &sys, 1, |_, _| 0.0, |_, _| 1.0);
        assert!(matches!(err, Err(SolverError::InvalidData(_))));
    }

    #[test]
    fn zero_is_fixed_point() {
        let mut spec = acoustic();
        spec.gamma.set(0, 0, 0, 1.0);
        let sys = characteristic_system(&spec).unwrap();
        let grid = RadialGrid::new(5.0, 20).unwrap();
        let mut s = RadialState::zeros(grid, 2);
        for _ in 0..10 {
            s = step(&s, &sys, 0.2, 0.9).unwrap();
        }
        assert_eq!(s.max_abs(), 0.0);
    }

    #[test]
    fn cfl_violation() {
        let sys = characteristic_system(&acoustic()).unwrap();
        let grid = RadialGrid::new(5.0, 20).unwrap();
        let s = RadialState::zeros(grid, 2);
        assert!(matches!(step(&s, &sys, 0.25, 0.9), Err(SolverError::Cfl { .. })));
    }

    #[test]
    fn riccati_channel_blows_up_near_inverse_amplitude() {
        let mut spec = SystemSpec::<f64>::zeros(1, 0);
        spec.gamma = Tensor3::from_flat([1, 1, 1], vec![1.0]).unwrap();
        let u0 = 2.0;
        let flat = RadialProfileFn::from_pieces(vec![0.0, 10.0], vec![vec![u0]]).unwrap();
        let cfg = SimulationConfig { n: 40, r_max: Some(4.0), cfl: 0.01, ..Default::default() };
        let traj = simulate(&spec, &[flat], &[], 2.0, &cfg).unwrap();
        let b = traj.blowup.expect("Riccati channel must blow up");
        assert!(b.t > 1.0 / u0 && b.t < 1.0 / u0 + 0.05, "blow-up at {}", b.t);
        assert!(traj.last().t < 2.0);
    }

    fn acoustic_error(n: usize) -> f64 {
        let spec = acoustic();
        let sys = characteristic_system(&spec).unwrap();
        let t_end = 10.0;
        let cfg = SimulationConfig { n, r_max: Some(16.0), norm_stride: 0, ..Default::default() };
        let traj = simulate(&spec, &[pulse()], &[RadialProfileFn::zero()], t_end, &cfg).unwrap();
        let last = traj.last();
        let grid = last.grid;
        let mut err = 0.0;
        for e in 0..2 {
            let lam = sys.lambda[e];
            let rho0 = pulse().scaled(sys.l[(e, 0)]);
            for j in 0..grid.n() {
                let (rho, w) = dalembert_initial(&rho0, &RadialProfileFn::zero(), lam, t_end, grid.center(j)).unwrap();
                err += ((last.rho_tilde[e][j] - rho).abs() + (last.w_tilde[e][j] - w).abs()) * grid.h();
            }
        }
        err
    }

    #[test]
    fn acoustic_pulse_converges_first_order() {
        let (e1, e2) = (acoustic_error(200), acoustic_error(400));
        let ratio = e1 / e2;
        assert!(e2 < 0.5, "error {e2}");
        assert!((1.6..2.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn origin_regularity_on_linear_run() {
        let spec = acoustic();
        let sys = characteristic_system(&spec).unwrap();
        let cfg = SimulationConfig { n: 400, r_max: Some(10.0), snapshot_stride: 8, norm_stride: 0, ..Default::default() };
        let traj = simulate(&spec, &[pulse()], &[RadialProfileFn::zero()], 5.0, &cfg).unwrap();
        let (mut num, mut exact) = (0.0f64, 0.0f64);
        for s in &traj.snapshots {
            for e in 0..2 {
                let rho0 = pulse().scaled(sys.l[(e, 0)]);
                for j in 0..40 {
                    let r = s.grid.center(j);
                    num = num.max(s.w_tilde[e][j].abs() / r);
                    let (_, w) = dalembert_initial(&rho0, &RadialProfileFn::zero(), sys.lambda[e], s.t, r).unwrap();
                    exact = exact.max(w.abs() / r);
                }
            }
        }
        assert!(num.is_finite() && num < 2.0 * exact, "max |w|/r = {num}, exact {exact}");
    }

    #[test]
    fn lambda_sign_symmetry() {
        let spec = acoustic();
        let mut neg = acoustic();
        neg.b[(0, 0)] = -1.0;
        neg.c[(0, 0)] = -1.0;
        let w0 = RadialProfileFn::from_pieces(vec![2.0, 3.0, 4.0], vec![vec![0.0, 0.3], vec![0.3, -0.3]]).unwrap();
        let cfg = SimulationConfig { n: 100, r_max: Some(10.0), norm_stride: 0, ..Default::default() };
        let a = simulate(&spec, &[pulse()], &[w0.clone()], 2.0, &cfg).unwrap();
        let b = simulate(&neg, &[pulse()], &[w0.scaled(-1.0)], 2.0, &cfg).unwrap();
        let sa = characteristic_system(&spec).unwrap();
        let sb = characteristic_system(&neg).unwrap();
        let (ra, wa) = a.last().physical(&sa, 1).unwrap();
        let (rb, wb) = b.last().physical(&sb, 1).unwrap();
        for j in 0..100 {
            assert!((ra[0][j] - rb[0][j]).abs() < 1e-12);
            assert!((wa[0][j] + wb[0][j]).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_norm_series_recorded() {
        let cfg = SimulationConfig { n: 100, r_max: Some(10.0), norm_stride: 5, ..Default::default() };
        let traj = simulate(&acoustic(), &[pulse()], &[RadialProfileFn::zero()], 2.0, &cfg).unwrap();
        assert!(!traj.norms.is_empty());
        assert!(traj.norms.windows(2).all(|w| w[0].t < w[1].t));
        assert!(traj.norms.iter().all(|n| n.total().is_finite() && n.total() > 0.0));
    }
}
