//! Random system instances for property tests and acceptance runs.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::Real;
use crate::spectral::{build_m1, characteristic_system, check_null_condition, CharacteristicSystem, SpectralError};
use crate::system_model::{FullMatrices, SystemSpec, Tensor3};

fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(StandardNormal.sample(rng))
}

fn fill<T: Real, R: Rng + ?Sized>(t: &mut Tensor3<T>, rng: &mut R) {
    let [a, b, c] = t.dims();
    for i in 0..a {
        for j in 0..b {
            for k in 0..c {
                t.set(i, j, k, normal(rng));
            }
        }
    }
}

/// Entries of every block and tensor drawn from `N(0, 1)`; no structure.
pub fn random_spec<T: Real, R: Rng + ?Sized>(rng: &mut R, l: usize, m: usize) -> SystemSpec<T> {
    let mut s = SystemSpec::zeros(l, m);
    s.b = DMatrix::from_fn(l, m, |_, _| normal(rng));
    s.c = DMatrix::from_fn(m, l, |_, _| normal(rng));
    s.d = DMatrix::from_fn(m, m, |_, _| normal(rng));
    fill(&mut s.gamma, rng);
    fill(&mut s.omega, rng);
    fill(&mut s.upsilon, rng);
    fill(&mut s.omega_bar, rng);
    s
}

/// Smallest gap between sorted eigenvalues relative to the largest one.
fn relative_gap<T: Real>(lambda: &DVector<T>) -> T {
    let scale = lambda.iter().fold(T::one(), |m, x| m.max(x.abs()));
    lambda.as_slice().windows(2).fold(T::max_value().unwrap(), |g, w| g.min(w[1] - w[0])) / scale
}

/// A strictly hyperbolic instance: `C = P Bᵀ S` with positive diagonal
/// `P`, `S`, so `BC` is similar to a positive semidefinite matrix, and
/// `|l − m| ≤ 1` keeps the zero eigenvalue simple. Instances whose
/// eigenvalues are closer than `min_gap` (relative) are redrawn.
pub fn random_hyperbolic_spec<T: Real, R: Rng + ?Sized>(rng: &mut R, l: usize, m: usize, min_gap: T) -> SystemSpec<T> {
    assert!(l.abs_diff(m) <= 1 && l + m > 0, "need |l − m| ≤ 1");
    loop {
        let mut s = random_spec::<T, R>(rng, l, m);
        let p: Vec<T> = (0..m).map(|_| T::lit(rng.random_range(0.5..2.0))).collect();
        let sd: Vec<T> = (0..l).map(|_| T::lit(rng.random_range(0.5..2.0))).collect();
        s.c = DMatrix::from_fn(m, l, |q, k| p[q] * s.b[(k, q)] * sd[k]);
        let Ok(m1) = build_m1(&s) else { continue };
        let Ok(chars) = crate::spectral::diagonalize(&m1) else { continue };
        if l + m == 1 || relative_gap(&chars.lambda) > min_gap {
            return s;
        }
    }
}

/// Number of free quadratic coefficients that enter the null identities.
fn quad_params(l: usize, m: usize) -> usize {
    l * l * l + l * m * m + m * l * m
}

fn set_quad_param<T: Real>(s: &mut SystemSpec<T>, idx: usize, v: T) {
    let (l, m) = (s.l, s.m);
    let ng = l * l * l;
    let no = l * m * m;
    if idx < ng {
        s.gamma.set(idx / (l * l), (idx / l) % l, idx % l, v);
    } else if idx < ng + no {
        let i = idx - ng;
        s.omega.set(i / (m * m), (i / m) % m, i % m, v);
    } else {
        let i = idx - ng - no;
        s.upsilon.set(i / (l * m), (i / m) % l, i % m, v);
    }
}

fn get_quad_param<T: Real>(s: &SystemSpec<T>, idx: usize) -> T {
    let (l, m) = (s.l, s.m);
    let ng = l * l * l;
    let no = l * m * m;
    if idx < ng {
        s.gamma.get(idx / (l * l), (idx / l) % l, idx % l)
    } else if idx < ng + no {
        let i = idx - ng;
        s.omega.get(i / (m * m), (i / m) % m, i % m)
    } else {
        let i = idx - ng - no;
        s.upsilon.get(i / (l * m), (i / m) % l, i % m)
    }
}

/// Signed null-identity values as a flat vector (self terms, then
/// cluster cross terms).
fn null_values<T: Real>(spec: &SystemSpec<T>, chars: &CharacteristicSystem<T>) -> Vec<T> {
    let rep = check_null_condition(spec, chars, T::zero());
    let mut out: Vec<T> = rep.table32.iter().chain(&rep.table33).flatten().copied().collect();
    // Cross terms only report magnitudes; rebuild the signed values.
    let (nl, nm) = (spec.l, spec.m);
    let r = &chars.r;
    for g in chars.groups.iter().filter(|g| g.len() > 1) {
        for (i, &a) in g.iter().enumerate() {
            for &b in &g[i + 1..] {
                for k in 0..nl {
                    let mut acc = T::zero();
                    for x in 0..nl {
                        for y in 0..nl {
                            acc += spec.gamma.get(k, x, y) * (r[(x, a)] * r[(y, b)] + r[(x, b)] * r[(y, a)]);
                        }
                    }
                    for s in 0..nm {
                        for q in 0..nm {
                            acc += spec.omega.get(k, s, q) * (r[(nl + s, a)] * r[(nl + q, b)] + r[(nl + s, b)] * r[(nl + q, a)]);
                        }
                    }
                    out.push(acc);
                }
                for p in 0..nm {
                    let mut acc = T::zero();
                    for j in 0..nl {
                        for q in 0..nm {
                            acc += spec.upsilon.get(p, j, q) * (r[(j, a)] * r[(nl + q, b)] + r[(j, b)] * r[(nl + q, a)]);
                        }
                    }
                    out.push(acc);
                }
            }
        }
    }
    out
}

/// Projects `Γ, Ω, Υ` onto the subspace where every null identity holds,
/// the closest such tensors in the Frobenius sense. `Ω̄` is untouched: it
/// does not act on parallel vectors.
pub fn project_onto_null<T: Real>(spec: &SystemSpec<T>) -> Result<SystemSpec<T>, SpectralError> {
    let chars = characteristic_system(spec)?;
    let np = quad_params(spec.l, spec.m);
    let mut probe = spec.clone();
    probe.gamma = Tensor3::zeros(spec.gamma.dims());
    probe.omega = Tensor3::zeros(spec.omega.dims());
    probe.upsilon = Tensor3::zeros(spec.upsilon.dims());
    let mut cols = Vec::with_capacity(np);
    for i in 0..np {
        set_quad_param(&mut probe, i, T::one());
        cols.push(null_values(&probe, &chars));
        set_quad_param(&mut probe, i, T::zero());
    }
    let rows = cols.first().map_or(0, Vec::len);
    if rows == 0 {
        return Ok(spec.clone());
    }
    let a = DMatrix::from_fn(rows, np, |i, j| cols[j][i]);
    let x = DVector::from_fn(np, |i, _| get_quad_param(spec, i));
    let smax = a.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let cut = T::eps() * T::lit(1e3) * smax.max(T::one());
    let pinv = a.clone().pseudo_inverse(cut).map_err(|e| SpectralError::NotDiagonalizable(e.to_string()))?;
    // Iterative refinement: one pass can leave a residual when A has
    // clustered singular values.
    let mut y = x.clone();
    let target = T::eps() * T::lit(100.0) * x.amax().max(T::one());
    for _ in 0..20 {
        let ay = &a * &y;
        if ay.amax() <= target {
            break;
        }
        y -= &pinv * ay;
    }
    let mut out = spec.clone();
    for i in 0..np {
        set_quad_param(&mut out, i, y[i]);
    }
    Ok(out)
}

/// Adds `magnitude · N(0, 1)` noise to `Γ, Ω, Υ`.
pub fn perturb_quadratic<T: Real, R: Rng + ?Sized>(spec: &SystemSpec<T>, rng: &mut R, magnitude: T) -> SystemSpec<T> {
    let mut out = spec.clone();
    for i in 0..quad_params(spec.l, spec.m) {
        let v = get_quad_param(&out, i) + magnitude * normal::<T, R>(rng);
        set_quad_param(&mut out, i, v);
    }
    out
}

/// Adds `magnitude` to one random entry of `A1`, which breaks the
/// rotational structure.
pub fn perturb_matrices<T: Real, R: Rng + ?Sized>(mats: &FullMatrices<T>, rng: &mut R, magnitude: T) -> FullMatrices<T> {
    let mut out = mats.clone();
    let n = mats.dim();
    let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
    out.a[0][(i, j)] += magnitude;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hyperbolic_instances_have_real_distinct_speeds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (l, m) in [(1, 1), (2, 1), (3, 4), (6, 6)] {
            let s = random_hyperbolic_spec::<f64, _>(&mut rng, l, m, 1e-3);
            let c = characteristic_system(&s).unwrap();
            assert_eq!(c.dim(), l + m);
            assert!(c.groups.iter().all(|g| g.len() == 1));
        }
    }

    #[test]
    fn projection_satisfies_null_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (l, m) in [(1, 1), (2, 2), (3, 2)] {
            let s = random_hyperbolic_spec::<f64, _>(&mut rng, l, m, 0.05);
            let p = project_onto_null(&s).unwrap();
            let c = characteristic_system(&p).unwrap();
            assert!(check_null_condition(&p, &c, 1e-9).pass);
            assert!(!check_null_condition(&s, &c, 1e-9).pass);
        }
    }

    #[test]
    fn scalar_wave_projection_is_gamma_minus_omega() {
        let mut s = SystemSpec::<f64>::zeros(1, 1);
        s.b[(0, 0)] = 1.0;
        s.c[(0, 0)] = 1.0;
        s.gamma.set(0, 0, 0, 2.0);
        s.upsilon.set(0, 0, 0, 1.0);
        let p = project_onto_null(&s).unwrap();
        assert!((p.gamma.get(0, 0, 0) - 1.0).abs() < 1e-12);
        assert!((p.omega.get(0, 0, 0) + 1.0).abs() < 1e-12);
        assert!(p.upsilon.get(0, 0, 0).abs() < 1e-12);
    }
}
