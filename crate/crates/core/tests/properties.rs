use nalgebra::{DMatrix, DVector, Matrix3};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use radialhyp::analysis::{dalembert_initial, w21_surrogate, RadialProfileFn};
use radialhyp::cartesian::{evolve, time_step3d, CartesianGrid, CartesianState};
use radialhyp::generators::{project_onto_null, random_hyperbolic_spec, random_spec};
use radialhyp::radial_solver::{simulate, SimulationConfig};
use radialhyp::reduction::{characteristic_quadratic, reduce_radial};
use radialhyp::spectral::{build_m1, characteristic_system, check_null_condition, diagonalize};
use radialhyp::system_model::{
    assemble_full_matrices, check_rotational_invariance, evaluate_quadratic, extract_blocks, random_rotation,
    rotate_state, DenseQuadratic,
};
use radialhyp::{SystemSpec, Tensor3};

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (0usize..=3, 0usize..=3).prop_filter("nonempty", |(l, m)| l + m > 0)
}

fn hyperbolic_shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=6, 0usize..=1).prop_map(|(n, up)| {
        let l = (n + up) / 2;
        (l, n - l)
    })
}

fn acoustic() -> SystemSpec<f64> {
    let mut s = SystemSpec::zeros(1, 1);
    s.b[(0, 0)] = 1.0;
    s.c[(0, 0)] = 1.0;
    s
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn blocks_round_trip_bit_identically((l, m) in shape(), seed in any::<u64>()) {
        let spec = random_spec::<f64, _>(&mut ChaCha8Rng::seed_from_u64(seed), l, m);
        let full = assemble_full_matrices(&spec).unwrap();
        let (b, c, d) = extract_blocks(&full, l, m);
        let mut again = SystemSpec::zeros(l, m);
        again.b = b;
        again.c = c;
        again.d = d;
        prop_assert_eq!(assemble_full_matrices(&again).unwrap(), full);
    }

    #[test]
    fn cross_product_drops_on_parallel_vectors((l, m) in shape(), seed in any::<u64>(), dir in prop::array::uniform3(-1.0f64..1.0)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec::<f64, _>(&mut rng, l, m);
        let norm = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
        prop_assume!(norm > 1e-3);
        let mut u = DVector::zeros(l + 3 * m);
        for j in 0..l {
            u[j] = (j as f64 + 1.0) * 0.3;
        }
        for p in 0..m {
            let wp = 0.7 - 0.4 * p as f64;
            for a in 0..3 {
                u[l + 3 * p + a] = wp * dir[a] / norm;
            }
        }
        let mut without = spec.clone();
        without.omega_bar = Tensor3::zeros([m, m, m]);
        let q = evaluate_quadratic(&spec, &u).unwrap();
        let q0 = evaluate_quadratic(&without, &u).unwrap();
        prop_assert!((q - q0).amax() <= 1e-15);
    }

    #[test]
    fn assembled_systems_are_invariant((l, m) in shape(), seed in any::<u64>()) {
        let spec = random_spec::<f64, _>(&mut ChaCha8Rng::seed_from_u64(seed), l, m);
        let full = assemble_full_matrices(&spec).unwrap();
        let quad = DenseQuadratic::from_spec(&spec).unwrap();
        let rep = check_rotational_invariance(&full.a, &quad, l, m, 100, seed).unwrap();
        prop_assert!(rep.max_residual <= 1e-12, "residual {}", rep.max_residual);
    }

    #[test]
    fn rotate_then_unrotate_is_identity(l in 0usize..3, m in 0usize..3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o: Matrix3<f64> = random_rotation(&mut rng);
        let u = DVector::from_fn(l + 3 * m, |i, _| (i as f64 * 0.37).sin());
        let back = rotate_state(l, &rotate_state(l, &u, &o).unwrap(), &o.transpose()).unwrap();
        prop_assert!((back - u).amax() <= 1e-14);
    }

    #[test]
    fn eigen_reconstruction_and_determinism((l, m) in hyperbolic_shape(), seed in any::<u64>()) {
        let spec = random_hyperbolic_spec::<f64, _>(&mut ChaCha8Rng::seed_from_u64(seed), l, m, 1e-2);
        let m1 = build_m1(&spec).unwrap();
        let eig = diagonalize(&m1).unwrap();
        let rebuilt = &eig.r * DMatrix::from_diagonal(&eig.lambda) * &eig.l;
        prop_assert!((rebuilt - &m1).amax() <= 1e-10 * m1.amax().max(1.0));
        let again = diagonalize(&m1).unwrap();
        prop_assert!(eig.l.iter().zip(again.l.iter()).all(|(a, b)| a.to_bits() == b.to_bits()));
        prop_assert!(eig.lambda.iter().zip(again.lambda.iter()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn null_systems_have_no_self_coupling((l, m) in hyperbolic_shape(), seed in any::<u64>()) {
        let base = random_hyperbolic_spec::<f64, _>(&mut ChaCha8Rng::seed_from_u64(seed), l, m, 0.05);
        let spec = project_onto_null(&base).unwrap();
        let chars = characteristic_system(&spec).unwrap();
        let tol = 1e-9;
        prop_assert!(check_null_condition(&spec, &chars, tol).pass);
        for e in 0..chars.dim() {
            let s = chars.g1.get(e, e, e).abs() + chars.g2.get(e, e, e).abs();
            prop_assert!(s <= 10.0 * tol, "family {} self-coupling {}", e, s);
        }
    }

    #[test]
    fn characteristic_source_matches_physical_source((l, m) in hyperbolic_shape(), seed in any::<u64>()) {
        let spec = random_hyperbolic_spec::<f64, _>(&mut ChaCha8Rng::seed_from_u64(seed), l, m, 1e-2);
        let chars = characteristic_system(&spec).unwrap();
        let radial = reduce_radial(&spec).unwrap();
        let n = l + m;
        let z: Vec<f64> = (0..n).map(|i| ((seed >> (i % 60)) as f64 * 1e-3 + i as f64).sin()).collect();
        let phys = &chars.r * DVector::from_column_slice(&z);
        let (qr, qw) = radial.quadratic_rhs(&phys.as_slice()[..l], &phys.as_slice()[l..]);
        let mut qrho = DVector::zeros(n);
        let mut qvec = DVector::zeros(n);
        qrho.rows_mut(0, l).copy_from_slice(&qr);
        qvec.rows_mut(l, m).copy_from_slice(&qw);
        let (e1, e2) = (&chars.l * qrho, &chars.l * qvec);
        let (s1, s2) = characteristic_quadratic(&chars, &z);
        let scale = e1.amax().max(e2.amax()).max(1.0);
        for e in 0..n {
            prop_assert!((s1[e] - e1[e]).abs() <= 1e-12 * scale);
            prop_assert!((s2[e] - e2[e]).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn w21_is_scale_invariant(c in 0.5f64..3.0, w in 0.1f64..0.8, h in -2.0f64..2.0, lam in 0.1f64..10.0) {
        let p = RadialProfileFn::tent(c, c + w, c + 2.0 * w, h).unwrap();
        let q = RadialProfileFn::bspline(c + w, w, 0.5 * h).unwrap();
        let base = w21_surrogate(&[p.clone(), q.clone()]).unwrap();
        let scaled = w21_surrogate(&[p.rescaled(lam), q.rescaled(lam)]).unwrap();
        prop_assert!((scaled - base).abs() <= 1e-12 * base.abs().max(1.0));
    }

    #[test]
    fn dalembert_solves_the_linear_pair(t in 0.2f64..6.0, r in 0.3f64..8.0, lam in prop_oneof![-2.0f64..-0.3, 0.3f64..2.0]) {
        let rho0 = RadialProfileFn::bspline(2.5, 0.6, 1.0).unwrap();
        let w0 = RadialProfileFn::bspline(3.0, 0.5, -0.4).unwrap();
        let f = |t: f64, r: f64| dalembert_initial(&rho0, &w0, lam, t, r).unwrap();
        let d = 1e-4;
        let (rt, wt) = {
            let (a, b) = (f(t + d, r), f(t - d, r));
            ((a.0 - b.0) / (2.0 * d), (a.1 - b.1) / (2.0 * d))
        };
        let (rr, wr) = {
            let (a, b) = (f(t, r + d), f(t, r - d));
            ((a.0 - b.0) / (2.0 * d), (a.1 - b.1) / (2.0 * d))
        };
        let (_, w) = f(t, r);
        let res1 = rt + lam * (wr + 2.0 * w / r);
        let res2 = wt + lam * rr;
        // Cubic B-splines have jumping third derivatives: O(δ) at knots.
        prop_assert!(res1.abs() <= 1e-4 && res2.abs() <= 1e-4, "residuals {} {}", res1, res2);
    }
}

#[test]
fn spherical_mean_cancels_at_origin() {
    let rho0 = RadialProfileFn::bspline(1.0, 0.5, 1.0).unwrap();
    let w0 = RadialProfileFn::zero();
    for t in [0.3, 1.0, 2.5] {
        let mut prev = f64::INFINITY;
        for r in [1e-3f64, 1e-4, 1e-5, 1e-6] {
            let (rho, w) = dalembert_initial(&rho0, &w0, 1.0, t, r).unwrap();
            let v = (r * (rho + w)).abs();
            assert!(v <= prev.max(1e-300) && v <= 10.0 * r, "t = {t}, r = {r}: {v}");
            prev = v;
        }
    }
}

#[test]
fn radial_runs_agree_across_thread_counts() {
    let spec = {
        let mut s = acoustic();
        s.gamma.set(0, 0, 0, 1.0);
        s.omega.set(0, 0, 0, -1.0);
        s
    };
    let rho = [RadialProfileFn::bspline(2.0, 0.5, 0.1).unwrap()];
    let w = [RadialProfileFn::tent(1.0, 1.5, 2.0, 0.05).unwrap()];
    let cfg = SimulationConfig { n: 300, snapshot_stride: 25, ..Default::default() };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| simulate(&spec, &rho, &w, 3.0, &cfg).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a, run(1));
    assert_eq!(a, b);
}

#[test]
fn lax_friedrichs_does_not_amplify_energy() {
    let spec = acoustic();
    let mats = assemble_full_matrices(&spec).unwrap();
    let grid = CartesianGrid::new(4.0, 21).unwrap();
    let init = CartesianState::from_fn(grid, 4, |x: [f64; 3], out: &mut [f64]| {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        out[0] = (-r2).exp();
        out[2] = 0.3 * x[0] * (-r2).exp();
        out[3] = -0.2 * (-r2).exp();
    });
    // Symmetric system: the exact flow conserves Σu², the scheme only damps it.
    let energy = |s: &CartesianState<f64>| s.data.iter().map(|x| x * x).sum::<f64>();
    let (dt, steps) = time_step3d(&mats, &grid, 1.0, 0.9);
    let mut cur = init.clone();
    let mut e_prev = energy(&init);
    for _ in 0..steps {
        cur = evolve(&cur, &mats, &spec, dt, 1).unwrap();
        let e = energy(&cur);
        assert!(e <= e_prev * (1.0 + 1e-12), "energy grew from {e_prev} to {e}");
        e_prev = e;
    }
}

#[test]
fn single_precision_matches_double() {
    let mut s32 = SystemSpec::<f32>::zeros(1, 1);
    s32.b[(0, 0)] = 1.0;
    s32.c[(0, 0)] = 1.0;
    let c32 = characteristic_system(&s32).unwrap();
    let c64 = characteristic_system(&acoustic()).unwrap();
    for e in 0..2 {
        assert!((c32.lambda[e] as f64 - c64.lambda[e]).abs() < 1e-6);
    }
    let cfg32 = SimulationConfig::<f32> { n: 200, norm_stride: 0, ..Default::default() };
    let cfg64 = SimulationConfig::<f64> { n: 200, norm_stride: 0, ..Default::default() };
    let a = simulate(&s32, &[RadialProfileFn::bspline(3.0f32, 0.5, 1.0).unwrap()], &[RadialProfileFn::zero()], 2.0, &cfg32).unwrap();
    let b = simulate(&acoustic(), &[RadialProfileFn::bspline(3.0, 0.5, 1.0).unwrap()], &[RadialProfileFn::zero()], 2.0, &cfg64).unwrap();
    let (x, y) = (a.last(), b.last());
    for e in 0..2 {
        for j in 0..200 {
            assert!((x.rho_tilde[e][j] as f64 - y.rho_tilde[e][j]).abs() < 1e-4);
            assert!((x.w_tilde[e][j] as f64 - y.w_tilde[e][j]).abs() < 1e-4);
        }
    }
    assert!(w21_surrogate(&[RadialProfileFn::tent(1.0f32, 2.0, 3.0, 1.0).unwrap()]).unwrap() > 0.0);
}
