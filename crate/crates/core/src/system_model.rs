//! System specification, full 3D coefficient matrices and rotation checks.
//!
//! Unknowns are ordered scalars first, then each vector channel as a
//! contiguous `(x, y, z)` triple: `ρ_j` sits at index `j` and component `α`
//! of `v_p` at `l + 3p + α`.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("invalid system specification: {0}")]
    Invalid(String),
    #[error("state has length {got}, expected {expected}")]
    StateLength { got: usize, expected: usize },
    #[error("matrix is not a rotation (orthogonality defect {defect:.3e}, det {det:.6})")]
    NotRotation { defect: f64, det: f64 },
    #[error("at least one rotation sample is required")]
    NoSamples,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Dense rank-3 tensor, row-major with the first index slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<T> {
    dims: [usize; 3],
    data: Vec<T>,
}

impl<T: Real> Tensor3<T> {
    pub fn zeros(dims: [usize; 3]) -> Self {
        Tensor3 { dims, data: vec![T::zero(); dims[0] * dims[1] * dims[2]] }
    }

    /// Wraps flat data; the length must equal the product of `dims`.
    pub fn from_flat(dims: [usize; 3], data: Vec<T>) -> Result<Self, SpecError> {
        if data.len() != dims[0] * dims[1] * dims[2] {
            return Err(SpecError::Dimension(format!(
                "tensor of shape {:?} needs {} entries, got {}",
                dims,
                dims[0] * dims[1] * dims[2],
                data.len()
            )));
        }
        Ok(Tensor3 { dims, data })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        self.data[self.offset(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: T) {
        let o = self.offset(i, j, k);
        self.data[o] = v;
    }

    pub fn scale(&self, s: T) -> Self {
        Tensor3 { dims: self.dims, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == T::zero())
    }
}

/// Reduced coefficients of a rotation-invariant semilinear system.
///
/// Tensor index order (first index slowest):
/// `gamma[k][i][j]`, `omega[k][s][q]`, `upsilon[p][j][q]`, `omega_bar[p][s][q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec<T> {
    pub l: usize,
    pub m: usize,
    /// `l × m`
    pub b: DMatrix<T>,
    /// `m × l`
    pub c: DMatrix<T>,
    /// `m × m`
    pub d: DMatrix<T>,
    pub gamma: Tensor3<T>,
    pub omega: Tensor3<T>,
    pub upsilon: Tensor3<T>,
    pub omega_bar: Tensor3<T>,
}

impl<T: Real> SystemSpec<T> {
    /// All-zero spec of the given shape.
    pub fn zeros(l: usize, m: usize) -> Self {
        SystemSpec {
            l,
            m,
            b: DMatrix::zeros(l, m),
            c: DMatrix::zeros(m, l),
            d: DMatrix::zeros(m, m),
            gamma: Tensor3::zeros([l, l, l]),
            omega: Tensor3::zeros([l, m, m]),
            upsilon: Tensor3::zeros([m, l, m]),
            omega_bar: Tensor3::zeros([m, m, m]),
        }
    }

    /// Size of the full 3D state, `l + 3m`.
    pub fn full_dim(&self) -> usize {
        self.l + 3 * self.m
    }

    /// Size of the reduced radial state, `l + m`.
    pub fn radial_dim(&self) -> usize {
        self.l + self.m
    }

    pub fn has_quadratic(&self) -> bool {
        !(self.gamma.is_zero()
            && self.omega.is_zero()
            && self.upsilon.is_zero()
            && self.omega_bar.is_zero())
    }

    /// Same spec with every quadratic tensor multiplied by `s`.
    pub fn scale_quadratic(&self, s: T) -> Self {
        SystemSpec {
            gamma: self.gamma.scale(s),
            omega: self.omega.scale(s),
            upsilon: self.upsilon.scale(s),
            omega_bar: self.omega_bar.scale(s),
            ..self.clone()
        }
    }

    pub fn ensure_valid(&self) -> Result<(), SpecError> {
        let report = validate_spec(self);
        if report.is_ok() {
            Ok(())
        } else {
            Err(SpecError::Invalid(report.violations.join("; ")))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every shape and finiteness problem of `spec`.
pub fn validate_spec<T: Real>(spec: &SystemSpec<T>) -> ValidationReport {
    let (l, m) = (spec.l, spec.m);
    let mut violations = Vec::new();
    if l + m == 0 {
        violations.push("l + m must be at least 1".to_string());
    }
    let mats: [(&str, &DMatrix<T>, (usize, usize)); 3] =
        [("B", &spec.b, (l, m)), ("C", &spec.c, (m, l)), ("D", &spec.d, (m, m))];
    for (name, mat, want) in mats {
        if mat.shape() != want {
            violations.push(format!("{name} has shape {:?}, expected {:?}", mat.shape(), want));
        }
        if let Some(pos) = mat.iter().position(|x| !x.is_finite()) {
            violations.push(format!("{name} has a non-finite entry at flat index {pos}"));
        }
    }
    let tensors: [(&str, &Tensor3<T>, [usize; 3]); 4] = [
        ("Gamma", &spec.gamma, [l, l, l]),
        ("Omega", &spec.omega, [l, m, m]),
        ("Upsilon", &spec.upsilon, [m, l, m]),
        ("OmegaBar", &spec.omega_bar, [m, m, m]),
    ];
    for (name, t, want) in tensors {
        if t.dims != want {
            violations.push(format!("{name} has shape {:?}, expected {:?}", t.dims, want));
        }
        if let Some(pos) = t.data.iter().position(|x| !x.is_finite()) {
            violations.push(format!("{name} has a non-finite entry at flat index {pos}"));
        }
    }
    ValidationReport { violations }
}

/// The three coefficient matrices of the full 3D system.
#[derive(Debug, Clone, PartialEq)]
pub struct FullMatrices<T: Real> {
    pub a: [DMatrix<T>; 3],
}

impl<T: Real> FullMatrices<T> {
    pub fn dim(&self) -> usize {
        self.a[0].nrows()
    }

    /// `Σ_i ‖A_i‖_∞` (max row sum), the Lax–Friedrichs stability budget.
    pub fn inf_norm_sum(&self) -> T {
        self.a.iter().fold(T::zero(), |acc, a| {
            let row_max = (0..a.nrows()).fold(T::zero(), |mx, i| {
                mx.max(a.row(i).iter().fold(T::zero(), |s, x| s + x.abs()))
            });
            acc + row_max
        })
    }
}

/// Builds `A1, A2, A3` with the block pattern forced by rotation invariance.
pub fn assemble_full_matrices<T: Real>(spec: &SystemSpec<T>) -> Result<FullMatrices<T>, SpecError> {
    spec.ensure_valid()?;
    let (l, m) = (spec.l, spec.m);
    let n = spec.full_dim();
    let a = std::array::from_fn(|i| {
        let mut a = DMatrix::zeros(n, n);
        for j in 0..l {
            for q in 0..m {
                a[(j, l + 3 * q + i)] = spec.b[(j, q)];
            }
        }
        for p in 0..m {
            for k in 0..l {
                a[(l + 3 * p + i, k)] = spec.c[(p, k)];
            }
        }
        // d-block of A_i is ε_{iαβ} d_{pq}
        let (al, be) = ((i + 1) % 3, (i + 2) % 3);
        for p in 0..m {
            for q in 0..m {
                let d = spec.d[(p, q)];
                a[(l + 3 * p + al, l + 3 * q + be)] = d;
                a[(l + 3 * p + be, l + 3 * q + al)] = -d;
            }
        }
        a
    });
    Ok(FullMatrices { a })
}

/// Recovers `(B, C, D)` from assembled matrices (reads `A1`).
pub fn extract_blocks<T: Real>(
    full: &FullMatrices<T>,
    l: usize,
    m: usize,
) -> (DMatrix<T>, DMatrix<T>, DMatrix<T>) {
    let a = &full.a[0];
    let b = DMatrix::from_fn(l, m, |j, q| a[(j, l + 3 * q)]);
    let c = DMatrix::from_fn(m, l, |p, k| a[(l + 3 * p, k)]);
    let d = DMatrix::from_fn(m, m, |p, q| a[(l + 3 * p + 1, l + 3 * q + 2)]);
    (b, c, d)
}

fn check_len<T: Real>(spec: &SystemSpec<T>, u: &DVector<T>) -> Result<(), SpecError> {
    if u.len() != spec.full_dim() {
        return Err(SpecError::StateLength { got: u.len(), expected: spec.full_dim() });
    }
    Ok(())
}

#[inline]
fn vec3<T: Real>(u: &DVector<T>, l: usize, p: usize) -> Vector3<T> {
    Vector3::new(u[l + 3 * p], u[l + 3 * p + 1], u[l + 3 * p + 2])
}

/// `Q(u, u)` for a full 3D state.
pub fn evaluate_quadratic<T: Real>(spec: &SystemSpec<T>, u: &DVector<T>) -> Result<DVector<T>, SpecError> {
    check_len(spec, u)?;
    let mut out = DVector::zeros(spec.full_dim());
    quadratic_into(spec, u.as_slice(), out.as_mut_slice());
    Ok(out)
}

/// Allocation-free `Q(u, u)`; `u` and `out` have length `l + 3m`.
pub fn quadratic_into<T: Real>(spec: &SystemSpec<T>, u: &[T], out: &mut [T]) {
    let (l, m) = (spec.l, spec.m);
    let v = |p: usize| Vector3::new(u[l + 3 * p], u[l + 3 * p + 1], u[l + 3 * p + 2]);
    for k in 0..l {
        let mut acc = T::zero();
        for i in 0..l {
            for j in 0..l {
                acc += spec.gamma.get(k, i, j) * u[i] * u[j];
            }
        }
        for s in 0..m {
            for q in 0..m {
                acc += spec.omega.get(k, s, q) * v(s).dot(&v(q));
            }
        }
        out[k] = acc;
    }
    for p in 0..m {
        let mut acc = Vector3::zeros();
        for j in 0..l {
            for q in 0..m {
                acc += v(q) * (spec.upsilon.get(p, j, q) * u[j]);
            }
        }
        for s in 0..m {
            for q in 0..m {
                let c = spec.omega_bar.get(p, s, q);
                if c != T::zero() {
                    acc += v(s).cross(&v(q)) * c;
                }
            }
        }
        for a in 0..3 {
            out[l + 3 * p + a] = acc[a];
        }
    }
}

/// Max of `|OᵀO − I|` entries and `|det O − 1|`.
fn rotation_defect<T: Real>(o: &Matrix3<T>) -> (T, T) {
    let defect = (o.transpose() * o - Matrix3::identity()).iter().fold(T::zero(), |mx, x| mx.max(x.abs()));
    (defect, o.determinant())
}

/// Applies `ρ ↦ ρ`, `v_p ↦ Oᵀ v_p`.
pub fn rotate_state<T: Real>(l: usize, u: &DVector<T>, o: &Matrix3<T>) -> Result<DVector<T>, SpecError> {
    let (defect, det) = rotation_defect(o);
    let tol = T::lit(1e-12).max(T::eps() * T::lit(16.0));
    if defect > tol || (det - T::one()).abs() > tol {
        return Err(SpecError::NotRotation { defect: defect.to_f64_lossy(), det: det.to_f64_lossy() });
    }
    if u.len() < l || (u.len() - l) % 3 != 0 {
        return Err(SpecError::Dimension(format!("state length {} incompatible with l = {l}", u.len())));
    }
    let mut out = u.clone();
    let ot = o.transpose();
    for p in 0..(u.len() - l) / 3 {
        let w = ot * vec3(u, l, p);
        for a in 0..3 {
            out[l + 3 * p + a] = w[a];
        }
    }
    Ok(out)
}

/// Dense quadratic form `q_i(u) = Σ_{jk} t[i][j][k] u_j u_k` on the full state,
/// stored symmetrized in `(j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseQuadratic<T> {
    pub tensor: Tensor3<T>,
}

impl<T: Real> DenseQuadratic<T> {
    pub fn zeros(n: usize) -> Self {
        DenseQuadratic { tensor: Tensor3::zeros([n, n, n]) }
    }

    /// Dense form of the spec's quadratic source, built by polarization.
    pub fn from_spec(spec: &SystemSpec<T>) -> Result<Self, SpecError> {
        spec.ensure_valid()?;
        let n = spec.full_dim();
        let mut t = Tensor3::zeros([n, n, n]);
        let half = T::lit(0.5);
        let basis = |i: usize| {
            let mut e = DVector::zeros(n);
            e[i] = T::one();
            e
        };
        let diag: Vec<DVector<T>> = (0..n).map(|j| evaluate_quadratic(spec, &basis(j))).collect::<Result<_, _>>()?;
        for j in 0..n {
            for k in j..n {
                let qjk = if j == k {
                    diag[j].clone()
                } else {
                    let q = evaluate_quadratic(spec, &(basis(j) + basis(k)))?;
                    (q - &diag[j] - &diag[k]) * half
                };
                for i in 0..n {
                    t.set(i, j, k, qjk[i]);
                    t.set(i, k, j, qjk[i]);
                }
            }
        }
        Ok(DenseQuadratic { tensor: t })
    }

    pub fn dim(&self) -> usize {
        self.tensor.dims[0]
    }

    pub fn eval(&self, u: &DVector<T>) -> DVector<T> {
        let n = self.dim();
        DVector::from_fn(n, |i, _| {
            let mut acc = T::zero();
            for j in 0..n {
                if u[j] == T::zero() {
                    continue;
                }
                for k in 0..n {
                    acc += self.tensor.get(i, j, k) * u[j] * u[k];
                }
            }
            acc
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport<T: Real> {
    pub samples: usize,
    pub seed: u64,
    pub max_matrix_residual: T,
    pub max_quadratic_residual: T,
    pub max_residual: T,
    /// Row-major entries of the rotation attaining the max residual.
    pub worst_rotation: [[T; 3]; 3],
}

/// Haar-distributed rotation: QR of a Gaussian matrix with positive `diag(R)`
/// and the determinant fixed to `+1`.
pub fn random_rotation<T: Real>(rng: &mut ChaCha8Rng) -> Matrix3<T> {
    let g = Matrix3::<f64>::from_fn(|_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..3 {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q.map(T::lit)
}

/// Block-diagonal `diag(I_l, O, …, O)` of size `l + 3m`.
fn lift_rotation<T: Real>(l: usize, m: usize, o: &Matrix3<T>) -> DMatrix<T> {
    let n = l + 3 * m;
    let mut p = DMatrix::zeros(n, n);
    for j in 0..l {
        p[(j, j)] = T::one();
    }
    for q in 0..m {
        for a in 0..3 {
            for b in 0..3 {
                p[(l + 3 * q + a, l + 3 * q + b)] = o[(a, b)];
            }
        }
    }
    p
}

/// Residuals of `A_i = P (Σ_j O_ij A_j) Pᵀ` and `Q(u) = P Q(Pᵀu)` for one
/// rotation, with `P = diag(I, O, …, O)`.
pub fn invariance_residual<T: Real>(
    mats: &[DMatrix<T>; 3],
    quad: &DenseQuadratic<T>,
    l: usize,
    m: usize,
    o: &Matrix3<T>,
) -> (T, T) {
    let p = lift_rotation(l, m, o);
    let pt = p.transpose();
    let mut mat_res = T::zero();
    for i in 0..3 {
        let mut mix = DMatrix::zeros(p.nrows(), p.ncols());
        for j in 0..3 {
            mix += &mats[j] * o[(i, j)];
        }
        let rhs = &p * mix * &pt;
        mat_res = mat_res.max((&mats[i] - rhs).amax());
    }
    // Quadratic identity, checked coefficient-wise:
    // t'[i][j][k] = Σ P_ia t[a][b][c] P_jb P_kc.
    let n = quad.dim();
    let mut quad_res = T::zero();
    if n > 0 {
        let t = &quad.tensor;
        // Contract one index at a time; n ≤ a few dozen so n^4 is fine.
        let mut s1 = Tensor3::zeros([n, n, n]);
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    let mut acc = T::zero();
                    for c in 0..n {
                        acc += t.get(a, b, c) * p[(k, c)];
                    }
                    s1.set(a, b, k, acc);
                }
            }
        }
        let mut s2 = Tensor3::zeros([n, n, n]);
        for a in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = T::zero();
                    for b in 0..n {
                        acc += s1.get(a, b, k) * p[(j, b)];
                    }
                    s2.set(a, j, k, acc);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = T::zero();
                    for a in 0..n {
                        acc += p[(i, a)] * s2.get(a, j, k);
                    }
                    quad_res = quad_res.max((acc - t.get(i, j, k)).abs());
                }
            }
        }
    }
    (mat_res, quad_res)
}

/// Samples `samples` rotations and reports the worst invariance residual.
pub fn check_rotational_invariance<T: Real>(
    mats: &[DMatrix<T>; 3],
    quad: &DenseQuadratic<T>,
    l: usize,
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport<T>, SpecError> {
    if samples == 0 {
        return Err(SpecError::NoSamples);
    }
    let n = l + 3 * m;
    if mats.iter().any(|a| a.shape() != (n, n)) || quad.dim() != n {
        return Err(SpecError::Dimension(format!("expected {n}×{n} matrices and a rank-{n} quadratic form")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (T::zero(), T::zero(), T::zero(), Matrix3::identity());
    for s in 0..samples {
        let o = random_rotation::<T>(&mut rng);
        let (mr, qr) = invariance_residual(mats, quad, l, m, &o);
        let total = mr.max(qr);
        if s == 0 || total > best.2 {
            best = (mr, qr, total, o);
        }
        best.0 = best.0.max(mr);
        best.1 = best.1.max(qr);
    }
    let o = best.3;
    Ok(InvarianceReport {
        samples,
        seed,
        max_matrix_residual: best.0,
        max_quadratic_residual: best.1,
        max_residual: best.2.max(best.0).max(best.1),
        worst_rotation: std::array::from_fn(|i| std::array::from_fn(|j| o[(i, j)])),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acoustic() -> SystemSpec<f64> {
        let mut s = SystemSpec::zeros(1, 1);
        s.b[(0, 0)] = 1.0;
        s.c[(0, 0)] = 1.0;
        s
    }

    #[test]
    fn minimal_spec_is_valid() {
        assert!(validate_spec(&acoustic()).is_ok());
    }

    #[test]
    fn gamma_shape_mismatch_reported() {
        let mut s = acoustic();
        s.gamma = Tensor3::zeros([2, 1, 1]);
        let r = validate_spec(&s);
        assert!(r.violations.iter().any(|v| v.contains("Gamma")));
    }

    #[test]
    fn non_finite_reported() {
        let mut s = acoustic();
        s.b[(0, 0)] = f64::NAN;
        let r = validate_spec(&s);
        assert!(r.violations.iter().any(|v| v.contains("non-finite")));
    }

    #[test]
    fn acoustic_a1_has_two_nonzeros() {
        let f = assemble_full_matrices(&acoustic()).unwrap();
        let nz: Vec<_> = f.a[0].iter().enumerate().filter(|(_, x)| **x != 0.0).collect();
        assert_eq!(nz.len(), 2);
        assert_eq!(f.a[0][(0, 1)], 1.0);
        assert_eq!(f.a[0][(1, 0)], 1.0);
    }

    #[test]
    fn d_block_is_antisymmetric() {
        let mut s = SystemSpec::<f64>::zeros(0, 1);
        s.d[(0, 0)] = 1.0;
        let f = assemble_full_matrices(&s).unwrap();
        let want = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -1.0, 0.0]);
        assert_eq!(f.a[0], want);
    }

    #[test]
    fn zero_spec_gives_zero_matrices() {
        let f = assemble_full_matrices(&SystemSpec::<f64>::zeros(2, 2)).unwrap();
        assert!(f.a.iter().all(|a| a.iter().all(|x| *x == 0.0)));
    }

    #[test]
    fn quadratic_examples() {
        let mut s = SystemSpec::<f64>::zeros(1, 2);
        s.omega_bar.set(0, 0, 1, 1.0);
        let u = DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let q = evaluate_quadratic(&s, &u).unwrap();
        assert_eq!(q.as_slice()[1..4], [0.0, 0.0, 1.0]);

        let mut g = SystemSpec::<f64>::zeros(1, 1);
        g.gamma.set(0, 0, 0, 2.0);
        let u = DVector::from_vec(vec![3.0, 0.0, 0.0, 0.0]);
        assert_eq!(evaluate_quadratic(&g, &u).unwrap()[0], 18.0);
        assert!(evaluate_quadratic(&g, &DVector::zeros(4)).unwrap().iter().all(|x| *x == 0.0));
        assert!(evaluate_quadratic(&g, &DVector::zeros(3)).is_err());
    }

    #[test]
    fn quarter_turn_about_z() {
        let o = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        let u = DVector::from_vec(vec![5.0, 1.0, 0.0, 0.0]);
        let r = rotate_state(1, &u, &o).unwrap();
        assert_eq!(r.as_slice(), &[5.0, 0.0, -1.0, 0.0]);
        assert!(rotate_state(1, &u, &(o * 2.0)).is_err());
    }

    #[test]
    fn zero_samples_rejected() {
        let s = acoustic();
        let f = assemble_full_matrices(&s).unwrap();
        let q = DenseQuadratic::from_spec(&s).unwrap();
        assert_eq!(check_rotational_invariance(&f.a, &q, 1, 1, 0, 1).unwrap_err(), SpecError::NoSamples);
    }

    #[test]
    fn dense_quadratic_matches_direct_evaluation() {
        let mut s = SystemSpec::<f64>::zeros(1, 2);
        s.gamma.set(0, 0, 0, 0.7);
        s.omega.set(0, 0, 1, -0.3);
        s.upsilon.set(1, 0, 0, 1.1);
        s.omega_bar.set(0, 1, 0, 0.4);
        let q = DenseQuadratic::from_spec(&s).unwrap();
        let u = DVector::from_vec(vec![0.3, -1.0, 0.5, 2.0, 0.1, 0.2, -0.7]);
        let diff = (q.eval(&u) - evaluate_quadratic(&s, &u).unwrap()).amax();
        assert!(diff < 1e-14);
    }

    #[test]
    fn f32_spec_assembles() {
        let mut s = SystemSpec::<f32>::zeros(1, 1);
        s.b[(0, 0)] = 2.0;
        let f = assemble_full_matrices(&s).unwrap();
        assert_eq!(f.a[2][(0, 3)], 2.0f32);
    }
}
