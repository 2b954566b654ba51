//! Rearranged block system, diagonalization of `M₁`, null-condition checks and
//! characteristic couplings.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;
use crate::system_model::{assemble_full_matrices, evaluate_quadratic, SpecError, SystemSpec, Tensor3};

/// Relative gap below which two eigenvalues are treated as one.
pub const MULT_TOL: f64 = 1e-8;
/// Largest accepted condition number of the eigenvector matrix.
pub const MAX_COND: f64 = 1e12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("matrix is not square ({0}×{1})")]
    NotSquare(usize, usize),
    #[error("complex eigenvalue {re} ± {im}i: system is not hyperbolic")]
    ComplexEigenvalue { re: f64, im: f64 },
    #[error("matrix is not diagonalizable: {0}")]
    NotDiagonalizable(String),
    #[error("M₂ needs at least one vector channel")]
    NoVectorChannels,
    #[error("characteristic index {e} out of range (size {n})")]
    BadIndex { e: usize, n: usize },
}

/// `M₁ = [[0, B], [C, 0]]`.
pub fn build_m1<T: Real>(spec: &SystemSpec<T>) -> Result<DMatrix<T>, SpectralError> {
    spec.ensure_valid()?;
    let (l, m) = (spec.l, spec.m);
    let mut out = DMatrix::zeros(l + m, l + m);
    out.view_mut((0, l), (l, m)).copy_from(&spec.b);
    out.view_mut((l, 0), (m, l)).copy_from(&spec.c);
    Ok(out)
}

/// `M₂ = diag(D, −D)`.
pub fn build_m2<T: Real>(spec: &SystemSpec<T>) -> Result<DMatrix<T>, SpectralError> {
    spec.ensure_valid()?;
    let m = spec.m;
    if m == 0 {
        return Err(SpectralError::NoVectorChannels);
    }
    let mut out = DMatrix::zeros(2 * m, 2 * m);
    out.view_mut((0, 0), (m, m)).copy_from(&spec.d);
    out.view_mut((m, m), (m, m)).copy_from(&(-&spec.d));
    Ok(out)
}

/// Real eigen-decomposition `L M R = diag(λ)`, `R = L⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen<T: Real> {
    pub lambda: DVector<T>,
    pub l: DMatrix<T>,
    pub r: DMatrix<T>,
    /// Index groups of (numerically) equal eigenvalues.
    pub groups: Vec<Vec<usize>>,
}

fn matrix_scale<T: Real>(m: &DMatrix<T>) -> T {
    m.amax().max(T::one())
}

/// Groups sorted values whose neighbours are within `MULT_TOL · max|λ|`.
pub fn multiplicity_groups<T: Real>(sorted: &[T]) -> Vec<Vec<usize>> {
    let scale = sorted.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let tol = if scale > T::zero() { T::lit(MULT_TOL) * scale } else { T::lit(MULT_TOL) };
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (x - sorted[*g.last().unwrap()]).abs() <= tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// Reduced row echelon form of the rows of `a`, dropping rows that become
/// negligible.
fn rref<T: Real>(mut a: DMatrix<T>, tol: T) -> DMatrix<T> {
    let (rows, cols) = a.shape();
    let mut lead = 0;
    for col in 0..cols {
        if lead == rows {
            break;
        }
        let (piv, val) = (lead..rows).fold((lead, T::zero()), |best, i| {
            if a[(i, col)].abs() > best.1 {
                (i, a[(i, col)].abs())
            } else {
                best
            }
        });
        if val <= tol {
            for i in lead..rows {
                a[(i, col)] = T::zero();
            }
            continue;
        }
        a.swap_rows(lead, piv);
        let p = a[(lead, col)];
        for j in 0..cols {
            a[(lead, j)] /= p;
        }
        for i in 0..rows {
            if i != lead {
                let f = a[(i, col)];
                if f != T::zero() {
                    for j in 0..cols {
                        let v = a[(lead, j)];
                        a[(i, j)] -= f * v;
                    }
                    a[(i, col)] = T::zero();
                }
            }
        }
        lead += 1;
    }
    a.rows(0, lead).into_owned()
}

/// Unit ∞-norm, first non-negligible entry positive.
fn normalize_row<T: Real>(row: &mut [T], tol: T) {
    let nrm = row.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if nrm == T::zero() {
        return;
    }
    let lead = row.iter().find(|x| x.abs() > tol * nrm).copied().unwrap_or(T::one());
    let s = if lead < T::zero() { -nrm } else { nrm };
    for x in row.iter_mut() {
        *x /= s;
    }
}

fn lex_desc<T: Real>(a: &[T], b: &[T]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.partial_cmp(x) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Diagonalizes a real square matrix with real spectrum.
///
/// Eigenvalues are sorted ascending. Each row of `L` has unit ∞-norm with its
/// first nonzero entry positive; inside an eigenvalue cluster the rows are the
/// reduced echelon basis of the left eigenspace, sorted lexicographically
/// descending. The output depends only on the input bits.
pub fn diagonalize<T: Real>(m: &DMatrix<T>) -> Result<Eigen<T>, SpectralError> {
    let (n, nc) = m.shape();
    if n != nc {
        return Err(SpectralError::NotSquare(n, nc));
    }
    if n == 0 {
        return Ok(Eigen { lambda: DVector::zeros(0), l: DMatrix::zeros(0, 0), r: DMatrix::zeros(0, 0), groups: vec![] });
    }
    let scale = matrix_scale(m);
    let root_eps = T::eps().sqrt();
    let complex = m.clone().complex_eigenvalues();
    let mut re: Vec<T> = Vec::with_capacity(n);
    for z in complex.iter() {
        if z.im.abs() > T::lit(10.0) * root_eps * scale {
            return Err(SpectralError::ComplexEigenvalue { re: z.re.to_f64_lossy(), im: z.im.abs().to_f64_lossy() });
        }
        re.push(z.re);
    }
    re.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let groups = multiplicity_groups(&re);

    let mt = m.transpose();
    let null_tol = T::lit(100.0) * root_eps * scale;
    let rref_tol = root_eps * T::lit(1e-2);
    let mut l = DMatrix::zeros(n, n);
    for g in &groups {
        let k = g.len();
        let mu = g.iter().fold(T::zero(), |s, &i| s + re[i]) / T::from_usize_lossy(k);
        let shifted = &mt - DMatrix::identity(n, n) * mu;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.as_ref().expect("requested V");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap());
        let kth = svd.singular_values[order[k - 1]];
        if kth > null_tol {
            return Err(SpectralError::NotDiagonalizable(format!(
                "eigenvalue {} has algebraic multiplicity {k} but a smaller eigenspace",
                mu.to_f64_lossy()
            )));
        }
        let basis = DMatrix::from_fn(k, n, |i, j| v_t[(order[i], j)]);
        let ech = if k > 1 { rref(basis, rref_tol) } else { basis };
        if ech.nrows() < k {
            return Err(SpectralError::NotDiagonalizable("degenerate eigenspace basis".into()));
        }
        let mut rows: Vec<Vec<T>> = (0..k)
            .map(|i| {
                let mut row: Vec<T> = ech.row(i).iter().copied().collect();
                normalize_row(&mut row, rref_tol);
                row
            })
            .collect();
        rows.sort_by(|a, b| lex_desc(a, b));
        for (slot, row) in g.iter().zip(rows) {
            for j in 0..n {
                l[(*slot, j)] = row[j];
            }
        }
    }
    let sv = l.clone().svd(false, false).singular_values;
    let (smax, smin) = sv.iter().fold((T::zero(), T::max_value().unwrap_or(T::one() / T::eps())), |(a, b), &s| (a.max(s), b.min(s)));
    if smin == T::zero() || smax / smin > T::lit(MAX_COND) {
        return Err(SpectralError::NotDiagonalizable(format!(
            "eigenvector matrix condition number {:.3e} exceeds {MAX_COND:.0e}",
            (smax / smin).to_f64_lossy()
        )));
    }
    let r = l
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| SpectralError::NotDiagonalizable("singular eigenvector matrix".into()))?;
    let lmr = &l * m * &r;
    let mut lambda = DVector::from_fn(n, |i, _| lmr[(i, i)]);
    for g in groups.iter().filter(|g| g.len() > 1) {
        let mean = g.iter().fold(T::zero(), |s, &i| s + lambda[i]) / T::from_usize_lossy(g.len());
        for &i in g {
            lambda[i] = mean;
        }
    }
    Ok(Eigen { lambda, l, r, groups })
}

/// Diagonal form of the radial principal part plus quadratic couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicSystem<T: Real> {
    pub lambda: DVector<T>,
    pub l: DMatrix<T>,
    pub r: DMatrix<T>,
    pub groups: Vec<Vec<usize>>,
    /// Eigenvalues of `M₂` as `(re, im)`; diagnostic only.
    pub lambda_tilde: Vec<(T, T)>,
    pub g1: Tensor3<T>,
    pub g2: Tensor3<T>,
}

impl<T: Real> CharacteristicSystem<T> {
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn max_speed(&self) -> T {
        self.lambda.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }
}

/// Diagonalizes `M₁`, computes `M₂`'s spectrum and the coupling tensors.
pub fn characteristic_system<T: Real>(spec: &SystemSpec<T>) -> Result<CharacteristicSystem<T>, SpectralError> {
    let m1 = build_m1(spec)?;
    let eig = diagonalize(&m1)?;
    let lambda_tilde = if spec.m > 0 {
        build_m2(spec)?.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
    } else {
        Vec::new()
    };
    let (g1, g2) = characteristic_couplings(spec, &eig.l, &eig.r)?;
    Ok(CharacteristicSystem { lambda: eig.lambda, l: eig.l, r: eig.r, groups: eig.groups, lambda_tilde, g1, g2 })
}

fn symmetrize<T: Real>(t: &mut Tensor3<T>) {
    let [n0, n, _] = t.dims();
    let half = T::lit(0.5);
    for e in 0..n0 {
        for a in 0..n {
            for b in a + 1..n {
                let s = (t.get(e, a, b) + t.get(e, b, a)) * half;
                t.set(e, a, b, s);
                t.set(e, b, a, s);
            }
        }
    }
}

/// Coupling tensors `g1[e][a][b]`, `g2[e][a][b]`, symmetrized in `(a, b)`.
pub fn characteristic_couplings<T: Real>(
    spec: &SystemSpec<T>,
    l: &DMatrix<T>,
    r: &DMatrix<T>,
) -> Result<(Tensor3<T>, Tensor3<T>), SpectralError> {
    spec.ensure_valid()?;
    let (nl, nm) = (spec.l, spec.m);
    let n = nl + nm;
    if l.shape() != (n, n) || r.shape() != (n, n) {
        return Err(SpecError::Dimension(format!("L and R must be {n}×{n}")).into());
    }
    // Physical quadratic coefficients pulled back to the eigenbasis:
    // qr[k][a][b] for scalar rows, qv[p][a][b] for vector rows.
    let mut qr = Tensor3::zeros([nl, n, n]);
    let mut qv = Tensor3::zeros([nm, n, n]);
    for a in 0..n {
        for b in 0..n {
            for k in 0..nl {
                let mut acc = T::zero();
                for i in 0..nl {
                    for j in 0..nl {
                        acc += spec.gamma.get(k, i, j) * r[(i, a)] * r[(j, b)];
                    }
                }
                for s in 0..nm {
                    for q in 0..nm {
                        acc += spec.omega.get(k, s, q) * r[(nl + s, a)] * r[(nl + q, b)];
                    }
                }
                qr.set(k, a, b, acc);
            }
            for p in 0..nm {
                let mut acc = T::zero();
                for j in 0..nl {
                    for q in 0..nm {
                        acc += spec.upsilon.get(p, j, q) * r[(j, a)] * r[(nl + q, b)];
                    }
                }
                qv.set(p, a, b, acc);
            }
        }
    }
    let mut g1 = Tensor3::zeros([n, n, n]);
    let mut g2 = Tensor3::zeros([n, n, n]);
    for e in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut s1 = T::zero();
                for k in 0..nl {
                    s1 += l[(e, k)] * qr.get(k, a, b);
                }
                let mut s2 = T::zero();
                for p in 0..nm {
                    s2 += l[(e, nl + p)] * qv.get(p, a, b);
                }
                g1.set(e, a, b, s1);
                g2.set(e, a, b, s2);
            }
        }
    }
    symmetrize(&mut g1);
    symmetrize(&mut g2);
    Ok((g1, g2))
}

#[derive(Debug, Clone, Serialize)]
pub struct NullReport<T: Real> {
    /// Self-interaction of family `e` in scalar row `k`: `table32[k][e]`.
    pub table32: Vec<Vec<T>>,
    /// Self-interaction of family `e` in vector row `p`: `table33[p][e]`.
    pub table33: Vec<Vec<T>>,
    /// Cross-interaction `(e, f, residual)` within eigenvalue clusters.
    pub pairs34: Vec<(usize, usize, T)>,
    pub groups: Vec<Vec<usize>>,
    pub residual32: T,
    pub residual33: T,
    pub residual34: T,
    pub tol: T,
    pub pass: bool,
}

/// Scalar-row and vector-row quadratic values at eigen-directions `(a, b)`,
/// polarized: `Q(R_a, R_b) + Q(R_b, R_a)` halves to `Q(R_a, R_a)` when `a = b`.
fn polarized_rows<T: Real>(spec: &SystemSpec<T>, r: &DMatrix<T>, a: usize, b: usize) -> (Vec<T>, Vec<T>) {
    let (nl, nm) = (spec.l, spec.m);
    let sym = |x: T, y: T| if a == b { x } else { x + y };
    let scal = (0..nl)
        .map(|k| {
            let mut ab = T::zero();
            let mut ba = T::zero();
            for i in 0..nl {
                for j in 0..nl {
                    let g = spec.gamma.get(k, i, j);
                    ab += g * r[(i, a)] * r[(j, b)];
                    ba += g * r[(i, b)] * r[(j, a)];
                }
            }
            for s in 0..nm {
                for q in 0..nm {
                    let o = spec.omega.get(k, s, q);
                    ab += o * r[(nl + s, a)] * r[(nl + q, b)];
                    ba += o * r[(nl + s, b)] * r[(nl + q, a)];
                }
            }
            sym(ab, ba)
        })
        .collect();
    let vect = (0..nm)
        .map(|p| {
            let mut ab = T::zero();
            let mut ba = T::zero();
            for j in 0..nl {
                for q in 0..nm {
                    let u = spec.upsilon.get(p, j, q);
                    ab += u * r[(j, a)] * r[(nl + q, b)];
                    ba += u * r[(j, b)] * r[(nl + q, a)];
                }
            }
            sym(ab, ba)
        })
        .collect();
    (scal, vect)
}

/// Evaluates the algebraic null-condition identities.
pub fn check_null_condition<T: Real>(
    spec: &SystemSpec<T>,
    chars: &CharacteristicSystem<T>,
    tol: T,
) -> NullReport<T> {
    let n = chars.dim();
    let mut table32 = vec![vec![T::zero(); n]; spec.l];
    let mut table33 = vec![vec![T::zero(); n]; spec.m];
    for e in 0..n {
        let (s, v) = polarized_rows(spec, &chars.r, e, e);
        for (k, x) in s.into_iter().enumerate() {
            table32[k][e] = x;
        }
        for (p, x) in v.into_iter().enumerate() {
            table33[p][e] = x;
        }
    }
    let mut pairs34 = Vec::new();
    for g in chars.groups.iter().filter(|g| g.len() > 1) {
        for (i, &e) in g.iter().enumerate() {
            for &f in &g[i + 1..] {
                let (s, v) = polarized_rows(spec, &chars.r, e, f);
                let res = s.iter().chain(v.iter()).fold(T::zero(), |m, x| m.max(x.abs()));
                pairs34.push((e, f, res));
            }
        }
    }
    let flat_max = |t: &Vec<Vec<T>>| t.iter().flatten().fold(T::zero(), |m, x| m.max(x.abs()));
    let residual32 = flat_max(&table32);
    let residual33 = flat_max(&table33);
    let residual34 = pairs34.iter().fold(T::zero(), |m, x| m.max(x.2));
    let pass = residual32 <= tol && residual33 <= tol && residual34 <= tol;
    NullReport { table32, table33, pairs34, groups: chars.groups.clone(), residual32, residual33, residual34, tol, pass }
}

/// Substitutes the simple wave `u = R_e Y(ξ(x¹ − λ_e t))` into the full 1D
/// system and returns the largest defect over the sample phases.
///
/// `profile(s)` returns `(Y(s), Y'(s))`. Vector channels point along `x¹`.
pub fn plane_wave_residual<T: Real, F: Fn(T) -> (T, T)>(
    spec: &SystemSpec<T>,
    chars: &CharacteristicSystem<T>,
    e: usize,
    xi: T,
    profile: F,
    samples: &[T],
) -> Result<T, SpectralError> {
    let n = chars.dim();
    if e >= n {
        return Err(SpectralError::BadIndex { e, n });
    }
    let full = assemble_full_matrices(spec)?;
    let (nl, nm) = (spec.l, spec.m);
    let mut dir = DVector::zeros(spec.full_dim());
    for j in 0..nl {
        dir[j] = chars.r[(j, e)];
    }
    for q in 0..nm {
        dir[nl + 3 * q] = chars.r[(nl + q, e)];
    }
    // u_t + A1 u_x = ξ Y' (A1 − λ) R_e
    let lin = (&full.a[0] * &dir - &dir * chars.lambda[e]).amax() * xi.abs();
    let mut worst = T::zero();
    for &s in samples {
        let (y, dy) = profile(s);
        let q = evaluate_quadratic(spec, &(&dir * y))?;
        worst = worst.max(q.amax() + lin * dy.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two(b: f64, c: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, b, c, 0.0])
    }

    #[test]
    fn swap_matrix() {
        let e = diagonalize(&two_by_two(1.0, 1.0)).unwrap();
        assert_eq!(e.lambda.as_slice(), &[-1.0, 1.0]);
        assert!((e.l[(0, 0)] - 1.0).abs() < 1e-14 && (e.l[(0, 1)] + 1.0).abs() < 1e-14);
        assert!((e.l[(1, 0)] - 1.0).abs() < 1e-14 && (e.l[(1, 1)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn off_diagonal_speeds() {
        let e = diagonalize(&two_by_two(2.0, 8.0)).unwrap();
        assert!((e.lambda[0] + 4.0).abs() < 1e-12 && (e.lambda[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_generator_is_not_hyperbolic() {
        assert!(matches!(diagonalize(&two_by_two(1.0, -1.0)), Err(SpectralError::ComplexEigenvalue { .. })));
    }

    #[test]
    fn jordan_block_rejected() {
        let j = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(diagonalize(&j), Err(SpectralError::NotDiagonalizable(_))));
    }

    #[test]
    fn repeated_eigenvalues_canonical() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, -1.0]);
        let e = diagonalize(&m).unwrap();
        assert_eq!(e.groups, vec![vec![0], vec![1, 2]]);
        let lmr = &e.l * &m * &e.r;
        assert!((lmr - DMatrix::from_diagonal(&e.lambda)).amax() < 1e-12);
        assert_eq!(e.l.row(1).iter().copied().collect::<Vec<_>>(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn m1_m2_blocks() {
        let mut s = SystemSpec::<f64>::zeros(2, 1);
        s.b[(0, 0)] = 1.0;
        s.c[(0, 1)] = 3.0;
        s.d[(0, 0)] = 1.0;
        let m1 = build_m1(&s).unwrap();
        assert_eq!(m1.shape(), (3, 3));
        assert!(m1.view((0, 0), (2, 2)).iter().all(|x| *x == 0.0));
        assert_eq!(m1[(2, 1)], 3.0);
        let m2 = build_m2(&s).unwrap();
        assert_eq!(m2, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        assert!(matches!(build_m2(&SystemSpec::<f64>::zeros(1, 0)), Err(SpectralError::NoVectorChannels)));
    }

    fn acoustic_null(omega: f64) -> SystemSpec<f64> {
        let mut s = SystemSpec::zeros(1, 1);
        s.b[(0, 0)] = 1.0;
        s.c[(0, 0)] = 1.0;
        s.gamma.set(0, 0, 0, 1.0);
        s.omega.set(0, 0, 0, omega);
        s
    }

    #[test]
    fn null_condition_acoustic() {
        let s = acoustic_null(-1.0);
        let ch = characteristic_system(&s).unwrap();
        let rep = check_null_condition(&s, &ch, 1e-12);
        assert!(rep.pass, "{rep:?}");
        for e in 0..2 {
            for a in 0..2 {
                assert!(ch.g1.get(e, a, a).abs() < 1e-14);
            }
            assert!(ch.g1.get(e, 0, 1).abs() > 0.1);
        }
        let bad = acoustic_null(0.0);
        let ch = characteristic_system(&bad).unwrap();
        let rep = check_null_condition(&bad, &ch, 1e-12);
        assert!(!rep.pass);
        // Hand value: R columns are (½, ∓½) with this normalization of L.
        let want = ch.r[(0, 0)] * ch.r[(0, 0)];
        assert!((rep.residual32 - want).abs() < 1e-14);
    }

    #[test]
    fn plane_wave_matches_table() {
        let bad = acoustic_null(0.0);
        let ch = characteristic_system(&bad).unwrap();
        let rep = check_null_condition(&bad, &ch, 1e-12);
        let samples: Vec<f64> = (0..50).map(|i| -2.0 + 0.08 * i as f64).collect();
        let bump = |s: f64| ((-s * s).exp(), -2.0 * s * (-s * s).exp());
        let pw = plane_wave_residual(&bad, &ch, 0, 1.0, bump, &samples).unwrap();
        let ymax: f64 = samples.iter().map(|&s| (-s * s).exp()).fold(0.0, f64::max);
        assert!((pw - rep.table32[0][0].abs() * ymax * ymax).abs() < 1e-12);
        let good = acoustic_null(-1.0);
        let ch = characteristic_system(&good).unwrap();
        assert!(plane_wave_residual(&good, &ch, 1, 1.0, bump, &samples).unwrap() < 1e-12);
    }

    #[test]
    fn doubled_speeds_report_pairs() {
        let mut s = SystemSpec::<f64>::zeros(2, 2);
        for i in 0..2 {
            s.b[(i, i)] = 1.0;
            s.c[(i, i)] = 1.0;
        }
        s.gamma.set(0, 0, 1, 1.0);
        let ch = characteristic_system(&s).unwrap();
        assert_eq!(ch.groups.len(), 2);
        let rep = check_null_condition(&s, &ch, 1e-12);
        assert_eq!(rep.pairs34.len(), 2);
        assert!(rep.residual34 > 0.1);
    }

    #[test]
    fn couplings_scale_linearly() {
        let s = acoustic_null(0.3);
        let ch = characteristic_system(&s).unwrap();
        let (g1, _) = characteristic_couplings(&s.scale_quadratic(3.0), &ch.l, &ch.r).unwrap();
        for (x, y) in g1.data().iter().zip(ch.g1.data()) {
            assert!((x - 3.0 * y).abs() < 1e-14);
        }
    }
}
