//! Globally adaptive Gauss–Kronrod (7/15) quadrature over a list of panels.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and `|Kronrod − Gauss|` on `[a, b]`.
pub fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = half * T::lit(XGK[i]);
        let s = f(mid - dx) + f(mid + dx);
        k += s * T::lit(WGK[i]);
        if i % 2 == 1 {
            g += s * T::lit(WG[i / 2]);
        }
    }
    (k * half, ((k - g) * half).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub panels: usize,
    /// Whether the tolerance was met within the panel budget.
    pub converged: bool,
}

/// Integrates `f` over the union of `panels`, bisecting the panel with the
/// largest error estimate until `Σ err ≤ max(atol, rtol·|Σ value|)`.
pub fn integrate_panels<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    panels: &[(T, T)],
    rtol: T,
    atol: T,
    max_panels: usize,
) -> QuadResult<T> {
    let mut list: Vec<(T, T, T, T)> = panels
        .iter()
        .filter(|(a, b)| b > a)
        .map(|&(a, b)| {
            let (v, e) = gk15(&mut f, a, b);
            (a, b, v, e)
        })
        .collect();
    loop {
        let (val, err) = list.iter().fold((T::zero(), T::zero()), |(v, e), p| (v + p.2, e + p.3));
        let goal = atol.max(rtol * val.abs());
        let converged = err <= goal;
        if converged || list.len() >= max_panels || list.is_empty() {
            return QuadResult { value: val, error: err, panels: list.len(), converged };
        }
        let (idx, _) = list
            .iter()
            .enumerate()
            .fold((0, -T::one()), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (a, b, _, _) = list[idx];
        let m = (a + b) * T::lit(0.5);
        if !(m > a && m < b) {
            // Panel cannot be split further in this precision.
            list[idx].3 = T::zero();
            continue;
        }
        let (v1, e1) = gk15(&mut f, a, m);
        let (v2, e2) = gk15(&mut f, m, b);
        list[idx] = (a, m, v1, e1);
        list.push((m, b, v2, e2));
    }
}

/// Splits `[a, b]` at the sorted interior points of `cuts`.
pub fn panels_from_cuts<T: Real>(a: T, b: T, cuts: &mut Vec<T>) -> Vec<(T, T)> {
    cuts.retain(|&x| x > a && x < b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut lo = a;
    for &c in cuts.iter() {
        out.push((lo, c));
        lo = c;
    }
    out.push((lo, b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let (v, e) = gk15(&mut |x: f64| x.powi(5) - 2.0 * x * x, 0.0, 2.0);
        assert!((v - (64.0 / 6.0 - 16.0 / 3.0)).abs() < 1e-13);
        assert!(e < 1e-12);
    }

    #[test]
    fn kinked_integrand_converges() {
        let r = integrate_panels(|x: f64| (x - 0.3).abs().sqrt(), &[(0.0, 1.0)], 1e-10, 0.0, 1000);
        let exact = 2.0 / 3.0 * (0.3f64.powf(1.5) + 0.7f64.powf(1.5));
        assert!(r.converged);
        assert!((r.value - exact).abs() < 1e-9);
    }

    #[test]
    fn cuts_make_panels() {
        let mut cuts = vec![0.5, -1.0, 0.25, 0.5, 2.0];
        let p = panels_from_cuts(0.0, 1.0, &mut cuts);
        assert_eq!(p, vec![(0.0, 0.25), (0.25, 0.5), (0.5, 1.0)]);
    }
}
