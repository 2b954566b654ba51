//! Polynomials and piecewise polynomials on the real line.
//!
//! Every piece of a [`PiecewisePoly`] is stored in a local coordinate
//! `x = s - origin`, where the origin is the left break of the piece (the
//! left tail uses the first break as origin). Local storage keeps products,
//! antiderivatives and Taylor windows well conditioned far from zero.

use crate::scalar::Real;

/// Dense polynomial `c[0] + c[1] x + c[2] x^2 + ...`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Real> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `a + b x`
    pub fn linear(a: T, b: T) -> Self {
        Poly::new(vec![a, b])
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if *c == T::zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^n` (zero past the degree).
    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).copied().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c * T::from_usize_lossy(n))
            .collect();
        Poly::new(coeffs)
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative vanishing at `x = 0`.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        for (n, &c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / T::from_usize_lossy(n + 1));
        }
        Poly::new(coeffs)
    }

    pub fn scale(&self, s: T) -> Self {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Re-expansion `q(y) = p(h + y)`.
    pub fn shift(&self, h: T) -> Self {
        // Repeated synthetic division (Taylor shift).
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let next = c[j + 1];
                c[j] += h * next;
            }
        }
        Poly::new(c)
    }

    /// `q(y) = p(-y)`.
    pub fn reflect(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| if n % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    /// `q(y) = p(a y)`.
    pub fn dilate(&self, a: T) -> Self {
        let mut pow = T::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            coeffs.push(c * pow);
            pow *= a;
        }
        Poly::new(coeffs)
    }

    /// Points in the open interval `(a, b)` where the polynomial changes sign.
    pub fn sign_changes(&self, a: T, b: T) -> Vec<T> {
        if self.degree() == 0 || !(a < b) {
            return Vec::new();
        }
        if self.degree() == 1 {
            let x = -self.coeffs[0] / self.coeffs[1];
            return if x > a && x < b { vec![x] } else { Vec::new() };
        }
        // Critical points split (a, b) into monotone segments.
        let mut knots = vec![a];
        knots.extend(self.derivative().sign_changes(a, b));
        knots.push(b);
        let mut out = Vec::new();
        for w in knots.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (flo, fhi) = (self.eval(lo), self.eval(hi));
            if flo == T::zero() || fhi == T::zero() || (flo > T::zero()) == (fhi > T::zero()) {
                continue;
            }
            let rising = fhi > flo;
            for _ in 0..200 {
                let mid = (lo + hi) * T::lit(0.5);
                if mid <= lo || mid >= hi {
                    break;
                }
                if (self.eval(mid) > T::zero()) == rising {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push((lo + hi) * T::lit(0.5));
        }
        // Sign changes at knots where the value is exactly zero.
        for w in knots.windows(3) {
            let x = w[1];
            if self.eval(x) == T::zero() {
                let l = self.eval((w[0] + x) * T::lit(0.5));
                let r = self.eval((x + w[2]) * T::lit(0.5));
                if (l > T::zero()) != (r > T::zero()) && l != T::zero() && r != T::zero() {
                    out.push(x);
                }
            }
        }
        out.sort_by(|x, y| x.partial_cmp(y).unwrap());
        out
    }

    /// `∫_a^b |p(x)| dx`, exact up to root localisation.
    pub fn abs_integral(&self, a: T, b: T) -> T {
        if !(a < b) || self.is_zero() {
            return T::zero();
        }
        let anti = self.antiderivative();
        let mut knots = vec![a];
        knots.extend(self.sign_changes(a, b));
        knots.push(b);
        knots
            .windows(2)
            .map(|w| (anti.eval(w[1]) - anti.eval(w[0])).abs())
            .fold(T::zero(), |acc, v| acc + v)
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }
}

/// Piecewise polynomial on the whole real line.
///
/// `breaks` are strictly increasing; `pieces[0]` covers `(-inf, breaks[0]]`,
/// `pieces[i]` covers `[breaks[i-1], breaks[i]]`, and the last piece covers
/// `[breaks[n-1], inf)`. Evaluation at a break is right-continuous.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly<T> {
    breaks: Vec<T>,
    pieces: Vec<Poly<T>>,
}

impl<T: Real> PiecewisePoly<T> {
    /// Builds a piecewise polynomial; panics if the shapes are inconsistent
    /// or the breaks are not strictly increasing.
    pub fn new(breaks: Vec<T>, pieces: Vec<Poly<T>>) -> Self {
        assert_eq!(pieces.len(), breaks.len() + 1, "need one more piece than breaks");
        assert!(
            breaks.windows(2).all(|w| w[0] < w[1]),
            "breaks must be strictly increasing"
        );
        PiecewisePoly { breaks, pieces }
    }

    pub fn zero() -> Self {
        PiecewisePoly { breaks: Vec::new(), pieces: vec![Poly::zero()] }
    }

    /// Compactly supported function with the given interior pieces on
    /// `[breaks[0], breaks[n-1]]` and zero tails.
    pub fn compact(breaks: Vec<T>, interior: Vec<Poly<T>>) -> Self {
        assert_eq!(interior.len() + 1, breaks.len(), "n breaks need n-1 interior pieces");
        let mut pieces = Vec::with_capacity(interior.len() + 2);
        pieces.push(Poly::zero());
        pieces.extend(interior);
        pieces.push(Poly::zero());
        PiecewisePoly::new(breaks, pieces)
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Poly<T>] {
        &self.pieces
    }

    /// Local origin of piece `i`.
    pub fn origin(&self, i: usize) -> T {
        if self.breaks.is_empty() {
            T::zero()
        } else if i == 0 {
            self.breaks[0]
        } else {
            self.breaks[i - 1]
        }
    }

    /// Index of the piece containing `s` (right-continuous at breaks).
    pub fn piece_index(&self, s: T) -> usize {
        self.breaks.partition_point(|&b| b <= s)
    }

    pub fn eval(&self, s: T) -> T {
        let i = self.piece_index(s);
        self.pieces[i].eval(s - self.origin(i))
    }

    /// Evaluates piece `i` at `s` (no lookup).
    #[inline]
    pub fn eval_in(&self, i: usize, s: T) -> T {
        self.pieces[i].eval(s - self.origin(i))
    }

    /// Left limit at `s`.
    pub fn eval_left(&self, s: T) -> T {
        let i = self.breaks.partition_point(|&b| b < s);
        self.pieces[i].eval(s - self.origin(i))
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().map(Poly::degree).max().unwrap_or(0)
    }

    fn map_pieces(&self, f: impl Fn(usize, &Poly<T>) -> Poly<T>) -> Self {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().enumerate().map(|(i, p)| f(i, p)).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        self.map_pieces(|_, p| p.derivative())
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derivative())
    }

    pub fn scale(&self, c: T) -> Self {
        self.map_pieces(|_, p| p.scale(c))
    }

    /// Continuous antiderivative, zero at the first break (or at 0 if there
    /// are no breaks). Jumps of `self` are ignored, i.e. the result is the
    /// integral of the absolutely continuous part.
    pub fn antiderivative(&self) -> Self {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut offset = T::zero();
        for (i, p) in self.pieces.iter().enumerate() {
            let anti = p.antiderivative().add(&Poly::constant(offset));
            if i >= 1 && i < self.pieces.len() - 1 {
                let len = self.breaks[i] - self.breaks[i - 1];
                offset = anti.eval(len);
            }
            pieces.push(anti);
        }
        PiecewisePoly { breaks: self.breaks.clone(), pieces }
    }

    /// `∫_a^b f(s) ds`.
    pub fn integral(&self, a: T, b: T) -> T {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// Multiplies by the identity, `s ↦ s f(s)`.
    pub fn mul_identity(&self) -> Self {
        self.map_pieces(|i, p| p.mul(&Poly::linear(self.origin(i), T::one())))
    }

    /// Multiplies by `s^k`.
    pub fn mul_power(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.mul_identity())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut breaks: Vec<T> = self.breaks.iter().chain(other.breaks.iter()).copied().collect();
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();
        let n = breaks.len();
        let pieces = (0..=n)
            .map(|i| {
                let origin = if n == 0 {
                    T::zero()
                } else if i == 0 {
                    breaks[0]
                } else {
                    breaks[i - 1]
                };
                // A representative point strictly inside the merged piece.
                let probe = if n == 0 {
                    T::zero()
                } else if i == 0 {
                    breaks[0] - T::one()
                } else if i == n {
                    breaks[n - 1] + T::one()
                } else {
                    (breaks[i - 1] + breaks[i]) * T::lit(0.5)
                };
                self.local_at(probe, origin).add(&other.local_at(probe, origin))
            })
            .collect();
        PiecewisePoly { breaks, pieces }
    }

    /// Polynomial of the piece containing `probe`, re-expanded about `origin`.
    pub fn local_at(&self, probe: T, origin: T) -> Poly<T> {
        let i = self.piece_index(probe);
        self.pieces[i].shift(origin - self.origin(i))
    }

    /// Jumps of the k-th derivative at every break, as `(break, right - left)`.
    pub fn jumps(&self, k: usize) -> Vec<(T, T)> {
        let d = self.nth_derivative(k);
        self.breaks
            .iter()
            .enumerate()
            .map(|(j, &b)| {
                let left = d.pieces[j].eval(b - d.origin(j));
                let right = d.pieces[j + 1].eval(T::zero());
                (b, right - left)
            })
            .collect()
    }

    /// Radial rescaling `s ↦ c f(c s)` for `c > 0`.
    pub fn rescale(&self, c: T) -> Self {
        PiecewisePoly {
            breaks: self.breaks.iter().map(|&b| b / c).collect(),
            pieces: self.pieces.iter().map(|p| p.dilate(c).scale(c)).collect(),
        }
    }

    /// `max |coefficient|` over all pieces, a crude magnitude scale.
    pub fn coeff_scale(&self) -> T {
        self.pieces.iter().fold(T::zero(), |m, p| m.max(p.max_abs_coeff()))
    }

    /// Extends a function given on `[0, inf)` to the whole line with parity
    /// `sign` (`+1` even, `-1` odd). Requires all breaks `>= 0`.
    pub fn extend_with_parity(&self, sign: T) -> Self {
        assert!(
            self.breaks.iter().all(|&b| b >= T::zero()),
            "parity extension needs breaks on [0, inf)"
        );
        let mut pos: Vec<T> = self.breaks.clone();
        if pos.first().map_or(true, |&b| b > T::zero()) {
            pos.insert(0, T::zero());
        }
        let n = pos.len();
        // Polynomials on [pos[k], pos[k+1]] (k < n-1) and the right tail, all
        // with origin pos[k].
        let right: Vec<Poly<T>> = (0..n)
            .map(|k| {
                let probe = if k + 1 < n {
                    (pos[k] + pos[k + 1]) * T::lit(0.5)
                } else {
                    pos[k] + T::one()
                };
                self.local_at(probe, pos[k])
            })
            .collect();
        let mut breaks: Vec<T> = pos.iter().rev().filter(|&&b| b > T::zero()).map(|&b| -b).collect();
        breaks.extend(pos.iter().copied());
        let mut pieces = Vec::with_capacity(breaks.len() + 1);
        // Left tail, origin -pos[n-1]: value sign * f(-s) = sign * tail(-s - pos[n-1]).
        pieces.push(right[n - 1].reflect().scale(sign));
        // Mirrored interior pieces, from the most negative inward; piece on
        // [-pos[k+1], -pos[k]] has origin -pos[k+1].
        for k in (0..n - 1).rev() {
            let len = pos[k + 1] - pos[k];
            pieces.push(right[k].shift(len).reflect().scale(sign));
        }
        pieces.extend(right);
        PiecewisePoly::new(breaks, pieces)
    }

    /// `∫_a^b |f(s)| ds` with exact sign splitting inside each piece.
    pub fn abs_integral(&self, a: T, b: T) -> T {
        if !(a < b) {
            return T::zero();
        }
        let mut total = T::zero();
        let mut knots = vec![a];
        knots.extend(self.breaks.iter().copied().filter(|&s| s > a && s < b));
        knots.push(b);
        for w in knots.windows(2) {
            let mid = (w[0] + w[1]) * T::lit(0.5);
            let i = self.piece_index(mid);
            let o = self.origin(i);
            total += self.pieces[i].abs_integral(w[0] - o, w[1] - o);
        }
        total
    }

    /// Support bounds of a compact function (first and last break), if the
    /// tails vanish.
    pub fn compact_support(&self) -> Option<(T, T)> {
        let tails_zero = self.pieces.first().map_or(true, Poly::is_zero)
            && self.pieces.last().map_or(true, Poly::is_zero);
        if !tails_zero {
            return None;
        }
        match (self.breaks.first(), self.breaks.last()) {
            (Some(&a), Some(&b)) => Some((a, b)),
            _ => Some((T::zero(), T::zero())),
        }
    }
}
