use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::formal::{PhaseMonomial, PhaseSeries};

/// Real polynomial in `(x1, x2)`, keyed by exponent pairs `(i, j)` of
/// `x1^i x2^j`. Zero coefficients are not stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), f64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    /// The coordinate `x_{j+1}`.
    pub fn var(j: usize) -> Self {
        let e = if j == 0 { (1, 0) } else { (0, 1) };
        Self::from_terms([(e, 1.0)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), f64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: (u32, u32), c: f64) {
        if c == 0.0 {
            return;
        }
        let v = self.terms.entry(e).or_insert(0.0);
        *v += c;
        if *v == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: (u32, u32)) -> f64 {
        self.terms.get(&e).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * x[0].powi(i as i32) * x[1].powi(j as i32))
            .sum()
    }

    /// `d/dx_{var+1}`.
    pub fn derivative(&self, var: usize) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(&(i, j), &c)| match var {
            0 if i > 0 => Some(((i - 1, j), c * i as f64)),
            1 if j > 0 => Some(((i, j - 1), c * j as f64)),
            _ => None,
        }))
    }

    /// `d^{k1+k2} / dx1^k1 dx2^k2` evaluated at `x`.
    pub fn partial(&self, k: [u32; 2], x: [f64; 2]) -> f64 {
        let mut p = self.clone();
        for _ in 0..k[0] {
            p = p.derivative(0);
        }
        for _ in 0..k[1] {
            p = p.derivative(1);
        }
        p.eval(x)
    }

    pub fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        [self.partial([1, 0], x), self.partial([0, 1], x)]
    }

    pub fn hessian(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        let h12 = self.partial([1, 1], x);
        [[self.partial([2, 0], x), h12], [h12, self.partial([0, 2], x)]]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c * s)))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(1.0), |acc, _| &acc * self)
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        Self::from_terms(self.terms().filter(|((i, j), _)| i + j == d))
    }

    /// Terms of total degree at least `d`.
    pub fn from_degree(&self, d: u32) -> Self {
        Self::from_terms(self.terms().filter(|((i, j), _)| i + j >= d))
    }

    /// `y -> p(shift + m y)`.
    pub fn compose_affine(&self, shift: [f64; 2], m: [[f64; 2]; 2]) -> Self {
        let lin: [Poly2; 2] = std::array::from_fn(|r| {
            Self::from_terms([((0, 0), shift[r]), ((1, 0), m[r][0]), ((0, 1), m[r][1])])
        });
        let deg = self.degree().unwrap_or(0) as usize;
        let powers: [Vec<Poly2>; 2] = std::array::from_fn(|r| {
            let mut v = vec![Self::constant(1.0)];
            for k in 1..=deg {
                let next = &v[k - 1] * &lin[r];
                v.push(next);
            }
            v
        });
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            let t = &powers[0][i as usize] * &powers[1][j as usize];
            for (e, v) in t.terms() {
                out.add_term(e, c * v);
            }
        }
        out
    }

    /// The same polynomial as a function of `x` on phase space.
    pub fn to_phase_series(&self) -> PhaseSeries {
        PhaseSeries::from_terms(
            self.terms
                .iter()
                .map(|(&(i, j), &c)| (PhaseMonomial::new([i, j], [0, 0], 0, 0), Complex64::new(c, 0.0))),
        )
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Self) -> Poly2 {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Self) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &rhs.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_cubic() {
        // x1^2 x2 + 3 x2^3
        let p = Poly2::from_terms([((2, 1), 1.0), ((0, 3), 3.0)]);
        assert_eq!(p.partial([2, 1], [0.3, -0.7]), 2.0);
        assert_eq!(p.partial([0, 3], [0.0, 0.0]), 18.0);
        assert_eq!(p.gradient([1.0, 2.0]), [4.0, 1.0 + 36.0]);
        assert_eq!(p.hessian([1.0, 1.0]), [[2.0, 2.0], [2.0, 18.0]]);
    }

    #[test]
    fn affine_composition_matches_pointwise() {
        let p = Poly2::from_terms([((0, 0), 0.5), ((2, 1), 1.0), ((1, 3), -2.0), ((4, 0), 0.25)]);
        let shift = [0.2, -0.4];
        let m = [[0.6, -0.8], [0.8, 0.6]];
        let q = p.compose_affine(shift, m);
        for y in [[0.0, 0.0], [1.0, -2.0], [0.3, 0.9]] {
            let x = [shift[0] + m[0][0] * y[0] + m[0][1] * y[1], shift[1] + m[1][0] * y[0] + m[1][1] * y[1]];
            assert!((q.eval(y) - p.eval(x)).abs() < 1e-12);
        }
        assert_eq!(q.degree(), Some(4));
    }
}
