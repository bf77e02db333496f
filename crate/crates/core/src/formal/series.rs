use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

/// A monomial `z^alpha zbar^beta eps^m hbar^l` in two degrees of freedom,
/// with `z_j = x_j + i xi_j`.
///
/// The grading is `|alpha| + |beta| + m + 2 l`: `eps` counts once and
/// `hbar` twice. `eps` and `hbar` are central, so they live in their own
/// exponent slots and never mix with the phase-space exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub alpha: [u32; 2],
    pub beta: [u32; 2],
    pub eps: u32,
    pub hbar: u32,
}

/// A monomial `x^x xi^xi eps^m hbar^l` in real phase-space coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PhaseMonomial {
    pub x: [u32; 2],
    pub xi: [u32; 2],
    pub eps: u32,
    pub hbar: u32,
}

/// Exponent bookkeeping shared by [`Monomial`] and [`PhaseMonomial`].
pub trait MonomialKey: Copy + Ord + fmt::Debug {
    fn degree(&self) -> u32;
    fn times(&self, other: &Self) -> Self;
    fn one() -> Self;
}

impl Monomial {
    pub const fn new(alpha: [u32; 2], beta: [u32; 2], eps: u32, hbar: u32) -> Self {
        Self {
            alpha,
            beta,
            eps,
            hbar,
        }
    }

    /// `z^alpha zbar^beta` with no `eps` or `hbar`.
    pub const fn zz(alpha: [u32; 2], beta: [u32; 2]) -> Self {
        Self::new(alpha, beta, 0, 0)
    }

    /// The monomial with `alpha` and `beta` swapped; complex conjugation maps
    /// `c z^a zbar^b` to `conj(c) z^b zbar^a`.
    pub fn conjugate(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
            ..*self
        }
    }

    /// Total exponent in `(x, xi)`, ignoring `eps` and `hbar`.
    pub fn phase_degree(&self) -> u32 {
        self.alpha.iter().sum::<u32>() + self.beta.iter().sum::<u32>()
    }

    fn sort_key(&self) -> (u32, [u32; 2], [u32; 2], u32, u32) {
        (self.degree(), self.alpha, self.beta, self.eps, self.hbar)
    }
}

impl MonomialKey for Monomial {
    fn degree(&self) -> u32 {
        self.phase_degree() + self.eps + 2 * self.hbar
    }

    fn times(&self, o: &Self) -> Self {
        Self {
            alpha: [self.alpha[0] + o.alpha[0], self.alpha[1] + o.alpha[1]],
            beta: [self.beta[0] + o.beta[0], self.beta[1] + o.beta[1]],
            eps: self.eps + o.eps,
            hbar: self.hbar + o.hbar,
        }
    }

    fn one() -> Self {
        Self::default()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "z^({},{}) zbar^({},{}) eps^{} hbar^{}",
            self.alpha[0], self.alpha[1], self.beta[0], self.beta[1], self.eps, self.hbar
        )
    }
}

impl PhaseMonomial {
    pub const fn new(x: [u32; 2], xi: [u32; 2], eps: u32, hbar: u32) -> Self {
        Self { x, xi, eps, hbar }
    }

    fn sort_key(&self) -> (u32, [u32; 2], [u32; 2], u32, u32) {
        (self.degree(), self.x, self.xi, self.eps, self.hbar)
    }
}

impl MonomialKey for PhaseMonomial {
    fn degree(&self) -> u32 {
        self.x.iter().sum::<u32>() + self.xi.iter().sum::<u32>() + self.eps + 2 * self.hbar
    }

    fn times(&self, o: &Self) -> Self {
        Self {
            x: [self.x[0] + o.x[0], self.x[1] + o.x[1]],
            xi: [self.xi[0] + o.xi[0], self.xi[1] + o.xi[1]],
            eps: self.eps + o.eps,
            hbar: self.hbar + o.hbar,
        }
    }

    fn one() -> Self {
        Self::default()
    }
}

impl Ord for PhaseMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for PhaseMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite formal series with complex coefficients. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<K: MonomialKey> {
    terms: BTreeMap<K, Complex64>,
}

/// Series in the `(z, zbar, eps, hbar)` basis; the normal-form algebra works here.
pub type FormalSeries = Series<Monomial>;
/// Series in the `(x, xi, eps, hbar)` basis.
pub type PhaseSeries = Series<PhaseMonomial>;

impl<K: MonomialKey> Default for Series<K> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: MonomialKey> Series<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(key: K, coeff: Complex64) -> Self {
        let mut s = Self::zero();
        s.add_term(key, coeff);
        s
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(K::one(), c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, Complex64)>) -> Self {
        let mut s = Self::zero();
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    pub fn add_term(&mut self, key: K, coeff: Complex64) {
        if coeff == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, key: &K) -> Complex64 {
        self.terms.get(key).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    /// Terms of degree exactly `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        self.filter(|k| k.degree() == d)
    }

    /// Terms of degree at most `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        self.filter(|k| k.degree() <= max_degree)
    }

    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(MonomialKey::degree).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(MonomialKey::degree).max()
    }

    /// Largest coefficient modulus, 0 for the zero series.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(_, v)| v.norm() > tol)
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    /// Product truncated at `max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let k = ka.times(kb);
                if k.degree() <= max_degree {
                    out.add_term(k, ca * cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, _| &acc * self)
    }

    /// `max |self - other|` over coefficients.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }
}

impl<K: MonomialKey> Add for &Series<K> {
    type Output = Series<K>;
    fn add(self, rhs: Self) -> Series<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: MonomialKey> AddAssign<&Series<K>> for Series<K> {
    fn add_assign(&mut self, rhs: &Series<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(*k, *v);
        }
    }
}

impl<K: MonomialKey> Sub for &Series<K> {
    type Output = Series<K>;
    fn sub(self, rhs: Self) -> Series<K> {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, -v);
        }
        out
    }
}

impl<K: MonomialKey> Neg for &Series<K> {
    type Output = Series<K>;
    fn neg(self) -> Series<K> {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl<K: MonomialKey> Mul for &Series<K> {
    type Output = Series<K>;
    fn mul(self, rhs: Self) -> Series<K> {
        self.mul_truncated(rhs, u32::MAX)
    }
}

impl FormalSeries {
    /// A series is real when its `(x, xi)` coefficients are real, which in
    /// the `z` basis reads `coeff(a, b) = conj(coeff(b, a))`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.terms.iter().all(|(k, c)| {
            let partner = self.coeff(&k.conjugate());
            (c - partner.conj()).norm() <= tol
        })
    }

    /// True when every stored monomial carries at least `eps^m`.
    pub fn divisible_by_eps(&self, m: u32) -> bool {
        self.terms.keys().all(|k| k.eps >= m)
    }

    /// True when every stored monomial carries at least `hbar^l`.
    pub fn divisible_by_hbar(&self, l: u32) -> bool {
        self.terms.keys().all(|k| k.hbar >= l)
    }

    /// `sum_j w_j/2 |z_j|^2`, the symbol of a diagonal harmonic oscillator.
    pub fn harmonic(weights: [f64; 2]) -> Self {
        Self::from_terms([
            (Monomial::zz([1, 0], [1, 0]), Complex64::new(weights[0] / 2.0, 0.0)),
            (Monomial::zz([0, 1], [0, 1]), Complex64::new(weights[1] / 2.0, 0.0)),
        ])
    }

    /// Multiplies every term by `eps^m`.
    pub fn times_eps(&self, m: u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| {
            (
                Monomial {
                    eps: k.eps + m,
                    ..*k
                },
                *v,
            )
        }))
    }

    /// Rewrites the series in `(x, xi)` using `z = x + i xi`, `zbar = x - i xi`.
    pub fn to_phase(&self) -> PhaseSeries {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let mut out = PhaseSeries::zero();
        for (k, c) in &self.terms {
            let mut acc = PhaseSeries::monomial(PhaseMonomial::new([0, 0], [0, 0], k.eps, k.hbar), *c);
            for j in 0..2 {
                let xj = unit_phase(j, false);
                let xij = unit_phase(j, true);
                let z = PhaseSeries::from_terms([(xj, one), (xij, i)]);
                let zbar = PhaseSeries::from_terms([(xj, one), (xij, -i)]);
                acc = &(&acc * &z.pow(k.alpha[j])) * &zbar.pow(k.beta[j]);
            }
            out += &acc;
        }
        out
    }
}

impl PhaseSeries {
    /// Rewrites the series in `(z, zbar)` using `x = (z + zbar)/2` and
    /// `xi = (z - zbar)/(2i)`.
    pub fn to_z(&self) -> FormalSeries {
        let half = Complex64::new(0.5, 0.0);
        let minus_half_i = Complex64::new(0.0, -0.5);
        let mut out = FormalSeries::zero();
        for (k, c) in &self.terms {
            let mut acc = FormalSeries::monomial(Monomial::new([0, 0], [0, 0], k.eps, k.hbar), *c);
            for j in 0..2 {
                let zj = unit_z(j, false);
                let zbj = unit_z(j, true);
                let x = FormalSeries::from_terms([(zj, half), (zbj, half)]);
                // (z - zbar)/(2i) = -i/2 z + i/2 zbar
                let xi = FormalSeries::from_terms([(zj, minus_half_i), (zbj, -minus_half_i)]);
                acc = &(&acc * &x.pow(k.x[j])) * &xi.pow(k.xi[j]);
            }
            out += &acc;
        }
        out
    }

    /// True when all coefficients are real to `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }
}

fn unit_phase(j: usize, momentum: bool) -> PhaseMonomial {
    let mut e = [0, 0];
    e[j] = 1;
    if momentum {
        PhaseMonomial::new([0, 0], e, 0, 0)
    } else {
        PhaseMonomial::new(e, [0, 0], 0, 0)
    }
}

fn unit_z(j: usize, bar: bool) -> Monomial {
    let mut e = [0, 0];
    e[j] = 1;
    if bar {
        Monomial::zz([0, 0], e)
    } else {
        Monomial::zz(e, [0, 0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn grading_counts_hbar_twice() {
        assert_eq!(Monomial::new([1, 0], [0, 2], 1, 2).degree(), 3 + 1 + 4);
        assert_eq!(Monomial::one().degree(), 0);
    }

    #[test]
    fn ordering_is_graded_first() {
        let low = Monomial::new([0, 0], [0, 0], 0, 1);
        let high = Monomial::zz([3, 0], [0, 0]);
        assert!(low < high);
        let a = Monomial::zz([0, 1], [0, 0]);
        let b = Monomial::zz([1, 0], [0, 0]);
        assert!(a < b);
    }

    #[test]
    fn cancellation_removes_terms() {
        let m = Monomial::zz([1, 0], [0, 0]);
        let mut s = FormalSeries::monomial(m, c(2.0));
        s.add_term(m, c(-2.0));
        assert!(s.is_empty());
        assert!(FormalSeries::monomial(m, c(0.0)).is_empty());
    }

    #[test]
    fn x1_squared_x2_expansion() {
        // x1^2 x2 = 1/8 (z1^2 z2 + z1^2 zb2 + zb1^2 z2 + zb1^2 zb2 + 2|z1|^2 z2 + 2|z1|^2 zb2)
        let p = PhaseSeries::monomial(PhaseMonomial::new([2, 1], [0, 0], 0, 0), c(1.0));
        let z = p.to_z();
        let expect = [
            (Monomial::zz([2, 1], [0, 0]), 0.125),
            (Monomial::zz([2, 0], [0, 1]), 0.125),
            (Monomial::zz([0, 1], [2, 0]), 0.125),
            (Monomial::zz([0, 0], [2, 1]), 0.125),
            (Monomial::zz([1, 1], [1, 0]), 0.25),
            (Monomial::zz([1, 0], [1, 1]), 0.25),
        ];
        assert_eq!(z.len(), expect.len());
        for (k, v) in expect {
            assert!((z.coeff(&k) - c(v)).norm() < 1e-15, "{k}");
        }
        assert!(z.is_real(1e-15));
    }

    #[test]
    fn round_trip_is_identity() {
        let s = FormalSeries::from_terms([
            (Monomial::new([2, 0], [0, 1], 1, 0), Complex64::new(0.3, -1.2)),
            (Monomial::new([0, 1], [1, 1], 0, 1), Complex64::new(-2.0, 0.5)),
            (Monomial::zz([0, 0], [0, 0]), c(4.0)),
        ]);
        let back = s.to_phase().to_z();
        assert!(back.distance(&s) <= 1e-14 * s.max_abs());
    }

    #[test]
    fn harmonic_symbol_in_phase_space() {
        // w/2 |z|^2 = w/2 (x^2 + xi^2)
        let h = FormalSeries::harmonic([1.0, 2.0]).to_phase();
        assert!((h.coeff(&PhaseMonomial::new([2, 0], [0, 0], 0, 0)) - c(0.5)).norm() < 1e-15);
        assert!((h.coeff(&PhaseMonomial::new([0, 0], [0, 2], 0, 0)) - c(1.0)).norm() < 1e-15);
        assert_eq!(h.len(), 4);
    }
}
