//! From a polynomial potential family to harmonic data: critical point,
//! Hessian jets, frequencies, the rescaled cubic remainder and `mu`.

mod fermi;
mod jet;
mod poly;
mod potential;

use nalgebra::DMatrix;

pub use fermi::{check_unique_min, UniqueMinCertificate};
pub use jet::{eps_jet_diagonalize, JetDiagonalization};
pub use poly::Poly2;
pub use potential::PolyPotential;

use crate::error::{Error, Result};
use crate::formal::{FormalSeries, Frequencies, PhaseMonomial};

/// Newton iteration cap for [`critical_point`].
pub const NEWTON_MAX_ITER: usize = 50;
/// Default gradient tolerance used by [`prepare`].
pub const CRITICAL_TOL: f64 = 1e-12;
/// Normalized defect accepted as a 1:2 resonance by [`prepare`].
pub const RESONANCE_TOL: f64 = 1e-6;

/// Harmonic data of `V_eps` near its minimum, in the coordinates where the
/// symbol reads `w0 + H_20 + eps L_2 + R`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedOperator {
    /// `W_eps(0) = w0[0] + eps w0[1] + O(eps^2)`.
    pub w0: [f64; 2],
    pub freqs: Frequencies,
    /// Cubic part of `R` at `eps = 0`, in the `z` basis.
    pub r_cubic: FormalSeries,
    /// All of `R` that is represented: every slice's terms of degree at
    /// least 3 in the `eps = 0` frame, `eps^k` attached.
    pub remainder: FormalSeries,
    pub mu: f64,
    pub critical_point: [f64; 2],
    /// Columns are the unit eigenvectors of the Hessian at `eps = 0`.
    pub frame: [[f64; 2]; 2],
}

impl PreparedOperator {
    /// Normal-form data without an underlying potential: `R = mu Re(z1^2 zbar2)`.
    pub fn from_parts(freqs: Frequencies, mu: f64, w0: [f64; 2]) -> Self {
        let r_cubic = FormalSeries::from_terms([
            (crate::formal::Monomial::zz([2, 0], [0, 1]), (mu / 2.0).into()),
            (crate::formal::Monomial::zz([0, 1], [2, 0]), (mu / 2.0).into()),
        ]);
        Self {
            w0,
            freqs,
            remainder: r_cubic.clone(),
            r_cubic,
            mu,
            critical_point: [0.0, 0.0],
            frame: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    pub fn h20(&self) -> FormalSeries {
        FormalSeries::harmonic(self.freqs.omega0)
    }

    /// `L_2 = sum_j omega1_j/2 |z_j|^2`, without its `eps`.
    pub fn l2(&self) -> FormalSeries {
        FormalSeries::harmonic(self.freqs.omega1)
    }

    /// `eps L_2 + R_30`, the degree-3 input of the normal form.
    pub fn order3_perturbation(&self) -> FormalSeries {
        &self.l2().times_eps(1) + &self.r_cubic
    }

    /// `eps L_2 + R`.
    pub fn perturbation(&self) -> FormalSeries {
        &self.l2().times_eps(1) + &self.remainder
    }

    /// `(1/8) d^3 R_30 / dy1^2 dy2`, read off the cubic.
    pub fn mu_from_cubic(&self) -> f64 {
        let c = self.r_cubic.to_phase().coeff(&PhaseMonomial::new([2, 1], [0, 0], 0, 0));
        c.re / 4.0
    }

    pub fn w0_at(&self, eps: f64) -> f64 {
        self.w0[0] + eps * self.w0[1]
    }
}

/// Damped Newton on `grad V_eps`, continued from the `eps = 0` critical
/// point reached from the origin.
pub fn critical_point(p: &PolyPotential, eps: f64, tol: f64) -> Result<[f64; 2]> {
    let x0 = critical_point_from(p.v0(), [0.0, 0.0], tol)?;
    if eps == 0.0 {
        return Ok(x0);
    }
    critical_point_from(&p.at(eps), x0, tol)
}

/// Damped Newton on `grad v` from `start`, halving steps until the gradient
/// norm decreases.
pub fn critical_point_from(v: &Poly2, start: [f64; 2], tol: f64) -> Result<[f64; 2]> {
    let grad = [v.derivative(0), v.derivative(1)];
    let g_at = |x: [f64; 2]| [grad[0].eval(x), grad[1].eval(x)];
    let norm = |g: [f64; 2]| g[0].hypot(g[1]);
    let mut x = start;
    let mut g = g_at(x);
    for _ in 0..NEWTON_MAX_ITER {
        if norm(g) <= tol {
            return Ok(x);
        }
        let h = v.hessian(x);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let step = [
            -(h[1][1] * g[0] - h[0][1] * g[1]) / det,
            -(h[0][0] * g[1] - h[1][0] * g[0]) / det,
        ];
        let mut t = 1.0;
        let mut next = [x[0] + step[0], x[1] + step[1]];
        let mut g_next = g_at(next);
        for _ in 0..30 {
            if norm(g_next) < norm(g) {
                break;
            }
            t *= 0.5;
            next = [x[0] + t * step[0], x[1] + t * step[1]];
            g_next = g_at(next);
        }
        x = next;
        g = g_next;
    }
    if norm(g) <= tol {
        return Ok(x);
    }
    Err(Error::CriticalPoint {
        iterations: NEWTON_MAX_ITER,
        residual: norm(g),
    })
}

/// Hessian of `V_eps` at its critical point, to first order in `eps`:
/// `H0 = V0''(x0)` and `H1 = V1''(x0) + V0'''(x0) x'` with `x' = -H0^{-1} V1'(x0)`.
pub fn hessian_jets(p: &PolyPotential, x0: [f64; 2]) -> Result<[DMatrix<f64>; 2]> {
    let h0 = to_dmatrix(p.v0().hessian(x0));
    let g1 = p.v1().gradient(x0);
    let inv = h0
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateHessian(vec![h0[(0, 0)], h0[(1, 1)]]))?;
    let dx = -(&inv * nalgebra::DVector::from_vec(g1.to_vec()));
    let mut h1 = to_dmatrix(p.v1().hessian(x0));
    for i in 0..2 {
        for j in 0..2 {
            let mut k = [0u32; 2];
            k[i] += 1;
            k[j] += 1;
            h1[(i, j)] += (0..2)
                .map(|l| {
                    let mut kl = k;
                    kl[l] += 1;
                    p.v0().partial(kl, x0) * dx[l]
                })
                .sum::<f64>();
        }
    }
    Ok([h0, h1])
}

/// `omega_{j,0} = sqrt(lambda_{j,0})`, `omega_{j,1} = lambda_{j,1} / (2 omega_{j,0})`
/// from the first-order Hessian eigenvalue jets, in ascending order.
pub fn frequency_jets(p: &PolyPotential) -> Result<Frequencies> {
    let x0 = critical_point(p, 0.0, CRITICAL_TOL)?;
    Ok(harmonic_frame(p, x0)?.0)
}

fn harmonic_frame(p: &PolyPotential, x0: [f64; 2]) -> Result<(Frequencies, [[f64; 2]; 2])> {
    let jets = hessian_jets(p, x0)?;
    let diag = eps_jet_diagonalize(&jets, 1)?;
    let l0: Vec<f64> = diag.lambdas.iter().map(|l| l[0]).collect();
    if l0.iter().any(|&l| l <= 0.0) {
        return Err(Error::DegenerateHessian(l0));
    }
    let omega0 = [l0[0].sqrt(), l0[1].sqrt()];
    let omega1 = [
        diag.lambdas[0][1] / (2.0 * omega0[0]),
        diag.lambdas[1][1] / (2.0 * omega0[1]),
    ];
    let u = &diag.u[0];
    Ok((Frequencies::new(omega0, omega1)?, oriented_frame([u[(0, 0)], u[(1, 0)]])))
}

/// Frame with first column `e1` (first non-negligible component made
/// positive) and second column `e1` rotated by +90 degrees, so `det = +1`.
fn oriented_frame(e1: [f64; 2]) -> [[f64; 2]; 2] {
    let norm = e1[0].hypot(e1[1]);
    let lead = if e1[0].abs() > 1e-12 * norm { e1[0] } else { e1[1] };
    let s = lead.signum() / norm;
    let (a, b) = (s * e1[0], s * e1[1]);
    [[a, -b], [b, a]]
}

/// Translation, rotation into the Hessian eigenframe and the scaling
/// `y_j -> sqrt(omega_j) y_j`, followed by Taylor re-expansion.
pub fn prepare(p: &PolyPotential) -> Result<PreparedOperator> {
    let x0 = critical_point(p, 0.0, CRITICAL_TOL)?;
    let (freqs, frame) = harmonic_frame(p, x0)?;
    match detect_resonance(freqs.omega0, RESONANCE_TOL) {
        Some((1, 2)) => {}
        _ => return Err(Error::ResonanceMismatch { omega: freqs.omega0 }),
    }
    // Snap to exact 1:2 so resonant monomials have eigenvalue exactly 0.
    let w1 = 0.5 * (freqs.omega0[0] + 0.5 * freqs.omega0[1]);
    let freqs = Frequencies::new([w1, 2.0 * w1], freqs.omega1)?;

    let scale = [1.0 / freqs.omega0[0].sqrt(), 1.0 / freqs.omega0[1].sqrt()];
    let map = [
        [frame[0][0] * scale[0], frame[0][1] * scale[1]],
        [frame[1][0] * scale[0], frame[1][1] * scale[1]],
    ];
    let mut remainder = FormalSeries::zero();
    for (k, slice) in p.slices().iter().enumerate() {
        let shifted = slice.compose_affine(x0, map).from_degree(3);
        remainder += &shifted.to_phase_series().to_z().times_eps(k as u32);
    }
    let r_cubic = p.v0().compose_affine(x0, map).homogeneous(3).to_phase_series().to_z();

    let mut prep = PreparedOperator {
        w0: [p.v0().eval(x0), p.v1().eval(x0)],
        freqs,
        r_cubic,
        remainder,
        mu: 0.0,
        critical_point: x0,
        frame,
    };
    let closed = mu_closed_form(p)?;
    let from_cubic = prep.mu_from_cubic();
    let third = [[3, 0], [2, 1], [1, 2], [0, 3]]
        .iter()
        .map(|&k| p.v0().partial(k, x0).abs())
        .fold(0.0, f64::max);
    let mu_scale = third / (8.0 * std::f64::consts::SQRT_2 * freqs.omega0[0].powf(1.5));
    if (closed - from_cubic).abs() > 1e-10 * closed.abs().max(from_cubic.abs()).max(mu_scale) {
        return Err(Error::MuMismatch { closed, from_cubic });
    }
    prep.mu = closed;
    Ok(prep)
}

/// `mu` directly from the second and third derivatives of `V^0` at its
/// critical point, for a Hessian with eigenvalues `(lambda, 4 lambda)`.
pub fn mu_closed_form(p: &PolyPotential) -> Result<f64> {
    let x0 = critical_point(p, 0.0, CRITICAL_TOL)?;
    let v = p.v0();
    let (v11, v12, v22) = (v.partial([2, 0], x0), v.partial([1, 1], x0), v.partial([0, 2], x0));
    let d = [
        v.partial([3, 0], x0),
        v.partial([2, 1], x0),
        v.partial([1, 2], x0),
        v.partial([0, 3], x0),
    ];
    let x = v11 - v22;
    let lambda = (x * x + 4.0 * v12 * v12).sqrt() / 3.0;
    let trace = v11 + v22;
    if lambda <= 0.0 || (trace - 5.0 * lambda).abs() > RESONANCE_TOL * trace.abs() {
        let (lo, hi) = (0.5 * (trace - 3.0 * lambda), 0.5 * (trace + 3.0 * lambda));
        if lo <= 0.0 {
            return Err(Error::DegenerateHessian(vec![lo, hi]));
        }
        return Err(Error::ResonanceMismatch {
            omega: [lo.sqrt(), hi.sqrt()],
        });
    }
    let omega = lambda.sqrt();
    let pref = 1.0 / (8.0 * std::f64::consts::SQRT_2 * omega.powf(1.5));
    let (num, den) = (3.0 * lambda - x, 3.0 * lambda + x);
    if num.abs() >= den.abs() {
        let z = 2.0 * v12 / num;
        let t = z * d[0] + (1.0 - 2.0 * z * z) * d[1] + (z.powi(3) - 2.0 * z) * d[2] + z * z * d[3];
        Ok(pref * t / (1.0 + z * z).powf(1.5))
    } else {
        // The slow eigenvector is close to the x2 axis; use w = 1/z.
        let w = 2.0 * v12 / den;
        let r = (1.0 + w * w).sqrt();
        // Same tie-break as the numerical frame: a negligible first
        // component hands the sign choice to the second one.
        let (a, b) = if w.abs() <= 1e-12 { (0.0, 1.0) } else { (w.abs() / r, -w.signum() / r) };
        let (c, dd) = (-b, a);
        let t = a * a * c * d[0] + (a * a * dd + 2.0 * a * b * c) * d[1] + (b * b * c + 2.0 * a * b * dd) * d[2] + b * b * dd * d[3];
        Ok(pref * t)
    }
}

/// Coprime `(p, q)` with `p, q <= 12` minimizing `|q omega1 - p omega2|`,
/// returned when the defect relative to `omega2` is at most `tol`.
pub fn detect_resonance(omega0: [f64; 2], tol: f64) -> Option<(u32, u32)> {
    let mut best: Option<(f64, (u32, u32))> = None;
    for p in 1..=12u32 {
        for q in 1..=12u32 {
            if gcd(p, q) != 1 {
                continue;
            }
            let defect = (q as f64 * omega0[0] - p as f64 * omega0[1]).abs();
            if best.is_none_or(|(d, _)| defect < d) {
                best = Some((defect, (p, q)));
            }
        }
    }
    best.filter(|(d, _)| d / omega0[1] <= tol).map(|(_, pq)| pq)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn to_dmatrix(h: [[f64; 2]; 2]) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[h[0][0], h[0][1], h[1][0], h[1][1]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermi_family_frequencies() {
        let f = frequency_jets(&PolyPotential::fermi_family(1.0, 0.7)).unwrap();
        assert!((f.omega0[0] - 1.0).abs() < 1e-14);
        assert!((f.omega0[1] - 2.0).abs() < 1e-14);
        assert!((f.omega1[0] - 1.0).abs() < 1e-14);
        assert!((f.omega1[1] - 0.7).abs() < 1e-14);
    }

    #[test]
    fn harmonic_frequencies() {
        let p = PolyPotential::new(Poly2::from_terms([((2, 0), 2.0), ((0, 2), 8.0)]), Poly2::zero());
        let f = frequency_jets(&p).unwrap();
        assert_eq!(f.omega0, [2.0, 4.0]);
        assert_eq!(f.omega1, [0.0, 0.0]);
        // lambda_1 = 1 + 2 eps
        let p = PolyPotential::new(
            Poly2::from_terms([((2, 0), 0.5), ((0, 2), 2.0)]),
            Poly2::from_terms([((2, 0), 1.0)]),
        );
        assert!((frequency_jets(&p).unwrap().omega1[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fermi_family_mu() {
        for gamma in [0.0, 1.0, 0.5, -0.8] {
            let p = PolyPotential::fermi_family(gamma, 1.0);
            let expect = gamma / (4.0 * std::f64::consts::SQRT_2);
            assert!((mu_closed_form(&p).unwrap() - expect).abs() < 1e-12);
            let prep = prepare(&p).unwrap();
            assert!((prep.mu - expect).abs() < 1e-12);
            assert_eq!(prep.w0, [0.0, 0.0]);
            assert_eq!(prep.critical_point, [0.0, 0.0]);
        }
    }

    #[test]
    fn closed_form_frequency_for_diag_1_4() {
        let p = PolyPotential::new(Poly2::from_terms([((2, 0), 0.5), ((0, 2), 2.0)]), Poly2::zero());
        assert_eq!(mu_closed_form(&p).unwrap(), 0.0);
        // x1 is the fast direction, so the slow frame vector is (0, 1) and
        // x1 x2^2 becomes -y1^2 y2.
        let p = PolyPotential::new(
            Poly2::from_terms([((2, 0), 2.0), ((0, 2), 0.5), ((1, 2), 1.0)]),
            Poly2::zero(),
        );
        let expect = -1.0 / (4.0 * std::f64::consts::SQRT_2);
        assert!((mu_closed_form(&p).unwrap() - expect).abs() < 1e-15);
        assert!((prepare(&p).unwrap().mu_from_cubic() - expect).abs() < 1e-15);
    }

    #[test]
    fn resonance_detection() {
        assert_eq!(detect_resonance([1.0, 2.0], 1e-9), Some((1, 2)));
        assert_eq!(detect_resonance([1.0, 2f64.sqrt()], 1e-6), None);
        assert_eq!(detect_resonance([1.0000001, 2.0], 1e-6), Some((1, 2)));
        assert_eq!(detect_resonance([3.0, 2.0], 1e-12), Some((3, 2)));
    }

    #[test]
    fn non_resonant_potential_is_rejected() {
        let p = PolyPotential::new(Poly2::from_terms([((2, 0), 0.5), ((0, 2), 1.0)]), Poly2::zero());
        assert!(matches!(prepare(&p), Err(Error::ResonanceMismatch { .. })));
        assert!(matches!(mu_closed_form(&p), Err(Error::ResonanceMismatch { .. })));
    }

    #[test]
    fn oriented_frame_has_unit_determinant() {
        for e in [[0.6, -0.8], [-0.6, 0.8], [0.0, -1.0], [1e-20, 1.0]] {
            let f = oriented_frame(e);
            assert!((f[0][0] * f[1][1] - f[0][1] * f[1][0] - 1.0).abs() < 1e-15);
            assert!(f[0][0] > 0.0 || (f[0][0].abs() < 1e-12 && f[1][0] > 0.0));
        }
    }
}
