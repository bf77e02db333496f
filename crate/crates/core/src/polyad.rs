//! Tridiagonal polyad matrices of the order-3 normal form and the spectrum
//! they generate.
//!
//! On the polyad `H_N = span{(N - 2l, l) : l = 0..=N/2}` the operator
//! `K_3 = eps L_2 + mu Re(z1^2 zbar2)` acts as a symmetric tridiagonal
//! matrix in the basis ordered by `alpha_2 = l`.

use crate::eig::{tridiag_eigs, SymmetricMatrix};
use crate::error::Result;
use crate::prep::PreparedOperator;
use crate::spectrum::{SpectrumSource, SpectrumTable};

/// Largest polyad index scanned by [`nf_spectrum_below`].
pub const MAX_POLYAD: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyadMatrix {
    pub n_polyad: usize,
    /// `d_{N,l} = hbar eps (omega11 (N - 2l + 1/2) + omega21 (l + 1/2))`.
    pub diag: Vec<f64>,
    /// `A_{N,l} = sqrt(2) mu hbar^{3/2} sqrt((l + 1)(N - 2l)(N - 2l - 1))`.
    pub offdiag: Vec<f64>,
    pub hbar: f64,
    pub eps: f64,
}

impl PolyadMatrix {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// The basis exponents `(N - 2l, l)`.
    pub fn basis(&self) -> Vec<[usize; 2]> {
        (0..self.size()).map(|l| [self.n_polyad - 2 * l, l]).collect()
    }

    pub fn to_dense(&self) -> SymmetricMatrix {
        SymmetricMatrix::from_tridiagonal(&self.diag, &self.offdiag).expect("consistent lengths")
    }

    /// Gershgorin radius around zero: `max |d| + 2 max |A|`.
    pub fn spread(&self) -> f64 {
        let d = self.diag.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let a = self.offdiag.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        d + 2.0 * a
    }
}

pub fn build_polyad_matrix(n_polyad: usize, prep: &PreparedOperator, hbar: f64, eps: f64) -> PolyadMatrix {
    let [w11, w21] = prep.freqs.omega1;
    let n = n_polyad as f64;
    let size = n_polyad / 2 + 1;
    let diag = (0..size)
        .map(|l| {
            let l = l as f64;
            hbar * eps * w11 * (n - 2.0 * l + 0.5) + hbar * eps * w21 * (l + 0.5)
        })
        .collect();
    let coupling = std::f64::consts::SQRT_2 * prep.mu * hbar.powf(1.5);
    let offdiag = (0..size - 1)
        .map(|l| {
            let l = l as f64;
            coupling * ((l + 1.0) * (n - 2.0 * l) * (n - 2.0 * l - 1.0)).sqrt()
        })
        .collect();
    PolyadMatrix {
        n_polyad,
        diag,
        offdiag,
        hbar,
        eps,
    }
}

/// Ascending eigenvalues `mu_{eps,N,j}`.
pub fn polyad_eigs(m: &PolyadMatrix) -> Result<Vec<f64>> {
    tridiag_eigs(&m.diag, &m.offdiag)
}

/// A point `(lambda1, lambda2)` of the joint spectrum of
/// `(hbar^{-1} H_20, K_3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSpectrumPoint {
    pub n_polyad: usize,
    pub j: usize,
    /// `omega10 (N + 3/2)`.
    pub lambda1: f64,
    /// `mu_{eps,N,j}`.
    pub lambda2: f64,
}

impl JointSpectrumPoint {
    /// `hbar lambda1 + lambda2 + w0`, an eigenvalue of the normal form.
    pub fn energy(&self, hbar: f64, w0: f64) -> f64 {
        hbar * self.lambda1 + self.lambda2 + w0
    }
}

fn polyad_points(n: usize, prep: &PreparedOperator, hbar: f64, eps: f64) -> Result<(PolyadMatrix, Vec<JointSpectrumPoint>)> {
    let m = build_polyad_matrix(n, prep, hbar, eps);
    let lambda1 = prep.freqs.omega0[0] * (n as f64 + 1.5);
    let pts = polyad_eigs(&m)?
        .into_iter()
        .enumerate()
        .map(|(j, lambda2)| JointSpectrumPoint {
            n_polyad: n,
            j,
            lambda1,
            lambda2,
        })
        .collect();
    Ok((m, pts))
}

/// All joint-spectrum points with `N <= n_max`.
pub fn joint_spectrum(prep: &PreparedOperator, hbar: f64, eps: f64, n_max: usize) -> Result<Vec<JointSpectrumPoint>> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        out.extend(polyad_points(n, prep, hbar, eps)?.1);
    }
    Ok(out)
}

/// Normal-form eigenvalues at most `energy`. Polyads are scanned until
/// `hbar omega10 (N + 3/2) + w0 - spread > energy (1 + eta)`.
pub fn nf_spectrum_below(prep: &PreparedOperator, hbar: f64, eps: f64, energy: f64, eta: f64) -> Result<SpectrumTable> {
    let w0 = prep.w0_at(eps);
    let cut = energy + eta * energy.abs();
    let mut values = Vec::new();
    for n in 0..=MAX_POLYAD {
        let (m, pts) = polyad_points(n, prep, hbar, eps)?;
        let base = hbar * prep.freqs.omega0[0] * (n as f64 + 1.5) + w0;
        if base - m.spread() > cut {
            break;
        }
        values.extend(pts.iter().map(|p| p.energy(hbar, w0)));
    }
    Ok(SpectrumTable::new(SpectrumSource::NormalForm, hbar, eps, energy, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::Frequencies;

    fn prep(mu: f64, c: f64) -> PreparedOperator {
        PreparedOperator::from_parts(Frequencies::new([1.0, 2.0], [1.0, c]).unwrap(), mu, [0.0, 0.0])
    }

    #[test]
    fn small_polyads() {
        let (h, e) = (0.01, 0.1);
        let m1 = build_polyad_matrix(1, &prep(0.3, 2.0), h, e);
        assert_eq!(m1.size(), 1);
        assert!((m1.diag[0] - h * e * (1.5 + 0.5 * 2.0)).abs() < 1e-18);
        let c = 3.0;
        let m2 = build_polyad_matrix(2, &prep(0.3, c), h, e);
        assert!((m2.diag[0] - h * e * (2.5 + 0.5 * c)).abs() < 1e-18);
        assert!((m2.diag[1] - h * e * (0.5 + 1.5 * c)).abs() < 1e-18);
        assert!((m2.offdiag[0] - 2.0 * 0.3 * h.powf(1.5)).abs() < 1e-18);
        assert_eq!(m2.basis(), vec![[2, 0], [0, 1]]);
    }

    #[test]
    fn pure_coupling_eigenvalues() {
        let h: f64 = 0.02;
        let mu = 0.4;
        let m = build_polyad_matrix(2, &prep(mu, 1.0), h, 0.0);
        let ev = polyad_eigs(&m).unwrap();
        let a = 2.0 * mu * h.powf(1.5);
        assert!((ev[0] + a).abs() < 1e-15 && (ev[1] - a).abs() < 1e-15);
    }

    #[test]
    fn zero_parameters_give_zero_matrix() {
        let m = build_polyad_matrix(7, &prep(0.0, 1.0), 0.1, 0.0);
        assert_eq!(m.size(), 4);
        assert!(m.diag.iter().chain(&m.offdiag).all(|&x| x == 0.0));
        assert!(polyad_eigs(&m).unwrap().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn harmonic_cluster_counts() {
        let h = 0.01;
        let t = nf_spectrum_below(&prep(0.0, 1.0), h, 0.0, 10.0 * h, 0.1).unwrap();
        // hbar (N + 3/2) <= 10 hbar  <=>  N <= 8, multiplicity N/2 + 1
        let expected: usize = (0..=8).map(|n| n / 2 + 1).sum();
        assert_eq!(t.len(), expected);
        assert!(t.values.iter().all(|v| ((v / h - 1.5).round() - (v / h - 1.5)).abs() < 1e-9));
        assert!(nf_spectrum_below(&prep(0.1, 1.0), h, 0.0, 1.4 * h, 0.1).unwrap().is_empty());
    }
}
