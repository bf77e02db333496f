//! Moyal (Weyl) bracket on polynomial symbols.
//!
//! With `z_j = x_j + i xi_j` the bidifferential operator
//! `box = sum_j d_{xi_j} (x) d_{x_j} - d_{x_j} (x) d_{xi_j}` becomes
//! `2i sum_j (d_{z_j} (x) d_{zbar_j} - d_{zbar_j} (x) d_{z_j})`, and
//!
//! ```text
//! i [f, g]_W = 2 sin(hbar box / 2) (f (x) g) |_diagonal
//! ```
//!
//! For polynomials the sine series terminates. This orientation gives
//! `[x_1, xi_1]_W = i hbar` and
//! `ad_{H_20}(z^a zbar^b) = hbar <b - a, omega_0> z^a zbar^b` verbatim.

use num_complex::Complex64;

use super::series::{FormalSeries, Monomial, MonomialKey};

/// `<beta - alpha, omega0>`: the eigenvalue of `hbar^{-1} ad_{H_20}` on the
/// monomial. Zero exactly on resonant monomials.
pub fn ad_h20_eigenvalue(mono: &Monomial, omega0: [f64; 2]) -> f64 {
    (0..2)
        .map(|j| (mono.beta[j] as f64 - mono.alpha[j] as f64) * omega0[j])
        .sum()
}

/// The Weyl bracket `[f, g]_W` truncated at `max_degree`.
pub fn weyl_bracket(f: &FormalSeries, g: &FormalSeries, max_degree: u32) -> FormalSeries {
    // [f,g] = -2i sum_k (-1)^k (hbar/2)^(2k+1) box^(2k+1) / (2k+1)!
    sine_series(f, g, max_degree, 0, |k| {
        let n = 2 * k + 1;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        (
            Complex64::new(0.0, -2.0 * sign * 0.5f64.powi(n as i32) / factorial(n)),
            n,
        )
    })
}

/// `(i/hbar) [f, g]_W`, truncated at `max_degree`.
///
/// This is the operator appearing in the Lie series `exp(i hbar^{-1} ad_A)`.
/// It maps `D_a x D_b` into `D_{a+b-2}`.
pub fn hbar_bracket(f: &FormalSeries, g: &FormalSeries, max_degree: u32) -> FormalSeries {
    // (i/hbar)[f,g] = sum_k (-1)^k (hbar/2)^(2k) box^(2k+1) / (2k+1)!
    sine_series(f, g, max_degree, 2, |k| {
        let n = 2 * k + 1;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        (Complex64::new(sign * 0.5f64.powi(2 * k as i32) / factorial(n), 0.0), 2 * k)
    })
}

/// Shared driver: for each pair of monomials and each odd power `2k+1` of
/// `box`, `weight(k)` returns the scalar factor and the power of `hbar` to
/// attach. `degree_drop` is the grading lost by the overall prefactor.
fn sine_series(
    f: &FormalSeries,
    g: &FormalSeries,
    max_degree: u32,
    degree_drop: u32,
    weight: impl Fn(u32) -> (Complex64, u32),
) -> FormalSeries {
    let mut out = FormalSeries::zero();
    for (mf, cf) in f.terms() {
        for (mg, cg) in g.terms() {
            let total = mf.degree() + mg.degree();
            if total < degree_drop || total - degree_drop > max_degree {
                continue;
            }
            let top = mf.phase_degree().min(mg.phase_degree());
            let mut k = 0;
            while 2 * k < top {
                let (w, hbar_power) = weight(k);
                for (m, c) in box_power(2 * k + 1, mf, mg) {
                    let m = Monomial {
                        hbar: m.hbar + hbar_power,
                        ..m
                    };
                    out.add_term(m, cf * cg * w * c);
                }
                k += 1;
            }
        }
    }
    out
}

/// `box^n (z^a zbar^b (x) z^c zbar^d)` restricted to the diagonal, with
/// `eps`/`hbar` exponents carried along.
fn box_power(n: u32, f: &Monomial, g: &Monomial) -> Vec<(Monomial, Complex64)> {
    let mut out = Vec::new();
    let (a, b) = (f.alpha, f.beta);
    let (c, d) = (g.alpha, g.beta);
    // (2i)^n
    let two_i_n = Complex64::new(0.0, 2.0).powu(n);
    let nf = factorial(n);
    // k1: dz1 (x) dzb1, k2: dz2 (x) dzb2, k3: dzb1 (x) dz1, k4: dzb2 (x) dz2
    for k1 in 0..=n.min(a[0]).min(d[0]) {
        for k2 in 0..=(n - k1).min(a[1]).min(d[1]) {
            for k3 in 0..=(n - k1 - k2).min(b[0]).min(c[0]) {
                let k4 = n - k1 - k2 - k3;
                if k4 > b[1] || k4 > c[1] {
                    continue;
                }
                let multinomial =
                    nf / (factorial(k1) * factorial(k2) * factorial(k3) * factorial(k4));
                let sign = if (k3 + k4) % 2 == 0 { 1.0 } else { -1.0 };
                let left = falling(a[0], k1) * falling(a[1], k2) * falling(b[0], k3) * falling(b[1], k4);
                let right = falling(d[0], k1) * falling(d[1], k2) * falling(c[0], k3) * falling(c[1], k4);
                let mono = Monomial {
                    alpha: [a[0] + c[0] - k1 - k3, a[1] + c[1] - k2 - k4],
                    beta: [b[0] + d[0] - k1 - k3, b[1] + d[1] - k2 - k4],
                    eps: f.eps + g.eps,
                    hbar: f.hbar + g.hbar,
                };
                out.push((mono, two_i_n * (sign * multinomial * left * right)));
            }
        }
    }
    out
}

/// `exp((i/hbar) ad_gen) s`, truncated at `max_degree`. `gen` must lie in
/// `O_3` so that each bracket raises the degree.
pub fn lie_transform(gen: &FormalSeries, s: &FormalSeries, max_degree: u32) -> FormalSeries {
    debug_assert!(gen.min_degree().is_none_or(|d| d >= 3));
    let mut out = s.truncate(max_degree);
    let mut term = out.clone();
    let mut k = 1.0;
    while !term.is_empty() && !gen.is_empty() {
        term = hbar_bracket(gen, &term, max_degree).scale(Complex64::new(1.0 / k, 0.0));
        out += &term;
        k += 1.0;
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `m (m-1) ... (m-k+1)`
fn falling(m: u32, k: u32) -> f64 {
    (0..k).map(|i| f64::from(m - i)).product()
}
