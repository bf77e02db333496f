use super::poly::Poly2;
use super::potential::PolyPotential;
use crate::error::{Error, Result};

/// Outcome of the sufficient condition for a unique non-degenerate minimum
/// of the model family at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniqueMinCertificate {
    /// `1 - gamma^2 / (8 (1 + c eps))`.
    pub kappa: f64,
    /// `7/16 + eps - 1/(4 kappa)`, the leftover `x1^2` coefficient.
    pub x1_coefficient: f64,
    /// Both quantities positive. `false` only means the sufficient
    /// condition fails.
    pub holds: bool,
    /// Largest mismatch between the family and its sum-of-squares form on a
    /// test grid; `None` when `kappa = 0`.
    pub sos_defect: Option<f64>,
}

pub fn check_unique_min(gamma: f64, c: f64, eps: f64) -> Result<UniqueMinCertificate> {
    if 0.5 + eps <= 0.0 || 1.0 + c * eps <= 0.0 {
        return Err(Error::Precondition(format!(
            "need 1/2 + eps > 0 and 1 + c eps > 0 (eps = {eps}, c = {c})"
        )));
    }
    let a = 1.0 + c * eps;
    let kappa = 1.0 - gamma * gamma / (8.0 * a);
    let x1_coefficient = 7.0 / 16.0 + eps - 1.0 / (4.0 * kappa);
    let holds = kappa > 0.0 && x1_coefficient > 0.0;
    let sos_defect = (kappa != 0.0).then(|| {
        let v = PolyPotential::fermi_family(gamma, c).at(eps);
        let sos = sum_of_squares(gamma, a, eps, kappa);
        let mut worst: f64 = 0.0;
        for i in -4..=4 {
            for j in -4..=4 {
                let x = [0.37 * i as f64, 0.29 * j as f64];
                worst = worst.max((v.eval(x) - sos.eval(x)).abs());
            }
        }
        worst
    });
    Ok(UniqueMinCertificate {
        kappa,
        x1_coefficient,
        holds,
        sos_defect,
    })
}

/// `(7/16 + eps - 1/(4 kappa)) x1^2 + 2a (x2 + gamma x1^2/(4a))^2
///  + kappa x1^2 (x1 + 1/(2 kappa))^2 + (x2^2 + x1/4)^2`.
fn sum_of_squares(gamma: f64, a: f64, eps: f64, kappa: f64) -> Poly2 {
    let x1 = Poly2::var(0);
    let x2 = Poly2::var(1);
    let x1sq = x1.pow(2);
    let t1 = x1sq.scale(7.0 / 16.0 + eps - 1.0 / (4.0 * kappa));
    let t2 = (&x2 + &x1sq.scale(gamma / (4.0 * a))).pow(2).scale(2.0 * a);
    let t3 = &x1sq * &(&x1 + &Poly2::constant(1.0 / (2.0 * kappa))).pow(2).scale(kappa);
    let t4 = (&x2.pow(2) + &x1.scale(0.25)).pow(2);
    &(&t1 + &t2) + &(&t3 + &t4)
}
