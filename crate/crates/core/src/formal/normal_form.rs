//! Homological splitting and the ε-Birkhoff-Gustavson iteration.

use num_complex::Complex64;

use super::bracket::{ad_h20_eigenvalue, lie_transform, weyl_bracket};
use super::series::{FormalSeries, Monomial};
use crate::error::{Error, Result};

/// Default small-denominator floor for [`split_homological`].
pub const SMALL_DENOMINATOR_FLOOR: f64 = 1e-9;

/// What to do with a monomial whose eigenvalue is nonzero but below the floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmallDenominatorPolicy {
    /// Report [`Error::SmallDenominator`].
    #[default]
    Fail,
    /// Treat the monomial as resonant and leave it in the kernel.
    KeepResonant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomologicalConfig {
    pub floor: f64,
    pub policy: SmallDenominatorPolicy,
}

impl Default for HomologicalConfig {
    fn default() -> Self {
        Self {
            floor: SMALL_DENOMINATOR_FLOOR,
            policy: SmallDenominatorPolicy::Fail,
        }
    }
}

/// `r = kernel + (i/hbar)[H_20, generator]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub kernel: FormalSeries,
    pub generator: FormalSeries,
}

/// One normal-form step at degree 3.
#[derive(Debug, Clone, PartialEq)]
pub struct Order3 {
    pub k3: FormalSeries,
    pub a3: FormalSeries,
}

/// Normal form up to some degree: `k = K_3 + ... + K_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub k: FormalSeries,
    /// `generators[i]` is the degree `3 + i` generator.
    pub generators: Vec<FormalSeries>,
    pub order: u32,
}

impl NormalForm {
    /// The homogeneous piece `K_degree`.
    pub fn k_part(&self, degree: u32) -> FormalSeries {
        self.k.homogeneous(degree)
    }
}

/// Splits `r` along `ker ⊕ Im` of `(i/hbar) ad_{H_20}` with the default floor.
pub fn split_homological(r: &FormalSeries, omega0: [f64; 2]) -> Result<Split> {
    split_homological_with(r, omega0, &HomologicalConfig::default())
}

pub fn split_homological_with(r: &FormalSeries, omega0: [f64; 2], cfg: &HomologicalConfig) -> Result<Split> {
    let mut kernel = FormalSeries::zero();
    let mut generator = FormalSeries::zero();
    for (mono, c) in r.terms() {
        let lambda = ad_h20_eigenvalue(mono, omega0);
        if lambda == 0.0 {
            kernel.add_term(*mono, *c);
        } else if lambda.abs() < cfg.floor {
            match cfg.policy {
                SmallDenominatorPolicy::Fail => {
                    return Err(Error::SmallDenominator {
                        monomial: mono.to_string(),
                        value: lambda,
                        floor: cfg.floor,
                    })
                }
                SmallDenominatorPolicy::KeepResonant => kernel.add_term(*mono, *c),
            }
        } else {
            // (i/hbar)[H_20, z^a zbar^b] = i lambda z^a zbar^b
            generator.add_term(*mono, c / Complex64::new(0.0, lambda));
        }
    }
    Ok(Split { kernel, generator })
}

/// One BGNF step on the degree-3 part of `perturbation`.
pub fn bgnf_order3(h20: &FormalSeries, perturbation: &FormalSeries, omega0: [f64; 2]) -> Result<Order3> {
    let nf = bgnf_iterate(h20, perturbation, omega0, 3)?;
    Ok(Order3 {
        k3: nf.k,
        a3: nf.generators.into_iter().next().unwrap_or_default(),
    })
}

/// Successive Lie transforms killing non-resonant terms degree by degree,
/// from degree 3 up to `order`.
pub fn bgnf_iterate(
    h20: &FormalSeries,
    perturbation: &FormalSeries,
    omega0: [f64; 2],
    order: u32,
) -> Result<NormalForm> {
    bgnf_iterate_with(h20, perturbation, omega0, order, &HomologicalConfig::default())
}

pub fn bgnf_iterate_with(
    h20: &FormalSeries,
    perturbation: &FormalSeries,
    omega0: [f64; 2],
    order: u32,
    cfg: &HomologicalConfig,
) -> Result<NormalForm> {
    if order < 3 {
        return Err(Error::Precondition(format!("normal form order {order} < 3")));
    }
    if let Some(d) = perturbation.min_degree().filter(|&d| d < 3) {
        return Err(Error::PerturbationOrder { degree: d });
    }
    let mut total = h20 + &perturbation.truncate(order);
    let mut k = FormalSeries::zero();
    let mut generators = Vec::with_capacity((order - 2) as usize);
    for n in 3..=order {
        let split = split_homological_with(&total.homogeneous(n), omega0, cfg)?;
        if !split.generator.is_empty() {
            total = lie_transform(&split.generator, &total, order);
        }
        k += &split.kernel;
        generators.push(split.generator);
    }
    Ok(NormalForm { k, generators, order })
}

/// `(mu, nu)` with `K ⊃ mu Re(z1^2 zbar2) + nu Im(z1^2 zbar2)` at order
/// `eps^0 hbar^0`.
pub fn resonant_coupling(k: &FormalSeries) -> (f64, f64) {
    let c = k.coeff(&Monomial::zz([2, 0], [0, 1]));
    // mu Re(w) + nu Im(w) = (mu - i nu)/2 w + c.c.
    (2.0 * c.re, -2.0 * c.im)
}

/// `max |[H_20, K_j]|` over the homogeneous pieces of a normal form.
pub fn commutator_defect(h20: &FormalSeries, nf: &NormalForm) -> f64 {
    (3..=nf.order)
        .map(|j| weyl_bracket(h20, &nf.k_part(j), j + 2).max_abs())
        .fold(0.0, f64::max)
}

/// True when every monomial of `k` is resonant for `omega0`.
pub fn is_resonant(k: &FormalSeries, omega0: [f64; 2]) -> bool {
    k.terms().all(|(m, _)| ad_h20_eigenvalue(m, omega0) == 0.0)
}
