//! Sorted eigenvalue lists and their comparison.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumSource {
    Galerkin,
    NormalForm,
}

impl fmt::Display for SpectrumSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Galerkin => "galerkin",
            Self::NormalForm => "normal-form",
        })
    }
}

/// Eigenvalues at most `energy`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub source: SpectrumSource,
    pub hbar: f64,
    pub eps: f64,
    pub energy: f64,
    pub values: Vec<f64>,
}

impl SpectrumTable {
    /// Sorts `values` and keeps those at most `energy`.
    pub fn new(source: SpectrumSource, hbar: f64, eps: f64, energy: f64, mut values: Vec<f64>) -> Self {
        values.retain(|&v| v <= energy);
        values.sort_by(f64::total_cmp);
        Self {
            source,
            hbar,
            eps,
            energy,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumDistance {
    pub linf: f64,
    pub l2: f64,
    pub count: usize,
}

/// Pairs the values at most `energy` by sorted rank, up to the shorter list.
pub fn compare_spectra(a: &SpectrumTable, b: &SpectrumTable, energy: f64) -> Result<SpectrumDistance> {
    compare_values(&a.values, &b.values, energy)
}

/// [`compare_spectra`] on bare ascending slices.
pub fn compare_values(a: &[f64], b: &[f64], energy: f64) -> Result<SpectrumDistance> {
    let below = |v: &[f64]| v.iter().take_while(|&&x| x <= energy).count();
    let count = below(a).min(below(b));
    if count == 0 {
        return Err(Error::EmptyOverlap { energy });
    }
    let (mut linf, mut sq) = (0.0f64, 0.0);
    for (x, y) in a.iter().zip(b).take(count) {
        let d = (x - y).abs();
        linf = linf.max(d);
        sq += d * d;
    }
    Ok(SpectrumDistance {
        linf,
        l2: sq.sqrt(),
        count,
    })
}

/// Least-squares slope of `log10(y)` against `log10(x)`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.log10(), y.log10())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(v: Vec<f64>) -> SpectrumTable {
        SpectrumTable::new(SpectrumSource::Galerkin, 0.01, 0.0, 10.0, v)
    }

    #[test]
    fn identical_and_shifted() {
        let a = table(vec![0.1, 0.2, 0.4]);
        assert_eq!(
            compare_spectra(&a, &a, 1.0).unwrap(),
            SpectrumDistance { linf: 0.0, l2: 0.0, count: 3 }
        );
        let b = table(vec![0.1 + 1e-3, 0.2 + 1e-3, 0.4 + 1e-3]);
        let d = compare_spectra(&a, &b, 1.0).unwrap();
        assert!((d.linf - 1e-3).abs() < 1e-15);
        assert!((d.l2 - 1e-3 * 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn empty_overlap_is_an_error() {
        let a = table(vec![0.5]);
        assert!(matches!(compare_spectra(&a, &a, 0.1), Err(Error::EmptyOverlap { .. })));
    }

    #[test]
    fn symmetric_and_cutoff_invariant() {
        let a = table(vec![0.1, 0.25, 0.3]);
        let b = table(vec![0.11, 0.2, 0.33, 0.9]);
        assert_eq!(compare_spectra(&a, &b, 0.5), compare_spectra(&b, &a, 0.5));
        let c = table(vec![0.1, 0.25, 0.3, 0.7, 0.8]);
        assert_eq!(compare_spectra(&a, &b, 0.5), compare_spectra(&c, &b, 0.5));
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [0.02, 0.01, 0.005].iter().map(|&h| (h, 3.0 * h * h)).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
    }
}
