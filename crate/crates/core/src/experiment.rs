//! Drivers for the numerical experiments: truncation studies, error scaling
//! between the Galerkin and normal-form spectra, joint spectra and overlays,
//! with CSV writers for each.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite::galerkin_spectrum_below;
use crate::polyad::{build_polyad_matrix, joint_spectrum, nf_spectrum_below, polyad_eigs, JointSpectrumPoint};
use crate::prep::{prepare, PolyPotential, PreparedOperator};
use crate::spectrum::{compare_spectra, loglog_slope, SpectrumSource};

/// Relative margin above `E` for the polyad scan.
pub const POLYAD_ETA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsMode {
    Fixed(f64),
    /// `eps = sqrt(hbar)`.
    SqrtHbar,
}

impl EpsMode {
    pub fn at(&self, hbar: f64) -> f64 {
        match *self {
            EpsMode::Fixed(e) => e,
            EpsMode::SqrtHbar => hbar.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub gamma: f64,
    pub c: f64,
    pub eps_mode: EpsMode,
    /// Strictly descending.
    pub hbar_list: Vec<f64>,
    /// `E = energy_factor * hbar`.
    pub energy_factor: f64,
    pub output_dir: PathBuf,
    /// Replaces the `(gamma, c)` family when set.
    pub potential: Option<PolyPotential>,
    /// Galerkin basis size; [`crate::hermite::truncation_m`] when unset.
    pub m_override: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(gamma: f64, c: f64, eps_mode: EpsMode, hbar_list: Vec<f64>) -> Self {
        Self {
            gamma,
            c,
            eps_mode,
            hbar_list,
            energy_factor: 10.0,
            output_dir: PathBuf::from("."),
            potential: None,
            m_override: None,
        }
    }

    pub fn potential(&self) -> PolyPotential {
        self.potential
            .clone()
            .unwrap_or_else(|| PolyPotential::fermi_family(self.gamma, self.c))
    }

    pub fn energy(&self, hbar: f64) -> f64 {
        self.energy_factor * hbar
    }

    /// Checks the `hbar` list and that the window `E` holds the lowest
    /// polyad. Returns the prepared operator.
    pub fn validate(&self) -> Result<PreparedOperator> {
        if self.hbar_list.is_empty() {
            return Err(Error::Config("hbar list is empty".into()));
        }
        if self.hbar_list.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(Error::Config(format!("hbar values must be positive: {:?}", self.hbar_list)));
        }
        if self.hbar_list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config(format!("hbar list must be strictly descending: {:?}", self.hbar_list)));
        }
        if let EpsMode::Fixed(e) = self.eps_mode {
            if !e.is_finite() {
                return Err(Error::Config(format!("eps must be finite, got {e}")));
            }
        }
        let prep = prepare(&self.potential())?;
        let floor = 1.5 * prep.freqs.omega0[0];
        if !(self.energy_factor > floor) {
            return Err(Error::Config(format!(
                "energy factor {} must exceed {floor} so the lowest polyad is in the window",
                self.energy_factor
            )));
        }
        Ok(prep)
    }

    fn single_hbar(&self) -> Result<f64> {
        match self.hbar_list[..] {
            [h] => Ok(h),
            _ => Err(Error::Config(format!("expected a single hbar, got {}", self.hbar_list.len()))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRecord {
    pub hbar: f64,
    pub eps: f64,
    pub energy: f64,
    pub count: usize,
    pub linf: f64,
    pub l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// In the order of the `hbar` list.
    pub records: Vec<ScalingRecord>,
    /// Least-squares slope of `log10 linf` against `log10 hbar`; needs three records.
    pub slope: Option<f64>,
}

impl ComparisonReport {
    pub fn from_records(records: Vec<ScalingRecord>) -> Self {
        let slope = if records.len() >= 3 {
            loglog_slope(&records.iter().map(|r| (r.hbar, r.linf)).collect::<Vec<_>>())
        } else {
            None
        };
        Self { records, slope }
    }

    /// Two-point slope between the two smallest `hbar` values.
    pub fn tail_slope(&self) -> Option<f64> {
        let mut pts: Vec<(f64, f64)> = self.records.iter().map(|r| (r.hbar, r.linf)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        loglog_slope(pts.get(..2)?)
    }
}

/// Galerkin against normal form for every `hbar`, in parallel.
pub fn run_error_scaling(cfg: &ExperimentConfig) -> Result<ComparisonReport> {
    let prep = cfg.validate()?;
    if cfg.hbar_list.len() < 3 {
        return Err(Error::Config("error scaling needs at least three hbar values".into()));
    }
    let p = cfg.potential();
    let records = cfg
        .hbar_list
        .par_iter()
        .map(|&hbar| compare_at(&p, &prep, cfg, hbar))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport::from_records(records))
}

fn compare_at(p: &PolyPotential, prep: &PreparedOperator, cfg: &ExperimentConfig, hbar: f64) -> Result<ScalingRecord> {
    let eps = cfg.eps_mode.at(hbar);
    let energy = cfg.energy(hbar);
    let galerkin = galerkin_spectrum_below(p, eps, hbar, energy, cfg.m_override)?;
    let nf = nf_spectrum_below(prep, hbar, eps, energy, POLYAD_ETA)?;
    let d = compare_spectra(&galerkin, &nf, energy)?;
    Ok(ScalingRecord {
        hbar,
        eps,
        energy,
        count: d.count,
        linf: d.linf,
        l2: d.l2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRow {
    pub m: usize,
    pub linf: f64,
}

/// Distance of the Galerkin spectrum below `E` at each `m` to the one at `m_ref`.
pub fn run_truncation_study(cfg: &ExperimentConfig, m_values: &[usize], m_ref: usize) -> Result<Vec<TruncationRow>> {
    cfg.validate()?;
    let hbar = cfg.single_hbar()?;
    if m_values.iter().any(|&m| m >= m_ref) {
        return Err(Error::Config(format!("m_ref = {m_ref} must exceed every m")));
    }
    let p = cfg.potential();
    let eps = cfg.eps_mode.at(hbar);
    let energy = cfg.energy(hbar);
    let reference = galerkin_spectrum_below(&p, eps, hbar, energy, Some(m_ref))?;
    m_values
        .par_iter()
        .map(|&m| {
            let s = galerkin_spectrum_below(&p, eps, hbar, energy, Some(m))?;
            Ok(TruncationRow {
                m,
                linf: compare_spectra(&s, &reference, energy)?.linf,
            })
        })
        .collect()
}

pub fn run_joint_spectrum(cfg: &ExperimentConfig, n_max: usize) -> Result<Vec<JointSpectrumPoint>> {
    let prep = cfg.validate()?;
    let hbar = cfg.single_hbar()?;
    joint_spectrum(&prep, hbar, cfg.eps_mode.at(hbar), n_max)
}

/// Both spectra below `E`, merged in ascending order.
pub fn run_spectrum_overlay(cfg: &ExperimentConfig) -> Result<Vec<(f64, SpectrumSource)>> {
    let prep = cfg.validate()?;
    let hbar = cfg.single_hbar()?;
    let eps = cfg.eps_mode.at(hbar);
    let energy = cfg.energy(hbar);
    let g = galerkin_spectrum_below(&cfg.potential(), eps, hbar, energy, cfg.m_override)?;
    let n = nf_spectrum_below(&prep, hbar, eps, energy, POLYAD_ETA)?;
    let mut out: Vec<_> = g
        .values
        .iter()
        .map(|&v| (v, g.source))
        .chain(n.values.iter().map(|&v| (v, n.source)))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// `(N, j, mu_{eps,N,j})` for `N <= n_max`.
pub fn run_polyads(cfg: &ExperimentConfig, n_max: usize) -> Result<Vec<(usize, usize, f64)>> {
    let prep = cfg.validate()?;
    let hbar = cfg.single_hbar()?;
    let eps = cfg.eps_mode.at(hbar);
    let mut out = Vec::new();
    for n in 0..=n_max {
        let ev = polyad_eigs(&build_polyad_matrix(n, &prep, hbar, eps))?;
        out.extend(ev.into_iter().enumerate().map(|(j, v)| (n, j, v)));
    }
    Ok(out)
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(w)
}

fn write_rows<W: Write>(w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(header)?;
    for r in rows {
        out.write_record(&r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_scaling_csv<W: Write>(w: W, report: &ComparisonReport) -> Result<()> {
    let rows = report.records.iter().map(|r| {
        vec![
            r.hbar.to_string(),
            r.eps.to_string(),
            r.energy.to_string(),
            r.count.to_string(),
            r.linf.to_string(),
            r.l2.to_string(),
            r.hbar.log10().to_string(),
            r.linf.log10().to_string(),
        ]
    });
    write_rows(w, &["hbar", "eps", "energy", "count", "linf", "l2", "log10_hbar", "log10_linf"], rows)
}

pub fn write_truncation_csv<W: Write>(w: W, rows: &[TruncationRow]) -> Result<()> {
    let rows = rows
        .iter()
        .map(|r| vec![r.m.to_string(), r.linf.to_string(), r.linf.log10().to_string()]);
    write_rows(w, &["m", "linf", "log10_linf"], rows)
}

pub fn write_joint_csv<W: Write>(w: W, points: &[JointSpectrumPoint]) -> Result<()> {
    let rows = points.iter().map(|p| vec![p.lambda1.to_string(), p.lambda2.to_string()]);
    write_rows(w, &["lambda1", "lambda2"], rows)
}

pub fn write_overlay_csv<W: Write>(w: W, values: &[(f64, SpectrumSource)]) -> Result<()> {
    let rows = values.iter().map(|(v, s)| vec![v.to_string(), s.to_string()]);
    write_rows(w, &["energy", "source"], rows)
}

pub fn write_polyads_csv<W: Write>(w: W, rows: &[(usize, usize, f64)]) -> Result<()> {
    let rows = rows
        .iter()
        .map(|(n, j, v)| vec![n.to_string(), j.to_string(), v.to_string()]);
    write_rows(w, &["N", "j", "mu"], rows)
}

/// A single ascending column of energies.
pub fn write_spectrum_csv<W: Write>(w: W, values: &[f64]) -> Result<()> {
    write_rows(w, &["energy"], values.iter().map(|v| vec![v.to_string()]))
}
