use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nearfermi_core::experiment::{self, EpsMode, ExperimentConfig};
use nearfermi_core::formal::{bgnf_iterate, resonant_coupling, write_series};
use nearfermi_core::hermite::galerkin_spectrum_below;
use nearfermi_core::polyad::nf_spectrum_below;
use nearfermi_core::prep::{check_unique_min, prepare, PolyPotential};
use nearfermi_core::spectrum::SpectrumSource;
use nearfermi_core::Error;

#[derive(Parser)]
#[command(name = "nearfermi", version, about = "Spectra of 2D Schrodinger operators near a 1:2 resonance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Galerkin and normal-form spectra below E at a single hbar.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Galerkin basis cutoff (default from the truncation rule).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Galerkin spectrum at several cutoffs against a reference cutoff.
    TruncationStudy {
        #[command(flatten)]
        common: Common,
        /// Cutoffs to test, comma separated (default 10..m-ref).
        #[arg(long, value_delimiter = ',')]
        m: Vec<usize>,
        #[arg(long, default_value_t = 35)]
        m_ref: usize,
    },
    /// Galerkin vs normal-form error over a list of hbar values.
    ErrorScaling {
        #[command(flatten)]
        common: Common,
    },
    /// Joint spectrum of the harmonic part and the order-3 normal form.
    JointSpectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 9)]
        n_max: usize,
    },
    /// Eigenvalues of the polyad matrices.
    Polyads {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 9)]
        n_max: usize,
    },
    /// Prints the normal form of the prepared operator.
    NormalForm {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// Sufficient condition for a unique minimum of the model family.
    CheckMin {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    c: f64,
    #[arg(long, conflicts_with = "eps_sqrt_hbar", allow_hyphen_values = true)]
    eps: Option<f64>,
    /// Use eps = sqrt(hbar).
    #[arg(long)]
    eps_sqrt_hbar: bool,
    #[arg(long, conflicts_with = "hbar_list")]
    hbar: Option<f64>,
    /// Comma separated, descending.
    #[arg(long, value_delimiter = ',')]
    hbar_list: Vec<f64>,
    /// E = energy_factor * hbar.
    #[arg(long, default_value_t = 10.0)]
    energy_factor: f64,
    /// Polynomial potential file replacing the (gamma, c) family.
    #[arg(long)]
    potential_file: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl Common {
    fn config(&self, default_hbar: &[f64]) -> Result<ExperimentConfig> {
        let eps_mode = if self.eps_sqrt_hbar {
            EpsMode::SqrtHbar
        } else {
            EpsMode::Fixed(self.eps.unwrap_or(0.0))
        };
        let hbar_list = match (self.hbar, self.hbar_list.is_empty()) {
            (Some(h), _) => vec![h],
            (None, false) => self.hbar_list.clone(),
            (None, true) => default_hbar.to_vec(),
        };
        let mut cfg = ExperimentConfig::new(self.gamma, self.c, eps_mode, hbar_list);
        cfg.energy_factor = self.energy_factor;
        cfg.output_dir = self.out.clone();
        if let Some(path) = &self.potential_file {
            let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let p: PolyPotential = text.parse().with_context(|| format!("reading {}", path.display()))?;
            cfg.potential = Some(p);
        }
        Ok(cfg)
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

const SINGLE_HBAR: [f64; 1] = [0.01];
const SCALING_HBAR: [f64; 4] = [0.02, 0.01, 0.005, 0.0025];

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum { common, m } => {
            let mut cfg = common.config(&SINGLE_HBAR)?;
            cfg.m_override = m;
            let prep = cfg.validate()?;
            let [hbar] = cfg.hbar_list[..] else {
                bail!(Error::Config("spectrum takes a single hbar".into()));
            };
            let eps = cfg.eps_mode.at(hbar);
            let energy = cfg.energy(hbar);
            let g = galerkin_spectrum_below(&cfg.potential(), eps, hbar, energy, m)?;
            let n = nf_spectrum_below(&prep, hbar, eps, energy, experiment::POLYAD_ETA)?;
            experiment::write_spectrum_csv(create(&cfg.output_dir, "galerkin_spectrum.csv")?, &g.values)?;
            experiment::write_spectrum_csv(create(&cfg.output_dir, "nf_spectrum.csv")?, &n.values)?;
            let mut merged: Vec<(f64, SpectrumSource)> = g
                .values
                .iter()
                .map(|&v| (v, g.source))
                .chain(n.values.iter().map(|&v| (v, n.source)))
                .collect();
            merged.sort_by(|a, b| a.0.total_cmp(&b.0));
            experiment::write_overlay_csv(create(&cfg.output_dir, "spectrum_overlay.csv")?, &merged)?;
            println!("galerkin: {} values, normal form: {} values below {energy}", g.len(), n.len());
        }
        Command::TruncationStudy { common, m, m_ref } => {
            let cfg = common.config(&SINGLE_HBAR)?;
            let m_values = if m.is_empty() { (10..m_ref).collect() } else { m };
            let rows = experiment::run_truncation_study(&cfg, &m_values, m_ref)?;
            experiment::write_truncation_csv(create(&cfg.output_dir, "truncation.csv")?, &rows)?;
            for r in &rows {
                println!("m = {:3}  linf = {:e}", r.m, r.linf);
            }
        }
        Command::ErrorScaling { common } => {
            let cfg = common.config(&SCALING_HBAR)?;
            let report = experiment::run_error_scaling(&cfg)?;
            experiment::write_scaling_csv(create(&cfg.output_dir, "error_scaling.csv")?, &report)?;
            for r in &report.records {
                println!("hbar = {}  count = {}  linf = {:e}  l2 = {:e}", r.hbar, r.count, r.linf, r.l2);
            }
            if let Some(s) = report.slope {
                println!("fitted slope = {s:.3}");
            }
            if let Some(s) = report.tail_slope() {
                println!("slope over the two smallest hbar = {s:.3}");
            }
        }
        Command::JointSpectrum { common, n_max } => {
            let cfg = common.config(&[0.001])?;
            let pts = experiment::run_joint_spectrum(&cfg, n_max)?;
            experiment::write_joint_csv(create(&cfg.output_dir, "joint_spectrum.csv")?, &pts)?;
            println!("{} points", pts.len());
        }
        Command::Polyads { common, n_max } => {
            let cfg = common.config(&SINGLE_HBAR)?;
            let rows = experiment::run_polyads(&cfg, n_max)?;
            experiment::write_polyads_csv(create(&cfg.output_dir, "polyads.csv")?, &rows)?;
            println!("{} eigenvalues", rows.len());
        }
        Command::NormalForm { common, order } => {
            let cfg = common.config(&SINGLE_HBAR)?;
            let prep = prepare(&cfg.potential())?;
            let nf = bgnf_iterate(&prep.h20(), &prep.perturbation(), prep.freqs.omega0, order)?;
            let (mu, nu) = resonant_coupling(&nf.k);
            println!("# omega0 = {:?}, omega1 = {:?}", prep.freqs.omega0, prep.freqs.omega1);
            println!("# mu = {mu}, nu = {nu}");
            print!("{}", write_series(&nf.k));
        }
        Command::CheckMin { common } => {
            let eps = common.eps.unwrap_or(0.0);
            let cert = check_unique_min(common.gamma, common.c, eps)?;
            println!("kappa = {}", cert.kappa);
            println!("x1 coefficient = {}", cert.x1_coefficient);
            if let Some(d) = cert.sos_defect {
                println!("sum-of-squares defect = {d:e}");
            }
            println!("unique minimum certified: {}", cert.holds);
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_) | Error::Parse { .. } | Error::Precondition(_) | Error::Output(_)) => 2,
        Some(_) => 3,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
