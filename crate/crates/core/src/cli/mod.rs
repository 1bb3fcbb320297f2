//! Command-line front end: job files, verification suites and reports.

mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::abgroup::GroupShape;
use crate::error::{Error, Result};
use crate::extension::galois_group;
use crate::lcft::unit_gmodule;
use crate::ramify::{different_valuation, lower_filtration_of};
use crate::tatecoh::{tate_cohomology, GModule};

pub use config::{Format, JobSpec, Overrides, Suite, DEFAULT_PRECISION, PRECISION_ENV};
pub use report::{
    exit_code, CheckReport, NamedGroup, Provenance, Report, Summary, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS,
    EXIT_USAGE,
};

#[derive(Parser, Debug)]
#[command(
    name = "lcft",
    version,
    about = "Exact verification of local class field theory on finite truncations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Job file (`key = value` lines).
    pub config: PathBuf,
    /// Output format; overrides the job file.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
    /// Significant digits of the base field; overrides the job file.
    #[arg(long, env = PRECISION_ENV)]
    pub precision: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run verification suites and report a verdict per check.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_suite)]
        suite: Option<Suite>,
        /// Largest unramified enlargement degree.
        #[arg(long)]
        rmax: Option<usize>,
        /// Seed for additional random samples.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tate cohomology of Z, U_L/U_L^n and L^×/U_L^n in degrees -W..W.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degree_window: i64,
    },
    /// Ramification data of the extension.
    Info {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse()
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse()
}

/// Run every selected suite.
pub fn verify(job: &JobSpec) -> Result<Report> {
    let ext = job.build()?;
    let mut r = suites::Runner::new(job, &ext);
    r.all();
    let summary = Summary::of(&r.checks);
    Ok(Report {
        job: job.clone(),
        e: ext.e,
        f: ext.f,
        galois_order: r.galois_order(),
        checks: r.checks,
        skipped: r.skipped,
        summary,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRow {
    pub degree: i64,
    pub integers: GroupShape,
    pub units: GroupShape,
    pub multiplicative: GroupShape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub job: JobSpec,
    pub level: usize,
    pub window: i64,
    pub rows: Vec<CohomologyRow>,
}

/// `Ĥ^i(G, M)` for `|i| ≤ window` and `M ∈ {Z, U_L/U_L^n, L^×/U_L^n}`;
/// the level `n` defaults to `e|G| + 1`.
pub fn cohomology(job: &JobSpec, window: i64) -> Result<CohomologyReport> {
    if window < 0 {
        return Err(Error::Validation("degree window must be non-negative".into()));
    }
    let ext = job.build()?;
    let g = galois_group(&ext)?;
    let level = job.level.unwrap_or(ext.e * g.order() + 1).min(ext.top.precision());
    let m = unit_gmodule(&ext, level, 1)?;
    let z = GModule::trivial(g.finite_group(), &[0]);
    let rows = (-window..=window)
        .map(|i| {
            Ok(CohomologyRow {
                degree: i,
                integers: tate_cohomology(&z, i)?.shape(),
                units: tate_cohomology(&m.units, i)?.shape(),
                multiplicative: tate_cohomology(&m.multiplicative, i)?.shape(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologyReport {
        job: job.clone(),
        level,
        window,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfoReport {
    pub e: usize,
    pub f: usize,
    pub degree: usize,
    pub galois_order: usize,
    pub abelian: bool,
    /// `i_G(σ)` per group element, `∞` for the identity.
    pub i_g: Vec<String>,
    pub different: i64,
    pub lower_breaks: Vec<i64>,
    pub upper_breaks: Vec<String>,
    /// Vertices `(u, φ(u))` of the Herbrand function.
    pub herbrand_breakpoints: Vec<(String, String)>,
}

pub fn info(job: &JobSpec) -> Result<InfoReport> {
    let ext = job.build()?;
    let g = galois_group(&ext)?;
    let rd = lower_filtration_of(&ext, g.clone())?;
    Ok(InfoReport {
        e: ext.e,
        f: ext.f,
        degree: ext.degree(),
        galois_order: g.order(),
        abelian: g.is_abelian(),
        i_g: rd.i_values.iter().map(|v| v.to_string()).collect(),
        different: different_valuation(&ext)?,
        lower_breaks: rd.lower_breaks(),
        upper_breaks: rd.upper_breaks().iter().map(|x| x.to_string()).collect(),
        herbrand_breakpoints: rd
            .herbrand_breakpoints()
            .iter()
            .map(|(u, v)| (u.to_string(), v.to_string()))
            .collect(),
    })
}

impl CohomologyReport {
    fn to_text(&self) -> String {
        let mut s = format!(
            "level n = {}\n{:>4}  {:<16} {:<24} {}\n",
            self.level, "i", "Z", "U/U^n", "L^×/U^n"
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{:>4}  {:<16} {:<24} {}\n",
                r.degree,
                r.integers.to_string(),
                r.units.to_string(),
                r.multiplicative
            ));
        }
        s
    }
}

impl InfoReport {
    fn to_text(&self) -> String {
        let bp: Vec<String> = self
            .herbrand_breakpoints
            .iter()
            .map(|(u, v)| format!("({u}, {v})"))
            .collect();
        format!(
            "e = {}, f = {}, [L:K] = {}, |G| = {}, abelian: {}\ni_G: {}\nv_L(different) = {}\nlower breaks: {:?}\nupper breaks: [{}]\nHerbrand breakpoints: {}\n",
            self.e,
            self.f,
            self.degree,
            self.galois_order,
            self.abelian,
            self.i_g.join(" "),
            self.different,
            self.lower_breaks,
            self.upper_breaks.join(", "),
            bp.join(" ")
        )
    }
}

fn load(common: &Common, mut ov: Overrides) -> Result<JobSpec> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", common.config.display())))?;
    ov.precision = common.precision;
    ov.format = common.format;
    JobSpec::parse(&text, &ov)
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) {
    use std::io::Write;
    let out = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Text => text(value),
    };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

/// Execute a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let out = match cli.command {
        Command::Verify {
            common,
            suite,
            rmax,
            seed,
        } => load(
            &common,
            Overrides {
                suite,
                r_max: rmax,
                seed,
                ..Default::default()
            },
        )
        .and_then(|job| {
            let r = verify(&job)?;
            emit(job.format, &r, Report::to_text);
            Ok(exit_code(r.summary.verdict))
        }),
        Command::Cohomology { common, degree_window } => load(&common, Overrides::default()).and_then(|job| {
            let r = cohomology(&job, degree_window)?;
            emit(job.format, &r, CohomologyReport::to_text);
            Ok(EXIT_PASS)
        }),
        Command::Info { common } => load(&common, Overrides::default()).and_then(|job| {
            let r = info(&job)?;
            emit(job.format, &r, InfoReport::to_text);
            Ok(EXIT_PASS)
        }),
    };
    match out {
        Ok(code) => code,
        Err(e @ Error::Inconclusive(_)) => {
            eprintln!("lcft: {e}");
            EXIT_INCONCLUSIVE
        }
        Err(e) => {
            eprintln!("lcft: {e}");
            EXIT_USAGE
        }
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
