use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gerbekit::bf::{merge_reports, run_check, RunConfig, CHECK_NAMES};
use gerbekit::bundle::BundleData;
use gerbekit::gerbe::GerbeData;
use gerbekit::io::{read_complex, resolve_complex, write_complex, FieldFile};
use gerbekit::liegroup::{rng_from_seed, Group};
use gerbekit::simplicial::SimplicialComplex;

#[derive(Parser)]
#[command(name = "gerbekit", version, about = "Discrete bundle and gerbe identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a simplicial complex file.
    Gen {
        /// Builtin complex: delta0..delta5, boundary1..boundary5.
        #[arg(long, conflicts_with = "file")]
        builtin: Option<String>,
        /// Existing complex file to validate and rewrite.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Alias for --builtin that also accepts a file path.
        #[arg(long, conflicts_with_all = ["builtin", "file"])]
        complex: Option<String>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random field file (bundle plus gerbe sections).
    Seed {
        #[arg(long, default_value = "su2")]
        group: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "delta4")]
        complex: String,
        #[arg(long, value_enum, default_value_t = SeedKind::Induced)]
        kind: SeedKind,
        /// Edge elements drawn as exp of algebra noise of this size; Haar when omitted.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named check, or `all`.
    Check {
        name: String,
        #[arg(long, default_value = "su2")]
        group: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of seeds, starting at --seed.
        #[arg(long)]
        seeds: Option<usize>,
        /// Comma-separated descending ε grid.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        /// Comma-separated descending δ grid.
        #[arg(long, value_delimiter = ',')]
        delta: Option<Vec<f64>>,
        /// Tolerance for exact identities.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0.2)]
        slope_margin: f64,
        /// Builtin name or complex file.
        #[arg(long)]
        complex: Option<String>,
        /// Field file to check instead of generated data.
        #[arg(long)]
        fields: Option<PathBuf>,
        /// Directory for <name>.csv and <name>.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge every per-check CSV in a directory into report.csv.
    Report {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedKind {
    /// Gerbe induced by a random bundle: every exact identity holds.
    Induced,
    /// Bundle only.
    Bundle,
    /// Trivial fields.
    Trivial,
}

fn parse_group(s: &str) -> Result<Group> {
    Ok(Group::parse(s)?)
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(builtin: Option<String>, file: Option<PathBuf>, complex: Option<String>, out: Option<PathBuf>) -> Result<()> {
    let c: SimplicialComplex = match (builtin, file, complex) {
        (Some(b), _, _) => SimplicialComplex::builtin(&b)?,
        (_, Some(f), _) => read_complex(&f)?,
        (_, _, Some(name)) => resolve_complex(&name)?,
        _ => bail!("gen needs --builtin, --file or --complex"),
    };
    match out {
        Some(p) => write_complex(&c, &p)?,
        None => println!("{}", serde_json::to_string(&c.to_file())?),
    }
    Ok(())
}

fn seed(group: &str, seed: u64, complex: &str, kind: SeedKind, eps: Option<f64>, out: Option<PathBuf>) -> Result<()> {
    let group = parse_group(group)?;
    let complex = resolve_complex(complex)?;
    let mut rng = rng_from_seed(seed);
    let bundle = match (kind, eps) {
        (SeedKind::Trivial, _) => BundleData::trivial(&complex, group),
        (_, Some(e)) => BundleData::random_near_identity(&complex, group, e, &mut rng),
        (_, None) => BundleData::random(&complex, group, &mut rng),
    };
    let file = match kind {
        SeedKind::Bundle => FieldFile::from_bundle(&bundle, &complex)?,
        SeedKind::Induced | SeedKind::Trivial => {
            FieldFile::from_bundle(&bundle, &complex)?.with_gerbe(&GerbeData::bundle_induced(&bundle, &complex)?)?
        }
    };
    let text = serde_json::to_string_pretty(&file)? + "\n";
    write_or_print(&text, out.as_deref())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<bool> {
    match Cli::parse().command {
        Command::Gen { builtin, file, complex, out } => gen(builtin, file, complex, out).map(|_| true),
        Command::Seed { group, seed: s, complex, kind, eps, out } => seed(&group, s, &complex, kind, eps, out).map(|_| true),
        Command::Check { name, group, seed, seeds, eps, delta, tol, slope_margin, complex, fields, out } => {
            if name != "all" && !CHECK_NAMES.contains(&name.as_str()) {
                bail!("unknown check '{name}'; expected one of {} or all", CHECK_NAMES.join(", "));
            }
            let fields = fields
                .map(|p| FieldFile::read(&p).with_context(|| format!("reading field file {}", p.display())))
                .transpose()?;
            let cfg = RunConfig {
                group: parse_group(&group)?,
                seed,
                seeds,
                eps,
                delta,
                tol_exact: tol,
                slope_margin,
                complex,
                fields,
            };
            let report = run_check(&name, &cfg)?;
            for line in report.summary_lines() {
                println!("{line}");
            }
            for note in &report.notes {
                println!("note: {note}");
            }
            if let Some(dir) = out {
                report.write(&dir)?;
            }
            Ok(report.pass())
        }
        Command::Report { out } => {
            print!("{}", merge_reports(&out)?);
            Ok(true)
        }
    }
}
