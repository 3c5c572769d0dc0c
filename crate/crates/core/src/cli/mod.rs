//! Command-line front end. Exit codes: 0 success, 1 usage or input error, 2 verification failure.

pub mod config;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::base_field::{BaseField, FieldFamily};
use crate::classifier::{classify, Classification, CyclicityReason, Outcome};
use crate::error::{Error, Result};
use crate::invariants::{nu, t_f};
use crate::oracle::ff::{render_prime_poly, ConcreteCyclotomic};
use crate::oracle::verify::{verify, CheckStatus, VerificationReport};
use crate::oracle::SubfieldLattice;
use crate::towers::{emit_dot, enumerate_towers};
use config::Config;
use sweep::{family_fields, parse_range, row, write_csv, ERange, Family};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

const DEFAULT_E_MAX: u32 = 10;

/// Largest field degree for which `classify` prints the minimal polynomial with its coefficients
/// computed in a concrete finite field.
const RESOLVE_DEGREE_LIMIT: u64 = 256;

#[derive(Debug, Parser)]
#[command(name = "cyclotower", version, about = "Galois structure of F(ζ_2^e)/F")]
pub struct Cli {
    /// key = value file with defaults (e_max, k_max, output_dir)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Suppress per-item progress lines
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify F(ζ_2^e)/F
    Classify {
        field: String,
        e: u32,
        #[arg(long)]
        json: bool,
    },
    /// List the maximal towers of quadratic steps
    Towers {
        field: String,
        e: u32,
        #[arg(long)]
        json: bool,
        /// Write the tower lattice as a DOT graph
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Compare the classifier with the oracle
    Verify {
        field: Option<String>,
        e: Option<u32>,
        /// Verify a family instead: FAMILY RANGE, e.g. `primes 3..97`
        #[arg(long, num_args = 2, value_names = ["FAMILY", "RANGE"], allow_hyphen_values = true)]
        sweep: Option<Vec<String>>,
        #[arg(long)]
        e_max: Option<u32>,
        #[arg(long)]
        k_max: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate a family of fields
    Sweep {
        family: String,
        #[arg(allow_hyphen_values = true)]
        range: String,
        /// A single e or a range a..b
        #[arg(long)]
        e: Option<String>,
        /// Visit every e with ν < e <= E_MAX
        #[arg(long)]
        e_max: Option<u32>,
        #[arg(long)]
        k_max: Option<u32>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print ν⁺, ν and property C₂
    Invariants {
        field: String,
        #[arg(long)]
        json: bool,
    },
}

/// Runs the tool with explicit argument list and output streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("i/o: {e}"))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(format!("json: {e}")))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err)?;
    }
    std::fs::write(path, contents).map_err(io_err)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    match &cli.command {
        Command::Classify { field, e, json } => {
            let field: BaseField = field.parse()?;
            let outcome = classify(&field, *e)?;
            if *json {
                writeln!(out, "{}", to_json(&outcome)?).map_err(io_err)?;
            } else {
                print_outcome(&field, &outcome, out)?;
            }
            Ok(EXIT_OK)
        }
        Command::Towers { field, e, json, dot } => {
            let field: BaseField = field.parse()?;
            let towers = enumerate_towers(&field, *e)?;
            if *json {
                writeln!(out, "{}", to_json(&towers)?).map_err(io_err)?;
            } else {
                for t in &towers {
                    writeln!(out, "{t}").map_err(io_err)?;
                }
            }
            if let Some(path) = dot {
                let aliases = SubfieldLattice::build(&field, *e)?.aliases();
                let path = cfg.output_path(path);
                write_file(&path, emit_dot(&field, *e, &towers, &aliases).as_bytes())?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { field, e, sweep, e_max, k_max, json } => {
            let reports = match (field, e, sweep) {
                (Some(field), Some(e), None) => vec![verify(&field.parse()?, *e)?],
                (None, None, Some(spec)) => {
                    let family: Family = spec[0].parse()?;
                    let range = parse_range(&spec[1])?;
                    let e_max = e_max.or(cfg.e_max).unwrap_or(DEFAULT_E_MAX);
                    let k_max = k_max.or(cfg.k_max).unwrap_or(1);
                    let mut reports = Vec::new();
                    for f in family_fields(family, range, k_max) {
                        for e in (ERange::AboveNu { max: e_max }).for_field(&f) {
                            let r = verify(&f, e)?;
                            if !cli.quiet && !*json {
                                writeln!(err, "{} e={}: {}", f, e, if r.all_passed() { "ok" } else { "FAIL" })
                                    .map_err(io_err)?;
                            }
                            reports.push(r);
                        }
                    }
                    reports
                }
                _ => return Err(Error::InvalidArgument("verify takes either FIELD E or --sweep FAMILY RANGE".into())),
            };
            let passed = reports.iter().all(VerificationReport::all_passed);
            if *json {
                writeln!(out, "{}", to_json(&reports)?).map_err(io_err)?;
            } else {
                for r in &reports {
                    print_report(r, cli.quiet || reports.len() > 1, out)?;
                }
                let failed = reports.iter().filter(|r| !r.all_passed()).count();
                writeln!(out, "{} instance(s) verified, {} failed", reports.len(), failed).map_err(io_err)?;
            }
            Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Sweep { family, range, e, e_max, k_max, csv, json } => {
            let family: Family = family.parse()?;
            let range = parse_range(range)?;
            let e_range = match (e, e_max) {
                (Some(e), None) => {
                    let r = parse_range(e)?;
                    let (lo, hi) = (*r.start(), *r.end());
                    if lo < 1 || hi > i64::from(crate::classifier::MAX_E) {
                        return Err(Error::InvalidArgument(format!("e must lie in 1..={}", crate::classifier::MAX_E)));
                    }
                    ERange::Fixed(lo as u32..=hi as u32)
                }
                (None, max) => ERange::AboveNu { max: max.or(cfg.e_max).unwrap_or(DEFAULT_E_MAX) },
                (Some(_), Some(_)) => return Err(Error::InvalidArgument("give --e or --e-max, not both".into())),
            };
            let k_max = k_max.or(cfg.k_max).unwrap_or(1);
            let mut rows = Vec::new();
            for f in family_fields(family, range, k_max) {
                for e in e_range.for_field(&f) {
                    rows.push(row(&f, e)?);
                }
            }
            if *json {
                writeln!(out, "{}", to_json(&rows)?).map_err(io_err)?;
            } else if let Some(path) = csv {
                let mut buf = Vec::new();
                write_csv(&rows, &mut buf)?;
                write_file(&cfg.output_path(path), &buf)?;
                if !cli.quiet {
                    writeln!(err, "{} row(s) written", rows.len()).map_err(io_err)?;
                }
            } else {
                write_csv(&rows, &mut *out)?;
            }
            Ok(if rows.iter().all(|r| r.verified) { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Invariants { field, json } => {
            let field: BaseField = field.parse()?;
            let inv = nu(&field);
            if *json {
                writeln!(out, "{}", to_json(&inv)?).map_err(io_err)?;
            } else {
                let w = &mut *out;
                let yes = |b: bool| if b { "yes" } else { "no" };
                writeln!(w, "field           {field} ({})", field.pretty()).map_err(io_err)?;
                writeln!(w, "nu+             {}", inv.nu_plus).map_err(io_err)?;
                writeln!(w, "nu              {}", inv.nu).map_err(io_err)?;
                let c2 = match inv.c2_witness {
                    Some(w) => format!("yes (e' = {w})"),
                    None => "no".into(),
                };
                writeln!(w, "property C2     {c2}").map_err(io_err)?;
                writeln!(w, "zeta_4 in F     {}", yes(inv.zeta4_in_field)).map_err(io_err)?;
                writeln!(w, "tau+ level      {}", inv.tau_plus_level).map_err(io_err)?;
                let t: Vec<String> = (1..=inv.nu + 2).map(|k| format!("{}:{}", 1u64 << k, t_f(&field, k))).collect();
                writeln!(w, "t_F(2^k)        {}", t.join(" ")).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn reason_text(r: CyclicityReason) -> &'static str {
    match r {
        CyclicityReason::Zeta4InField => "zeta_4 in F",
        CyclicityReason::TauMinusNuInField => "tau-_{2^nu} in F",
        CyclicityReason::Neither => "neither zeta_4 nor tau-_{2^nu} in F",
    }
}

fn print_outcome(field: &BaseField, outcome: &Outcome, out: &mut dyn Write) -> Result<()> {
    let inv = outcome.invariants();
    let mut lines = vec![
        format!("field        {field} ({})", field.pretty()),
        format!(
            "invariants   nu+ = {}, nu = {}, C2 = {}, zeta_4 in F = {}",
            inv.nu_plus,
            inv.nu,
            if inv.has_c2 { "yes" } else { "no" },
            if inv.zeta4_in_field { "yes" } else { "no" }
        ),
    ];
    match outcome {
        Outcome::SmallDegree(s) => {
            lines.push(format!("e            {}", s.e));
            lines.push(format!("degree       {} (e <= nu, outside the dichotomy)", s.degree));
        }
        Outcome::Classified(c) => {
            lines.push(format!("e            {}", c.e));
            lines.push(format!("cyclic       {} ({})", if c.cyclic { "yes" } else { "no" }, reason_text(c.reason)));
            lines.push(format!("degree       {}", c.degree));
            let gens: Vec<String> = c.galois.generators.iter().map(|g| format!("{} = {}", g.name(), g)).collect();
            lines.push(format!("galois       <{}> in U_{}", gens.join(", "), 1u64 << c.e));
            let cd: Vec<String> =
                c.codegree2.iter().map(|x| format!("{} (fixed by {})", x.label, x.stabilizer)).collect();
            lines.push(format!("codegree 2   {}", cd.join(", ")));
            lines.push(format!("min poly     {}", c.min_poly));
            if c.min_poly.simplified() != c.min_poly {
                lines.push(format!("             = {}", c.min_poly.simplified()));
            }
            if let Some(text) = resolved_min_poly(c) {
                lines.push(format!("             = {text}"));
            }
            lines.push(format!("towers       {}", c.tower_count));
        }
    }
    for l in lines {
        writeln!(out, "{l}").map_err(io_err)?;
    }
    Ok(())
}

/// Over a prime field, the minimal polynomial with its constants evaluated.
fn resolved_min_poly(c: &Classification) -> Option<String> {
    let FieldFamily::FiniteField { p, k: 1 } = c.field.family() else {
        return None;
    };
    if c.degree > RESOLVE_DEGREE_LIMIT {
        return None;
    }
    let concrete = ConcreteCyclotomic::new(p, 1, c.e).ok()?;
    let coeffs = concrete.resolve_prime(&c.min_poly)?;
    Some(format!("{} over F_{p}", render_prime_poly(&coeffs, p, true)))
}

fn print_report(r: &VerificationReport, brief: bool, out: &mut dyn Write) -> Result<()> {
    if brief && r.all_passed() {
        return Ok(());
    }
    let verdict = if r.all_passed() { "ok" } else { "FAIL" };
    writeln!(out, "{} e={}: {}", r.field, r.e, verdict).map_err(io_err)?;
    for c in &r.checks {
        if brief && c.status != CheckStatus::Fail {
            continue;
        }
        let tag = match c.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "skip",
        };
        writeln!(out, "  [{tag}] {:<40} classifier: {:<24} oracle: {}", c.name, c.classifier, c.oracle)
            .map_err(io_err)?;
    }
    Ok(())
}
