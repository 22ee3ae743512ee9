//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.

use std::ffi::OsString;
use std::io::{self, Write};
use std::ops::RangeInclusive;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bijection::{phi, phi_inverse};
use crate::budget::Budget;
use crate::cube::{CubeParams, LowerHalfSpec, Point, Variant};
use crate::error::Error;
use crate::families::{enumerate_intersecting_antichains, CompatGraph};
use crate::verify::{Grid, Harness, Lemma, Mutant, VariantSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "kcube", version, about = "Intersecting antichains in k-valued cubes")]
struct Cli {
    /// Worker threads for counting and verification (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Work limit for exhaustive routines; overrides KCUBE_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct CubeArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n: u32,
    /// standard, slice:<i> or shift:<z>.
    #[arg(long, default_value = "standard", value_parser = parse_variant)]
    variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    Cube,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Points,
    Ia,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variants {
    All,
    Standard,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply the map to a lower-half point, or its inverse to a point of E^(n-1).
    Map {
        #[command(flatten)]
        cube: CubeArgs,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Treat --point as a point of E^(n-1) and print its preimage.
        #[arg(long)]
        inverse: bool,
    },
    /// Stream the points or intersecting antichains of a ground set.
    Enumerate {
        #[command(flatten)]
        cube: CubeArgs,
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long, value_enum)]
        what: What,
        /// Print only the number of items.
        #[arg(long)]
        count_only: bool,
    },
    /// Find a maximum intersecting antichain of a ground set.
    MaxIa {
        #[command(flatten)]
        cube: CubeArgs,
        #[arg(long, value_enum)]
        space: Space,
    },
    /// Run the exhaustive checks over a parameter grid.
    Verify {
        /// Inclusive range such as 2-5, or a single value.
        #[arg(long, default_value = "2-5", value_parser = parse_range)]
        k_range: RangeInclusive<u32>,
        #[arg(long, default_value = "2-4", value_parser = parse_range)]
        n_range: RangeInclusive<u32>,
        #[arg(long, value_enum, default_value = "all")]
        variants: Variants,
        /// Comma-separated subset of checks (default: all).
        #[arg(long, value_delimiter = ',', value_parser = parse_lemma)]
        lemmas: Vec<Lemma>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Include wall-clock time per report (output is then not reproducible).
        #[arg(long)]
        timings: bool,
        /// Run against a deliberately broken model.
        #[arg(long, hide = true, value_parser = parse_mutant)]
        mutant: Option<Mutant>,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_lemma(s: &str) -> Result<Lemma, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mutant(s: &str) -> Result<Mutant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `a-b`, `a..=b` or `a`, all inclusive.
fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("{x:?}: {e}"));
    if let Some((a, b)) = s.split_once("..=") {
        return Ok(num(a)?..=num(b)?);
    }
    if let Some((a, b)) = s.split_once('-') {
        return Ok(num(a)?..=num(b)?);
    }
    let v = num(s)?;
    Ok(v..=v)
}

fn exit_code(err: &Error) -> i32 {
    if err.is_domain() {
        EXIT_DOMAIN
    } else if err.is_budget() {
        EXIT_BUDGET
    } else {
        EXIT_USAGE
    }
}

enum Failure {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let budget = match cli.budget {
        Some(limit) => Budget::new(limit),
        None => match Budget::from_env() {
            Ok(b) => b,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        },
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(cli.command, &budget, out));
    let _ = out.flush();
    match result {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_IO
        }
    }
}

fn spec_of(args: &CubeArgs) -> Result<LowerHalfSpec, Error> {
    LowerHalfSpec::new(CubeParams::new(args.k, args.n)?, args.variant)
}

fn ground(spec: &LowerHalfSpec, space: Space, budget: &Budget) -> Result<Vec<Point>, Error> {
    Ok(match space {
        Space::Cube => spec.params().points(budget)?.collect(),
        Space::Lower => spec.points(budget)?.collect(),
    })
}

fn dispatch(command: Command, budget: &Budget, out: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    match command {
        Command::Map { cube, point, inverse } => {
            let spec = spec_of(&cube)?;
            let image = if inverse {
                let source = spec.params().reduced()?;
                phi_inverse(&source.parse_point(&point)?, &spec)?
            } else {
                phi(&spec.params().parse_point(&point)?, &spec)?
            };
            writeln!(out, "{image}")?;
        }
        Command::Enumerate { cube, space, what, count_only } => {
            let spec = spec_of(&cube)?;
            match what {
                What::Points => {
                    let points = ground(&spec, space, budget)?;
                    if count_only {
                        writeln!(out, "{}", points.len())?;
                    } else {
                        for p in points {
                            writeln!(out, "{p}")?;
                        }
                    }
                }
                What::Ia if count_only => {
                    let graph = CompatGraph::build(ground(&spec, space, budget)?, budget)?;
                    writeln!(out, "{}", graph.count_cliques())?;
                }
                What::Ia => {
                    for family in enumerate_intersecting_antichains(ground(&spec, space, budget)?, budget)? {
                        writeln!(out, "{}", family?)?;
                    }
                }
            }
        }
        Command::MaxIa { cube, space } => {
            let spec = spec_of(&cube)?;
            let graph = CompatGraph::build(ground(&spec, space, budget)?, budget)?;
            let family = graph.family(&graph.max_clique());
            writeln!(out, "size {}", family.len())?;
            writeln!(out, "{family}")?;
        }
        Command::Verify { k_range, n_range, variants, lemmas, format, timings, mutant } => {
            let grid = Grid {
                ks: k_range,
                ns: n_range,
                variants: match variants {
                    Variants::All => VariantSet::All,
                    Variants::Standard => VariantSet::StandardOnly,
                },
                lemmas: if lemmas.is_empty() { Lemma::ALL.to_vec() } else { lemmas },
            };
            let harness = Harness::new(*budget).with_mutant(mutant);
            let results = harness.verify_all(&grid)?;
            return write_reports(results, format, timings, out);
        }
    }
    Ok(EXIT_OK)
}

fn write_reports(
    results: Vec<crate::Result<crate::verify::VerifyReport>>,
    format: Format,
    timings: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (mut passed, mut failed, mut vacuous) = (0usize, 0usize, 0usize);
    let mut first_error = None;
    for result in results {
        let mut report = match result {
            Ok(r) => r,
            Err(e) => {
                first_error.get_or_insert(e);
                continue;
            }
        };
        if !timings {
            report.wall_time_us = None;
        }
        if report.passed {
            passed += 1;
            vacuous += usize::from(report.vacuous);
        } else {
            failed += 1;
        }
        match format {
            Format::Json => writeln!(out, "{}", report.to_json())?,
            Format::Table => {
                let status = match (report.passed, report.vacuous) {
                    (false, _) => "FAIL",
                    (true, true) => "VACUOUS",
                    (true, false) => "PASS",
                };
                write!(
                    out,
                    "{status:<8}{:<18}k={} n={} {:<10}checked={} failures={}",
                    report.lemma.name(),
                    report.k,
                    report.n,
                    report.variant_label(),
                    report.checked,
                    report.failures
                )?;
                for (key, value) in &report.details {
                    write!(out, " {key}={value}")?;
                }
                if let Some(us) = report.wall_time_us {
                    write!(out, " time_us={us}")?;
                }
                writeln!(out)?;
                for w in &report.witnesses {
                    writeln!(out, "        witness: {}", w.join(" | "))?;
                }
            }
        }
    }
    if format == Format::Table {
        writeln!(out, "summary: {passed} passed ({vacuous} vacuous), {failed} failed")?;
    }
    if let Some(e) = first_error {
        return Err(e.into());
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}
