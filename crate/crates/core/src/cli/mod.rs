//! Command-line front end.
//!
//! Exit codes: 0 stable (or agreement), 1 unstable (or disagreement),
//! 2 inconclusive or over budget, 3 input error.

mod report;
mod schema;

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::checker::{
    family_stable, family_sweep_limit, monte_carlo_oracle, CheckerConfig, Diagnostics,
    Inconclusive, Status, Verdict,
};
use crate::critical_set::{CriticalSets, SetKind};
use crate::determinant::check_degree_invariant;
use crate::error::Error;
use crate::family::{FamilyKind, MatrixFamily, CORNER_COEFF_CAP};
use crate::region::Region;

pub use report::{BatchEntry, BatchReport, CompareReport, OracleReport, Report, Tally, MARGINAL_FACTOR};
pub use schema::{CellSpec, FamilyFile};

pub const EXIT_STABLE: i32 = 0;
pub const EXIT_UNSTABLE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Default number of parameter assignments traced by `valueset`.
const VALUESET_SAMPLES: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "polystab", version, about = "Robust D-stability of polynomial matrix families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide robust stability through the critical subset.
    Check {
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Search for an unstable member by sampling.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Run check and oracle and report whether they agree.
    Compare {
        file: Option<PathBuf>,
        /// Compare every `*.json` family in this directory.
        #[arg(long)]
        batch: Option<PathBuf>,
        #[command(flatten)]
        opts: Options,
    },
    /// Stream the critical families as JSON lines, then their count.
    Enumerate {
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Write determinant values along the boundary as CSV.
    Valueset {
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Region: hurwitz, disk, shifted:<sigma> or sector:<phi>. Overrides the file.
    #[arg(long)]
    pub region: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Oracle samples; for valueset, parameter assignments per boundary point.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Initial boundary arcs, or boundary points for valueset.
    #[arg(long)]
    pub boundary_count: Option<usize>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Relative exclusion margin.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest critical subset to enumerate.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Include wall-clock time in reports (makes them nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

/// Result of one invocation: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

struct Loaded {
    family: MatrixFamily,
    region: Region,
    config: CheckerConfig,
}

fn load(path: &Path, opts: &Options) -> Result<Loaded, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = FamilyFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let region = match &opts.region {
        Some(r) => r.parse().map_err(|e: Error| e.to_string())?,
        None => file.region,
    };
    let mut config = file.config.unwrap_or_default();
    if let Some(v) = opts.samples {
        config.oracle_samples = v;
    }
    if let Some(v) = opts.seed {
        config.seed = v;
    }
    if let Some(v) = opts.boundary_count {
        config.boundary_count = v;
    }
    if let Some(v) = opts.max_depth {
        config.max_depth = v;
    }
    if let Some(v) = opts.tol {
        config.exclusion_margin = v;
    }
    if let Some(v) = opts.budget {
        config.budget = v;
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(Loaded { family: file.family, region, config })
}

fn exit_code(status: Status) -> i32 {
    match status {
        Status::Stable => EXIT_STABLE,
        Status::Unstable => EXIT_UNSTABLE,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

/// Writes `text` to `--out` when given, otherwise returns it as stdout.
fn emit(opts: &Options, code: i32, text: String) -> Outcome {
    match &opts.out {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome::input_error(format!("{}: {e}", path.display())),
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}

fn elapsed_ms(opts: &Options, start: Instant) -> Option<f64> {
    opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3)
}

/// `family_stable` with an oversized critical subset reported as inconclusive.
pub fn check_family(family: &MatrixFamily, region: &Region, config: &CheckerConfig) -> Result<Verdict, Error> {
    match family_stable(family, region, config) {
        Err(Error::Capacity { count, .. }) => Ok(Verdict::inconclusive(
            Inconclusive::Budget { count, budget: config.budget },
            Diagnostics::default(),
        )),
        other => other,
    }
}

fn check_verdict(l: &Loaded) -> Result<Verdict, Error> {
    check_family(&l.family, &l.region, &l.config)
}

fn cmd_check(path: &Path, opts: &Options) -> Outcome {
    let l = match load(path, opts) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let start = Instant::now();
    let degree = check_degree_invariant(&l.family, l.config.degree_samples, l.config.seed);
    let verdict = match check_verdict(&l) {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(e),
    };
    let report = Report::new("check", &l.region, verdict, Some(degree), &l.config, elapsed_ms(opts, start));
    emit(opts, exit_code(report.status), to_json(&report))
}

fn cmd_oracle(path: &Path, opts: &Options) -> Outcome {
    let l = match load(path, opts) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let start = Instant::now();
    let outcome = monte_carlo_oracle(&l.family, &l.region, &l.config);
    let report = OracleReport::new(&l.region, outcome, &l.config, elapsed_ms(opts, start));
    emit(opts, exit_code(report.status), to_json(&report))
}

/// Runs the check and the oracle on one family and compares them.
pub fn compare_family(family: &MatrixFamily, region: &Region, config: &CheckerConfig) -> Result<CompareReport, Error> {
    let check = check_family(family, region, config)?;
    let oracle = monte_carlo_oracle(family, region, config);
    Ok(CompareReport::new(region, check, oracle, config))
}

fn compare_one(l: &Loaded) -> Result<CompareReport, Error> {
    compare_family(&l.family, &l.region, &l.config)
}

fn cmd_compare(file: Option<&Path>, batch: Option<&Path>, opts: &Options) -> Outcome {
    let start = Instant::now();
    match (file, batch) {
        (Some(path), None) => {
            let l = match load(path, opts) {
                Ok(l) => l,
                Err(e) => return Outcome::input_error(e),
            };
            match compare_one(&l) {
                Ok(mut report) => {
                    report.wall_time_ms = elapsed_ms(opts, start);
                    let code = if report.agreement { EXIT_STABLE } else { EXIT_UNSTABLE };
                    emit(opts, code, to_json(&report))
                }
                Err(e) => Outcome::input_error(e),
            }
        }
        (None, Some(dir)) => {
            let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
                Ok(rd) => rd
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == "json"))
                    .collect(),
                Err(e) => return Outcome::input_error(format!("{}: {e}", dir.display())),
            };
            files.sort();
            let entries: Vec<BatchEntry> = files
                .iter()
                .map(|p| {
                    let name = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                    match load(p, opts).and_then(|l| compare_one(&l).map_err(|e| e.to_string())) {
                        Ok(r) => BatchEntry::from_report(name, r),
                        Err(e) => BatchEntry::error(name, e),
                    }
                })
                .collect();
            let report = BatchReport::new(entries, elapsed_ms(opts, start));
            let code = if report.tally.errors > 0 {
                EXIT_INPUT
            } else if report.tally.non_marginal_disagreements > 0 {
                EXIT_UNSTABLE
            } else {
                EXIT_STABLE
            };
            emit(opts, code, to_json(&report))
        }
        _ => Outcome::input_error("compare needs either a family file or --batch <dir>"),
    }
}

/// Critical sets used for a family and region, as in the checker.
fn sets_for(family: &MatrixFamily, region: &Region) -> Result<CriticalSets, Error> {
    if family.kind() == FamilyKind::Interval && *region == Region::Hurwitz {
        CriticalSets::kharitonov(family)
    } else {
        CriticalSets::polytopic(&family.to_polytopic(CORNER_COEFF_CAP)?)
    }
}

fn cmd_enumerate(path: &Path, opts: &Options) -> Outcome {
    let l = match load(path, opts) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let sets = match sets_for(&l.family, &l.region) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(e),
    };
    let count = sets.count();
    let kind = match sets.kind() {
        SetKind::EpsilonA => "epsilon_a",
        SetKind::EpsilonB2 => "epsilon_b2",
    };
    if count > l.config.budget as u128 {
        let line = serde_json::json!({
            "status": "budget_exceeded",
            "kind": kind,
            "count": count,
            "budget": l.config.budget,
        });
        let mut out = emit(opts, EXIT_INCONCLUSIVE, format!("{line}\n"));
        out.stderr = format!(
            "error: critical subset has {count} families, budget is {}\n",
            l.config.budget
        );
        return out;
    }
    let mut text = String::new();
    let mut streamed = 0u128;
    for cf in sets.families() {
        text.push_str(&serde_json::to_string(&cf).expect("critical families serialize"));
        text.push('\n');
        streamed += 1;
    }
    debug_assert_eq!(streamed, count);
    text.push_str(&format!("{}\n", serde_json::json!({ "kind": kind, "count": streamed })));
    emit(opts, EXIT_STABLE, text)
}

/// Boundary parameters and points, `count` of them. The disk uses angles
/// `2πk/count`; the other regions a uniform grid over `[-L, L]`.
fn boundary_samples(region: &Region, count: usize, sweep_limit: f64) -> Vec<(f64, num_complex::Complex64)> {
    let points = region.boundary_points(count, sweep_limit);
    let params = (0..count).map(|k| match region {
        Region::Disk => 2.0 * PI * k as f64 / count as f64,
        _ => -sweep_limit + 2.0 * sweep_limit * k as f64 / (count - 1) as f64,
    });
    params.zip(points).collect()
}

fn cmd_valueset(path: &Path, opts: &Options) -> Outcome {
    let l = match load(path, opts) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let f = &l.family;
    let assignments = if f.is_fixed() { 1 } else { opts.samples.unwrap_or(VALUESET_SAMPLES) };
    let mut rng = ChaCha8Rng::seed_from_u64(l.config.seed);
    let dets = match (0..assignments)
        .map(|_| f.sample(&f.random_params(&mut rng)).map(|m| m.det()))
        .collect::<Result<Vec<_>, Error>>()
    {
        Ok(d) => d,
        Err(e) => return Outcome::input_error(e),
    };
    let sweep_limit = family_sweep_limit(f, l.config.sweep_multiple);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["boundary_param", "re", "im", "assignment_id"]).expect("in-memory write");
    for (t, z) in boundary_samples(&l.region, l.config.boundary_count, sweep_limit) {
        for (id, det) in dets.iter().enumerate() {
            let v = det.evaluate(z);
            w.serialize((t, v.re, v.im, id)).expect("in-memory write");
        }
    }
    let bytes = w.into_inner().expect("in-memory write");
    emit(opts, EXIT_STABLE, String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Runs one parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check { file, opts } => cmd_check(file, opts),
        Command::Oracle { file, opts } => cmd_oracle(file, opts),
        Command::Compare { file, batch, opts } => cmd_compare(file.as_deref(), batch.as_deref(), opts),
        Command::Enumerate { file, opts } => cmd_enumerate(file, opts),
        Command::Valueset { file, opts } => cmd_valueset(file, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn family_file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    fn run(args: &[&str]) -> Outcome {
        let mut argv = vec!["polystab"];
        argv.extend_from_slice(args);
        execute(&Cli::try_parse_from(argv).unwrap())
    }

    const UNSTABLE: &str = r#"{"n": 1, "region": "hurwitz",
        "entries": [[{"kind": "interval", "lower": [-1, 1], "upper": [1, 1]}]]}"#;
    const STABLE: &str = r#"{"n": 1, "region": "hurwitz",
        "entries": [[{"kind": "interval", "lower": [1, 1], "upper": [2, 1]}]]}"#;

    #[test]
    fn check_exit_codes() {
        let f = family_file(UNSTABLE);
        let out = run(&["check", f.path().to_str().unwrap()]);
        assert_eq!(out.code, EXIT_UNSTABLE, "{}", out.stderr);
        let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(report["status"], "unstable");
        assert!(report["witness"]["params"].is_array());
        assert!(report["config"]["boundary_count"].is_number());

        let f = family_file(STABLE);
        let out = run(&["check", f.path().to_str().unwrap()]);
        assert_eq!(out.code, EXIT_STABLE);
        let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert!(report.get("witness").is_none());
    }

    #[test]
    fn enumerate_counts() {
        let two = r#"{"n": 2, "region": "hurwitz", "entries": [
            [{"kind": "polytopic", "generators": [[1, 1], [2, 1]]}, {"kind": "polytopic", "generators": [[0], [1]]}],
            [{"kind": "polytopic", "generators": [[0], [1]]}, {"kind": "polytopic", "generators": [[1, 1], [2, 1]]}]]}"#;
        let f = family_file(two);
        let out = run(&["enumerate", f.path().to_str().unwrap()]);
        assert_eq!(out.code, EXIT_STABLE);
        assert_eq!(out.stdout.lines().count(), 9);
        assert!(out.stdout.lines().last().unwrap().contains("\"count\":8"));

        let f = family_file(STABLE);
        let out = run(&["enumerate", f.path().to_str().unwrap()]);
        assert_eq!(out.stdout.lines().count(), 5);

        let one = r#"{"n": 1, "region": "hurwitz", "entries": [[{"kind": "polytopic", "generators": [[1, 1]]}]]}"#;
        let f = family_file(one);
        let out = run(&["enumerate", f.path().to_str().unwrap()]);
        assert_eq!(out.stdout.lines().collect::<Vec<_>>(), vec![r#"{"count":0,"kind":"epsilon_a"}"#]);

        let f = family_file(two);
        let out = run(&["enumerate", f.path().to_str().unwrap(), "--budget", "4"]);
        assert_eq!(out.code, EXIT_INCONCLUSIVE);
        assert!(out.stderr.contains("8 families"));
    }

    #[test]
    fn valueset_rows() {
        let seg = r#"{"n": 1, "region": "hurwitz", "entries": [[{"kind": "polytopic", "generators": [[1, 1], [2, 1]]}]]}"#;
        let f = family_file(seg);
        let out = run(&["valueset", f.path().to_str().unwrap(), "--boundary-count", "11", "--samples", "5"]);
        assert_eq!(out.code, EXIT_STABLE);
        let mut r = csv::Reader::from_reader(out.stdout.as_bytes());
        let rows: Vec<(f64, f64, f64, usize)> = r.deserialize().map(|x| x.unwrap()).collect();
        assert_eq!(rows.len(), 55);
        let at_zero: Vec<_> = rows.iter().filter(|r| r.0 == 0.0).collect();
        assert_eq!(at_zero.len(), 5);
        assert!(at_zero.iter().all(|r| (1.0..=2.0).contains(&r.1) && r.2 == 0.0));

        let fixed = r#"{"n": 1, "region": "disk", "entries": [[{"kind": "polytopic", "generators": [[1, 1]]}]]}"#;
        let f = family_file(fixed);
        let out = run(&["valueset", f.path().to_str().unwrap(), "--boundary-count", "8"]);
        assert_eq!(out.stdout.lines().count(), 9);
    }

    #[test]
    fn compare_needs_a_source() {
        let out = run(&["compare"]);
        assert_eq!(out.code, EXIT_INPUT);
    }
}
