//! The `coeig` command-line front end.
//!
//! Every subcommand prints one JSON report on stdout. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success (including a certified negative answer) |
//! | 1 | input error: unreadable or invalid file, bad flags, refused instance |
//! | 2 | numerical failure |
//! | 3 | `oracle --compare` found a disagreement |

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use format::{complex_pairs, matrix_to_entries, MatrixSet, MatrixSetFile, NamedMatrix, ToleranceOverrides};

use crate::eigvec::{common_eigenvector_report, EigvecResult, SolveOptions};
use crate::error::Error;
use crate::exec::Parallelism;
use crate::lie::{generate_lie_algebra, independent_indices, Provenance, Strategy};
use crate::linalg::{Mat, Tolerances};
use crate::oracle::{brute_force_with, make_instance, InstanceKind, InstanceSpec};
use crate::triangulate::{triangulate, Triangulation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;

/// Eigenvalue tuples from the two solvers agree when every component is
/// within this bound, scaled by `max(1, |λ|)`.
pub const COMPARE_REL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "coeig", version, about = "Common eigenvectors and simultaneous triangulation of complex matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find a common eigenvector or certify that none exists.
    Eigvec {
        file: PathBuf,
        #[command(flatten)]
        tol: TolFlags,
        /// Add closure and solver counters to the report.
        #[arg(long)]
        stats: bool,
    },
    /// Simultaneous unitary triangulation.
    Triangulate {
        file: PathBuf,
        #[command(flatten)]
        tol: TolFlags,
        /// Re-verify and report every invariant of the result.
        #[arg(long)]
        check: bool,
    },
    /// Lie algebra generated by the matrices.
    LieClosure {
        file: PathBuf,
        #[command(flatten)]
        tol: TolFlags,
        #[arg(long, value_enum, default_value = "new-vs-generators")]
        strategy: StrategyArg,
    },
    /// Exhaustive eigenvalue-tuple search.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        tol: TolFlags,
        /// Also run the main solver and report agreement.
        #[arg(long)]
        compare: bool,
    },
    /// Write a seeded random instance as a matrix file.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, env = "COEIG_SEED", default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when absent.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct TolFlags {
    /// Relative numerical-rank threshold.
    #[arg(long = "tol-rank")]
    pub rank: Option<f64>,
    /// Relative eigenvalue clustering radius.
    #[arg(long = "tol-eig")]
    pub eig: Option<f64>,
    /// Relative residual acceptance threshold.
    #[arg(long = "tol-res")]
    pub res: Option<f64>,
}

impl TolFlags {
    fn overrides(self) -> ToleranceOverrides {
        ToleranceOverrides {
            rank_rel: self.rank,
            eig_cluster_rel: self.eig,
            residual_rel: self.res,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    AllPairs,
    NewVsGenerators,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::AllPairs => Strategy::AllPairs,
            StrategyArg::NewVsGenerators => Strategy::NewAgainstGenerators,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "PascalCase")]
pub enum KindArg {
    TriangulableConjugated,
    CommutingPolynomials,
    GenericRandom,
    Sl2Embedded,
}

impl From<KindArg> for InstanceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::TriangulableConjugated => InstanceKind::TriangulableConjugated,
            KindArg::CommutingPolynomials => InstanceKind::CommutingPolynomials,
            KindArg::GenericRandom => InstanceKind::GenericRandom,
            KindArg::Sl2Embedded => InstanceKind::Sl2Embedded,
        }
    }
}

/// A finished command: JSON report plus exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { code: EXIT_OK, report }
    }
}

/// Parse `args` (including the program name), run, and write the report.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let outcome = execute(&cli.command);
    if outcome.code != EXIT_OK {
        if let Some(msg) = outcome.report.pointer("/error/message").and_then(Value::as_str) {
            let _ = writeln!(err, "coeig: {msg}");
        }
    }
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&outcome.report).expect("reports always serialize")
    );
    outcome.code
}

pub fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Eigvec { .. } => "eigvec",
        Command::Triangulate { .. } => "triangulate",
        Command::LieClosure { .. } => "lie-closure",
        Command::Oracle { .. } => "oracle",
        Command::Gen { .. } => "gen",
    }
}

pub fn execute(cmd: &Command) -> Outcome {
    let name = command_name(cmd);
    let result = match cmd {
        Command::Eigvec { file, tol, stats } => {
            load(file, tol).and_then(|(set, t)| cmd_eigvec(&set, &t, *stats))
        }
        Command::Triangulate { file, tol, check } => {
            load(file, tol).and_then(|(set, t)| cmd_triangulate(&set, &t, *check))
        }
        Command::LieClosure { file, tol, strategy } => {
            load(file, tol).and_then(|(set, t)| cmd_lie_closure(&set, &t, (*strategy).into()))
        }
        Command::Oracle { file, tol, compare } => {
            load(file, tol).and_then(|(set, t)| cmd_oracle(&set, &t, *compare))
        }
        Command::Gen {
            kind,
            n,
            k,
            seed,
            output,
        } => cmd_gen(InstanceSpec::new((*kind).into(), *n, *k, *seed), output.as_deref()),
    };
    let raw_file = matches!(cmd, Command::Gen { output: None, .. }) && result.is_ok();
    let mut outcome = result.unwrap_or_else(|e| error_outcome(&e));
    // a matrix file printed to stdout must stay loadable as-is
    if raw_file {
        return outcome;
    }
    if let Value::Object(map) = &mut outcome.report {
        map.insert("command".into(), json!(name));
    }
    outcome
}

fn load(path: &Path, flags: &TolFlags) -> crate::Result<(MatrixSet, Tolerances)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let set = MatrixSetFile::parse(&text)?.load()?;
    let tol = flags.overrides().over(set.tolerances).resolve()?;
    Ok((set, tol))
}

pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INPUT
    }
}

fn error_outcome(e: &Error) -> Outcome {
    let kind = match e {
        Error::Input(_) => "input",
        Error::Precondition(_) => "precondition",
        Error::RefusedInstance { .. } => "refused_instance",
        _ => "numerical_failure",
    };
    let mut detail = json!({ "kind": kind, "message": e.to_string() });
    if let Some(depth) = e.depth() {
        detail["depth"] = json!(depth);
    }
    let mut inner = e;
    while let Error::AtDepth { source, .. } = inner {
        inner = source;
    }
    match inner {
        Error::NumericalFailure { stage, residuals, .. } => {
            detail["stage"] = json!(stage);
            if !residuals.is_empty() {
                detail["residuals"] = json!(residuals);
            }
        }
        Error::NonInvariantSubspace { residual, bound } => {
            detail["residual"] = json!(residual);
            detail["bound"] = json!(bound);
        }
        Error::NoConvergence { iterations } => detail["iterations"] = json!(iterations),
        Error::RefusedInstance { combinations, limit } => {
            detail["combinations"] = json!(combinations.to_string());
            detail["limit"] = json!(limit.to_string());
        }
        _ => {}
    }
    Outcome {
        code: exit_code_for(e),
        report: json!({ "error": detail }),
    }
}

fn result_json(r: &EigvecResult) -> Value {
    json!({
        "vector": complex_pairs(r.vector()),
        "eigenvalues": complex_pairs(r.eigenvalues()),
        "residuals": r.residuals(),
    })
}

pub fn cmd_eigvec(set: &MatrixSet, tol: &Tolerances, stats: bool) -> crate::Result<Outcome> {
    let report = common_eigenvector_report(&set.matrices, tol, &SolveOptions::default())?;
    let mut out = match &report.result {
        Some(r) => {
            let mut v = json!({ "found": true });
            merge(&mut v, result_json(r));
            v
        }
        None => json!({
            "found": false,
            "certificate": "T_trivial",
            "closure_dim": report.closure_dim,
        }),
    };
    if stats {
        out["stats"] = json!({
            "path": report.path,
            "closure_dim": report.closure_dim,
            "shemesh_dim": report.shemesh_dim,
            "commutators_computed": report.stats.commutators_computed,
            "elements_accepted": report.stats.elements_accepted,
            "removed_indices": report.removed(set.matrices.len()),
        });
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_triangulate(set: &MatrixSet, tol: &Tolerances, check: bool) -> crate::Result<Outcome> {
    match triangulate(&set.matrices, tol, &SolveOptions::default())? {
        Triangulation::NotTriangulable { depth, closure_dim } => Ok(Outcome::ok(json!({
            "triangulable": false,
            "failure_depth": depth,
            "closure_dim": closure_dim,
        }))),
        Triangulation::Triangulated(r) => {
            let forms: Vec<Value> = set
                .names
                .iter()
                .zip(r.triangs())
                .map(|(name, t)| json!({ "name": name, "entries": matrix_to_entries(t) }))
                .collect();
            let diagonals: Vec<_> = r.diagonal_sequences().iter().map(|d| complex_pairs(d)).collect();
            let mut out = json!({
                "triangulable": true,
                "n": set.n,
                "q": matrix_to_entries(r.q()),
                "triangular_forms": forms,
                "diagonals": diagonals,
                "max_strictly_lower": r.strictly_lower_max(),
            });
            let mut code = EXIT_OK;
            if check {
                let checks = r.checks(&set.matrices, tol);
                let all_pass = checks.iter().all(|c| c.pass);
                if !all_pass {
                    code = EXIT_NUMERICAL;
                }
                out["checks"] = json!(checks);
                out["all_checks_pass"] = json!(all_pass);
            }
            Ok(Outcome { code, report: out })
        }
    }
}

pub fn cmd_lie_closure(set: &MatrixSet, tol: &Tolerances, strategy: Strategy) -> crate::Result<Outcome> {
    let idx = independent_indices(&set.matrices, tol)?;
    let removed: Vec<usize> = (0..set.matrices.len()).filter(|i| !idx.contains(i)).collect();
    if idx.is_empty() {
        return Ok(Outcome::ok(json!({
            "strategy": strategy,
            "dim": 0,
            "generators": idx,
            "removed_indices": removed,
            "commutators_computed": 0,
            "elements_accepted": 0,
            "closure_residual": 0.0,
            "provenance": [],
        })));
    }
    let gens: Vec<Mat> = idx.iter().map(|&i| set.matrices[i].clone()).collect();
    let basis = generate_lie_algebra(&gens, tol, strategy)?;
    let provenance: Vec<Value> = basis
        .provenance()
        .iter()
        .enumerate()
        .map(|(e, p)| match *p {
            Provenance::Generator { index } => json!({
                "element": e,
                "source": "generator",
                "index": idx[index],
                "name": set.names[idx[index]],
            }),
            Provenance::Bracket { left, right } => json!({
                "element": e,
                "source": "bracket",
                "left": left,
                "right": right,
            }),
        })
        .collect();
    let stats = basis.stats();
    Ok(Outcome::ok(json!({
        "strategy": strategy,
        "dim": basis.dim(),
        "generators": idx,
        "removed_indices": removed,
        "commutators_computed": stats.commutators_computed,
        "elements_accepted": stats.elements_accepted,
        "closure_residual": basis.closure_residual(Parallelism::default()),
        "provenance": provenance,
    })))
}

/// Componentwise agreement of two eigenvalue tuples.
pub fn eigenvalue_tuples_match(a: &[crate::C64], b: &[crate::C64]) -> bool {
    a.len() == b.len()
        && a
            .iter()
            .zip(b)
            .all(|(x, y)| (x - y).norm() <= COMPARE_REL * x.norm().max(1.0))
}

pub fn cmd_oracle(set: &MatrixSet, tol: &Tolerances, compare: bool) -> crate::Result<Outcome> {
    let found = brute_force_with(&set.matrices, tol, Parallelism::default())?;
    let mut out = json!({
        "count": found.len(),
        "results": found.iter().map(result_json).collect::<Vec<_>>(),
    });
    let mut code = EXIT_OK;
    if compare {
        let main = common_eigenvector_report(&set.matrices, tol, &SolveOptions::default())?.result;
        let oracle_found = !found.is_empty();
        let eigenvalues_match = main
            .as_ref()
            .map(|m| found.iter().any(|o| eigenvalue_tuples_match(m.eigenvalues(), o.eigenvalues())));
        let agree = main.is_some() == oracle_found && eigenvalues_match.unwrap_or(true);
        if !agree {
            code = EXIT_DISAGREE;
        }
        out["compare"] = json!({
            "agree": agree,
            "main_found": main.is_some(),
            "oracle_found": oracle_found,
            "eigenvalues_match": eigenvalues_match,
            "main_eigenvalues": main.as_ref().map(|m| complex_pairs(m.eigenvalues())),
        });
    }
    Ok(Outcome { code, report: out })
}

/// Matrix file for a generated instance, matrices written out explicitly.
pub fn generated_file(spec: &InstanceSpec) -> crate::Result<MatrixSetFile> {
    let ms = make_instance(spec)?;
    let names: Vec<String> = (0..ms.len()).map(|i| format!("A{i}")).collect();
    let mut file = MatrixSetFile::from_matrices(&names, &ms);
    file.generated_from = Some(*spec);
    Ok(file)
}

pub fn cmd_gen(spec: InstanceSpec, output: Option<&Path>) -> crate::Result<Outcome> {
    let file = generated_file(&spec)?;
    match output {
        None => Ok(Outcome::ok(serde_json::to_value(&file).expect("matrix files always serialize"))),
        Some(path) => {
            std::fs::write(path, file.to_json() + "\n")
                .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            Ok(Outcome::ok(json!({
                "written": path.display().to_string(),
                "instance_spec": spec,
            })))
        }
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}
