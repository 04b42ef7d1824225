#![allow(dead_code)]

use std::path::PathBuf;

use serde_json::Value;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Run the CLI in-process. Returns exit code, parsed stdout and stderr.
pub fn run_cli(args: &[&str]) -> (i32, Value, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("coeig").chain(args.iter().copied());
    let code = coeig::cli::run(argv, &mut out, &mut err);
    let stdout = String::from_utf8(out).expect("utf-8 stdout");
    let value = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (code, value, String::from_utf8(err).expect("utf-8 stderr"))
}

/// Absolute slack for numbers near zero, relative slack otherwise.
const ABS: f64 = 1e-10;
const REL: f64 = 1e-8;

/// Structural equality with float tolerance. Object key sets must match exactly.
pub fn json_close(expected: &Value, actual: &Value, path: &str) -> Result<(), String> {
    match (expected, actual) {
        (Value::Number(a), Value::Number(b)) => {
            let (x, y) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            if (x - y).abs() <= ABS + REL * x.abs().max(y.abs()) {
                Ok(())
            } else {
                Err(format!("{path}: expected {x}, got {y}"))
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                return Err(format!("{path}: length {} vs {}", a.len(), b.len()));
            }
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                json_close(x, y, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        (Value::Object(a), Value::Object(b)) => {
            let ka: Vec<_> = a.keys().collect();
            let kb: Vec<_> = b.keys().collect();
            if ka != kb {
                return Err(format!("{path}: keys {ka:?} vs {kb:?}"));
            }
            for (k, x) in a {
                json_close(x, &b[k], &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        _ if expected == actual => Ok(()),
        _ => Err(format!("{path}: expected {expected}, got {actual}")),
    }
}

pub struct CliCase {
    pub golden: &'static str,
    pub args: &'static [&'static str],
    pub fixture: &'static str,
    pub code: i32,
}

const fn case(golden: &'static str, fixture: &'static str, args: &'static [&'static str], code: i32) -> CliCase {
    CliCase {
        golden,
        args,
        fixture,
        code,
    }
}

/// Every subcommand on each of the three fixtures.
pub const CLI_CASES: &[CliCase] = &[
    case("diag_pair.eigvec.json", "diag_pair.json", &["eigvec"], 0),
    case("diag_pair.eigvec-stats.json", "diag_pair.json", &["eigvec", "--stats"], 0),
    case("diag_pair.triangulate.json", "diag_pair.json", &["triangulate", "--check"], 0),
    case("diag_pair.lie-closure.json", "diag_pair.json", &["lie-closure"], 0),
    case("diag_pair.lie-closure-all-pairs.json", "diag_pair.json", &["lie-closure", "--strategy", "all-pairs"], 0),
    case("diag_pair.oracle.json", "diag_pair.json", &["oracle", "--compare"], 0),
    case("sl2.eigvec.json", "sl2.json", &["eigvec"], 0),
    case("sl2.eigvec-stats.json", "sl2.json", &["eigvec", "--stats"], 0),
    case("sl2.triangulate.json", "sl2.json", &["triangulate", "--check"], 0),
    case("sl2.lie-closure.json", "sl2.json", &["lie-closure"], 0),
    case("sl2.lie-closure-all-pairs.json", "sl2.json", &["lie-closure", "--strategy", "all-pairs"], 0),
    case("sl2.oracle.json", "sl2.json", &["oracle", "--compare"], 0),
    case("conjugated_triangulable.eigvec.json", "conjugated_triangulable.json", &["eigvec"], 0),
    case("conjugated_triangulable.eigvec-stats.json", "conjugated_triangulable.json", &["eigvec", "--stats"], 0),
    case("conjugated_triangulable.triangulate.json", "conjugated_triangulable.json", &["triangulate", "--check"], 0),
    case("conjugated_triangulable.lie-closure.json", "conjugated_triangulable.json", &["lie-closure"], 0),
    case(
        "conjugated_triangulable.lie-closure-all-pairs.json",
        "conjugated_triangulable.json",
        &["lie-closure", "--strategy", "all-pairs"],
        0,
    ),
    case("conjugated_triangulable.oracle.json", "conjugated_triangulable.json", &["oracle", "--compare"], 0),
    case("mixed_sizes.eigvec.json", "mixed_sizes.json", &["eigvec"], 1),
];

/// Run one case against its golden file. With `UPDATE_GOLDEN=1` the golden
/// file is rewritten instead.
pub fn check_case(c: &CliCase) -> Result<(), String> {
    let path = fixture(c.fixture);
    let path = path.to_str().unwrap();
    let mut args: Vec<&str> = vec![c.args[0], path];
    args.extend_from_slice(&c.args[1..]);
    let (code, value, _) = run_cli(&args);
    if code != c.code {
        return Err(format!("{}: exit {code}, expected {}", c.golden, c.code));
    }
    let gpath = golden(c.golden);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&gpath, serde_json::to_string_pretty(&value).unwrap() + "\n").unwrap();
        return Ok(());
    }
    let text = std::fs::read_to_string(&gpath).map_err(|e| format!("{}: {e}", gpath.display()))?;
    let expected: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", c.golden))?;
    json_close(&expected, &value, c.golden)
}
