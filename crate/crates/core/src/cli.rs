//! Command-line front end.
//!
//! Exit codes: 0 when the command succeeds or the checked property holds,
//! 1 when a checked property fails (a witness is printed), 2 on any error.
//! Indices and permutations are one-based on the command line and in output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::matrix::{format_number, SymMatrix};
use crate::permutation::Permutation;
use crate::qap::{
    brute_force, build_distance, qap_value, solve_robinsonian, verify_theorem1, DistanceKind,
    QapSolution, DEFAULT_BRUTE_CAP, BAND_CHECK_CAP,
};
use crate::seriation::seriate;
use crate::structure::{
    build_b_delta, decompose_cuts, decompose_toeplitz, gen_robinson_similarity,
    gen_robinson_similarity_general, gen_toeplitz_dissimilarity, kalmanson_violation,
    metric_violation, robinson_dissimilarity_violation, robinson_similarity_violation,
    strongly_monotone_violation, toeplitz_profile, RobinsonViolation,
};

/// Environment variable overriding [`DEFAULT_BRUTE_CAP`].
pub const BRUTE_CAP_ENV: &str = "ROBQAP_BRUTE_CAP";

/// Parses the dense text format: `#` lines and blank lines are skipped, the
/// first remaining line holds `n`, and exactly `n` rows of `n` numbers follow.
pub fn parse_matrix(text: &str) -> crate::Result<SymMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let parse_err = |line: usize, message: String| Error::Parse { line, message };

    let (first, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing dimension line".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| parse_err(first, format!("expected the dimension, found {header:?}")))?;
    if n == 0 {
        return Err(parse_err(first, "dimension must be at least 1".into()));
    }

    let mut rows = Vec::with_capacity(n);
    let mut last = first;
    for (line, content) in lines {
        if rows.len() == n {
            return Err(parse_err(line, format!("expected {n} rows, found more")));
        }
        let row = content
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| parse_err(line, format!("malformed number {t:?}")))
            })
            .collect::<crate::Result<Vec<f64>>>()?;
        if row.len() != n {
            return Err(parse_err(
                line,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
        last = line;
    }
    if rows.len() < n {
        return Err(parse_err(
            last,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    SymMatrix::from_rows(&rows)
}

#[derive(Parser)]
#[command(
    name = "robqap",
    version,
    about = "Robinson/Toeplitz structure, spectral seriation and closed-form QAP"
)]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a structural property; exit 1 with a witness when it fails.
    Check {
        property: Property,
        file: PathBuf,
        /// Only compare strictly off-diagonal triples (Robinson checks).
        #[arg(long)]
        ignore_diagonal: bool,
    },
    /// Order a similarity matrix by its Fiedler vector.
    Seriate { file: PathBuf },
    /// Expand a matrix over band or cut matrices.
    Decompose { kind: DecomposeKind, file: PathBuf },
    /// Quadratic assignment: evaluate, solve in closed form, or enumerate.
    Qap {
        #[command(subcommand)]
        action: QapAction,
    },
    /// Print a generated matrix in the text format.
    Gen {
        kind: GenKind,
        #[arg(long)]
        n: usize,
        /// Exponent for p-sum.
        #[arg(long)]
        p: Option<f64>,
        /// Band parameter for bandwidth and b-delta.
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive checks over generated instances.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    RobinsonSim,
    RobinsonDis,
    Toeplitz,
    Kalmanson,
    Metric,
    StrongMonotone,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeKind {
    Toeplitz,
    Cuts,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    TwoSum,
    PSum,
    Linear,
    Bandwidth,
    BDelta,
    Robinson,
    ToeplitzDis,
}

#[derive(Subcommand)]
enum QapAction {
    /// Objective value of a permutation (identity by default).
    Value {
        a: PathBuf,
        b: PathBuf,
        /// One-based permutation, space or comma separated.
        #[arg(long)]
        perm: Option<String>,
    },
    /// Closed-form optimum for Robinsonian instances with Toeplitz structure.
    Solve { a: PathBuf, b: PathBuf },
    /// Exhaustive minimum; refuses n above the cap.
    Brute {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Check that the identity minimises <A_π, B^Δ_n> for generated Robinson
    /// similarities of size n and every Δ in [1, n-1].
    Theorem1 {
        #[arg(long)]
        n: usize,
        /// Instances per Δ.
        #[arg(long, default_value_t = 25)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What a command produced: human text, the JSON form, and whether the
/// property it reports holds.
struct Outcome {
    text: String,
    json: Value,
    holds: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            holds: true,
        }
    }
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = std::result::Result<Outcome, Failure>;

/// Runs the CLI on `args` (program name first), writing results to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            let written = if cli.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&outcome.json).expect("serialisable")
                )
            } else {
                write!(out, "{}", outcome.text)
            };
            if written.is_err() {
                return 2;
            }
            if outcome.holds {
                0
            } else {
                1
            }
        }
        Err(Failure(message)) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Check {
            property,
            file,
            ignore_diagonal,
        } => check(property, &read_matrix(&file)?, ignore_diagonal),
        Command::Seriate { file } => seriate_cmd(&read_matrix(&file)?),
        Command::Decompose { kind, file } => decompose(kind, &read_matrix(&file)?),
        Command::Qap { action } => qap(action),
        Command::Gen {
            kind,
            n,
            p,
            delta,
            seed,
        } => generate(kind, n, p, delta, seed),
        Command::Verify {
            target: VerifyTarget::Theorem1 { n, instances, seed },
        } => band_check(n, instances, seed),
    }
}

fn read_matrix(path: &Path) -> std::result::Result<SymMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// JSON number, written as an integer when the value is one.
fn number(v: f64) -> Value {
    if v.fract() == 0.0 && v.abs() < 9.007_199_254_740_992e15 {
        json!(v as i64)
    } else {
        json!(v)
    }
}

fn numbers(vs: &[f64]) -> Value {
    Value::Array(vs.iter().map(|&v| number(v)).collect())
}

fn one_based(p: &Permutation) -> Value {
    json!(p.one_based())
}

fn perm_text(p: &Permutation) -> String {
    let v: Vec<String> = p.one_based().iter().map(|x| x.to_string()).collect();
    v.join(" ")
}

fn joined(vs: &[f64]) -> String {
    let v: Vec<String> = vs.iter().map(|&x| format_number(x)).collect();
    v.join(" ")
}

fn matrix_json(m: &SymMatrix) -> Value {
    Value::Array(m.rows().map(numbers).collect())
}

fn property_outcome(
    name: &str,
    witness: Option<(String, Value)>,
    extra: Map<String, Value>,
) -> Outcome {
    let mut obj = Map::new();
    obj.insert("property".into(), json!(name));
    obj.insert("holds".into(), json!(witness.is_none()));
    match witness {
        None => {
            obj.insert("witness".into(), Value::Null);
            obj.extend(extra);
            Outcome::ok("true\n".into(), Value::Object(obj))
        }
        Some((text, value)) => {
            obj.insert("witness".into(), value);
            Outcome {
                text: format!("false\nwitness: {text}\n"),
                json: Value::Object(obj),
                holds: false,
            }
        }
    }
}

fn robinson_witness(v: RobinsonViolation) -> (String, Value) {
    let value = json!({
        "triple": [v.i + 1, v.j + 1, v.k + 1],
        "lhs": number(v.lhs),
        "rhs": number(v.rhs),
    });
    (v.to_string(), value)
}

fn check(property: Property, m: &SymMatrix, ignore_diagonal: bool) -> CmdResult {
    let none = Map::new;
    let outcome = match property {
        Property::RobinsonSim => property_outcome(
            "robinson-sim",
            robinson_similarity_violation(m, ignore_diagonal).map(robinson_witness),
            none(),
        ),
        Property::RobinsonDis => property_outcome(
            "robinson-dis",
            robinson_dissimilarity_violation(m, ignore_diagonal).map(robinson_witness),
            none(),
        ),
        Property::Toeplitz => match toeplitz_profile(m) {
            Ok(profile) => {
                let mut extra = Map::new();
                extra.insert("profile".into(), numbers(&profile.beta));
                let mut o = property_outcome("toeplitz", None, extra);
                o.text = format!("true\nprofile: {}\n", joined(&profile.beta));
                o
            }
            Err(w) => {
                let value = json!({
                    "first": [w.first.0 + 1, w.first.1 + 1],
                    "second": [w.second.0 + 1, w.second.1 + 1],
                    "first_value": number(w.first_value),
                    "second_value": number(w.second_value),
                });
                property_outcome("toeplitz", Some((w.to_string(), value)), none())
            }
        },
        Property::Kalmanson => property_outcome(
            "kalmanson",
            kalmanson_violation(m).map(|q| {
                let [i, j, k, l] = q.0;
                (
                    q.to_string(),
                    json!({ "quadruple": [i + 1, j + 1, k + 1, l + 1] }),
                )
            }),
            none(),
        ),
        Property::Metric => property_outcome(
            "metric",
            metric_violation(m)?.map(|t| {
                let [i, j, k] = t.0;
                (t.to_string(), json!({ "triple": [i + 1, j + 1, k + 1] }))
            }),
            none(),
        ),
        Property::StrongMonotone => property_outcome(
            "strong-monotone",
            strongly_monotone_violation(m).map(|v| {
                let [i, j, k, l] = v.quadruple.0;
                let value = json!({
                    "quadruple": [i + 1, j + 1, k + 1, l + 1],
                    "implication": v.implication,
                });
                (v.to_string(), value)
            }),
            none(),
        ),
    };
    Ok(outcome)
}

fn seriate_cmd(m: &SymMatrix) -> CmdResult {
    let s = seriate(m)?;
    let text = format!(
        "permutation: {}\nfiedler value: {}\nfiedler vector: {}\n",
        perm_text(&s.permutation),
        s.fiedler_value,
        joined(&s.fiedler_vector)
    );
    let value = json!({
        "n": m.n(),
        "permutation": one_based(&s.permutation),
        "fiedler_value": s.fiedler_value,
        "fiedler_vector": s.fiedler_vector,
        "reversal_ambiguous": s.reversal_ambiguous,
    });
    Ok(Outcome::ok(text, value))
}

fn decompose(kind: DecomposeKind, m: &SymMatrix) -> CmdResult {
    match kind {
        DecomposeKind::Toeplitz => {
            let profile = match toeplitz_profile(m) {
                Ok(p) => p,
                Err(w) => {
                    let value = json!({
                        "first": [w.first.0 + 1, w.first.1 + 1],
                        "second": [w.second.0 + 1, w.second.1 + 1],
                        "first_value": number(w.first_value),
                        "second_value": number(w.second_value),
                    });
                    return Ok(property_outcome(
                        "toeplitz",
                        Some((w.to_string(), value)),
                        Map::new(),
                    ));
                }
            };
            let c = decompose_toeplitz(&profile);
            let mut text = format!("J: {}\n", format_number(c.j_coefficient));
            for (d, &w) in c.coefficients.iter().enumerate() {
                let _ = writeln!(text, "B^{}: {}", d + 1, format_number(w));
            }
            let _ = writeln!(text, "conic: {}", c.is_conic());
            let value = json!({
                "n": c.n,
                "j_coefficient": number(c.j_coefficient),
                "coefficients": numbers(&c.coefficients),
                "conic": c.is_conic(),
            });
            Ok(Outcome::ok(text, value))
        }
        DecomposeKind::Cuts => {
            let w = decompose_cuts(m);
            let mut text = String::new();
            let mut entries = Vec::new();
            for (u, v, x) in w.nonzero() {
                let _ = writeln!(text, "CUT({}, {}): {}", u + 1, v + 1, format_number(x));
                entries.push(json!({ "u": u + 1, "v": v + 1, "weight": number(x) }));
            }
            let _ = writeln!(text, "in cone: {}", w.in_cone());
            let value = json!({ "n": w.n(), "weights": entries, "in_cone": w.in_cone() });
            Ok(Outcome::ok(text, value))
        }
    }
}

fn solution_outcome(s: &QapSolution) -> Outcome {
    let mut text = format!(
        "permutation: {}\nvalue: {}\nmethod: {}\n",
        perm_text(&s.permutation),
        format_number(s.value),
        s.method
    );
    let mut obj = Map::new();
    obj.insert("n".into(), json!(s.permutation.n()));
    obj.insert("permutation".into(), one_based(&s.permutation));
    obj.insert("value".into(), number(s.value));
    obj.insert("method".into(), json!(s.method.as_str()));
    if let Some(c) = &s.certificate {
        let _ = writeln!(
            text,
            "pi: {}\ntau: {}\ntoeplitz: {}",
            perm_text(&c.pi),
            perm_text(&c.tau),
            c.toeplitz
        );
        obj.insert(
            "certificate".into(),
            json!({
                "pi": one_based(&c.pi),
                "tau": one_based(&c.tau),
                "toeplitz": c.toeplitz.to_string(),
            }),
        );
    }
    Outcome::ok(text, Value::Object(obj))
}

fn brute_cap(flag: Option<usize>) -> std::result::Result<usize, Failure> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(BRUTE_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure(format!(
                "{BRUTE_CAP_ENV} must be a nonnegative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_BRUTE_CAP),
    }
}

fn qap(action: QapAction) -> CmdResult {
    match action {
        QapAction::Value { a, b, perm } => {
            let (a, b) = (read_matrix(&a)?, read_matrix(&b)?);
            let sigma = match perm {
                Some(text) => text.parse::<Permutation>()?,
                None => Permutation::identity(a.n()),
            };
            let value = qap_value(&a, &b, &sigma)?;
            let json = json!({
                "n": a.n(),
                "permutation": one_based(&sigma),
                "value": number(value),
            });
            Ok(Outcome::ok(format!("{}\n", format_number(value)), json))
        }
        QapAction::Solve { a, b } => {
            let (a, b) = (read_matrix(&a)?, read_matrix(&b)?);
            Ok(solution_outcome(&solve_robinsonian(&a, &b, None, None)?))
        }
        QapAction::Brute { a, b, cap } => {
            let (a, b) = (read_matrix(&a)?, read_matrix(&b)?);
            let cap = brute_cap(cap)?;
            Ok(solution_outcome(&brute_force(&a, &b, cap)?))
        }
    }
}

fn generate(kind: GenKind, n: usize, p: Option<f64>, delta: Option<usize>, seed: u64) -> CmdResult {
    if n == 0 {
        return Err(Failure("--n must be at least 1".into()));
    }
    let need_delta = || delta.ok_or_else(|| Failure("--delta is required for this kind".into()));
    let m = match kind {
        GenKind::TwoSum => build_distance(DistanceKind::TwoSum, n)?,
        GenKind::Linear => build_distance(DistanceKind::LinearArrangement, n)?,
        GenKind::PSum => {
            let p = p.ok_or_else(|| Failure("--p is required for p-sum".into()))?;
            build_distance(DistanceKind::PSum(p), n)?
        }
        GenKind::Bandwidth => build_distance(DistanceKind::Bandwidth(need_delta()?), n)?,
        GenKind::BDelta => build_b_delta(n, need_delta()?)?,
        GenKind::Robinson => gen_robinson_similarity(n, seed),
        GenKind::ToeplitzDis => gen_toeplitz_dissimilarity(n, seed),
    };
    let value = json!({ "n": n, "matrix": matrix_json(&m) });
    Ok(Outcome::ok(m.to_string(), value))
}

/// Seed of the `index`-th instance checked for band parameter `delta`.
fn band_check_seed(seed: u64, delta: usize, index: usize) -> u64 {
    seed.wrapping_mul(1_000_003)
        .wrapping_add((delta as u64) << 20)
        .wrapping_add(index as u64)
}

/// Alternates between cut-cone and general Robinson similarities.
pub fn band_check_instance(n: usize, seed: u64, delta: usize, index: usize) -> SymMatrix {
    let s = band_check_seed(seed, delta, index);
    if index.is_multiple_of(2) {
        gen_robinson_similarity(n, s)
    } else {
        gen_robinson_similarity_general(n, s)
    }
}

fn band_check(n: usize, instances: usize, seed: u64) -> CmdResult {
    if n < 2 {
        return Err(Failure("--n must be at least 2".into()));
    }
    if n > BAND_CHECK_CAP {
        return Err(Error::InstanceTooLarge {
            n,
            cap: BAND_CHECK_CAP,
        }
        .into());
    }
    for delta in 1..n {
        for index in 0..instances {
            let a = band_check_instance(n, seed, delta, index);
            if let Some(pi) = verify_theorem1(&a, delta)? {
                let text = format!(
                    "violation: delta = {delta}, permutation {}\nmatrix:\n{a}",
                    perm_text(&pi)
                );
                let value = json!({
                    "n": n,
                    "instances": instances,
                    "holds": false,
                    "violation": {
                        "delta": delta,
                        "permutation": one_based(&pi),
                        "matrix": matrix_json(&a),
                    },
                });
                return Ok(Outcome {
                    text,
                    json: value,
                    holds: false,
                });
            }
        }
    }
    let text = format!(
        "n = {n}: {instances} instances for each delta in 1..={}, no violations\n",
        n - 1
    );
    let value = json!({ "n": n, "instances": instances, "holds": true, "violation": null });
    Ok(Outcome::ok(text, value))
}
