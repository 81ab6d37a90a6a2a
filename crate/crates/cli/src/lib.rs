//! Command-line front end for `pfaff-core`: JSON in, JSON reports out.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pfaff_core::classify::{catalog, classify, fingerprint, verify_table1, Label};
use pfaff_core::closure::{in_closure_with, CubicForm};
use pfaff_core::exactalg::{frac, Polynomial, Rational};
use pfaff_core::jets::{jet_pfaffian, JetMatrix};
use pfaff_core::pfaffcalc::SkewLinMatrix;
use pfaff_core::report::{Check, Status};
use pfaff_core::strata::{case3_blocks, case3_family, verify_family, Arrow};
use pfaff_core::tangent::{cone_deg2, orbit_codim, parametric_2jet_check, printed_cone, TangentSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const DEFAULT_SEED: u64 = 20_240_611;

const TABLES: &str = include_str!("../fixtures/tables.json");

#[derive(Debug, Parser)]
#[command(name = "pfaff", version, about = "Exact checks on 6x6 skew matrices of linear forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON input file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[arg(long, global = true, default_value_t = 2)]
    pub jet_order: usize,
    /// Bound on the number of colon steps when saturating.
    #[arg(long, global = true, default_value_t = pfaff_core::pfaffcalc::DEFAULT_COLON_CAP)]
    pub colon_cap: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Type and stability of a matrix (all catalog types without --input).
    Classify,
    /// Pfaffian and sub-Pfaffians of a matrix.
    Pfaffian,
    /// Codimension of the tangent space (catalog types without --input).
    #[command(alias = "tangent-codim")]
    Tangent,
    /// Degree-2 part of the tangent cone (catalog types without --input).
    Cone,
    /// Closure membership for {"matrix": ..., "cubic": ...}.
    Closure,
    /// Normal form checks and tangent data for all six types.
    VerifyTables,
    /// Degeneration families and the block-conjugation family.
    VerifyStrata,
    /// Pfaffian of a jet matrix, or the parametric 2-jet check with --type.
    Jets {
        #[arg(long = "type", value_enum)]
        kind: Option<JetType>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum JetType {
    C,
    E,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Pfaffian => "pfaffian",
            Command::Tangent => "tangent",
            Command::Cone => "cone",
            Command::Closure => "closure",
            Command::VerifyTables => "verify-tables",
            Command::VerifyStrata => "verify-strata",
            Command::Jets { .. } => "jets",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// serde_json reports the line and column.
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pfaff_core::Error),
}

/// One row of a report: a check on one item (a type, an arrow, ...).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub key: String,
    pub check: String,
    pub status: Status,
    pub detail: String,
}

impl Row {
    fn from_check(key: impl Into<String>, c: Check) -> Row {
        Row {
            key: key.into(),
            check: c.name.to_string(),
            status: c.status,
            detail: c.detail,
        }
    }

    fn new(key: impl Into<String>, check: &str, passed: bool, detail: impl Into<String>) -> Row {
        Row {
            key: key.into(),
            check: check.to_string(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Row>,
    pub result: Value,
    /// Wall-clock seconds per stage; kept out of the JSON so reports stay
    /// reproducible.
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{}  seed {}  {verdict}", self.command, self.seed);
        if let Some(d) = &self.input_sha256 {
            let _ = writeln!(out, "input sha256 {d}");
        }
        render_value(&mut out, &self.result);
        if !self.checks.is_empty() {
            let kw = self.checks.iter().map(|r| r.key.len()).max().unwrap_or(0);
            let cw = self.checks.iter().map(|r| r.check.len()).max().unwrap_or(0);
            out.push('\n');
            for r in &self.checks {
                let status = match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skip",
                };
                let _ = writeln!(out, "{:kw$}  {:cw$}  {status}  {}", r.key, r.check, r.detail);
            }
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn row_cells(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar(v)))
            .collect::<Vec<_>>()
            .join("  "),
        other => scalar(other),
    }
}

fn render_value(out: &mut String, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Array(items) => {
                        let _ = writeln!(out, "{k}:");
                        for i in items {
                            let _ = writeln!(out, "  {}", row_cells(i));
                        }
                    }
                    Value::Object(_) => {
                        let _ = writeln!(out, "{k}: {v}");
                    }
                    _ => {
                        let _ = writeln!(out, "{k}: {}", scalar(v));
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                let _ = writeln!(out, "{}", row_cells(item));
            }
        }
        other => {
            let _ = writeln!(out, "{}", scalar(other));
        }
    }
}

struct Input {
    path: PathBuf,
    bytes: Vec<u8>,
}

impl Input {
    fn read(path: &Path) -> Result<Input, CliError> {
        let bytes = std::fs::read(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Input {
            path: path.to_path_buf(),
            bytes,
        })
    }

    fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }

    fn parse<T: for<'de> Deserialize<'de>>(&self) -> Result<T, CliError> {
        serde_json::from_slice(&self.bytes).map_err(|source| CliError::Json {
            path: self.path.clone(),
            source,
        })
    }
}

#[derive(Deserialize)]
struct ClosureInput {
    matrix: SkewLinMatrix,
    cubic: CubicForm,
}

/// Random nonzero parameter value for the families, fixed by the seed.
pub fn sample_parameter(seed: u64) -> Rational {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n: i64 = r.gen_range(-9..=9);
        if n != 0 {
            return frac(n, r.gen_range(1..=5));
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    input: Option<Input>,
    timings: Vec<(String, f64)>,
}

impl Ctx<'_> {
    fn timed<T>(&mut self, stage: impl Into<String>, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push((stage.into(), start.elapsed().as_secs_f64()));
        out
    }

    fn require_input(&self) -> Result<&Input, CliError> {
        self.input
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("`{}` needs --input FILE", self.cli.command.name())))
    }

    /// The input matrix, or the six catalog matrices.
    fn matrices(&self) -> Result<Vec<(String, SkewLinMatrix, Option<Label>)>, CliError> {
        match &self.input {
            Some(inp) => Ok(vec![("input".to_string(), inp.parse()?, None)]),
            None => Ok(Label::ALL
                .iter()
                .map(|&l| (l.to_string(), catalog(l).m, Some(l)))
                .collect()),
        }
    }
}

fn polys(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(Polynomial::to_string).collect()
}

fn tables() -> Value {
    serde_json::from_str(TABLES).expect("bundled fixture parses")
}

fn frozen(table: &Value, key: &str, label: Label) -> Option<usize> {
    table[key][label.as_str()].as_u64().map(|v| v as usize)
}

pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let input = cli.input.as_deref().map(Input::read).transpose()?;
    let input_sha256 = input.as_ref().map(Input::digest);
    let mut ctx = Ctx {
        cli,
        input,
        timings: Vec::new(),
    };
    let (result, checks) = match &cli.command {
        Command::Classify => run_classify(&mut ctx)?,
        Command::Pfaffian => run_pfaffian(&mut ctx)?,
        Command::Tangent => run_tangent(&mut ctx)?,
        Command::Cone => run_cone(&mut ctx)?,
        Command::Closure => run_closure(&mut ctx)?,
        Command::VerifyTables => run_verify_tables(&mut ctx)?,
        Command::VerifyStrata => run_verify_strata(&mut ctx)?,
        Command::Jets { kind } => run_jets(&mut ctx, *kind)?,
    };
    let passed = !checks.iter().any(|r: &Row| r.status == Status::Fail);
    Ok(RunReport {
        command: cli.command.name().to_string(),
        seed: cli.seed,
        input_sha256,
        passed,
        checks,
        result,
        timings: ctx.timings,
    })
}

type Output = Result<(Value, Vec<Row>), CliError>;

fn run_classify(ctx: &mut Ctx) -> Output {
    let mut out = Vec::new();
    let mut rows = Vec::new();
    for (key, m, expect) in ctx.matrices()? {
        let t = ctx.timed(format!("classify {key}"), || classify(&m))?;
        let fp = fingerprint(&m)?;
        if let Some(l) = expect {
            rows.push(Row::new(&key, "catalog type", t.label == l, format!("{}", t.label)));
        }
        out.push(json!({"key": key, "type": t.label, "stability": t.stability, "fingerprint": fp.to_string()}));
    }
    if ctx.input.is_some() {
        let only = out.pop().expect("one matrix");
        return Ok((
            json!({"type": only["type"], "stability": only["stability"], "fingerprint": only["fingerprint"]}),
            rows,
        ));
    }
    Ok((Value::Array(out), rows))
}

fn run_pfaffian(ctx: &mut Ctx) -> Output {
    let m: SkewLinMatrix = ctx.require_input()?.parse()?;
    let pf = m.pfaffian()?;
    let sub: serde_json::Map<String, Value> = m
        .sub_pfaffians()
        .iter()
        .enumerate()
        .map(|(p, q)| {
            let (a, b) = pfaff_core::exactalg::pair_of(p);
            (format!("{a},{b}"), Value::String(q.to_string()))
        })
        .collect();
    Ok((json!({"pfaffian": pf.to_string(), "sub_pfaffians": sub}), Vec::new()))
}

fn run_tangent(ctx: &mut Ctx) -> Output {
    let table = tables();
    let mut out = Vec::new();
    let mut rows = Vec::new();
    for (key, m, label) in ctx.matrices()? {
        let codim = ctx.timed(format!("tangent {key}"), || TangentSystem::new(&m))?.codim();
        if let Some(want) = label.and_then(|l| frozen(&table, "tangent_codim", l)) {
            rows.push(Row::new(
                &key,
                "tangent codim",
                codim == want,
                format!("{codim}, expected {want}"),
            ));
        }
        out.push(json!({"key": key, "codim": codim}));
    }
    Ok((Value::Array(out), rows))
}

fn run_cone(ctx: &mut Ctx) -> Output {
    let table = tables();
    let mut out = Vec::new();
    let mut rows = Vec::new();
    for (key, m, label) in ctx.matrices()? {
        let cone = ctx.timed(format!("cone {key}"), || cone_deg2(&m))?;
        if let Some(l) = label {
            let printed = printed_cone(l).quadrics()?;
            let same = cone.equals_span(&printed)?;
            rows.push(Row::new(&key, "cone quadrics", same, format!("dim {}", cone.dim())));
            if let Some(want) = frozen(&table, "cone_dim", l) {
                rows.push(Row::new(
                    &key,
                    "cone dim",
                    cone.dim() == want,
                    format!("{}, expected {want}", cone.dim()),
                ));
            }
        }
        out.push(json!({"key": key, "dim": cone.dim(), "quadrics": polys(&cone.piece.polynomials())}));
    }
    Ok((Value::Array(out), rows))
}

fn run_closure(ctx: &mut Ctx) -> Output {
    let inp: ClosureInput = ctx.require_input()?.parse()?;
    let cap = ctx.cli.colon_cap;
    let verdict = ctx.timed("closure", || in_closure_with(&inp.matrix, &inp.cubic, cap))?;
    Ok((serde_json::to_value(&verdict).expect("verdicts serialize"), Vec::new()))
}

fn run_verify_tables(ctx: &mut Ctx) -> Output {
    let table = tables();
    let start = Instant::now();
    let per_type: Vec<Result<(Value, Vec<Row>), CliError>> = Label::ALL
        .par_iter()
        .map(|&l| {
            let key = l.to_string();
            let m = catalog(l).m;
            let mut rows: Vec<Row> = verify_table1(l)
                .checks
                .into_iter()
                .map(|c| Row::from_check(&key, c))
                .collect();
            let codim = TangentSystem::new(&m)?.codim();
            let want = frozen(&table, "tangent_codim", l).expect("fixture has every type");
            rows.push(Row::new(
                &key,
                "tangent codim",
                codim == want,
                format!("{codim}, expected {want}"),
            ));
            let cone = cone_deg2(&m)?;
            let same = cone.equals_span(&printed_cone(l).quadrics()?)?;
            rows.push(Row::new(&key, "cone quadrics", same, format!("dim {}", cone.dim())));
            let mut row = json!({"type": l, "tangent_codim": codim, "cone_dim": cone.dim()});
            if let Some(want) = frozen(&table, "orbit_codim", l) {
                let got = orbit_codim(&m);
                rows.push(Row::new(
                    &key,
                    "orbit codim",
                    got == want,
                    format!("{got}, expected {want}"),
                ));
                row["orbit_codim"] = json!(got);
            }
            Ok((row, rows))
        })
        .collect();
    ctx.timings
        .push(("verify-tables".into(), start.elapsed().as_secs_f64()));
    let mut out = Vec::new();
    let mut rows = Vec::new();
    for r in per_type {
        let (v, mut rs) = r?;
        out.push(v);
        rows.append(&mut rs);
    }
    Ok((Value::Array(out), rows))
}

fn run_verify_strata(ctx: &mut Ctx) -> Output {
    let t0 = sample_parameter(ctx.cli.seed);
    let order = ctx.cli.jet_order;
    let start = Instant::now();
    let reports: Vec<_> = Arrow::STRATIFICATION
        .par_iter()
        .map(|&a| verify_family(a, &t0))
        .collect();
    ctx.timings.push(("families".into(), start.elapsed().as_secs_f64()));
    let mut out = Vec::new();
    let mut rows = Vec::new();
    for r in reports {
        out.push(json!({
            "arrow": r.arrow,
            "passed": r.passed(),
            "generic_type": r.generic_type,
            "special_type": r.special_type,
        }));
        let key = r.arrow.to_string();
        rows.extend(r.checks.into_iter().map(|c| Row::from_check(&key, c)));
    }
    let (a, b) = case3_blocks();
    let c3 = ctx.timed("case3", || case3_family(&a, &b, order, &t0))?;
    out.push(json!({
        "arrow": Arrow::Case3,
        "passed": c3.passed(),
        "generic_type": c3.generic_type,
        "special_type": Label::E,
    }));
    rows.extend(c3.checks.into_iter().map(|c| Row::from_check("case3", c)));
    Ok((json!({"t0": t0.to_string(), "arrows": out}), rows))
}

fn run_jets(ctx: &mut Ctx, kind: Option<JetType>) -> Output {
    if ctx.input.is_some() {
        if kind.is_some() {
            return Err(CliError::Usage("`jets` takes either --input or --type".into()));
        }
        let j: JetMatrix = ctx.require_input()?.parse()?;
        let j = j.with_order(ctx.cli.jet_order);
        let pf = jet_pfaffian(&j)?;
        let coeffs: Vec<String> = (0..=j.order()).map(|k| pf.coeff(k).to_string()).collect();
        let first = pf
            .first_nonzero()
            .map(|(k, p)| json!({"power": k, "coefficient": p.to_string()}));
        return Ok((
            json!({"order": j.order(), "pfaffian": coeffs, "first_nonzero": first}),
            Vec::new(),
        ));
    }
    let labels = match kind {
        Some(JetType::C) => vec![Label::C],
        Some(JetType::E) => vec![Label::E],
        None => vec![Label::C, Label::E],
    };
    let cap = ctx.cli.colon_cap;
    let mut out = Vec::new();
    let mut rows = Vec::new();
    for l in labels {
        let r = ctx.timed(format!("2-jet {l}"), || parametric_2jet_check(&catalog(l).m, cap))?;
        rows.push(Row::new(
            l.to_string(),
            "2-jet residues",
            r.passed(),
            format!(
                "{} nonzero residues, saturated dim {}",
                r.nonzero_residues, r.saturated_dim
            ),
        ));
        out.push(serde_json::to_value(&r).expect("reports serialize"));
    }
    Ok((Value::Array(out), rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_check_exits_1() {
        let report = RunReport {
            command: "tangent".into(),
            seed: 1,
            input_sha256: None,
            passed: false,
            checks: vec![Row::new("a", "tangent codim", false, "29, expected 28")],
            result: Value::Null,
            timings: Vec::new(),
        };
        assert_eq!(report.exit_code(), 1);
        assert!(report.to_table().contains("FAIL"));
    }

    #[test]
    fn parameter_is_nonzero_and_seeded() {
        assert_eq!(sample_parameter(3), sample_parameter(3));
        assert!((0..50).all(|s| sample_parameter(s) != Rational::from_integer(0.into())));
    }
}
