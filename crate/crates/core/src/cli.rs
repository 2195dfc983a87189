//! Config-driven front end: one JSON config per run, a few overriding flags, JSON artifacts
//! with sorted keys written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::AlgebraContext;
use crate::classifier::classify;
use crate::error::Error;
use crate::families::{
    build, discussion_preset_in, discussion_presets, support_lattice, FamilySpec, PRESET_NAMES,
};
use crate::operator::{
    check_averaging, check_coefficient_relation, check_rb0, relation_coverage, CheckReport,
    MonomialOperator, OperatorTable, Relation, TableRow,
};
use crate::recurrences::{
    closed_single, closed_two_index, k_closed_additive, k_closed_shifted, verify_k_recurrence,
    verify_single, verify_two_index, KSeqAdditiveParams, KSeqShiftedParams, SingleRecParams,
    TwoIndexRecParams,
};

pub const DEFAULT_MAX_DEGREE: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Build,
    Verify,
    Classify,
    Recurrence,
    Lattice,
    Presets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckSelector {
    Rb0,
    Averaging,
    Relation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RecurrenceConfig {
    Single { params: SingleRecParams, upto: Option<u64> },
    TwoIndex { params: TwoIndexRecParams, upto: Option<u64> },
    KAdditive { params: KSeqAdditiveParams, upto: Option<u64> },
    KShifted { params: KSeqShiftedParams, upto: Option<u64> },
}

/// Contents of the JSON config file. Which fields are needed depends on the command;
/// relative paths are resolved against the config file's directory.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub spec: Option<FamilySpec>,
    #[serde(default)]
    pub spec_path: Option<PathBuf>,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub ctx: Option<AlgebraContext>,
    #[serde(default)]
    pub table_path: Option<PathBuf>,
    #[serde(default)]
    pub max_degree: Option<u32>,
    /// `build` only: extend the table far enough for an identity sweep up to this degree.
    #[serde(default)]
    pub verify_to: Option<u32>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub check: Option<CheckSelector>,
    #[serde(default)]
    pub relation: Option<Relation>,
    #[serde(default)]
    pub recurrence: Option<RecurrenceConfig>,
    #[serde(default)]
    pub x_max: Option<u32>,
    #[serde(default)]
    pub y_max: Option<u32>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub config_path: PathBuf,
    /// Overrides `max_degree` from the file.
    pub max_degree: Option<u32>,
    /// Overrides `output` from the file; without either, the artifact goes to stdout.
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("cannot parse {what}: {msg}")]
    Parse { what: String, msg: String },
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 4,
            CliError::Lib(Error::Coverage { .. } | Error::IndexCoverage { .. }) => 3,
            CliError::Lib(_) => 2,
        }
    }

    fn parse(what: impl Into<String>, msg: impl ToString) -> Self {
        CliError::Parse {
            what: what.into(),
            msg: msg.to_string(),
        }
    }

    fn io(path: &Path, msg: impl ToString) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            msg: msg.to_string(),
        }
    }
}

/// Exit code plus the diagnostic line for stderr, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub diagnostic: Option<String>,
}

/// Artifact of a command and whether it counts as a pass.
pub struct Artifact {
    pub value: Value,
    pub passed: bool,
}

pub fn execute(config: &RunConfig) -> Outcome {
    let result = match config.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run_and_write(config)),
            Err(e) => Err(CliError::parse("--jobs", e)),
        },
        None => run_and_write(config),
    };
    match result {
        Ok(true) => Outcome {
            exit_code: 0,
            diagnostic: None,
        },
        Ok(false) => Outcome {
            exit_code: 1,
            diagnostic: Some("verification failed; witnesses written".into()),
        },
        Err(e) => Outcome {
            exit_code: e.exit_code(),
            diagnostic: Some(e.to_string()),
        },
    }
}

fn run_and_write(config: &RunConfig) -> Result<bool, CliError> {
    let file = load_config(&config.config_path)?;
    let artifact = run(config.command, &file, config.max_degree, base_dir(&config.config_path))?;
    let text = render(&artifact.value);
    match config.out.clone().or_else(|| file.output.clone().map(|p| resolve(&config.config_path, &p))) {
        Some(path) => write_atomic(&path, &text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
        }
    }
    Ok(artifact.passed)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(path.display().to_string(), e))
}

fn base_dir(config_path: &Path) -> &Path {
    config_path.parent().unwrap_or(Path::new("."))
}

fn resolve(config_path: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base_dir(config_path).join(p)
    }
}

/// Write through a sibling temporary file and rename it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::io(path, "not a file path"))?
        .to_string_lossy();
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, text).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types always serialize")
}

/// Table file layout: `{"coverage_degree": d, "rows": [[n, m, "p/q", n', m'], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub coverage_degree: Option<u32>,
    pub rows: Vec<TableRow>,
}

impl TableFile {
    pub fn from_table(table: &OperatorTable) -> Self {
        TableFile {
            coverage_degree: table.coverage,
            rows: table.to_rows(),
        }
    }

    pub fn into_table(self) -> crate::Result<OperatorTable> {
        OperatorTable::from_rows(self.rows, self.coverage_degree)
    }
}

/// Run one command on a parsed config without touching the output location.
pub fn run(
    command: Command,
    file: &ConfigFile,
    max_degree: Option<u32>,
    base: &Path,
) -> Result<Artifact, CliError> {
    let d = max_degree.or(file.max_degree).unwrap_or(DEFAULT_MAX_DEGREE);
    let done = |value: Value| Ok(Artifact { value, passed: true });
    match command {
        Command::Build => {
            let spec = load_spec(file, base)?;
            let op = build(&spec)?;
            let degree = match file.verify_to {
                Some(v) => d.max(sweep_coverage(&op, spec.ctx, v)?),
                None => d,
            };
            done(to_value(&TableFile::from_table(&op.tabulate(spec.ctx, degree)?)))
        }
        Command::Verify => verify(file, base, d),
        Command::Classify => {
            let (table, ctx) = load_table_or_spec(file, base, d)?;
            let value = match classify(&table, ctx, d) {
                Ok(res) => {
                    let mut v = to_value(&res);
                    v["unclassifiable"] = Value::Null;
                    v
                }
                Err(Error::Unclassifiable(reason)) => json!({
                    "candidates": [],
                    "vacuous": false,
                    "unclassifiable": reason,
                }),
                Err(e) => return Err(e.into()),
            };
            done(value)
        }
        Command::Recurrence => {
            let rec = file
                .recurrence
                .as_ref()
                .ok_or_else(|| CliError::parse("config", "missing field `recurrence`"))?;
            let (closed, report) = run_recurrence(rec, d as u64)?;
            Ok(Artifact {
                passed: report.passed,
                value: json!({ "closed": closed, "report": to_value(&report) }),
            })
        }
        Command::Lattice => {
            let spec = load_spec(file, base)?;
            let points = support_lattice(&spec, file.x_max.unwrap_or(d), file.y_max.unwrap_or(d))?;
            let points: Vec<[u32; 2]> = points.iter().map(|z| [z.n, z.m]).collect();
            done(json!({ "points": points }))
        }
        Command::Presets => {
            let names: Vec<String> = match &file.names {
                Some(n) => n.clone(),
                None => PRESET_NAMES.iter().map(|s| s.to_string()).collect(),
            };
            let mut presets = serde_json::Map::new();
            for name in names {
                let spec = match file.ctx {
                    Some(ctx) => discussion_preset_in(&name, ctx)?,
                    None => discussion_presets(&name)?,
                };
                presets.insert(name, to_value(&spec));
            }
            done(json!({ "presets": presets }))
        }
    }
}

/// Table degree that a table-backed copy of `op` needs for an identity sweep up to `d`:
/// the sweep evaluates the operator on `T(a)·b` with `deg b ≤ d`.
pub fn sweep_coverage(op: &MonomialOperator, ctx: AlgebraContext, d: u32) -> crate::Result<u32> {
    let table = op.tabulate(ctx, d)?;
    let widest = table.rows().map(|(_, t)| t.mono.degree()).max().unwrap_or(0);
    Ok(d + widest)
}

fn load_spec(file: &ConfigFile, base: &Path) -> Result<FamilySpec, CliError> {
    let given = [file.spec.is_some(), file.spec_path.is_some(), file.preset.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(CliError::parse(
            "config",
            "exactly one of `spec`, `spec_path`, `preset` is required",
        ));
    }
    if let Some(spec) = &file.spec {
        return Ok(spec.clone());
    }
    if let Some(name) = &file.preset {
        return Ok(match file.ctx {
            Some(ctx) => discussion_preset_in(name, ctx)?,
            None => discussion_presets(name)?,
        });
    }
    let path = base.join(file.spec_path.as_ref().unwrap());
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(path.display().to_string(), e))
}

fn load_table(path: &Path) -> Result<OperatorTable, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: TableFile =
        serde_json::from_str(&text).map_err(|e| CliError::parse(path.display().to_string(), e))?;
    file.into_table()
        .map_err(|e| CliError::parse(path.display().to_string(), e))
}

/// A table from `table_path` (context from `ctx`) or the tabulated spec.
fn load_table_or_spec(
    file: &ConfigFile,
    base: &Path,
    d: u32,
) -> Result<(OperatorTable, AlgebraContext), CliError> {
    match &file.table_path {
        Some(p) => {
            let ctx = file
                .ctx
                .ok_or_else(|| CliError::parse("config", "`ctx` is required with `table_path`"))?;
            Ok((load_table(&base.join(p))?, ctx))
        }
        None => {
            let spec = load_spec(file, base)?;
            Ok((build(&spec)?.tabulate(spec.ctx, d)?, spec.ctx))
        }
    }
}

fn verify(file: &ConfigFile, base: &Path, d: u32) -> Result<Artifact, CliError> {
    let check = file
        .check
        .ok_or_else(|| CliError::parse("config", "missing field `check`"))?;
    let report = if check == CheckSelector::Relation {
        let relation = file
            .relation
            .ok_or_else(|| CliError::parse("config", "`relation` is required for check = relation"))?;
        let need = relation_coverage(&relation, d);
        let (table, ctx) = load_table_or_spec(file, base, need)?;
        check_coefficient_relation(&table.coefficients(), &relation, ctx, d)?
    } else {
        let (op, ctx) = match &file.table_path {
            Some(_) => {
                let (table, ctx) = load_table_or_spec(file, base, d)?;
                (MonomialOperator::from_table(table), ctx)
            }
            None => {
                let spec = load_spec(file, base)?;
                (build(&spec)?, spec.ctx)
            }
        };
        match check {
            CheckSelector::Rb0 => check_rb0(&op, ctx, d)?,
            _ => check_averaging(&op, ctx, d)?,
        }
    };
    Ok(Artifact {
        passed: report.passed,
        value: to_value(&report),
    })
}

fn run_recurrence(rec: &RecurrenceConfig, default_upto: u64) -> Result<(Value, CheckReport), CliError> {
    Ok(match rec {
        RecurrenceConfig::Single { params, upto } => {
            let seq = closed_single(params, upto.unwrap_or(default_upto))?;
            let report = verify_single(&seq, params.d, params.tau);
            (to_value(&seq), report)
        }
        RecurrenceConfig::TwoIndex { params, upto } => {
            let upto = upto.unwrap_or(default_upto);
            let table = closed_two_index(params, upto)?;
            let report = verify_two_index(&table, &params.d_seq, &params.tau_seq, upto)?;
            (to_value(&table), report)
        }
        RecurrenceConfig::KAdditive { params, upto } => {
            let upto = upto.unwrap_or(default_upto);
            let sol = k_closed_additive(params, upto)?;
            let report = verify_k_recurrence(&sol.k, &sol.xi, params.p, params.delta, 0, upto)?;
            (to_value(&sol), report)
        }
        RecurrenceConfig::KShifted { params, upto } => {
            let upto = upto.unwrap_or(default_upto);
            let sol = k_closed_shifted(params, upto)?;
            let report =
                verify_k_recurrence(&sol.k, &sol.xi, params.p, params.delta, params.r, upto)?;
            (to_value(&sol), report)
        }
    })
}
