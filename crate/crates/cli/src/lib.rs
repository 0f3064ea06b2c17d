//! Command implementations for `weinstein-calc`.

pub mod report;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;
use weinstein_core::abelian::FgAbelianGroup;
use weinstein_core::grothendieck::{c0_propagate, CocoreWord, Side};
use weinstein_core::model::{load_and_validate, PresentationModel};
use weinstein_core::moves::{Move, MoveError, TrackedState};
use weinstein_core::scenarios::{build_scenario, GraphLoop, ScenarioSpec};

use crate::report::{build_report, InvariantReport, ReportOptions};

pub const MAX_DIM_VAR: &str = "WEINSTEIN_CALC_MAX_DIM";
pub const DEFAULT_MAX_DIM: usize = 10_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("illegal move at step {step}: {message}")]
    IllegalMove { step: usize, message: String },
    #[error("internal invariant violation at step {step}: {message}")]
    Internal { step: usize, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) | CliError::Schema(_) => 2,
            CliError::Semantic(_) => 3,
            CliError::IllegalMove { .. } => 4,
            CliError::Internal { .. } => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "weinstein-calc", version, about = "Invariants and move scripts for Weinstein handle presentations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a presentation file against the schema and its references.
    Validate { model: PathBuf },
    /// Report H^n, the K0 bound, relations, and optional class / generation queries.
    Invariants {
        model: PathBuf,
        /// Use the local-system (twisted) differential for the K0 bound.
        #[arg(long)]
        twisted: bool,
        /// Evaluate the class of a co-core word such as "+h1+h2-h3".
        #[arg(long, value_name = "WORD")]
        class: Option<String>,
        /// Decide whether the given comma-separated words generate.
        #[arg(long, value_name = "WORD[,WORD...]")]
        thomason: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run a move script, printing co-core words after every step.
    Move {
        model: PathBuf,
        script: PathBuf,
        /// Where to write the journal (default: <script>.journal.json).
        #[arg(long)]
        journal: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Emit a generated presentation as JSON.
    Scenario {
        kind: ScenarioKind,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Loops of the base for cotangent-graph: comma-separated `r` (orientation-reversing)
        /// or `p` (preserving), optionally suffixed `:twisted` / `:untwisted` to override the
        /// fiber-induced local system.
        #[arg(long, default_value = "r")]
        loops: String,
        /// Write the model here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the move script (required for exotic-sphere-script).
        #[arg(long)]
        script_out: Option<PathBuf>,
    },
    /// Degree rule for C0-close Legendrians in the ball.
    C0 {
        /// Which side's K0 is known.
        #[arg(long)]
        side: SideArg,
        /// The known K0, e.g. "0", "Z", "Z/2+Z".
        #[arg(long)]
        group: String,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScenarioKind {
    CotangentSphere,
    CotangentGraph,
    RationalBall,
    ExoticSphereScript,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Source,
    Target,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn max_dim() -> usize {
    std::env::var(MAX_DIM_VAR)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

fn check_size(m: &PresentationModel) -> Result<(), CliError> {
    let entries = m.n_handles().len() * m.nm1_handles().len();
    let cap = max_dim();
    if entries > cap {
        return Err(CliError::Semantic(format!(
            "differential has {entries} entries, above the {MAX_DIM_VAR} cap of {cap}"
        )));
    }
    Ok(())
}

pub fn load_model(path: &Path) -> Result<PresentationModel, CliError> {
    let m = load_and_validate(&read(path)?).map_err(|e| {
        if e.is_schema() {
            CliError::Schema(e.to_string())
        } else {
            CliError::Semantic(e.to_string())
        }
    })?;
    check_size(&m)?;
    Ok(m)
}

fn parse_word(s: &str) -> Result<CocoreWord, CliError> {
    s.parse().map_err(|e: weinstein_core::grothendieck::GrothendieckError| CliError::Semantic(e.to_string()))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Parses "0", "Z", "Z/k", and sums of those joined by `+` or `⊕`.
pub fn parse_group(s: &str) -> Result<FgAbelianGroup, CliError> {
    let bad = || CliError::Usage(format!("cannot parse group '{s}' (expected e.g. 0, Z, Z/3, Z/2+Z)"));
    let mut factors = Vec::new();
    for part in s.split(['+', '⊕']).map(str::trim) {
        match part {
            "0" => {}
            "Z" => factors.push(BigInt::from(0)),
            p => {
                let k: BigInt = p.strip_prefix("Z/").ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
                if k < BigInt::from(1) {
                    return Err(bad());
                }
                factors.push(k);
            }
        }
    }
    Ok(FgAbelianGroup::from_cyclic_factors(&factors))
}

fn parse_loops(s: &str) -> Result<Vec<GraphLoop>, CliError> {
    let bad = |t: &str| CliError::Usage(format!("cannot parse loop '{t}' (expected r, p, r:untwisted, p:twisted)"));
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(str::trim)
        .map(|t| {
            let (kind, twist) = t.split_once(':').map_or((t, None), |(a, b)| (a, Some(b)));
            let reversing = match kind {
                "r" => true,
                "p" => false,
                _ => return Err(bad(t)),
            };
            let twisted = match twist {
                None => reversing,
                Some("twisted") => true,
                Some("untwisted") => false,
                Some(_) => return Err(bad(t)),
            };
            Ok(GraphLoop { reversing, twisted })
        })
        .collect()
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match cli.command {
        Command::Validate { model } => {
            let m = load_model(&model)?;
            format!(
                "ok: {} (n = {}, {} n-handles, {} (n-1)-handles)\n",
                m.name(),
                m.half_dim(),
                m.n_handles().len(),
                m.nm1_handles().len()
            )
        }
        Command::Invariants { model, twisted, class, thomason, json } => {
            let m = load_model(&model)?;
            let opts = ReportOptions {
                twisted,
                class: class.as_deref().map(parse_word).transpose()?,
                thomason: thomason
                    .as_deref()
                    .map(|s| s.split(',').map(parse_word).collect::<Result<Vec<_>, _>>())
                    .transpose()?,
            };
            let report = build_report(&m, &opts)?;
            if json {
                to_json(&report)
            } else {
                report.render_text()
            }
        }
        Command::Move { model, script, journal, json } => {
            let m = load_model(&model)?;
            let moves = load_script(&script)?;
            let journal_path = journal.unwrap_or_else(|| default_journal_path(&script));
            cmd_move(m, &moves, &journal_path, json)?
        }
        Command::Scenario { kind, s, k, loops, out: model_out, script_out } => {
            let spec = match kind {
                ScenarioKind::CotangentSphere => ScenarioSpec::CotangentSphere { s },
                ScenarioKind::CotangentGraph => ScenarioSpec::CotangentGraph { loops: parse_loops(&loops)? },
                ScenarioKind::RationalBall => ScenarioSpec::RationalBall { k },
                ScenarioKind::ExoticSphereScript => ScenarioSpec::ExoticSphereScript { s },
            };
            let sc = build_scenario(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
            if let Some(script) = &sc.script {
                let path = script_out
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("exotic-sphere-script needs --script-out".into()))?;
                write_file(path, &to_json(script))?;
            }
            let model_json = sc.model.to_json() + "\n";
            match model_out {
                Some(p) => {
                    write_file(&p, &model_json)?;
                    String::new()
                }
                None => model_json,
            }
        }
        Command::C0 { side, group, degree, json } => {
            let g = parse_group(&group)?;
            let side = match side {
                SideArg::Source => Side::Source,
                SideArg::Target => Side::Target,
            };
            let r = c0_propagate(&g, side, degree);
            if json {
                to_json(&r)
            } else {
                let verdict = match r.conclusion {
                    weinstein_core::grothendieck::C0Conclusion::TargetTrivial => "target K0 = 0",
                    weinstein_core::grothendieck::C0Conclusion::SourceInfiniteCyclic => "source K0 = Z",
                    weinstein_core::grothendieck::C0Conclusion::NoConclusion => "no conclusion",
                };
                let side_name = match side {
                    Side::Source => "source",
                    Side::Target => "target",
                };
                format!(
                    "{side_name} K0 = {}, degree {degree}: {verdict} ({})\nassumes both relative H^n are Z\n",
                    r.known_group, r.explanation
                )
            }
        }
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}

pub fn default_journal_path(script: &Path) -> PathBuf {
    let mut name = script.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".journal.json");
    script.with_file_name(name)
}

pub fn load_script(path: &Path) -> Result<Vec<Move>, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct StepRecord {
    step: usize,
    #[serde(rename = "move")]
    mv: Move,
    warnings: Vec<String>,
    cocores: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct CocoreRecord {
    word: String,
    essential: String,
    class: String,
}

#[derive(Serialize)]
struct MoveOutput {
    steps: Vec<StepRecord>,
    cocores: BTreeMap<String, CocoreRecord>,
    report: InvariantReport,
}

fn cmd_move(m: PresentationModel, script: &[Move], journal: &Path, json: bool) -> Result<String, CliError> {
    let mut state = TrackedState::new(m);
    let mut steps = Vec::new();
    for (step, mv) in script.iter().enumerate() {
        let warnings = state
            .apply(mv)
            .map_err(|e| CliError::IllegalMove { step, message: e.to_string() })?;
        state.verify().map_err(|e| match e {
            MoveError::InvariantViolation(message) => CliError::Internal { step, message },
            other => CliError::Internal { step, message: other.to_string() },
        })?;
        check_size(state.presentation())?;
        steps.push(StepRecord {
            step,
            mv: mv.clone(),
            warnings,
            cocores: state.cocores().iter().map(|(k, w)| (k.to_string(), w.to_string())).collect(),
        });
    }
    write_file(journal, &to_json(&state.journal()))?;

    let reference = &state.reference().group;
    let cocores: BTreeMap<String, CocoreRecord> = state
        .cocores()
        .iter()
        .map(|(k, w)| {
            let class = reference.format_element(&state.class_of(w)).expect("same ambient");
            (
                k.to_string(),
                CocoreRecord { word: w.to_string(), essential: state.essential_word(w).to_string(), class },
            )
        })
        .collect();
    let report = build_report(state.presentation(), &ReportOptions::default())?;

    if json {
        return Ok(to_json(&MoveOutput { steps, cocores, report }));
    }
    let mut out = String::new();
    for s in &steps {
        out.push_str(&format!("step {}: {}\n", s.step, s.mv));
        for w in &s.warnings {
            out.push_str(&format!("  warning: {w}\n"));
        }
        let words: Vec<String> = s.cocores.iter().map(|(k, w)| format!("{k} = {w}")).collect();
        out.push_str(&format!("  co-cores: {}\n", words.join("; ")));
    }
    out.push_str("final co-cores:\n");
    for (k, c) in &cocores {
        out.push_str(&format!("  {k}: {} (class {}; tracked word {})\n", c.essential, c.class, c.word));
    }
    out.push_str(&report.render_text());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_parse() {
        assert!(parse_group("0").unwrap().is_trivial());
        assert!(parse_group("Z").unwrap().is_infinite_cyclic());
        assert_eq!(parse_group("Z/2 ⊕ Z").unwrap().to_string(), "Z/2 ⊕ Z");
        assert_eq!(parse_group("Z/2+Z/3").unwrap().to_string(), "Z/6");
        assert!(parse_group("Z/0").is_err());
        assert!(parse_group("Q").is_err());
    }

    #[test]
    fn loops_parse() {
        let l = parse_loops("r, p, p:twisted").unwrap();
        assert_eq!(
            l,
            vec![
                GraphLoop { reversing: true, twisted: true },
                GraphLoop { reversing: false, twisted: false },
                GraphLoop { reversing: false, twisted: true },
            ]
        );
        assert!(parse_loops("").unwrap().is_empty());
        assert!(parse_loops("x").is_err());
        assert!(parse_loops("r:sideways").is_err());
    }

    #[test]
    fn journal_path_sits_next_to_script() {
        assert_eq!(default_journal_path(Path::new("dir/s.json")), PathBuf::from("dir/s.json.journal.json"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Schema(String::new()).exit_code(), 2);
        assert_eq!(CliError::Semantic(String::new()).exit_code(), 3);
        assert_eq!(CliError::IllegalMove { step: 0, message: String::new() }.exit_code(), 4);
        assert_eq!(CliError::Internal { step: 0, message: String::new() }.exit_code(), 5);
    }
}
