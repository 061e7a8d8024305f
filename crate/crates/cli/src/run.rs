//! Command execution, independent of process exit and printing.

use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::Context;
use cubeterm_core::algebra::validate;
use cubeterm_core::decide::{
    bound_general, bound_idempotent_n, bound_quadratic_linear, check_cube_dim, check_edge_dim, check_nu, decide_cube,
    decide_nu, idempotent_bound_applies, minimal_cube_dimension, CubeVerdict, DecideOptions, NuVerdict,
};
use cubeterm_core::fixtures::{self, TightExampleParams};
use cubeterm_core::oracles::{clone_part, exhaustive_chipped_cube_search, scan_clone_for, CloneScan};
use cubeterm_core::{exhaustive_blocker_search, find_blocker, Budget, Error, FiniteAlgebra};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cli::{Cli, Command, GenCommand, OracleCommand};
use crate::json::{AlgebraJson, BlockerJson, ChippedCubeSpecJson, CommandResult, CubeDecisionJson, NuDecisionJson};

pub const BUDGET_ENV: &str = "CUBETERM_BUDGET_BYTES";

pub const EXIT_DECIDED: u8 = 0;
pub const EXIT_UNDECIDED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// What a command produced: the envelope, the exit code and a one-line
/// summary for `--pretty`.
#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub result: CommandResult,
    pub summary: String,
}

impl Outcome {
    pub fn render(&self, pretty: bool) -> String {
        if pretty {
            let body = serde_json::to_string_pretty(&self.result).expect("serializable");
            format!("{}\n{body}\n", self.summary)
        } else {
            format!("{}\n", serde_json::to_string(&self.result).expect("serializable"))
        }
    }
}

enum Failure {
    Input { message: String, violations: Vec<String> },
    Truncated(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(what) => Failure::Truncated(what.into()),
            Error::InvalidAlgebra(v) => Failure::Input {
                message: "invalid algebra".into(),
                violations: v.iter().map(ToString::to_string).collect(),
            },
            other => Failure::Input { message: other.to_string(), violations: Vec::new() },
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input { message: format!("{e:#}"), violations: Vec::new() }
    }
}

/// Payload, exit code and summary of a successful run.
struct Done {
    payload: Value,
    code: u8,
    summary: String,
}

fn done(payload: impl Serialize, code: u8, summary: impl Into<String>) -> Result<Done, Failure> {
    Ok(Done { payload: serde_json::to_value(payload).expect("serializable"), code, summary: summary.into() })
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::DecideCube { .. } => "decide-cube",
        Command::FindBlocker { .. } => "find-blocker",
        Command::CheckCubeDim { .. } => "check-cube-dim",
        Command::CheckEdgeDim { .. } => "check-edge-dim",
        Command::CheckNu { .. } => "check-nu",
        Command::DecideNu { .. } => "decide-nu",
        Command::MinCubeDim { .. } => "min-cube-dim",
        Command::Bounds { .. } => "bounds",
        Command::Gen(_) => "gen",
        Command::Oracle(OracleCommand::Blockers { .. }) => "oracle blockers",
        Command::Oracle(OracleCommand::ChippedCubes { .. }) => "oracle chipped-cubes",
        Command::Oracle(OracleCommand::Clone { .. }) => "oracle clone",
    }
}

fn input_file(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Validate { file }
        | Command::DecideCube { file, .. }
        | Command::FindBlocker { file }
        | Command::CheckCubeDim { file, .. }
        | Command::CheckEdgeDim { file, .. }
        | Command::CheckNu { file, .. }
        | Command::DecideNu { file, .. }
        | Command::MinCubeDim { file, .. }
        | Command::Bounds { file }
        | Command::Oracle(
            OracleCommand::Blockers { file }
            | OracleCommand::ChippedCubes { file, .. }
            | OracleCommand::Clone { file, .. },
        ) => Some(file),
        Command::Gen(_) => None,
    }
}

/// The budget from the environment and the timeout flag.
pub fn budget_from(env_bytes: Option<&str>, timeout_ms: Option<u64>) -> anyhow::Result<Budget> {
    let mut budget = Budget::default();
    if let Some(raw) = env_bytes {
        let bytes: usize =
            raw.trim().parse().with_context(|| format!("{BUDGET_ENV} must be a byte count, got {raw:?}"))?;
        budget = budget.with_max_bytes(bytes);
    }
    if let Some(ms) = timeout_ms {
        let deadline = Instant::now() + Duration::from_millis(ms);
        budget = budget.with_interrupt(move || Instant::now() >= deadline);
    }
    Ok(budget)
}

/// Parses an algebra file; violations come back as an input failure.
fn parse_algebra(bytes: &[u8]) -> Result<FiniteAlgebra, Failure> {
    let doc: AlgebraJson = serde_json::from_slice(bytes).context("malformed algebra JSON")?;
    let desc = (&doc).into();
    let violations = validate(&desc);
    if !violations.is_empty() {
        return Err(Failure::Input {
            message: "invalid algebra".into(),
            violations: violations.iter().map(ToString::to_string).collect(),
        });
    }
    Ok(FiniteAlgebra::from_description(&desc)?)
}

/// Runs `cli`, reading the budget override from the environment.
pub fn execute(cli: &Cli) -> Outcome {
    let env = std::env::var(BUDGET_ENV).ok();
    execute_with(cli, env.as_deref())
}

pub fn execute_with(cli: &Cli, env_bytes: Option<&str>) -> Outcome {
    let start = Instant::now();
    let command = command_name(&cli.command).to_string();
    let mut digest = None;
    let outcome = (|| {
        let bytes = match input_file(&cli.command) {
            Some(path) => {
                let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
                digest = Some(hex::encode(Sha256::digest(&bytes)));
                Some(bytes)
            }
            None => None,
        };
        let budget = budget_from(env_bytes, cli.timeout_ms)?;
        dispatch(&cli.command, bytes.as_deref(), budget)
    })();
    let (payload, code, summary) = match outcome {
        Ok(d) => (d.payload, d.code, d.summary),
        Err(Failure::Input { message, violations }) => {
            let summary = format!("error: {message}");
            (json!({ "error": message, "violations": violations }), EXIT_INPUT, summary)
        }
        Err(Failure::Truncated(reason)) => {
            let summary = format!("truncated: {reason}");
            (json!({ "truncated": true, "reason": reason }), EXIT_UNDECIDED, summary)
        }
    };
    let result =
        CommandResult { command, input_digest: digest, payload, elapsed_ms: start.elapsed().as_millis() as u64 };
    Outcome { code, result, summary }
}

fn dispatch(cmd: &Command, bytes: Option<&[u8]>, budget: Budget) -> Result<Done, Failure> {
    if let Command::Gen(args) = cmd {
        return generate(&args.what, args.output.as_deref());
    }
    let bytes = bytes.expect("file commands carry input");
    if let Command::Validate { .. } = cmd {
        return validate_file(bytes);
    }
    let alg = parse_algebra(bytes)?;
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    match cmd {
        Command::DecideCube { cap, force_general, .. } => {
            let opts = DecideOptions { cap: *cap, force_general: *force_general, budget, ..DecideOptions::default() };
            let decision = decide_cube(&alg, &opts)?;
            let code = if decision.verdict == CubeVerdict::Undecided { EXIT_UNDECIDED } else { EXIT_DECIDED };
            let json = CubeDecisionJson::from(&decision);
            let summary = format!("cube term: {} (dimension bound {})", json.verdict, json.dimension_bound);
            done(json, code, summary)
        }
        Command::FindBlocker { .. } => {
            let blocker = find_blocker(&alg)?.as_ref().map(BlockerJson::from);
            let summary = match &blocker {
                Some(b) => format!("blocker C={:?} D={:?}", b.c, b.d),
                None => "no blocker".into(),
            };
            done(blocker, EXIT_DECIDED, summary)
        }
        Command::CheckCubeDim { d, .. } => {
            let r = check_cube_dim(&alg, *d, &budget)?;
            done(json!({ "result": r }), EXIT_DECIDED, format!("cube term of dimension {d}: {}", yes_no(r)))
        }
        Command::CheckEdgeDim { d, .. } => {
            let r = check_edge_dim(&alg, *d, &budget)?;
            done(json!({ "result": r }), EXIT_DECIDED, format!("edge term of dimension {d}: {}", yes_no(r)))
        }
        Command::CheckNu { k, .. } => {
            let r = check_nu(&alg, *k, &budget)?;
            done(json!({ "result": r }), EXIT_DECIDED, format!("near unanimity term of arity {k}: {}", yes_no(r)))
        }
        Command::DecideNu { cap, .. } => {
            let opts = DecideOptions { cap: *cap, budget, ..DecideOptions::default() };
            let decision = decide_nu(&alg, &opts)?;
            let code = if decision.verdict == NuVerdict::Undecided { EXIT_UNDECIDED } else { EXIT_DECIDED };
            let json = NuDecisionJson::from(&decision);
            let summary = match json.arity {
                Some(k) => format!("near unanimity term: {} (arity {k})", json.verdict),
                None => format!("near unanimity term: {}", json.verdict),
            };
            done(json, code, summary)
        }
        Command::MinCubeDim { cap, .. } => min_cube_dim(&alg, *cap, budget),
        Command::Bounds { .. } => {
            let payload = json!({
                "idempotent": alg.is_idempotent(),
                "idempotent_n": bound_idempotent_n(&alg),
                "quadratic_linear": bound_quadratic_linear(&alg),
                "general": bound_general(&alg),
                "idempotent_bound_applies": idempotent_bound_applies(&alg),
            });
            let summary = format!(
                "N = {}, quadratic-linear = {}, general = {}",
                bound_idempotent_n(&alg),
                bound_quadratic_linear(&alg),
                bound_general(&alg)
            );
            done(payload, EXIT_DECIDED, summary)
        }
        Command::Oracle(oracle) => run_oracle(oracle, &alg, &budget),
        Command::Validate { .. } | Command::Gen(_) => unreachable!("handled above"),
    }
}

fn validate_file(bytes: &[u8]) -> Result<Done, Failure> {
    match parse_algebra(bytes) {
        Ok(alg) => {
            let payload = json!({
                "valid": true,
                "violations": Vec::<String>::new(),
                "size": alg.size(),
                "operations": alg.operations().len(),
                "idempotent": alg.is_idempotent(),
            });
            done(payload, EXIT_DECIDED, format!("valid algebra of size {}", alg.size()))
        }
        Err(e) => Err(e),
    }
}

fn min_cube_dim(alg: &FiniteAlgebra, cap: Option<usize>, budget: Budget) -> Result<Done, Failure> {
    if alg.size() == 1 {
        return done(json!({ "dimension": 1, "cap": cap }), EXIT_DECIDED, "minimal cube dimension 1");
    }
    let opts = DecideOptions { cap, budget: budget.clone(), ..DecideOptions::default() };
    let cube = decide_cube(alg, &opts)?;
    if cube.verdict == CubeVerdict::NoCubeTerm {
        return done(json!({ "dimension": null, "cap": cap }), EXIT_DECIDED, "no cube term");
    }
    let search_cap = match (cube.verdict, cap) {
        (CubeVerdict::HasCubeTerm, Some(c)) => c.min(cube.dimension_bound),
        (CubeVerdict::HasCubeTerm, None) => cube.dimension_bound,
        (_, c) => c.unwrap_or(cube.dimension_bound),
    }
    .max(2);
    match minimal_cube_dimension(alg, search_cap, &budget)? {
        Some(d) => done(json!({ "dimension": d, "cap": cap }), EXIT_DECIDED, format!("minimal cube dimension {d}")),
        None => done(
            json!({ "dimension": null, "cap": cap }),
            EXIT_UNDECIDED,
            format!("no cube term of dimension ≤ {search_cap}"),
        ),
    }
}

fn generate(what: &GenCommand, output: Option<&Path>) -> Result<Done, Failure> {
    let alg = match what {
        GenCommand::Fixture { name } => fixtures::fixture(name)?,
        GenCommand::Quasigroup { n } => fixtures::idempotent_quasigroup(*n)?,
        GenCommand::Tight { n, arities } => fixtures::tight_example(&TightExampleParams::new(*n, arities.clone())?)?,
    };
    let doc = AlgebraJson::from(alg.describe());
    if let Some(path) = output {
        let mut text = serde_json::to_string(&doc).expect("serializable");
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let summary = format!("algebra {} of size {}", doc.name.as_deref().unwrap_or("(unnamed)"), doc.size);
    done(doc, EXIT_DECIDED, summary)
}

fn run_oracle(oracle: &OracleCommand, alg: &FiniteAlgebra, budget: &Budget) -> Result<Done, Failure> {
    match oracle {
        OracleCommand::Blockers { .. } => {
            let blocker = exhaustive_blocker_search(alg)?.as_ref().map(BlockerJson::from);
            let summary = if blocker.is_some() { "blocker found" } else { "no blocker" };
            done(blocker, EXIT_DECIDED, summary)
        }
        OracleCommand::ChippedCubes { d, .. } => {
            let spec = exhaustive_chipped_cube_search(alg, *d, budget)?.as_ref().map(ChippedCubeSpecJson::from);
            let summary = if spec.is_some() { "compatible chipped cube found" } else { "no compatible chipped cube" };
            done(spec, EXIT_DECIDED, summary)
        }
        OracleCommand::Clone { k, .. } => {
            let (n, k) = (alg.size(), *k);
            let clone = clone_part(alg, k, budget)?;
            let nu = (k >= 3).then(|| scan_clone_for(CloneScan::Nu, &clone, n, k)).transpose()?;
            let maltsev = (k == 3).then(|| scan_clone_for(CloneScan::Maltsev, &clone, n, k)).transpose()?;
            let cube_dim = (1..16).find(|d| (1usize << d) - 1 == k);
            let cube = cube_dim.map(|d| scan_clone_for(CloneScan::Cube(d), &clone, n, k)).transpose()?;
            let payload = json!({
                "arity": k,
                "table_width": clone.arity(),
                "size": clone.len(),
                "near_unanimity": nu,
                "maltsev": maltsev,
                "cube_dimension": cube_dim,
                "cube": cube,
            });
            done(payload, EXIT_DECIDED, format!("{} term operations of arity {k}", clone.len()))
        }
    }
}
