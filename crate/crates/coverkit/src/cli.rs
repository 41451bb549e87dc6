//! Instance files, subcommand dispatch, reports, and machine-readable traces.
//!
//! Instances use a line-oriented keyword format, `#` starting a comment:
//!
//! ```text
//! vas                     affine
//! dim 2                   dim 2
//! action -2 1             trans
//! target 0 5              a 0 0
//! source 10 0             A 1 1 ; 2 0
//!                         b 0 0
//!                         target 0 1
//! ```
//!
//! `source`, `control-step`, and `control-n0` lines are optional. Matrix rows
//! are separated by `;`. All integers are unbounded decimals.
//!
//! Chain traces are emitted as JSON lines, one record per step, with ideals
//! and basis vectors as arrays of decimal strings where `"w"` stands for
//! omega:
//!
//! ```text
//! {"step":1,"downset":[["1","4"],["w","3"]],"basis":[["0","5"],["2","4"]],
//!  "downset_norm":"4","ideal_count":2,"basis_size":2,"proper":[["w","4"]],
//!  "controlled":true,"omega_monotone":true,"strongly_monotone":true,
//!  "thin_ok":true,"nearly_thin_ok":true,"elapsed_us":42}
//! ```
//!
//! CSV summaries carry `step, ideal_count, downset_norm, proper_count,
//! thin_ok, monotone_ok` per step, where `monotone_ok` is the per-step strong
//! monotonicity flag.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{BoundTable, Control};
use crate::engine::{
    step_flags, BackwardEngine, ChainRecord, EngineConfig, EngineError, StepFlags, Verdict, View,
};
use crate::ideal::{Nat, NatVec, OmegaNat, OmegaVec};
use crate::models::{AffineNet, AffineTransition, Int, Model, Vas};
use crate::oracle::{bounded_forward_covers, karp_miller_covers, CoverSearch};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_COVERABLE: i32 = 2;
pub const EXIT_NOT_COVERABLE: i32 = 3;
pub const EXIT_RESOURCE_CAP: i32 = 4;

/// A parsed coverability instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub model: Model,
    pub target: NatVec,
    pub source: Option<NatVec>,
    pub control_step: Option<Nat>,
    pub control_n0: Option<Nat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {entity} has {found} components, expected {expected}")]
    Dim { line: usize, entity: String, expected: usize, found: usize },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn parse_nat_list(line: usize, entity: &str, text: &str) -> Result<Vec<Nat>, ParseError> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<Nat>()
                .map_err(|_| syntax(line, format!("bad natural number '{t}' in {entity}")))
        })
        .collect()
}

fn parse_int_list(line: usize, entity: &str, text: &str) -> Result<Vec<Int>, ParseError> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<Int>()
                .map_err(|_| syntax(line, format!("bad integer '{t}' in {entity}")))
        })
        .collect()
}

fn expect_dim(
    line: usize,
    entity: &str,
    expected: usize,
    found: usize,
) -> Result<(), ParseError> {
    if expected == found {
        Ok(())
    } else {
        Err(ParseError::Dim { line, entity: entity.to_string(), expected, found })
    }
}

#[derive(Default)]
struct TransBlock {
    line: usize,
    guard: Option<Vec<Nat>>,
    matrix: Option<Vec<Vec<Nat>>>,
    offset: Option<Vec<Nat>>,
}

/// Parse the line-oriented instance format.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    enum Kind {
        Vas,
        Affine,
    }
    let mut kind = None;
    let mut dim: Option<usize> = None;
    let mut actions: Vec<Vec<Int>> = Vec::new();
    let mut blocks: Vec<TransBlock> = Vec::new();
    let mut open_block: Option<TransBlock> = None;
    let mut target = None;
    let mut source = None;
    let mut control_step = None;
    let mut control_n0 = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = match content.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (content, ""),
        };
        if kind.is_none() {
            match keyword {
                "vas" => kind = Some(Kind::Vas),
                "affine" => kind = Some(Kind::Affine),
                other => {
                    return Err(syntax(line, format!("expected 'vas' or 'affine', got '{other}'")))
                }
            }
            continue;
        }
        // a/A/b belong to the open transition block; anything else closes it
        if !matches!(keyword, "a" | "A" | "b") {
            if let Some(block) = open_block.take() {
                blocks.push(block);
            }
        }
        let d = || dim.ok_or_else(|| syntax(line, format!("'{keyword}' before 'dim'")));
        match keyword {
            "dim" => {
                if dim.is_some() {
                    return Err(syntax(line, "duplicate 'dim'"));
                }
                let v: usize = rest
                    .parse()
                    .map_err(|_| syntax(line, format!("bad dimension '{rest}'")))?;
                if v == 0 {
                    return Err(syntax(line, "dimension must be at least 1"));
                }
                dim = Some(v);
            }
            "action" => {
                if !matches!(kind, Some(Kind::Vas)) {
                    return Err(syntax(line, "'action' is only valid in a vas instance"));
                }
                let d = d()?;
                let a = parse_int_list(line, "action", rest)?;
                expect_dim(line, &format!("action {}", actions.len() + 1), d, a.len())?;
                actions.push(a);
            }
            "trans" => {
                if !matches!(kind, Some(Kind::Affine)) {
                    return Err(syntax(line, "'trans' is only valid in an affine instance"));
                }
                d()?;
                open_block = Some(TransBlock { line, ..TransBlock::default() });
            }
            "a" | "A" | "b" => {
                let d = d()?;
                let block = open_block
                    .as_mut()
                    .ok_or_else(|| syntax(line, format!("'{keyword}' outside a 'trans' block")))?;
                let nth = blocks.len() + 1;
                match keyword {
                    "a" => {
                        if block.guard.is_some() {
                            return Err(syntax(line, "duplicate 'a' in transition"));
                        }
                        let v = parse_nat_list(line, "guard", rest)?;
                        expect_dim(line, &format!("transition {nth} guard"), d, v.len())?;
                        block.guard = Some(v);
                    }
                    "b" => {
                        if block.offset.is_some() {
                            return Err(syntax(line, "duplicate 'b' in transition"));
                        }
                        let v = parse_nat_list(line, "addend", rest)?;
                        expect_dim(line, &format!("transition {nth} addend"), d, v.len())?;
                        block.offset = Some(v);
                    }
                    _ => {
                        if block.matrix.is_some() {
                            return Err(syntax(line, "duplicate 'A' in transition"));
                        }
                        let mut rows = Vec::new();
                        for (r, row_text) in rest.split(';').enumerate() {
                            let row = parse_nat_list(line, "matrix", row_text)?;
                            expect_dim(
                                line,
                                &format!("transition {nth} matrix row {}", r + 1),
                                d,
                                row.len(),
                            )?;
                            rows.push(row);
                        }
                        if rows.len() != d {
                            return Err(syntax(
                                line,
                                format!("transition {nth} matrix has {} rows, expected {d}", rows.len()),
                            ));
                        }
                        block.matrix = Some(rows);
                    }
                }
            }
            "target" => {
                let d = d()?;
                let v = parse_nat_list(line, "target", rest)?;
                expect_dim(line, "target", d, v.len())?;
                target = Some(NatVec::new(v));
            }
            "source" => {
                let d = d()?;
                let v = parse_nat_list(line, "source", rest)?;
                expect_dim(line, "source", d, v.len())?;
                source = Some(NatVec::new(v));
            }
            "control-step" => {
                control_step = Some(rest.parse::<Nat>().map_err(|_| {
                    syntax(line, format!("bad natural number '{rest}' in control-step"))
                })?);
            }
            "control-n0" => {
                control_n0 = Some(rest.parse::<Nat>().map_err(|_| {
                    syntax(line, format!("bad natural number '{rest}' in control-n0"))
                })?);
            }
            other => return Err(syntax(line, format!("unknown keyword '{other}'"))),
        }
    }
    if let Some(block) = open_block.take() {
        blocks.push(block);
    }

    let total = text.lines().count();
    let kind = kind.ok_or_else(|| syntax(total, "missing model kind ('vas' or 'affine')"))?;
    let dim = dim.ok_or_else(|| syntax(total, "missing 'dim'"))?;
    let target = target.ok_or_else(|| syntax(total, "missing 'target'"))?;
    let model = match kind {
        Kind::Vas => Model::Vas(
            Vas::new(dim, actions).expect("dimensions were checked per line"),
        ),
        Kind::Affine => {
            let mut transitions = Vec::new();
            for block in blocks {
                let guard = block
                    .guard
                    .ok_or_else(|| syntax(block.line, "transition is missing 'a'"))?;
                let matrix = block
                    .matrix
                    .ok_or_else(|| syntax(block.line, "transition is missing 'A'"))?;
                let offset = block
                    .offset
                    .ok_or_else(|| syntax(block.line, "transition is missing 'b'"))?;
                transitions.push(
                    AffineTransition::new(NatVec::new(guard), matrix, NatVec::new(offset))
                        .expect("shapes were checked per line"),
                );
            }
            Model::Affine(AffineNet::new(dim, transitions).expect("dimension was checked"))
        }
    };
    Ok(Instance { model, target, source, control_step, control_n0 })
}

/// Canonical text form; `parse_instance(render_instance(i)) == i`.
pub fn render_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let push_vec = |out: &mut String, keyword: &str, v: &NatVec| {
        out.push_str(keyword);
        for c in v.comps() {
            out.push(' ');
            out.push_str(&c.to_string());
        }
        out.push('\n');
    };
    match &instance.model {
        Model::Vas(vas) => {
            out.push_str("vas\n");
            out.push_str(&format!("dim {}\n", vas.dim()));
            for a in vas.actions() {
                out.push_str("action");
                for c in a {
                    out.push_str(&format!(" {c}"));
                }
                out.push('\n');
            }
        }
        Model::Affine(net) => {
            out.push_str("affine\n");
            out.push_str(&format!("dim {}\n", net.dim()));
            for t in net.transitions() {
                out.push_str("trans\n");
                push_vec(&mut out, "a", t.guard());
                out.push_str("A ");
                let rows: Vec<String> = t
                    .matrix()
                    .iter()
                    .map(|row| {
                        row.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
                    })
                    .collect();
                out.push_str(&rows.join(" ; "));
                out.push('\n');
                push_vec(&mut out, "b", t.offset());
            }
        }
    }
    push_vec(&mut out, "target", &instance.target);
    if let Some(s) = &instance.source {
        push_vec(&mut out, "source", s);
    }
    if let Some(c) = &instance.control_step {
        out.push_str(&format!("control-step {c}\n"));
    }
    if let Some(c) = &instance.control_n0 {
        out.push_str(&format!("control-n0 {c}\n"));
    }
    out
}

// ---------------------------------------------------------------------------
// JSON trace encoding

pub fn ideal_to_json(ideal: &OmegaVec) -> Value {
    Value::Array(
        ideal
            .comps()
            .iter()
            .map(|c| match c {
                OmegaNat::Omega => Value::String("w".into()),
                OmegaNat::Fin(n) => Value::String(n.to_string()),
            })
            .collect(),
    )
}

pub fn ideal_from_json(value: &Value) -> Option<OmegaVec> {
    let comps = value
        .as_array()?
        .iter()
        .map(|c| {
            let s = c.as_str()?;
            if s == "w" {
                Some(OmegaNat::Omega)
            } else {
                s.parse::<Nat>().ok().map(OmegaNat::Fin)
            }
        })
        .collect::<Option<Vec<_>>>()?;
    Some(OmegaVec::new(comps))
}

pub fn natvec_to_json(v: &NatVec) -> Value {
    Value::Array(v.comps().iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn natvec_from_json(value: &Value) -> Option<NatVec> {
    let comps = value
        .as_array()?
        .iter()
        .map(|c| c.as_str()?.parse::<Nat>().ok())
        .collect::<Option<Vec<_>>>()?;
    Some(NatVec::new(comps))
}

/// One JSON object per recorded step.
pub fn trace_records(chain: &ChainRecord, flags: &[StepFlags]) -> Vec<Value> {
    chain
        .steps
        .iter()
        .zip(flags)
        .enumerate()
        .map(|(k, (step, flag))| {
            json!({
                "step": k,
                "downset": step.downset.ideals().iter().map(ideal_to_json).collect::<Vec<_>>(),
                "basis": step.upset.basis().iter().map(natvec_to_json).collect::<Vec<_>>(),
                "downset_norm": step.downset.norm().to_string(),
                "ideal_count": step.downset.ideals().len(),
                "basis_size": step.upset.basis().len(),
                "proper": step.proper.iter().map(ideal_to_json).collect::<Vec<_>>(),
                "controlled": flag.controlled,
                "omega_monotone": flag.omega_monotone,
                "strongly_monotone": flag.strongly_monotone,
                "thin_ok": flag.ideals_thin,
                "nearly_thin_ok": flag.basis_nearly_thin,
                "elapsed_us": step.elapsed.as_micros() as u64,
            })
        })
        .collect()
}

fn csv_lines(chain: &ChainRecord, flags: &[StepFlags]) -> String {
    let mut out = String::from("step,ideal_count,downset_norm,proper_count,thin_ok,monotone_ok\n");
    for (k, (step, flag)) in chain.steps.iter().zip(flags).enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            k,
            step.downset.ideals().len(),
            step.downset.norm(),
            step.proper.len(),
            flag.ideals_thin,
            flag.strongly_monotone,
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Command line

#[derive(Debug, Parser)]
#[command(name = "coverkit", about = "Exact coverability for VAS and affine nets", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical backward coverability (ascending filter bases).
    Check(RunArgs),
    /// Dual backward coverability (descending ideal decompositions).
    Dual(RunArgs),
    /// Run both views and cross-check they agree step for step.
    Both(RunArgs),
    /// Run the dual view and every structural monitor.
    Monitor(RunArgs),
    /// Extract a coverability pseudo-witness and replay it concretely.
    Witness(RunArgs),
    /// Print the structural classification of the model.
    Classify {
        /// Instance file.
        instance: PathBuf,
    },
    /// Print the (N_i, L_i) bound table of a control.
    Bounds(BoundsArgs),
    /// Decide coverability with an independent oracle.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Instance file.
    pub instance: PathBuf,
    /// Write a JSON-lines chain trace to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write a per-step CSV summary to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Override the control step (g(x) = x + STEP).
    #[arg(long, value_parser = parse_nat_arg)]
    pub control_step: Option<Nat>,
    /// Override the control initial size n0.
    #[arg(long, value_parser = parse_nat_arg)]
    pub control_n0: Option<Nat>,
    /// Parallelism degree for per-step Pre computations.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Maximum fixpoint iterations before aborting.
    #[arg(long, default_value_t = 100_000)]
    pub max_iters: usize,
    /// Maximum antichain size before aborting.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_size: usize,
    /// Abort when any chain norm exceeds this bound.
    #[arg(long, value_parser = parse_nat_arg)]
    pub max_norm: Option<Nat>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Dimension d.
    #[arg(long)]
    pub d: usize,
    /// Control step (g(x) = x + STEP).
    #[arg(long, value_parser = parse_nat_arg)]
    pub step: Nat,
    /// Initial size n0.
    #[arg(long, value_parser = parse_nat_arg)]
    pub n0: Nat,
    /// Emit the table as JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Instance file (the source must be present).
    pub instance: PathBuf,
    /// km = Karp-Miller tree (VAS only), bfs = bounded forward search.
    #[arg(long, default_value = "auto")]
    pub method: String,
    /// Depth bound for the forward search.
    #[arg(long, default_value_t = 64)]
    pub depth: usize,
    /// Norm cap for the forward search.
    #[arg(long, value_parser = parse_nat_arg, default_value = "1000")]
    pub norm_cap: Nat,
}

fn parse_nat_arg(s: &str) -> Result<Nat, String> {
    s.parse::<Nat>().map_err(|_| format!("'{s}' is not a natural number"))
}

pub fn main_entry() -> i32 {
    run(Cli::parse())
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(CmdError::Engine(EngineError::ResourceCap { kind, step })) => {
            eprintln!("aborted: resource cap exceeded at step {step} ({kind})");
            EXIT_RESOURCE_CAP
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[derive(Debug, Error)]
enum CmdError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{path}: {err}")]
    Parse { path: String, err: ParseError },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Bounds(#[from] crate::bounds::BoundsError),
    #[error("{0}")]
    Usage(String),
}

fn load_instance(path: &Path) -> Result<Instance, CmdError> {
    let text = fs::read_to_string(path)?;
    parse_instance(&text)
        .map_err(|err| CmdError::Parse { path: path.display().to_string(), err })
}

/// CLI flags override instance-file declarations; the fallback is the
/// default control g(x) = x + ‖model‖ with n0 = ‖t‖.
fn effective_control(instance: &Instance, args: &RunArgs) -> Control {
    let step = args
        .control_step
        .clone()
        .or_else(|| instance.control_step.clone())
        .unwrap_or_else(|| instance.model.norm());
    let n0 = args
        .control_n0
        .clone()
        .or_else(|| instance.control_n0.clone())
        .unwrap_or_else(|| instance.target.norm());
    Control::affine(step, n0)
}

fn engine_for(instance: &Instance, args: &RunArgs) -> Result<BackwardEngine, CmdError> {
    let config = EngineConfig {
        max_iterations: args.max_iters,
        max_set_size: args.max_size,
        max_norm: args.max_norm.clone(),
        jobs: args.jobs,
    };
    Ok(BackwardEngine::with_config(instance.model.clone(), config)?)
}

fn describe_model(model: &Model) -> String {
    match model {
        Model::Vas(v) => format!("vas, dim {}, {} action(s), norm {}", v.dim(), v.actions().len(), v.norm()),
        Model::Affine(n) => format!(
            "affine, dim {}, {} transition(s), norm {}",
            n.dim(),
            n.transitions().len(),
            n.norm()
        ),
    }
}

fn seq(vectors: &[NatVec]) -> String {
    vectors.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" -> ")
}

fn write_outputs(
    chain: &ChainRecord,
    control: &Control,
    args: &RunArgs,
) -> Result<(), CmdError> {
    if args.trace.is_none() && args.csv.is_none() {
        return Ok(());
    }
    let table = BoundTable::build(control, chain.dim)?;
    let flags = step_flags(chain, control, &table)?;
    if let Some(path) = &args.trace {
        let mut file = fs::File::create(path)?;
        for record in trace_records(chain, &flags) {
            writeln!(file, "{record}")?;
        }
    }
    if let Some(path) = &args.csv {
        fs::write(path, csv_lines(chain, &flags))?;
    }
    Ok(())
}

fn verdict_exit(instance: &Instance, verdict: &Verdict) -> i32 {
    if instance.source.is_none() {
        EXIT_OK
    } else if verdict.coverable {
        EXIT_COVERABLE
    } else {
        EXIT_NOT_COVERABLE
    }
}

fn print_run(instance: &Instance, chain: &ChainRecord, verdict: &Verdict) {
    println!("model: {}", describe_model(&instance.model));
    println!("target: {}", instance.target);
    match &instance.source {
        Some(s) => println!("source: {s}"),
        None => println!("source: none"),
    }
    let view = match chain.view {
        View::Classical => "classical",
        View::Dual => "dual",
    };
    println!("view: {view}");
    println!(
        "strict steps: {} ({} iterations to stabilization)",
        chain.ell(),
        chain.iterations_run
    );
    let final_up = chain.final_upset();
    println!("U* basis ({}): {}", final_up.basis().len(), final_up);
    let final_down = chain.final_downset();
    println!("D* decomposition ({}): {}", final_down.ideals().len(), final_down);
    if instance.source.is_some() {
        println!("verdict: {}", if verdict.coverable { "coverable" } else { "not coverable" });
        if let Some(w) = &verdict.pseudo_witness {
            println!("pseudo-witness ({} steps): {}", w.len() - 1, seq(w));
        }
        if let Some(e) = &verdict.concrete_execution {
            println!("execution ({} steps): {}", e.len() - 1, seq(e));
        }
    } else {
        println!("verdict: none (no source given)");
    }
}

fn dispatch(cli: Cli) -> Result<i32, CmdError> {
    match cli.command {
        Command::Check(args) => {
            let instance = load_instance(&args.instance)?;
            let engine = engine_for(&instance, &args)?;
            let (chain, verdict) = engine.classical(&instance.target, instance.source.as_ref())?;
            print_run(&instance, &chain, &verdict);
            write_outputs(&chain, &effective_control(&instance, &args), &args)?;
            Ok(verdict_exit(&instance, &verdict))
        }
        Command::Dual(args) => {
            let instance = load_instance(&args.instance)?;
            let engine = engine_for(&instance, &args)?;
            let (chain, verdict) = engine.dual(&instance.target, instance.source.as_ref())?;
            print_run(&instance, &chain, &verdict);
            write_outputs(&chain, &effective_control(&instance, &args), &args)?;
            Ok(verdict_exit(&instance, &verdict))
        }
        Command::Both(args) => {
            let instance = load_instance(&args.instance)?;
            let engine = engine_for(&instance, &args)?;
            let (classical, cv) =
                engine.classical(&instance.target, instance.source.as_ref())?;
            let (dual, dv) = engine.dual(&instance.target, instance.source.as_ref())?;
            print_run(&instance, &dual, &dv);
            let mut agree = classical.ell() == dual.ell() && cv == dv;
            if agree {
                for (a, b) in classical.steps.iter().zip(&dual.steps) {
                    agree &= a.downset == b.downset && a.upset == b.upset;
                }
            }
            println!(
                "cross-check: classical {} steps, dual {} steps, {}",
                classical.ell(),
                dual.ell(),
                if agree { "chains agree step for step" } else { "CHAINS DISAGREE" }
            );
            write_outputs(&dual, &effective_control(&instance, &args), &args)?;
            if !agree {
                return Err(CmdError::Usage(
                    "internal inconsistency: the two views disagree".into(),
                ));
            }
            Ok(verdict_exit(&instance, &dv))
        }
        Command::Monitor(args) => {
            let instance = load_instance(&args.instance)?;
            let engine = engine_for(&instance, &args)?;
            let (chain, verdict) = engine.dual(&instance.target, instance.source.as_ref())?;
            let control = effective_control(&instance, &args);
            let table = BoundTable::build(&control, chain.dim)?;
            let report = crate::engine::monitor(&chain, &control, &table)?;
            print_run(&instance, &chain, &verdict);
            println!("control: {control}");
            println!(
                "length bound L_{} + 1 = {}",
                table.d(),
                table.lengths()[table.d()].clone() + Nat::from(1u32)
            );
            println!("{report}");
            write_outputs(&chain, &control, &args)?;
            Ok(verdict_exit(&instance, &verdict))
        }
        Command::Witness(args) => {
            let instance = load_instance(&args.instance)?;
            let source = instance
                .source
                .clone()
                .ok_or_else(|| CmdError::Usage("witness extraction needs a source".into()))?;
            let engine = engine_for(&instance, &args)?;
            let (chain, verdict) = engine.classical(&instance.target, Some(&source))?;
            print_run(&instance, &chain, &verdict);
            write_outputs(&chain, &effective_control(&instance, &args), &args)?;
            Ok(verdict_exit(&instance, &verdict))
        }
        Command::Classify { instance } => {
            let instance = load_instance(&instance)?;
            let net = instance.model.to_affine();
            println!("model: {}", describe_model(&instance.model));
            println!("{}", net.classify());
            for (i, t) in net.transitions().iter().enumerate() {
                println!(
                    "transition {}: det = {}",
                    i + 1,
                    crate::models::matrix_determinant(t.matrix())
                );
            }
            Ok(EXIT_OK)
        }
        Command::Bounds(args) => {
            let control = Control::affine(args.step.clone(), args.n0.clone());
            let table = BoundTable::build(&control, args.d)?;
            if args.json {
                println!("{}", table.to_json());
            } else {
                println!("control: {control}, d = {}", args.d);
                println!("{table}");
            }
            Ok(EXIT_OK)
        }
        Command::Oracle(args) => {
            let instance = load_instance(&args.instance)?;
            let source = instance
                .source
                .clone()
                .ok_or_else(|| CmdError::Usage("the oracle needs a source".into()))?;
            let method = match args.method.as_str() {
                "km" => "km",
                "bfs" => "bfs",
                "auto" => match &instance.model {
                    Model::Vas(_) => "km",
                    Model::Affine(_) => "bfs",
                },
                other => {
                    return Err(CmdError::Usage(format!(
                        "unknown oracle method '{other}' (expected km or bfs)"
                    )))
                }
            };
            match method {
                "km" => {
                    let vas = instance.model.as_vas().ok_or_else(|| {
                        CmdError::Usage("the Karp-Miller oracle only accepts vas instances".into())
                    })?;
                    let covers = karp_miller_covers(vas, &source, &instance.target)
                        .map_err(|e| CmdError::Usage(e.to_string()))?;
                    println!("oracle: karp-miller");
                    println!("verdict: {}", if covers { "coverable" } else { "not coverable" });
                    Ok(if covers { EXIT_COVERABLE } else { EXIT_NOT_COVERABLE })
                }
                _ => {
                    let net = instance.model.to_affine();
                    let result = bounded_forward_covers(
                        &net,
                        &source,
                        &instance.target,
                        args.depth,
                        &args.norm_cap,
                    )
                    .map_err(|e| CmdError::Usage(e.to_string()))?;
                    println!("oracle: bounded forward search (depth {}, norm cap {})", args.depth, args.norm_cap);
                    match result {
                        CoverSearch::Yes => {
                            println!("verdict: coverable");
                            Ok(EXIT_COVERABLE)
                        }
                        CoverSearch::NoWithinBounds => {
                            println!("verdict: not coverable (closure exhausted)");
                            Ok(EXIT_NOT_COVERABLE)
                        }
                        CoverSearch::Unknown => {
                            println!("verdict: unknown (search truncated)");
                            Ok(EXIT_RESOURCE_CAP)
                        }
                    }
                }
            }
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_instance(self))
    }
}
