//! The `treelogic` command: check trees against theories, compile theories
//! to automata, test emptiness, print witnesses, enumerate models, report
//! movement chains and expand definitions.
//!
//! [`run`] does all the work and returns the exit code, so tests can drive
//! the tool in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use treelogic::automata::{self, AutomatonError, CompileOptions, DEFAULT_STATE_CAP};
use treelogic::eval::{axioms_for, CompiledTheory, DEFAULT_NODE_BUDGET, MAX_NODE_BUDGET};
use treelogic::gb::{chain_report_in, GbConfig, GbError};
use treelogic::{
    enumerate_trees, find_assignments_with_config, parse_theory, parse_tree, print_formula, print_tree,
    satisfies_with_config, CheckerConfig, EvalError, Formula, LabeledTree, Quantifier, Theory, Valuation,
};

pub const NODE_BUDGET_ENV: &str = "TREELOGIC_NODE_BUDGET";

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Holds = 0,
    Fails = 1,
    Usage = 2,
    Budget = 3,
}

#[derive(Parser, Debug)]
#[command(name = "treelogic", version, about = "Monadic second-order logic on finite labeled trees")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Largest tree on which set quantifiers are enumerated
    /// (default 20, or $TREELOGIC_NODE_BUDGET).
    #[arg(long, global = true)]
    node_budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a tree against every axiom of a theory.
    Check {
        theory: PathBuf,
        tree: PathBuf,
        /// Print the valuations witnessing the failure of the failed axiom.
        #[arg(long)]
        assignments: bool,
    },
    /// Compile a theory's axioms to a tree automaton (JSON).
    Compile {
        theory: PathBuf,
        /// Maximum branching.
        #[arg(short = 'k', long, default_value_t = 2)]
        k: usize,
        /// Output file; standard output if absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Exit 0 if the automaton accepts some tree, 1 if it accepts none.
    Empty { automaton: PathBuf },
    /// Print a smallest accepted tree, or exit 1 if there is none.
    Witness { automaton: PathBuf },
    /// Print every tree satisfying the theory, in enumeration order.
    Enumerate {
        theory: PathBuf,
        #[arg(long)]
        max_nodes: usize,
        #[arg(short = 'k', long, default_value_t = 2)]
        k: usize,
        /// Print only the number of trees.
        #[arg(long)]
        count: bool,
    },
    /// List the movement chains of a tree under a GB theory.
    Chains {
        theory: PathBuf,
        tree: PathBuf,
        /// GB label configuration (JSON); built-in defaults if absent.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Exit 1 if more same-type chains than this overlap at a node.
        #[arg(long)]
        max_overlap: Option<usize>,
    },
    /// Print the fully expanded body of a definition.
    Expand { theory: PathBuf, name: String },
}

struct Failure {
    status: ExitStatus,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { status: ExitStatus::Usage, message: message.into() }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        let status = match e {
            EvalError::SubsetBudgetExceeded { .. } => ExitStatus::Budget,
            _ => ExitStatus::Usage,
        };
        Failure { status, message: e.to_string() }
    }
}

impl From<AutomatonError> for Failure {
    fn from(e: AutomatonError) -> Self {
        let status = match e {
            AutomatonError::StateCapExceeded { .. } => ExitStatus::Budget,
            _ => ExitStatus::Usage,
        };
        Failure { status, message: e.to_string() }
    }
}

type Outcome = Result<ExitStatus, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    fn line(&mut self, s: &str) {
        let _ = writeln!(self.out, "{s}");
    }

    fn json(&mut self, v: &impl Serialize) {
        let _ = writeln!(self.out, "{}", serde_json::to_string(v).expect("serializable"));
    }
}

/// Runs one command. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::Usage as i32 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let mut io = Io { out, json: cli.json };
    let result = node_budget(cli.node_budget).and_then(|budget| dispatch(cli.command, CheckerConfig::with_budget(budget), &mut io));
    match result {
        Ok(s) => s as i32,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status as i32
        }
    }
}

fn node_budget(flag: Option<usize>) -> Result<usize, Failure> {
    let budget = match flag {
        Some(b) => b,
        None => match std::env::var(NODE_BUDGET_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| Failure::usage(format!("{NODE_BUDGET_ENV}: `{v}` is not a number")))?,
            Err(_) => DEFAULT_NODE_BUDGET,
        },
    };
    if budget > MAX_NODE_BUDGET {
        return Err(Failure::usage(format!("node budget {budget} exceeds the maximum {MAX_NODE_BUDGET}")));
    }
    Ok(budget)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_theory(path: &Path) -> Result<Theory, Failure> {
    parse_theory(&read(path)?).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn load_tree(path: &Path) -> Result<LabeledTree, Failure> {
    parse_tree(&read(path)?).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn load_automaton(path: &Path) -> Result<automata::TreeAutomaton, Failure> {
    automata::from_json(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: Command, cfg: CheckerConfig, io: &mut Io) -> Outcome {
    match cmd {
        Command::Check { theory, tree, assignments } => cmd_check(&theory, &tree, assignments, cfg, io),
        Command::Compile { theory, k, out, state_cap } => cmd_compile(&theory, k, out.as_deref(), state_cap, io),
        Command::Empty { automaton } => cmd_empty(&automaton, io),
        Command::Witness { automaton } => cmd_witness(&automaton, io),
        Command::Enumerate { theory, max_nodes, k, count } => cmd_enumerate(&theory, max_nodes, k, count, cfg, io),
        Command::Chains { theory, tree, config, max_overlap } => {
            cmd_chains(&theory, &tree, config.as_deref(), max_overlap, cfg, io)
        }
        Command::Expand { theory, name } => cmd_expand(&theory, &name, io),
    }
}

fn render_valuation(v: &Valuation) -> String {
    let mut parts: Vec<String> = v.nodes.iter().map(|(k, a)| format!("{k} = {a}")).collect();
    for (k, s) in &v.sets {
        let members: Vec<String> = s.iter().map(ToString::to_string).collect();
        parts.push(format!("{k} = {{{}}}", members.join(", ")));
    }
    parts.join(", ")
}

fn valuation_json(v: &Valuation) -> serde_json::Value {
    let mut m = serde_json::Map::new();
    for (k, a) in &v.nodes {
        m.insert(k.clone(), json!(a.to_string()));
    }
    for (k, s) in &v.sets {
        m.insert(k.clone(), json!(s.iter().map(ToString::to_string).collect::<Vec<_>>()));
    }
    serde_json::Value::Object(m)
}

/// Peels the universal prefix off `axiom` and returns the valuations of the
/// peeled variables under which the body is false.
fn counterexamples(tree: &LabeledTree, th: &Theory, axiom: &Formula, cfg: CheckerConfig) -> Result<Vec<Valuation>, Failure> {
    let mut vars = Vec::new();
    let mut body = axiom;
    while let Formula::Quant(Quantifier::ForallNode | Quantifier::ForallSet, v, b) = body {
        vars.push(v.clone());
        body = b;
    }
    let negated = Formula::Not(Box::new(body.clone()));
    Ok(find_assignments_with_config(tree, th, &negated, &vars, cfg)?)
}

fn cmd_check(theory: &Path, tree: &Path, assignments: bool, cfg: CheckerConfig, io: &mut Io) -> Outcome {
    let th = load_theory(theory)?;
    let t = load_tree(tree)?;
    let sat = satisfies_with_config(&t, &th, cfg)?;
    let witnesses = match (sat.failed_axiom(), assignments) {
        (Some(ax), true) => counterexamples(&t, &axioms_for(&t, &th), ax, cfg)?,
        _ => Vec::new(),
    };
    if io.json {
        let mut v = json!({
            "holds": sat.holds(),
            "failed_axiom_index": sat.failed,
            "failed_axiom": sat.failed_axiom().map(print_formula),
        });
        if assignments {
            v["assignments"] = json!(witnesses.iter().map(valuation_json).collect::<Vec<_>>());
        }
        io.json(&v);
    } else if let Some(ax) = sat.failed_axiom() {
        io.line(&format!("fails: axiom {}: {}", sat.failed.unwrap() + 1, print_formula(ax)));
        for w in &witnesses {
            io.line(&format!("  counterexample: {}", render_valuation(w)));
        }
    } else {
        io.line("holds");
    }
    Ok(if sat.holds() { ExitStatus::Holds } else { ExitStatus::Fails })
}

fn cmd_compile(theory: &Path, k: usize, out: Option<&Path>, state_cap: usize, io: &mut Io) -> Outcome {
    let th = load_theory(theory)?;
    let a = automata::compile_theory(&th, CompileOptions { max_branching: k, state_cap })?;
    let text = automata::to_json(&a);
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        None => {
            let _ = write!(io.out, "{text}");
        }
    }
    Ok(ExitStatus::Holds)
}

fn cmd_empty(path: &Path, io: &mut Io) -> Outcome {
    let a = load_automaton(path)?;
    let size = a.min_accepted_size();
    if io.json {
        io.json(&json!({ "empty": size.is_none(), "min_size": size }));
    }
    Ok(if size.is_some() { ExitStatus::Holds } else { ExitStatus::Fails })
}

fn cmd_witness(path: &Path, io: &mut Io) -> Outcome {
    let a = load_automaton(path)?;
    let w = a.witness();
    match (&w, io.json) {
        (_, true) => io.json(&json!({ "witness": w.as_ref().map(print_tree) })),
        (Some(t), false) => io.line(&print_tree(t)),
        (None, false) => {}
    }
    Ok(if w.is_some() { ExitStatus::Holds } else { ExitStatus::Fails })
}

fn cmd_enumerate(theory: &Path, max_nodes: usize, k: usize, count_only: bool, cfg: CheckerConfig, io: &mut Io) -> Outcome {
    if max_nodes == 0 || k == 0 {
        return Err(Failure::usage("--max-nodes and -k must be positive"));
    }
    let th = load_theory(theory)?;
    let compiled = CompiledTheory::new(&th, cfg)?;
    let mut trees = enumerate_trees(max_nodes, k, &th.labels);
    let mut count = 0usize;
    let mut found = Vec::new();
    loop {
        let chunk: Vec<LabeledTree> = trees.by_ref().take(4096).collect();
        if chunk.is_empty() {
            break;
        }
        let verdicts = treelogic::par::map(&chunk, |t| compiled.satisfies(t));
        for (t, ok) in chunk.into_iter().zip(verdicts) {
            if ok? {
                count += 1;
                if !count_only {
                    if io.json {
                        found.push(print_tree(&t));
                    } else {
                        io.line(&print_tree(&t));
                    }
                }
            }
        }
    }
    if io.json {
        if count_only {
            io.json(&json!({ "count": count }));
        } else {
            io.json(&json!({ "count": count, "trees": found }));
        }
    } else if count_only {
        io.line(&count.to_string());
    }
    Ok(ExitStatus::Holds)
}

fn cmd_chains(
    theory: &Path,
    tree: &Path,
    config: Option<&Path>,
    max_overlap: Option<usize>,
    cfg: CheckerConfig,
    io: &mut Io,
) -> Outcome {
    let th = load_theory(theory)?;
    let t = load_tree(tree)?;
    let gb: GbConfig = match config {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        None => GbConfig::default(),
    };
    let report = match chain_report_in(&t, &th, &gb, cfg) {
        Ok(r) => r,
        Err(GbError::PartitionViolation { node, count }) => {
            if io.json {
                io.json(&json!({ "partition_violation": { "node": node.to_string(), "chains": count } }));
            } else {
                io.line(&format!("partition violation: node {node} belongs to {count} chains"));
            }
            return Ok(ExitStatus::Fails);
        }
        Err(GbError::Eval(e)) => return Err(e.into()),
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    let exceeded = max_overlap.is_some_and(|m| report.max_overlap > m);
    if io.json {
        io.json(&json!({ "chains": report.chains, "max_overlap": report.max_overlap, "exceeds_bound": exceeded }));
    } else {
        for c in &report.chains {
            let members: Vec<String> = c.members.iter().map(ToString::to_string).collect();
            let kind = c.link_type.map_or("trivial".to_string(), |t| format!("{t:?}"));
            io.line(&format!("chain {kind}: {}", members.join(" -> ")));
        }
        io.line(&format!("max_overlap: {}", report.max_overlap));
        if exceeded {
            io.line(&format!("exceeds bound {}", max_overlap.unwrap()));
        }
    }
    Ok(if exceeded { ExitStatus::Fails } else { ExitStatus::Holds })
}

fn cmd_expand(theory: &Path, name: &str, io: &mut Io) -> Outcome {
    let th = load_theory(theory)?;
    let d = th.definition(name).ok_or_else(|| Failure::usage(format!("no definition named `{name}`")))?;
    let body = th.expand_definition(name).map_err(|e| Failure::usage(e.to_string()))?;
    let params: Vec<&str> = d.params.iter().map(|(p, _)| p.as_str()).collect();
    if io.json {
        io.json(&json!({ "name": name, "params": params, "body": print_formula(&body) }));
    } else {
        io.line(&format!("{name}({}) := {}", params.join(", "), print_formula(&body)));
    }
    Ok(ExitStatus::Holds)
}
