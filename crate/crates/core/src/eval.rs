//! Tarskian evaluation of formulas on labeled trees.
//!
//! Formulas are expanded first and then compiled to a slot-addressed
//! program, so the evaluation loop never sees definitions or names. Set
//! quantifiers enumerate all `2^n` subsets, guarded by a node budget.
//!
//! Subformulas that contain a quantifier and whose free variables are at most
//! three node variables are memoized per tree. Structurally identical
//! subformulas (up to renaming) share one table, which is what keeps
//! repeated expansions of the same definition cheap.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::formula::{Formula, Quantifier, Sort};
use crate::nodeset::NodeSet;
use crate::par;
use crate::theory::{Theory, TheoryError};
use crate::tree::{GornAddress, LabeledTree, Relation};

pub const DEFAULT_NODE_BUDGET: usize = 20;
/// Hard ceiling; subset enumeration uses a single 64-bit counter.
pub const MAX_NODE_BUDGET: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("set quantification over {nodes} nodes exceeds the node budget of {budget}")]
    SubsetBudgetExceeded { nodes: usize, budget: usize },
    #[error("address {0} is not in the tree domain")]
    AddressNotInDomain(GornAddress),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckerConfig {
    pub node_budget: usize,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig { node_budget: DEFAULT_NODE_BUDGET }
    }
}

impl CheckerConfig {
    pub fn with_budget(node_budget: usize) -> Self {
        CheckerConfig { node_budget: node_budget.min(MAX_NODE_BUDGET) }
    }
}

/// Assignment of node variables to addresses and set variables to address
/// sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Valuation {
    pub nodes: BTreeMap<String, GornAddress>,
    pub sets: BTreeMap<String, BTreeSet<GornAddress>>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_node(mut self, v: &str, a: impl Into<GornAddress>) -> Self {
        self.nodes.insert(v.into(), a.into());
        self
    }

    pub fn with_set<I, A>(mut self, v: &str, s: I) -> Self
    where
        I: IntoIterator<Item = A>,
        A: Into<GornAddress>,
    {
        self.sets.insert(v.into(), s.into_iter().map(Into::into).collect());
        self
    }
}

type Slot = usize;

#[derive(Clone, Debug)]
enum Prog {
    True,
    False,
    Rel(Relation, Slot, Slot),
    Label(usize, Slot),
    InSet(Slot, Slot),
    Not(Box<Prog>),
    And(Box<Prog>, Box<Prog>),
    Or(Box<Prog>, Box<Prog>),
    Implies(Box<Prog>, Box<Prog>),
    Iff(Box<Prog>, Box<Prog>),
    ExNode(Slot, Box<Prog>),
    AllNode(Slot, Box<Prog>),
    ExSet(Slot, Box<Prog>),
    AllSet(Slot, Box<Prog>),
    Memo(usize, Vec<Slot>, Box<Prog>),
}

/// A formula compiled for repeated evaluation. Free names become input
/// slots, listed in `node_inputs` / `set_inputs`.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    prog: Prog,
    labels: Vec<String>,
    node_inputs: Vec<String>,
    set_inputs: Vec<String>,
    node_slots: usize,
    set_slots: usize,
    memo_arity: Vec<usize>,
    has_set_quantifier: bool,
}

struct Builder {
    labels: Vec<String>,
    node_slots: usize,
    set_slots: usize,
    memo_ids: HashMap<String, usize>,
    memo_arity: Vec<usize>,
    has_set_quantifier: bool,
}

impl Builder {
    fn label_idx(&mut self, l: &str) -> usize {
        match self.labels.iter().position(|x| x == l) {
            Some(i) => i,
            None => {
                self.labels.push(l.to_string());
                self.labels.len() - 1
            }
        }
    }

    fn lookup(scope: &[(String, Sort, Slot)], name: &str) -> Slot {
        scope.iter().rev().find(|(n, _, _)| n == name).map(|(_, _, s)| *s).expect("free names are pre-bound")
    }

    fn build(&mut self, f: &Formula, scope: &mut Vec<(String, Sort, Slot)>) -> Prog {
        let p = self.build_inner(f, scope);
        if let Formula::Quant(..) | Formula::Not(_) | Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Iff(..) = f {
            if let Some((key, args)) = memo_key(f) {
                let arity = args.len();
                let next = self.memo_arity.len();
                let id = *self.memo_ids.entry(key).or_insert(next);
                if id == next {
                    self.memo_arity.push(arity);
                }
                let slots = args.iter().map(|a| Self::lookup(scope, a)).collect();
                return Prog::Memo(id, slots, Box::new(p));
            }
        }
        p
    }

    fn build_inner(&mut self, f: &Formula, scope: &mut Vec<(String, Sort, Slot)>) -> Prog {
        let bx = |p: Prog| Box::new(p);
        match f {
            Formula::True => Prog::True,
            Formula::False => Prog::False,
            Formula::Rel(r, a, b) => Prog::Rel(*r, Self::lookup(scope, a), Self::lookup(scope, b)),
            Formula::Label(l, x) => {
                let li = self.label_idx(l);
                Prog::Label(li, Self::lookup(scope, x))
            }
            Formula::InSet(s, x) => Prog::InSet(Self::lookup(scope, s), Self::lookup(scope, x)),
            Formula::Not(a) => Prog::Not(bx(self.build(a, scope))),
            Formula::And(a, b) => Prog::And(bx(self.build(a, scope)), bx(self.build(b, scope))),
            Formula::Or(a, b) => Prog::Or(bx(self.build(a, scope)), bx(self.build(b, scope))),
            Formula::Implies(a, b) => Prog::Implies(bx(self.build(a, scope)), bx(self.build(b, scope))),
            Formula::Iff(a, b) => Prog::Iff(bx(self.build(a, scope)), bx(self.build(b, scope))),
            Formula::Quant(q, v, body) => {
                let slot = match q.sort() {
                    Sort::Node => {
                        self.node_slots += 1;
                        self.node_slots - 1
                    }
                    Sort::Set => {
                        self.set_slots += 1;
                        self.has_set_quantifier = true;
                        self.set_slots - 1
                    }
                };
                scope.push((v.clone(), q.sort(), slot));
                let b = self.build(body, scope);
                scope.pop();
                match q {
                    Quantifier::ExistsNode => Prog::ExNode(slot, bx(b)),
                    Quantifier::ForallNode => Prog::AllNode(slot, bx(b)),
                    Quantifier::ExistsSet => Prog::ExSet(slot, bx(b)),
                    Quantifier::ForallSet => Prog::AllSet(slot, bx(b)),
                    Quantifier::ExistsUniqueNode => unreachable!("desugared by expand"),
                }
            }
            Formula::Apply(..) => unreachable!("expanded before compilation"),
        }
    }
}

/// Canonical text of `f` with free variables numbered by first occurrence and
/// bound variables by depth, plus the free variables in that order. `None`
/// unless `f` contains a quantifier and its free variables are 1..=3 node
/// variables.
fn memo_key(f: &Formula) -> Option<(String, Vec<String>)> {
    let mut has_quant = false;
    f.visit(&mut |g| {
        if matches!(g, Formula::Quant(..)) {
            has_quant = true;
        }
    });
    if !has_quant {
        return None;
    }
    let fv = f.free_vars();
    if !fv.sets.is_empty() || fv.nodes.len() > 3 {
        return None;
    }
    let mut free_order: Vec<String> = Vec::new();
    let mut out = String::new();
    fn name(n: &str, bound: &[String], free_order: &mut Vec<String>) -> String {
        if let Some(d) = bound.iter().rposition(|b| b == n) {
            return format!("%{d}");
        }
        let i = match free_order.iter().position(|x| x == n) {
            Some(i) => i,
            None => {
                free_order.push(n.to_string());
                free_order.len() - 1
            }
        };
        format!("#{i}")
    }
    fn go(f: &Formula, bound: &mut Vec<String>, free_order: &mut Vec<String>, out: &mut String) {
        use std::fmt::Write;
        match f {
            Formula::True => out.push('T'),
            Formula::False => out.push('F'),
            Formula::Rel(r, a, b) => {
                let _ = write!(out, "{r:?}({},{})", name(a, bound, free_order), name(b, bound, free_order));
            }
            Formula::Label(l, x) => {
                let _ = write!(out, "L[{l}]({})", name(x, bound, free_order));
            }
            Formula::InSet(s, x) => {
                let _ = write!(out, "S({},{})", name(s, bound, free_order), name(x, bound, free_order));
            }
            Formula::Not(a) => {
                out.push('!');
                go(a, bound, free_order, out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let op = match f {
                    Formula::And(..) => '&',
                    Formula::Or(..) => '|',
                    Formula::Implies(..) => '>',
                    _ => '=',
                };
                out.push('(');
                go(a, bound, free_order, out);
                out.push(op);
                go(b, bound, free_order, out);
                out.push(')');
            }
            Formula::Quant(q, v, body) => {
                let _ = write!(out, "{}.", q.keyword());
                bound.push(v.clone());
                go(body, bound, free_order, out);
                bound.pop();
            }
            Formula::Apply(n, args) => {
                let a: Vec<String> = args.iter().map(|x| name(x, bound, free_order)).collect();
                let _ = write!(out, "{n}({})", a.join(","));
            }
        }
    }
    go(f, &mut Vec::new(), &mut free_order, &mut out);
    Some((out, free_order))
}

impl CompiledFormula {
    /// Expands `f` against `theory` and compiles it. Free names (including
    /// constants) become inputs.
    pub fn new(theory: &Theory, f: &Formula) -> Result<Self, EvalError> {
        let expanded = theory.expand(f)?;
        Ok(Self::from_expanded(&expanded))
    }

    /// Compiles a formula that contains no definitions or `∃!`.
    pub fn from_expanded(f: &Formula) -> Self {
        let fv = f.free_vars();
        let mut b = Builder {
            labels: Vec::new(),
            node_slots: 0,
            set_slots: 0,
            memo_ids: HashMap::new(),
            memo_arity: Vec::new(),
            has_set_quantifier: false,
        };
        let mut scope = Vec::new();
        let node_inputs: Vec<String> = fv.nodes.into_iter().collect();
        let set_inputs: Vec<String> = fv.sets.into_iter().collect();
        for n in &node_inputs {
            scope.push((n.clone(), Sort::Node, b.node_slots));
            b.node_slots += 1;
        }
        for s in &set_inputs {
            scope.push((s.clone(), Sort::Set, b.set_slots));
            b.set_slots += 1;
        }
        let prog = b.build(f, &mut scope);
        CompiledFormula {
            prog,
            labels: b.labels,
            node_inputs,
            set_inputs,
            node_slots: b.node_slots,
            set_slots: b.set_slots,
            memo_arity: b.memo_arity,
            has_set_quantifier: b.has_set_quantifier,
        }
    }

    pub fn node_inputs(&self) -> &[String] {
        &self.node_inputs
    }

    pub fn set_inputs(&self) -> &[String] {
        &self.set_inputs
    }

    /// Evaluation state for one tree.
    pub fn context<'t>(&self, tree: &'t LabeledTree, cfg: CheckerConfig) -> Result<EvalContext<'t>, EvalError> {
        let n = tree.len();
        let labels = self
            .labels
            .iter()
            .map(|l| NodeSet::from_indices(n, (0..n).filter(|&i| tree.has_label(i, l))))
            .collect();
        self.context_from(tree, labels, cfg)
    }

    /// Evaluation state for `skeleton` relabeled so that node `i` carries
    /// `label_order[j]` iff bit `j` of `masks[i]` is set. The skeleton's own
    /// labels are ignored. Avoids building a tree per labeling in sweeps.
    pub fn context_masks<'t>(
        &self,
        skeleton: &'t LabeledTree,
        label_order: &[String],
        masks: &[u64],
        cfg: CheckerConfig,
    ) -> Result<EvalContext<'t>, EvalError> {
        let n = skeleton.len();
        let labels = self
            .labels
            .iter()
            .map(|l| match label_order.iter().position(|x| x == l) {
                Some(j) => NodeSet::from_indices(n, (0..n).filter(|&i| masks[i] >> j & 1 == 1)),
                None => NodeSet::empty(n),
            })
            .collect();
        self.context_from(skeleton, labels, cfg)
    }

    fn context_from<'t>(&self, tree: &'t LabeledTree, labels: Vec<NodeSet>, cfg: CheckerConfig) -> Result<EvalContext<'t>, EvalError> {
        let n = tree.len();
        if self.has_set_quantifier && n > cfg.node_budget.min(MAX_NODE_BUDGET) {
            return Err(EvalError::SubsetBudgetExceeded { nodes: n, budget: cfg.node_budget });
        }
        Ok(EvalContext {
            tree,
            n,
            labels,
            nodes: vec![0; self.node_slots],
            sets: vec![NodeSet::empty(n); self.set_slots],
            memo: self.memo_arity.iter().map(|_| Vec::new()).collect(),
            memo_arity: self.memo_arity.clone(),
        })
    }

    /// Evaluates with input slots bound positionally (node inputs as preorder
    /// indices, set inputs as node sets).
    pub fn eval_with(&self, ctx: &mut EvalContext<'_>, nodes: &[usize], sets: &[NodeSet]) -> bool {
        ctx.nodes[..nodes.len()].copy_from_slice(nodes);
        for (i, s) in sets.iter().enumerate() {
            ctx.sets[i] = s.clone();
        }
        ctx.run(&self.prog)
    }

    /// Evaluates a closed formula on `tree`.
    pub fn eval_closed(&self, tree: &LabeledTree, cfg: CheckerConfig) -> Result<bool, EvalError> {
        let (nodes, sets) = self.bind_inputs(tree, &Valuation::default())?;
        let mut ctx = self.context(tree, cfg)?;
        Ok(self.eval_with(&mut ctx, &nodes, &sets))
    }

    /// Resolves input names from the valuation, falling back to the tree's
    /// constants for node names.
    fn bind_inputs(&self, tree: &LabeledTree, v: &Valuation) -> Result<(Vec<usize>, Vec<NodeSet>), EvalError> {
        let n = tree.len();
        let mut nodes = Vec::new();
        for name in &self.node_inputs {
            let idx = match v.nodes.get(name) {
                Some(a) => tree.index_of(a).ok_or_else(|| EvalError::AddressNotInDomain(a.clone()))?,
                None => tree.constant(name).ok_or_else(|| EvalError::UnboundVariable(name.clone()))?,
            };
            nodes.push(idx);
        }
        let mut sets = Vec::new();
        for name in &self.set_inputs {
            let s = v.sets.get(name).ok_or_else(|| EvalError::UnboundVariable(name.clone()))?;
            let mut ns = NodeSet::empty(n);
            for a in s {
                ns.insert(tree.index_of(a).ok_or_else(|| EvalError::AddressNotInDomain(a.clone()))?);
            }
            sets.push(ns);
        }
        Ok((nodes, sets))
    }
}

pub struct EvalContext<'t> {
    tree: &'t LabeledTree,
    n: usize,
    labels: Vec<NodeSet>,
    nodes: Vec<usize>,
    sets: Vec<NodeSet>,
    // 0 = unknown, 1 = false, 2 = true
    memo: Vec<Vec<u8>>,
    memo_arity: Vec<usize>,
}

impl EvalContext<'_> {
    fn run(&mut self, p: &Prog) -> bool {
        match p {
            Prog::True => true,
            Prog::False => false,
            Prog::Rel(r, a, b) => self.tree.relation_idx(*r, self.nodes[*a], self.nodes[*b]),
            Prog::Label(l, x) => self.labels[*l].contains(self.nodes[*x]),
            Prog::InSet(s, x) => self.sets[*s].contains(self.nodes[*x]),
            Prog::Not(a) => !self.run(a),
            Prog::And(a, b) => self.run(a) && self.run(b),
            Prog::Or(a, b) => self.run(a) || self.run(b),
            Prog::Implies(a, b) => !self.run(a) || self.run(b),
            Prog::Iff(a, b) => self.run(a) == self.run(b),
            Prog::ExNode(s, body) => {
                let saved = self.nodes[*s];
                let mut r = false;
                for i in 0..self.n {
                    self.nodes[*s] = i;
                    if self.run(body) {
                        r = true;
                        break;
                    }
                }
                self.nodes[*s] = saved;
                r
            }
            Prog::AllNode(s, body) => {
                let saved = self.nodes[*s];
                let mut r = true;
                for i in 0..self.n {
                    self.nodes[*s] = i;
                    if !self.run(body) {
                        r = false;
                        break;
                    }
                }
                self.nodes[*s] = saved;
                r
            }
            Prog::ExSet(s, body) | Prog::AllSet(s, body) => {
                let want = matches!(p, Prog::ExSet(..));
                let saved = self.sets[*s].clone();
                let mut r = !want;
                for mask in 0..(1u64 << self.n) {
                    self.sets[*s].set_mask(mask);
                    if self.run(body) == want {
                        r = want;
                        break;
                    }
                }
                self.sets[*s] = saved;
                r
            }
            Prog::Memo(id, args, body) => {
                let mut key = 0usize;
                for &a in args.iter().rev() {
                    key = key * self.n + self.nodes[a];
                }
                if self.memo[*id].is_empty() {
                    self.memo[*id] = vec![0; self.n.pow(self.memo_arity[*id] as u32)];
                }
                match self.memo[*id][key] {
                    1 => false,
                    2 => true,
                    _ => {
                        let r = self.run(body);
                        self.memo[*id][key] = if r { 2 } else { 1 };
                        r
                    }
                }
            }
        }
    }
}

/// Truth of `f` on `tree` under `v`. Definitions are expanded first.
pub fn eval(tree: &LabeledTree, theory: &Theory, f: &Formula, v: &Valuation) -> Result<bool, EvalError> {
    eval_with_config(tree, theory, f, v, CheckerConfig::default())
}

pub fn eval_with_config(
    tree: &LabeledTree,
    theory: &Theory,
    f: &Formula,
    v: &Valuation,
    cfg: CheckerConfig,
) -> Result<bool, EvalError> {
    let c = CompiledFormula::new(theory, f)?;
    let (nodes, sets) = c.bind_inputs(tree, v)?;
    let mut ctx = c.context(tree, cfg)?;
    Ok(c.eval_with(&mut ctx, &nodes, &sets))
}

/// Outcome of checking a tree against a theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Satisfaction {
    /// Index into `axioms` of the first axiom that fails.
    pub failed: Option<usize>,
    /// The axioms actually checked. These are the theory's own axioms unless
    /// some constant was not interpreted by the tree, in which case they are
    /// the constant-eliminated conjunction.
    pub axioms: Vec<Formula>,
}

impl Satisfaction {
    pub fn holds(&self) -> bool {
        self.failed.is_none()
    }

    pub fn failed_axiom(&self) -> Option<&Formula> {
        self.failed.map(|i| &self.axioms[i])
    }
}

/// Theory whose axioms are checked for `tree`: constants the tree
/// interprets stay free (bound from the tree); the rest are eliminated.
pub fn axioms_for(tree: &LabeledTree, theory: &Theory) -> Theory {
    let unbound: Vec<String> =
        theory.constants.iter().filter(|c| tree.constant(c).is_none()).cloned().collect();
    if unbound.is_empty() {
        return theory.clone();
    }
    let mut partial = theory.clone();
    partial.constants = unbound;
    let mut eliminated = partial.eliminate_constants();
    eliminated.constants = theory.constants.iter().filter(|c| tree.constant(c).is_some()).cloned().collect();
    eliminated
}

/// Checks every axiom in order, stopping at the first failure.
pub fn satisfies(tree: &LabeledTree, theory: &Theory) -> Result<Satisfaction, EvalError> {
    satisfies_with_config(tree, theory, CheckerConfig::default())
}

pub fn satisfies_with_config(
    tree: &LabeledTree,
    theory: &Theory,
    cfg: CheckerConfig,
) -> Result<Satisfaction, EvalError> {
    let th = axioms_for(tree, theory);
    for (i, ax) in th.axioms.iter().enumerate() {
        let c = CompiledFormula::new(&th, ax)?;
        if !c.eval_closed(tree, cfg)? {
            return Ok(Satisfaction { failed: Some(i), axioms: th.axioms });
        }
    }
    Ok(Satisfaction { failed: None, axioms: th.axioms })
}

/// A theory's axioms compiled once for checking many trees.
#[derive(Clone, Debug)]
pub struct CompiledTheory {
    axioms: Vec<CompiledFormula>,
    cfg: CheckerConfig,
}

impl CompiledTheory {
    /// Requires a constant-free theory (see [`Theory::eliminate_constants`]).
    pub fn new(theory: &Theory, cfg: CheckerConfig) -> Result<Self, EvalError> {
        let th = theory.eliminate_constants();
        let axioms = th.axioms.iter().map(|a| CompiledFormula::new(&th, a)).collect::<Result<_, _>>()?;
        Ok(CompiledTheory { axioms, cfg })
    }

    pub fn satisfies(&self, tree: &LabeledTree) -> Result<bool, EvalError> {
        for a in &self.axioms {
            if !a.eval_closed(tree, self.cfg)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// [`satisfies`](Self::satisfies) on a relabeled skeleton; see
    /// [`CompiledFormula::context_masks`].
    pub fn satisfies_masks(&self, skeleton: &LabeledTree, label_order: &[String], masks: &[u64]) -> Result<bool, EvalError> {
        for a in &self.axioms {
            if let Some(v) = a.node_inputs.first().or(a.set_inputs.first()) {
                return Err(EvalError::UnboundVariable(v.clone()));
            }
            let mut ctx = a.context_masks(skeleton, label_order, masks, self.cfg)?;
            if !a.eval_with(&mut ctx, &[], &[]) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// All valuations of `free_vars` (which must be exactly the free variables
/// of `f`) that make `f` true.
///
/// Order: node variables then set variables, each group sorted by name; the
/// first variable varies slowest; nodes in preorder; sets by ascending
/// bitmask over preorder indices.
pub fn find_assignments(
    tree: &LabeledTree,
    theory: &Theory,
    f: &Formula,
    free_vars: &[String],
) -> Result<Vec<Valuation>, EvalError> {
    find_assignments_with_config(tree, theory, f, free_vars, CheckerConfig::default())
}

pub fn find_assignments_with_config(
    tree: &LabeledTree,
    theory: &Theory,
    f: &Formula,
    free_vars: &[String],
    cfg: CheckerConfig,
) -> Result<Vec<Valuation>, EvalError> {
    let c = CompiledFormula::new(theory, f)?;
    let wanted: BTreeSet<&String> = free_vars.iter().collect();
    let mut node_inputs: Vec<String> = Vec::new();
    for n in c.node_inputs() {
        if wanted.contains(n) {
            node_inputs.push(n.clone());
        } else if tree.constant(n).is_none() {
            return Err(EvalError::UnboundVariable(n.clone()));
        }
    }
    for s in c.set_inputs() {
        if !wanted.contains(s) {
            return Err(EvalError::UnboundVariable(s.clone()));
        }
    }
    let n = tree.len();
    if !c.set_inputs().is_empty() && n > cfg.node_budget.min(MAX_NODE_BUDGET) {
        return Err(EvalError::SubsetBudgetExceeded { nodes: n, budget: cfg.node_budget });
    }
    // Free variables not occurring in f still range over their domain.
    let extra_nodes: Vec<String> = free_vars
        .iter()
        .filter(|v| Sort::of_name(v) == Sort::Node && !c.node_inputs().contains(v))
        .cloned()
        .collect();
    let extra_sets: Vec<String> = free_vars
        .iter()
        .filter(|v| Sort::of_name(v) == Sort::Set && !c.set_inputs().contains(v))
        .cloned()
        .collect();
    if !extra_sets.is_empty() && n > cfg.node_budget.min(MAX_NODE_BUDGET) {
        return Err(EvalError::SubsetBudgetExceeded { nodes: n, budget: cfg.node_budget });
    }
    let mut all_nodes: Vec<String> = node_inputs.iter().chain(&extra_nodes).cloned().collect();
    all_nodes.sort();
    let mut all_sets: Vec<String> = c.set_inputs().iter().chain(&extra_sets).cloned().collect();
    all_sets.sort();

    let radices: Vec<u64> = all_nodes
        .iter()
        .map(|_| n as u64)
        .chain(all_sets.iter().map(|_| 1u64 << n))
        .collect();
    let total: u64 = radices.iter().product();
    let first = radices.first().copied().unwrap_or(1);
    let rest = if first == 0 { 0 } else { total / first };

    let const_idx: Vec<Option<usize>> = c
        .node_inputs()
        .iter()
        .map(|name| if wanted.contains(name) { None } else { tree.constant(name) })
        .collect();

    let per_first = |head: u64| -> Result<Vec<Valuation>, EvalError> {
        let mut ctx = c.context(tree, cfg)?;
        let mut out = Vec::new();
        let mut digits = vec![0u64; radices.len()];
        for r in 0..rest {
            if !radices.is_empty() {
                digits[0] = head;
                let mut x = r;
                for i in (1..radices.len()).rev() {
                    digits[i] = x % radices[i];
                    x /= radices[i];
                }
            }
            let node_val = |name: &String| -> usize {
                let i = all_nodes.iter().position(|x| x == name).unwrap();
                digits[i] as usize
            };
            let set_val = |name: &String| -> u64 {
                let i = all_sets.iter().position(|x| x == name).unwrap();
                digits[all_nodes.len() + i]
            };
            let nodes: Vec<usize> = c
                .node_inputs()
                .iter()
                .zip(&const_idx)
                .map(|(name, ci)| ci.unwrap_or_else(|| node_val(name)))
                .collect();
            let sets: Vec<NodeSet> = c
                .set_inputs()
                .iter()
                .map(|name| {
                    let mut s = NodeSet::empty(n);
                    s.set_mask(set_val(name));
                    s
                })
                .collect();
            if c.eval_with(&mut ctx, &nodes, &sets) {
                let mut v = Valuation::default();
                for name in &all_nodes {
                    v.nodes.insert(name.clone(), tree.address(node_val(name)).clone());
                }
                for name in &all_sets {
                    let m = set_val(name);
                    v.sets.insert(
                        name.clone(),
                        (0..n).filter(|i| m >> i & 1 == 1).map(|i| tree.address(i).clone()).collect(),
                    );
                }
                out.push(v);
            }
        }
        Ok(out)
    };
    let heads: Vec<u64> = (0..first).collect();
    let chunks = par::map(&heads, |&h| per_first(h));
    let mut out = Vec::new();
    for ch in chunks {
        out.extend(ch?);
    }
    Ok(out)
}
