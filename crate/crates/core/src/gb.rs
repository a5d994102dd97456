//! Antecedent government, links and chains, with boundedly many chain types.
//!
//! Movement is marked on input trees by labels: `TGT` on the head of a
//! nontrivial chain, `TR` on intermediate traces and `BASE` on the bottom
//! trace, plus one type label per link relation on every member of a
//! nontrivial chain. Unmarked nodes are both Target and Base, i.e. trivial
//! chains. Referential chains use index labels `REF1..REFn` in place of a
//! type label.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{find_assignments_with_config, CheckerConfig, EvalError};
use crate::formula::{
    all, and, and_all, apply, dom, eq, ex, ex_set, ex_unique, iff, implies, in_set, label, not, or, or_all, prec, Formula,
};
use crate::theory::{Definition, Theory, TheoryError};
use crate::tree::{GornAddress, LabeledTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LinkType {
    A,
    ABarNonRef,
    ABarRef,
    X0,
    Right,
}

impl LinkType {
    pub const ALL: [LinkType; 5] = [LinkType::A, LinkType::ABarNonRef, LinkType::ABarRef, LinkType::X0, LinkType::Right];

    pub fn definition_name(self) -> &'static str {
        match self {
            LinkType::A => "ALink",
            LinkType::ABarNonRef => "ABarNonRefLink",
            LinkType::ABarRef => "ABarRefLink",
            LinkType::X0 => "X0Link",
            LinkType::Right => "RightLink",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkFlags {
    pub a: bool,
    pub abar_nonref: bool,
    pub abar_ref: bool,
    pub x0: bool,
    pub right: bool,
}

impl Default for LinkFlags {
    fn default() -> Self {
        LinkFlags { a: true, abar_nonref: true, abar_ref: true, x0: true, right: true }
    }
}

/// Label names the emitted theory is built over. Loaded from JSON by the
/// command-line tool; every field has a default.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GbConfig {
    pub a_pos: String,
    pub spec: String,
    pub barrier: String,
    pub target: String,
    pub trace: String,
    pub base: String,
    pub agreement: Vec<String>,
    pub a_label: String,
    pub abar_label: String,
    pub ref_prefix: String,
    pub ref_indices: usize,
    pub x0_label: String,
    pub right_label: String,
    pub links: LinkFlags,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            a_pos: "APOS".into(),
            spec: "SPEC".into(),
            barrier: "BARRIER".into(),
            target: "TGT".into(),
            trace: "TR".into(),
            base: "BASE".into(),
            agreement: vec!["WH".into(), "AGRA".into(), "AGRB".into()],
            a_label: "AMOV".into(),
            abar_label: "ABAR".into(),
            ref_prefix: "REF".into(),
            ref_indices: 4,
            x0_label: "X0".into(),
            right_label: "RIGHT".into(),
            links: LinkFlags::default(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GbError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("node {node} belongs to {count} chains; chains must partition the tree")]
    PartitionViolation { node: GornAddress, count: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

impl GbConfig {
    pub fn enabled(&self) -> Vec<LinkType> {
        let f = &self.links;
        LinkType::ALL
            .into_iter()
            .filter(|t| match t {
                LinkType::A => f.a,
                LinkType::ABarNonRef => f.abar_nonref,
                LinkType::ABarRef => f.abar_ref && self.ref_indices > 0,
                LinkType::X0 => f.x0,
                LinkType::Right => f.right,
            })
            .collect()
    }

    fn ref_labels(&self) -> Vec<String> {
        (1..=self.ref_indices).map(|i| format!("{}{i}", self.ref_prefix)).collect()
    }

    /// Labels that mark a chain's type.
    fn type_labels(&self) -> Vec<String> {
        let mut v = Vec::new();
        for t in self.enabled() {
            match t {
                LinkType::A => v.push(self.a_label.clone()),
                LinkType::ABarNonRef => v.push(self.abar_label.clone()),
                LinkType::ABarRef => v.extend(self.ref_labels()),
                LinkType::X0 => v.push(self.x0_label.clone()),
                LinkType::Right => v.push(self.right_label.clone()),
            }
        }
        v
    }

    /// Every label the theory declares, in declaration order.
    pub fn labels(&self) -> Vec<String> {
        let mut v = vec![
            self.a_pos.clone(),
            self.spec.clone(),
            self.barrier.clone(),
            self.target.clone(),
            self.trace.clone(),
            self.base.clone(),
        ];
        v.extend(self.agreement.iter().cloned());
        v.extend(self.type_labels());
        v
    }

    pub fn validate(&self) -> Result<(), GbError> {
        let labels = self.labels();
        let mut seen = BTreeSet::new();
        for l in &labels {
            if l.is_empty() || !l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(GbError::Config(format!("`{l}` is not a valid label name")));
            }
            if !seen.insert(l) {
                return Err(GbError::Config(format!("label `{l}` is used for two roles")));
            }
        }
        if self.enabled().is_empty() {
            return Err(GbError::Config("no link type enabled".into()));
        }
        Ok(())
    }
}

fn def(name: &str, params: &[&str], body: Formula) -> Definition {
    Definition::new(name, params, body)
}

/// Target, Base, antecedent/trace roles, c-command, intervention, barriers,
/// feature agreement and Ā-antecedent government.
pub fn emit_gb_core(cfg: &GbConfig) -> Result<Theory, GbError> {
    cfg.validate()?;
    let mut t = Theory::new();
    for l in cfg.labels() {
        t.add_label(&l)?;
    }
    let (tgt, tr, base) = (&cfg.target, &cfg.trace, &cfg.base);
    let defs = [
        def("Target", &["x"], or(label(tgt, "x"), not(or(label(base, "x"), label(tr, "x"))))),
        def("Base", &["x"], or(label(base, "x"), not(or(label(tgt, "x"), label(tr, "x"))))),
        def("Ante", &["x"], or(label(tgt, "x"), label(tr, "x"))),
        def("Trace", &["x"], or(label(tr, "x"), label(base, "x"))),
        def("PDom", &["x", "y"], and(dom("x", "y"), not(eq("x", "y")))),
        def(
            "Branching",
            &["w"],
            ex("u", ex("v", and_all([crate::formula::idom("w", "u"), crate::formula::idom("w", "v"), not(eq("u", "v"))]))),
        ),
        def(
            "CCommands",
            &["x", "y"],
            and_all([
                not(dom("x", "y")),
                not(dom("y", "x")),
                all("w", implies(and(apply("PDom", &["w", "x"]), apply("Branching", &["w"])), dom("w", "y"))),
            ]),
        ),
        def("Intervenes", &["z", "x", "y"], and_all([not(dom("z", "x")), dom("z", "y"), not(eq("z", "y"))])),
        def(
            "InterveningBarrier",
            &["z", "x", "y"],
            and(label(&cfg.barrier, "z"), apply("Intervenes", &["z", "x", "y"])),
        ),
        def("FEq", &["x", "y"], and_all(cfg.agreement.iter().map(|f| iff(label(f, "x"), label(f, "y"))))),
        governs_definition("ABarAntecedentGoverns", not(label(&cfg.a_pos, "x")), and(label(&cfg.spec, "z"), not(label(&cfg.a_pos, "z")))),
    ];
    for d in defs {
        t.add_definition(d)?;
    }
    Ok(t)
}

/// `guard(x) ∧ C-Commands(x,y) ∧ F.Eq(x,y) ∧ ¬∃z Intervening-Barrier(z,x,y)
/// ∧ ¬∃z[rival(z) ∧ C-Commands(z,x) ∧ Intervenes(z,x,y)]`.
fn governs_definition(name: &str, guard: Formula, rival: Formula) -> Definition {
    let guard = (guard != Formula::True).then_some(guard);
    let body = and_all(guard.into_iter().chain([
        apply("CCommands", &["x", "y"]),
        apply("FEq", &["x", "y"]),
        not(ex("z", apply("InterveningBarrier", &["z", "x", "y"]))),
        not(ex(
            "z",
            and_all([rival, apply("CCommands", &["z", "x"]), apply("Intervenes", &["z", "x", "y"])]),
        )),
    ]));
    def(name, &["x", "y"], body)
}

fn typed(l: &str) -> Formula {
    and_all([label(l, "x"), label(l, "y"), apply("Ante", &["x"]), apply("Trace", &["y"])])
}

/// One definition per enabled link type, then `Link` as their disjunction.
pub fn emit_link(cfg: &GbConfig) -> Result<Vec<Definition>, GbError> {
    cfg.validate()?;
    let mut out = Vec::new();
    for t in cfg.enabled() {
        match t {
            LinkType::A => {
                let a = &cfg.a_pos;
                out.push(governs_definition("AAntecedentGoverns", label(a, "x"), label(a, "z")));
                out.push(def("ALink", &["x", "y"], and(typed(&cfg.a_label), apply("AAntecedentGoverns", &["x", "y"]))));
            }
            LinkType::ABarNonRef => {
                out.push(def(
                    "ABarNonRefLink",
                    &["x", "y"],
                    and(typed(&cfg.abar_label), apply("ABarAntecedentGoverns", &["x", "y"])),
                ));
            }
            LinkType::ABarRef => {
                // Same index, c-command, and no same-index trace in between.
                let per_index = cfg.ref_labels().into_iter().map(|r| {
                    and_all([
                        typed(&r),
                        not(label(&cfg.a_pos, "x")),
                        apply("CCommands", &["x", "y"]),
                        not(ex(
                            "z",
                            and_all([
                                label(&r, "z"),
                                apply("Trace", &["z"]),
                                apply("CCommands", &["x", "z"]),
                                apply("CCommands", &["z", "y"]),
                            ]),
                        )),
                    ])
                });
                out.push(def("ABarRefLink", &["x", "y"], or_all(per_index)));
            }
            LinkType::X0 => {
                let h = &cfg.x0_label;
                out.push(governs_definition("X0AntecedentGoverns", Formula::True, label(h, "z")));
                out.push(def("X0Link", &["x", "y"], and(typed(h), apply("X0AntecedentGoverns", &["x", "y"]))));
            }
            LinkType::Right => {
                let r = &cfg.right_label;
                out.push(governs_definition("RightAntecedentGoverns", prec("y", "x"), label(r, "z")));
                out.push(def("RightLink", &["x", "y"], and(typed(r), apply("RightAntecedentGoverns", &["x", "y"]))));
            }
        }
    }
    let link = or_all(cfg.enabled().into_iter().map(|t| apply(t.definition_name(), &["x", "y"])));
    out.push(def("Link", &["x", "y"], link));
    Ok(out)
}

/// `Chain(X)` with the five displayed conjuncts.
pub fn emit_chain() -> Definition {
    let body = and_all([
        ex_unique("x", and(in_set("X", "x"), apply("Target", &["x"]))),
        ex_unique("x", and(in_set("X", "x"), apply("Base", &["x"]))),
        all(
            "x",
            implies(
                and(in_set("X", "x"), not(apply("Target", &["x"]))),
                ex_unique("y", and(in_set("X", "y"), apply("Link", &["y", "x"]))),
            ),
        ),
        all(
            "x",
            implies(
                and(in_set("X", "x"), not(apply("Base", &["x"]))),
                ex_unique("y", and(in_set("X", "y"), apply("Link", &["x", "y"]))),
            ),
        ),
        all(
            "x",
            all(
                "y",
                implies(
                    and(in_set("X", "x"), or(apply("Link", &["x", "y"]), apply("Link", &["y", "x"]))),
                    in_set("X", "y"),
                ),
            ),
        ),
    ]);
    def("Chain", &["X"], body)
}

/// Core plus links, `Chain`, and the axioms: movement markers and type
/// labels are exclusive, every node lies in a chain, and the link relations
/// are pairwise exclusive.
pub fn gb_theory(cfg: &GbConfig) -> Result<Theory, GbError> {
    let mut t = emit_gb_core(cfg)?;
    for d in emit_link(cfg)? {
        t.add_definition(d)?;
    }
    t.add_definition(emit_chain())?;
    let pairwise = |ls: &[String]| {
        let mut v = Vec::new();
        for (i, a) in ls.iter().enumerate() {
            for b in &ls[i + 1..] {
                v.push(not(and(label(a, "x"), label(b, "x"))));
            }
        }
        v
    };
    let markers = [cfg.target.clone(), cfg.trace.clone(), cfg.base.clone()];
    t.add_axiom(all("x", and_all(pairwise(&markers))));
    let types = cfg.type_labels();
    if types.len() > 1 {
        t.add_axiom(all("x", and_all(pairwise(&types))));
    }
    t.add_axiom(all("x", ex_set("X", and(apply("Chain", &["X"]), in_set("X", "x")))));
    let enabled = cfg.enabled();
    for (i, a) in enabled.iter().enumerate() {
        for b in &enabled[i + 1..] {
            t.add_axiom(all(
                "x",
                all("y", not(and(apply(a.definition_name(), &["x", "y"]), apply(b.definition_name(), &["x", "y"])))),
            ));
        }
    }
    t.validate()?;
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainInfo {
    /// Members from Target to Base, following Link.
    pub members: Vec<GornAddress>,
    /// `None` for trivial chains.
    pub link_type: Option<LinkType>,
}

impl ChainInfo {
    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub chains: Vec<ChainInfo>,
    /// Largest number of same-type nontrivial chains whose spans share a
    /// node; 1 when there are none.
    pub max_overlap: usize,
}

/// Nodes on the paths from the members' lowest common ancestor down to each
/// member.
pub fn chain_span(tree: &LabeledTree, members: &[usize]) -> BTreeSet<usize> {
    let ancestors = |mut i: usize| {
        let mut v = vec![i];
        while let Some(p) = tree.parent(i) {
            v.push(p);
            i = p;
        }
        v
    };
    let mut lca = members[0];
    for &m in &members[1..] {
        while !tree.dom_idx(lca, m) {
            lca = tree.parent(lca).expect("root dominates everything");
        }
    }
    let mut span = BTreeSet::new();
    for &m in members {
        for a in ancestors(m) {
            span.insert(a);
            if a == lca {
                break;
            }
        }
    }
    span
}

/// All chains of `tree`, checked to partition its nodes, with their types
/// and the overlap count.
pub fn chain_report(tree: &LabeledTree, cfg: &GbConfig) -> Result<ChainReport, GbError> {
    chain_report_with(tree, cfg, CheckerConfig::default())
}

pub fn chain_report_with(tree: &LabeledTree, cfg: &GbConfig, ccfg: CheckerConfig) -> Result<ChainReport, GbError> {
    chain_report_in(tree, &gb_theory(cfg)?, cfg, ccfg)
}

/// As [`chain_report`], reading `Chain`, `Link`, `Target` and the per-type
/// link definitions from `th` instead of emitting them.
pub fn chain_report_in(tree: &LabeledTree, th: &Theory, cfg: &GbConfig, ccfg: CheckerConfig) -> Result<ChainReport, GbError> {
    let n = tree.len();
    let sets = find_assignments_with_config(tree, th, &apply("Chain", &["X"]), &["X".to_string()], ccfg)?;
    let chains: Vec<Vec<usize>> = sets
        .iter()
        .map(|v| v.sets["X"].iter().map(|a| tree.index_of(a).expect("in domain")).collect())
        .collect();

    let mut count = vec![0usize; n];
    for c in &chains {
        for &i in c {
            count[i] += 1;
        }
    }
    if let Some(i) = (0..n).find(|&i| count[i] != 1) {
        return Err(GbError::PartitionViolation { node: tree.address(i).clone(), count: count[i] });
    }

    let xy = ["x".to_string(), "y".to_string()];
    let pairs = |name: &str| -> Result<BTreeSet<(usize, usize)>, GbError> {
        Ok(find_assignments_with_config(tree, th, &apply(name, &["x", "y"]), &xy, ccfg)?
            .into_iter()
            .map(|v| (tree.index_of(&v.nodes["x"]).unwrap(), tree.index_of(&v.nodes["y"]).unwrap()))
            .collect())
    };
    let link = pairs("Link")?;
    let mut typed: BTreeMap<LinkType, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for t in cfg.enabled() {
        typed.insert(t, pairs(t.definition_name())?);
    }
    let target = pairs_unary(tree, th, "Target", ccfg)?;

    let mut infos = Vec::new();
    for c in &chains {
        let head = *c.iter().find(|i| target.contains(i)).expect("Chain has a Target");
        let mut order = vec![head];
        while let Some(&next) = c.iter().find(|&&j| link.contains(&(*order.last().unwrap(), j)) && !order.contains(&j)) {
            order.push(next);
        }
        let link_type = order
            .windows(2)
            .next()
            .and_then(|w| typed.iter().find(|(_, s)| s.contains(&(w[0], w[1]))).map(|(t, _)| *t));
        infos.push(ChainInfo { members: order.iter().map(|&i| tree.address(i).clone()).collect(), link_type });
    }

    let mut max_overlap = 1;
    for t in cfg.enabled() {
        let mut cover = vec![0usize; n];
        for (info, c) in infos.iter().zip(&chains) {
            if info.link_type == Some(t) {
                for i in chain_span(tree, c) {
                    cover[i] += 1;
                }
            }
        }
        max_overlap = max_overlap.max(cover.into_iter().max().unwrap_or(0));
    }
    Ok(ChainReport { chains: infos, max_overlap })
}

fn pairs_unary(tree: &LabeledTree, th: &Theory, name: &str, ccfg: CheckerConfig) -> Result<BTreeSet<usize>, GbError> {
    Ok(find_assignments_with_config(tree, th, &apply(name, &["x"]), &["x".to_string()], ccfg)?
        .into_iter()
        .map(|v| tree.index_of(&v.nodes["x"]).unwrap())
        .collect())
}
