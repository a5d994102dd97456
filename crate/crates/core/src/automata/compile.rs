//! Formula → automaton translation.
//!
//! Node variables are encoded as set variables constrained to singletons.
//! The automaton built for a subformula ψ accepts exactly the encodings in
//! which every free node variable of ψ marks a single node and ψ holds;
//! free set variables are unconstrained. Atoms get hand-built automata,
//! `∧` is a product, `∨` a union (each side first constrained to the other
//! side's node variables), `¬` a complement followed by the singleton
//! constraints, `∃` a projection, and `∀` goes through `¬∃¬`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Alphabet, AutomatonError, State, TreeAutomaton, DEFAULT_STATE_CAP};
use crate::formula::{Formula, FreshNames, Quantifier, Sort};
use crate::theory::Theory;
use crate::tree::Relation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    pub max_branching: usize,
    pub state_cap: usize,
}

impl CompileOptions {
    pub fn new(max_branching: usize) -> Self {
        CompileOptions { max_branching, state_cap: DEFAULT_STATE_CAP }
    }
}

/// Automaton for the closed formula `f` over trees of branching ≤ `k`,
/// labeled from the theory's labels.
pub fn compile(theory: &Theory, f: &Formula, k: usize) -> Result<TreeAutomaton, AutomatonError> {
    compile_with(theory, f, CompileOptions::new(k))
}

pub fn compile_with(theory: &Theory, f: &Formula, opts: CompileOptions) -> Result<TreeAutomaton, AutomatonError> {
    let expanded = theory.expand(f)?;
    let fv = expanded.free_vars();
    if !fv.is_empty() {
        return Err(AutomatonError::NotClosed(fv.nodes.into_iter().chain(fv.sets).collect()));
    }
    let a = compile_open_expanded(theory, &expanded, opts)?;
    Ok(a.drop_variables())
}

/// Automaton for the conjunction of a theory's axioms, with constants
/// eliminated.
pub fn compile_theory(theory: &Theory, opts: CompileOptions) -> Result<TreeAutomaton, AutomatonError> {
    let th = theory.eliminate_constants();
    let conj = crate::formula::and_all(th.axioms.iter().cloned());
    compile_with(&th, &conj, opts)
}

/// Like [`compile`] but allows free variables, which become variable bits of
/// the alphabet (bound variables are renamed apart and also get bits).
pub fn compile_open(theory: &Theory, f: &Formula, opts: CompileOptions) -> Result<TreeAutomaton, AutomatonError> {
    let expanded = theory.expand(f)?;
    compile_open_expanded(theory, &expanded, opts)
}

fn compile_open_expanded(theory: &Theory, f: &Formula, opts: CompileOptions) -> Result<TreeAutomaton, AutomatonError> {
    if opts.max_branching == 0 {
        return Err(AutomatonError::ZeroBranching);
    }
    let mut names = BTreeSet::new();
    f.all_names(&mut names);
    let mut fresh = FreshNames::new(names);
    let renamed = rename_binders(f, &mut fresh);

    let mut labels = theory.labels.clone();
    let mut variables: Vec<String> = Vec::new();
    let fv = renamed.free_vars();
    variables.extend(fv.nodes.iter().cloned());
    variables.extend(fv.sets.iter().cloned());
    renamed.visit(&mut |g| match g {
        Formula::Label(l, _) if !labels.contains(l) => labels.push(l.clone()),
        Formula::Quant(_, v, _) => variables.push(v.clone()),
        _ => {}
    });
    let alphabet = Alphabet::new(labels, variables, opts.max_branching);
    if alphabet.bits() > 64 {
        return Err(AutomatonError::AlphabetTooLarge);
    }
    let mut c = Compiler { alphabet, cap: opts.state_cap, sing: HashMap::new() };
    c.translate(&renamed)
}

/// Gives every binder a distinct name not used anywhere else.
fn rename_binders(f: &Formula, fresh: &mut FreshNames) -> Formula {
    let bx = Box::new;
    match f {
        Formula::Quant(q, v, body) => {
            let nv = fresh.next(v);
            let body = body.substitute(&BTreeMap::from([(v.clone(), nv.clone())]));
            Formula::Quant(*q, nv, bx(rename_binders(&body, fresh)))
        }
        Formula::Not(a) => Formula::Not(bx(rename_binders(a, fresh))),
        Formula::And(a, b) => Formula::And(bx(rename_binders(a, fresh)), bx(rename_binders(b, fresh))),
        Formula::Or(a, b) => Formula::Or(bx(rename_binders(a, fresh)), bx(rename_binders(b, fresh))),
        Formula::Implies(a, b) => Formula::Implies(bx(rename_binders(a, fresh)), bx(rename_binders(b, fresh))),
        Formula::Iff(a, b) => Formula::Iff(bx(rename_binders(a, fresh)), bx(rename_binders(b, fresh))),
        other => other.clone(),
    }
}

struct Compiler {
    alphabet: Alphabet,
    cap: usize,
    sing: HashMap<usize, TreeAutomaton>,
}

/// Position of global bit `b` in a sorted care list.
fn local(care: &[usize], b: usize) -> u32 {
    care.iter().position(|&x| x == b).expect("bit in care set") as u32
}

fn has(sym: u32, j: u32) -> bool {
    sym >> j & 1 == 1
}

impl Compiler {
    fn var_bit(&self, v: &str) -> usize {
        self.alphabet.variable_bit(v).expect("every variable has a bit")
    }

    fn label_bit(&self, l: &str) -> usize {
        self.alphabet.label_bit(l).expect("every label has a bit")
    }

    fn care(bits: &[usize]) -> Vec<usize> {
        let s: BTreeSet<usize> = bits.iter().copied().collect();
        s.into_iter().collect()
    }

    /// Exactly one node carries `x`; optionally that node also carries
    /// `with` (a label or set-variable bit).
    fn marked_once(&self, x: usize, with: Option<usize>) -> TreeAutomaton {
        let care = Self::care(&[Some(x), with].into_iter().flatten().collect::<Vec<_>>());
        let jx = local(&care, x);
        let jw = with.map(|w| local(&care, w));
        TreeAutomaton::from_fn(self.alphabet.clone(), care, 2, &[1], |t, s| {
            let seen = t.iter().filter(|&&q| q == 1).count() + has(s, jx) as usize;
            if seen > 1 {
                return None;
            }
            if has(s, jx) && jw.is_some_and(|j| !has(s, j)) {
                return None;
            }
            Some(seen as State)
        })
    }

    fn singleton(&mut self, v: &str) -> TreeAutomaton {
        let b = self.var_bit(v);
        if let Some(a) = self.sing.get(&b) {
            return a.clone();
        }
        let a = self.marked_once(b, None);
        self.sing.insert(b, a.clone());
        a
    }

    fn relation(&self, r: Relation, x: &str, y: &str) -> TreeAutomaton {
        let (bx, by) = (self.var_bit(x), self.var_bit(y));
        if x == y {
            return match r {
                Relation::Eq | Relation::Dom => self.marked_once(bx, None),
                Relation::Idom | Relation::Prec => TreeAutomaton::empty(self.alphabet.clone()),
            };
        }
        let care = Self::care(&[bx, by]);
        let (jx, jy) = (local(&care, bx), local(&care, by));
        let a = self.alphabet.clone();
        match r {
            // 0: neither seen, 1: both seen.
            Relation::Eq => TreeAutomaton::from_fn(a, care, 2, &[1], move |t, s| {
                let c = t.iter().filter(|&&q| q == 1).count();
                match (has(s, jx), has(s, jy)) {
                    (true, true) if c == 0 => Some(1),
                    (false, false) if c <= 1 => Some(c as State),
                    _ => None,
                }
            }),
            // 0: nothing, 1: y seen below, 2: x above y.
            Relation::Dom => TreeAutomaton::from_fn(a, care, 3, &[2], move |t, s| {
                let nz: Vec<State> = t.iter().copied().filter(|&q| q != 0).collect();
                if nz.len() > 1 {
                    return None;
                }
                match (nz.first(), has(s, jx), has(s, jy)) {
                    (Some(2), false, false) => Some(2),
                    (Some(1), false, false) => Some(1),
                    (Some(1), true, false) => Some(2),
                    (None, true, true) => Some(2),
                    (None, false, true) => Some(1),
                    (None, false, false) => Some(0),
                    _ => None,
                }
            }),
            // 0: nothing, 1: this node is y, 2: x is y's parent.
            Relation::Idom => TreeAutomaton::from_fn(a, care, 3, &[2], move |t, s| {
                let nz: Vec<State> = t.iter().copied().filter(|&q| q != 0).collect();
                if nz.len() > 1 {
                    return None;
                }
                match (nz.first(), has(s, jx), has(s, jy)) {
                    (None, false, true) => Some(1),
                    (None, false, false) => Some(0),
                    (Some(1), true, false) => Some(2),
                    (Some(2), false, false) => Some(2),
                    _ => None,
                }
            }),
            // 0: nothing, 1: x seen, 2: y seen, 3: x in an earlier sibling subtree than y.
            Relation::Prec => TreeAutomaton::from_fn(a, care, 4, &[3], move |t, s| {
                let nz: Vec<State> = t.iter().copied().filter(|&q| q != 0).collect();
                match (nz.as_slice(), has(s, jx), has(s, jy)) {
                    ([], true, false) => Some(1),
                    ([], false, true) => Some(2),
                    ([], false, false) => Some(0),
                    ([q], false, false) => Some(*q),
                    ([1, 2], false, false) => Some(3),
                    _ => None,
                }
            }),
        }
    }

    fn pad(&mut self, a: TreeAutomaton, vars: &BTreeSet<String>) -> Result<TreeAutomaton, AutomatonError> {
        let mut a = a;
        for v in vars {
            let s = self.singleton(v);
            a = a.product(&s, self.cap)?;
        }
        Ok(a)
    }

    fn translate(&mut self, f: &Formula) -> Result<TreeAutomaton, AutomatonError> {
        let a = match f {
            Formula::True => TreeAutomaton::universal(self.alphabet.clone()),
            Formula::False => TreeAutomaton::empty(self.alphabet.clone()),
            Formula::Rel(r, x, y) => self.relation(*r, x, y),
            Formula::Label(l, x) => self.marked_once(self.var_bit(x), Some(self.label_bit(l))),
            Formula::InSet(s, x) => {
                let (bx, bs) = (self.var_bit(x), self.var_bit(s));
                if bx == bs {
                    unreachable!("sorts keep set and node names apart")
                }
                self.marked_once(bx, Some(bs))
            }
            Formula::Not(g) => {
                let a = self.translate(g)?;
                let c = a.complement(self.cap)?;
                self.pad(c, &g.free_vars().nodes)?
            }
            Formula::And(x, y) => {
                let a = self.translate(x)?;
                let b = self.translate(y)?;
                a.product(&b, self.cap)?
            }
            Formula::Or(x, y) => {
                let (fx, fy) = (x.free_vars().nodes, y.free_vars().nodes);
                let a = self.translate(x)?;
                let a = self.pad(a, &fy.difference(&fx).cloned().collect())?;
                let b = self.translate(y)?;
                let b = self.pad(b, &fx.difference(&fy).cloned().collect())?;
                a.union(&b)?
            }
            Formula::Implies(x, y) => {
                return self.translate(&Formula::Or(Box::new(Formula::Not(x.clone())), y.clone()));
            }
            Formula::Iff(x, y) => {
                let both = Formula::And(x.clone(), y.clone());
                let neither = Formula::And(Box::new(Formula::Not(x.clone())), Box::new(Formula::Not(y.clone())));
                return self.translate(&Formula::Or(Box::new(both), Box::new(neither)));
            }
            Formula::Quant(q, v, body) => match q {
                Quantifier::ExistsNode | Quantifier::ExistsSet => {
                    let a = self.translate(body)?;
                    a.project(self.var_bit(v))
                }
                Quantifier::ForallNode | Quantifier::ForallSet => {
                    let dual = if q.sort() == Sort::Node { Quantifier::ExistsNode } else { Quantifier::ExistsSet };
                    let inner = Formula::Quant(dual, v.clone(), Box::new(Formula::Not(body.clone())));
                    return self.translate(&Formula::Not(Box::new(inner)));
                }
                Quantifier::ExistsUniqueNode => unreachable!("desugared by expand"),
            },
            Formula::Apply(..) => unreachable!("expanded before compilation"),
        };
        Ok(a)
    }
}
