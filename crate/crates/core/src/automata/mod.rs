//! Bottom-up tree automata over bounded-branching labeled trees.
//!
//! A symbol is a bit vector over the alphabet's label bits followed by its
//! variable bits, together with an arity in `0..=k` (the arity is implicit in
//! the length of a transition's child tuple). Each automaton inspects only a
//! sorted subset of the global bits, its `care` set; transitions are indexed by
//! a *local symbol* whose bit `j` is global bit `care[j]`. Bits outside the
//! care set are ignored, which keeps the tables of intermediate automata
//! small during compilation.
//!
//! Missing transitions reject. Determinized automata are complete over their
//! reachable states.

mod cfg;
mod compile;
mod format;
mod witness;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::Valuation;
use crate::theory::TheoryError;
use crate::tree::LabeledTree;

pub use cfg::{cfg_to_theory, grammar_automaton, Grammar, GrammarError};
pub use compile::{compile, compile_open, compile_theory, compile_with, CompileOptions};
pub use format::{from_json, to_json, FORMAT_VERSION};
pub use witness::Equivalence;

pub type State = u32;

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    pub labels: Vec<String>,
    pub variables: Vec<String>,
    pub max_branching: usize,
}

impl Alphabet {
    pub fn new(labels: Vec<String>, variables: Vec<String>, max_branching: usize) -> Self {
        Alphabet { labels, variables, max_branching }
    }

    pub fn bits(&self) -> usize {
        self.labels.len() + self.variables.len()
    }

    pub fn label_bit(&self, l: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    pub fn variable_bit(&self, v: &str) -> Option<usize> {
        self.variables.iter().position(|x| x == v).map(|i| i + self.labels.len())
    }

    pub fn is_variable_bit(&self, bit: usize) -> bool {
        bit >= self.labels.len()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("maximum branching must be at least 1")]
    ZeroBranching,
    #[error("automaton exceeds the state cap of {cap}")]
    StateCapExceeded { cap: usize },
    #[error("automata have different alphabets")]
    AlphabetMismatch,
    #[error("node with {branching} children exceeds the automaton's branching bound {k}")]
    BranchingExceedsK { branching: usize, k: usize },
    #[error("label `{0}` is not in the automaton's alphabet")]
    UnknownLabel(String),
    #[error("variable `{0}` is not in the automaton's alphabet")]
    UnknownVariable(String),
    #[error("alphabet has more than 64 bits")]
    AlphabetTooLarge,
    #[error("formula has free variables: {0:?}")]
    NotClosed(Vec<String>),
    #[error("malformed automaton: {0}")]
    Format(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAutomaton {
    alphabet: Alphabet,
    care: Vec<usize>,
    states: usize,
    finals: Vec<bool>,
    rules: HashMap<Vec<State>, Vec<Vec<State>>>,
    deterministic: bool,
}

/// `table[s]` = the local symbol over `narrow` seen by wide local symbol `s`.
fn restrict_table(wide: &[usize], narrow: &[usize]) -> Vec<u32> {
    let pos: Vec<usize> = narrow.iter().map(|b| wide.iter().position(|w| w == b).expect("narrow ⊆ wide")).collect();
    (0..1u32 << wide.len())
        .map(|s| pos.iter().enumerate().fold(0u32, |acc, (j, &p)| acc | ((s >> p) & 1) << j))
        .collect()
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let s: BTreeSet<usize> = a.iter().chain(b).copied().collect();
    s.into_iter().collect()
}

/// Calls `f` on every tuple of length `m` over `0..=i` that contains `i`,
/// each exactly once.
fn for_each_tuple_with(i: u32, m: usize, f: &mut impl FnMut(&[State])) {
    let mut t = vec![0u32; m];
    for first in 0..m {
        // positions < first range over 0..i, position `first` is i, the rest 0..=i.
        t[first] = i;
        let free: Vec<(usize, u32)> =
            (0..m).filter(|&p| p != first).map(|p| (p, if p < first { i } else { i + 1 })).collect();
        if free.iter().any(|&(_, r)| r == 0) {
            continue;
        }
        for &(p, _) in &free {
            t[p] = 0;
        }
        loop {
            f(&t);
            let mut carry = true;
            for &(p, r) in free.iter().rev() {
                t[p] += 1;
                if t[p] < r {
                    carry = false;
                    break;
                }
                t[p] = 0;
            }
            if carry {
                break;
            }
        }
    }
}

/// Calls `f` on every element of the cartesian product of `sets`.
fn for_each_product(sets: &[&[State]], buf: &mut Vec<State>, f: &mut impl FnMut(&[State])) {
    if buf.len() == sets.len() {
        f(buf);
        return;
    }
    for &q in sets[buf.len()] {
        buf.push(q);
        for_each_product(sets, buf, f);
        buf.pop();
    }
}

fn normalize(v: &mut Vec<State>) {
    v.sort_unstable();
    v.dedup();
}

impl TreeAutomaton {
    /// Builds an automaton from explicit parts. `rules` maps a child tuple to
    /// the targets for each local symbol.
    pub fn from_parts(
        alphabet: Alphabet,
        care: Vec<usize>,
        states: usize,
        finals: Vec<bool>,
        rules: HashMap<Vec<State>, Vec<Vec<State>>>,
    ) -> Self {
        let mut a = TreeAutomaton { alphabet, care, states, finals, rules, deterministic: false };
        for tg in a.rules.values_mut() {
            for t in tg.iter_mut() {
                normalize(t);
            }
        }
        a.rules.retain(|_, tg| tg.iter().any(|t| !t.is_empty()));
        a.deterministic = a.compute_deterministic();
        a
    }

    /// Accepts nothing.
    pub fn empty(alphabet: Alphabet) -> Self {
        TreeAutomaton { alphabet, care: Vec::new(), states: 0, finals: Vec::new(), rules: HashMap::new(), deterministic: true }
    }

    /// Accepts every tree of branching at most k.
    pub fn universal(alphabet: Alphabet) -> Self {
        let k = alphabet.max_branching;
        let mut rules = HashMap::new();
        for m in 0..=k {
            rules.insert(vec![0; m], vec![vec![0]]);
        }
        TreeAutomaton { alphabet, care: Vec::new(), states: 1, finals: vec![true], rules, deterministic: true }
    }

    /// Builds an automaton by evaluating a local transition function on every
    /// child tuple and local symbol.
    pub(crate) fn from_fn(
        alphabet: Alphabet,
        care: Vec<usize>,
        states: usize,
        finals: &[State],
        delta: impl Fn(&[State], u32) -> Option<State>,
    ) -> Self {
        let k = alphabet.max_branching;
        let syms = 1u32 << care.len();
        let mut rules = HashMap::new();
        for m in 0..=k {
            let mut t = vec![0u32; m];
            for idx in 0..states.pow(m as u32) {
                let mut x = idx;
                for slot in t.iter_mut().rev() {
                    *slot = (x % states) as State;
                    x /= states;
                }
                let tg: Vec<Vec<State>> = (0..syms).map(|s| delta(&t, s).into_iter().collect()).collect();
                if tg.iter().any(|x| !x.is_empty()) {
                    rules.insert(t.clone(), tg);
                }
            }
        }
        let mut fin = vec![false; states];
        for &f in finals {
            fin[f as usize] = true;
        }
        TreeAutomaton { alphabet, care, states, finals: fin, rules, deterministic: true }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn care(&self) -> &[usize] {
        &self.care
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn num_transitions(&self) -> usize {
        self.rules.values().map(|tg| tg.iter().map(Vec::len).sum::<usize>()).sum()
    }

    pub fn finals(&self) -> impl Iterator<Item = State> + '_ {
        self.finals.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i as State)
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q as usize]
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn max_branching(&self) -> usize {
        self.alphabet.max_branching
    }

    fn sym_count(&self) -> u32 {
        1 << self.care.len()
    }

    pub(crate) fn rules(&self) -> &HashMap<Vec<State>, Vec<Vec<State>>> {
        &self.rules
    }

    pub fn targets(&self, children: &[State], sym: u32) -> &[State] {
        self.rules.get(children).map(|tg| tg[sym as usize].as_slice()).unwrap_or(&[])
    }

    fn compute_deterministic(&self) -> bool {
        self.rules.values().all(|tg| tg.iter().all(|t| t.len() <= 1))
    }

    /// Local symbol seen at a node whose global bits are `mask`.
    pub fn local_symbol(&self, mask: u64) -> u32 {
        self.care.iter().enumerate().fold(0u32, |acc, (j, &b)| acc | (((mask >> b) & 1) as u32) << j)
    }

    /// Global bit mask of a local symbol.
    pub fn global_mask(&self, sym: u32) -> u64 {
        self.care.iter().enumerate().fold(0u64, |acc, (j, &b)| acc | (((sym >> j) & 1) as u64) << b)
    }

    /// Local symbols whose variable bits are all zero.
    pub(crate) fn label_symbols(&self) -> Vec<u32> {
        let var_bits: u32 = self
            .care
            .iter()
            .enumerate()
            .filter(|(_, &b)| self.alphabet.is_variable_bit(b))
            .fold(0, |acc, (j, _)| acc | 1 << j);
        (0..self.sym_count()).filter(|s| s & var_bits == 0).collect()
    }

    /// Global bit masks for each node of `tree` (labels only).
    pub fn label_masks(&self, tree: &LabeledTree) -> Result<Vec<u64>, AutomatonError> {
        if self.alphabet.bits() > 64 {
            return Err(AutomatonError::AlphabetTooLarge);
        }
        (0..tree.len())
            .map(|i| {
                tree.labels(i).iter().try_fold(0u64, |m, l| {
                    let b = self.alphabet.label_bit(l).ok_or_else(|| AutomatonError::UnknownLabel(l.clone()))?;
                    Ok(m | 1 << b)
                })
            })
            .collect()
    }

    /// True iff some run on `tree` reaches a final state at the root.
    /// Variable bits are all zero.
    pub fn run(&self, tree: &LabeledTree) -> Result<bool, AutomatonError> {
        let masks = self.label_masks(tree)?;
        self.run_masks(tree, &masks)
    }

    /// Runs with variable bits taken from `v`: a node variable marks one
    /// node, a set variable marks its members.
    pub fn run_with(&self, tree: &LabeledTree, v: &Valuation) -> Result<bool, AutomatonError> {
        let mut masks = self.label_masks(tree)?;
        let idx = |a| tree.index_of(a).ok_or_else(|| AutomatonError::Format(format!("address {a} not in tree")));
        for (name, a) in &v.nodes {
            let b = self.alphabet.variable_bit(name).ok_or_else(|| AutomatonError::UnknownVariable(name.clone()))?;
            masks[idx(a)?] |= 1 << b;
        }
        for (name, s) in &v.sets {
            let b = self.alphabet.variable_bit(name).ok_or_else(|| AutomatonError::UnknownVariable(name.clone()))?;
            for a in s {
                masks[idx(a)?] |= 1 << b;
            }
        }
        self.run_masks(tree, &masks)
    }

    /// Runs on the shape of `tree` with per-node global bit masks.
    pub fn run_masks(&self, tree: &LabeledTree, masks: &[u64]) -> Result<bool, AutomatonError> {
        let k = self.alphabet.max_branching;
        if tree.max_branching() > k {
            return Err(AutomatonError::BranchingExceedsK { branching: tree.max_branching(), k });
        }
        let syms: Vec<u32> = masks.iter().map(|&m| self.local_symbol(m)).collect();
        let reach = self.reachable_sets(tree, |i| std::slice::from_ref(&syms[i]));
        Ok(reach[0].iter().any(|&q| self.finals[q as usize]))
    }

    /// Bottom-up sets of reachable states where node `i` may carry any of
    /// `allowed(i)`.
    pub(crate) fn reachable_sets<'s>(&self, tree: &LabeledTree, allowed: impl Fn(usize) -> &'s [u32]) -> Vec<Vec<State>> {
        let n = tree.len();
        let mut sets: Vec<Vec<State>> = vec![Vec::new(); n];
        let mut buf = Vec::new();
        for i in (0..n).rev() {
            let ch: Vec<&[State]> = tree.children(i).iter().map(|&c| sets[c].as_slice()).collect();
            let mut out = Vec::new();
            if ch.iter().all(|s| !s.is_empty()) {
                let syms = allowed(i);
                for_each_product(&ch, &mut buf, &mut |t| {
                    if let Some(tg) = self.rules.get(t) {
                        for &s in syms {
                            out.extend_from_slice(&tg[s as usize]);
                        }
                    }
                });
                normalize(&mut out);
            }
            sets[i] = out;
        }
        sets
    }

    fn check_compatible(&self, other: &Self) -> Result<(), AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        Ok(())
    }

    /// Same language with a larger care set.
    fn widen(&self, care: &[usize]) -> Self {
        if care == self.care.as_slice() {
            return self.clone();
        }
        let table = restrict_table(care, &self.care);
        let rules = self
            .rules
            .iter()
            .map(|(t, tg)| (t.clone(), table.iter().map(|&s| tg[s as usize].clone()).collect()))
            .collect();
        TreeAutomaton { care: care.to_vec(), rules, ..self.clone() }
    }

    /// Intersection, built over reachable state pairs only.
    pub fn product(&self, other: &Self, cap: usize) -> Result<Self, AutomatonError> {
        self.check_compatible(other)?;
        let k = self.alphabet.max_branching;
        let care = sorted_union(&self.care, &other.care);
        let ra = restrict_table(&care, &self.care);
        let rb = restrict_table(&care, &other.care);
        let syms = 1usize << care.len();

        let mut pairs: Vec<(State, State)> = Vec::new();
        let mut index: HashMap<(State, State), State> = HashMap::new();
        let mut rules: HashMap<Vec<State>, Vec<Vec<State>>> = HashMap::new();
        let mut process = |t: &[State], pairs: &mut Vec<(State, State)>, index: &mut HashMap<(State, State), State>| {
            let ta: Vec<State> = t.iter().map(|&p| pairs[p as usize].0).collect();
            let tb: Vec<State> = t.iter().map(|&p| pairs[p as usize].1).collect();
            let (Some(ga), Some(gb)) = (self.rules.get(&ta), other.rules.get(&tb)) else { return };
            let mut tg: Vec<Vec<State>> = vec![Vec::new(); syms];
            let mut any = false;
            for s in 0..syms {
                for &p in &ga[ra[s] as usize] {
                    for &q in &gb[rb[s] as usize] {
                        let id = *index.entry((p, q)).or_insert_with(|| {
                            pairs.push((p, q));
                            (pairs.len() - 1) as State
                        });
                        tg[s].push(id);
                        any = true;
                    }
                }
                normalize(&mut tg[s]);
            }
            if any {
                rules.insert(t.to_vec(), tg);
            }
        };

        process(&[], &mut pairs, &mut index);
        let mut i = 0;
        while i < pairs.len() {
            if pairs.len() > cap {
                return Err(AutomatonError::StateCapExceeded { cap });
            }
            for m in 1..=k {
                for_each_tuple_with(i as State, m, &mut |t| process(t, &mut pairs, &mut index));
            }
            i += 1;
        }
        if pairs.len() > cap {
            return Err(AutomatonError::StateCapExceeded { cap });
        }
        let finals = pairs.iter().map(|&(p, q)| self.finals[p as usize] && other.finals[q as usize]).collect();
        let mut a = TreeAutomaton {
            alphabet: self.alphabet.clone(),
            care,
            states: pairs.len(),
            finals,
            rules,
            deterministic: false,
        };
        a.deterministic = a.compute_deterministic();
        Ok(a.trim())
    }

    /// Disjoint union.
    pub fn union(&self, other: &Self) -> Result<Self, AutomatonError> {
        self.check_compatible(other)?;
        let care = sorted_union(&self.care, &other.care);
        let a = self.widen(&care);
        let b = other.widen(&care);
        let off = a.states as State;
        let mut rules = a.rules.clone();
        for (t, tg) in &b.rules {
            let t2: Vec<State> = t.iter().map(|q| q + off).collect();
            let tg2: Vec<Vec<State>> = tg.iter().map(|x| x.iter().map(|q| q + off).collect()).collect();
            match rules.get_mut(&t2) {
                Some(existing) => {
                    for (e, n) in existing.iter_mut().zip(tg2) {
                        e.extend(n);
                        normalize(e);
                    }
                }
                None => {
                    rules.insert(t2, tg2);
                }
            }
        }
        let finals = a.finals.iter().chain(&b.finals).copied().collect();
        let mut u = TreeAutomaton {
            alphabet: self.alphabet.clone(),
            care,
            states: a.states + b.states,
            finals,
            rules,
            deterministic: false,
        };
        u.deterministic = u.compute_deterministic();
        Ok(u.trim())
    }

    /// Subset construction; the result is complete over its reachable states
    /// (the empty macrostate acts as the sink).
    pub fn determinize(&self, cap: usize) -> Result<Self, AutomatonError> {
        let k = self.alphabet.max_branching;
        let syms = self.sym_count() as usize;
        let mut macros: Vec<Vec<State>> = Vec::new();
        let mut index: HashMap<Vec<State>, State> = HashMap::new();
        let mut rules: HashMap<Vec<State>, Vec<Vec<State>>> = HashMap::new();
        let mut buf = Vec::new();

        let mut process = |t: &[State], macros: &mut Vec<Vec<State>>, index: &mut HashMap<Vec<State>, State>| {
            let mut acc: Vec<Vec<State>> = vec![Vec::new(); syms];
            {
                let sets: Vec<&[State]> = t.iter().map(|&m| macros[m as usize].as_slice()).collect();
                for_each_product(&sets, &mut buf, &mut |combo| {
                    if let Some(tg) = self.rules.get(combo) {
                        for (a, x) in acc.iter_mut().zip(tg) {
                            a.extend_from_slice(x);
                        }
                    }
                });
            }
            let tg: Vec<Vec<State>> = acc
                .into_iter()
                .map(|mut s| {
                    normalize(&mut s);
                    let id = match index.get(&s) {
                        Some(&id) => id,
                        None => {
                            macros.push(s.clone());
                            index.insert(s, (macros.len() - 1) as State);
                            (macros.len() - 1) as State
                        }
                    };
                    vec![id]
                })
                .collect();
            rules.insert(t.to_vec(), tg);
        };

        process(&[], &mut macros, &mut index);
        let mut i = 0;
        while i < macros.len() {
            if macros.len() > cap {
                return Err(AutomatonError::StateCapExceeded { cap });
            }
            for m in 1..=k {
                for_each_tuple_with(i as State, m, &mut |t| process(t, &mut macros, &mut index));
            }
            i += 1;
        }
        if macros.len() > cap {
            return Err(AutomatonError::StateCapExceeded { cap });
        }
        let finals = macros.iter().map(|m| m.iter().any(|&q| self.finals[q as usize])).collect();
        Ok(TreeAutomaton {
            alphabet: self.alphabet.clone(),
            care: self.care.clone(),
            states: macros.len(),
            finals,
            rules,
            deterministic: true,
        })
    }

    /// Accepts exactly the trees (of branching ≤ k) this one rejects.
    pub fn complement(&self, cap: usize) -> Result<Self, AutomatonError> {
        let mut d = self.determinize(cap)?;
        for f in d.finals.iter_mut() {
            *f = !*f;
        }
        Ok(d)
    }

    /// Erases global bit `bit`: the image of the language under forgetting
    /// that bit.
    pub fn project(&self, bit: usize) -> Self {
        let Some(pos) = self.care.iter().position(|&b| b == bit) else {
            return self.clone();
        };
        let mut care = self.care.clone();
        care.remove(pos);
        let syms = 1u32 << care.len();
        let low = (1u32 << pos) - 1;
        let rules = self
            .rules
            .iter()
            .map(|(t, tg)| {
                let ntg = (0..syms)
                    .map(|s| {
                        let base = (s & low) | ((s & !low) << 1);
                        let mut v = tg[base as usize].clone();
                        v.extend_from_slice(&tg[(base | 1 << pos) as usize]);
                        normalize(&mut v);
                        v
                    })
                    .collect();
                (t.clone(), ntg)
            })
            .collect();
        let mut a = TreeAutomaton { care, rules, ..self.clone() };
        a.deterministic = a.compute_deterministic();
        a.trim()
    }

    /// Drops states that are unreachable or cannot contribute to an
    /// accepting run.
    pub fn trim(&self) -> Self {
        let n = self.states;
        let mut reach = vec![false; n];
        let mut changed = true;
        while changed {
            changed = false;
            for (t, tg) in &self.rules {
                if t.iter().all(|&q| reach[q as usize]) {
                    for x in tg {
                        for &q in x {
                            if !reach[q as usize] {
                                reach[q as usize] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
        let mut useful: Vec<bool> = (0..n).map(|q| reach[q] && self.finals[q]).collect();
        changed = true;
        while changed {
            changed = false;
            for (t, tg) in &self.rules {
                if !t.iter().all(|&q| reach[q as usize]) {
                    continue;
                }
                if tg.iter().any(|x| x.iter().any(|&q| useful[q as usize])) {
                    for &c in t {
                        if !useful[c as usize] {
                            useful[c as usize] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if useful.iter().all(|&u| u) {
            return self.clone();
        }
        let mut renum = vec![State::MAX; n];
        let mut next = 0;
        for q in 0..n {
            if useful[q] {
                renum[q] = next;
                next += 1;
            }
        }
        let mut rules = HashMap::new();
        for (t, tg) in &self.rules {
            if !t.iter().all(|&q| useful[q as usize]) {
                continue;
            }
            let ntg: Vec<Vec<State>> = tg
                .iter()
                .map(|x| x.iter().filter(|&&q| useful[q as usize]).map(|&q| renum[q as usize]).collect())
                .collect();
            if ntg.iter().any(|x: &Vec<State>| !x.is_empty()) {
                rules.insert(t.iter().map(|&q| renum[q as usize]).collect(), ntg);
            }
        }
        let finals = (0..n).filter(|&q| useful[q]).map(|q| self.finals[q]).collect();
        // Dropping states can remove the only nondeterministic transitions.
        let mut a = TreeAutomaton {
            alphabet: self.alphabet.clone(),
            care: self.care.clone(),
            states: next as usize,
            finals,
            rules,
            deterministic: false,
        };
        a.deterministic = a.compute_deterministic();
        a
    }

    /// Replaces the alphabet by one with the same labels and no variables.
    /// Requires that no variable bit is in the care set.
    pub(crate) fn drop_variables(mut self) -> Self {
        debug_assert!(self.care.iter().all(|&b| !self.alphabet.is_variable_bit(b)));
        self.alphabet.variables.clear();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_tree;

    fn ab(k: usize) -> Alphabet {
        Alphabet::new(vec!["A".into(), "B".into()], vec![], k)
    }

    /// Accepts trees with at least one A.
    fn some_a(k: usize) -> TreeAutomaton {
        TreeAutomaton::from_fn(ab(k), vec![0], 2, &[1], |t, s| {
            Some(if s == 1 || t.contains(&1) { 1 } else { 0 })
        })
    }

    #[test]
    fn tuple_enumeration_is_exact() {
        let mut seen = Vec::new();
        for i in 0..3 {
            for_each_tuple_with(i, 2, &mut |t| seen.push(t.to_vec()));
        }
        seen.sort();
        let mut want: Vec<Vec<u32>> = (0..3).flat_map(|a| (0..3).map(move |b| vec![a, b])).collect();
        want.sort();
        assert_eq!(seen, want);
    }

    #[test]
    fn run_some_a() {
        let a = some_a(2);
        assert!(a.run(&parse_tree("({} ({A}))").unwrap()).unwrap());
        assert!(!a.run(&parse_tree("({B} ({}))").unwrap()).unwrap());
        assert_eq!(
            a.run(&parse_tree("({} ({}) ({}) ({}))").unwrap()),
            Err(AutomatonError::BranchingExceedsK { branching: 3, k: 2 })
        );
        assert_eq!(a.run(&parse_tree("({C})").unwrap()), Err(AutomatonError::UnknownLabel("C".into())));
        assert!(!TreeAutomaton::empty(ab(2)).run(&parse_tree("({})").unwrap()).unwrap());
    }

    #[test]
    fn boolean_ops_on_small_trees() {
        let a = some_a(2);
        let not_a = a.complement(DEFAULT_STATE_CAP).unwrap();
        let both = a.product(&not_a, DEFAULT_STATE_CAP).unwrap();
        let either = a.union(&not_a).unwrap();
        for t in crate::tree::enumerate_trees(4, 2, &["A".to_string(), "B".to_string()]) {
            let x = a.run(&t).unwrap();
            assert_eq!(not_a.run(&t).unwrap(), !x);
            assert!(!both.run(&t).unwrap());
            assert!(either.run(&t).unwrap());
        }
        assert_eq!(both.num_states(), 0);
    }

    #[test]
    fn projection_forgets_a_bit() {
        let a = some_a(1).project(0);
        assert!(a.run(&parse_tree("({})").unwrap()).unwrap());
    }

    #[test]
    fn restrict_table_maps_bits() {
        assert_eq!(restrict_table(&[1, 3, 4], &[3]), vec![0, 0, 1, 1, 0, 0, 1, 1]);
        assert_eq!(restrict_table(&[1, 3], &[1, 3]), vec![0, 1, 2, 3]);
    }
}
