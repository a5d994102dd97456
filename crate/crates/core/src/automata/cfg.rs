//! Context-free grammars as theories and as automata.
//!
//! A derivation tree here is complete: its root carries the start symbol,
//! every node carries exactly one grammar symbol, every nonterminal node
//! together with its children instantiates a production, and terminal nodes
//! are leaves.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{Alphabet, State, TreeAutomaton};
use crate::formula::{and_all, apply, ex, exists_many, idom, implies, label, not, or_all, all};
use crate::gpsg::children_definition;
use crate::theory::{Definition, Theory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub start: String,
    pub productions: Vec<(String, Vec<String>)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("start symbol `{0}` is not a nonterminal")]
    StartNotNonterminal(String),
    #[error("symbol `{0}` is not declared")]
    Undeclared(String),
    #[error("symbol `{0}` is declared both terminal and nonterminal")]
    Overlap(String),
    #[error("production for `{0}` has an empty right-hand side")]
    EmptyRhs(String),
    #[error("production for `{lhs}` has {len} symbols, more than the branching bound {k}")]
    RhsTooLong { lhs: String, len: usize, k: usize },
    #[error("grammar syntax: {0}")]
    Syntax(String),
}

impl Grammar {
    pub fn new(
        nonterminals: &[&str],
        terminals: &[&str],
        start: &str,
        productions: &[(&str, &[&str])],
    ) -> Result<Self, GrammarError> {
        let g = Grammar {
            nonterminals: nonterminals.iter().map(|s| s.to_string()).collect(),
            terminals: terminals.iter().map(|s| s.to_string()).collect(),
            start: start.into(),
            productions: productions
                .iter()
                .map(|(l, r)| (l.to_string(), r.iter().map(|s| s.to_string()).collect()))
                .collect(),
        };
        g.validate()?;
        Ok(g)
    }

    /// Reads `S -> A S | A; ...`. Left-hand sides are the nonterminals, the
    /// first one is the start symbol, every other symbol is a terminal.
    pub fn parse(text: &str) -> Result<Self, GrammarError> {
        let mut nonterminals: Vec<String> = Vec::new();
        let mut rules: Vec<(String, Vec<String>)> = Vec::new();
        for item in text.split([';', '\n']).map(str::trim).filter(|s| !s.is_empty()) {
            let (lhs, rhs) = item.split_once("->").ok_or_else(|| GrammarError::Syntax(format!("missing `->` in `{item}`")))?;
            let lhs = lhs.trim().to_string();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(GrammarError::Syntax(format!("bad left-hand side in `{item}`")));
            }
            if !nonterminals.contains(&lhs) {
                nonterminals.push(lhs.clone());
            }
            for alt in rhs.split('|') {
                rules.push((lhs.clone(), alt.split_whitespace().map(String::from).collect()));
            }
        }
        let start = nonterminals.first().cloned().ok_or_else(|| GrammarError::Syntax("no productions".into()))?;
        let mut terminals: Vec<String> = Vec::new();
        for (_, rhs) in &rules {
            for s in rhs {
                if !nonterminals.contains(s) && !terminals.contains(s) {
                    terminals.push(s.clone());
                }
            }
        }
        let g = Grammar { nonterminals, terminals, start, productions: rules };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GrammarError> {
        if !self.nonterminals.contains(&self.start) {
            return Err(GrammarError::StartNotNonterminal(self.start.clone()));
        }
        if let Some(s) = self.terminals.iter().find(|t| self.nonterminals.contains(t)) {
            return Err(GrammarError::Overlap(s.clone()));
        }
        for (lhs, rhs) in &self.productions {
            if !self.nonterminals.contains(lhs) {
                return Err(GrammarError::Undeclared(lhs.clone()));
            }
            if rhs.is_empty() {
                return Err(GrammarError::EmptyRhs(lhs.clone()));
            }
            if let Some(s) = rhs.iter().find(|s| !self.is_symbol(s)) {
                return Err(GrammarError::Undeclared(s.clone()));
            }
        }
        Ok(())
    }

    fn is_symbol(&self, s: &str) -> bool {
        self.nonterminals.iter().chain(&self.terminals).any(|x| x == s)
    }

    /// Nonterminals then terminals; the label order of the emitted theory.
    pub fn symbols(&self) -> Vec<String> {
        self.nonterminals.iter().chain(&self.terminals).cloned().collect()
    }

    pub fn max_rhs(&self) -> usize {
        self.productions.iter().map(|(_, r)| r.len()).max().unwrap_or(0)
    }

    fn check_k(&self, k: usize) -> Result<(), GrammarError> {
        match self.productions.iter().find(|(_, r)| r.len() > k) {
            Some((lhs, r)) => Err(GrammarError::RhsTooLong { lhs: lhs.clone(), len: r.len(), k }),
            None => Ok(()),
        }
    }
}

/// A theory whose models of branching ≤ k are exactly the derivation trees
/// of `g`.
pub fn cfg_to_theory(g: &Grammar, k: usize) -> Result<Theory, GrammarError> {
    g.validate()?;
    g.check_k(k)?;
    let mut th = Theory::new();
    for s in g.symbols() {
        th.add_label(&s).map_err(|_| GrammarError::Overlap(s.clone()))?;
    }
    let arities: BTreeSet<usize> = g.productions.iter().map(|(_, r)| r.len()).collect();
    for m in arities {
        th.add_definition(children_definition(m)).expect("fresh name");
    }
    th.add_definition(Definition::new("Root", &["x"], not(ex("y", idom("y", "x"))))).expect("fresh name");

    let syms = g.symbols();
    let some = or_all(syms.iter().map(|s| label(s, "x")));
    let mut excl = Vec::new();
    for (i, a) in syms.iter().enumerate() {
        for b in &syms[i + 1..] {
            excl.push(not(crate::formula::and(label(a, "x"), label(b, "x"))));
        }
    }
    th.add_definition(Definition::new("OneSymbol", &["x"], and_all(std::iter::once(some).chain(excl))))
        .expect("fresh name");

    for (i, (lhs, rhs)) in g.productions.iter().enumerate() {
        let name = format!("ID{}", i + 1);
        let ys: Vec<String> = (1..=rhs.len()).map(|j| format!("y{j}")).collect();
        let mut params: Vec<&str> = vec!["x"];
        params.extend(ys.iter().map(String::as_str));
        let children = apply(&format!("Children{}", rhs.len()), &params);
        let body = and_all(
            std::iter::once(children)
                .chain(std::iter::once(label(lhs, "x")))
                .chain(rhs.iter().zip(&ys).map(|(s, y)| label(s, y))),
        );
        th.add_definition(Definition::new(&name, &params, body)).expect("fresh name");
    }

    th.add_axiom(all("x", implies(apply("Root", &["x"]), label(&g.start, "x"))));
    th.add_axiom(all("x", apply("OneSymbol", &["x"])));
    if !g.terminals.is_empty() {
        let term = or_all(g.terminals.iter().map(|t| label(t, "x")));
        th.add_axiom(all("x", implies(term, not(ex("y", idom("x", "y"))))));
    }
    for n in &g.nonterminals {
        let alts = g.productions.iter().enumerate().filter(|(_, (l, _))| l == n).map(|(i, (_, rhs))| {
            let ys: Vec<String> = (1..=rhs.len()).map(|j| format!("y{j}")).collect();
            let mut args: Vec<&str> = vec!["x"];
            args.extend(ys.iter().map(String::as_str));
            exists_many(&ys, apply(&format!("ID{}", i + 1), &args))
        });
        th.add_axiom(all("x", implies(label(n, "x"), or_all(alts))));
    }
    Ok(th)
}

/// The grammar read directly as a deterministic automaton whose states are
/// the grammar symbols.
pub fn grammar_automaton(g: &Grammar, k: usize) -> Result<TreeAutomaton, GrammarError> {
    g.validate()?;
    g.check_k(k)?;
    let syms = g.symbols();
    let idx = |s: &str| syms.iter().position(|x| x == s).expect("declared") as State;
    let care: Vec<usize> = (0..syms.len()).collect();
    let nsym = 1usize << syms.len();
    let mut rules: HashMap<Vec<State>, Vec<Vec<State>>> = HashMap::new();
    let mut add = |children: Vec<State>, s: &str| {
        rules.entry(children).or_insert_with(|| vec![Vec::new(); nsym])[1usize << idx(s)].push(idx(s));
    };
    for t in &g.terminals {
        add(Vec::new(), t);
    }
    for (lhs, rhs) in &g.productions {
        add(rhs.iter().map(|s| idx(s)).collect(), lhs);
    }
    let mut finals = vec![false; syms.len()];
    finals[idx(&g.start) as usize] = true;
    let n = syms.len();
    Ok(TreeAutomaton::from_parts(Alphabet::new(syms, Vec::new(), k), care, n, finals, rules))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::satisfies;
    use crate::syntax::parse_tree;
    use crate::tree::enumerate_trees;

    #[test]
    fn parse_grammar() {
        let g = Grammar::parse("S -> A S | A").unwrap();
        assert_eq!(g.nonterminals, vec!["S"]);
        assert_eq!(g.terminals, vec!["A"]);
        assert_eq!(g.productions.len(), 2);
        assert!(matches!(Grammar::parse("S A"), Err(GrammarError::Syntax(_))));
    }

    #[test]
    fn rhs_too_long() {
        let g = Grammar::parse("S -> A B C").unwrap();
        assert_eq!(cfg_to_theory(&g, 2).unwrap_err(), GrammarError::RhsTooLong { lhs: "S".into(), len: 3, k: 2 });
    }

    #[test]
    fn s_to_a_b_has_one_three_node_model() {
        let g = Grammar::parse("S -> A B").unwrap();
        let th = cfg_to_theory(&g, 2).unwrap();
        let models: Vec<_> = enumerate_trees(3, 2, &th.labels)
            .filter(|t| satisfies(t, &th).unwrap().holds())
            .collect();
        assert_eq!(models, vec![parse_tree("({S} ({A}) ({B}))").unwrap()]);
    }

    #[test]
    fn direct_automaton_accepts_derivations_only() {
        let g = Grammar::parse("S -> A S | A").unwrap();
        let a = grammar_automaton(&g, 2).unwrap();
        assert!(a.run(&parse_tree("({S} ({A}) ({S} ({A})))").unwrap()).unwrap());
        assert!(!a.run(&parse_tree("({S} ({A}) ({S}))").unwrap()).unwrap());
        assert!(!a.run(&parse_tree("({S,A} ({A}))").unwrap()).unwrap());
        assert!(a.is_deterministic());
    }
}
