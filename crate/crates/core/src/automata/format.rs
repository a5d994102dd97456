//! JSON interchange format.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "labels": ["A", "B"],          // global bits 0..
//!   "variables": [],               // global bits after the labels
//!   "max_branching": 2,
//!   "care": [0],                   // global bits the automaton reads
//!   "states": 2,
//!   "finals": [1],
//!   "deterministic": true,
//!   "transitions": [{"children": [], "sym": 1, "targets": [1]}, ...]
//! }
//! ```
//!
//! `sym` is a local symbol: bit `j` is global bit `care[j]`. Transitions are
//! written sorted by arity, children, then symbol, so output is stable.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Alphabet, AutomatonError, State, TreeAutomaton};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonFile {
    format_version: u32,
    labels: Vec<String>,
    variables: Vec<String>,
    max_branching: usize,
    care: Vec<usize>,
    states: usize,
    finals: Vec<State>,
    deterministic: bool,
    transitions: Vec<Transition>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Transition {
    children: Vec<State>,
    sym: u32,
    targets: Vec<State>,
}

pub fn to_json(a: &TreeAutomaton) -> String {
    let mut keys: Vec<&Vec<State>> = a.rules().keys().collect();
    keys.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
    let mut transitions = Vec::new();
    for t in keys {
        for (sym, tg) in a.rules()[t].iter().enumerate() {
            if !tg.is_empty() {
                transitions.push(Transition { children: t.clone(), sym: sym as u32, targets: tg.clone() });
            }
        }
    }
    let file = AutomatonFile {
        format_version: FORMAT_VERSION,
        labels: a.alphabet().labels.clone(),
        variables: a.alphabet().variables.clone(),
        max_branching: a.max_branching(),
        care: a.care().to_vec(),
        states: a.num_states(),
        finals: a.finals().collect(),
        deterministic: a.is_deterministic(),
        transitions,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<TreeAutomaton, AutomatonError> {
    let bad = |m: String| AutomatonError::Format(m);
    let f: AutomatonFile = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    if f.format_version != FORMAT_VERSION {
        return Err(bad(format!("unsupported format_version {}", f.format_version)));
    }
    if f.max_branching == 0 {
        return Err(AutomatonError::ZeroBranching);
    }
    let alphabet = Alphabet::new(f.labels, f.variables, f.max_branching);
    if alphabet.bits() > 64 {
        return Err(AutomatonError::AlphabetTooLarge);
    }
    if f.care.windows(2).any(|w| w[0] >= w[1]) || f.care.iter().any(|&b| b >= alphabet.bits()) {
        return Err(bad("care bits must be strictly increasing alphabet bits".into()));
    }
    let syms = 1usize << f.care.len();
    let mut finals = vec![false; f.states];
    for q in f.finals {
        *finals.get_mut(q as usize).ok_or_else(|| bad(format!("final state {q} out of range")))? = true;
    }
    let mut rules: HashMap<Vec<State>, Vec<Vec<State>>> = HashMap::new();
    for t in f.transitions {
        if t.children.len() > alphabet.max_branching {
            return Err(bad(format!("transition arity {} exceeds max_branching", t.children.len())));
        }
        if t.sym as usize >= syms {
            return Err(bad(format!("symbol {} out of range", t.sym)));
        }
        if let Some(q) = t.children.iter().chain(&t.targets).find(|&&q| q as usize >= f.states) {
            return Err(bad(format!("state {q} out of range")));
        }
        rules.entry(t.children).or_insert_with(|| vec![Vec::new(); syms])[t.sym as usize].extend(t.targets);
    }
    let a = TreeAutomaton::from_parts(alphabet, f.care, f.states, finals, rules);
    if f.deterministic && !a.is_deterministic() {
        return Err(bad("marked deterministic but has a nondeterministic transition".into()));
    }
    Ok(a)
}
