//! Theories: label and constant declarations, explicit definitions, axioms.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;
use thiserror::Error;

use crate::formula::{self, Formula, FreshNames, Quantifier, Sort};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("`{0}` is declared more than once")]
    Redeclaration(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("undefined predicate `{0}`")]
    UndefinedPredicate(String),
    #[error("`{name}` expects {expected} argument(s), got {got}")]
    ArityMismatch { name: String, expected: usize, got: usize },
    #[error("sort mismatch for `{name}`: expected {expected:?}")]
    SortMismatch { name: String, expected: Sort },
    #[error("cyclic definition through `{0}`")]
    CyclicDefinition(String),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub params: Vec<(String, Sort)>,
    pub body: Formula,
}

impl Definition {
    pub fn new(name: &str, params: &[&str], body: Formula) -> Self {
        Definition {
            name: name.to_string(),
            params: params.iter().map(|p| (p.to_string(), Sort::of_name(p))).collect(),
            body,
        }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub labels: Vec<String>,
    pub constants: Vec<String>,
    pub definitions: IndexMap<String, Definition>,
    pub axioms: Vec<Formula>,
}

impl Theory {
    pub fn new() -> Self {
        Self::default()
    }

    fn name_taken(&self, name: &str) -> bool {
        self.labels.iter().any(|l| l == name)
            || self.constants.iter().any(|c| c == name)
            || self.definitions.contains_key(name)
    }

    pub fn add_label(&mut self, name: &str) -> Result<(), TheoryError> {
        if self.name_taken(name) {
            return Err(TheoryError::Redeclaration(name.into()));
        }
        self.labels.push(name.into());
        Ok(())
    }

    /// Declares a label unless it already exists.
    pub fn ensure_label(&mut self, name: &str) {
        if !self.labels.iter().any(|l| l == name) {
            self.labels.push(name.into());
        }
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), TheoryError> {
        if self.name_taken(name) {
            return Err(TheoryError::Redeclaration(name.into()));
        }
        self.constants.push(name.into());
        Ok(())
    }

    pub fn add_definition(&mut self, def: Definition) -> Result<(), TheoryError> {
        if self.name_taken(&def.name) {
            return Err(TheoryError::Redeclaration(def.name));
        }
        self.definitions.insert(def.name.clone(), def);
        Ok(())
    }

    pub fn add_axiom(&mut self, axiom: Formula) {
        self.axioms.push(axiom);
    }

    pub fn has_label(&self, name: &str) -> bool {
        self.labels.iter().any(|l| l == name)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
    }

    pub fn definition(&self, name: &str) -> Option<&Definition> {
        self.definitions.get(name)
    }

    /// Appends everything from `other`, skipping labels already declared.
    pub fn extend(&mut self, other: &Theory) -> Result<(), TheoryError> {
        for l in &other.labels {
            self.ensure_label(l);
        }
        for c in &other.constants {
            self.add_constant(c)?;
        }
        for d in other.definitions.values() {
            self.add_definition(d.clone())?;
        }
        self.axioms.extend(other.axioms.iter().cloned());
        Ok(())
    }

    /// Checks every definition body and axiom: names resolve, sorts agree,
    /// definition bodies mention only their parameters, axioms are closed up
    /// to constants, and the definition graph is acyclic.
    pub fn validate(&self) -> Result<(), TheoryError> {
        for def in self.definitions.values() {
            let scope: BTreeMap<String, Sort> = def.params.iter().cloned().collect();
            self.check_formula(&def.body, &scope)?;
        }
        for ax in &self.axioms {
            self.check_formula(ax, &BTreeMap::new())?;
        }
        self.check_acyclic()
    }

    pub fn check_acyclic(&self) -> Result<(), TheoryError> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state: BTreeMap<&str, u8> = BTreeMap::new();
        fn dfs<'a>(t: &'a Theory, name: &'a str, state: &mut BTreeMap<&'a str, u8>) -> Result<(), TheoryError> {
            match state.get(name) {
                Some(1) => return Err(TheoryError::CyclicDefinition(name.into())),
                Some(2) => return Ok(()),
                _ => {}
            }
            state.insert(name, 1);
            if let Some(d) = t.definitions.get(name) {
                let mut deps = BTreeSet::new();
                d.body.applied_names(&mut deps);
                for dep in &deps {
                    let (k, _) = t.definitions.get_key_value(dep.as_str()).ok_or_else(|| TheoryError::UndefinedPredicate(dep.clone()))?;
                    dfs(t, k, state)?;
                }
            }
            state.insert(name, 2);
            Ok(())
        }
        for name in self.definitions.keys() {
            dfs(self, name, &mut state)?;
        }
        Ok(())
    }

    /// Sort-checks `f` with the given variables in scope.
    pub fn check_formula(&self, f: &Formula, scope: &BTreeMap<String, Sort>) -> Result<(), TheoryError> {
        let mut scope = scope.clone();
        self.check_inner(f, &mut scope)
    }

    fn check_node_term(&self, t: &str, scope: &BTreeMap<String, Sort>) -> Result<(), TheoryError> {
        match scope.get(t) {
            Some(Sort::Node) => Ok(()),
            Some(Sort::Set) => Err(TheoryError::SortMismatch { name: t.into(), expected: Sort::Node }),
            None if self.is_constant(t) => Ok(()),
            None => Err(TheoryError::UnboundVariable(t.into())),
        }
    }

    fn check_inner(&self, f: &Formula, scope: &mut BTreeMap<String, Sort>) -> Result<(), TheoryError> {
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Rel(_, a, b) => {
                self.check_node_term(a, scope)?;
                self.check_node_term(b, scope)
            }
            Formula::Label(p, x) => {
                if !self.has_label(p) {
                    return Err(TheoryError::UnknownName(p.clone()));
                }
                self.check_node_term(x, scope)
            }
            Formula::InSet(s, x) => {
                match scope.get(s) {
                    Some(Sort::Set) => {}
                    Some(Sort::Node) => {
                        return Err(TheoryError::SortMismatch { name: s.clone(), expected: Sort::Set })
                    }
                    None => return Err(TheoryError::UnboundVariable(s.clone())),
                }
                self.check_node_term(x, scope)
            }
            Formula::Not(a) => self.check_inner(a, scope),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.check_inner(a, scope)?;
                self.check_inner(b, scope)
            }
            Formula::Quant(q, v, body) => {
                let prev = scope.insert(v.clone(), q.sort());
                let r = self.check_inner(body, scope);
                match prev {
                    Some(s) => scope.insert(v.clone(), s),
                    None => scope.remove(v),
                };
                r
            }
            Formula::Apply(name, args) => {
                let def = self
                    .definitions
                    .get(name)
                    .ok_or_else(|| TheoryError::UndefinedPredicate(name.clone()))?;
                if def.params.len() != args.len() {
                    return Err(TheoryError::ArityMismatch {
                        name: name.clone(),
                        expected: def.params.len(),
                        got: args.len(),
                    });
                }
                for ((_, sort), arg) in def.params.iter().zip(args) {
                    match sort {
                        Sort::Node => self.check_node_term(arg, scope)?,
                        Sort::Set => match scope.get(arg) {
                            Some(Sort::Set) => {}
                            Some(Sort::Node) => {
                                return Err(TheoryError::SortMismatch { name: arg.clone(), expected: Sort::Set })
                            }
                            None => return Err(TheoryError::UnboundVariable(arg.clone())),
                        },
                    }
                }
                Ok(())
            }
        }
    }

    /// Free variables of `f` with argument sorts taken from the definitions
    /// where possible. Constants are excluded.
    pub fn free_vars(&self, f: &Formula) -> formula::FreeVars {
        let mut fv = match self.expand(f) {
            Ok(e) => e.free_vars(),
            Err(_) => f.free_vars(),
        };
        fv.nodes.retain(|n| !self.is_constant(n));
        fv
    }

    /// Replaces every defined-predicate application by its body (capture
    /// avoiding) and desugars `∃!`. The result mentions only the signature.
    pub fn expand(&self, f: &Formula) -> Result<Formula, TheoryError> {
        let mut stack = Vec::new();
        self.expand_inner(f, &mut stack)
    }

    fn expand_inner(&self, f: &Formula, stack: &mut Vec<String>) -> Result<Formula, TheoryError> {
        Ok(match f {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Label(..) | Formula::InSet(..) => f.clone(),
            Formula::Not(a) => formula::not(self.expand_inner(a, stack)?),
            Formula::And(a, b) => formula::and(self.expand_inner(a, stack)?, self.expand_inner(b, stack)?),
            Formula::Or(a, b) => formula::or(self.expand_inner(a, stack)?, self.expand_inner(b, stack)?),
            Formula::Implies(a, b) => formula::implies(self.expand_inner(a, stack)?, self.expand_inner(b, stack)?),
            Formula::Iff(a, b) => formula::iff(self.expand_inner(a, stack)?, self.expand_inner(b, stack)?),
            Formula::Quant(Quantifier::ExistsUniqueNode, v, body) => {
                let body = self.expand_inner(body, stack)?;
                desugar_unique(v, &body)
            }
            Formula::Quant(q, v, body) => Formula::Quant(*q, v.clone(), Box::new(self.expand_inner(body, stack)?)),
            Formula::Apply(name, args) => {
                if stack.iter().any(|s| s == name) {
                    return Err(TheoryError::CyclicDefinition(name.clone()));
                }
                let def = self
                    .definitions
                    .get(name)
                    .ok_or_else(|| TheoryError::UndefinedPredicate(name.clone()))?;
                if def.params.len() != args.len() {
                    return Err(TheoryError::ArityMismatch {
                        name: name.clone(),
                        expected: def.params.len(),
                        got: args.len(),
                    });
                }
                let map: BTreeMap<String, String> =
                    def.params.iter().map(|(p, _)| p.clone()).zip(args.iter().cloned()).collect();
                let body = def.body.substitute(&map);
                stack.push(name.clone());
                let r = self.expand_inner(&body, stack);
                stack.pop();
                r?
            }
        })
    }

    /// Expanded body of a named definition, parameters left free.
    pub fn expand_definition(&self, name: &str) -> Result<Formula, TheoryError> {
        let def = self
            .definitions
            .get(name)
            .ok_or_else(|| TheoryError::UndefinedPredicate(name.into()))?;
        let mut stack = vec![name.to_string()];
        self.expand_inner(&def.body, &mut stack)
    }

    /// Replaces constants by existentially bound node variables shared
    /// across the conjunction of all axioms.
    pub fn eliminate_constants(&self) -> Theory {
        if self.constants.is_empty() {
            return self.clone();
        }
        let conj = formula::and_all(self.axioms.iter().cloned());
        let mut avoid = BTreeSet::new();
        conj.all_names(&mut avoid);
        for d in self.definitions.values() {
            d.body.all_names(&mut avoid);
        }
        let mut fresh = FreshNames::new(avoid);
        let mut map = BTreeMap::new();
        for c in &self.constants {
            let var = if Sort::of_name(c) == Sort::Node && !conj_binds(&conj, c) {
                c.clone()
            } else {
                fresh.next("c")
            };
            map.insert(c.clone(), var);
        }
        let mut body = conj.substitute(&map);
        for c in self.constants.iter().rev() {
            body = formula::ex(&map[c], body);
        }
        Theory {
            labels: self.labels.clone(),
            constants: Vec::new(),
            definitions: self.definitions.clone(),
            axioms: vec![body],
        }
    }
}

fn conj_binds(f: &Formula, name: &str) -> bool {
    let mut found = false;
    f.visit(&mut |g| {
        if let Formula::Quant(_, v, _) = g {
            if v == name {
                found = true;
            }
        }
    });
    found
}

/// `∃!x φ` as `∃x [φ ∧ ∀y [φ(y) → y = x]]` with `y` fresh.
pub fn desugar_unique(x: &str, body: &Formula) -> Formula {
    let mut avoid = BTreeSet::new();
    body.all_names(&mut avoid);
    avoid.insert(x.to_string());
    let mut fresh = FreshNames::new(avoid);
    let y = fresh.next(x);
    let renamed = body.substitute(&[(x.to_string(), y.clone())].into());
    formula::ex(
        x,
        formula::and(body.clone(), formula::all(&y, formula::implies(renamed, formula::eq(&y, x)))),
    )
}
