//! Formula syntax trees.
//!
//! Variables are plain names. Node terms may be variables or declared
//! constants; the owning [`Theory`](crate::theory::Theory) tells them apart.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::tree::Relation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Node,
    Set,
}

impl Sort {
    /// Sort implied by the naming convention: uppercase initial means set.
    pub fn of_name(name: &str) -> Sort {
        if name.chars().next().is_some_and(char::is_uppercase) {
            Sort::Set
        } else {
            Sort::Node
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    ExistsNode,
    ForallNode,
    ExistsSet,
    ForallSet,
    ExistsUniqueNode,
}

impl Quantifier {
    pub fn sort(self) -> Sort {
        match self {
            Quantifier::ExistsSet | Quantifier::ForallSet => Sort::Set,
            _ => Sort::Node,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::ExistsNode => "ex",
            Quantifier::ForallNode => "all",
            Quantifier::ExistsSet => "Ex",
            Quantifier::ForallSet => "All",
            Quantifier::ExistsUniqueNode => "ex!",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// Binary structural atom over two node terms.
    Rel(Relation, String, String),
    /// `p(x)` for a declared label `p`.
    Label(String, String),
    /// `X(x)` for a set variable `X`.
    InSet(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
    /// Application of a defined predicate.
    Apply(String, Vec<String>),
}

// Builders. These keep the theory emitters readable.

pub fn idom(x: &str, y: &str) -> Formula {
    Formula::Rel(Relation::Idom, x.into(), y.into())
}

pub fn dom(x: &str, y: &str) -> Formula {
    Formula::Rel(Relation::Dom, x.into(), y.into())
}

pub fn prec(x: &str, y: &str) -> Formula {
    Formula::Rel(Relation::Prec, x.into(), y.into())
}

pub fn eq(x: &str, y: &str) -> Formula {
    Formula::Rel(Relation::Eq, x.into(), y.into())
}

pub fn label(p: &str, x: &str) -> Formula {
    Formula::Label(p.into(), x.into())
}

pub fn in_set(set: &str, x: &str) -> Formula {
    Formula::InSet(set.into(), x.into())
}

pub fn apply(name: &str, args: &[&str]) -> Formula {
    Formula::Apply(name.into(), args.iter().map(|s| s.to_string()).collect())
}

#[allow(clippy::should_implement_trait)]
pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    Formula::Iff(Box::new(a), Box::new(b))
}

pub fn ex(x: &str, f: Formula) -> Formula {
    Formula::Quant(Quantifier::ExistsNode, x.into(), Box::new(f))
}

pub fn all(x: &str, f: Formula) -> Formula {
    Formula::Quant(Quantifier::ForallNode, x.into(), Box::new(f))
}

pub fn ex_set(x: &str, f: Formula) -> Formula {
    Formula::Quant(Quantifier::ExistsSet, x.into(), Box::new(f))
}

pub fn all_set(x: &str, f: Formula) -> Formula {
    Formula::Quant(Quantifier::ForallSet, x.into(), Box::new(f))
}

pub fn ex_unique(x: &str, f: Formula) -> Formula {
    Formula::Quant(Quantifier::ExistsUniqueNode, x.into(), Box::new(f))
}

/// Left-nested conjunction; `True` when empty.
/// `∃v1 … ∃vn f`, outermost first.
pub fn exists_many<S: AsRef<str>>(vars: &[S], f: Formula) -> Formula {
    vars.iter().rev().fold(f, |acc, v| ex(v.as_ref(), acc))
}

pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
    items.into_iter().reduce(and).unwrap_or(Formula::True)
}

/// Left-nested disjunction; `False` when empty.
pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
    items.into_iter().reduce(or).unwrap_or(Formula::False)
}

/// Free variables split by sort.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub nodes: BTreeSet<String>,
    pub sets: BTreeSet<String>,
}

impl FreeVars {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.sets.is_empty()
    }
}

impl Formula {
    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Label(..) | Formula::InSet(..) | Formula::Apply(..)
        )
    }

    /// Free variables by the standard binding rules. Arguments of `Apply`
    /// are sorted by the naming convention since no definition is at hand;
    /// constants show up as free node names.
    pub fn free_vars(&self) -> FreeVars {
        let mut out = FreeVars::default();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut FreeVars) {
        let node = |n: &String, bound: &Vec<String>, out: &mut FreeVars| {
            if !bound.contains(n) {
                out.nodes.insert(n.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, a, b) => {
                node(a, bound, out);
                node(b, bound, out);
            }
            Formula::Label(_, x) => node(x, bound, out),
            Formula::InSet(s, x) => {
                if !bound.contains(s) {
                    out.sets.insert(s.clone());
                }
                node(x, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::Apply(_, args) => {
                for a in args {
                    if bound.contains(a) {
                        continue;
                    }
                    match Sort::of_name(a) {
                        Sort::Node => out.nodes.insert(a.clone()),
                        Sort::Set => out.sets.insert(a.clone()),
                    };
                }
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Label(_, x) => {
                out.insert(x.clone());
            }
            Formula::InSet(s, x) => {
                out.insert(s.clone());
                out.insert(x.clone());
            }
            Formula::Not(f) => f.all_names(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Formula::Quant(_, v, body) => {
                out.insert(v.clone());
                body.all_names(out);
            }
            Formula::Apply(_, args) => out.extend(args.iter().cloned()),
        }
    }

    /// Names of defined predicates applied anywhere in the formula.
    pub fn applied_names(&self, out: &mut BTreeSet<String>) {
        self.visit(&mut |f| {
            if let Formula::Apply(n, _) = f {
                out.insert(n.clone());
            }
        });
    }

    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) | Formula::Quant(_, _, a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Capture-avoiding renaming of free variables. Binders that would
    /// capture a replacement name are renamed to fresh names.
    pub fn substitute(&self, map: &BTreeMap<String, String>) -> Formula {
        let mut avoid = BTreeSet::new();
        self.all_names(&mut avoid);
        avoid.extend(map.values().cloned());
        avoid.extend(map.keys().cloned());
        let mut fresh = FreshNames::new(avoid);
        self.subst_inner(map, &mut fresh)
    }

    fn subst_inner(&self, map: &BTreeMap<String, String>, fresh: &mut FreshNames) -> Formula {
        let r = |n: &String| map.get(n).cloned().unwrap_or_else(|| n.clone());
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Rel(rel, a, b) => Formula::Rel(*rel, r(a), r(b)),
            Formula::Label(p, x) => Formula::Label(p.clone(), r(x)),
            Formula::InSet(s, x) => Formula::InSet(r(s), r(x)),
            Formula::Not(f) => not(f.subst_inner(map, fresh)),
            Formula::And(a, b) => and(a.subst_inner(map, fresh), b.subst_inner(map, fresh)),
            Formula::Or(a, b) => or(a.subst_inner(map, fresh), b.subst_inner(map, fresh)),
            Formula::Implies(a, b) => implies(a.subst_inner(map, fresh), b.subst_inner(map, fresh)),
            Formula::Iff(a, b) => iff(a.subst_inner(map, fresh), b.subst_inner(map, fresh)),
            Formula::Apply(n, args) => Formula::Apply(n.clone(), args.iter().map(r).collect()),
            Formula::Quant(q, v, body) => {
                let mut inner = map.clone();
                inner.remove(v);
                if inner.is_empty() {
                    return self.clone();
                }
                let body_free = body.free_vars();
                let captures = inner.iter().any(|(from, to)| {
                    to == v && (body_free.nodes.contains(from) || body_free.sets.contains(from))
                });
                if captures {
                    let nv = fresh.next(v);
                    inner.insert(v.clone(), nv.clone());
                    Formula::Quant(*q, nv, Box::new(body.subst_inner(&inner, fresh)))
                } else {
                    Formula::Quant(*q, v.clone(), Box::new(body.subst_inner(&inner, fresh)))
                }
            }
        }
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        fn go(a: &Formula, b: &Formula, env: &mut Vec<(String, String)>) -> bool {
            let same = |x: &String, y: &String, env: &Vec<(String, String)>| {
                for (l, r) in env.iter().rev() {
                    if l == x || r == y {
                        return l == x && r == y;
                    }
                }
                x == y
            };
            match (a, b) {
                (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
                (Formula::Rel(r1, a1, b1), Formula::Rel(r2, a2, b2)) => {
                    r1 == r2 && same(a1, a2, env) && same(b1, b2, env)
                }
                (Formula::Label(p1, x1), Formula::Label(p2, x2)) => p1 == p2 && same(x1, x2, env),
                (Formula::InSet(s1, x1), Formula::InSet(s2, x2)) => same(s1, s2, env) && same(x1, x2, env),
                (Formula::Not(x), Formula::Not(y)) => go(x, y, env),
                (Formula::And(a1, b1), Formula::And(a2, b2))
                | (Formula::Or(a1, b1), Formula::Or(a2, b2))
                | (Formula::Implies(a1, b1), Formula::Implies(a2, b2))
                | (Formula::Iff(a1, b1), Formula::Iff(a2, b2)) => go(a1, a2, env) && go(b1, b2, env),
                (Formula::Quant(q1, v1, f1), Formula::Quant(q2, v2, f2)) => {
                    if q1 != q2 {
                        return false;
                    }
                    env.push((v1.clone(), v2.clone()));
                    let r = go(f1, f2, env);
                    env.pop();
                    r
                }
                (Formula::Apply(n1, a1), Formula::Apply(n2, a2)) => {
                    n1 == n2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| same(x, y, env))
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Negation normal form over {∧, ∨, ∃, ∀}: implications and
    /// biconditionals are unfolded and negations sit on atoms. `∃!` is left
    /// in place (under negation it stays wrapped).
    pub fn nnf(&self) -> Formula {
        self.nnf_pol(true)
    }

    fn nnf_pol(&self, positive: bool) -> Formula {
        use Formula::*;
        match self {
            True => if positive { True } else { False },
            False => if positive { False } else { True },
            Rel(..) | Label(..) | InSet(..) | Apply(..) => {
                if positive {
                    self.clone()
                } else {
                    not(self.clone())
                }
            }
            Not(f) => f.nnf_pol(!positive),
            And(a, b) => {
                if positive {
                    and(a.nnf_pol(true), b.nnf_pol(true))
                } else {
                    or(a.nnf_pol(false), b.nnf_pol(false))
                }
            }
            Or(a, b) => {
                if positive {
                    or(a.nnf_pol(true), b.nnf_pol(true))
                } else {
                    and(a.nnf_pol(false), b.nnf_pol(false))
                }
            }
            Implies(a, b) => {
                if positive {
                    or(a.nnf_pol(false), b.nnf_pol(true))
                } else {
                    and(a.nnf_pol(true), b.nnf_pol(false))
                }
            }
            Iff(a, b) => {
                if positive {
                    or(and(a.nnf_pol(true), b.nnf_pol(true)), and(a.nnf_pol(false), b.nnf_pol(false)))
                } else {
                    or(and(a.nnf_pol(true), b.nnf_pol(false)), and(a.nnf_pol(false), b.nnf_pol(true)))
                }
            }
            Quant(q, v, body) => {
                let flip = |q: Quantifier| match q {
                    Quantifier::ExistsNode => Quantifier::ForallNode,
                    Quantifier::ForallNode => Quantifier::ExistsNode,
                    Quantifier::ExistsSet => Quantifier::ForallSet,
                    Quantifier::ForallSet => Quantifier::ExistsSet,
                    Quantifier::ExistsUniqueNode => Quantifier::ExistsUniqueNode,
                };
                match (q, positive) {
                    (Quantifier::ExistsUniqueNode, true) => Quant(*q, v.clone(), Box::new(body.nnf_pol(true))),
                    (Quantifier::ExistsUniqueNode, false) => {
                        not(Quant(*q, v.clone(), Box::new(body.nnf_pol(true))))
                    }
                    (q, true) => Quant(*q, v.clone(), Box::new(body.nnf_pol(true))),
                    (q, false) => Quant(flip(*q), v.clone(), Box::new(body.nnf_pol(false))),
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_formula(self))
    }
}

/// Generates names not present in an avoid set: `x` becomes `x1`, `x2`, ...
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    avoid: BTreeSet<String>,
}

impl FreshNames {
    pub fn new(avoid: BTreeSet<String>) -> Self {
        FreshNames { avoid }
    }

    pub fn avoid(&mut self, name: &str) {
        self.avoid.insert(name.to_string());
    }

    pub fn next(&mut self, base: &str) -> String {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { base } else { stem };
        let name = (1..)
            .map(|i| format!("{stem}{i}"))
            .find(|n| !self.avoid.contains(n))
            .expect("unbounded");
        self.avoid.insert(name.clone());
        name
    }

    /// Returns `preferred` if unused, else a fresh variant of it.
    pub fn prefer(&mut self, preferred: &str) -> String {
        if self.avoid.insert(preferred.to_string()) {
            preferred.to_string()
        } else {
            self.next(preferred)
        }
    }
}
