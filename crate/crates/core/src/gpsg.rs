//! ID rules, feature propagation and feature specification defaults as
//! definitions and axioms.
//!
//! Features are flattened to labels: `+f` is the label `f`, `−f` its
//! absence. For a literal ℓ the emitted family is
//!
//! ```text
//! Free_ℓ(x)        ℓ is compatible with what x's licensing rule position says
//! Propagate_f(x,y) x and y must agree on f (symmetric, from local-tree patterns)
//! PPrime_ℓ(X)      X contains every non-Free node and is closed under Propagate
//! PrivSet_ℓ(X)     X is the least such set
//! Privileged_ℓ(x)  x is in PrivSet_ℓ
//! ```
//!
//! with suffix `f` for `+f` and `notf` for `−f`. A node that no rule position
//! licenses (the root, for instance) is Free for everything.

use crate::formula::{
    all, all_set, and, and_all, apply, eq, ex, ex_set, exists_many, idom, implies, in_set, label, not, or, or_all,
    Formula,
};
use crate::theory::{Definition, Theory, TheoryError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub label: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(label: &str) -> Self {
        Literal { label: label.into(), positive: true }
    }

    pub fn neg(label: &str) -> Self {
        Literal { label: label.into(), positive: false }
    }

    pub fn negated(&self) -> Self {
        Literal { label: self.label.clone(), positive: !self.positive }
    }

    /// Name suffix: `f` or `notf`.
    pub fn suffix(&self) -> String {
        if self.positive {
            self.label.clone()
        } else {
            format!("not{}", self.label)
        }
    }

    pub fn formula(&self, x: &str) -> Formula {
        if self.positive {
            label(&self.label, x)
        } else {
            not(label(&self.label, x))
        }
    }

    fn conflicts(&self, other: &Literal) -> bool {
        self.label == other.label && self.positive != other.positive
    }
}

/// Mother and ordered daughters, each a conjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdRule {
    pub id: String,
    pub mother: Vec<Literal>,
    pub daughters: Vec<Vec<Literal>>,
}

impl IdRule {
    /// Positive literals only, the common case.
    pub fn new(id: &str, mother: &[&str], daughters: &[&[&str]]) -> Self {
        IdRule {
            id: id.into(),
            mother: mother.iter().map(|l| Literal::pos(l)).collect(),
            daughters: daughters.iter().map(|d| d.iter().map(|l| Literal::pos(l)).collect()).collect(),
        }
    }

    pub fn name(&self) -> String {
        format!("ID{}", self.id)
    }

    pub fn arity(&self) -> usize {
        self.daughters.len()
    }

    fn labels(&self) -> impl Iterator<Item = &str> {
        self.mother.iter().chain(self.daughters.iter().flatten()).map(|l| l.label.as_str())
    }
}

/// A local-tree configuration under which two nodes agree on a feature.
/// Positions count the mother as 0 and daughters from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropagationPattern {
    RulePositions { rule: String, a: usize, b: usize },
    /// A mother and any daughter carrying `label` (head-feature style).
    ParentChildWithLabel { label: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationSpec {
    pub feature: String,
    pub patterns: Vec<PropagationPattern>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefaultSpec {
    pub literal: Literal,
    pub guard: Vec<String>,
}

fn ys(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("y{j}")).collect()
}

fn args<'a>(x: &'a str, ys: &'a [String]) -> Vec<&'a str> {
    std::iter::once(x).chain(ys.iter().map(String::as_str)).collect()
}

/// `Children{m}(x, y1..ym)`: the children of x are exactly y1 < … < ym.
pub fn children_definition(m: usize) -> Definition {
    let ys = ys(m);
    let mut parts: Vec<Formula> = ys.iter().map(|y| idom("x", y)).collect();
    parts.extend(ys.windows(2).map(|w| crate::formula::prec(&w[0], &w[1])));
    parts.push(all("z", implies(idom("x", "z"), or_all(ys.iter().map(|y| eq("z", y))))));
    Definition::new(&format!("Children{m}"), &args("x", &ys), and_all(parts))
}

pub fn subset_definition() -> Definition {
    Definition::new("Subset", &["X", "Y"], all("x", implies(in_set("X", "x"), in_set("Y", "x"))))
}

/// `Subset` and `Children1..Children3`.
pub fn core_theory() -> Theory {
    let mut t = Theory::new();
    t.add_definition(subset_definition()).expect("fresh");
    for m in 1..=3 {
        t.add_definition(children_definition(m)).expect("fresh");
    }
    t
}

/// `ID_r(x, y1..yn) := Children_n(x, ys) ∧ mother literals(x) ∧ daughter literals(yi)`.
pub fn id_rule_to_definition(r: &IdRule) -> Definition {
    let ys = ys(r.arity());
    let mut parts = vec![apply(&format!("Children{}", r.arity()), &args("x", &ys))];
    parts.extend(r.mother.iter().map(|l| l.formula("x")));
    for (d, y) in r.daughters.iter().zip(&ys) {
        parts.extend(d.iter().map(|l| l.formula(y)));
    }
    Definition::new(&r.name(), &args("x", &ys), and_all(parts))
}

fn position_name(r: &IdRule, i: usize) -> String {
    format!("{}_{}", r.name(), i)
}

/// `ID_r_i(z)`: z fills daughter position i of some instance of rule r.
fn position_definition(r: &IdRule, i: usize) -> Definition {
    let mut ys = ys(r.arity());
    ys[i - 1] = "z".into();
    let bound: Vec<String> = std::iter::once("x".to_string()).chain(ys.iter().filter(|y| *y != "z").cloned()).collect();
    let body = exists_many(&bound, apply(&r.name(), &args("x", &ys)));
    Definition::new(&position_name(r, i), &["z"], body)
}

fn positions(rules: &[IdRule]) -> impl Iterator<Item = (&IdRule, usize)> {
    rules.iter().flat_map(|r| (1..=r.arity()).map(move |i| (r, i)))
}

/// `Licensed(z)`: z is a daughter in some rule instance.
fn licensed_definition(rules: &[IdRule]) -> Definition {
    Definition::new("Licensed", &["z"], or_all(positions(rules).map(|(r, i)| apply(&position_name(r, i), &["z"]))))
}

/// `Induced(x)`: the local tree rooted at x is induced by some rule.
fn induced_definition(rules: &[IdRule]) -> Definition {
    let alts = rules.iter().map(|r| {
        let ys = ys(r.arity());
        exists_many(&ys, apply(&r.name(), &args("x", &ys)))
    });
    Definition::new("Induced", &["x"], or_all(alts))
}

/// `Free_ℓ(z) := ¬Licensed(z) ∨ ⋁ {ID_r_i(z) : position (r,i) has no literal
/// conflicting with ℓ}`. Relies on the `ID_r_i` and `Licensed` definitions.
pub fn build_free(rules: &[IdRule], lit: &Literal) -> Definition {
    let ok = positions(rules)
        .filter(|(r, i)| !r.daughters[i - 1].iter().any(|l| l.conflicts(lit)))
        .map(|(r, i)| apply(&position_name(r, i), &["z"]));
    let body = or_all(std::iter::once(not(apply("Licensed", &["z"]))).chain(ok));
    Definition::new(&format!("Free_{}", lit.suffix()), &["z"], body)
}

/// `Propagate_f(x, y)`, symmetric by construction.
pub fn build_propagate(rules: &[IdRule], spec: &PropagationSpec) -> Definition {
    let alts = spec.patterns.iter().map(|p| match p {
        PropagationPattern::ParentChildWithLabel { label: l } => {
            or(and(idom("x", "y"), label(l, "y")), and(idom("y", "x"), label(l, "x")))
        }
        PropagationPattern::RulePositions { rule, a, b } => {
            let r = rules.iter().find(|r| &r.id == rule).expect("pattern names a rule");
            let ws: Vec<String> = (1..=r.arity()).map(|j| format!("w{j}")).collect();
            let pos = |i: usize| if i == 0 { "v".to_string() } else { ws[i - 1].clone() };
            let (pa, pb) = (pos(*a), pos(*b));
            let link = or(and(eq("x", &pa), eq("y", &pb)), and(eq("x", &pb), eq("y", &pa)));
            let bound: Vec<String> = std::iter::once("v".to_string()).chain(ws.iter().cloned()).collect();
            exists_many(&bound, and(apply(&r.name(), &args("v", &ws)), link))
        }
    });
    Definition::new(&format!("Propagate_{}", spec.feature), &["x", "y"], or_all(alts))
}

/// `PPrime_ℓ`, `PrivSet_ℓ` and `Privileged_ℓ`, in the displayed shapes.
pub fn emit_privilege(lit: &Literal) -> Vec<Definition> {
    let s = lit.suffix();
    let free = format!("Free_{s}");
    let prop = format!("Propagate_{}", lit.label);
    let pprime = format!("PPrime_{s}");
    let privset = format!("PrivSet_{s}");
    vec![
        Definition::new(
            &pprime,
            &["X"],
            and(
                all("x", implies(not(apply(&free, &["x"])), in_set("X", "x"))),
                all("x", implies(ex("y", and(in_set("X", "y"), apply(&prop, &["x", "y"]))), in_set("X", "x"))),
            ),
        ),
        Definition::new(
            &privset,
            &["X"],
            and(apply(&pprime, &["X"]), all_set("Y", implies(apply(&pprime, &["Y"]), apply("Subset", &["X", "Y"])))),
        ),
        Definition::new(
            &format!("Privileged_{s}"),
            &["x"],
            ex_set("X", and(apply(&privset, &["X"]), in_set("X", "x"))),
        ),
    ]
}

/// `∀x[(guard(x) ∧ ¬Privileged_ℓ(x)) → ℓ(x)]`; without a guard the
/// antecedent is just `¬Privileged_ℓ(x)`.
pub fn fsd_to_axiom(d: &DefaultSpec) -> Formula {
    let unpriv = not(apply(&format!("Privileged_{}", d.literal.suffix()), &["x"]));
    let ante = match d.guard.as_slice() {
        [] => unpriv,
        g => and(and_all(g.iter().map(|l| label(l, "x"))), unpriv),
    };
    all("x", implies(ante, d.literal.formula("x")))
}

/// A grammar fragment: labels, ID rules, propagation and defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpsgGrammar {
    pub labels: Vec<String>,
    pub rules: Vec<IdRule>,
    pub propagation: Vec<PropagationSpec>,
    pub defaults: Vec<DefaultSpec>,
}

impl GpsgGrammar {
    /// The core library plus every definition the rules, propagation specs
    /// and defaults need, the local-tree licensing axiom, and one axiom per
    /// default.
    pub fn to_theory(&self) -> Result<Theory, TheoryError> {
        let mut t = Theory::new();
        for l in &self.labels {
            t.add_label(l)?;
        }
        for r in &self.rules {
            for l in r.labels() {
                if !t.has_label(l) {
                    return Err(TheoryError::UnknownName(l.into()));
                }
            }
        }
        t.extend(&core_theory())?;
        for r in &self.rules {
            t.add_definition(id_rule_to_definition(r))?;
        }
        for (r, i) in positions(&self.rules) {
            t.add_definition(position_definition(r, i))?;
        }
        t.add_definition(licensed_definition(&self.rules))?;
        t.add_definition(induced_definition(&self.rules))?;
        for spec in &self.propagation {
            t.add_definition(build_propagate(&self.rules, spec))?;
        }
        for d in &self.defaults {
            if !self.propagation.iter().any(|p| p.feature == d.literal.label) {
                t.add_definition(build_propagate(
                    &self.rules,
                    &PropagationSpec { feature: d.literal.label.clone(), patterns: Vec::new() },
                ))?;
            }
            for lit in [d.literal.clone(), d.literal.negated()] {
                if t.definition(&format!("Free_{}", lit.suffix())).is_none() {
                    t.add_definition(build_free(&self.rules, &lit))?;
                    for def in emit_privilege(&lit) {
                        t.add_definition(def)?;
                    }
                }
            }
        }
        t.add_axiom(all("x", implies(ex("y", idom("x", "y")), apply("Induced", &["x"]))));
        for d in &self.defaults {
            t.add_axiom(fsd_to_axiom(d));
        }
        t.validate()?;
        Ok(t)
    }
}

/// The worked example: the ID5 rule plus an inverted, a head-projecting, a
/// non-headed and a passive rule; head-feature propagation of INV and PAS;
/// the defaults `[−INV]` and `BAR0 ⊃ ∼PAS`.
pub fn fsd_example() -> GpsgGrammar {
    let labels = ["V2", "V1", "N2", "H", "SUBCAT5", "BAR0", "INV", "PAS"];
    let rules = vec![
        IdRule::new("5", &["V2"], &[&["H", "SUBCAT5"], &["N2"], &["N2"]]),
        IdRule::new("1", &["V1"], &[&["H", "INV", "BAR0"], &["N2"]]),
        IdRule::new("2", &["V2"], &[&["H", "V1"], &["N2"]]),
        IdRule::new("3", &["V2"], &[&["V1"], &["N2"]]),
        IdRule::new("4", &["V1"], &[&["H", "BAR0", "PAS"], &["N2"]]),
    ];
    let hfc = |f: &str| PropagationSpec {
        feature: f.into(),
        patterns: vec![PropagationPattern::ParentChildWithLabel { label: "H".into() }],
    };
    GpsgGrammar {
        labels: labels.iter().map(|s| s.to_string()).collect(),
        rules,
        propagation: vec![hfc("INV"), hfc("PAS")],
        defaults: vec![
            DefaultSpec { literal: Literal::neg("INV"), guard: Vec::new() },
            DefaultSpec { literal: Literal::neg("PAS"), guard: vec!["BAR0".into()] },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval, find_assignments, satisfies, Valuation};
    use crate::syntax::{parse_theory, parse_tree, print_formula};

    #[test]
    fn id5_body_matches_displayed_shape() {
        let d = id_rule_to_definition(&fsd_example().rules[0]);
        assert_eq!(
            print_formula(&d.body),
            "Children3(x, y1, y2, y3) & V2(x) & H(y1) & SUBCAT5(y1) & N2(y2) & N2(y3)"
        );
    }

    #[test]
    fn children_is_exhaustive() {
        let d = children_definition(2);
        assert_eq!(
            print_formula(&d.body),
            "idom(x, y1) & idom(x, y2) & prec(y1, y2) & all z. idom(x, z) -> z = y1 | z = y2"
        );
    }

    #[test]
    fn id5_has_one_instance_on_its_tree() {
        let th = fsd_example().to_theory().unwrap();
        let t = parse_tree("({V2} ({H,SUBCAT5}) ({N2}) ({N2}))").unwrap();
        let vars: Vec<String> = ["x", "y1", "y2", "y3"].iter().map(|s| s.to_string()).collect();
        let f = apply("ID5", &["x", "y1", "y2", "y3"]);
        let a = find_assignments(&t, &th, &f, &vars).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].nodes["x"].to_string(), "ε");
        assert_eq!(a[0].nodes["y3"].to_string(), "2");
        assert!(satisfies(&t, &th).unwrap().holds());
    }

    #[test]
    fn default_axioms_match_displayed_shapes() {
        let g = fsd_example();
        assert_eq!(print_formula(&fsd_to_axiom(&g.defaults[0])), "all x. !Privileged_notINV(x) -> !INV(x)");
        assert_eq!(
            print_formula(&fsd_to_axiom(&g.defaults[1])),
            "all x. BAR0(x) & !Privileged_notPAS(x) -> !PAS(x)"
        );
    }

    #[test]
    fn free_excludes_conflicting_positions() {
        // Rule 2 puts −F on its second daughter.
        let g = GpsgGrammar {
            labels: vec!["M".into(), "D".into(), "F".into()],
            rules: vec![
                IdRule::new("1", &["M"], &[&["D"]]),
                IdRule {
                    id: "2".into(),
                    mother: vec![Literal::pos("M")],
                    daughters: vec![vec![Literal::pos("D")], vec![Literal::neg("F"), Literal::pos("D")]],
                },
            ],
            propagation: Vec::new(),
            defaults: vec![DefaultSpec { literal: Literal::pos("F"), guard: Vec::new() }],
        };
        let th = g.to_theory().unwrap();
        let t = parse_tree("({M} ({D}) ({D}))").unwrap();
        let free = |addr: Vec<u32>| {
            eval(&t, &th, &apply("Free_F", &["x"]), &Valuation::new().with_node("x", addr)).unwrap()
        };
        assert!(free(vec![]));
        assert!(free(vec![0]));
        assert!(!free(vec![1]));
    }

    #[test]
    fn unmentioned_feature_is_free_everywhere() {
        let th = fsd_example().to_theory().unwrap();
        let t = parse_tree("({V2} ({H,SUBCAT5}) ({N2}) ({N2}))").unwrap();
        let all_free = all("x", apply("Free_PAS", &["x"]));
        assert!(eval(&t, &th, &all_free, &Valuation::new()).unwrap());
    }

    #[test]
    fn emitted_theory_round_trips_through_text() {
        let th = fsd_example().to_theory().unwrap();
        let text = crate::syntax::print_theory(&th);
        assert_eq!(parse_theory(&text).unwrap(), th);
    }
}
