//! Text formats for theories (`.thy`), formulas and trees (`.tree`).
//!
//! Theory grammar:
//!
//! ```text
//! label NAME;              const NAME;
//! def NAME(params) := FORMULA;
//! axiom FORMULA;
//! ```
//!
//! Formulas use `idom(x,y)`, `dom(x,y)`, `prec(x,y)`, `x = y`, `P(x)`, `X(x)`,
//! `true`, `false`, the connectives `! & | -> <->` (tightest first, `->`
//! right-associative, the others left-associative) and the quantifiers
//! `all x.`, `ex x.`, `ex! x.`, `All X.`, `Ex X.`. A quantifier body extends
//! as far right as possible. `#` starts a comment.
//!
//! Trees are s-expressions: `({V2} ({H,SUBCAT5}) ({N2}) ({N2}))`, with `@c`
//! after a label set binding constant `c` to that node.

mod lexer;
mod parser;

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::formula::Formula;
use crate::theory::Theory;
use crate::tree::{LabeledTree, Relation};

pub use parser::{parse_formula, parse_theory, parse_tree};

/// Byte range plus 1-based line/column of its start.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    Redeclaration,
    UnknownName,
    DuplicateConstant,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub span: SourceSpan,
}

fn prec_level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(_) | Formula::Quant(..) => 5,
        _ => 6,
    }
}

// A quantifier body runs to the end of the enclosing group, so a quantifier
// (possibly under `!`) needs parentheses unless nothing follows it.
fn write_formula(out: &mut String, f: &Formula, min: u8, tail: bool) {
    let level = prec_level(f);
    let paren = level < min || (!tail && starts_greedy(f));
    let tail_inner = paren || tail;
    if paren {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Rel(Relation::Eq, a, b) => {
            let _ = write!(out, "{a} = {b}");
        }
        Formula::Rel(rel, a, b) => {
            let kw = match rel {
                Relation::Idom => "idom",
                Relation::Dom => "dom",
                Relation::Prec => "prec",
                Relation::Eq => unreachable!(),
            };
            let _ = write!(out, "{kw}({a}, {b})");
        }
        Formula::Label(p, x) | Formula::InSet(p, x) => {
            let _ = write!(out, "{p}({x})");
        }
        Formula::Apply(n, args) => {
            let _ = write!(out, "{n}({})", args.join(", "));
        }
        Formula::Not(g) => {
            out.push('!');
            write_formula(out, g, 5, tail_inner);
        }
        Formula::Quant(q, v, body) => {
            let _ = write!(out, "{} {v}. ", q.keyword());
            write_formula(out, body, 0, true);
        }
        Formula::Iff(a, b) => binary(out, " <-> ", a, b, 1, 2, tail_inner),
        Formula::Implies(a, b) => binary(out, " -> ", a, b, 3, 2, tail_inner),
        Formula::Or(a, b) => binary(out, " | ", a, b, 3, 4, tail_inner),
        Formula::And(a, b) => binary(out, " & ", a, b, 4, 5, tail_inner),
    }
    if paren {
        out.push(')');
    }
}

fn starts_greedy(f: &Formula) -> bool {
    match f {
        Formula::Quant(..) => true,
        Formula::Not(g) => starts_greedy(g),
        _ => false,
    }
}

fn binary(out: &mut String, op: &str, a: &Formula, b: &Formula, lmin: u8, rmin: u8, tail: bool) {
    write_formula(out, a, lmin, false);
    out.push_str(op);
    write_formula(out, b, rmin, tail);
}

/// Prints a formula with minimal parentheses; parsing the output gives back
/// the same tree.
pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, 0, true);
    s
}

/// Canonical `.thy` text: labels, constants, definitions, axioms, one
/// declaration per line, sections separated by a blank line.
pub fn print_theory(t: &Theory) -> String {
    let mut sections: Vec<String> = Vec::new();
    let mut decls = String::new();
    for l in &t.labels {
        let _ = writeln!(decls, "label {l};");
    }
    for c in &t.constants {
        let _ = writeln!(decls, "const {c};");
    }
    if !decls.is_empty() {
        sections.push(decls);
    }
    if !t.definitions.is_empty() {
        let mut s = String::new();
        for d in t.definitions.values() {
            let params: Vec<&str> = d.params.iter().map(|(p, _)| p.as_str()).collect();
            let _ = writeln!(s, "def {}({}) := {};", d.name, params.join(", "), print_formula(&d.body));
        }
        sections.push(s);
    }
    if !t.axioms.is_empty() {
        let mut s = String::new();
        for a in &t.axioms {
            let _ = writeln!(s, "axiom {};", print_formula(a));
        }
        sections.push(s);
    }
    sections.join("\n")
}

/// Canonical bracketed text for a tree, on one line.
pub fn print_tree(t: &LabeledTree) -> String {
    let mut consts: Vec<Vec<&str>> = vec![Vec::new(); t.len()];
    for (name, addr) in t.constants() {
        consts[t.index_of(addr).expect("constant in domain")].push(name);
    }
    let mut out = String::new();
    write_tree_node(&mut out, t, 0, &consts);
    out
}

fn write_tree_node(out: &mut String, t: &LabeledTree, i: usize, consts: &[Vec<&str>]) {
    out.push_str("({");
    let labels: Vec<&str> = t.labels(i).iter().map(String::as_str).collect();
    out.push_str(&labels.join(","));
    out.push('}');
    for c in &consts[i] {
        out.push('@');
        out.push_str(c);
    }
    for &c in t.children(i) {
        out.push(' ');
        write_tree_node(out, t, c, consts);
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::*;

    #[test]
    fn parse_simple_theory() {
        let t = parse_theory("label A; axiom ex x. A(x);").unwrap();
        assert_eq!(t.labels, vec!["A"]);
        assert_eq!(t.axioms, vec![ex("x", label("A", "x"))]);
    }

    #[test]
    fn parse_subset_definition() {
        let t = parse_theory("def Subset(X,Y) := all x. (X(x) -> Y(x));").unwrap();
        let d = t.definition("Subset").unwrap();
        assert_eq!(d.body, all("x", implies(in_set("X", "x"), in_set("Y", "x"))));
    }

    #[test]
    fn malformed_quantifier_reports_span() {
        let src = "axiom all x, x;";
        let e = parse_theory(src).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert!(e.span.start <= e.span.end && e.span.end <= src.len());
        assert_eq!(e.span.start, 14);
    }

    #[test]
    fn precedence_and_associativity() {
        let t = parse_theory("label A, B, C; axiom all x. A(x) | B(x) & !C(x) -> A(x) -> B(x) <-> C(x);").unwrap();
        let (a, b, c) = (label("A", "x"), label("B", "x"), label("C", "x"));
        let want = all(
            "x",
            iff(
                implies(or(a.clone(), and(b.clone(), not(c.clone()))), implies(a, b)),
                c,
            ),
        );
        assert_eq!(t.axioms[0], want);
    }

    #[test]
    fn errors_have_kinds() {
        let e = parse_theory("label A; label A;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Redeclaration);
        let e = parse_theory("axiom ex x. B(x);").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownName);
        let e = parse_theory("axiom ex x. y = x;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownName);
        let e = parse_theory("label A; axiom $;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Lexical);
        let e = parse_theory("axiom all X. true;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn forward_and_recursive_references_parse() {
        let t = parse_theory("def D(x) := E(x); def E(x) := D(x);").unwrap();
        assert_eq!(t.definitions.len(), 2);
    }

    #[test]
    fn constants_and_set_args() {
        let t = parse_theory(
            "label A; const c; def Sub(X, Y) := all x. X(x) -> Y(x); axiom A(c) & All X. Sub(X, X);",
        )
        .unwrap();
        assert_eq!(
            t.axioms[0],
            and(label("A", "c"), all_set("X", apply("Sub", &["X", "X"])))
        );
    }

    #[test]
    fn printing_parenthesizes_quantifiers() {
        let f = or(and(label("A", "x"), ex("y", label("A", "y"))), label("B", "x"));
        let s = print_formula(&f);
        assert_eq!(s, "A(x) & (ex y. A(y)) | B(x)");
        let f = and(label("A", "x"), ex("y", label("A", "y")));
        assert_eq!(print_formula(&f), "A(x) & ex y. A(y)");
        let f = implies(implies(label("A", "x"), label("B", "x")), label("A", "x"));
        assert_eq!(print_formula(&f), "(A(x) -> B(x)) -> A(x)");
    }

    #[test]
    fn tree_examples() {
        let t = parse_tree("({V2} ({H,SUBCAT5}) ({N2}) ({N2}))").unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.children(0).len(), 3);
        assert!(t.has_label(1, "SUBCAT5"));

        let t = parse_tree("({})").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(print_tree(&t), "({})");

        let t = parse_tree("({A}@c)").unwrap();
        assert_eq!(t.constant("c"), Some(0));
        assert_eq!(print_tree(&t), "({A}@c)");

        let e = parse_tree("({A}@c ({}@c))").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateConstant);
        assert!(parse_tree("({A}").is_err());
    }
}
