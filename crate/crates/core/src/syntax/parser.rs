use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::formula::{self, Formula, Quantifier, Sort};
use crate::theory::{Definition, Theory};
use crate::tree::{GornAddress, LabeledTree, Relation};

const KEYWORDS: &[&str] = &[
    "label", "const", "def", "axiom", "all", "ex", "All", "Ex", "idom", "dom", "prec", "true", "false",
];

#[derive(Clone, Debug)]
struct Ident {
    name: String,
    span: SourceSpan,
}

#[derive(Clone, Copy, Debug)]
enum BinOp {
    And,
    Or,
    Implies,
    Iff,
}

/// Formula as parsed, before names are resolved against declarations.
#[derive(Clone, Debug)]
enum Raw {
    True,
    False,
    Rel(Relation, Ident, Ident),
    Pred(Ident, Vec<Ident>),
    Not(Box<Raw>),
    Bin(BinOp, Box<Raw>, Box<Raw>),
    Quant(Quantifier, Ident, Box<Raw>),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn syntax(msg: impl Into<String>, span: SourceSpan) -> ParseError {
    ParseError { kind: ParseErrorKind::Syntax, message: msg.into(), span }
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<SourceSpan, ParseError> {
        if self.peek() == t {
            Ok(self.bump().span)
        } else {
            Err(syntax(format!("expected {}, found {}", t.describe(), self.peek().describe()), self.span()))
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            other => Err(syntax(format!("expected a name, found {}", other.describe()), self.span())),
        }
    }

    fn non_keyword(&mut self) -> Result<Ident, ParseError> {
        let id = self.ident()?;
        if KEYWORDS.contains(&id.name.as_str()) {
            return Err(syntax(format!("`{}` is a reserved word", id.name), id.span));
        }
        Ok(id)
    }

    fn formula(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::DArrow) {
            let rhs = self.implication()?;
            lhs = Raw::Bin(BinOp::Iff, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Raw::Bin(BinOp::Implies, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.conjunction()?;
            lhs = Raw::Bin(BinOp::Or, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Raw::Bin(BinOp::And, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn quantifier(&self) -> Option<Quantifier> {
        match self.peek() {
            Tok::ExUnique => Some(Quantifier::ExistsUniqueNode),
            Tok::Ident(w) => match w.as_str() {
                "all" => Some(Quantifier::ForallNode),
                "ex" => Some(Quantifier::ExistsNode),
                "All" => Some(Quantifier::ForallSet),
                "Ex" => Some(Quantifier::ExistsSet),
                _ => None,
            },
            _ => None,
        }
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        if self.eat(&Tok::Bang) {
            return Ok(Raw::Not(Box::new(self.unary()?)));
        }
        if let Some(q) = self.quantifier() {
            self.bump();
            let mut vars = vec![self.bound_var(q)?];
            while self.eat(&Tok::Comma) {
                vars.push(self.bound_var(q)?);
            }
            self.expect(&Tok::Dot)?;
            let mut body = self.formula()?;
            for v in vars.into_iter().rev() {
                body = Raw::Quant(q, v, Box::new(body));
            }
            return Ok(body);
        }
        self.atom()
    }

    fn bound_var(&mut self, q: Quantifier) -> Result<Ident, ParseError> {
        let v = self.non_keyword()?;
        if Sort::of_name(&v.name) != q.sort() {
            let want = match q.sort() {
                Sort::Node => "node variables must start with a lowercase letter",
                Sort::Set => "set variables must start with an uppercase letter",
            };
            return Err(syntax(format!("`{}`: {want}", v.name), v.span));
        }
        Ok(v)
    }

    fn args(&mut self) -> Result<Vec<Ident>, ParseError> {
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.non_keyword()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(w) => {
                let rel = match w.as_str() {
                    "true" => {
                        self.bump();
                        return Ok(Raw::True);
                    }
                    "false" => {
                        self.bump();
                        return Ok(Raw::False);
                    }
                    "idom" => Some(Relation::Idom),
                    "dom" => Some(Relation::Dom),
                    "prec" => Some(Relation::Prec),
                    _ => None,
                };
                if let Some(rel) = rel {
                    let kw = self.bump();
                    let args = self.args()?;
                    if args.len() != 2 {
                        return Err(syntax(format!("`{w}` takes two arguments"), kw.span));
                    }
                    let mut it = args.into_iter();
                    return Ok(Raw::Rel(rel, it.next().unwrap(), it.next().unwrap()));
                }
                if *self.peek_at(1) == Tok::EqSign {
                    let a = self.non_keyword()?;
                    self.bump();
                    let b = self.non_keyword()?;
                    return Ok(Raw::Rel(Relation::Eq, a, b));
                }
                let name = self.non_keyword()?;
                if *self.peek() != Tok::LParen {
                    return Err(syntax(
                        format!("expected `(` or `=` after `{}`, found {}", name.name, self.peek().describe()),
                        self.span(),
                    ));
                }
                let args = self.args()?;
                Ok(Raw::Pred(name, args))
            }
            other => Err(syntax(format!("expected a formula, found {}", other.describe()), self.span())),
        }
    }
}

enum Item {
    Label(Ident),
    Const(Ident),
    Def(Ident, Vec<Ident>, Raw),
    Axiom(Raw),
}

fn parse_items(p: &mut Parser) -> Result<Vec<Item>, ParseError> {
    let mut items = Vec::new();
    while *p.peek() != Tok::Eof {
        let kw = p.ident()?;
        match kw.name.as_str() {
            "label" | "const" => {
                loop {
                    let n = p.non_keyword()?;
                    items.push(if kw.name == "label" { Item::Label(n) } else { Item::Const(n) });
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                p.expect(&Tok::Semi)?;
            }
            "def" => {
                let name = p.non_keyword()?;
                let params = p.args()?;
                p.expect(&Tok::Define)?;
                let body = p.formula()?;
                p.expect(&Tok::Semi)?;
                items.push(Item::Def(name, params, body));
            }
            "axiom" => {
                let body = p.formula()?;
                p.expect(&Tok::Semi)?;
                items.push(Item::Axiom(body));
            }
            other => {
                return Err(syntax(
                    format!("expected `label`, `const`, `def` or `axiom`, found `{other}`"),
                    kw.span,
                ))
            }
        }
    }
    Ok(items)
}

fn unknown(msg: String, span: SourceSpan) -> ParseError {
    ParseError { kind: ParseErrorKind::UnknownName, message: msg, span }
}

struct Resolver<'a> {
    theory: &'a Theory,
    /// arity and parameter sorts of every definition, including ones not yet
    /// added to `theory`
    defs: &'a BTreeMap<String, Vec<Sort>>,
}

impl Resolver<'_> {
    fn node_term(&self, t: &Ident, scope: &[(String, Sort)]) -> Result<String, ParseError> {
        match scope.iter().rev().find(|(n, _)| *n == t.name) {
            Some((_, Sort::Node)) => Ok(t.name.clone()),
            Some((_, Sort::Set)) => Err(ParseError {
                kind: ParseErrorKind::UnknownName,
                message: format!("`{}` is a set variable where a node is expected", t.name),
                span: t.span,
            }),
            None if self.theory.is_constant(&t.name) => Ok(t.name.clone()),
            None => Err(unknown(format!("unbound variable `{}`", t.name), t.span)),
        }
    }

    fn resolve(&self, raw: &Raw, scope: &mut Vec<(String, Sort)>) -> Result<Formula, ParseError> {
        Ok(match raw {
            Raw::True => Formula::True,
            Raw::False => Formula::False,
            Raw::Rel(rel, a, b) => Formula::Rel(*rel, self.node_term(a, scope)?, self.node_term(b, scope)?),
            Raw::Not(f) => formula::not(self.resolve(f, scope)?),
            Raw::Bin(op, a, b) => {
                let a = self.resolve(a, scope)?;
                let b = self.resolve(b, scope)?;
                match op {
                    BinOp::And => formula::and(a, b),
                    BinOp::Or => formula::or(a, b),
                    BinOp::Implies => formula::implies(a, b),
                    BinOp::Iff => formula::iff(a, b),
                }
            }
            Raw::Quant(q, v, body) => {
                scope.push((v.name.clone(), q.sort()));
                let b = self.resolve(body, scope);
                scope.pop();
                Formula::Quant(*q, v.name.clone(), Box::new(b?))
            }
            Raw::Pred(name, args) => {
                let bound = scope.iter().rev().find(|(n, _)| *n == name.name).map(|(_, s)| *s);
                if bound == Some(Sort::Set) {
                    if args.len() != 1 {
                        return Err(syntax(format!("set variable `{}` takes one argument", name.name), name.span));
                    }
                    return Ok(Formula::InSet(name.name.clone(), self.node_term(&args[0], scope)?));
                }
                if self.theory.has_label(&name.name) {
                    if args.len() != 1 {
                        return Err(syntax(format!("label `{}` takes one argument", name.name), name.span));
                    }
                    return Ok(Formula::Label(name.name.clone(), self.node_term(&args[0], scope)?));
                }
                let Some(sorts) = self.defs.get(&name.name) else {
                    return Err(unknown(format!("unknown predicate `{}`", name.name), name.span));
                };
                if sorts.len() != args.len() {
                    return Err(syntax(
                        format!("`{}` expects {} argument(s), got {}", name.name, sorts.len(), args.len()),
                        name.span,
                    ));
                }
                let mut out = Vec::new();
                for (sort, a) in sorts.iter().zip(args) {
                    match sort {
                        Sort::Node => out.push(self.node_term(a, scope)?),
                        Sort::Set => match scope.iter().rev().find(|(n, _)| *n == a.name) {
                            Some((_, Sort::Set)) => out.push(a.name.clone()),
                            _ => return Err(unknown(format!("`{}` is not a set variable in scope", a.name), a.span)),
                        },
                    }
                }
                Formula::Apply(name.name.clone(), out)
            }
        })
    }
}

/// Parses a `.thy` theory.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let mut p = Parser::new(text)?;
    let items = parse_items(&mut p)?;

    let mut theory = Theory::new();
    let mut defs: BTreeMap<String, Vec<Sort>> = BTreeMap::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let redeclared = |id: &Ident| ParseError {
        kind: ParseErrorKind::Redeclaration,
        message: format!("`{}` is declared more than once", id.name),
        span: id.span,
    };
    for item in &items {
        match item {
            Item::Label(id) => {
                if !seen.insert(id.name.clone()) {
                    return Err(redeclared(id));
                }
                theory.labels.push(id.name.clone());
            }
            Item::Const(id) => {
                if !seen.insert(id.name.clone()) {
                    return Err(redeclared(id));
                }
                if Sort::of_name(&id.name) != Sort::Node {
                    return Err(syntax(format!("constant `{}` must start with a lowercase letter", id.name), id.span));
                }
                theory.constants.push(id.name.clone());
            }
            Item::Def(id, params, _) => {
                if !seen.insert(id.name.clone()) {
                    return Err(redeclared(id));
                }
                let mut pnames = BTreeSet::new();
                for prm in params {
                    if !pnames.insert(&prm.name) {
                        return Err(redeclared(prm));
                    }
                }
                defs.insert(id.name.clone(), params.iter().map(|p| Sort::of_name(&p.name)).collect());
            }
            Item::Axiom(_) => {}
        }
    }
    let resolver = Resolver { theory: &theory, defs: &defs };
    let mut resolved_defs = Vec::new();
    let mut axioms = Vec::new();
    for item in &items {
        match item {
            Item::Def(id, params, body) => {
                let mut scope: Vec<(String, Sort)> =
                    params.iter().map(|p| (p.name.clone(), Sort::of_name(&p.name))).collect();
                let body = resolver.resolve(body, &mut scope)?;
                resolved_defs.push(Definition { name: id.name.clone(), params: scope, body });
            }
            Item::Axiom(body) => axioms.push(resolver.resolve(body, &mut Vec::new())?),
            _ => {}
        }
    }
    for d in resolved_defs {
        theory.definitions.insert(d.name.clone(), d);
    }
    theory.axioms = axioms;
    Ok(theory)
}

/// Parses a single formula against a theory's declarations. `free` lists
/// variables to treat as free, with sorts by the naming convention.
pub fn parse_formula(text: &str, theory: &Theory, free: &[&str]) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(format!("unexpected {}", p.peek().describe()), p.span()));
    }
    let defs: BTreeMap<String, Vec<Sort>> = theory
        .definitions
        .values()
        .map(|d| (d.name.clone(), d.params.iter().map(|(_, s)| *s).collect()))
        .collect();
    let resolver = Resolver { theory, defs: &defs };
    let mut scope: Vec<(String, Sort)> = free.iter().map(|v| (v.to_string(), Sort::of_name(v))).collect();
    resolver.resolve(&raw, &mut scope)
}

/// Parses the bracketed tree format: `({A,B}@c ({}) ({C}))`.
pub fn parse_tree(text: &str) -> Result<LabeledTree, ParseError> {
    let mut p = Parser::new(text)?;
    let mut domain = BTreeSet::new();
    let mut labels = BTreeMap::new();
    let mut constants: BTreeMap<String, GornAddress> = BTreeMap::new();
    parse_tree_node(&mut p, GornAddress::root(), &mut domain, &mut labels, &mut constants)?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(format!("unexpected {} after tree", p.peek().describe()), p.span()));
    }
    LabeledTree::new(domain, labels, constants).map_err(|e| syntax(e.to_string(), SourceSpan::default()))
}

fn parse_tree_node(
    p: &mut Parser,
    addr: GornAddress,
    domain: &mut BTreeSet<GornAddress>,
    labels: &mut BTreeMap<GornAddress, BTreeSet<String>>,
    constants: &mut BTreeMap<String, GornAddress>,
) -> Result<(), ParseError> {
    p.expect(&Tok::LParen)?;
    p.expect(&Tok::LBrace)?;
    let mut set = BTreeSet::new();
    if !p.eat(&Tok::RBrace) {
        loop {
            let l = p.ident()?;
            set.insert(l.name);
            if p.eat(&Tok::RBrace) {
                break;
            }
            p.expect(&Tok::Comma)?;
        }
    }
    while p.eat(&Tok::At) {
        let c = p.ident()?;
        if constants.insert(c.name.clone(), addr.clone()).is_some() {
            return Err(ParseError {
                kind: ParseErrorKind::DuplicateConstant,
                message: format!("constant `{}` is bound more than once", c.name),
                span: c.span,
            });
        }
    }
    domain.insert(addr.clone());
    labels.insert(addr.clone(), set);
    let mut i = 0;
    while *p.peek() == Tok::LParen {
        parse_tree_node(p, addr.child(i), domain, labels, constants)?;
        i += 1;
    }
    p.expect(&Tok::RParen)?;
    Ok(())
}
