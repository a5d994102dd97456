//! Monadic second-order logic over labeled finite trees: trees and their
//! relations, formulas and theories, a model checker, and a compiler from
//! formulas to bottom-up tree automata.
//!
//! The `gpsg` and `gb` modules build concrete grammar theories in the logic.

pub mod automata;
pub mod eval;
pub mod formula;
pub mod gb;
pub mod gpsg;
pub mod nodeset;
pub mod par;
pub mod syntax;
pub mod theory;
pub mod tree;

pub use eval::{
    eval, eval_with_config, find_assignments, find_assignments_with_config, satisfies, satisfies_with_config, CheckerConfig,
    EvalError, Valuation,
};
pub use formula::{Formula, Quantifier, Sort};
pub use syntax::{parse_formula, parse_theory, parse_tree, print_formula, print_theory, print_tree, ParseError};
pub use theory::{Definition, Theory, TheoryError};
pub use tree::{enumerate_trees, GornAddress, LabeledTree, Relation};
