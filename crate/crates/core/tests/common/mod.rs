//! Generators shared by the property tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use treelogic::formula::*;
use treelogic::tree::Shapes;
use treelogic::{parse_theory, Formula, LabeledTree, Relation, Theory, Valuation};

pub const NODE_VARS: [&str; 3] = ["x", "y", "z"];
pub const SET_VARS: [&str; 2] = ["X", "Y"];

/// Labels A and B plus three small definitions the formula generator uses.
pub fn base_theory() -> Theory {
    parse_theory(
        "label A;\nlabel B;\n\
         def Sib(x, y) := (ex z. idom(z, x) & idom(z, y)) & !x = y;\n\
         def Leaf(x) := !ex y. idom(x, y);\n\
         def Closed(X) := all x. all y. X(x) & idom(x, y) -> X(y);\n",
    )
    .unwrap()
}

pub fn arb_tree(max_nodes: usize, k: usize, labels: &'static [&'static str]) -> impl Strategy<Value = LabeledTree> {
    (1..=max_nodes)
        .prop_flat_map(move |n| {
            let shapes: Vec<Vec<usize>> = Shapes::new(n, k).collect();
            (prop::sample::select(shapes), prop::collection::vec(0u64..(1 << labels.len()), n))
        })
        .prop_map(move |(shape, masks)| {
            let sets = masks
                .iter()
                .map(|&m| labels.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, l)| l.to_string()).collect())
                .collect();
            LabeledTree::from_preorder(&shape, sets).unwrap()
        })
}

fn node_var() -> impl Strategy<Value = String> {
    prop::sample::select(NODE_VARS.to_vec()).prop_map(String::from)
}

fn set_var() -> impl Strategy<Value = String> {
    prop::sample::select(SET_VARS.to_vec()).prop_map(String::from)
}

fn atom(with_defs: bool) -> BoxedStrategy<Formula> {
    let rel = prop::sample::select(vec![Relation::Idom, Relation::Dom, Relation::Prec, Relation::Eq]);
    let mut options: Vec<BoxedStrategy<Formula>> = vec![
        Just(Formula::True).boxed(),
        Just(Formula::False).boxed(),
        (rel, node_var(), node_var()).prop_map(|(r, a, b)| Formula::Rel(r, a, b)).boxed(),
        (prop::sample::select(vec!["A", "B"]), node_var()).prop_map(|(l, v)| label(l, &v)).boxed(),
        (set_var(), node_var()).prop_map(|(s, v)| in_set(&s, &v)).boxed(),
    ];
    if with_defs {
        options.push((node_var(), node_var()).prop_map(|(a, b)| apply("Sib", &[&a, &b])).boxed());
        options.push(node_var().prop_map(|a| apply("Leaf", &[&a])).boxed());
        options.push(set_var().prop_map(|s| apply("Closed", &[&s])).boxed());
    }
    prop::strategy::Union::new(options).boxed()
}

/// Random formulas over A, B, x, y, z, X, Y (free occurrences allowed).
/// With `with_defs`, leaves may apply the definitions of [`base_theory`].
pub fn arb_formula(depth: u32, with_defs: bool) -> impl Strategy<Value = Formula> {
    atom(with_defs).prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| iff(a, b)),
            (node_var(), inner.clone()).prop_map(|(v, f)| ex(&v, f)),
            (node_var(), inner.clone()).prop_map(|(v, f)| all(&v, f)),
            (node_var(), inner.clone()).prop_map(|(v, f)| ex_unique(&v, f)),
            (set_var(), inner.clone()).prop_map(|(v, f)| ex_set(&v, f)),
            (set_var(), inner).prop_map(|(v, f)| all_set(&v, f)),
        ]
    })
}

/// A tree plus a valuation of every generator variable.
pub fn arb_tree_valuation(max_nodes: usize) -> impl Strategy<Value = (LabeledTree, Valuation)> {
    arb_tree(max_nodes, 2, &["A", "B"]).prop_flat_map(|t| {
        let n = t.len();
        (Just(t), prop::collection::vec(0..n, 3), prop::collection::vec(0u64..(1 << n), 2)).prop_map(|(t, nodes, sets)| {
            let mut v = Valuation::new();
            for (name, &i) in NODE_VARS.iter().zip(&nodes) {
                v = v.with_node(name, t.address(i).clone());
            }
            for (name, &m) in SET_VARS.iter().zip(&sets) {
                let members: BTreeSet<_> = (0..t.len()).filter(|i| m >> i & 1 == 1).map(|i| t.address(i).clone()).collect();
                v = v.with_set(name, members);
            }
            (t, v)
        })
    })
}
