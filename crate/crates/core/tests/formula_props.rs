mod common;

use proptest::prelude::*;
use treelogic::formula::*;
use treelogic::{eval, parse_formula, parse_theory, print_formula, satisfies, Formula, GornAddress, Quantifier, Theory};

use common::{arb_formula, arb_tree, arb_tree_valuation, base_theory};

const FREE: [&str; 5] = ["x", "y", "z", "X", "Y"];

/// Rewrites ∧, →, and every quantifier through its De Morgan / duality
/// counterpart.
fn dualize(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        And(a, b) => not(or(not(dualize(a)), not(dualize(b)))),
        Implies(a, b) => or(not(dualize(a)), dualize(b)),
        Or(a, b) => or(dualize(a), dualize(b)),
        Iff(a, b) => iff(dualize(a), dualize(b)),
        Not(a) => not(dualize(a)),
        Quant(q, v, body) => {
            let dual = match q {
                Quantifier::ExistsNode => Quantifier::ForallNode,
                Quantifier::ForallNode => Quantifier::ExistsNode,
                Quantifier::ExistsSet => Quantifier::ForallSet,
                Quantifier::ForallSet => Quantifier::ExistsSet,
                Quantifier::ExistsUniqueNode => return Quant(*q, v.clone(), Box::new(dualize(body))),
            };
            not(Quant(dual, v.clone(), Box::new(not(dualize(body)))))
        }
        other => other.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn print_then_parse_is_identity(f in arb_formula(5, true)) {
        let th = base_theory();
        let text = print_formula(&f);
        let back = parse_formula(&text, &th, &FREE).unwrap();
        prop_assert_eq!(&back, &f, "{}", text);
        prop_assert_eq!(print_formula(&back), text);
    }

    #[test]
    fn expand_is_idempotent(f in arb_formula(4, true)) {
        let th = base_theory();
        let once = th.expand(&f).unwrap();
        prop_assert_eq!(th.expand(&once).unwrap(), once);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rewrites_preserve_truth((t, v) in arb_tree_valuation(5), f in arb_formula(3, true)) {
        let th = base_theory();
        let truth = eval(&t, &th, &f, &v).unwrap();
        prop_assert_eq!(eval(&t, &th, &f.nnf(), &v).unwrap(), truth, "nnf");
        prop_assert_eq!(eval(&t, &th, &dualize(&f), &v).unwrap(), truth, "duality");
        prop_assert_eq!(eval(&t, &th, &th.expand(&f).unwrap(), &v).unwrap(), truth, "expansion");
    }

    #[test]
    fn unused_variables_do_not_matter((t, v) in arb_tree_valuation(5), f in arb_formula(3, true)) {
        let th = base_theory();
        let extended = v.clone().with_node("w", t.address(t.len() - 1).clone()).with_set("W", [GornAddress::root()]);
        prop_assert_eq!(eval(&t, &th, &f, &v).unwrap(), eval(&t, &th, &f, &extended).unwrap());
    }

    #[test]
    fn constant_elimination_preserves_models(t in arb_tree(5, 2, &["A", "B"]), f in arb_formula(3, false)) {
        // Make c the only free node name, and close off sets.
        let body = ex("x", ex("y", ex("z", all_set("X", ex_set("Y", f)))));
        let with_c = and(body, ex("q", and(eq("q", "c"), label("A", "q"))));
        let th: Theory = {
            let mut th = parse_theory("label A;\nlabel B;\nconst c;\n").unwrap();
            th.add_axiom(with_c);
            th
        };
        let eliminated = th.eliminate_constants();
        prop_assert!(eliminated.constants.is_empty());
        let some_binding = (0..t.len()).any(|i| {
            let bound = t.clone().with_constant("c", t.address(i)).unwrap();
            satisfies(&bound, &th).unwrap().holds()
        });
        prop_assert_eq!(satisfies(&t, &eliminated).unwrap().holds(), some_binding);
    }

    #[test]
    fn parse_errors_point_inside_the_input(
        pieces in prop::collection::vec(
            prop::sample::select(vec!["label", "A", ";", "def", "P", "(", "x", ")", ":=", "all", ".", "&", "->", "axiom", "X", ",", "idom", "?", "ex!", "@"]),
            0..20,
        )
    ) {
        let text = pieces.join(" ");
        if let Err(e) = parse_theory(&text) {
            prop_assert!(e.span.start <= e.span.end && e.span.end <= text.len(), "{:?} in {:?}", e.span, text);
        }
    }
}
