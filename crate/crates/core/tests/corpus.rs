//! Shipped corpus: theories must match the emitters byte for byte, every
//! file must survive parse/print, and the golden trees must behave as named.
//!
//! `TREELOGIC_BLESS=1 cargo test --test corpus` rewrites the theory files.

use std::path::PathBuf;

use treelogic::gb::{self, chain_report, GbConfig, GbError, LinkType};
use treelogic::gpsg;
use treelogic::{parse_theory, parse_tree, print_theory, print_tree, satisfies, LabeledTree, Theory};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(corpus(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn tree(name: &str) -> LabeledTree {
    parse_tree(&read(name)).unwrap()
}

fn emitted() -> Vec<(&'static str, Theory)> {
    vec![
        ("gpsg_core.thy", gpsg::core_theory()),
        ("gpsg_fsd_example.thy", gpsg::fsd_example().to_theory().unwrap()),
        ("gb_core.thy", gb::emit_gb_core(&GbConfig::default()).unwrap()),
        ("gb_english_fragment.thy", gb::gb_theory(&GbConfig::default()).unwrap()),
    ]
}

#[test]
fn theories_match_emitters() {
    let bless = std::env::var_os("TREELOGIC_BLESS").is_some();
    for (name, th) in emitted() {
        let text = print_theory(&th);
        if bless {
            std::fs::write(corpus(name), &text).unwrap();
        }
        assert_eq!(read(name), text, "{name} differs from the emitter");
        assert_eq!(parse_theory(&text).unwrap(), th, "{name}");
    }
}

#[test]
fn every_file_round_trips() {
    let bless = std::env::var_os("TREELOGIC_BLESS").is_some();
    for entry in std::fs::read_dir(corpus("")).unwrap() {
        let path = entry.unwrap().path();
        let mut text = std::fs::read_to_string(&path).unwrap();
        if bless && path.extension().is_some_and(|e| e == "tree") {
            text = print_tree(&parse_tree(&text).unwrap()) + "\n";
            std::fs::write(&path, &text).unwrap();
        }
        match path.extension().and_then(|e| e.to_str()) {
            Some("tree") => assert_eq!(print_tree(&parse_tree(&text).unwrap()), text.trim_end(), "{path:?}"),
            Some("thy") => assert_eq!(print_theory(&parse_theory(&text).unwrap()), text, "{path:?}"),
            _ => {}
        }
    }
}

fn failed_axiom(th: &Theory, t: &LabeledTree) -> Option<String> {
    satisfies(t, th).unwrap().failed_axiom().map(treelogic::print_formula)
}

#[test]
fn fsd_golden_trees() {
    let th = parse_theory(&read("gpsg_fsd_example.thy")).unwrap();
    for name in ["gpsg_id5.tree", "gpsg_inv_chain.tree", "gpsg_passive.tree"] {
        assert_eq!(failed_axiom(&th, &tree(name)), None, "{name}");
    }
    let inv = "all x. !Privileged_notINV(x) -> !INV(x)";
    let pas = "all x. BAR0(x) & !Privileged_notPAS(x) -> !PAS(x)";
    for (name, axiom) in [
        ("gpsg_inv_chain_broken.tree", inv),
        ("gpsg_id5_inv.tree", inv),
        ("gpsg_bar0_pas.tree", pas),
    ] {
        assert_eq!(failed_axiom(&th, &tree(name)).as_deref(), Some(axiom), "{name}");
    }
}

#[test]
fn gb_golden_trees() {
    let cfg = GbConfig::default();
    let th = parse_theory(&read("gb_english_fragment.thy")).unwrap();
    for name in ["gb_wh.tree", "gb_overlap.tree", "gb_no_movement.tree"] {
        assert_eq!(failed_axiom(&th, &tree(name)), None, "{name}");
    }
    assert!(failed_axiom(&th, &tree("gb_wh_barrier.tree")).is_some());
    assert!(failed_axiom(&th, &tree("gb_multi_trace.tree")).is_some());

    let wh = chain_report(&tree("gb_wh.tree"), &cfg).unwrap();
    assert_eq!(wh.max_overlap, 1);
    let moved: Vec<_> = wh.chains.iter().filter(|c| !c.is_trivial()).collect();
    assert_eq!(moved.len(), 1);
    assert_eq!(moved[0].members.len(), 2);
    assert_eq!(moved[0].link_type, Some(LinkType::ABarNonRef));

    let flat = chain_report(&tree("gb_no_movement.tree"), &cfg).unwrap();
    assert!(flat.chains.iter().all(|c| c.is_trivial() && c.link_type.is_none()));
    assert_eq!(flat.max_overlap, 1);

    let overlap = chain_report(&tree("gb_overlap.tree"), &cfg).unwrap();
    assert_eq!(overlap.max_overlap, 2);
    assert_eq!(overlap.chains.iter().filter(|c| c.link_type == Some(LinkType::X0)).count(), 2);

    match chain_report(&tree("gb_multi_trace.tree"), &cfg) {
        Err(GbError::PartitionViolation { node, count: 0 }) => assert_eq!(node.to_string(), "0"),
        other => panic!("expected a partition violation, got {other:?}"),
    }
}
