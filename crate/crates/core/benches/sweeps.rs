use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use treelogic::automata::{cfg_to_theory, Grammar};
use treelogic::eval::{CheckerConfig, CompiledTheory};
use treelogic::gb::{chain_report, GbConfig};
use treelogic::par::{map_with, Exec};
use treelogic::{enumerate_trees, parse_tree, LabeledTree};

fn model_sweep(c: &mut Criterion) {
    let g = Grammar::parse("S -> A S | S A | A").unwrap();
    let th = cfg_to_theory(&g, 2).unwrap();
    let compiled = CompiledTheory::new(&th, CheckerConfig::default()).unwrap();
    let trees: Vec<LabeledTree> = enumerate_trees(5, 2, &th.labels).collect();
    let mut group = c.benchmark_group("model_sweep");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Auto] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &trees, |b, trees| {
            b.iter(|| map_with(exec, trees, |t| compiled.satisfies(t).unwrap()).into_iter().filter(|&ok| ok).count())
        });
    }
    group.finish();
}

fn chain_reports(c: &mut Criterion) {
    let t = parse_tree("({} ({ABAR,SPEC,TGT,WH}) ({} ({}) ({} ({APOS}) ({} ({}) ({ABAR,BASE,WH})))))").unwrap();
    let batch = vec![t; 32];
    let cfg = GbConfig::default();
    let mut group = c.benchmark_group("chain_reports");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Auto] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &batch, |b, batch| {
            b.iter(|| map_with(exec, batch, |t| chain_report(t, &cfg).unwrap().chains.len()))
        });
    }
    group.finish();
}

criterion_group!(benches, model_sweep, chain_reports);
criterion_main!(benches);
