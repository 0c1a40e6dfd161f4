//! Parallel vs sequential timings of the data-parallel paths.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fusionkit::checks::{run_suite, CheckOptions, Suite};
use fusionkit::fusion::{build_fusion, Kind};
use fusionkit::graphs::graph_by_name;
use fusionkit::modact::annular;
use fusionkit::par;
use fusionkit::tables::{build_table, TableId};

fn modes(c: &mut Criterion, name: &str, mut f: impl FnMut()) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    for (label, sequential) in [("parallel", false), ("sequential", true)] {
        par::set_sequential(sequential);
        group.bench_function(BenchmarkId::from_parameter(label), |b| b.iter(&mut f));
    }
    par::set_sequential(false);
    group.finish();
}

fn bench(c: &mut Criterion) {
    let sl3 = build_fusion(Kind::Sl3, 10).unwrap();
    modes(c, "ring_axioms sl3 k=10", || sl3.ring_axioms().unwrap());

    let e21 = graph_by_name(Kind::Sl3, "E_21").unwrap();
    let sys21 = build_fusion(Kind::Sl3, 21).unwrap();
    let fam = annular(&sys21, &e21).unwrap();
    modes(c, "module_property E_21", || fam.module_property(&sys21).unwrap());

    let opts = CheckOptions { kind: Some(Kind::Sl2), ..Default::default() };
    modes(c, "check rigidity sl2", || {
        run_suite(Suite::Rigidity, &opts);
    });
    modes(c, "check splitting sl2", || {
        run_suite(Suite::Splitting, &opts);
    });
    modes(c, "table4", || {
        build_table(TableId::T4, None).unwrap();
    });
}

criterion_group!(benches, bench);
criterion_main!(benches);
