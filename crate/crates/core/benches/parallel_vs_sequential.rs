use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mixed3::ambient::{make_pseudosphere, Level};
use mixed3::config::Config;
use mixed3::structures::check_axioms_with;
use mixed3::verifier;

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn axioms(c: &mut Criterion) {
    let s = make_pseudosphere(2, Level::Positive).unwrap();
    let mut g = c.benchmark_group("axioms_s11_1000pts");
    for (name, parallel) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| check_axioms_with(&s, 1000, 42, parallel).unwrap())
        });
    }
    g.finish();
}

fn suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_all");
    g.sample_size(10);
    for (name, parallel) in modes() {
        let cfg = Config { parallel, ..Config::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| verifier::run_all(&cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, axioms, suite);
criterion_main!(benches);
