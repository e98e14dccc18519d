use criterion::{criterion_group, criterion_main, Criterion};
use plsynth_bench::{load, BCS_STATIC, COFFEE};
use plsynth_core::synthesis::{synthesize, Engine, SynthesisOptions};

fn options(engine: Engine) -> SynthesisOptions {
    SynthesisOptions {
        engine,
        ..Default::default()
    }
}

fn synthesis(c: &mut Criterion) {
    let coffee = load(COFFEE);
    let bcs = load(BCS_STATIC);
    let mut g = c.benchmark_group("synthesis");
    g.sample_size(10);
    g.bench_function("coffee/symbolic", |b| b.iter(|| synthesize(&coffee, &options(Engine::Symbolic)).unwrap().report));
    g.bench_function("coffee/explicit", |b| b.iter(|| synthesize(&coffee, &options(Engine::Explicit)).unwrap().report));
    g.bench_function("bcs-static/symbolic", |b| b.iter(|| synthesize(&bcs, &options(Engine::Symbolic)).unwrap().report));
    g.bench_function("coffee/supervisor", |b| {
        b.iter(|| synthesize(&coffee, &options(Engine::Symbolic)).unwrap().supervisor())
    });
    g.finish();
}

criterion_group!(benches, synthesis);
criterion_main!(benches);
