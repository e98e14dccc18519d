use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use plsynth_core::symbolic::{Bdd, NodeStore, TRUE};

/// The n-queens constraint over an n*n board, a classic diagram stress test.
fn queens(n: u32) -> (NodeStore, Bdd) {
    let mut s = NodeStore::new(n * n);
    let at = |r: u32, c: u32| r * n + c;
    let mut f = TRUE;
    for r in 0..n {
        let cells: Vec<Bdd> = (0..n).map(|c| s.ithvar(at(r, c))).collect();
        let row = s.or_all(cells);
        f = s.and(f, row);
    }
    for r in 0..n {
        for c in 0..n {
            let q = s.ithvar(at(r, c));
            for r2 in 0..n {
                for c2 in 0..n {
                    if (r2, c2) == (r, c) {
                        continue;
                    }
                    let attacks = r2 == r || c2 == c || r2.abs_diff(r) == c2.abs_diff(c);
                    if attacks {
                        let other = s.nithvar(at(r2, c2));
                        let clause = s.imp(q, other);
                        f = s.and(f, clause);
                    }
                }
            }
        }
    }
    (s, f)
}

fn bdd(c: &mut Criterion) {
    let mut g = c.benchmark_group("bdd");
    g.sample_size(10);
    for n in [5u32, 6, 7] {
        g.bench_with_input(BenchmarkId::new("queens", n), &n, |b, &n| {
            b.iter(|| {
                let (s, f) = queens(n);
                let vars: Vec<u32> = (0..n * n).collect();
                s.sat_count(f, &vars)
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bdd);
criterion_main!(benches);
