use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use unabbrev::channel::pair::pair_candidates;
use unabbrev::channel::subseq::generate_candidates;
use unabbrev::{SubseqConfig, Token};
use unabbrev_bench::{toy_pairs, trained};

fn channel(c: &mut Criterion) {
    let pairs = toy_pairs(1000, 3);
    let models = trained(&pairs);
    let queries: Vec<Token> = pairs
        .iter()
        .flat_map(|p| p.abbreviated().iter().cloned())
        .take(500)
        .collect();

    let mut group = c.benchmark_group("channel");
    group.bench_function("supersequences", |b| {
        b.iter(|| {
            for q in &queries {
                black_box(models.lexicon.supersequence_ids(q));
            }
        })
    });
    group.bench_function("subsequence_candidates", |b| {
        let cfg = SubseqConfig::default();
        b.iter(|| {
            for q in &queries {
                black_box(generate_candidates(&cfg, &models.insertion, &models.lexicon, &models.memory, q));
            }
        })
    });
    group.bench_function("pair_candidates", |b| {
        b.iter(|| {
            for q in queries.iter().take(100) {
                black_box(pair_candidates(&models.pair, &models.lexicon, q, Some(8)));
            }
        })
    });
    group.finish();
}

criterion_group!(benches, channel);
criterion_main!(benches);
