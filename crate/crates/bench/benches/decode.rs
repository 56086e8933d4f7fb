use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use unabbrev::decode::{beam_decode, viterbi_decode};
use unabbrev::pipeline::{ChannelKind, DecodeConfig, Expander};
use unabbrev_bench::{toy_pairs, trained};

fn decode(c: &mut Criterion) {
    let pairs = toy_pairs(1200, 7);
    let (train, test) = pairs.split_at(1000);
    let models = trained(train);

    let mut group = c.benchmark_group("decode");
    for channel in [ChannelKind::Pair, ChannelKind::Subsequence] {
        let expander = Expander::new(
            &models,
            DecodeConfig {
                channel,
                ..DecodeConfig::default()
            },
        );
        let nets: Vec<_> = test.iter().map(|p| expander.network(p.abbreviated())).collect();
        let name = format!("{channel:?}").to_lowercase();
        group.bench_function(BenchmarkId::new("viterbi", &name), |b| {
            b.iter(|| {
                for net in &nets {
                    black_box(viterbi_decode(net, &models.word_lm, 1.0));
                }
            })
        });
        for width in [1, 5, 20] {
            group.bench_function(BenchmarkId::new(format!("beam{width}"), &name), |b| {
                b.iter(|| {
                    for net in &nets {
                        black_box(beam_decode(net, &models.word_lm, width, 1.0));
                    }
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, decode);
criterion_main!(benches);
