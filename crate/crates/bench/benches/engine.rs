//! Criterion benchmarks for the hot paths: rewriting to normal form,
//! minor expansion, identity verification and the exchange pipeline.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};

use qmx_core::minors::{det_q, LabelSet};
use qmx_core::ncpoly::{Generator, NCPoly, Word};
use qmx_core::transforms::{exchange_trace, laplace_identity, ExchangeSpec, LaplaceForm};
use qmx_core::{is_identity, parse_expr};

fn random_words(count: usize, len: usize, labels: u32) -> Vec<Word> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xbe7c);
    (0..count)
        .map(|_| {
            Word::new(
                (0..len)
                    .map(|_| Generator::new(rng.gen_range(1..=labels), rng.gen_range(1..=labels)))
                    .collect(),
            )
        })
        .collect()
}

fn bench_normal_form(c: &mut Criterion) {
    let words = random_words(64, 8, 4);
    c.bench_function("normal_form/random-words-len8", |b| {
        b.iter_batched(
            || words.clone(),
            |words| {
                for w in words {
                    std::hint::black_box(NCPoly::from_word(w).normal_form());
                }
            },
            BatchSize::SmallInput,
        )
    });

    // fully descending staircase, the worst case for branching corrections
    let staircase = Word::new(
        (1..=4u32)
            .rev()
            .flat_map(|r| (1..=4u32).rev().map(move |c| Generator::new(r, c)))
            .take(8)
            .collect(),
    );
    c.bench_function("normal_form/staircase-len8", |b| {
        b.iter(|| std::hint::black_box(NCPoly::from_word(staircase.clone()).normal_form()))
    });
}

fn bench_minors(c: &mut Criterion) {
    c.bench_function("det_q/n3", |b| b.iter(|| std::hint::black_box(det_q(3))));
    c.bench_function("det_q/n4", |b| b.iter(|| std::hint::black_box(det_q(4))));
}

fn bench_laplace(c: &mut Criterion) {
    let k = LabelSet::new(vec![1, 2]).unwrap();
    let l = LabelSet::new(vec![1, 3]).unwrap();
    c.bench_function("laplace/n3-generate-and-verify", |b| {
        b.iter(|| {
            let f = laplace_identity(3, &k, &l, LaplaceForm::RowFirst).unwrap();
            std::hint::black_box(is_identity(&f))
        })
    });
}

fn bench_exchange(c: &mut Criterion) {
    let seed = parse_expr("D[1;2]@1 D[1,2,3;1,2,3] - D[1,2,3;1,2,3] D[1;2]@1").unwrap();
    let spec = ExchangeSpec::new(1, 2, 1).unwrap();
    c.bench_function("exchange/trace-det3-seed", |b| {
        b.iter(|| std::hint::black_box(exchange_trace(&seed, &spec).unwrap()))
    });
}

criterion_group!(benches, bench_normal_form, bench_minors, bench_laplace, bench_exchange);
criterion_main!(benches);
