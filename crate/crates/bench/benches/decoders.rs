use criterion::{criterion_group, criterion_main, Criterion};
use eaed_bench::noisy_zero_word;
use eaed_core::{eaed_decode, eaed_plus_decode, ComponentCode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn decoders(c: &mut Criterion) {
    let code = ComponentCode::bch(9, 3).unwrap();
    let errors = noisy_zero_word(&code, &[3, 100, 411], &[]);
    c.bench_function("bdd (511,484,3) 3 errors", |b| {
        b.iter(|| code.bdd_decode(black_box(&errors)).unwrap())
    });

    let mixed = noisy_zero_word(&code, &[17, 250], &[5]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    c.bench_function("eaed (511,484,3) 2 errors 1 erasure", |b| {
        b.iter(|| eaed_decode(&code, black_box(&mixed), &mut rng))
    });
    c.bench_function("eaed+ (511,484,3) 2 errors 1 erasure", |b| {
        b.iter(|| eaed_plus_decode(&code, black_box(&mixed)))
    });

    let short = ComponentCode::bch(6, 3).unwrap();
    let w = noisy_zero_word(&short, &[2], &[10, 20, 30]);
    c.bench_function("eaed (63,45,3) 1 error 3 erasures", |b| {
        b.iter(|| eaed_decode(&short, black_box(&w), &mut rng))
    });
}

criterion_group!(benches, decoders);
criterion_main!(benches);
