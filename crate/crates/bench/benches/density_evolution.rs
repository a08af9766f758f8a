use criterion::{criterion_group, criterion_main, Criterion};
use eaed_core::de::{run_gldpc, sc_step, Recursion};
use eaed_core::{transition_probs, ChannelParams, ComponentCode, DeConfig, DeState, Decoder, TransitionTable, WeightTables};
use std::hint::black_box;

fn table(nu: u32, t: usize, decoder: Decoder) -> TransitionTable {
    let code = ComponentCode::bch(nu, t).unwrap();
    TransitionTable::build(&code, decoder, &WeightTables::for_code(&code)).unwrap()
}

fn density_evolution(c: &mut Criterion) {
    let long = table(9, 3, Decoder::Eaed);
    let rec = Recursion::new(&long, transition_probs(ChannelParams::from_db(4.4, 0.057)));
    let m = DeState::new(0.01, 0.002);
    c.bench_function("de step (511,484,3)", |b| b.iter(|| rec.step(black_box(m))));

    let short = table(6, 4, Decoder::Eaed);
    let rec = Recursion::new(&short, transition_probs(ChannelParams::from_db(-1.5, 0.2)));
    let groups: Vec<DeState> = (0..=32).map(|i| DeState::new(0.002 * i as f64, 0.01 * i as f64)).collect();
    c.bench_function("coupled step (63,39,4) 32 groups", |b| {
        b.iter(|| sc_step(&rec, black_box(&groups), true))
    });

    let rec = Recursion::new(&long, transition_probs(ChannelParams::from_db(4.6, 0.057)));
    c.bench_function("gldpc run to convergence (511,484,3)", |b| {
        b.iter(|| run_gldpc(&rec, &DeConfig::default()))
    });

    let code = ComponentCode::bch(6, 3).unwrap();
    let w = WeightTables::for_code(&code);
    let mut g = c.benchmark_group("table build");
    g.sample_size(10);
    g.bench_function("eaed (63,45,3)", |b| {
        b.iter(|| TransitionTable::build(&code, Decoder::Eaed, &w).unwrap())
    });
    g.bench_function("eaed+ (63,45,3)", |b| {
        b.iter(|| TransitionTable::build(&code, Decoder::EaedPlus, &w).unwrap())
    });
    g.finish();
}

criterion_group!(benches, density_evolution);
criterion_main!(benches);
