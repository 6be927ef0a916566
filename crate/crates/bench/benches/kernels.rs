//! Hot-path benchmarks: the psi kernel, code construction, generator
//! derivation, encoding, and a full decode of one noisy frame.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use aidsim_core::channel::{awgn, bpsk_modulate, ebno_to_sigma, llr_init, stream_rng};
use aidsim_core::decoder::{decode, psi, DecodeConfig};
use aidsim_core::gf2::{derive_generator, gallager_regular, TannerGraph};
use aidsim_core::montecarlo::CodeContext;

fn bench_psi(c: &mut Criterion) {
    let xs: Vec<f64> = (0..256).map(|i| 1e-6 * 1.07f64.powi(i)).collect();
    c.bench_function("psi kernel, 256 magnitudes", |b| {
        b.iter(|| xs.iter().map(|&x| psi(black_box(x))).sum::<f64>())
    });
}

fn bench_construction(c: &mut Criterion) {
    c.bench_function("gallager construction n=1024 (3,6)", |b| {
        b.iter(|| gallager_regular(black_box(1024), 3, 6, 7).unwrap())
    });
}

fn bench_generator(c: &mut Criterion) {
    let h = gallager_regular(1024, 3, 6, 7).unwrap();
    c.bench_function("generator derivation n=1024", |b| {
        b.iter(|| derive_generator(black_box(&h)).unwrap())
    });
}

fn bench_encode(c: &mut Criterion) {
    let code = CodeContext::new(gallager_regular(1024, 3, 6, 7).unwrap()).unwrap();
    let mut rng = stream_rng(11, 0);
    let msg: Vec<u8> = (0..code.k())
        .map(|_| u8::from(rand::Rng::random::<bool>(&mut rng)))
        .collect();
    c.bench_function("encode one frame n=1024", |b| {
        b.iter(|| code.generator().encode(black_box(&msg)).unwrap())
    });
}

fn bench_decode(c: &mut Criterion) {
    let h = gallager_regular(1024, 3, 6, 7).unwrap();
    let graph = TannerGraph::new(&h);
    let code = CodeContext::new(h.clone()).unwrap();
    let cfg = DecodeConfig::default();
    let sigma = ebno_to_sigma(2.0, code.actual_rate(), 1.0).unwrap();
    let mut rng = stream_rng(12, 0);
    let msg: Vec<u8> = (0..code.k())
        .map(|_| u8::from(rand::Rng::random::<bool>(&mut rng)))
        .collect();
    let cw = code.generator().encode(&msg).unwrap();
    let symbols = bpsk_modulate(cw.bits()).unwrap();
    let received = awgn(&symbols, sigma, &mut rng).unwrap();
    let llr = llr_init(&received, sigma).unwrap();
    c.bench_function("decode one noisy frame n=1024 at 2 dB", |b| {
        b.iter(|| decode(&graph, black_box(&llr), &cfg).unwrap())
    });
}

criterion_group!(
    benches,
    bench_psi,
    bench_construction,
    bench_generator,
    bench_encode,
    bench_decode
);
criterion_main!(benches);
