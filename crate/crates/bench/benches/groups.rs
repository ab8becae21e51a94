use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use std::sync::Arc;
use unibranch_core::branching::{canonical_decomposition, Setting};
use unibranch_core::group::{enumerate_k, DEFAULT_BUDGET};
use unibranch_core::liealg::{hensel_lift, random_admissible};
use unibranch_core::{ConjClasses, Level, RingCtx};

fn enumeration(c: &mut Criterion) {
    let ctx = RingCtx::new(3, 2, 2).unwrap();
    c.bench_function("enumerate K/K_2, p=3", |b| {
        b.iter(|| enumerate_k(black_box(&ctx), DEFAULT_BUDGET).unwrap())
    });
    let level = Level::enumerate(&ctx, DEFAULT_BUDGET).unwrap();
    c.bench_function("classes of K/K_2, p=3", |b| {
        b.iter(|| ConjClasses::compute(black_box(level.full())))
    });
}

fn branching(c: &mut Criterion) {
    let ctx = RingCtx::new(3, 2, 2).unwrap();
    let setting = Setting::new(Arc::new(Level::enumerate(&ctx, DEFAULT_BUDGET).unwrap())).unwrap();
    let chars: Vec<_> = setting.torus().characters().collect();
    c.bench_function("all 72 certificates at N=2, p=3", |b| {
        b.iter(|| {
            for chi in &chars {
                black_box(canonical_decomposition(&setting, chi).unwrap());
            }
        })
    });
}

fn lifting(c: &mut Criterion) {
    let ctx = RingCtx::new(3, 2, 4).unwrap();
    let mu = ctx.base(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let inputs: Vec<_> = (0..64).map(|_| random_admissible(&ctx, mu, 1, &mut rng)).collect();
    c.bench_function("hensel lift x64 at N=4", |b| {
        b.iter(|| {
            for k in &inputs {
                black_box(hensel_lift(&ctx, k, mu, 1).unwrap());
            }
        })
    });
}

criterion_group!(benches, enumeration, branching, lifting);
criterion_main!(benches);
