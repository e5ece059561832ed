//! Parallel versus single-threaded runs of the heavier kernels. Build with
//! `--no-default-features` to time the sequential fallback instead of the pool.

use criterion::{criterion_group, criterion_main, Criterion};
use tilesys::analysis::{enumerate_patches_direct, recognizability_radius};
use tilesys::systems::by_name;
use tilesys::tiling::supertile;

fn kernels(c: &mut Criterion) {
    let sys = by_name("pinwheel:1,2").unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut group = c.benchmark_group("pinwheel");
    group.sample_size(10);

    group.bench_function("supertile L4 / pool", |b| b.iter(|| supertile(&sys, 0, 4, usize::MAX).unwrap()));
    group.bench_function("supertile L4 / one thread", |b| {
        b.iter(|| single.install(|| supertile(&sys, 0, 4, usize::MAX).unwrap()))
    });
    group.bench_function("enumerate r=0.2 L3 / pool", |b| b.iter(|| enumerate_patches_direct(&sys, 0.2, 3, usize::MAX).unwrap()));
    group.bench_function("enumerate r=0.2 L3 / one thread", |b| {
        b.iter(|| single.install(|| enumerate_patches_direct(&sys, 0.2, 3, usize::MAX).unwrap()))
    });
    group.bench_function("recognize L3 / pool", |b| b.iter(|| recognizability_radius(&sys, 3, usize::MAX).unwrap()));
    group.bench_function("recognize L3 / one thread", |b| {
        b.iter(|| single.install(|| recognizability_radius(&sys, 3, usize::MAX).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
