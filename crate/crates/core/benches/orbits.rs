use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ftdesign::atlas::{affine_closure, sp4};
use ftdesign::autsearch::linear_blockset_stabilizer;
use ftdesign::design::{build_design, verify_2design, VerifyMode};
use ftdesign::linalg::canonical_subspace;
use ftdesign::par;
use ftdesign::suzuki::{family_block, SuzukiContext, SuzukiTuple};

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", false), ("sequential", true)]
}

fn bench(c: &mut Criterion) {
    let ctx = SuzukiContext::new(8).unwrap();
    let block = family_block(&ctx, &SuzukiTuple::new(1, 1, 1, 1)).unwrap();
    let sz_design = build_design(&block.points, &ctx.affine).unwrap();

    let e = sp4(3).unwrap();
    let g = affine_closure(&e.group).unwrap();
    let s = g.space.clone();
    let b = canonical_subspace(&s, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]], 1).unwrap();
    let ex0 = build_design(&b.points(&s), &g).unwrap();
    let ex0_blocks = ex0.through_zero_vec();

    let mut group = c.benchmark_group("orbits");
    group.sample_size(10);
    for (name, seq) in modes() {
        par::set_sequential(seq);
        group.bench_with_input(BenchmarkId::new("sz8-block-orbit", name), &(), |bch, _| {
            bch.iter(|| build_design(&block.points, &ctx.affine).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sz8-slice-lambda", name), &(), |bch, _| {
            bch.iter(|| verify_2design(&sz_design, VerifyMode::Slice, None).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sp4-3-bruteforce-lambda", name), &(), |bch, _| {
            bch.iter(|| verify_2design(&ex0, VerifyMode::Bruteforce, None).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sp4-3-autsearch", name), &(), |bch, _| {
            bch.iter(|| linear_blockset_stabilizer(&s, &ex0_blocks, None).unwrap())
        });
    }
    par::set_sequential(false);
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
