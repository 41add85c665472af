use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cflab_bench::{rcf_window, schedule_23};
use cflab_core::cf::rcf_convergents;
use cflab_core::dimension::{bcf_family, dim_bounds, letter_system};
use cflab_core::insertion::{build_stream, verify_good, SeedSource};
use cflab_core::numeric::{floor_exp, ln_enclosure, parse_rational};

fn convergent_tables(c: &mut Criterion) {
    let stream = rcf_window(500);
    c.bench_function("rcf_convergents_500", |b| {
        b.iter(|| rcf_convergents(black_box(&stream), 500).unwrap())
    });
}

fn certified_exponentials(c: &mut Criterion) {
    let lambda = parse_rational("1/10").unwrap();
    c.bench_function("floor_exp_19_2", |b| {
        b.iter(|| floor_exp(black_box(&lambda), 192).unwrap())
    });
    let big = parse_rational("982451653/1000000007").unwrap();
    c.bench_function("ln_enclosure_64", |b| {
        b.iter(|| ln_enclosure(black_box(&big), 64))
    });
}

fn dimension_bracketing(c: &mut Criterion) {
    let sys = letter_system(&bcf_family([3, 4]).unwrap()).unwrap();
    let tol = parse_rational("1/1000").unwrap();
    c.bench_function("dim_bounds_34_depth4", |b| {
        b.iter(|| dim_bounds(black_box(&sys), 4, &tol).unwrap())
    });
}

fn construction(c: &mut Criterion) {
    let schedule = schedule_23();
    let source = SeedSource::Periodic(vec![0, 1]);
    c.bench_function("build_stream_100k", |b| {
        b.iter(|| build_stream(black_box(&schedule), &source, 100_000).unwrap())
    });
    let constructed = build_stream(&schedule, &source, 100_000).unwrap();
    c.bench_function("verify_good_100k", |b| {
        b.iter(|| verify_good(black_box(&constructed), 8).unwrap())
    });
}

criterion_group!(
    benches,
    convergent_tables,
    certified_exponentials,
    dimension_bracketing,
    construction
);
criterion_main!(benches);
