use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use dynline::arith::rational::rat;
use dynline::heights::render::{julia_render, RenderSpec};
use dynline::{
    bogomolov_scan, canonical_height, line_preperiodic, naive_limit_height, orbit_point,
    parse_line, parse_maps, parse_polynomial, symmetry_group, CycloNumber, Polynomial,
    SplitPolynomialMap,
};

fn heights(c: &mut Criterion) {
    let basilica = Polynomial::from_ints(&[-1, 0, 1]);
    let cubic = Polynomial::from_rationals(1, &[rat(0, 1), rat(-1, 2), rat(0, 1), rat(1, 1)]);
    let mut g = c.benchmark_group("heights");
    g.bench_function("canonical z^2-1 at 1/2", |b| {
        b.iter(|| canonical_height(black_box(&basilica), black_box(&rat(1, 2)), 1e-9))
    });
    g.bench_function("canonical z^3-z/2 at 7/3", |b| {
        b.iter(|| canonical_height(black_box(&cubic), black_box(&rat(7, 3)), 1e-9))
    });
    g.bench_function("naive z^2-1 at 2/3, n=10", |b| {
        b.iter(|| naive_limit_height(black_box(&basilica), black_box(&rat(2, 3)), 10))
    });
    g.finish();
}

fn decisions(c: &mut Criterion) {
    let mut g = c.benchmark_group("decision");
    let f = Polynomial::from_rationals(1, &[rat(-3, 4), rat(0, 1), rat(1, 1)]);
    g.bench_function("orbit z^2-3/4 at 3/2", |b| {
        b.iter(|| {
            orbit_point(
                black_box(&f),
                &CycloNumber::from_rational(1, rat(3, 2)),
                1000,
            )
        })
    });
    let phi = SplitPolynomialMap::new(parse_maps("z^3;z^3", 4).unwrap()).unwrap();
    let l = parse_line("(0,0)+t*(1,w)", Some(2), 4).unwrap();
    g.bench_function("line (z^3,z^3) over Q(i)", |b| {
        b.iter(|| line_preperiodic(black_box(&phi), black_box(&l), 1000))
    });
    let phi = SplitPolynomialMap::new(parse_maps("z^2;z^2+1", 1).unwrap()).unwrap();
    let diag = parse_line("(0,0)+t*(1,1)", Some(2), 1).unwrap();
    g.sample_size(10);
    g.bench_function("scan (z^2,z^2+1) to log 10", |b| {
        b.iter(|| bogomolov_scan(black_box(&phi), black_box(&diag), 10f64.ln(), 1e-9))
    });
    g.finish();
}

fn symmetry_and_render(c: &mut Criterion) {
    let mut g = c.benchmark_group("misc");
    let f = parse_polynomial("z^6 + w*z^3 - 2", 4).unwrap();
    g.bench_function("symmetry group", |b| {
        b.iter(|| symmetry_group(black_box(&f)))
    });
    let basilica = Polynomial::from_ints(&[-1, 0, 1]);
    let spec = RenderSpec::new((-2.0, 2.0, -2.0, 2.0), 128, 100, 2.0).unwrap();
    g.sample_size(10);
    g.bench_function("render basilica 128^2", |b| {
        b.iter(|| julia_render(black_box(&basilica), 1, &spec))
    });
    g.finish();
}

criterion_group!(benches, heights, decisions, symmetry_and_render);
criterion_main!(benches);
