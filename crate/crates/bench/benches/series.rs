use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use vertexid_core::exactseries::{euler_product, EulerFactor};
use vertexid_core::graphcalc::{evaluate, Graph};
use vertexid_core::identities::{default_window, verify, IdentityParams};
use vertexid_core::symfunc::{skew_schur, Specialization};
use vertexid_core::vertex::vertex;
use vertexid_core::{Monomial, ParamPoly, Partition, TruncationSpec, Window};

fn series(c: &mut Criterion) {
    let qs = Arc::new(TruncationSpec::q_only(Window::new(0, 120)));
    c.bench_function("partition generating function to q^60", |b| {
        b.iter(|| euler_product((1..=60).map(|k| EulerFactor::minus(Monomial::q(k), ParamPoly::from_int(-1))), black_box(&qs)))
    });
    let s = Arc::new(TruncationSpec::new(Window::new(0, 16), vec![Window::upto(4)]).unwrap());
    let x = euler_product((1..=8).map(|k| EulerFactor::plus(Monomial::new(2 * k, &[1]), ParamPoly::from_int(k as i64))), &s).unwrap();
    c.bench_function("inverse in (u, z)", |b| b.iter(|| black_box(&x).inverse()));
}

fn schur(c: &mut Criterion) {
    let s = Arc::new(TruncationSpec::q_only(Window::new(-24, 24)));
    let lam: Partition = "3,2,1".parse().unwrap();
    let nu: Partition = "2,1".parse().unwrap();
    c.bench_function("skew Schur (3,2,1)/(1) shifted", |b| {
        b.iter(|| skew_schur(black_box(&lam), &"1".parse().unwrap(), &Specialization::shifted(&nu), &s))
    });
    let mu: Partition = "2".parse().unwrap();
    c.bench_function("vertex C_{(2,1),(2),(2,1)}", |b| b.iter(|| vertex(black_box(&nu), &mu, &nu, &s)));
}

fn identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    for (name, z, u) in [("no-classic", 6, 0), ("cauchy-dual", 4, 16), ("four-loop", 3, 12)] {
        let spec = default_window(name, z, u).unwrap();
        g.bench_function(name, |b| b.iter(|| verify(name, black_box(&spec), &IdentityParams::default())));
    }
    g.finish();
    let spec = Arc::new(TruncationSpec::new(Window::new(-12, 12), vec![Window::upto(3); 2]).unwrap());
    let two = Graph::builtin("two-loop").unwrap();
    c.bench_function("two-loop graph", |b| b.iter(|| evaluate(black_box(&two), &spec)));
}

criterion_group!(benches, series, schur, identities);
criterion_main!(benches);
