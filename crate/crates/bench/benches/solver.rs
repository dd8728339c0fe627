use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use carasolve::grid_approx::ApproxRhs;
use carasolve::quadrature::{picard_map, QuadOptions};
use carasolve::{builtin_rhs, eval_fn, solve_maximal, CauchyProblem, GridFunction, Partition, SolveOptions};

fn picard(c: &mut Criterion) {
    let problem = CauchyProblem::builtin("floor", &[], 0.0, 1.5, 1.0).unwrap();
    let p = Partition::uniform(0.0, 1.5, 1024).unwrap();
    let z = GridFunction::from_fn(&p, |x| 1.0 + x);
    let opts = QuadOptions::default();
    c.bench_function("picard_map/floor/1024", |b| b.iter(|| picard_map(&problem, black_box(&z), &opts)));
}

fn maximal(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_maximal");
    g.sample_size(10);
    for (name, y0) in [("sqrt_plus", 0.0), ("linear", 1.0)] {
        let problem = CauchyProblem::builtin(name, &[], 0.0, 1.0, y0).unwrap();
        let p = Partition::uniform(0.0, 1.0, 256).unwrap();
        let opts = SolveOptions::default();
        g.bench_function(name, |b| b.iter(|| solve_maximal(&problem, &p, &opts).unwrap()));
    }
    g.finish();
}

fn approx(c: &mut Criterion) {
    let rhs = builtin_rhs("grande_sin", &[]).unwrap();
    let a = ApproxRhs::build(&rhs, 64, (-2.0, 2.0)).unwrap();
    c.bench_function("eval_fn/grande_sin/64", |b| {
        b.iter(|| eval_fn(&a, black_box(0.0), black_box(0.3)).unwrap())
    });
}

criterion_group!(benches, picard, maximal, approx);
criterion_main!(benches);
