use carasolve::grid_approx::{decompose_sets, ApproxRhs, Cell};
use carasolve::{builtin_rhs, convergence_probe, eval_fn, GridFunction, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Probe windows away from heights where pointwise convergence needs n far
/// beyond 512: the oscillation of sin(pi/y) near 0 and the infinite slope of
/// sqrt at 0.
fn probe_windows(name: &str) -> Vec<(f64, f64)> {
    match name {
        "grande_sin" => vec![(-2.0, 0.0), (1.0, 2.0)],
        "sqrt_plus" => vec![(-2.0, 0.0), (0.25, 3.0)],
        _ => vec![(-2.0, 2.0)],
    }
}

#[test]
fn converges_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for name in carasolve::BUILTIN_NAMES {
        let f = builtin_rhs(name, &[]).unwrap();
        if !f.props().y_usc {
            continue;
        }
        let windows = probe_windows(name);
        let points: Vec<(f64, f64)> = (0..100)
            .map(|_| {
                let (lo, hi) = windows[rng.gen_range(0..windows.len())];
                (0.0, rng.gen_range(lo..=hi))
            })
            .collect();
        let rows = convergence_probe(&f, &points, &[512, 1024, 4096], (-2.0, 3.0)).unwrap();
        let worst = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
        assert!(worst <= 0.01, "{name}: worst deviation {worst}");
    }
}

#[test]
fn breakpoints_are_exact_and_intervals_constant() {
    for name in carasolve::BUILTIN_NAMES {
        let f = builtin_rhs(name, &[]).unwrap();
        let ap = ApproxRhs::build(&f, 16, (-1.0, 2.0)).unwrap();
        let bp = ap.grid().breakpoints().to_vec();
        for (k, &a) in bp.iter().enumerate() {
            assert_eq!(eval_fn(&ap, 0.0, a).unwrap().to_bits(), f.eval(0.0, a).to_bits());
            assert_eq!(ap.grid().locate(a).unwrap(), Cell::Breakpoint(k));
        }
        for k in (0..bp.len() - 1).step_by(7) {
            let (l, r) = (bp[k], bp[k + 1]);
            let vals: Vec<u64> = [0.1, 0.37, 0.5, 0.93]
                .iter()
                .map(|t| eval_fn(&ap, 0.0, l + t * (r - l)).unwrap().to_bits())
                .collect();
            assert!(vals.windows(2).all(|w| w[0] == w[1]), "{name} interval {k}");
        }
    }
}

#[test]
fn upper_approximation_dominates_on_intervals() {
    // f_n on an interval is the capped sup, so it sits above f wherever f <= n
    let f = builtin_rhs("grande_sign", &[]).unwrap();
    let ap = ApproxRhs::build(&f, 8, (-1.0, 1.0)).unwrap();
    for i in 0..200 {
        let y = -1.0 + 2.0 * (i as f64 + 0.5) / 200.0;
        assert!(eval_fn(&ap, 0.0, y).unwrap() >= f.eval(0.0, y));
    }
}

#[test]
fn identity_path_decomposition() {
    let f = builtin_rhs("floor", &[]).unwrap();
    let ap = ApproxRhs::build(&f, 2, (-1.0, 2.0)).unwrap();
    let p = Partition::uniform(0.0, 1.0, 4).unwrap();
    let g = GridFunction::from_fn(&p, |x| x);
    let samples = [0.125, 0.25, 0.375, 0.5, 0.625, 0.75];
    let d = decompose_sets(&ap, &g, &samples).unwrap();
    let on_bp: usize = d.on_breakpoints.values().map(Vec::len).sum();
    let in_iv: usize = d.in_intervals.values().map(Vec::len).sum();
    assert_eq!(on_bp + in_iv, samples.len());
    for s in &d.samples {
        let is_bp = ap.grid().breakpoints().contains(&s.y);
        assert_eq!(is_bp, matches!(s.cell, Cell::Breakpoint(_)));
    }
}
