use carasolve::scenarios::{band_levels, demo_sign, demo_sin, nonzero_components, SignDemo, SinDemo};
use carasolve::subsolution::{fatou_check, FatouOptions};
use carasolve::{builtin_rhs, euler, CauchyProblem, GridFunction, Partition};

#[test]
fn sign_demo_matches_hand_values() {
    let r = demo_sign(&SignDemo::default()).unwrap();
    assert!(r.all_checks_pass(), "{:#?}", r.checks);
    assert!((r.residual("limit").unwrap() - 1.0).abs() <= 1e-6);
    for h in ["1e-1", "1e-2", "1e-3", "1e-4"] {
        assert!(r.residual(&format!("euler_h={h}")).unwrap() >= 0.49);
    }
    assert!(r.euler_limit_deviation <= 1e-4 + 1e-15);
}

#[test]
fn euler_chatters_bit_exactly() {
    let pb = CauchyProblem::builtin("grande_sign", &[], 0.0, 1.0, 0.0).unwrap();
    for h in [1e-1, 1e-2, 1e-3, 1e-4] {
        let e = euler(&pb, h).unwrap();
        for (i, v) in e.values().iter().enumerate().skip(1) {
            let expect = if i % 2 == 1 { h } else { 0.0 };
            assert_eq!(v.to_bits(), expect.to_bits(), "h {h} node {i}");
        }
    }
}

#[test]
fn chattering_zero_set_has_one_component_per_excursion() {
    let pb = CauchyProblem::builtin("grande_sign", &[], 0.0, 1.0, 0.0).unwrap();
    let e = euler(&pb, 0.1).unwrap();
    let c = nonzero_components(&e);
    assert_eq!(c.len(), 5);
    assert!(c.iter().all(|s| s.sign == 1));
    assert!((c[0].start - 0.0).abs() < 1e-15 && (c[0].end - 0.2).abs() < 1e-12);
}

#[test]
fn sin_demo_first_band() {
    let r = demo_sin(&SinDemo::default()).unwrap();
    assert!(r.all_checks_pass(), "{:#?}", r.checks);
    let ev = r.band_events.iter().find(|e| e.n0 == 1).expect("ramp crosses the first band");
    assert!((ev.y_a - 0.5).abs() <= 1e-6 && (ev.y_b - 1.0).abs() <= 1e-6);
    assert!(ev.integral <= 1e-6);
    assert!(ev.defect >= 0.5 - 1e-4);
    // every rising candidate was caught in some band
    assert_eq!(r.band_events.len(), r.residual_by_candidate.len() - 1);
}

#[test]
fn band_sine_is_negative() {
    for n0 in 1..=50u64 {
        let (lo, hi) = band_levels(n0);
        for t in [0.1, 0.5, 0.9] {
            let y = lo + t * (hi - lo);
            assert!((std::f64::consts::PI / y).sin() < 0.0);
        }
    }
}

#[test]
fn fatou_fixtures() {
    let p = Partition::uniform(0.0, 1.0, 64).unwrap();
    let opts = FatouOptions::default();

    // y_n = 1/n > 0 gives f = -1 along the sequence, but f = 1 at the limit 0
    let sign = builtin_rhs("grande_sign", &[]).unwrap();
    let seq: Vec<GridFunction> = (1000..1010).map(|n| GridFunction::constant(&p, 1.0 / n as f64)).collect();
    let r = fatou_check(&sign, &seq, &GridFunction::constant(&p, 0.0), &opts).unwrap();
    assert!((r.margin - 2.0).abs() <= 1e-3);

    // continuous right-hand sides: the margin closes up to the last deviation
    for name in ["linear", "sqrt_plus", "floor"] {
        let f = builtin_rhs(name, &[]).unwrap();
        let lim = GridFunction::from_fn(&p, |x| 1.0 + x);
        let seq: Vec<GridFunction> = (1..=30)
            .map(|n| lim.map(|_, v| v - 1.0 / (1u64 << n) as f64))
            .collect();
        let r = fatou_check(&f, &seq, &lim, &opts).unwrap();
        assert!(r.margin >= -1e-6, "{name}: {}", r.margin);
    }

    // usc is what makes it work: sequences approaching from above a jump of floor
    let floor = builtin_rhs("floor", &[]).unwrap();
    let lim = GridFunction::constant(&p, 1.0);
    let seq: Vec<GridFunction> = (1..=30).map(|n| GridFunction::constant(&p, 1.0 + 0.5f64.powi(n))).collect();
    assert!(fatou_check(&floor, &seq, &lim, &opts).unwrap().margin >= -1e-6);
}
