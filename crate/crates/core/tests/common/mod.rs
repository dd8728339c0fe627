#![allow(dead_code)]

use carasolve::{GridFunction, Partition};
use rand::Rng;

/// `y' = floor(y)` from `y0 >= 1`, integrated level by level: on `[k, k+1)` the
/// slope is `k`, so the time to climb a level is `(k + 1 - y) / k`.
pub fn floor_exact(y0: f64, s: f64) -> f64 {
    assert!(y0 >= 1.0);
    let (mut t, mut y) = (0.0, y0);
    loop {
        let k = y.floor();
        let climb = (k + 1.0 - y) / k;
        if t + climb >= s {
            return y + k * (s - t);
        }
        t += climb;
        y = k + 1.0;
    }
}

/// `min_{i<j} (v_j - v_i) - (z_j - z_i)` over all pairs.
pub fn brute_margin(z: &[f64], v: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            best = best.min((v[j] - v[i]) - (z[j] - z[i]));
        }
    }
    best
}

/// Random partition of `[a, b]` with `cells` cells of varied widths.
pub fn random_partition(rng: &mut impl Rng, a: f64, b: f64, cells: usize) -> Partition {
    let w: Vec<f64> = (0..cells).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = w.iter().sum();
    let mut nodes = vec![a];
    let mut acc = 0.0;
    for wi in &w[..cells - 1] {
        acc += wi;
        nodes.push(a + (b - a) * acc / total);
    }
    nodes.push(b);
    Partition::new(nodes).unwrap()
}

pub fn random_walk(rng: &mut impl Rng, p: &Partition, start: f64, step: f64) -> GridFunction {
    let mut v = start;
    let values = (0..p.len())
        .map(|i| {
            if i > 0 {
                v += rng.gen_range(-step..step);
            }
            v
        })
        .collect();
    GridFunction::new(p.clone(), values).unwrap()
}
