//! Integration of bounded, possibly discontinuous integrands.
//!
//! Integrals are composite midpoint sums refined dyadically (`8, 16, 32, ...`
//! points) until two consecutive refinements each change the sum by at most
//! `tol`, or the evaluation cap is hit. Midpoints never sit on cell boundaries,
//! so a jump located exactly at a partition node is never sampled from both
//! sides and piecewise-constant integrands with node-aligned jumps are
//! integrated exactly.
//!
//! A jump strictly inside the interval can fool the refinement delta: successive
//! sums coincide whenever adjacent binary digits of the jump position agree.
//! After the refinement stops, the final samples are scanned for an isolated
//! outlier difference between neighbours. If one carries more than `tol` of
//! potential error it is located by bisection and the interval is split there,
//! which turns the jump into an endpoint. This is repeated a bounded number of
//! times. Without a split the error is still bounded by half the jump size
//! times the final point spacing.

use rayon::prelude::*;
use serde::Serialize;

use crate::grid::{GridFunction, Partition};
use crate::rhs::CauchyProblem;

/// Default absolute tolerance per cell.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default evaluation cap per cell.
pub const DEFAULT_MAX_EVALS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadOptions {
    pub tol: f64,
    pub max_evals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            tol: DEFAULT_TOL,
            max_evals: DEFAULT_MAX_EVALS,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        QuadOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Result of one integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    /// Difference between the last two refinements.
    pub err_estimate: f64,
    pub evals: usize,
    /// `false` when the cap was reached before the refinements agreed to `tol`.
    pub converged: bool,
}

/// Nested splits allowed per call.
const SPLIT_DEPTH: u32 = 6;
/// A neighbour difference counts as isolated when it exceeds both adjacent ones by this factor.
const OUTLIER_RATIO: f64 = 4.0;
/// Smallest remaining budget worth splitting for: bisection plus two short refinements.
const MIN_SPLIT_BUDGET: usize = 256;
/// Candidates that turned out continuous before scanning gives up on a level sequence.
const MAX_REJECTED: u32 = 4;

fn midpoint_samples(g: &impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize, out: &mut Vec<f64>) -> f64 {
    let h = (hi - lo) / n as f64;
    out.clear();
    let mut sum = 0.0;
    for k in 0..n {
        let v = g(lo + (k as f64 + 0.5) * h);
        out.push(v);
        sum += v;
    }
    sum * h
}

/// Integral of `g` over `[lo, hi]` with the default evaluation cap.
pub fn integrate(g: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Integral {
    integrate_with(g, lo, hi, &QuadOptions::with_tol(tol))
}

pub fn integrate_with(g: impl Fn(f64) -> f64, lo: f64, hi: f64, opts: &QuadOptions) -> Integral {
    debug_assert!(lo <= hi, "integrate over [{lo}, {hi}]");
    integrate_split(&g, lo, hi, opts.tol, opts.max_evals, SPLIT_DEPTH)
}

fn integrate_split(g: &impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, max_evals: usize, depth: u32) -> Integral {
    let (base, jump) = refine(g, lo, hi, tol, max_evals, depth > 0);
    let Some(c) = jump else {
        return base;
    };
    let share = max_evals.saturating_sub(base.evals) / 2;
    let left = integrate_split(g, lo, c, tol / 2.0, share, depth - 1);
    let right = integrate_split(g, c, hi, tol / 2.0, share, depth - 1);
    Integral {
        value: left.value + right.value,
        err_estimate: left.err_estimate + right.err_estimate,
        evals: base.evals + left.evals + right.evals,
        converged: left.converged && right.converged,
    }
}

/// Index `k` of the largest isolated difference `|s[k+1] - s[k]|` whose
/// sampling error `diff * h / 2` could exceed `tol / 2`.
fn isolated_jump(samples: &[f64], h: f64, tol: f64) -> Option<usize> {
    let diffs: Vec<f64> = samples.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let mut best: Option<(usize, f64)> = None;
    for (k, &d) in diffs.iter().enumerate() {
        if !(d * h > tol) {
            continue;
        }
        let before = k.checked_sub(1).map(|i| diffs[i]);
        let after = diffs.get(k + 1).copied();
        let Some(neighbour) = before.into_iter().chain(after).reduce(f64::max) else {
            continue;
        };
        if d > OUTLIER_RATIO * neighbour && best.is_none_or(|(_, bd)| d > bd) {
            best = Some((k, d));
        }
    }
    best.map(|(k, _)| k)
}

/// Bisects `[a, b]` towards the point where `g` leaves `ga` for `gb`. Returns
/// the point and the jump left across the final bracket of adjacent floats,
/// which is close to `|gb - ga|` for a true jump and vanishes for a steep but
/// continuous `g`.
fn locate_jump(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut ga: f64, mut gb: f64) -> (f64, f64, usize) {
    let mut evals = 0;
    loop {
        let m = 0.5 * (a + b);
        if !(m > a && m < b) {
            return (b, (gb - ga).abs(), evals);
        }
        let gm = g(m);
        evals += 1;
        if (gm - ga).abs() <= (gm - gb).abs() {
            (a, ga) = (m, gm);
        } else {
            (b, gb) = (m, gm);
        }
    }
}

fn sample_spread(samples: &[f64]) -> f64 {
    let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    hi - lo
}

/// Dyadic midpoint refinement. With `scan` set, each level's samples are
/// searched for an isolated jump; a confirmed one ends the refinement and its
/// location is returned so the caller can split there.
fn refine(g: &impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, max_evals: usize, mut scan: bool) -> (Integral, Option<f64>) {
    if lo == hi {
        let done = Integral {
            value: 0.0,
            err_estimate: 0.0,
            evals: 0,
            converged: true,
        };
        return (done, None);
    }
    let mut samples = Vec::new();
    let mut n = 8;
    let mut prev = midpoint_samples(g, lo, hi, n, &mut samples);
    let mut evals = n;
    let mut agreed = false;
    let mut rejected = 0;
    loop {
        let next_n = 2 * n;
        if evals + next_n > max_evals {
            let capped = Integral {
                value: prev,
                err_estimate: sample_spread(&samples) * (hi - lo),
                evals,
                converged: false,
            };
            return (capped, None);
        }
        let cur = midpoint_samples(g, lo, hi, next_n, &mut samples);
        evals += next_n;
        let delta = (cur - prev).abs();
        let mut out = Integral {
            value: cur,
            err_estimate: delta,
            evals,
            converged: false,
        };
        if scan && max_evals.saturating_sub(evals) >= MIN_SPLIT_BUDGET {
            let h = (hi - lo) / next_n as f64;
            if let Some(k) = isolated_jump(&samples, h, tol) {
                let (a, b) = (lo + (k as f64 + 0.5) * h, lo + (k as f64 + 1.5) * h);
                let (c, residual_jump, located) = locate_jump(g, a, b, samples[k], samples[k + 1]);
                evals += located;
                out.evals = evals;
                if residual_jump * h > 0.5 * tol {
                    return (out, Some(c));
                }
                // continuous after all
                rejected += 1;
                scan = rejected < MAX_REJECTED;
            }
        }
        if delta <= tol {
            if agreed {
                out.converged = true;
                return (out, None);
            }
            agreed = true;
        } else {
            agreed = false;
        }
        if evals + 2 * next_n > max_evals {
            return (out, None);
        }
        prev = cur;
        n = next_n;
    }
}

/// Running integral `x -> int_a^x g` sampled on a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Cumulative {
    pub function: GridFunction,
    /// Sum of the per-cell error estimates.
    pub err_estimate: f64,
    /// Cells whose refinement hit the evaluation cap.
    pub capped_cells: usize,
}

/// Cumulative integral of an integrand that may depend on the cell index, so that
/// the caller can use the in-cell branch of a piecewise definition.
pub fn cumulative_cells<G>(partition: &Partition, g: G, opts: &QuadOptions) -> Cumulative
where
    G: Fn(usize, f64) -> f64 + Sync,
{
    let nodes = partition.nodes();
    let cells: Vec<Integral> = (0..partition.cells())
        .into_par_iter()
        .map(|j| integrate_with(|t| g(j, t), nodes[j], nodes[j + 1], opts))
        .collect();
    let mut values = Vec::with_capacity(nodes.len());
    values.push(0.0);
    let mut acc = 0.0;
    let mut err = 0.0;
    let mut capped = 0;
    for cell in &cells {
        acc += cell.value;
        err += cell.err_estimate;
        if !cell.converged {
            capped += 1;
        }
        values.push(acc);
    }
    Cumulative {
        function: GridFunction::from_raw(partition.clone(), values),
        err_estimate: err,
        capped_cells: capped,
    }
}

pub fn cumulative<G>(g: G, partition: &Partition, opts: &QuadOptions) -> Cumulative
where
    G: Fn(f64) -> f64 + Sync,
{
    cumulative_cells(partition, |_, t| g(t), opts)
}

/// The integral map `z -> y0 + int_a^x f(t, z(t)) dt` on the partition of `z`.
pub fn picard_map(problem: &CauchyProblem, z: &GridFunction, opts: &QuadOptions) -> Cumulative {
    let rhs = &problem.rhs;
    let mut out = cumulative_cells(z.partition(), |j, t| rhs.eval(t, z.eval_in_cell(j, t)), opts);
    for v in out.function.values_mut() {
        *v += problem.y0;
    }
    out
}
