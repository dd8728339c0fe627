//! Verifiers for integral sub-solutions and the dominated class.
//!
//! A grid function `z` is a sub-solution when `z(a) = y0` and
//! `z(x2) - z(x1) <= int_{x1}^{x2} f(t, z(t)) dt` for all nodes `x1 <= x2`.
//! With `V = int_a^. f(t, z(t)) dt` the pair margin is `d(x1) - d(x2)` for
//! `d = z - V`, so the family of all pair inequalities is the statement that `d`
//! is non-increasing, and the worst pair is found in one pass with a prefix
//! minimum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Partition};
use crate::quadrature::{cumulative, cumulative_cells, QuadOptions};
use crate::rhs::{CauchyProblem, Rhs};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsolutionReport {
    pub member: bool,
    /// Nodes `(x1, x2)` of the worst pair inequality.
    pub worst_pair: (f64, f64),
    /// Minimum over node pairs of `int_{x1}^{x2} f(t, z) dt - (z(x2) - z(x1))`.
    pub worst_margin: f64,
    pub cphi_ok: bool,
    pub cphi_margin: f64,
    pub tol: f64,
    /// Accumulated quadrature error estimate added to `tol` before judging.
    pub quad_err: f64,
}

/// Outcome of the two-sided increment bound `|z(x2) - z(x1)| <= int phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CphiCheck {
    pub ok: bool,
    pub margin: f64,
    pub upper_margin: f64,
    pub lower_margin: f64,
    pub quad_err: f64,
}

/// `min_{i<j} (d_i - d_j)` and its argmin.
pub(crate) fn worst_descent(d: &[f64]) -> (f64, usize, usize) {
    let mut best = (f64::INFINITY, 0, d.len().min(2) - 1);
    let mut min_idx = 0;
    for j in 1..d.len() {
        let m = d[min_idx] - d[j];
        if m < best.0 {
            best = (m, min_idx, j);
        }
        if d[j] < d[min_idx] {
            min_idx = j;
        }
    }
    best
}

fn check_problem_partition(problem: &CauchyProblem, p: &Partition) -> Result<()> {
    let scale = 1e-12 * (1.0 + problem.a.abs().max(problem.b.abs()));
    if (p.start() - problem.a).abs() > scale || (p.end() - problem.b).abs() > scale {
        return Err(Error::Precondition(format!(
            "partition [{}, {}] does not span the problem interval [{}, {}]",
            p.start(),
            p.end(),
            problem.a,
            problem.b
        )));
    }
    Ok(())
}

pub fn verify_cphi(z: &GridFunction, phi: &(dyn Fn(f64) -> f64 + Sync), tol: f64, opts: &QuadOptions) -> CphiCheck {
    let big_phi = cumulative(phi, z.partition(), opts);
    let upper: Vec<f64> = z
        .values()
        .iter()
        .zip(big_phi.function.values())
        .map(|(v, p)| v - p)
        .collect();
    // z + Phi must be non-decreasing: reuse the descent search on its negation
    let lower: Vec<f64> = z
        .values()
        .iter()
        .zip(big_phi.function.values())
        .map(|(v, p)| -(v + p))
        .collect();
    let (upper_margin, ..) = worst_descent(&upper);
    let (lower_margin, ..) = worst_descent(&lower);
    let margin = upper_margin.min(lower_margin);
    CphiCheck {
        ok: margin >= -(tol + big_phi.err_estimate),
        margin,
        upper_margin,
        lower_margin,
        quad_err: big_phi.err_estimate,
    }
}

pub fn verify_subsolution(
    problem: &CauchyProblem,
    z: &GridFunction,
    tol: f64,
    opts: &QuadOptions,
) -> Result<SubsolutionReport> {
    check_problem_partition(problem, z.partition())?;
    if (z.start_value() - problem.y0).abs() > tol {
        return Err(Error::Precondition(format!(
            "z(a) = {} differs from y0 = {} by more than {tol}",
            z.start_value(),
            problem.y0
        )));
    }
    let rhs = &problem.rhs;
    let v = cumulative_cells(z.partition(), |j, t| rhs.eval(t, z.eval_in_cell(j, t)), opts);
    let d: Vec<f64> = z
        .values()
        .iter()
        .zip(v.function.values())
        .map(|(zv, vv)| zv - vv)
        .collect();
    let (worst_margin, i, j) = worst_descent(&d);
    let nodes = z.nodes();
    let cphi = verify_cphi(z, &|x| rhs.phi(x), tol, opts);
    let member = worst_margin >= -(tol + v.err_estimate) && cphi.ok;
    Ok(SubsolutionReport {
        member,
        worst_pair: (nodes[i], nodes[j]),
        worst_margin,
        cphi_ok: cphi.ok,
        cphi_margin: cphi.margin,
        tol,
        quad_err: v.err_estimate + cphi.quad_err,
    })
}

/// The lower witness `y0 - int phi` and the upper envelope `y0 + int phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelopes {
    pub lower: GridFunction,
    pub upper: GridFunction,
    pub quad_err: f64,
}

pub fn envelopes(problem: &CauchyProblem, partition: &Partition, opts: &QuadOptions) -> Envelopes {
    let rhs = &problem.rhs;
    let big_phi = cumulative(|x| rhs.phi(x), partition, opts);
    let y0 = problem.y0;
    Envelopes {
        lower: big_phi.function.map(|_, p| y0 - p),
        upper: big_phi.function.map(|_, p| y0 + p),
        quad_err: big_phi.err_estimate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FatouOptions {
    pub tol: f64,
    /// Number of trailing iterates whose maximum stands in for the limsup.
    pub tail: usize,
    /// Largest accepted sup-distance between the last iterate and the limit.
    pub max_deviation: f64,
    pub quad: QuadOptions,
}

impl Default for FatouOptions {
    fn default() -> Self {
        FatouOptions {
            tol: 1e-6,
            tail: 8,
            max_deviation: 1e-2,
            quad: QuadOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FatouReport {
    /// `int f(x, y_limit(x)) dx - int limsup_n f(x, y_n(x)) dx`
    pub margin: f64,
    pub holds: bool,
    pub limit_integral: f64,
    pub limsup_integral: f64,
    pub last_deviation: f64,
    pub quad_err: f64,
}

/// Integral comparison between `f` along a limit and the limsup of `f` along
/// a convergent sequence.
pub fn fatou_check(
    rhs: &Rhs,
    y_seq: &[GridFunction],
    y_limit: &GridFunction,
    opts: &FatouOptions,
) -> Result<FatouReport> {
    let Some(last) = y_seq.last() else {
        return Err(Error::Precondition("empty sequence".into()));
    };
    for y in y_seq {
        y.check_same(y_limit)?;
    }
    let last_deviation = last.sup_distance(y_limit)?;
    if last_deviation > opts.max_deviation {
        return Err(Error::Precondition(format!(
            "sequence has not converged: last deviation {last_deviation} exceeds {}",
            opts.max_deviation
        )));
    }
    let tail = &y_seq[y_seq.len().saturating_sub(opts.tail.max(1))..];
    let p = y_limit.partition();
    let lim = cumulative_cells(p, |j, t| rhs.eval(t, y_limit.eval_in_cell(j, t)), &opts.quad);
    let sup = cumulative_cells(
        p,
        |j, t| {
            tail.iter()
                .map(|y| rhs.eval(t, y.eval_in_cell(j, t)))
                .fold(f64::NEG_INFINITY, f64::max)
        },
        &opts.quad,
    );
    let limit_integral = lim.function.end_value();
    let limsup_integral = sup.function.end_value();
    let margin = limit_integral - limsup_integral;
    Ok(FatouReport {
        margin,
        holds: margin >= -opts.tol,
        limit_integral,
        limsup_integral,
        last_deviation,
        quad_err: lim.err_estimate + sup.err_estimate,
    })
}

/// Nodal maximum of two grid functions with a common start value.
pub fn join(z1: &GridFunction, z2: &GridFunction) -> Result<GridFunction> {
    if z1.start_value() != z2.start_value() {
        return Err(Error::Precondition(format!(
            "start values differ: {} vs {}",
            z1.start_value(),
            z2.start_value()
        )));
    }
    z1.zip_with(z2, f64::max)
}
