//! Maximal and minimal integral solutions by monotone iteration.
//!
//! The upper envelope `w0 = y0 + int phi` is a super-solution of the integral
//! map `T z = y0 + int_a^x f(t, z(t)) dt` and the lower witness
//! `w = y0 - int phi` is a sub-solution. When `f` is non-decreasing in `y`, `T`
//! is order preserving, so `z <- min(z, T z)` started at `w0` descends onto the
//! largest fixed point and `z <- max(z, T z)` started at `w` ascends onto the
//! smallest one above `w`. Upper semicontinuity in `y` lets the descending
//! iteration pass the integral inequality to its limit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Partition};
use crate::quadrature::{cumulative_cells, picard_map, QuadOptions};
use crate::rhs::CauchyProblem;
use crate::subsolution::{envelopes, verify_subsolution, Envelopes, SubsolutionReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveOptions {
    pub tol_iter: f64,
    pub tol_res: f64,
    pub max_iter: usize,
    pub quad: QuadOptions,
    /// Run on right-hand sides without the increasing flag; the result is never certified.
    pub force_heuristic: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol_iter: 1e-9,
            tol_res: 1e-6,
            max_iter: 100_000,
            quad: QuadOptions::default(),
            force_heuristic: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Down,
    Up,
}

/// Limit of one monotone iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Iterated {
    pub z: GridFunction,
    pub iterations: usize,
    pub converged: bool,
    /// Every iterate moved in the prescribed direction at every node.
    pub monotone: bool,
    pub last_step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub z0: GridFunction,
    pub iterations: usize,
    pub converged: bool,
    pub monotone: bool,
    /// Sup-norm of `z0 - T z0`.
    pub fixed_point_residual: f64,
    /// Quadrature error estimate of the final `T z0`.
    pub quad_err: f64,
    pub subsolution_report: SubsolutionReport,
    /// Set when the iteration ran with the increasing and usc flags and met every tolerance.
    pub certified: bool,
    pub minimal: Option<GridFunction>,
    /// Sup-norm of `z0 - minimal`.
    pub gap: Option<f64>,
    pub envelopes: Envelopes,
}

fn gate(problem: &CauchyProblem, opts: &SolveOptions) -> Result<bool> {
    let props = problem.rhs.props();
    let certifiable = props.y_increasing && props.y_usc;
    if !certifiable && !opts.force_heuristic {
        return Err(Error::NotCertifiable(format!(
            "`{}` is not declared non-decreasing and upper semicontinuous in y; rerun in heuristic mode",
            problem.rhs.name()
        )));
    }
    Ok(certifiable)
}

fn iterate(
    problem: &CauchyProblem,
    env: &Envelopes,
    direction: Direction,
    opts: &SolveOptions,
) -> Iterated {
    let (lo, hi) = (env.lower.values(), env.upper.values());
    let mut z = match direction {
        Direction::Down => env.upper.clone(),
        Direction::Up => env.lower.clone(),
    };
    let mut monotone = true;
    let mut last_step = f64::INFINITY;
    for k in 1..=opts.max_iter {
        let tz = picard_map(problem, &z, &opts.quad).function;
        let mut next = z.clone();
        let mut step: f64 = 0.0;
        for (i, (v, &t)) in next.values_mut().iter_mut().zip(tz.values()).enumerate() {
            let moved = match direction {
                Direction::Down => v.min(t),
                Direction::Up => v.max(t),
            }
            .clamp(lo[i], hi[i]);
            let ok = match direction {
                Direction::Down => moved <= *v,
                Direction::Up => moved >= *v,
            };
            monotone &= ok;
            step = step.max((moved - *v).abs());
            *v = moved;
        }
        z = next;
        last_step = step;
        if step <= opts.tol_iter {
            return Iterated {
                z,
                iterations: k,
                converged: true,
                monotone,
                last_step,
            };
        }
    }
    Iterated {
        z,
        iterations: opts.max_iter,
        converged: false,
        monotone,
        last_step,
    }
}

fn finish(problem: &CauchyProblem, it: Iterated, env: Envelopes, certifiable: bool, opts: &SolveOptions) -> Result<SolveResult> {
    let tz = picard_map(problem, &it.z, &opts.quad);
    let fixed_point_residual = it.z.sup_distance(&tz.function)?;
    let report = verify_subsolution(problem, &it.z, opts.tol_res, &opts.quad)?;
    let certified = certifiable
        && it.converged
        && it.monotone
        && fixed_point_residual <= opts.tol_res + tz.err_estimate
        && report.member;
    Ok(SolveResult {
        z0: it.z,
        iterations: it.iterations,
        converged: it.converged,
        monotone: it.monotone,
        fixed_point_residual,
        quad_err: tz.err_estimate,
        subsolution_report: report,
        certified,
        minimal: None,
        gap: None,
        envelopes: env,
    })
}

/// Largest sub-solution, by descent from the upper envelope.
pub fn solve_maximal(problem: &CauchyProblem, partition: &Partition, opts: &SolveOptions) -> Result<SolveResult> {
    let certifiable = gate(problem, opts)?;
    let env = envelopes(problem, partition, &opts.quad);
    let it = iterate(problem, &env, Direction::Down, opts);
    finish(problem, it, env, certifiable, opts)
}

/// Smallest fixed point above the lower witness, by ascent.
pub fn solve_minimal(problem: &CauchyProblem, partition: &Partition, opts: &SolveOptions) -> Result<Iterated> {
    gate(problem, opts)?;
    let env = envelopes(problem, partition, &opts.quad);
    Ok(iterate(problem, &env, Direction::Up, opts))
}

/// Both iterations, with the gap between their limits.
pub fn solve(problem: &CauchyProblem, partition: &Partition, opts: &SolveOptions) -> Result<SolveResult> {
    let mut result = solve_maximal(problem, partition, opts)?;
    let minimal = iterate(problem, &result.envelopes, Direction::Up, opts);
    result.gap = Some(result.z0.sup_distance(&minimal.z)?);
    result.certified &= minimal.converged && minimal.monotone;
    result.minimal = Some(minimal.z);
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub sup_residual: f64,
    pub argmax_x: f64,
    pub quad_err: f64,
    pub capped_cells: usize,
}

/// `sup_x |y(x) - y0 - int_a^x f(t, y(t)) dt|` over the nodes of `y`, with `y0`
/// taken from the problem.
pub fn residual(problem: &CauchyProblem, y: &GridFunction, opts: &QuadOptions) -> ResidualReport {
    let rhs = &problem.rhs;
    let v = cumulative_cells(y.partition(), |j, t| rhs.eval(t, y.eval_in_cell(j, t)), opts);
    let mut best = (0.0, y.partition().start());
    for ((&x, &yv), &vv) in y.nodes().iter().zip(y.values()).zip(v.function.values()) {
        let r = (yv - problem.y0 - vv).abs();
        if r > best.0 {
            best = (r, x);
        }
    }
    ResidualReport {
        sup_residual: best.0,
        argmax_x: best.1,
        quad_err: v.err_estimate,
        capped_cells: v.capped_cells,
    }
}

/// Explicit Euler with uniform step `h` on `[a, b]`; the last step is shortened
/// to land on `b` unless it already matches `h`.
pub fn euler(problem: &CauchyProblem, h: f64) -> Result<GridFunction> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Precondition(format!("step must be positive, got {h}")));
    }
    let (a, b) = (problem.a, problem.b);
    let steps = (((b - a) / h) - 1e-9).ceil().max(1.0) as usize;
    let mut xs = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    let mut y = problem.y0;
    xs.push(a);
    ys.push(y);
    for k in 0..steps {
        let x = xs[k];
        let next_x = if k + 1 == steps { b } else { a + (k + 1) as f64 * h };
        let mut step = next_x - x;
        if (step - h).abs() <= 1e-9 * h {
            step = h;
        }
        y += step * problem.rhs.eval(x, y);
        xs.push(next_x);
        ys.push(y);
    }
    GridFunction::new(Partition::new(xs)?, ys)
}

/// [`euler`] resampled onto a partition by linear interpolation.
pub fn euler_on(problem: &CauchyProblem, h: f64, partition: &Partition) -> Result<GridFunction> {
    Ok(euler(problem, h)?.resample(partition))
}
