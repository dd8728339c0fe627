//! Step-grid approximations `f_n` of a right-hand side.
//!
//! For every `n` the height axis is cut by breakpoints `a_k` drawn from the
//! dense set, with consecutive gaps below `1/n`. On a breakpoint `f_n` keeps the
//! exact value `f(x, a_k)`; on the open interval `(a_k, a_{k+1})` it is the
//! constant `min(n, sup f(x, .))`, the supremum taken over dense-set points of
//! the interval. For sections that are upper semicontinuous `f_n -> f`
//! pointwise as `n -> infinity`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::rhs::Rhs;

pub const DEFAULT_SUP_RESOLUTION: usize = 256;
const REFINE_ROUNDS: usize = 4;
const REFINE_POINTS: usize = 64;

/// Breakpoints `a_0 < a_1 < ... < a_K` covering a window, gaps `< 1/n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepGrid {
    n: u32,
    breakpoints: Vec<f64>,
}

impl StepGrid {
    /// Validates an explicit breakpoint list against the gap and coverage conditions.
    pub fn from_breakpoints(n: u32, breakpoints: Vec<f64>, window: (f64, f64)) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if breakpoints.len() < 2 {
            return Err(Error::Config("a step grid needs at least two breakpoints".into()));
        }
        let inv = 1.0 / n as f64;
        for w in breakpoints.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Config("breakpoints must be strictly ascending".into()));
            }
            if !(w[1] - w[0] < inv) {
                return Err(Error::Config(format!(
                    "gap {} between {} and {} is not below 1/n = {inv}",
                    w[1] - w[0],
                    w[0],
                    w[1]
                )));
            }
        }
        if breakpoints[0] > window.0 || breakpoints[breakpoints.len() - 1] < window.1 {
            return Err(Error::Config(format!(
                "breakpoints [{}, {}] do not cover the window [{}, {}]",
                breakpoints[0],
                breakpoints[breakpoints.len() - 1],
                window.0,
                window.1
            )));
        }
        Ok(StepGrid { n, breakpoints })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn intervals(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn lo(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn hi(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1]
    }

    /// Where `y` sits relative to the breakpoints.
    pub fn locate(&self, y: f64) -> Result<Cell> {
        if !(y >= self.lo() && y <= self.hi()) {
            return Err(Error::Domain {
                y,
                lo: self.lo(),
                hi: self.hi(),
            });
        }
        let idx = self.breakpoints.partition_point(|&a| a < y);
        if idx < self.breakpoints.len() && self.breakpoints[idx] == y {
            Ok(Cell::Breakpoint(idx))
        } else {
            Ok(Cell::Interval(idx - 1))
        }
    }
}

/// Position of a height relative to a step grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "k")]
pub enum Cell {
    /// `y = a_k`
    Breakpoint(usize),
    /// `a_k < y < a_{k+1}`
    Interval(usize),
}

/// Builds a step grid for `f_n` over `window` from the dense set of `rhs`.
pub fn build_step_grid(rhs: &Rhs, n: u32, window: (f64, f64)) -> Result<StepGrid> {
    let (lo, hi) = window;
    if n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Config(format!("window [{lo}, {hi}] must be finite with lo < hi")));
    }
    let inv = 1.0 / n as f64;
    let (elo, ehi) = (lo - inv, hi + inv);
    let count = 2 * (n as f64 * (ehi - elo)).ceil() as usize + 2;
    let pts = rhs.dense_sample(elo, ehi, count);
    let first = pts.iter().rposition(|&t| t <= lo);
    let last = pts.iter().position(|&t| t >= hi);
    let (Some(first), Some(last)) = (first, last) else {
        return Err(Error::Config(format!(
            "dense sampler returned too few points to cover [{lo}, {hi}]"
        )));
    };
    let breakpoints = pts[first..=last].to_vec();
    if breakpoints.windows(2).any(|w| !(w[1] - w[0] < inv)) {
        return Err(Error::Config(format!(
            "dense sampler returned too few points: gaps not below 1/{n}"
        )));
    }
    StepGrid::from_breakpoints(n, breakpoints, window)
}

/// The approximation `f_n` attached to a right-hand side.
#[derive(Debug, Clone)]
pub struct ApproxRhs {
    base: Rhs,
    grid: StepGrid,
    sup_resolution: usize,
}

impl ApproxRhs {
    pub fn new(base: Rhs, grid: StepGrid) -> Self {
        Self::with_resolution(base, grid, DEFAULT_SUP_RESOLUTION)
    }

    pub fn with_resolution(base: Rhs, grid: StepGrid, sup_resolution: usize) -> Self {
        ApproxRhs {
            base,
            grid,
            sup_resolution: sup_resolution.max(1),
        }
    }

    pub fn build(base: &Rhs, n: u32, window: (f64, f64)) -> Result<Self> {
        let grid = build_step_grid(base, n, window)?;
        Ok(Self::new(base.clone(), grid))
    }

    pub fn base(&self) -> &Rhs {
        &self.base
    }

    pub fn grid(&self) -> &StepGrid {
        &self.grid
    }

    /// Estimate of `sup { f(x, t) : t in (a_k, a_{k+1}) }` from dense-set points,
    /// refined around the running maximum.
    pub fn interval_sup(&self, k: usize, x: f64) -> f64 {
        let bp = self.grid.breakpoints();
        let (lo, hi) = (bp[k], bp[k + 1]);
        let mut pts = self.base.dense_sample(lo, hi, self.sup_resolution);
        if pts.is_empty() {
            return self.base.eval(x, 0.5 * (lo + hi));
        }
        let mut best = f64::NEG_INFINITY;
        for _ in 0..=REFINE_ROUNDS {
            let mut arg = None;
            for (i, &t) in pts.iter().enumerate() {
                let v = self.base.eval(x, t);
                if v > best || arg.is_none() && v == best {
                    best = v;
                    arg = Some(i);
                }
            }
            let Some(i) = arg else { break };
            let left = if i > 0 { pts[i - 1] } else { lo };
            let right = if i + 1 < pts.len() { pts[i + 1] } else { hi };
            pts = self.base.dense_sample(left, right, REFINE_POINTS);
            if pts.is_empty() {
                break;
            }
        }
        best
    }

    /// Value of `f_n` on the open interval `k`, as a function of `x`.
    pub fn gamma(&self, k: usize, x: f64) -> f64 {
        (self.grid.n() as f64).min(self.interval_sup(k, x))
    }

    /// `f_n(x, y)`; exact at breakpoints.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match self.grid.locate(y)? {
            Cell::Breakpoint(k) => Ok(self.base.eval(x, self.grid.breakpoints()[k])),
            Cell::Interval(k) => Ok(self.gamma(k, x)),
        }
    }
}

/// `f_n(x, y)` for a prepared approximation.
pub fn eval_fn(approx: &ApproxRhs, x: f64, y: f64) -> Result<f64> {
    approx.eval(x, y)
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    pub x: f64,
    pub y: f64,
    pub n: u32,
    pub deviation: f64,
}

/// `|f_n(x, y) - f(x, y)|` for every probe point and every `n`, ordered by
/// point and then by `n`.
pub fn convergence_probe(
    rhs: &Rhs,
    points: &[(f64, f64)],
    n_list: &[u32],
    window: (f64, f64),
) -> Result<Vec<ProbeRow>> {
    if let Some(&(_, y)) = points.iter().find(|&&(_, y)| !(y >= window.0 && y <= window.1)) {
        return Err(Error::Domain {
            y,
            lo: window.0,
            hi: window.1,
        });
    }
    let approxes: Vec<ApproxRhs> = n_list
        .iter()
        .map(|&n| ApproxRhs::build(rhs, n, window))
        .collect::<Result<_>>()?;
    points
        .par_iter()
        .map(|&(x, y)| {
            let exact = rhs.eval(x, y);
            approxes
                .iter()
                .map(|ap| {
                    Ok(ProbeRow {
                        x,
                        y,
                        n: ap.grid().n(),
                        deviation: (ap.eval(x, y)? - exact).abs(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()
        .map(|rows| rows.into_iter().flatten().collect())
}

/// The superposition `x -> f(x, g(x))` sampled on the partition of `g`.
pub fn superpose(rhs: &Rhs, g: &GridFunction) -> GridFunction {
    g.map(|x, y| rhs.eval(x, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleClass {
    pub x: f64,
    pub y: f64,
    pub cell: Cell,
    /// `f_n(x, g(x))`
    pub value: f64,
}

/// Samples of `x -> f_n(x, g(x))` split by the cell `g(x)` falls in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub samples: Vec<SampleClass>,
    /// Sample indices with `g(x) = a_k`, keyed by `k`.
    pub on_breakpoints: BTreeMap<usize, Vec<usize>>,
    /// Sample indices with `g(x)` in `(a_k, a_{k+1})`, keyed by `k`.
    pub in_intervals: BTreeMap<usize, Vec<usize>>,
}

pub fn decompose_sets(approx: &ApproxRhs, g: &GridFunction, samples: &[f64]) -> Result<Decomposition> {
    let (a, b) = (g.partition().start(), g.partition().end());
    let mut out = Decomposition {
        samples: Vec::with_capacity(samples.len()),
        on_breakpoints: BTreeMap::new(),
        in_intervals: BTreeMap::new(),
    };
    for (i, &x) in samples.iter().enumerate() {
        if !(x >= a && x <= b) {
            return Err(Error::Precondition(format!("sample {x} outside [{a}, {b}]")));
        }
        let y = g.eval(x);
        let cell = approx.grid().locate(y)?;
        let value = match cell {
            Cell::Breakpoint(k) => {
                out.on_breakpoints.entry(k).or_default().push(i);
                approx.base().eval(x, approx.grid().breakpoints()[k])
            }
            Cell::Interval(k) => {
                out.in_intervals.entry(k).or_default().push(i);
                approx.gamma(k, x)
            }
        };
        out.samples.push(SampleClass { x, y, cell, value });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Partition;
    use crate::rhs::builtin_rhs;

    fn rhs(name: &str) -> Rhs {
        builtin_rhs(name, &[]).unwrap()
    }

    #[test]
    fn explicit_quarter_grid_is_admissible() {
        let g = StepGrid::from_breakpoints(2, vec![0.0, 0.25, 0.5, 0.75, 1.0], (0.0, 1.0)).unwrap();
        assert_eq!(g.intervals(), 4);
        // gap 1/2 is not strictly below 1/2
        assert!(StepGrid::from_breakpoints(2, vec![0.0, 0.5, 1.0], (0.0, 1.0)).is_err());
        // does not cover the window
        assert!(StepGrid::from_breakpoints(2, vec![0.0, 0.25, 0.5], (0.0, 1.0)).is_err());
    }

    #[test]
    fn built_grids_satisfy_conditions() {
        let f = rhs("grande_sign");
        for (n, lo, hi) in [(2u32, 0.0, 1.0), (1, 0.0, 3.0), (10, 0.0, 1.0), (7, -1.3, 2.9), (512, -2.0, 2.0)] {
            let g = build_step_grid(&f, n, (lo, hi)).unwrap();
            let bp = g.breakpoints();
            assert!(bp[0] <= lo && *bp.last().unwrap() >= hi);
            assert!(bp.windows(2).all(|w| w[0] < w[1] && w[1] - w[0] < 1.0 / n as f64));
            assert!(g.intervals() >= (n as f64 * (hi - lo)).ceil() as usize);
        }
        assert!(build_step_grid(&f, 10, (0.0, 1.0)).unwrap().intervals() >= 10);
    }

    #[test]
    fn sparse_sampler_is_a_config_error() {
        let f = rhs("const").with_dense_set(crate::rhs::DenseSet::Custom(std::sync::Arc::new(|lo, hi, _| {
            vec![0.5 * (lo + hi)]
        })));
        assert!(matches!(build_step_grid(&f, 4, (0.0, 1.0)), Err(Error::Config(_))));
    }

    #[test]
    fn breakpoint_value_is_exact() {
        let f = rhs("grande_sign");
        let ap = ApproxRhs::build(&f, 4, (-1.0, 1.0)).unwrap();
        assert!(ap.grid().breakpoints().contains(&0.5));
        assert_eq!(eval_fn(&ap, 0.0, 0.5).unwrap(), -1.0);
        assert_eq!(eval_fn(&ap, 0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn constant_is_clamped_at_n() {
        let f = builtin_rhs("const", &[7.0]).unwrap();
        let ap = ApproxRhs::build(&f, 3, (-1.0, 1.0)).unwrap();
        assert_eq!(eval_fn(&ap, 0.0, 0.1).unwrap(), 3.0);
        assert_eq!(eval_fn(&ap, 0.0, 0.0).unwrap(), 7.0);
    }

    #[test]
    fn outside_window_is_domain_error() {
        let ap = ApproxRhs::build(&rhs("floor"), 3, (0.0, 1.0)).unwrap();
        assert!(matches!(eval_fn(&ap, 0.0, 5.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn grande_sin_sup_near_peak() {
        let f = rhs("grande_sin");
        let ap = ApproxRhs::build(&f, 8, (-1.0, 1.0)).unwrap();
        let y = 0.39;
        let Cell::Interval(k) = ap.grid().locate(y).unwrap() else { panic!() };
        let bp = ap.grid().breakpoints();
        assert!(bp[k] < 0.4 && 0.4 < bp[k + 1]);
        // brute force over a fine uniform sample of the same interval
        let m = 200_000;
        let brute = (1..m)
            .map(|i| bp[k] + (bp[k + 1] - bp[k]) * i as f64 / m as f64)
            .map(|t| (std::f64::consts::PI / t).sin())
            .fold(f64::NEG_INFINITY, f64::max);
        let got = eval_fn(&ap, 0.0, y).unwrap();
        assert!((got - 1.0).abs() < 1e-6, "{got}");
        assert!((got - brute).abs() < 1e-6);
    }

    #[test]
    fn interval_values_are_constant() {
        let f = rhs("sqrt_plus");
        let ap = ApproxRhs::build(&f, 5, (0.0, 2.0)).unwrap();
        let bp = ap.grid().breakpoints().to_vec();
        for k in 0..bp.len() - 1 {
            let (l, r) = (bp[k], bp[k + 1]);
            let a = eval_fn(&ap, 0.0, l + 0.3 * (r - l)).unwrap();
            let b = eval_fn(&ap, 0.0, l + 0.9 * (r - l)).unwrap();
            assert_eq!(a, b);
            assert!(a >= f.eval(0.0, r) - 1e-6 && a <= f.eval(0.0, r));
        }
    }

    #[test]
    fn probe_of_constant_and_sign() {
        let c = builtin_rhs("const", &[3.0]).unwrap();
        let rows = convergence_probe(&c, &[(0.0, 0.3), (1.0, -0.7)], &[3, 4, 16], (-1.0, 1.0)).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.deviation == 0.0));

        let s = rhs("grande_sign");
        let rows = convergence_probe(&s, &[(0.0, 0.0)], &[1, 2, 3, 5, 64], (-1.0, 1.0)).unwrap();
        assert!(rows.iter().all(|r| r.deviation == 0.0));

        assert!(convergence_probe(&s, &[(0.0, 3.0)], &[1], (-1.0, 1.0)).is_err());
    }

    #[test]
    fn grande_sin_converges_at_point_three() {
        let f = rhs("grande_sin");
        let rows = convergence_probe(&f, &[(0.0, 0.3)], &[16, 256, 4096, 16384], (-1.0, 1.0)).unwrap();
        let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
        assert!(devs[3] < 0.01, "{devs:?}");
        assert!(devs[3] < devs[0]);
    }

    #[test]
    fn superpose_examples() {
        let p = Partition::uniform(-1.0, 1.0, 8).unwrap();
        let zero = GridFunction::constant(&p, 0.0);
        assert!(superpose(&rhs("grande_sign"), &zero).values().iter().all(|&v| v == 1.0));
        let id = GridFunction::from_fn(&p, |x| x);
        assert_eq!(superpose(&rhs("linear"), &id).values(), id.values());
        let sq = GridFunction::from_fn(&p, |x| x * x);
        let h = superpose(&rhs("sqrt_plus"), &sq);
        for (x, v) in p.nodes().iter().zip(h.values()) {
            assert!((v - 2.0 * x.abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn decomposition_examples() {
        let f = rhs("grande_sign");
        let grid = StepGrid::from_breakpoints(2, vec![-0.25, 0.0, 0.25, 0.5, 0.75, 1.0, 1.25], (0.0, 1.0)).unwrap();
        let ap = ApproxRhs::new(f.clone(), grid);
        let p = Partition::uniform(0.0, 1.0, 4).unwrap();

        let on_bp = GridFunction::constant(&p, 0.5);
        let d = decompose_sets(&ap, &on_bp, &[0.0, 0.3, 1.0]).unwrap();
        assert_eq!(d.on_breakpoints.get(&3).map(Vec::len), Some(3));
        assert!(d.in_intervals.is_empty());

        let inside = GridFunction::constant(&p, 0.6);
        let d = decompose_sets(&ap, &inside, &[0.0, 0.3, 1.0]).unwrap();
        assert_eq!(d.in_intervals.get(&3).map(Vec::len), Some(3));

        let id = GridFunction::from_fn(&p, |x| x);
        let samples = [0.1, 0.25, 0.4, 0.5, 0.6];
        let d = decompose_sets(&ap, &id, &samples).unwrap();
        let a_class: Vec<f64> = d.on_breakpoints.values().flatten().map(|&i| samples[i]).collect();
        assert_eq!(a_class, vec![0.25, 0.5]);
        assert_eq!(d.in_intervals.values().map(Vec::len).sum::<usize>(), 3);
        for s in &d.samples {
            assert_eq!(s.value, eval_fn(&ap, s.x, s.y).unwrap());
        }
        assert!(decompose_sets(&ap, &id, &[1.5]).is_err());
    }
}
