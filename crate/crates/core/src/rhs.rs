//! Right-hand sides `f(x, y)` together with their declared section properties.
//!
//! A right-hand side carries four pieces of data besides its evaluator:
//!
//! * property flags for the vertical sections `y -> f(x, y)`, declared by the
//!   constructor and never inferred (measurability and quasicontinuity cannot
//!   be decided from point evaluations);
//! * a dominating function `phi` with `|f(x, y)| <= phi(x)` on the region
//!   `|y| <= radius(x)`;
//! * a sampler for the countable dense set of heights on which the horizontal
//!   sections are measurable (dyadic rationals by default);
//! * a free-form description of the full-measure set of abscissae on which the
//!   section properties hold.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature;

pub type EvalFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SamplerFn = Arc<dyn Fn(f64, f64, usize) -> Vec<f64> + Send + Sync>;

/// Declared properties of the vertical sections `y -> f(x, y)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SectionProps {
    pub y_usc: bool,
    pub y_quasicontinuous: bool,
    /// Non-decreasing in `y`.
    pub y_increasing: bool,
    pub x_measurable: bool,
    pub y_darboux: bool,
}

/// The dense set of heights used for step-grid breakpoints and sup sampling.
#[derive(Clone)]
pub enum DenseSet {
    Dyadic,
    Custom(SamplerFn),
}

impl DenseSet {
    /// Ascending points of the set strictly inside `(lo, hi)`, at least `count` of them
    /// when the interval is wide enough to hold that many representable points.
    pub fn sample(&self, lo: f64, hi: f64, count: usize) -> Vec<f64> {
        match self {
            DenseSet::Dyadic => dyadic_points(lo, hi, count),
            DenseSet::Custom(f) => f(lo, hi, count),
        }
    }
}

/// Dyadic rationals `k / 2^L` strictly inside `(lo, hi)` at the coarsest level `L`
/// that yields at least `count` points.
pub fn dyadic_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if !(lo < hi) || count == 0 || !lo.is_finite() || !hi.is_finite() {
        return Vec::new();
    }
    let width = hi - lo;
    let mag = lo.abs().max(hi.abs());
    let mut level = ((count as f64 + 1.0) / width).log2().ceil().clamp(-60.0, 1000.0) as i32;
    loop {
        let scale = 2f64.powi(level);
        let first = (lo * scale).floor() + 1.0;
        let last = (hi * scale).ceil() - 1.0;
        let available = (last - first + 1.0).max(0.0);
        // beyond 2^52 the numerators stop being exactly representable
        let exhausted = mag * scale >= 2f64.powi(52) || level >= 1000;
        if available >= count as f64 || exhausted {
            return (first as i64..=last as i64)
                .map(|k| k as f64 / scale)
                .filter(|&t| t > lo && t < hi)
                .collect();
        }
        level += 1;
    }
}

/// A right-hand side `f(x, y)` with its declared analytic data.
#[derive(Clone)]
pub struct Rhs {
    name: String,
    eval: EvalFn,
    phi: ScalarFn,
    radius: ScalarFn,
    props: SectionProps,
    dense: DenseSet,
    measure_note: String,
}

impl fmt::Debug for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rhs")
            .field("name", &self.name)
            .field("props", &self.props)
            .field("measure_note", &self.measure_note)
            .finish_non_exhaustive()
    }
}

impl Rhs {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Rhs {
            name: name.into(),
            eval: Arc::new(eval),
            phi: Arc::new(phi),
            radius: Arc::new(|_| f64::INFINITY),
            props: SectionProps::default(),
            dense: DenseSet::Dyadic,
            measure_note: "section properties hold for every x".to_string(),
        }
    }

    pub fn with_props(mut self, props: SectionProps) -> Self {
        self.props = props;
        self
    }

    /// Restricts the domination claim to `|y| <= radius(x)`.
    pub fn with_region(mut self, radius: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.radius = Arc::new(radius);
        self
    }

    pub fn with_dense_set(mut self, dense: DenseSet) -> Self {
        self.dense = dense;
        self
    }

    pub fn with_measure_note(mut self, note: impl Into<String>) -> Self {
        self.measure_note = note.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    #[inline]
    pub fn phi(&self, x: f64) -> f64 {
        (self.phi)(x)
    }

    /// Half-width of the band `|y| <= radius(x)` on which `|f| <= phi` is claimed.
    pub fn region_radius(&self, x: f64) -> f64 {
        (self.radius)(x)
    }

    pub fn props(&self) -> SectionProps {
        self.props
    }

    pub fn dense_set(&self) -> &DenseSet {
        &self.dense
    }

    pub fn dense_sample(&self, lo: f64, hi: f64, count: usize) -> Vec<f64> {
        self.dense.sample(lo, hi, count)
    }

    pub fn measure_note(&self) -> &str {
        &self.measure_note
    }
}

/// Names accepted by [`builtin_rhs`].
pub const BUILTIN_NAMES: [&str; 6] = ["grande_sign", "grande_sin", "const", "floor", "sqrt_plus", "linear"];

/// Builds one of the shipped right-hand sides.
///
/// `const` takes the constant as its single parameter (default 0). `floor`,
/// `sqrt_plus` and `linear` grow at most like `|y| + 1` and take an optional
/// growth scale `B` (default 1): their dominating function is `B e^x`, claimed
/// on the band `|y| <= B e^x - 1`.
pub fn builtin_rhs(name: &str, params: &[f64]) -> Result<Rhs> {
    let too_many = |max: usize| {
        if params.len() > max {
            Err(Error::Config(format!(
                "builtin `{name}` takes at most {max} parameter(s), got {}",
                params.len()
            )))
        } else {
            Ok(())
        }
    };
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::Config("parameters must be finite".into()));
    }
    let rhs = match name {
        "grande_sign" => {
            too_many(0)?;
            Rhs::new(name, |_, y| if y > 0.0 { -1.0 } else { 1.0 }, |_| 1.0).with_props(SectionProps {
                y_usc: true,
                y_quasicontinuous: true,
                y_increasing: false,
                x_measurable: true,
                y_darboux: false,
            })
        }
        "grande_sin" => {
            too_many(0)?;
            Rhs::new(
                name,
                |_, y| if y > 0.0 { (std::f64::consts::PI / y).sin() } else { 1.0 },
                |_| 1.0,
            )
            .with_props(SectionProps {
                y_usc: true,
                y_quasicontinuous: true,
                y_increasing: false,
                x_measurable: true,
                y_darboux: true,
            })
        }
        "const" => {
            too_many(1)?;
            let c = params.first().copied().unwrap_or(0.0);
            Rhs::new(name, move |_, _| c, move |_| c.abs()).with_props(continuous_increasing())
        }
        "floor" => {
            too_many(1)?;
            let scale = growth_scale(name, params)?;
            growth_rhs(name, scale, |y| y.floor()).with_props(SectionProps {
                y_darboux: false,
                ..continuous_increasing()
            })
        }
        "sqrt_plus" => {
            too_many(1)?;
            let scale = growth_scale(name, params)?;
            growth_rhs(name, scale, |y| 2.0 * y.max(0.0).sqrt()).with_props(continuous_increasing())
        }
        "linear" => {
            too_many(1)?;
            let scale = growth_scale(name, params)?;
            growth_rhs(name, scale, |y| y).with_props(continuous_increasing())
        }
        other => {
            return Err(Error::Config(format!(
                "unknown right-hand side `{other}` (expected one of {})",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    Ok(rhs)
}

/// Whether the builtin takes an optional growth scale as its parameter.
pub fn builtin_has_growth_scale(name: &str) -> bool {
    matches!(name, "floor" | "sqrt_plus" | "linear")
}

/// Smallest growth scale for which the solution funnel of a problem starting at
/// `(a, y0)` stays inside the dominated band.
pub fn growth_scale_for(a: f64, y0: f64) -> f64 {
    (y0.abs() + 1.0) * (-a).exp()
}

fn continuous_increasing() -> SectionProps {
    SectionProps {
        y_usc: true,
        y_quasicontinuous: true,
        y_increasing: true,
        x_measurable: true,
        y_darboux: true,
    }
}

fn growth_scale(name: &str, params: &[f64]) -> Result<f64> {
    let scale = params.first().copied().unwrap_or(1.0);
    if scale <= 0.0 {
        return Err(Error::Config(format!("growth scale of `{name}` must be positive")));
    }
    Ok(scale)
}

fn growth_rhs(name: &str, scale: f64, section: fn(f64) -> f64) -> Rhs {
    Rhs::new(name, move |_, y| section(y), move |x| scale * x.exp())
        .with_region(move |x| scale * x.exp() - 1.0)
}

/// Scalar Cauchy problem `y' = f(x, y)`, `y(a) = y0` on `[a, b]`.
#[derive(Debug, Clone)]
pub struct CauchyProblem {
    pub rhs: Rhs,
    pub a: f64,
    pub b: f64,
    pub y0: f64,
}

impl CauchyProblem {
    /// Validates the interval and checks that the funnel `|y - y0| <= int_a^x phi`
    /// lies inside the band where the right-hand side is dominated.
    pub fn new(rhs: Rhs, a: f64, b: f64, y0: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && y0.is_finite()) {
            return Err(Error::Config("interval and initial value must be finite".into()));
        }
        if !(a < b) {
            return Err(Error::Config(format!("interval [{a}, {b}] must satisfy a < b")));
        }
        let problem = CauchyProblem { rhs, a, b, y0 };
        let checks = 64;
        let mut reach = 0.0;
        let mut prev = a;
        for i in 0..=checks {
            let x = a + (b - a) * i as f64 / checks as f64;
            reach += quadrature::integrate(|t| problem.rhs.phi(t), prev, x, 1e-10).value;
            prev = x;
            let need = y0.abs() + reach;
            let have = problem.rhs.region_radius(x);
            if need > have * (1.0 + 1e-12) + 1e-12 {
                return Err(Error::Config(format!(
                    "`{}` is not dominated on the solution funnel at x = {x}: need |y| <= {need}, dominated only for |y| <= {have}",
                    problem.rhs.name()
                )));
            }
        }
        Ok(problem)
    }

    /// Builds a problem around a builtin, choosing the growth scale automatically
    /// when none is given.
    pub fn builtin(name: &str, params: &[f64], a: f64, b: f64, y0: f64) -> Result<Self> {
        let rhs = if builtin_has_growth_scale(name) && params.is_empty() {
            builtin_rhs(name, &[growth_scale_for(a, y0)])?
        } else {
            builtin_rhs(name, params)?
        };
        Self::new(rhs, a, b, y0)
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }
}

/// Side from which a cluster value was approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UscViolation {
    pub y: f64,
    pub side: Side,
    pub cluster_value: f64,
    pub value: f64,
}

/// Empirical findings of [`probe_section_properties`]. An empty report is not a proof.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PropertyReport {
    pub usc_violations: Vec<UscViolation>,
    /// Consecutive grid pairs `(y1, y2)` with `f(y1) > f(y2) + eps`.
    pub monotonicity_violations: Vec<(f64, f64)>,
    /// Heights where `|f(x, y)| > phi(x) + eps` inside the dominated band.
    pub domination_violations: Vec<f64>,
}

impl PropertyReport {
    pub fn is_clean(&self) -> bool {
        self.usc_violations.is_empty()
            && self.monotonicity_violations.is_empty()
            && self.domination_violations.is_empty()
    }
}

/// Heuristic probe of the vertical section at `x` over an ascending grid.
///
/// One-sided cluster values are estimated from evaluations at `y +- g 2^-k`
/// for `k` in `20..=40`, where `g` is the local grid spacing.
pub fn probe_section_properties(rhs: &Rhs, x: f64, grid: &[f64], eps: f64) -> Result<PropertyReport> {
    if grid.len() < 3 {
        return Err(Error::Precondition("probe grid needs at least 3 points".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Precondition("probe grid must be strictly ascending".into()));
    }
    let mut report = PropertyReport::default();
    let values: Vec<f64> = grid.iter().map(|&y| rhs.eval(x, y)).collect();

    for (i, &y) in grid.iter().enumerate() {
        let left_gap = if i > 0 { y - grid[i - 1] } else { grid[1] - grid[0] };
        let right_gap = if i + 1 < grid.len() { grid[i + 1] - y } else { left_gap };
        for (side, gap, sign) in [(Side::Left, left_gap, -1.0), (Side::Right, right_gap, 1.0)] {
            let cluster = (20..=40)
                .map(|k| rhs.eval(x, y + sign * gap * 2f64.powi(-k)))
                .fold(f64::NEG_INFINITY, f64::max);
            if cluster > values[i] + eps {
                report.usc_violations.push(UscViolation {
                    y,
                    side,
                    cluster_value: cluster,
                    value: values[i],
                });
            }
        }
    }

    for (w, v) in grid.windows(2).zip(values.windows(2)) {
        if v[0] > v[1] + eps {
            report.monotonicity_violations.push((w[0], w[1]));
        }
    }

    let bound = rhs.phi(x);
    let radius = rhs.region_radius(x);
    for (&y, &v) in grid.iter().zip(&values) {
        if y.abs() <= radius && v.abs() > bound + eps {
            report.domination_violations.push(y);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
    }

    #[test]
    fn grande_sign_is_one_at_zero() {
        let f = builtin_rhs("grande_sign", &[]).unwrap();
        assert_eq!(f.eval(0.0, 0.0), 1.0);
        assert_eq!(f.eval(0.0, 1e-300), -1.0);
        assert_eq!(f.eval(0.0, -3.0), 1.0);
    }

    #[test]
    fn grande_sin_peaks_at_two_over_4k_plus_1() {
        let f = builtin_rhs("grande_sin", &[]).unwrap();
        for k in 1..50 {
            let y = 2.0 / (4 * k + 1) as f64;
            assert!((f.eval(0.0, y) - 1.0).abs() < 1e-12, "k = {k}");
        }
        assert_eq!(f.eval(0.0, 0.0), 1.0);
    }

    #[test]
    fn floor_just_below_two() {
        let f = builtin_rhs("floor", &[]).unwrap();
        assert_eq!(f.eval(0.0, 1.999), 1.0);
        assert_eq!(f.eval(0.0, 2.0), 2.0);
    }

    #[test]
    fn unknown_name_and_bad_params() {
        assert!(matches!(builtin_rhs("tanh", &[]), Err(Error::Config(_))));
        assert!(matches!(builtin_rhs("grande_sign", &[1.0]), Err(Error::Config(_))));
        assert!(matches!(builtin_rhs("floor", &[-1.0]), Err(Error::Config(_))));
        assert!(matches!(builtin_rhs("const", &[f64::NAN]), Err(Error::Config(_))));
    }

    #[test]
    fn declared_flags() {
        let sign = builtin_rhs("grande_sign", &[]).unwrap().props();
        assert!(sign.y_usc && sign.y_quasicontinuous && !sign.y_increasing);
        let sin = builtin_rhs("grande_sin", &[]).unwrap().props();
        assert!(sin.y_usc && sin.y_darboux && !sin.y_increasing);
        for name in ["const", "floor", "sqrt_plus", "linear"] {
            assert!(builtin_rhs(name, &[]).unwrap().props().y_increasing, "{name}");
        }
    }

    #[test]
    fn dyadic_points_are_inside_and_dense_enough() {
        let pts = dyadic_points(0.1, 0.35, 40);
        assert!(pts.len() >= 40);
        assert!(pts.iter().all(|&t| t > 0.1 && t < 0.35));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for &t in &pts {
            // exact dyadic: scaling by a power of two gives an integer
            let scaled = t * 2f64.powi(12);
            assert_eq!(scaled, scaled.trunc());
        }
        assert!(dyadic_points(1.0, 1.0, 3).is_empty());
        let neg = dyadic_points(-2.0, -1.5, 3);
        assert!(neg.len() >= 3 && neg.iter().all(|&t| t > -2.0 && t < -1.5));
    }

    #[test]
    fn probe_grande_sign_finds_monotonicity_break_only() {
        let f = builtin_rhs("grande_sign", &[]).unwrap();
        let report = probe_section_properties(&f, 0.0, &grid(-1.0, 1.0, 4), 1e-9).unwrap();
        assert!(report.usc_violations.is_empty());
        assert_eq!(report.monotonicity_violations, vec![(0.0, 0.5)]);
        assert!(report.domination_violations.is_empty());
    }

    #[test]
    fn probe_constant_is_clean() {
        let f = builtin_rhs("const", &[5.0]).unwrap();
        let report = probe_section_properties(&f, 0.3, &grid(-2.0, 2.0, 40), 1e-9).unwrap();
        assert!(report.is_clean());
    }

    #[test]
    fn probe_flags_lower_semicontinuous_jump() {
        // +1 for y > 0, -1 otherwise: the value at 0 sits below the right cluster value.
        let f = Rhs::new("lsc_step", |_, y| if y > 0.0 { 1.0 } else { -1.0 }, |_| 1.0);
        let report = probe_section_properties(&f, 0.0, &grid(-1.0, 1.0, 8), 1e-9).unwrap();
        assert_eq!(report.usc_violations.len(), 1);
        let v = &report.usc_violations[0];
        assert_eq!((v.y, v.side, v.cluster_value, v.value), (0.0, Side::Right, 1.0, -1.0));

        // +1 for y >= 0 is upper semicontinuous at 0; nothing to report.
        let g = Rhs::new("usc_step", |_, y| if y >= 0.0 { 1.0 } else { -1.0 }, |_| 1.0);
        let report = probe_section_properties(&g, 0.0, &grid(-1.0, 1.0, 8), 1e-9).unwrap();
        assert!(report.usc_violations.is_empty());
    }

    #[test]
    fn probe_preconditions() {
        let f = builtin_rhs("const", &[1.0]).unwrap();
        assert!(probe_section_properties(&f, 0.0, &[0.0, 1.0], 1e-9).is_err());
        assert!(probe_section_properties(&f, 0.0, &[0.0, 1.0, 2.0], 0.0).is_err());
        assert!(probe_section_properties(&f, 0.0, &[0.0, 2.0, 1.0], 1e-3).is_err());
    }

    #[test]
    fn problem_validation() {
        let f = builtin_rhs("const", &[1.0]).unwrap();
        assert!(CauchyProblem::new(f.clone(), 1.0, 1.0, 0.0).is_err());
        assert!(CauchyProblem::new(f.clone(), 0.0, f64::INFINITY, 0.0).is_err());
        assert!(CauchyProblem::new(f, 0.0, 1.0, 0.0).is_ok());
        // growth scale too small for y0 = 3
        let lin = builtin_rhs("linear", &[1.0]).unwrap();
        assert!(matches!(CauchyProblem::new(lin, 0.0, 1.0, 3.0), Err(Error::Config(_))));
        let p = CauchyProblem::builtin("linear", &[], 0.0, 1.0, 3.0).unwrap();
        assert!((p.rhs.phi(0.0) - 4.0).abs() < 1e-15);
    }
}
