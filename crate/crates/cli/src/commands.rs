use std::io::Write;
use std::path::Path;

use anyhow::Context;
use carasolve::quadrature::QuadOptions;
use carasolve::scenarios::{self, NonexistenceReport, PositiveReport, SignDemo, SinDemo};
use carasolve::solver::ResidualReport;
use carasolve::{
    convergence_probe, residual, ProbeRow, solve, verify_subsolution, CauchyProblem, Error, Partition, SolveOptions,
    SolveResult, SubsolutionReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{ApproxArgs, Common, DemoCommand, Format, SignArgs, SinArgs, SolveArgs, VerifyArgs};
use crate::config::{usage, RunConfig};
use crate::output::{ensure_dir, print_json, write_json, Table};

pub const DEFAULT_GRID: usize = 1024;
pub const DEFAULT_N_LIST: [u32; 5] = [16, 64, 256, 512, 1024];
pub const DEFAULT_POINTS: usize = 100;
pub const DEFAULT_WINDOW: (f64, f64) = (-2.0, 2.0);

pub const EXIT_OK: u8 = 0;
/// Ran to completion but could not certify the result or a check failed.
pub const EXIT_UNCERTIFIED: u8 = 2;

/// What a problem was run with, echoed into every report.
#[derive(Serialize)]
struct ProblemEcho<'a> {
    rhs: &'a str,
    params: &'a [f64],
    interval: [f64; 2],
    y0: f64,
    grid: usize,
    seed: u64,
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    certified: bool,
    converged: bool,
    monotone: bool,
    iterations: usize,
    fixed_point_residual: f64,
    quad_err: f64,
    gap: Option<f64>,
    z0_end: f64,
    minimal_end: Option<f64>,
    subsolution: &'a SubsolutionReport,
    options: SolveOptions,
}

impl<'a> SolveSummary<'a> {
    fn new(r: &'a SolveResult, options: SolveOptions) -> Self {
        SolveSummary {
            certified: r.certified,
            converged: r.converged,
            monotone: r.monotone,
            iterations: r.iterations,
            fixed_point_residual: r.fixed_point_residual,
            quad_err: r.quad_err,
            gap: r.gap,
            z0_end: r.z0.end_value(),
            minimal_end: r.minimal.as_ref().map(|m| m.end_value()),
            subsolution: &r.subsolution_report,
            options,
        }
    }
}

fn uncertified_reason(r: &SolveResult, opts: &SolveOptions) -> String {
    let mut why = Vec::new();
    if opts.force_heuristic {
        why.push("heuristic mode".to_string());
    }
    if !r.converged {
        why.push(format!("no convergence in {} iterations", r.iterations));
    }
    if !r.monotone {
        why.push("iterates not monotone".into());
    }
    if r.fixed_point_residual > opts.tol_res + r.quad_err {
        why.push(format!("fixed-point residual {:.3e}", r.fixed_point_residual));
    }
    if !r.subsolution_report.member {
        why.push(format!("sub-solution margin {:.3e}", r.subsolution_report.worst_margin));
    }
    if why.is_empty() {
        why.push("minimal iteration did not converge monotonically".into());
    }
    why.join(", ")
}

pub fn solve_cmd(args: &SolveArgs) -> anyhow::Result<u8> {
    let cfg = RunConfig::resolve(&args.common)?;
    let rhs = cfg.require_rhs()?;
    let (a, b) = cfg.require_interval()?;
    let y0 = cfg.y0.unwrap_or(0.0);
    let grid = cfg.grid.unwrap_or(DEFAULT_GRID);
    let problem = CauchyProblem::builtin(rhs, &cfg.params, a, b, y0)?;
    let partition = Partition::uniform(a, b, grid)?;
    let opts = cfg.solve_options();
    let result = match solve(&problem, &partition, &opts) {
        Err(Error::NotCertifiable(msg)) => {
            eprintln!("NON-CERTIFIED: {msg} (--force-heuristic)");
            return Ok(EXIT_UNCERTIFIED);
        }
        other => other?,
    };

    #[derive(Serialize)]
    struct Report<'a> {
        problem: ProblemEcho<'a>,
        result: SolveSummary<'a>,
    }
    let report = Report {
        problem: ProblemEcho {
            rhs,
            params: &cfg.params,
            interval: [a, b],
            y0,
            grid,
            seed: cfg.seed,
        },
        result: SolveSummary::new(&result, opts),
    };
    match &cfg.out {
        Some(dir) => {
            ensure_dir(dir)?;
            write_json(&dir.join("result.json"), &report)?;
            let minimal = result.minimal.as_ref().expect("solve fills the minimal solution");
            Table {
                header: vec!["x", "z0", "minimal", "envelope_lo", "envelope_hi"],
                columns: vec![
                    result.z0.nodes(),
                    result.z0.values(),
                    minimal.values(),
                    result.envelopes.lower.values(),
                    result.envelopes.upper.values(),
                ],
            }
            .write_file(dir, "trajectory", cfg.format)?;
        }
        None => print_json(&report)?,
    }
    if result.certified {
        Ok(EXIT_OK)
    } else {
        eprintln!("NON-CERTIFIED: {}", uncertified_reason(&result, &opts));
        Ok(EXIT_UNCERTIFIED)
    }
}

pub fn approx_cmd(args: &ApproxArgs) -> anyhow::Result<u8> {
    let cfg = RunConfig::resolve(&args.common)?;
    let rhs = carasolve::builtin_rhs(cfg.require_rhs()?, &cfg.params)?;
    let window = match (&args.window, cfg.file.window) {
        (Some(w), _) => (w[0], w[1]),
        (None, Some(w)) => (w[0], w[1]),
        (None, None) => DEFAULT_WINDOW,
    };
    if !(window.0 < window.1) || !window.0.is_finite() || !window.1.is_finite() {
        return Err(usage(format!("--window needs finite LO < HI, got [{}, {}]", window.0, window.1)));
    }
    let n_list = if args.n_list.is_empty() {
        cfg.file.n_list.clone().unwrap_or_else(|| DEFAULT_N_LIST.to_vec())
    } else {
        args.n_list.clone()
    };
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(usage("--n-list entries must be positive"));
    }
    let (xa, xb) = cfg.interval.unwrap_or((0.0, 0.0));
    let points: Vec<(f64, f64)> = if !args.at.is_empty() {
        args.at.iter().map(|&y| (xa, y)).collect()
    } else {
        let count = args.points.or(cfg.file.points).unwrap_or(DEFAULT_POINTS);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..count)
            .map(|_| {
                let x = if xb > xa { rng.gen_range(xa..xb) } else { xa };
                (x, rng.gen_range(window.0..window.1))
            })
            .collect()
    };
    let rows = convergence_probe(&rhs, &points, &n_list, window)?;
    match &cfg.out {
        Some(dir) => {
            ensure_dir(dir)?;
            let path = dir.join(match cfg.format {
                Format::Csv => "approx.csv",
                Format::Json => "approx.json",
            });
            let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_probe(std::io::BufWriter::new(file), &rows, cfg.format)?;
        }
        None => write_probe(std::io::stdout().lock(), &rows, cfg.format)?,
    }
    Ok(EXIT_OK)
}

fn write_probe<W: Write>(mut w: W, rows: &[ProbeRow], format: Format) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "x,y,n,deviation")?;
            for r in rows {
                writeln!(w, "{:.16e},{:.16e},{},{:.16e}", r.x, r.y, r.n, r.deviation)?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn verify_cmd(args: &VerifyArgs) -> anyhow::Result<u8> {
    let cfg = RunConfig::resolve(&args.common)?;
    let name = cfg.require_rhs()?;
    let path = args
        .candidate
        .clone()
        .or_else(|| cfg.file.candidate.clone())
        .ok_or_else(|| usage("missing --candidate FILE"))?;
    let file = std::fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?;
    let z = carasolve::io::read_trajectory(std::io::BufReader::new(file))
        .with_context(|| format!("reading {}", path.display()))?;
    let (a, b) = cfg.interval.unwrap_or((z.partition().start(), z.partition().end()));
    let y0 = cfg.y0.unwrap_or(z.start_value());
    let problem = CauchyProblem::builtin(name, &cfg.params, a, b, y0)?;
    let quad = QuadOptions::default();
    let report = verify_subsolution(&problem, &z, cfg.tol_res, &quad)?;
    let res = residual(&problem, &z, &quad);

    #[derive(Serialize)]
    struct Report<'a> {
        problem: ProblemEcho<'a>,
        candidate: String,
        subsolution: SubsolutionReport,
        residual: ResidualReport,
    }
    let member = report.member;
    let out = Report {
        problem: ProblemEcho {
            rhs: name,
            params: &cfg.params,
            interval: [a, b],
            y0,
            grid: z.partition().cells(),
            seed: cfg.seed,
        },
        candidate: path.display().to_string(),
        subsolution: report,
        residual: res,
    };
    match &cfg.out {
        Some(dir) => {
            ensure_dir(dir)?;
            write_json(&dir.join("verify.json"), &out)?;
        }
        None => print_json(&out)?,
    }
    Ok(if member { EXIT_OK } else { EXIT_UNCERTIFIED })
}

pub fn demo_cmd(cmd: &DemoCommand) -> anyhow::Result<u8> {
    match cmd {
        DemoCommand::Sign(a) => demo_sign(a),
        DemoCommand::Sin(a) => demo_sin(a),
        DemoCommand::Positive(c) => demo_positive(c),
    }
}

fn print_checks(checks: &[scenarios::Check]) {
    for c in checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
}

fn finish_nonexistence(report: &NonexistenceReport, out: Option<&Path>, format: Format) -> anyhow::Result<u8> {
    if let Some(dir) = out {
        ensure_dir(dir)?;
        write_json(&dir.join("report.json"), report)?;
        for (label, y) in &report.trajectories {
            Table {
                header: vec!["x", "y"],
                columns: vec![y.nodes(), y.values()],
            }
            .write_file(dir, &format!("trajectory_{label}"), format)?;
        }
    }
    for r in &report.residual_by_candidate {
        println!("residual {}: {:.6e} at x = {}", r.label, r.sup_residual, r.argmax_x);
    }
    for e in &report.band_events {
        println!(
            "band {}: n0 = {}, (a, b) = ({}, {}), defect {:.6e} >= {:.6e}",
            e.candidate, e.n0, e.a, e.b, e.defect, e.bound
        );
    }
    print_checks(&report.checks);
    println!("verdict: {}", report.verdict);
    Ok(if report.all_checks_pass() { EXIT_OK } else { EXIT_UNCERTIFIED })
}

fn demo_sign(args: &SignArgs) -> anyhow::Result<u8> {
    let cfg = RunConfig::resolve(&args.common)?;
    let (lo, hi) = cfg.interval.unwrap_or((0.0, 1.0));
    let mut demo = SignDemo {
        x0: lo,
        y0: cfg.y0.unwrap_or(0.0),
        length: hi - lo,
        ..Default::default()
    };
    if let Some(s) = cfg.steps(&args.steps)? {
        demo.steps = s;
    }
    if let Some(g) = cfg.grid {
        demo.grid = g;
    }
    let report = scenarios::demo_sign(&demo)?;
    finish_nonexistence(&report, cfg.out.as_deref(), cfg.format)
}

fn demo_sin(args: &SinArgs) -> anyhow::Result<u8> {
    let cfg = RunConfig::resolve(&args.common)?;
    let (lo, hi) = cfg.interval.unwrap_or((0.0, 1.0));
    if lo != 0.0 || cfg.y0.is_some_and(|y| y != 0.0) {
        return Err(usage("demo sin starts at x = 0, y = 0; use --interval 0 L"));
    }
    let mut demo = SinDemo {
        length: hi,
        ..Default::default()
    };
    if let Some(s) = cfg.steps(&args.steps)? {
        demo.steps = s;
    }
    if let Some(g) = cfg.grid {
        demo.grid = g;
    }
    if let Some(n) = args.n0_max.or(cfg.file.n0_max) {
        demo.n0_max = n;
    }
    let report = scenarios::demo_sin(&demo)?;
    finish_nonexistence(&report, cfg.out.as_deref(), cfg.format)
}

/// Defaults of `demo positive`: parameters, initial value, interval, grid.
pub fn positive_defaults(name: &str) -> (Vec<f64>, f64, (f64, f64), usize) {
    match name {
        "floor" => (vec![], 1.0, (0.0, 11.0 / 6.0), 32768),
        "sqrt_plus" => (vec![], 0.0, (0.0, 1.0), 4096),
        "linear" => (vec![], 1.0, (0.0, 1.0), 8192),
        "const" => (vec![1.0], 0.0, (0.0, 1.0), 256),
        _ => (vec![], 0.0, (0.0, 1.0), DEFAULT_GRID),
    }
}

fn demo_positive(common: &Common) -> anyhow::Result<u8> {
    let cfg = RunConfig::resolve(common)?;
    let name = cfg.rhs.clone().unwrap_or_else(|| "floor".to_string());
    let (dparams, dy0, dint, dgrid) = positive_defaults(&name);
    let params = if cfg.params.is_empty() { dparams } else { cfg.params.clone() };
    let (a, b) = match cfg.interval {
        Some(_) => cfg.require_interval()?,
        None => dint,
    };
    let y0 = cfg.y0.unwrap_or(dy0);
    let grid = cfg.grid.unwrap_or(dgrid);
    let opts = cfg.solve_options();
    let report = scenarios::demo_positive(&name, &params, a, b, y0, grid, &opts)?;

    #[derive(Serialize)]
    struct Out<'a> {
        problem: ProblemEcho<'a>,
        result: SolveSummary<'a>,
        max_deviation: f64,
        min_deviation: f64,
        tolerances: scenarios::PositiveTolerances,
        checks: &'a [scenarios::Check],
    }
    let r: &PositiveReport = &report;
    let out = Out {
        problem: ProblemEcho {
            rhs: &name,
            params: &params,
            interval: [a, b],
            y0,
            grid,
            seed: cfg.seed,
        },
        result: SolveSummary::new(&r.result, opts),
        max_deviation: r.max_deviation,
        min_deviation: r.min_deviation,
        tolerances: r.tolerances,
        checks: &r.checks,
    };
    if let Some(dir) = &cfg.out {
        ensure_dir(dir)?;
        write_json(&dir.join("report.json"), &out)?;
        let minimal = r.result.minimal.as_ref().expect("solve fills the minimal solution");
        Table {
            header: vec!["x", "z0", "minimal", "oracle_maximal", "oracle_minimal"],
            columns: vec![
                r.result.z0.nodes(),
                r.result.z0.values(),
                minimal.values(),
                r.oracle_maximal.values(),
                r.oracle_minimal.values(),
            ],
        }
        .write_file(dir, "trajectory", cfg.format)?;
    }
    println!(
        "{name}: max deviation {:.3e}, min deviation {:.3e}, {} iterations",
        r.max_deviation, r.min_deviation, r.result.iterations
    );
    print_checks(&r.checks);
    Ok(if r.all_checks_pass() { EXIT_OK } else { EXIT_UNCERTIFIED })
}
