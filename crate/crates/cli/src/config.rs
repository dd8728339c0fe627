use std::fmt;
use std::path::{Path, PathBuf};

use carasolve::quadrature::QuadOptions;
use carasolve::SolveOptions;
use serde::Deserialize;

use crate::args::{Common, Format};

pub const DEFAULT_TOL_ITER: f64 = 1e-9;
pub const DEFAULT_TOL_RES: f64 = 1e-6;

/// Bad flags or configuration; exits with 64.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Keys accepted in a `--config` TOML file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub rhs: Option<String>,
    pub params: Option<Vec<f64>>,
    pub y0: Option<f64>,
    pub interval: Option<[f64; 2]>,
    pub grid: Option<usize>,
    pub tol_iter: Option<f64>,
    pub tol_res: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub force_heuristic: Option<bool>,
    pub steps: Option<Vec<f64>>,
    pub n0_max: Option<u64>,
    pub points: Option<usize>,
    pub n_list: Option<Vec<u32>>,
    pub window: Option<[f64; 2]>,
    pub candidate: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Flags merged over the config file. Command-specific keys stay in `file`.
#[derive(Debug)]
pub struct RunConfig {
    pub rhs: Option<String>,
    pub params: Vec<f64>,
    pub y0: Option<f64>,
    pub interval: Option<(f64, f64)>,
    pub grid: Option<usize>,
    pub tol_iter: f64,
    pub tol_res: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub force_heuristic: bool,
    pub file: FileConfig,
}

fn pair(v: &[f64], what: &str) -> anyhow::Result<(f64, f64)> {
    let (lo, hi) = (v[0], v[1]);
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(usage(format!("{what} [{lo}, {hi}] must be finite with LO <= HI")));
    }
    Ok((lo, hi))
}

fn positive(v: f64, what: &str) -> anyhow::Result<f64> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(usage(format!("{what} must be positive, got {v}")));
    }
    Ok(v)
}

impl RunConfig {
    pub fn resolve(c: &Common) -> anyhow::Result<Self> {
        let file = match &c.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let interval = match (&c.interval, file.interval) {
            (Some(v), _) => Some(pair(v, "--interval")?),
            (None, Some(v)) => Some(pair(&v, "interval")?),
            (None, None) => None,
        };
        let grid = c.grid.or(file.grid);
        if grid == Some(0) {
            return Err(usage("--grid must be at least 1"));
        }
        let y0 = c.y0.or(file.y0);
        if y0.is_some_and(|v| !v.is_finite()) {
            return Err(usage("--y0 must be finite"));
        }
        Ok(RunConfig {
            rhs: c.rhs.clone().or_else(|| file.rhs.clone()),
            params: if c.params.is_empty() {
                file.params.clone().unwrap_or_default()
            } else {
                c.params.clone()
            },
            y0,
            interval,
            grid,
            tol_iter: positive(c.tol_iter.or(file.tol_iter).unwrap_or(DEFAULT_TOL_ITER), "--tol-iter")?,
            tol_res: positive(c.tol_res.or(file.tol_res).unwrap_or(DEFAULT_TOL_RES), "--tol-res")?,
            seed: c.seed.or(file.seed).unwrap_or(0),
            out: c.out.clone().or_else(|| file.out.clone()),
            format: c.format.or(file.format).unwrap_or(Format::Csv),
            force_heuristic: c.force_heuristic || file.force_heuristic.unwrap_or(false),
            file,
        })
    }

    pub fn require_rhs(&self) -> anyhow::Result<&str> {
        self.rhs.as_deref().ok_or_else(|| usage("missing --rhs"))
    }

    pub fn require_interval(&self) -> anyhow::Result<(f64, f64)> {
        match self.interval {
            Some((a, b)) if a < b => Ok((a, b)),
            Some((a, b)) => Err(usage(format!("--interval needs LO < HI, got [{a}, {b}]"))),
            None => Err(usage("missing --interval LO HI")),
        }
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol_iter: self.tol_iter,
            tol_res: self.tol_res,
            quad: QuadOptions::default(),
            force_heuristic: self.force_heuristic,
            ..Default::default()
        }
    }

    pub fn steps(&self, flag: &[f64]) -> anyhow::Result<Option<Vec<f64>>> {
        let steps = if flag.is_empty() { self.file.steps.clone() } else { Some(flag.to_vec()) };
        if let Some(s) = &steps {
            if s.is_empty() {
                return Err(usage("--steps needs at least one value"));
            }
            for &h in s {
                positive(h, "every step size")?;
            }
        }
        Ok(steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "rhs = \"floor\"\ny0 = 2.0\ngrid = 64\ninterval = [0.0, 1.0]\n").unwrap();
        let c = Common {
            y0: Some(3.0),
            config: Some(path),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&c).unwrap();
        assert_eq!(cfg.rhs.as_deref(), Some("floor"));
        assert_eq!(cfg.y0, Some(3.0));
        assert_eq!(cfg.grid, Some(64));
        assert_eq!(cfg.interval, Some((0.0, 1.0)));
        assert_eq!(cfg.tol_res, DEFAULT_TOL_RES);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "rhs = \"floor\"\ncolour = 1\n").unwrap();
        let err = FileConfig::load(&path).unwrap_err();
        assert!(err.downcast_ref::<Usage>().is_some());
    }
}
