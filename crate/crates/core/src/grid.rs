//! Partitions of `[a, b]` and piecewise-linear functions on them.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Strictly ascending nodes `a = x_0 < ... < x_m = b`, `m >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    nodes: Arc<[f64]>,
}

impl Partition {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Shape("a partition needs at least two nodes".into()));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::Shape("partition nodes must be finite".into()));
        }
        if let Some(w) = nodes.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::Shape(format!(
                "partition nodes must be strictly ascending ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Partition { nodes: nodes.into() })
    }

    /// `cells` equal cells on `[a, b]`; the last node is exactly `b`.
    pub fn uniform(a: f64, b: f64, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::Shape("a partition needs at least one cell".into()));
        }
        let h = (b - a) / cells as f64;
        let mut nodes: Vec<f64> = (0..cells).map(|i| a + i as f64 * h).collect();
        nodes.push(b);
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn start(&self) -> f64 {
        self.nodes[0]
    }

    pub fn end(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Index `j` of the cell `[x_j, x_{j+1}]` containing `x` (clamped to the ends).
    pub fn locate(&self, x: f64) -> usize {
        let n = self.nodes.len();
        match self.nodes.partition_point(|&t| t <= x) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        }
    }

    /// Each cell split into `factor` equal parts.
    pub fn refine(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        let mut nodes = Vec::with_capacity(self.cells() * factor + 1);
        for w in self.nodes.windows(2) {
            let h = (w[1] - w[0]) / factor as f64;
            for i in 0..factor {
                nodes.push(w[0] + i as f64 * h);
            }
        }
        nodes.push(self.end());
        Partition { nodes: nodes.into() }
    }
}

/// Piecewise-linear interpolant of nodal values on a partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    partition: Partition,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(partition: Partition, values: Vec<f64>) -> Result<Self> {
        if values.len() != partition.len() {
            return Err(Error::Shape(format!(
                "{} values for a partition of {} nodes",
                values.len(),
                partition.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Shape("grid function values must be finite".into()));
        }
        Ok(GridFunction { partition, values })
    }

    pub(crate) fn from_raw(partition: Partition, values: Vec<f64>) -> Self {
        debug_assert_eq!(partition.len(), values.len());
        GridFunction { partition, values }
    }

    pub fn from_fn(partition: &Partition, f: impl Fn(f64) -> f64) -> Self {
        let values = partition.nodes().iter().map(|&x| f(x)).collect();
        GridFunction {
            partition: partition.clone(),
            values,
        }
    }

    pub fn constant(partition: &Partition, c: f64) -> Self {
        Self::from_fn(partition, |_| c)
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn nodes(&self) -> &[f64] {
        self.partition.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn start_value(&self) -> f64 {
        self.values[0]
    }

    pub fn end_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Linear interpolation; constant extrapolation outside the partition.
    pub fn eval(&self, x: f64) -> f64 {
        let nodes = self.partition.nodes();
        if x <= nodes[0] {
            return self.values[0];
        }
        if x >= self.partition.end() {
            return self.end_value();
        }
        let j = self.partition.locate(x);
        self.eval_in_cell(j, x)
    }

    /// Interpolant restricted to cell `j`.
    #[inline]
    pub fn eval_in_cell(&self, j: usize, x: f64) -> f64 {
        let nodes = self.partition.nodes();
        let (x0, x1) = (nodes[j], nodes[j + 1]);
        let (v0, v1) = (self.values[j], self.values[j + 1]);
        let s = (x - x0) / (x1 - x0);
        v0 + s * (v1 - v0)
    }

    pub fn same_partition(&self, other: &GridFunction) -> bool {
        self.partition == other.partition
    }

    pub(crate) fn check_same(&self, other: &GridFunction) -> Result<()> {
        if self.same_partition(other) {
            Ok(())
        } else {
            Err(Error::Shape("grid functions live on different partitions".into()))
        }
    }

    /// Sup-norm of the nodal difference.
    pub fn sup_distance(&self, other: &GridFunction) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Nodal values interpolated onto another partition.
    pub fn resample(&self, partition: &Partition) -> GridFunction {
        GridFunction::from_fn(partition, |x| self.eval(x))
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        let values = self
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| f(x, v))
            .collect();
        GridFunction {
            partition: self.partition.clone(),
            values,
        }
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<GridFunction> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(GridFunction {
            partition: self.partition.clone(),
            values,
        })
    }
}
