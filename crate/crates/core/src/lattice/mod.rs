//! Discretized multivariate densities on finite rectangular grids.
//!
//! A [`LatticeDensity`] stores nonnegative values in row-major order over a
//! product of strictly increasing coordinate axes. Cells outside the grid are
//! treated as carrying zero mass. The transformations in [`ops`] act on
//! lattices without mutating them.

mod io;
mod ops;

pub use io::{from_json_str, read_lattice, to_json_string, write_lattice};
pub(crate) use ops::advance;
pub use ops::{marginalize, mixture, product, reflect, relabel_axes, survival_upper};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on the total mass of a pmf lattice.
pub const PMF_MASS_SLACK: f64 = 1e-9;

/// How lattice values are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpretation {
    /// Probability masses; total at most one.
    Pmf,
    /// Pointwise density samples; unnormalized.
    Density,
}

impl Interpretation {
    pub fn as_str(self) -> &'static str {
        match self {
            Interpretation::Pmf => "pmf",
            Interpretation::Density => "density",
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Interpretation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pmf" => Ok(Interpretation::Pmf),
            "density" | "density-samples" => Ok(Interpretation::Density),
            other => Err(Error::InvalidLattice {
                field: "interpretation",
                reason: format!("expected \"pmf\" or \"density\", got {other:?}"),
            }),
        }
    }
}

/// Nonnegative values on a d-dimensional rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDensity {
    shape: Vec<usize>,
    strides: Vec<usize>,
    axes: Vec<Vec<f64>>,
    values: Vec<f64>,
    interpretation: Interpretation,
}

impl LatticeDensity {
    /// Builds a lattice from explicit axes and row-major values, validating
    /// every invariant.
    pub fn new(
        axes: Vec<Vec<f64>>,
        values: Vec<f64>,
        interpretation: Interpretation,
    ) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidLattice {
                field: "shape",
                reason: "lattice needs at least one axis".into(),
            });
        }
        for (k, axis) in axes.iter().enumerate() {
            validate_axis(axis).map_err(|reason| Error::InvalidLattice {
                field: "axes",
                reason: format!("axis {k}: {reason}"),
            })?;
        }
        let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
        let expected = checked_product(&shape).ok_or(Error::InvalidLattice {
            field: "shape",
            reason: "cell count overflows".into(),
        })?;
        if values.len() != expected {
            return Err(Error::InvalidLattice {
                field: "values",
                reason: format!("expected {expected} values, found {}", values.len()),
            });
        }
        if let Some((idx, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidLattice {
                field: "values",
                reason: format!("value {v} at flat index {idx} is not a finite nonnegative number"),
            });
        }
        if interpretation == Interpretation::Pmf {
            let mass: f64 = values.iter().sum();
            if mass > 1.0 + PMF_MASS_SLACK {
                return Err(Error::InvalidLattice {
                    field: "values",
                    reason: format!("pmf mass {mass} exceeds 1"),
                });
            }
        }
        let strides = row_major_strides(&shape);
        Ok(Self {
            shape,
            strides,
            axes,
            values,
            interpretation,
        })
    }

    /// Lattice with integer coordinates `0..n_k` on every axis.
    pub fn from_shape(
        shape: &[usize],
        values: Vec<f64>,
        interpretation: Interpretation,
    ) -> Result<Self> {
        let axes = shape
            .iter()
            .map(|&n| (0..n).map(|v| v as f64).collect())
            .collect();
        Self::new(axes, values, interpretation)
    }

    /// Rescales values so they sum to one and flags the result as a pmf.
    pub fn normalized(&self) -> Result<Self> {
        let mass = self.total_mass();
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::InvalidLattice {
                field: "values",
                reason: "cannot normalize a lattice with zero mass".into(),
            });
        }
        let values = self.values.iter().map(|v| v / mass).collect();
        Self::new(self.axes.clone(), values, Interpretation::Pmf)
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &[f64] {
        &self.axes[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpretation(&self) -> Interpretation {
        self.interpretation
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn flat_index(&self, index: &[usize]) -> usize {
        index.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for (k, &s) in self.strides.iter().enumerate() {
            out[k] = flat / s;
            flat %= s;
        }
        out
    }

    pub fn value_at(&self, index: &[usize]) -> f64 {
        self.values[self.flat_index(index)]
    }

    pub(crate) fn require_pmf(&self, op: &'static str) -> Result<()> {
        if self.interpretation == Interpretation::Pmf {
            Ok(())
        } else {
            Err(Error::NotPmf { op })
        }
    }
}

pub(crate) fn row_major_strides(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    strides
}

fn checked_product(shape: &[usize]) -> Option<usize> {
    shape.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n))
}

fn validate_axis(axis: &[f64]) -> std::result::Result<(), String> {
    if axis.is_empty() {
        return Err("axis is empty".into());
    }
    if let Some(v) = axis.iter().find(|v| !v.is_finite()) {
        return Err(format!("coordinate {v} is not finite"));
    }
    if let Some(w) = axis.windows(2).position(|w| w[0] >= w[1]) {
        return Err(format!(
            "coordinates not strictly increasing at position {} ({} >= {})",
            w + 1,
            axis[w],
            axis[w + 1]
        ));
    }
    Ok(())
}

/// A sign vector in `{+1, -1}^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Direction {
    signs: Vec<i8>,
}

impl Direction {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidDirection("direction is empty".into()));
        }
        if let Some((k, s)) = signs.iter().enumerate().find(|(_, s)| s.abs() != 1) {
            return Err(Error::InvalidDirection(format!(
                "entry {k} is {s}, expected +1 or -1"
            )));
        }
        Ok(Self { signs })
    }

    /// The all-positive direction of length `d`.
    pub fn ones(d: usize) -> Self {
        Self { signs: vec![1; d] }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_flipped(&self, k: usize) -> bool {
        self.signs[k] < 0
    }

    pub fn negated(&self) -> Self {
        Self {
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// Concatenation `(alpha, beta)`.
    pub fn concat(&self, other: &Direction) -> Self {
        let mut signs = self.signs.clone();
        signs.extend_from_slice(&other.signs);
        Self { signs }
    }

    /// Restriction to the listed axes, in the listed order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let signs = keep
            .iter()
            .map(|&k| {
                self.signs.get(k).copied().ok_or_else(|| {
                    Error::InvalidAxisSet(format!("axis {k} out of range for dim {}", self.dim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }

    /// Every direction of length `d`, in binary counting order.
    pub fn all(d: usize) -> impl Iterator<Item = Direction> {
        (0..1u64 << d).map(move |mask| Direction {
            signs: (0..d)
                .map(|k| if mask >> k & 1 == 1 { -1 } else { 1 })
                .collect(),
        })
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim() == d {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: d,
                found: self.dim(),
            })
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .signs
            .iter()
            .map(|&s| if s > 0 { "+1" } else { "-1" })
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Direction {
    type Err = Error;

    /// Parses `"+1,-1,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .split(',')
            .map(|part| match part.trim() {
                "+1" | "1" | "+" => Ok(1),
                "-1" | "-" => Ok(-1),
                other => Err(Error::InvalidDirection(format!(
                    "cannot parse {other:?} as +1 or -1"
                ))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(signs)
    }
}

/// Replacement coordinate vectors, one per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisRelabel {
    axes: Vec<Vec<f64>>,
}

impl AxisRelabel {
    pub fn new(axes: Vec<Vec<f64>>) -> Result<Self> {
        for (k, axis) in axes.iter().enumerate() {
            validate_axis(axis)
                .map_err(|reason| Error::InvalidRelabel(format!("axis {k}: {reason}")))?;
        }
        Ok(Self { axes })
    }

    /// Applies `map(k, x)` to every coordinate of every axis of `density`.
    pub fn from_fn(density: &LatticeDensity, map: impl Fn(usize, f64) -> f64) -> Result<Self> {
        Self::new(
            density
                .axes()
                .iter()
                .enumerate()
                .map(|(k, axis)| axis.iter().map(|&x| map(k, x)).collect())
                .collect(),
        )
    }

    pub fn identity(density: &LatticeDensity) -> Self {
        Self {
            axes: density.axes().to_vec(),
        }
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }
}
