//! Conditional survival of gaps, sequences and spacings of order statistics.

use super::beta::reg_inc_beta;
use super::density::{m_coeff, OrderStatContext};
use super::model::DistributionModel;
use super::quadrature::integrate_tail;
use crate::error::{Error, Result};
use crate::positivity::{monotone_in_x, CheckMode, CheckReport};

/// `P[X_(j) - X_(i) > y | X_(i) = x]` through the Beta(d-j+1, j-i) cdf.
pub fn gap_survival_closed(
    model: &DistributionModel,
    ctx: &OrderStatContext,
    x: f64,
    y: f64,
) -> Result<f64> {
    let base = conditioning_mass(model, x)?;
    check_gap(y)?;
    let u = (model.sf(x + y) / base).clamp(0.0, 1.0);
    reg_inc_beta(
        u,
        (ctx.d() - ctx.j() + 1) as f64,
        (ctx.j() - ctx.i()) as f64,
    )
}

/// Same quantity as [`gap_survival_closed`], by integrating the conditional
/// density of `X_(j)` given `X_(i) = x` over `[x + y, T]`, with `T` the
/// model's truncation point.
pub fn gap_survival_quadrature(
    model: &DistributionModel,
    ctx: &OrderStatContext,
    x: f64,
    y: f64,
) -> Result<f64> {
    let base = conditioning_mass(model, x)?;
    check_gap(y)?;
    let (d, i, j) = (ctx.d(), ctx.i(), ctx.j());
    // (d-i)! / ((j-i-1)! (d-j)!) = m_coeff(d-i+1, 1, j-i+1) / (d-i+1)
    let c = m_coeff(d - i + 1, 1, j - i + 1)? as f64 / (d - i + 1) as f64;
    let (below, above) = ((j - i - 1) as i32, (d - j) as i32);
    let value = integrate_tail(x + y, model.truncation_point(), |z| {
        let r = (model.sf(z) / base).clamp(0.0, 1.0);
        let f = model.pdf(z);
        if f == 0.0 {
            return 0.0;
        }
        c * (1.0 - r).powi(below) * r.powi(above) * f / base
    })?;
    Ok(value.clamp(0.0, 1.0))
}

fn conditioning_mass(model: &DistributionModel, x: f64) -> Result<f64> {
    let base = model.sf(x);
    if base > 0.0 && x.is_finite() {
        Ok(base)
    } else {
        Err(Error::UndefinedConditioning { at: x })
    }
}

fn check_gap(y: f64) -> Result<()> {
    if y.is_finite() && y >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "gap y must be finite and >= 0, got {y}"
        )))
    }
}

/// PRD of the gap `X_(j) - X_(i)` in `X_(i)`: [`gap_survival_closed`]
/// nondecreasing along `x_grid` for each `y`.
pub fn prd_check(
    model: &DistributionModel,
    ctx: &OrderStatContext,
    x_grid: &[f64],
    y_grid: &[f64],
    tol: f64,
) -> Result<CheckReport> {
    within_support(model, x_grid)?;
    if let Some(y) = y_grid.iter().find(|y| !(y.is_finite() && **y >= 0.0)) {
        return Err(Error::InvalidGrid(format!("y={y} must be finite and >= 0")));
    }
    monotone_in_x(x_grid, y_grid, tol, CheckMode::Prd, |x, y| {
        skip_undefined(gap_survival_closed(model, ctx, x, y))
    })
}

fn within_support(model: &DistributionModel, grid: &[f64]) -> Result<()> {
    let (lo, hi) = model.support();
    match grid.iter().find(|&&x| x < lo || x > hi) {
        Some(x) => Err(Error::InvalidGrid(format!(
            "x={x} lies outside the support [{lo}, {hi}]"
        ))),
        None => Ok(()),
    }
}

fn check_rank(d: usize, i: usize) -> Result<()> {
    if 2 <= i && i <= d {
        Ok(())
    } else {
        Err(Error::InvalidRanks {
            d,
            i: i.saturating_sub(1),
            j: i,
        })
    }
}

/// `P[X_(i) > x | X_(i-1) = prev]`.
pub fn cis_cond_survival(
    model: &DistributionModel,
    d: usize,
    i: usize,
    x: f64,
    prev: f64,
) -> Result<f64> {
    check_rank(d, i)?;
    let base = conditioning_mass(model, prev)?;
    if x < prev {
        return Ok(1.0);
    }
    Ok((model.sf(x) / base)
        .clamp(0.0, 1.0)
        .powi((d - i + 1) as i32))
}

/// `P[D_i > x | D_1, ..., D_(i-1)]` for spacings with partial sum `s`.
pub fn spacing_cond_survival(
    model: &DistributionModel,
    d: usize,
    i: usize,
    x: f64,
    s: f64,
) -> Result<f64> {
    check_rank(d, i)?;
    let base = conditioning_mass(model, s)?;
    if x < 0.0 {
        return Ok(1.0);
    }
    Ok((model.sf(s + x) / base)
        .clamp(0.0, 1.0)
        .powi((d - i + 1) as i32))
}

/// Running state for spacings `D_1 = X_(1)`, `D_i = X_(i) - X_(i-1)`: the
/// rank of the next spacing and the sum of those already observed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingContext {
    d: usize,
    i: usize,
    s: f64,
}

impl SpacingContext {
    /// Context for `D_i` given observed `spacings = [D_1, ..., D_(i-1)]`.
    pub fn new(d: usize, spacings: &[f64]) -> Result<Self> {
        let i = spacings.len() + 1;
        check_rank(d, i)?;
        if let Some(v) = spacings
            .iter()
            .skip(1)
            .find(|v| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::Domain(format!(
                "spacings must be finite and >= 0, got {v}"
            )));
        }
        let s: f64 = spacings.iter().sum();
        if !s.is_finite() {
            return Err(Error::Domain("spacing sum is not finite".into()));
        }
        Ok(Self { d, i, s })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn sum(&self) -> f64 {
        self.s
    }

    /// Records `D_i = x` and moves to rank `i + 1`.
    pub fn push(&mut self, x: f64) -> Result<()> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::Domain(format!(
                "spacing must be finite and >= 0, got {x}"
            )));
        }
        check_rank(self.d, self.i + 1)?;
        self.i += 1;
        self.s += x;
        Ok(())
    }

    pub fn cond_survival(&self, model: &DistributionModel, x: f64) -> Result<f64> {
        spacing_cond_survival(model, self.d, self.i, x, self.s)
    }
}

/// CIS of the sequence: [`cis_cond_survival`] nondecreasing along `prev_grid`
/// for each `x` in `x_grid`.
pub fn cis_check(
    model: &DistributionModel,
    d: usize,
    i: usize,
    prev_grid: &[f64],
    x_grid: &[f64],
    tol: f64,
) -> Result<CheckReport> {
    check_rank(d, i)?;
    monotone_in_x(prev_grid, x_grid, tol, CheckMode::Cis, |prev, x| {
        skip_undefined(cis_cond_survival(model, d, i, x, prev))
    })
}

/// CIS of spacings: [`spacing_cond_survival`] nondecreasing along `s_grid`
/// for each `x` in `x_grid`.
pub fn spacing_check(
    model: &DistributionModel,
    d: usize,
    i: usize,
    s_grid: &[f64],
    x_grid: &[f64],
    tol: f64,
) -> Result<CheckReport> {
    check_rank(d, i)?;
    monotone_in_x(s_grid, x_grid, tol, CheckMode::Cis, |s, x| {
        skip_undefined(spacing_cond_survival(model, d, i, x, s))
    })
}

fn skip_undefined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedConditioning { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}
