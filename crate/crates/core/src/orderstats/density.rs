//! Joint densities of order statistics of an i.i.d. sample.

use super::beta::ln_gamma;
use super::model::DistributionModel;
use crate::error::{Error, Result};
use crate::lattice::{Interpretation, LatticeDensity};
use crate::positivity::validate_increasing;

/// Ranks `(i, j)` of a pair of order statistics from a sample of size `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderStatContext {
    d: usize,
    i: usize,
    j: usize,
    m: f64,
}

impl OrderStatContext {
    pub fn new(d: usize, i: usize, j: usize) -> Result<Self> {
        if !(d >= 2 && 1 <= i && i < j && j <= d) {
            return Err(Error::InvalidRanks { d, i, j });
        }
        let m = match m_coeff(d, i, j) {
            Ok(m) => m as f64,
            Err(_) => (ln_gamma(d as f64 + 1.0)
                - ln_gamma(i as f64)
                - ln_gamma((j - i) as f64)
                - ln_gamma((d - j) as f64 + 1.0))
            .exp(),
        };
        Ok(Self { d, i, j, m })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// The multinomial constant as a float.
    pub fn m(&self) -> f64 {
        self.m
    }
}

/// `d! / ((i-1)! (j-i-1)! (d-j)!)`, exactly.
pub fn m_coeff(d: usize, i: usize, j: usize) -> Result<u64> {
    if !(d >= 2 && 1 <= i && i < j && j <= d) {
        return Err(Error::InvalidRanks { d, i, j });
    }
    // Multinomial(d; i-1, 1, j-i-1, 1, d-j) as a product of binomials.
    let (d, i, j) = (d as u128, i as u128, j as u128);
    let value = binomial(d, i - 1)?
        .checked_mul(d - i + 1)
        .and_then(|v| v.checked_mul(binomial(d - i, j - i - 1).ok()?))
        .and_then(|v| v.checked_mul(d - j + 1))
        .ok_or(Error::Overflow("m_coeff"))?;
    u64::try_from(value).map_err(|_| Error::Overflow("m_coeff"))
}

fn binomial(n: u128, k: u128) -> Result<u128> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for t in 1..=k {
        // c * (n - k + t) is divisible by t at every step.
        c = c
            .checked_mul(n - k + t)
            .ok_or(Error::Overflow("binomial"))?
            / t;
    }
    Ok(c)
}

/// Joint density of `(X_(i), X_(j))` at `(x, y)`; zero unless `x <= y`.
pub fn pair_density(model: &DistributionModel, ctx: &OrderStatContext, x: f64, y: f64) -> f64 {
    if x > y {
        return 0.0;
    }
    let (fx, fy) = (model.pdf(x), model.pdf(y));
    let lower = model.cdf(x);
    let middle = (model.sf(x) - model.sf(y)).max(0.0);
    let upper = model.sf(y);
    let factors = [
        lower.powi((ctx.i - 1) as i32),
        middle.powi((ctx.j - ctx.i - 1) as i32),
        upper.powi((ctx.d - ctx.j) as i32),
        fx,
        fy,
    ];
    product_with_zero(ctx.m, &factors)
}

/// Joint density of `(X_(1), ..., X_(k))` at `xs` (`k = xs.len()`), zero
/// off the chain `x_1 <= ... <= x_k`.
pub fn first_k_density(model: &DistributionModel, d: usize, xs: &[f64]) -> Result<f64> {
    let k = xs.len();
    if !(2 <= k && k <= d) {
        return Err(Error::InvalidRanks { d, i: 1, j: k });
    }
    if xs.windows(2).any(|w| w[0] > w[1]) {
        return Ok(0.0);
    }
    let falling: f64 = ((d - k + 1)..=d).map(|v| v as f64).product();
    let mut factors: Vec<f64> = xs.iter().map(|&x| model.pdf(x)).collect();
    factors.push(model.sf(xs[k - 1]).powi((d - k) as i32));
    Ok(product_with_zero(falling, &factors))
}

/// Product where any zero factor wins over infinite ones (0 * inf = 0).
fn product_with_zero(lead: f64, factors: &[f64]) -> f64 {
    if factors.contains(&0.0) {
        0.0
    } else {
        factors.iter().fold(lead, |acc, f| acc * f)
    }
}

/// Samples [`pair_density`] on the product grid `x_grid` x `y_grid`.
pub fn discretize_pair_density(
    model: &DistributionModel,
    ctx: &OrderStatContext,
    x_grid: &[f64],
    y_grid: &[f64],
) -> Result<LatticeDensity> {
    validate_increasing(x_grid, "x grid")?;
    validate_increasing(y_grid, "y grid")?;
    let mut values = Vec::with_capacity(x_grid.len() * y_grid.len());
    for &x in x_grid {
        for &y in y_grid {
            let v = pair_density(model, ctx, x, y);
            if !v.is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "density is not finite at ({x}, {y}); move the grid off the support edge"
                )));
            }
            values.push(v);
        }
    }
    LatticeDensity::new(
        vec![x_grid.to_vec(), y_grid.to_vec()],
        values,
        Interpretation::Density,
    )
}

/// Samples [`first_k_density`] on the product of `grids` (one grid per
/// coordinate, `k = grids.len()`).
pub fn discretize_first_k_density(
    model: &DistributionModel,
    d: usize,
    grids: &[Vec<f64>],
) -> Result<LatticeDensity> {
    for g in grids {
        validate_increasing(g, "grid")?;
    }
    let shape: Vec<usize> = grids.iter().map(Vec::len).collect();
    let n: usize = shape.iter().product();
    let mut values = Vec::with_capacity(n);
    let mut index = vec![0usize; grids.len()];
    let mut point = vec![0.0; grids.len()];
    for _ in 0..n {
        for (k, &i) in index.iter().enumerate() {
            point[k] = grids[k][i];
        }
        let v = first_k_density(model, d, &point)?;
        if !v.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "density is not finite at {point:?}; move the grid off the support edge"
            )));
        }
        values.push(v);
        crate::lattice::advance(&mut index, &shape);
    }
    LatticeDensity::new(grids.to_vec(), values, Interpretation::Density)
}

/// `(F(x') - F(x)) (F(y') - F(y))`, the factor that carries the sign of the
/// PLRD margin.
pub fn plrd_certificate(model: &DistributionModel, x: f64, x2: f64, y: f64, y2: f64) -> f64 {
    (model.sf(x) - model.sf(x2)) * (model.sf(y) - model.sf(y2))
}

/// `h(x', y') h(x, y) - h(x', y) h(x, y')` for the pair density `h`.
///
/// Evaluated in factored form: the common factors of the four densities are
/// pulled out and the remaining bracket is expanded around
/// [`plrd_certificate`], so the result carries no cancellation error.
/// [`plrd_margin_direct`] computes the same quantity naively.
pub fn plrd_margin(
    model: &DistributionModel,
    ctx: &OrderStatContext,
    x: f64,
    x2: f64,
    y: f64,
    y2: f64,
) -> Result<f64> {
    check_quadruple(x, x2, y, y2)?;
    let (i, j, d) = (ctx.i as i32, ctx.j as i32, ctx.d as i32);
    let outer = [
        model.cdf(x).powi(i - 1),
        model.cdf(x2).powi(i - 1),
        model.pdf(x),
        model.pdf(x2),
        model.sf(y).powi(d - j),
        model.sf(y2).powi(d - j),
        model.pdf(y),
        model.pdf(y2),
    ];
    let k = j - i - 1;
    let gap = |a: f64, b: f64| {
        if a > b {
            None
        } else {
            Some((model.sf(a) - model.sf(b)).max(0.0))
        }
    };
    // bracket = B(x,y) B(x',y') - B(x',y) B(x,y') with B(a,b) = gap(a,b)^k.
    let bracket = match (gap(x, y), gap(x2, y2), gap(x2, y), gap(x, y2)) {
        (Some(p1), Some(p2), Some(q1), Some(q2)) => {
            if k == 0 {
                0.0
            } else {
                let p = p1 * p2;
                let q = q1 * q2;
                let cert = plrd_certificate(model, x, x2, y, y2).max(0.0);
                let series: f64 = (0..k).map(|m| p.powi(m) * q.powi(k - 1 - m)).sum();
                cert * series
            }
        }
        (Some(p1), Some(p2), _, _) => (p1 * p2).powi(k),
        _ => 0.0,
    };
    let mut factors = outer.to_vec();
    factors.push(bracket);
    Ok(product_with_zero(ctx.m * ctx.m, &factors))
}

/// Naive evaluation of the PLRD margin from four calls to [`pair_density`].
pub fn plrd_margin_direct(
    model: &DistributionModel,
    ctx: &OrderStatContext,
    x: f64,
    x2: f64,
    y: f64,
    y2: f64,
) -> Result<f64> {
    check_quadruple(x, x2, y, y2)?;
    let h = |a, b| pair_density(model, ctx, a, b);
    Ok(h(x2, y2) * h(x, y) - h(x2, y) * h(x, y2))
}

fn check_quadruple(x: f64, x2: f64, y: f64, y2: f64) -> Result<()> {
    if x <= x2 && y <= y2 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "PLRD quadruple needs x <= x' and y <= y', got x={x}, x'={x2}, y={y}, y'={y2}"
        )))
    }
}
