use super::report::{CheckMode, CheckReport, Verdict, Witness};
use crate::error::{Error, Result};
use crate::orderstats::DistributionModel;

/// Checks that `eval(x, y)` is nondecreasing along `x_grid` for every `y`.
///
/// `eval` returns `None` where the function is undefined; those points are
/// skipped and counted, and the comparison bridges to the next defined point.
/// A forward difference below `-tol` is a violation.
pub fn monotone_in_x(
    x_grid: &[f64],
    y_grid: &[f64],
    tol: f64,
    mode: CheckMode,
    eval: impl Fn(f64, f64) -> Result<Option<f64>>,
) -> Result<CheckReport> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    validate_increasing(x_grid, "x grid")?;
    if y_grid.is_empty() {
        return Err(Error::InvalidGrid("y grid is empty".into()));
    }

    let mut min_margin = f64::INFINITY;
    let mut witness = None;
    let mut count = 0;
    let mut skipped = 0;
    let mut notes = Vec::new();
    for &y in y_grid {
        let mut prev: Option<(f64, f64)> = None;
        for &x in x_grid {
            let Some(value) = eval(x, y)? else {
                skipped += 1;
                notes.push(format!("skipped x={x}, y={y}: undefined conditioning"));
                continue;
            };
            if let Some((px, pv)) = prev {
                let diff = value - pv;
                count += 1;
                min_margin = min_margin.min(diff);
                if diff < -tol && witness.is_none() {
                    witness = Some(Witness {
                        coords: vec![px, x, y],
                        lhs: value,
                        rhs: pv,
                        ..Witness::default()
                    });
                }
            }
            prev = Some((x, value));
        }
    }
    Ok(CheckReport {
        verdict: if witness.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        mode,
        min_margin,
        tolerance: tol,
        quadruples_checked: count,
        log_domain: false,
        witness,
        skipped,
        notes,
    })
}

/// Decreasing failure rate: `sf(x + y) / sf(x)` nondecreasing in `x` for
/// every `y >= 0` on the grids.
pub fn dfr_check(
    model: &DistributionModel,
    x_grid: &[f64],
    y_grid: &[f64],
    tol: f64,
) -> Result<CheckReport> {
    let (lo, hi) = model.support();
    if let Some(x) = x_grid.iter().find(|&&x| x < lo || x > hi) {
        return Err(Error::InvalidGrid(format!(
            "x={x} lies outside the support [{lo}, {hi}]"
        )));
    }
    if let Some(y) = y_grid.iter().find(|y| !(y.is_finite() && **y >= 0.0)) {
        return Err(Error::InvalidGrid(format!("y={y} must be finite and >= 0")));
    }
    monotone_in_x(x_grid, y_grid, tol, CheckMode::Dfr, |x, y| {
        let base = model.sf(x);
        Ok((base > 0.0).then(|| model.sf(x + y) / base))
    })
}

pub(crate) fn validate_increasing(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid(format!("{what} is empty")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid(format!("{what} has non-finite points")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(format!(
            "{what} is not strictly increasing"
        )));
    }
    Ok(())
}
