//! Directional total positivity checks on lattices, plus monotonicity checks
//! for survival-ratio functions.
//!
//! The three lattice checkers ([`check_pairs`], [`check_full`],
//! [`check_chain`]) decide the same property through different inequality
//! families and are expected to agree on every verdict outside the tolerance
//! band.

mod function;
mod report;
mod scan;

pub(crate) use function::validate_increasing;
pub use function::{dfr_check, monotone_in_x};
pub use report::{CheckMode, CheckReport, Verdict, Witness};

use crate::error::{Error, Result};
use crate::lattice::{reflect, survival_upper, Direction, LatticeDensity};
use scan::{Comparator, Grid, Sense, Tally};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_FULL_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub tol: f64,
    pub log_domain: bool,
    /// Largest number of point pairs [`check_full`] will visit.
    pub full_budget: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOLERANCE,
            log_domain: false,
            full_budget: DEFAULT_FULL_BUDGET,
        }
    }
}

impl CheckOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn log_domain(mut self, on: bool) -> Self {
        self.log_domain = on;
        self
    }

    pub fn full_budget(mut self, budget: u64) -> Self {
        self.full_budget = budget;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.tol.is_finite() && self.tol >= 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidTolerance(self.tol))
        }
    }

    fn comparator(&self, sense: Sense) -> Comparator {
        Comparator {
            tol: self.tol,
            log_domain: self.log_domain,
            sense,
        }
    }
}

/// Pairwise (coordinate-plane) directional TP2 check.
pub fn check_pairs(
    density: &LatticeDensity,
    alpha: &Direction,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    lattice_check(
        density,
        alpha,
        opts,
        CheckMode::Pairs,
        Sense::Positive,
        scan::scan_pairs,
    )
}

/// Join/meet check over all point pairs. Quadratic in the cell count and
/// guarded by `opts.full_budget`.
pub fn check_full(
    density: &LatticeDensity,
    alpha: &Direction,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    let n = density.len() as u128;
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs > opts.full_budget as u128 {
        return Err(Error::BudgetExceeded {
            pairs,
            budget: opts.full_budget,
        });
    }
    lattice_check(
        density,
        alpha,
        opts,
        CheckMode::Full,
        Sense::Positive,
        scan::scan_full,
    )
}

/// Prefix/suffix splice check over ordered point pairs.
pub fn check_chain(
    density: &LatticeDensity,
    alpha: &Direction,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    lattice_check(
        density,
        alpha,
        opts,
        CheckMode::Chain,
        Sense::Positive,
        scan::scan_chain,
    )
}

/// Pairwise check with every inequality reversed (negative dependence).
pub fn check_negative(
    density: &LatticeDensity,
    alpha: &Direction,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    lattice_check(
        density,
        alpha,
        opts,
        CheckMode::Negative,
        Sense::Negative,
        scan::scan_pairs,
    )
}

/// Pairwise check with direction `1` on the upper survival array of the
/// reflected pmf.
pub fn check_survival(
    density: &LatticeDensity,
    alpha: &Direction,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    opts.validate()?;
    density.require_pmf("check_survival")?;
    let reflected = reflect(density, alpha)?;
    let surv = survival_upper(&reflected)?;
    let flipped = vec![false; surv.dim()];
    let grid = Grid {
        shape: surv.shape(),
        strides: surv.strides(),
        flipped: &flipped,
    };
    let cmp = opts.comparator(Sense::Positive);
    let tally = scan::scan_pairs(&cmp.prepare(surv.values()), &grid, &cmp);
    Ok(finish(tally, CheckMode::Survival, opts))
}

/// Runs the checker selected by `mode`. Function modes (`dfr`, `prd`) are not
/// lattice checks and are rejected.
pub fn check(
    density: &LatticeDensity,
    alpha: &Direction,
    mode: CheckMode,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    match mode {
        CheckMode::Pairs => check_pairs(density, alpha, opts),
        CheckMode::Full => check_full(density, alpha, opts),
        CheckMode::Chain => check_chain(density, alpha, opts),
        CheckMode::Survival => check_survival(density, alpha, opts),
        CheckMode::Negative => check_negative(density, alpha, opts),
        CheckMode::Dfr | CheckMode::Prd | CheckMode::Cis => {
            Err(Error::Domain(format!("{mode} is not a lattice check")))
        }
    }
}

fn lattice_check(
    density: &LatticeDensity,
    alpha: &Direction,
    opts: &CheckOptions,
    mode: CheckMode,
    sense: Sense,
    scanner: fn(&[f64], &Grid<'_>, &Comparator) -> Tally,
) -> Result<CheckReport> {
    opts.validate()?;
    alpha.check_dim(density.dim())?;
    let reflected = reflect(density, alpha)?;
    let flipped: Vec<bool> = (0..alpha.dim()).map(|k| alpha.is_flipped(k)).collect();
    let grid = Grid {
        shape: reflected.shape(),
        strides: reflected.strides(),
        flipped: &flipped,
    };
    let cmp = opts.comparator(sense);
    let tally = scanner(&cmp.prepare(reflected.values()), &grid, &cmp);
    Ok(finish(tally, mode, opts))
}

fn finish(tally: Tally, mode: CheckMode, opts: &CheckOptions) -> CheckReport {
    CheckReport {
        verdict: if tally.first.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        mode,
        min_margin: tally.min_margin,
        tolerance: opts.tol,
        quadruples_checked: tally.count,
        log_domain: opts.log_domain,
        witness: tally.first,
        skipped: 0,
        notes: Vec::new(),
    }
}
