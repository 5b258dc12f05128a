//! Property suites behind `totpos verify`: each runs a family of checks and
//! reports pass/fail per sub-check.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate;
use crate::lattice::{Direction, LatticeDensity};
use crate::orderstats::quadrature::integrate_tail;
use crate::orderstats::{
    cis_check, cis_cond_survival, discretize_pair_density, first_k_density, gap_survival_closed,
    gap_survival_quadrature, plrd_margin, prd_check, spacing_check, spacing_cond_survival,
    DistributionModel, OrderStatContext,
};
use crate::positivity::{
    check_chain, check_full, check_pairs, check_survival, dfr_check, CheckOptions, CheckReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Plrd,
    Prd,
    Cis,
    CisSpacing,
    Dfr,
    BetaIdentity,
    Equivalence,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Plrd,
        Property::Prd,
        Property::Cis,
        Property::CisSpacing,
        Property::Dfr,
        Property::BetaIdentity,
        Property::Equivalence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::Plrd => "plrd",
            Property::Prd => "prd",
            Property::Cis => "cis",
            Property::CisSpacing => "cis-spacing",
            Property::Dfr => "dfr",
            Property::BetaIdentity => "beta-identity",
            Property::Equivalence => "equivalence",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Property::ALL.iter().map(|p| p.as_str()).collect();
                Error::Domain(format!(
                    "unknown property {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Parameters shared by the suites. Unset fields fall back to per-suite
/// defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Run against this model only.
    pub model: Option<DistributionModel>,
    /// Fixed `(d, i, j)`.
    pub ranks: Option<(usize, usize, usize)>,
    pub trials: usize,
    pub shape: Vec<usize>,
    pub seed: u64,
    pub tol: f64,
    pub x_grid: Option<Vec<f64>>,
    pub y_grid: Option<Vec<f64>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            model: None,
            ranks: None,
            trials: 200,
            shape: vec![3, 3, 3],
            seed: 42,
            tol: 1e-12,
            x_grid: None,
            y_grid: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<CheckReport>,
}

impl SubCheck {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
            report: None,
        }
    }

    fn from_report(name: impl Into<String>, report: CheckReport) -> Self {
        let detail = format!(
            "{} comparisons, min margin {:e}",
            report.quadruples_checked, report.min_margin
        );
        Self {
            name: name.into(),
            passed: report.passed(),
            detail,
            report: Some(report),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub property: String,
    pub passed: bool,
    pub checks: Vec<SubCheck>,
}

impl VerifySummary {
    fn new(property: Property, checks: Vec<SubCheck>) -> Self {
        Self {
            property: property.as_str().into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

pub fn run(property: Property, cfg: &VerifyConfig) -> Result<VerifySummary> {
    let checks = match property {
        Property::Plrd => plrd_suite(cfg)?,
        Property::Prd => prd_suite(cfg)?,
        Property::Cis => cis_suite(cfg)?,
        Property::CisSpacing => spacing_suite(cfg)?,
        Property::Dfr => dfr_suite(cfg)?,
        Property::BetaIdentity => beta_suite(cfg)?,
        Property::Equivalence => equivalence_suite(cfg)?,
    };
    Ok(VerifySummary::new(property, checks))
}

fn parse_models(specs: &[&str]) -> Vec<DistributionModel> {
    specs
        .iter()
        .map(|s| s.parse().expect("built-in model spec"))
        .collect()
}

/// Models for properties that hold for every distribution.
pub fn universal_models() -> Vec<DistributionModel> {
    parse_models(&["uniform:0,1", "exp:1", "weibull:0.5,1", "weibull:2,1"])
}

/// DFR models, for which the DFR-conditional properties are expected.
pub fn dfr_models() -> Vec<DistributionModel> {
    parse_models(&["exp:1", "pareto:1,2", "weibull:0.5,1"])
}

fn models_or(cfg: &VerifyConfig, fallback: Vec<DistributionModel>) -> Vec<DistributionModel> {
    cfg.model.map_or(fallback, |m| vec![m])
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

/// 50 points between the 1% and 95% quantiles.
pub fn default_x_grid(model: &DistributionModel) -> Vec<f64> {
    linspace(model.quantile(0.01), model.quantile(0.95), 50)
}

pub const DEFAULT_Y_GRID: [f64; 5] = [0.1, 0.25, 0.5, 1.0, 2.0];

fn x_grid(cfg: &VerifyConfig, model: &DistributionModel) -> Vec<f64> {
    cfg.x_grid.clone().unwrap_or_else(|| default_x_grid(model))
}

fn y_grid(cfg: &VerifyConfig) -> Vec<f64> {
    cfg.y_grid
        .clone()
        .unwrap_or_else(|| DEFAULT_Y_GRID.to_vec())
}

fn rng(cfg: &VerifyConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed)
}

fn dfr_suite(cfg: &VerifyConfig) -> Result<Vec<SubCheck>> {
    models_or(cfg, dfr_models())
        .iter()
        .map(|m| {
            let r = dfr_check(m, &x_grid(cfg, m), &y_grid(cfg), cfg.tol)?;
            Ok(SubCheck::from_report(format!("dfr {m}"), r))
        })
        .collect()
}

fn prd_suite(cfg: &VerifyConfig) -> Result<Vec<SubCheck>> {
    let (d, i, j) = cfg.ranks.unwrap_or((4, 1, 3));
    let ctx = OrderStatContext::new(d, i, j)?;
    models_or(cfg, dfr_models())
        .iter()
        .map(|m| {
            let r = prd_check(m, &ctx, &x_grid(cfg, m), &y_grid(cfg), cfg.tol)?;
            Ok(SubCheck::from_report(
                format!("prd {m} d={d} i={i} j={j}"),
                r,
            ))
        })
        .collect()
}

/// Random admissible quadruple `x <= x'`, `y <= y'` drawn from the model's
/// central quantiles.
pub fn random_quadruple(rng: &mut impl Rng, model: &DistributionModel) -> [f64; 4] {
    let mut draw = || model.quantile(1e-6 + (1.0 - 2e-6) * rng.random::<f64>());
    let (a, b, c, e) = (draw(), draw(), draw(), draw());
    [a.min(b), a.max(b), c.min(e), c.max(e)]
}

/// Random `(d, i, j)` with `d <= max_d`.
pub fn random_ranks(rng: &mut impl Rng, max_d: usize) -> (usize, usize, usize) {
    let d = rng.random_range(2..=max_d);
    let i = rng.random_range(1..d);
    let j = rng.random_range(i + 1..=d);
    (d, i, j)
}

/// Smallest PLRD margin over `trials` random quadruples (and ranks, unless
/// fixed).
pub fn plrd_min_margin(
    model: &DistributionModel,
    ranks: Option<(usize, usize, usize)>,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let (d, i, j) = ranks.unwrap_or_else(|| random_ranks(rng, 6));
        let ctx = OrderStatContext::new(d, i, j)?;
        let [x, x2, y, y2] = random_quadruple(rng, model);
        worst = worst.min(plrd_margin(model, &ctx, x, x2, y, y2)?);
    }
    Ok(worst)
}

fn plrd_suite(cfg: &VerifyConfig) -> Result<Vec<SubCheck>> {
    let mut rng = rng(cfg);
    let mut out = Vec::new();
    for m in models_or(cfg, universal_models()) {
        let worst = plrd_min_margin(&m, cfg.ranks, cfg.trials, &mut rng)?;
        out.push(SubCheck::new(
            format!("plrd margins {m}"),
            worst >= -cfg.tol,
            format!("{} quadruples, min margin {worst:e}", cfg.trials),
        ));
        let (d, i, j) = cfg.ranks.unwrap_or((3, 1, 2));
        let ctx = OrderStatContext::new(d, i, j)?;
        let grid = linspace(m.quantile(0.01), m.quantile(0.95), 20);
        let lattice = discretize_pair_density(&m, &ctx, &grid, &grid)?;
        let r = check_pairs(
            &lattice,
            &Direction::ones(2),
            &CheckOptions::with_tol(cfg.tol),
        )?;
        out.push(SubCheck::from_report(
            format!("plrd lattice {m} d={d} i={i} j={j}"),
            r,
        ));
    }
    Ok(out)
}

/// `P[X_(k) > x | X_(1..k-1) = prefix]` (`k = prefix.len() + 1`) as a ratio
/// of two integrals of the joint density of the first `k` order statistics.
pub fn cis_quadrature(model: &DistributionModel, d: usize, prefix: &[f64], x: f64) -> Result<f64> {
    let last = *prefix
        .last()
        .ok_or_else(|| Error::Domain("conditioning prefix is empty".into()))?;
    let mut point = prefix.to_vec();
    point.push(last);
    let scale = first_k_density(model, d, &point)?;
    let scale = if scale > 0.0 && scale.is_finite() {
        scale
    } else {
        1.0
    };
    let h = |z: f64| {
        let mut p = prefix.to_vec();
        p.push(z);
        first_k_density(model, d, &p)
            .map(|v| v / scale)
            .unwrap_or(f64::NAN)
    };
    let top = model.truncation_point();
    let den = integrate_tail(last, top, h)?;
    if den.is_nan() || den <= 0.0 {
        return Err(Error::UndefinedConditioning { at: last });
    }
    let num = integrate_tail(x.max(last), top, h)?;
    Ok(num / den)
}

/// One CIS test point: `(d, i, prefix, x)` with `prefix` of length `i - 1`.
pub fn random_cis_point(
    rng: &mut impl Rng,
    model: &DistributionModel,
) -> (usize, usize, Vec<f64>, f64) {
    let d = rng.random_range(2..=6);
    let i = rng.random_range(2..=d);
    let mut prefix: Vec<f64> = (0..i - 1)
        .map(|_| model.quantile(0.02 + 0.8 * rng.random::<f64>()))
        .collect();
    prefix.sort_by(f64::total_cmp);
    let last = prefix[i - 2];
    let x = last + (model.quantile(0.9) - model.quantile(0.1)) * (rng.random::<f64>() - 0.1);
    (d, i, prefix, x)
}

/// Largest gap between [`cis_cond_survival`] and [`cis_quadrature`] over
/// `points` random test points.
pub fn cis_formula_error(
    model: &DistributionModel,
    points: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let (d, i, prefix, x) = random_cis_point(rng, model);
        let closed = cis_cond_survival(model, d, i, x, prefix[i - 2])?;
        let quad = cis_quadrature(model, d, &prefix, x)?;
        worst = worst.max((closed - quad).abs());
    }
    Ok(worst)
}

/// Largest gap between [`spacing_cond_survival`] and the quadrature
/// conditioning on the partial sums of the spacings.
pub fn spacing_formula_error(
    model: &DistributionModel,
    points: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let (d, i, prefix, _) = random_cis_point(rng, model);
        let s = prefix[i - 2];
        let x = (model.quantile(0.9) - model.quantile(0.1)) * (rng.random::<f64>() - 0.1);
        let closed = spacing_cond_survival(model, d, i, x, s)?;
        let quad = cis_quadrature(model, d, &prefix, s + x)?;
        worst = worst.max((closed - quad).abs());
    }
    Ok(worst)
}

const FORMULA_TOL: f64 = 1e-6;
const FORMULA_POINTS: usize = 20;

fn cis_suite(cfg: &VerifyConfig) -> Result<Vec<SubCheck>> {
    let mut rng = rng(cfg);
    let mut out = Vec::new();
    for m in models_or(cfg, universal_models()) {
        let prev = x_grid(cfg, &m);
        let xs: Vec<f64> = prev.iter().step_by(4).copied().collect();
        let d = cfg.ranks.map_or(5, |r| r.0);
        for i in 2..=d {
            let r = cis_check(&m, d, i, &prev, &xs, cfg.tol)?;
            out.push(SubCheck::from_report(format!("cis {m} d={d} i={i}"), r));
        }
        let err = cis_formula_error(&m, FORMULA_POINTS, &mut rng)?;
        out.push(SubCheck::new(
            format!("cis formula {m}"),
            err <= FORMULA_TOL,
            format!("max |closed - quadrature| = {err:e} over {FORMULA_POINTS} points"),
        ));
    }
    Ok(out)
}

fn spacing_suite(cfg: &VerifyConfig) -> Result<Vec<SubCheck>> {
    let mut rng = rng(cfg);
    let mut out = Vec::new();
    for m in models_or(cfg, dfr_models()) {
        let (lo, _) = m.support();
        let s_grid = cfg
            .x_grid
            .clone()
            .unwrap_or_else(|| linspace(lo, m.quantile(0.9), 40));
        let xs = cfg.y_grid.clone().unwrap_or_else(|| vec![0.1, 0.5, 1.0]);
        let d = cfg.ranks.map_or(4, |r| r.0);
        for i in 2..=d {
            let r = spacing_check(&m, d, i, &s_grid, &xs, cfg.tol)?;
            out.push(SubCheck::from_report(
                format!("cis-spacing {m} d={d} i={i}"),
                r,
            ));
        }
        let err = spacing_formula_error(&m, FORMULA_POINTS, &mut rng)?;
        out.push(SubCheck::new(
            format!("spacing formula {m}"),
            err <= FORMULA_TOL,
            format!("max |closed - quadrature| = {err:e} over {FORMULA_POINTS} points"),
        ));
    }
    Ok(out)
}

pub const BETA_IDENTITY_TOL: f64 = 1e-8;

/// Largest `|closed - quadrature|` gap survival difference on a 10 x 10
/// grid of `x` in the central quantiles and `y` in `[0.05, 2]`.
pub fn beta_identity_error(model: &DistributionModel, ctx: &OrderStatContext) -> Result<f64> {
    let xs = linspace(model.quantile(0.01), model.quantile(0.9), 10);
    let ys = linspace(0.05, 2.0, 10);
    let mut worst: f64 = 0.0;
    for &x in &xs {
        for &y in &ys {
            let a = gap_survival_closed(model, ctx, x, y)?;
            let b = gap_survival_quadrature(model, ctx, x, y)?;
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

fn beta_suite(cfg: &VerifyConfig) -> Result<Vec<SubCheck>> {
    let models = models_or(cfg, parse_models(&["exp:1", "pareto:1,2"]));
    let contexts: Vec<(usize, usize, usize)> = match cfg.ranks {
        Some(r) => vec![r],
        None => vec![(3, 1, 2), (3, 2, 3), (5, 1, 2), (5, 2, 4)],
    };
    let mut out = Vec::new();
    for m in &models {
        for &(d, i, j) in &contexts {
            let ctx = OrderStatContext::new(d, i, j)?;
            let err = beta_identity_error(m, &ctx)?;
            out.push(SubCheck::new(
                format!("beta identity {m} d={d} i={i} j={j}"),
                err <= BETA_IDENTITY_TOL,
                format!("max |closed - quadrature| = {err:e}"),
            ));
        }
    }
    Ok(out)
}

/// Verdicts of the three lattice checkers on one input.
pub fn checker_reports(
    density: &LatticeDensity,
    alpha: &Direction,
    opts: &CheckOptions,
) -> Result<[CheckReport; 3]> {
    Ok([
        check_pairs(density, alpha, opts)?,
        check_full(density, alpha, opts)?,
        check_chain(density, alpha, opts)?,
    ])
}

fn agree(reports: &[CheckReport; 3]) -> bool {
    reports.iter().all(|r| r.verdict == reports[0].verdict)
}

/// Tally for the checker-agreement suite.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EquivalenceTally {
    pub random: usize,
    pub random_disagreements: usize,
    /// Random-set reports with `|min_margin| <= 2 tol`.
    pub in_band: usize,
    pub constructed: usize,
    pub constructed_disagreements: usize,
    pub constructed_failures: usize,
}

pub fn equivalence_tally(
    trials: usize,
    constructed: usize,
    shape: &[usize],
    seed: u64,
    tol: f64,
) -> Result<EquivalenceTally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = CheckOptions::with_tol(tol);
    let mut t = EquivalenceTally {
        random: trials,
        constructed,
        ..EquivalenceTally::default()
    };
    for _ in 0..trials {
        let f = generate::random_uniform(&mut rng, shape)?;
        let alpha = generate::random_direction(&mut rng, shape.len());
        let reports = checker_reports(&f, &alpha, &opts)?;
        if !agree(&reports) {
            t.random_disagreements += 1;
        }
        if reports.iter().any(|r| r.min_margin.abs() <= 2.0 * tol) {
            t.in_band += 1;
        }
    }
    for kind in 0..constructed {
        let (f, alpha) = generate::constructed_directional(&mut rng, shape, kind)?;
        let reports = checker_reports(&f, &alpha, &opts)?;
        if !agree(&reports) {
            t.constructed_disagreements += 1;
        }
        if reports.iter().any(|r| !r.passed()) {
            t.constructed_failures += 1;
        }
    }
    Ok(t)
}

fn equivalence_suite(cfg: &VerifyConfig) -> Result<Vec<SubCheck>> {
    let t = equivalence_tally(cfg.trials, 50, &cfg.shape, cfg.seed, cfg.tol)?;
    Ok(vec![
        SubCheck::new(
            "random lattices agree",
            t.random_disagreements == 0,
            format!(
                "{} disagreements over {} lattices",
                t.random_disagreements, t.random
            ),
        ),
        SubCheck::new(
            "random margins outside tolerance band",
            t.in_band == 0,
            format!("{} lattices with |min_margin| <= 2 tol", t.in_band),
        ),
        SubCheck::new(
            "constructed lattices agree",
            t.constructed_disagreements == 0,
            format!(
                "{} disagreements over {} lattices",
                t.constructed_disagreements, t.constructed
            ),
        ),
        SubCheck::new(
            "constructed lattices pass",
            t.constructed_failures == 0,
            format!("{} failures", t.constructed_failures),
        ),
    ])
}

/// Outcome of searching for lattices whose survival function passes while
/// the density itself fails.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ConverseProbe {
    pub trials: usize,
    pub survival_passes: usize,
    /// Survival passes but the density fails the pairs check.
    pub counterexamples: usize,
}

/// Random pmfs checked for survival positivity without density positivity.
/// Only density => survival is guaranteed; this measures how often the
/// converse fails.
pub fn survival_converse_probe(trials: usize, shape: &[usize], seed: u64) -> Result<ConverseProbe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = CheckOptions::default();
    let one = Direction::ones(shape.len());
    let mut probe = ConverseProbe {
        trials,
        ..ConverseProbe::default()
    };
    for _ in 0..trials {
        // Sharpen random pmfs toward a few cells so survival often passes.
        let f = generate::random_pmf(&mut rng, shape)?;
        let sharp: Vec<f64> = f.values().iter().map(|v| v.powi(4)).collect();
        let f = LatticeDensity::new(f.axes().to_vec(), sharp, f.interpretation())?.normalized()?;
        if check_survival(&f, &one, &opts)?.passed() {
            probe.survival_passes += 1;
            if !check_pairs(&f, &one, &opts)?.passed() {
                probe.counterexamples += 1;
            }
        }
    }
    Ok(probe)
}
