//! Simulated order statistics and binned estimates of conditional gap
//! survival.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::orderstats::DistributionModel;
use crate::text::fmt_f64;

/// Name and version of the pseudorandom stream behind [`sample_order_stats`].
/// Bumped whenever the mapping from seed to rows changes.
pub const GENERATOR: &str = "chacha8-v1";

/// Bins holding fewer rows than this are flagged as low-count.
pub const LOW_COUNT: usize = 30;

pub const DEFAULT_BINS: usize = 5;

/// `n_samples` sorted samples of size `d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    model: DistributionModel,
    d: usize,
    seed: u64,
    rows: Vec<f64>,
}

impl SampleBatch {
    pub fn model(&self) -> &DistributionModel {
        &self.model
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_samples(&self) -> usize {
        self.rows.len() / self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn generator(&self) -> &'static str {
        GENERATOR
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k * self.d..(k + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.rows.chunks_exact(self.d)
    }

    /// Writes a header `x1,...,xd` and one line per row.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        let header: Vec<String> = (1..=self.d).map(|k| format!("x{k}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Draws `n_samples` i.i.d. samples of size `d` by inverse transform and
/// sorts each one.
pub fn sample_order_stats(
    model: &DistributionModel,
    d: usize,
    n_samples: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if d == 0 {
        return Err(Error::InvalidSample("sample size d must be >= 1".into()));
    }
    if n_samples == 0 {
        return Err(Error::InvalidSample("n_samples must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(d * n_samples);
    for _ in 0..n_samples {
        let start = rows.len();
        for _ in 0..d {
            rows.push(model.quantile(rng.random::<f64>()));
        }
        rows[start..].sort_by(f64::total_cmp);
    }
    Ok(SampleBatch {
        model: *model,
        d,
        seed,
        rows,
    })
}

/// How rows are grouped by the value of the conditioning statistic.
#[derive(Debug, Clone, PartialEq)]
pub enum BinSpec {
    /// `n` bins with (nearly) equal row counts.
    EqualCount(usize),
    /// Bins `[e_k, e_{k+1})`, the last one closed.
    Edges(Vec<f64>),
}

impl Default for BinSpec {
    fn default() -> Self {
        BinSpec::EqualCount(DEFAULT_BINS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinEstimate {
    pub low: f64,
    pub high: f64,
    pub count: usize,
    /// NaN for an empty bin.
    pub estimate: f64,
    /// Binomial standard error `sqrt(p (1 - p) / n)`.
    pub stderr: f64,
    pub low_count: bool,
}

/// Bin bounds and the `(conditioning value, gap exceeded)` rows inside.
type Bin<'a> = (f64, f64, &'a [(f64, bool)]);

/// Fraction of rows with `X_(j) - X_(i) > y` among rows whose `X_(i)` falls
/// in each bin.
pub fn empirical_gap_survival(
    batch: &SampleBatch,
    i: usize,
    j: usize,
    bins: &BinSpec,
    y: f64,
) -> Result<Vec<BinEstimate>> {
    let d = batch.d();
    if !(1 <= i && i < j && j <= d) {
        return Err(Error::InvalidRanks { d, i, j });
    }
    if !(y.is_finite() && y >= 0.0) {
        return Err(Error::Domain(format!(
            "gap y must be finite and >= 0, got {y}"
        )));
    }
    let mut pairs: Vec<(f64, bool)> = batch
        .rows()
        .map(|r| (r[i - 1], r[j - 1] - r[i - 1] > y))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let groups: Vec<Bin<'_>> = match bins {
        BinSpec::EqualCount(n) => {
            if *n == 0 {
                return Err(Error::InsufficientBins(0));
            }
            let total = pairs.len();
            (0..*n)
                .map(|k| {
                    let chunk = &pairs[k * total / n..(k + 1) * total / n];
                    let (lo, hi) = match (chunk.first(), chunk.last()) {
                        (Some(a), Some(b)) => (a.0, b.0),
                        _ => (f64::NAN, f64::NAN),
                    };
                    (lo, hi, chunk)
                })
                .collect()
        }
        BinSpec::Edges(edges) => {
            if edges.len() < 2 {
                return Err(Error::InsufficientBins(edges.len().saturating_sub(1)));
            }
            crate::positivity::validate_increasing(edges, "bin edges")?;
            let (first, last) = (edges[0], edges[edges.len() - 1]);
            if let Some(p) = pairs.iter().find(|p| p.0 < first || p.0 > last) {
                return Err(Error::InvalidGrid(format!(
                    "observed X_({i}) = {} lies outside the bin edges [{first}, {last}]",
                    p.0
                )));
            }
            let mut start = 0;
            edges
                .windows(2)
                .enumerate()
                .map(|(k, w)| {
                    let closed = k + 2 == edges.len();
                    let end = start
                        + pairs[start..]
                            .iter()
                            .take_while(|p| p.0 < w[1] || (closed && p.0 <= w[1]))
                            .count();
                    let chunk = &pairs[start..end];
                    start = end;
                    (w[0], w[1], chunk)
                })
                .collect()
        }
    };

    Ok(groups
        .into_iter()
        .map(|(low, high, chunk)| {
            let count = chunk.len();
            let (estimate, stderr) = if count == 0 {
                (f64::NAN, f64::NAN)
            } else {
                let hits = chunk.iter().filter(|p| p.1).count();
                let p = hits as f64 / count as f64;
                (p, (p * (1.0 - p) / count as f64).sqrt())
            };
            BinEstimate {
                low,
                high,
                count,
                estimate,
                stderr,
                low_count: count < LOW_COUNT,
            }
        })
        .collect())
}

/// Largest drop `estimates[k] - estimates[k+1]` between adjacent usable bins,
/// clipped at zero. Bins with a non-finite estimate or standard error are
/// skipped.
pub fn isotonic_violation(estimates: &[f64], ses: &[f64]) -> Result<f64> {
    if estimates.len() != ses.len() {
        return Err(Error::DimensionMismatch {
            expected: estimates.len(),
            found: ses.len(),
        });
    }
    let usable: Vec<f64> = estimates
        .iter()
        .zip(ses)
        .filter(|(e, s)| e.is_finite() && s.is_finite())
        .map(|(e, _)| *e)
        .collect();
    if usable.len() < 2 {
        return Err(Error::InsufficientBins(usable.len()));
    }
    Ok(usable.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max))
}

/// Root mean square of the finite standard errors.
pub fn pooled_se(ses: &[f64]) -> f64 {
    let finite: Vec<f64> = ses.iter().copied().filter(|s| s.is_finite()).collect();
    if finite.is_empty() {
        return f64::NAN;
    }
    (finite.iter().map(|s| s * s).sum::<f64>() / finite.len() as f64).sqrt()
}

/// Writes `bin_low,bin_high,count,estimate,stderr`.
pub fn write_bins_csv(bins: &[BinEstimate], mut out: impl Write) -> Result<()> {
    writeln!(out, "bin_low,bin_high,count,estimate,stderr")?;
    for b in bins {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(b.low),
            fmt_f64(b.high),
            b.count,
            fmt_f64(b.estimate),
            fmt_f64(b.stderr)
        )?;
    }
    Ok(())
}
