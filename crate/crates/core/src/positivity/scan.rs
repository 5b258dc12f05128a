//! Inequality scanners over row-major value arrays.
//!
//! Every scanner visits its inequalities in a fixed order and keeps the first
//! violation plus the global minimum margin. Parallel runs split the scan into
//! ordered chunks and merge them left to right, so reports do not depend on
//! the thread count.

use rayon::prelude::*;

use super::report::Witness;

/// Cell count above which scans fan out over rayon.
const PARALLEL_CELLS: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Sense {
    /// `lhs >= rhs`
    Positive,
    /// `lhs <= rhs`
    Negative,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Comparator {
    pub tol: f64,
    pub log_domain: bool,
    pub sense: Sense,
}

pub(crate) struct Outcome {
    pub margin: f64,
    pub violated: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl Comparator {
    /// Values in the comparison domain (logs when `log_domain`; `ln 0 = -inf`).
    pub fn prepare(&self, values: &[f64]) -> Vec<f64> {
        if self.log_domain {
            values.iter().map(|v| v.ln()).collect()
        } else {
            values.to_vec()
        }
    }

    /// Compares `a*b` against `c*d` (sums in the log domain).
    #[inline]
    pub fn compare(&self, a: f64, b: f64, c: f64, d: f64) -> Outcome {
        let (lhs, rhs) = if self.log_domain {
            (a + b, c + d)
        } else {
            (a * b, c * d)
        };
        // Orient so the required relation is always big >= small.
        let (big, small) = match self.sense {
            Sense::Positive => (lhs, rhs),
            Sense::Negative => (rhs, lhs),
        };
        let (margin, violated) = if self.log_domain && small == f64::NEG_INFINITY {
            (f64::INFINITY, false)
        } else if self.log_domain && big == f64::NEG_INFINITY {
            (f64::NEG_INFINITY, true)
        } else {
            let scale = 1f64.max(big.abs()).max(small.abs());
            (big - small, big < small - self.tol * scale)
        };
        Outcome {
            margin,
            violated,
            lhs,
            rhs,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Tally {
    pub min_margin: f64,
    pub first: Option<Witness>,
    pub count: u64,
}

impl Tally {
    pub fn new() -> Self {
        Self {
            min_margin: f64::INFINITY,
            first: None,
            count: 0,
        }
    }

    #[inline]
    pub fn record(&mut self, outcome: &Outcome, witness: impl FnOnce() -> Witness) {
        self.count += 1;
        if outcome.margin < self.min_margin {
            self.min_margin = outcome.margin;
        }
        if outcome.violated && self.first.is_none() {
            self.first = Some(witness());
        }
    }

    /// Appends a tally that follows `self` in scan order.
    pub fn merge(mut self, later: Tally) -> Tally {
        self.count += later.count;
        if later.min_margin < self.min_margin {
            self.min_margin = later.min_margin;
        }
        if self.first.is_none() {
            self.first = later.first;
        }
        self
    }
}

/// Geometry shared by the lattice scanners.
pub(crate) struct Grid<'a> {
    pub shape: &'a [usize],
    pub strides: &'a [usize],
    /// Axes whose indices are reported mirrored (reflection undone).
    pub flipped: &'a [bool],
}

impl Grid<'_> {
    fn len(&self) -> usize {
        self.shape.iter().product()
    }

    fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.shape.len()];
        for (k, &s) in self.strides.iter().enumerate() {
            out[k] = flat / s;
            flat %= s;
        }
        out
    }

    fn flat(&self, index: &[usize]) -> usize {
        index.iter().zip(self.strides).map(|(i, s)| i * s).sum()
    }

    /// Index as seen in the caller's frame.
    fn report(&self, mut index: Vec<usize>) -> Vec<usize> {
        for (k, i) in index.iter_mut().enumerate() {
            if self.flipped[k] {
                *i = self.shape[k] - 1 - *i;
            }
        }
        index
    }
}

fn run_ordered<T: Sync>(tasks: &[T], parallel: bool, f: impl Fn(&T) -> Tally + Sync) -> Tally {
    if parallel {
        tasks
            .par_iter()
            .map(&f)
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Tally::new(), Tally::merge)
    } else {
        tasks.iter().map(f).fold(Tally::new(), Tally::merge)
    }
}

/// Every 2x2 minor in every coordinate plane, for every fixing of the other
/// coordinates.
pub(crate) fn scan_pairs(values: &[f64], grid: &Grid<'_>, cmp: &Comparator) -> Tally {
    let d = grid.shape.len();
    let n = grid.len();
    // (i, j, base) with base ranging over cells whose i and j indices are 0.
    let mut tasks = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            if grid.shape[i] < 2 || grid.shape[j] < 2 {
                continue;
            }
            for base in 0..n {
                let idx_i = (base / grid.strides[i]) % grid.shape[i];
                let idx_j = (base / grid.strides[j]) % grid.shape[j];
                if idx_i == 0 && idx_j == 0 {
                    tasks.push((i, j, base));
                }
            }
        }
    }
    let parallel = n >= PARALLEL_CELLS;
    run_ordered(&tasks, parallel, |&(i, j, base)| {
        let (ni, nj) = (grid.shape[i], grid.shape[j]);
        let (si, sj) = (grid.strides[i], grid.strides[j]);
        let mut tally = Tally::new();
        for a in 0..ni {
            for a2 in a + 1..ni {
                for b in 0..nj {
                    for b2 in b + 1..nj {
                        let ll = base + a * si + b * sj;
                        let hh = base + a2 * si + b2 * sj;
                        let hl = base + a2 * si + b * sj;
                        let lh = base + a * si + b2 * sj;
                        let out = cmp.compare(values[ll], values[hh], values[hl], values[lh]);
                        tally.record(&out, || {
                            let context: Vec<usize> = grid
                                .report(grid.unravel(base))
                                .into_iter()
                                .enumerate()
                                .filter(|&(k, _)| k != i && k != j)
                                .map(|(_, v)| v)
                                .collect();
                            Witness {
                                pair: Some([i, j]),
                                context,
                                indices: [ll, hh, hl, lh]
                                    .iter()
                                    .map(|&f| grid.report(grid.unravel(f)))
                                    .collect(),
                                lhs: out.lhs,
                                rhs: out.rhs,
                                ..Witness::default()
                            }
                        });
                    }
                }
            }
        }
        tally
    })
}

/// Join/meet inequality over every unordered pair of cells.
pub(crate) fn scan_full(values: &[f64], grid: &Grid<'_>, cmp: &Comparator) -> Tally {
    let n = grid.len();
    let points: Vec<Vec<usize>> = (0..n).map(|f| grid.unravel(f)).collect();
    let firsts: Vec<usize> = (0..n).collect();
    let parallel = n >= 256;
    run_ordered(&firsts, parallel, |&p| {
        let mut tally = Tally::new();
        let x = &points[p];
        let mut join = vec![0; x.len()];
        let mut meet = vec![0; x.len()];
        for q in p + 1..n {
            let y = &points[q];
            for k in 0..x.len() {
                join[k] = x[k].max(y[k]);
                meet[k] = x[k].min(y[k]);
            }
            let (fj, fm) = (grid.flat(&join), grid.flat(&meet));
            let out = cmp.compare(values[fj], values[fm], values[p], values[q]);
            tally.record(&out, || Witness {
                indices: vec![
                    grid.report(x.clone()),
                    grid.report(y.clone()),
                    grid.report(join.clone()),
                    grid.report(meet.clone()),
                ],
                lhs: out.lhs,
                rhs: out.rhs,
                ..Witness::default()
            });
        }
        tally
    })
}

/// Splice inequality `h(x) h(x') >= h(x'^j) h(x^j)` for every ordered pair
/// `x <= x'` and split `1 <= j <= d-1`, where `x'^j` takes its first `j`
/// coordinates from `x'` and the rest from `x`, and `x^j` the reverse.
pub(crate) fn scan_chain(values: &[f64], grid: &Grid<'_>, cmp: &Comparator) -> Tally {
    let d = grid.shape.len();
    let n = grid.len();
    let firsts: Vec<usize> = (0..n).collect();
    let parallel = n >= 256;
    run_ordered(&firsts, parallel, |&p| {
        let mut tally = Tally::new();
        if d < 2 {
            return tally;
        }
        let x = grid.unravel(p);
        // Box of extents above x.
        let extent: Vec<usize> = x.iter().zip(grid.shape).map(|(&i, &n)| n - i).collect();
        let mut offset = vec![0usize; d];
        let mut upper = x.clone();
        let mut hi_lo = x.clone();
        let mut lo_hi = x.clone();
        loop {
            for k in 0..d {
                upper[k] = x[k] + offset[k];
            }
            let fu = grid.flat(&upper);
            for split in 1..d {
                hi_lo[..split].copy_from_slice(&upper[..split]);
                hi_lo[split..].copy_from_slice(&x[split..]);
                lo_hi[..split].copy_from_slice(&x[..split]);
                lo_hi[split..].copy_from_slice(&upper[split..]);
                let (fhl, flh) = (grid.flat(&hi_lo), grid.flat(&lo_hi));
                let out = cmp.compare(values[p], values[fu], values[fhl], values[flh]);
                tally.record(&out, || Witness {
                    split: Some(split),
                    indices: vec![
                        grid.report(x.clone()),
                        grid.report(upper.clone()),
                        grid.report(hi_lo.clone()),
                        grid.report(lo_hi.clone()),
                    ],
                    lhs: out.lhs,
                    rhs: out.rhs,
                    ..Witness::default()
                });
            }
            if !step(&mut offset, &extent) {
                break;
            }
        }
        tally
    })
}

fn step(index: &mut [usize], extent: &[usize]) -> bool {
    for k in (0..index.len()).rev() {
        index[k] += 1;
        if index[k] < extent[k] {
            return true;
        }
        index[k] = 0;
    }
    false
}
