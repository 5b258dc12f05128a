//! Composite Gauss-Legendre quadrature.

use crate::error::{Error, Result};

pub const DEFAULT_NODES: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_DOUBLINGS: u32 = 12;
/// Number of geometric levels used by [`integrate_tail`].
const TAIL_LEVELS: i32 = 32;

/// Nodes and weights of the n-point rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Newton iteration on P_n from the Tricomi initial guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel estimate of `int_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
            * half
    }

    /// Sum over `[b_k, b_{k+1}]`, each split into `pieces` equal panels.
    pub fn integrate_panels(
        &self,
        breakpoints: &[f64],
        pieces: usize,
        mut f: impl FnMut(f64) -> f64,
    ) -> f64 {
        let mut total = 0.0;
        for w in breakpoints.windows(2) {
            let step = (w[1] - w[0]) / pieces as f64;
            for p in 0..pieces {
                let a = w[0] + step * p as f64;
                let b = if p + 1 == pieces { w[1] } else { a + step };
                total += self.integrate(a, b, &mut f);
            }
        }
        total
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Doubles the panel count on every breakpoint interval until two successive
/// estimates differ by less than `tol`.
pub fn integrate_adaptive(
    rule: &GaussLegendre,
    breakpoints: &[f64],
    tol: f64,
    max_doublings: u32,
    mut f: impl FnMut(f64) -> f64,
) -> Result<f64> {
    let mut pieces = 1;
    let mut prev = rule.integrate_panels(breakpoints, pieces, &mut f);
    for _ in 0..max_doublings {
        pieces *= 2;
        let next = rule.integrate_panels(breakpoints, pieces, &mut f);
        if (next - prev).abs() < tol {
            return Ok(next);
        }
        prev = next;
    }
    let last = rule.integrate_panels(breakpoints, pieces * 2, &mut f);
    if (last - prev).abs() < tol {
        Ok(last)
    } else {
        Err(Error::QuadratureFailure { prev, last })
    }
}

/// Breakpoints `lo, lo + L 2^-K, ..., lo + L/2, lo + L`, graded toward `lo`.
pub fn graded_breakpoints(lo: f64, hi: f64) -> Vec<f64> {
    let len = hi - lo;
    let mut out = Vec::with_capacity(TAIL_LEVELS as usize + 2);
    out.push(lo);
    for k in (0..=TAIL_LEVELS).rev() {
        out.push(lo + len * 2f64.powi(-k));
    }
    out
}

/// `int_lo^hi f` for integrands that decay away from `lo`, with the default
/// 64-node rule and `1e-10` doubling tolerance.
pub fn integrate_tail(lo: f64, hi: f64, f: impl FnMut(f64) -> f64) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let rule = GaussLegendre::new(DEFAULT_NODES);
    integrate_adaptive(
        &rule,
        &graded_breakpoints(lo, hi),
        DEFAULT_TOL,
        MAX_DOUBLINGS,
        f,
    )
}
