#![allow(dead_code)]

use totpos::orderstats::quadrature::GaussLegendre;

/// Integral of `f` over the ordered region `lo <= z_1 <= ... <= z_k <= hi`
/// by nested composite Gauss-Legendre (`panels` equal panels per level).
pub fn ordered_integral(
    k: usize,
    lo: f64,
    hi: f64,
    panels: usize,
    nodes: usize,
    f: &dyn Fn(&[f64]) -> f64,
) -> f64 {
    let rule = GaussLegendre::new(nodes);
    let mut point = Vec::with_capacity(k);
    level(&rule, k, lo, hi, panels, f, &mut point)
}

fn level(
    rule: &GaussLegendre,
    k: usize,
    lo: f64,
    hi: f64,
    panels: usize,
    f: &dyn Fn(&[f64]) -> f64,
    point: &mut Vec<f64>,
) -> f64 {
    if point.len() == k {
        return f(point);
    }
    let step = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = lo + step * p as f64;
        let half = 0.5 * step;
        let mid = a + half;
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let z = mid + half * t;
            point.push(z);
            total += w * half * level(rule, k, z, hi, panels, f, point);
            point.pop();
        }
    }
    total
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}
