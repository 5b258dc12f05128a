//! Random lattices: unstructured ones, and families that are MTP2 in a known
//! direction by construction.

use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{self, Direction, Interpretation, LatticeDensity};

/// Values i.i.d. uniform on `(0, 1)`, integer axes, density flag.
pub fn random_uniform(rng: &mut impl Rng, shape: &[usize]) -> Result<LatticeDensity> {
    let n: usize = shape.iter().product();
    let values = (0..n).map(|_| positive_uniform(rng)).collect();
    LatticeDensity::from_shape(shape, values, Interpretation::Density)
}

/// [`random_uniform`] rescaled to a pmf.
pub fn random_pmf(rng: &mut impl Rng, shape: &[usize]) -> Result<LatticeDensity> {
    random_uniform(rng, shape)?.normalized()
}

pub fn random_direction(rng: &mut impl Rng, d: usize) -> Direction {
    let signs = (0..d)
        .map(|_| if rng.random::<bool>() { 1 } else { -1 })
        .collect();
    Direction::new(signs).expect("nonempty sign vector")
}

fn positive_uniform(rng: &mut impl Rng) -> f64 {
    // (0, 1]: keeps every value strictly positive.
    1.0 - rng.random::<f64>()
}

fn increasing(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut acc = 0.0;
    (0..n)
        .map(|_| {
            acc += 0.1 + rng.random::<f64>();
            acc
        })
        .collect()
}

/// Outer product of strictly positive random marginals: a pmf that passes
/// the pairs check in every direction.
pub fn independent_product(rng: &mut impl Rng, shape: &[usize]) -> Result<LatticeDensity> {
    let mut out: Option<LatticeDensity> = None;
    for &n in shape {
        let marginal = random_pmf(rng, &[n])?;
        out = Some(match out {
            None => marginal,
            Some(acc) => lattice::product(&acc, &marginal)?,
        });
    }
    out.ok_or_else(|| Error::InvalidLattice {
        field: "shape",
        reason: "lattice needs at least one axis".into(),
    })
}

/// Column-stochastic `[n_x, n_y]` table `f(x | y)` proportional to
/// `a(x) exp(theta * sign * u(x) v(y))` with `u`, `v` increasing, so it is
/// TP2 in `(sign * x, y)`.
pub fn tp2_table(rng: &mut impl Rng, n_x: usize, n_y: usize, sign: i8) -> Result<LatticeDensity> {
    let base: Vec<f64> = (0..n_x).map(|_| 0.2 + rng.random::<f64>()).collect();
    let u = increasing(rng, n_x);
    let v = increasing(rng, n_y);
    // Exponent stays within [-2, 2].
    let theta = 2.0 * rng.random::<f64>() / (u[n_x - 1] * v[n_y - 1]);
    let s = f64::from(sign);
    let mut values = vec![0.0; n_x * n_y];
    for y in 0..n_y {
        let col: Vec<f64> = (0..n_x)
            .map(|x| base[x] * (theta * s * u[x] * v[y]).exp())
            .collect();
        let total: f64 = col.iter().sum();
        for x in 0..n_x {
            values[x * n_y + y] = col[x] / total;
        }
    }
    LatticeDensity::from_shape(&[n_x, n_y], values, Interpretation::Density)
}

/// Conditionally independent mixture whose tables are TP2 in
/// `(alpha_k x_k, y)`; passes the pairs check with `alpha`.
pub fn tp2_mixture(
    rng: &mut impl Rng,
    shape: &[usize],
    alpha: &Direction,
) -> Result<LatticeDensity> {
    alpha.check_dim(shape.len())?;
    let n_y = 2 + rng.random_range(0..4usize);
    let tables = shape
        .iter()
        .zip(alpha.signs())
        .map(|(&n, &s)| tp2_table(rng, n, n_y, s))
        .collect::<Result<Vec<_>>>()?;
    let raw: Vec<f64> = (0..n_y).map(|_| positive_uniform(rng)).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    lattice::mixture(&tables, &weights)
}

/// Gaussian weights `exp(-x'Qx / 2)` on a grid in `[-2, 2]^d`, with `Q` a
/// diagonally dominant M-matrix (nonpositive off-diagonal), normalized.
pub fn gaussian_mtp2(rng: &mut impl Rng, shape: &[usize]) -> Result<LatticeDensity> {
    let d = shape.len();
    let mut q = vec![vec![0.0; d]; d];
    #[allow(clippy::needless_range_loop)]
    for i in 0..d {
        for j in i + 1..d {
            let c = -0.8 * rng.random::<f64>();
            q[i][j] = c;
            q[j][i] = c;
        }
    }
    for (i, row) in q.iter_mut().enumerate() {
        let off: f64 = row.iter().map(|v: &f64| v.abs()).sum();
        row[i] = off + 0.2 + rng.random::<f64>();
    }
    let axes: Vec<Vec<f64>> = shape
        .iter()
        .map(|&n| {
            if n == 1 {
                vec![0.0]
            } else {
                (0..n)
                    .map(|k| -2.0 + 4.0 * k as f64 / (n - 1) as f64)
                    .collect()
            }
        })
        .collect();
    from_log_weights(axes, |x| {
        let mut quad = 0.0;
        for i in 0..d {
            for j in 0..d {
                quad += x[i] * q[i][j] * x[j];
            }
        }
        -0.5 * quad
    })
}

/// `exp(sum_k g_k(x_k) + sum_{i<j} c_ij phi_i(x_i) psi_j(x_j))` with
/// `c_ij >= 0` and `phi`, `psi` increasing: log-supermodular, normalized.
pub fn log_supermodular(rng: &mut impl Rng, shape: &[usize]) -> Result<LatticeDensity> {
    let d = shape.len();
    let main: Vec<Vec<f64>> = shape
        .iter()
        .map(|&n| (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect())
        .collect();
    let phi: Vec<Vec<f64>> = shape.iter().map(|&n| scaled_increasing(rng, n)).collect();
    let psi: Vec<Vec<f64>> = shape.iter().map(|&n| scaled_increasing(rng, n)).collect();
    let coupling: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..d).map(|_| rng.random::<f64>()).collect())
        .collect();
    let axes: Vec<Vec<f64>> = shape
        .iter()
        .map(|&n| (0..n).map(|v| v as f64).collect())
        .collect();
    from_log_weights(axes, |x| {
        let idx: Vec<usize> = x.iter().map(|&v| v as usize).collect();
        let mut acc: f64 = idx.iter().enumerate().map(|(k, &i)| main[k][i]).sum();
        for i in 0..d {
            for j in i + 1..d {
                acc += coupling[i][j] * phi[i][idx[i]] * psi[j][idx[j]];
            }
        }
        acc
    })
}

fn scaled_increasing(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let v = increasing(rng, n);
    let top = v[n - 1];
    v.into_iter().map(|x| x / top).collect()
}

fn from_log_weights(axes: Vec<Vec<f64>>, logw: impl Fn(&[f64]) -> f64) -> Result<LatticeDensity> {
    let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
    let n: usize = shape.iter().product();
    let mut index = vec![0usize; shape.len()];
    let mut point = vec![0.0; shape.len()];
    let mut logs = Vec::with_capacity(n);
    for _ in 0..n {
        for (k, &i) in index.iter().enumerate() {
            point[k] = axes[k][i];
        }
        logs.push(logw(&point));
        lattice::advance(&mut index, &shape);
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let values = logs.iter().map(|l| (l - top).exp()).collect();
    LatticeDensity::new(axes, values, Interpretation::Density)?.normalized()
}

/// Strictly positive pmf that passes the pairs check with the all-ones
/// direction; `kind` cycles through products, mixtures, discretized
/// Gaussians and log-supermodular families.
pub fn constructed_mtp2(
    rng: &mut impl Rng,
    shape: &[usize],
    kind: usize,
) -> Result<LatticeDensity> {
    match kind % 4 {
        0 => independent_product(rng, shape),
        1 => tp2_mixture(rng, shape, &Direction::ones(shape.len())),
        2 => gaussian_mtp2(rng, shape),
        _ => log_supermodular(rng, shape),
    }
}

/// A lattice that passes with `alpha`: a constructed MTP2 lattice reflected
/// by a random `alpha`.
pub fn constructed_directional(
    rng: &mut impl Rng,
    shape: &[usize],
    kind: usize,
) -> Result<(LatticeDensity, Direction)> {
    let base = constructed_mtp2(rng, shape, kind)?;
    let alpha = random_direction(rng, shape.len());
    Ok((lattice::reflect(&base, &alpha)?, alpha))
}
