use super::{
    row_major_strides, AxisRelabel, Direction, Interpretation, LatticeDensity, PMF_MASS_SLACK,
};
use crate::error::{Error, Result};

/// Applies the sign vector `alpha` to the lattice coordinates.
///
/// Axes with sign -1 are negated and reversed so they stay increasing; the
/// values are reindexed to match. Values are moved, never recomputed.
pub fn reflect(density: &LatticeDensity, alpha: &Direction) -> Result<LatticeDensity> {
    alpha.check_dim(density.dim())?;
    if alpha.signs().iter().all(|&s| s > 0) {
        return Ok(density.clone());
    }
    let shape = density.shape();
    let axes: Vec<Vec<f64>> = density
        .axes()
        .iter()
        .enumerate()
        .map(|(k, axis)| {
            if alpha.is_flipped(k) {
                axis.iter().rev().map(|x| -x).collect()
            } else {
                axis.clone()
            }
        })
        .collect();

    let src = density.values();
    let mut values = Vec::with_capacity(src.len());
    let mut index = vec![0usize; shape.len()];
    for _ in 0..src.len() {
        let old: usize = index
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let i = if alpha.is_flipped(k) {
                    shape[k] - 1 - i
                } else {
                    i
                };
                i * density.strides()[k]
            })
            .sum();
        values.push(src[old]);
        advance(&mut index, shape);
    }
    LatticeDensity::new(axes, values, density.interpretation())
}

/// Sums out every axis not listed in `keep` (0-based axis numbers).
pub fn marginalize(density: &LatticeDensity, keep: &[usize]) -> Result<LatticeDensity> {
    density.require_pmf("marginalize")?;
    if keep.is_empty() {
        return Err(Error::InvalidAxisSet("keep set is empty".into()));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    if kept.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidAxisSet(format!("duplicate axis in {keep:?}")));
    }
    if let Some(&k) = kept.iter().find(|&&k| k >= density.dim()) {
        return Err(Error::InvalidAxisSet(format!(
            "axis {k} out of range for dim {}",
            density.dim()
        )));
    }
    if kept.len() == density.dim() {
        return Ok(density.clone());
    }

    let shape = density.shape();
    let new_shape: Vec<usize> = kept.iter().map(|&k| shape[k]).collect();
    let new_strides = row_major_strides(&new_shape);
    let mut values = vec![0.0; new_shape.iter().product()];
    let mut index = vec![0usize; shape.len()];
    for &v in density.values() {
        let target: usize = kept
            .iter()
            .zip(&new_strides)
            .map(|(&k, s)| index[k] * s)
            .sum();
        values[target] += v;
        advance(&mut index, shape);
    }
    let axes = kept.iter().map(|&k| density.axes()[k].clone()).collect();
    LatticeDensity::new(axes, values, Interpretation::Pmf)
}

/// Independent concatenation: `value(x, y) = a(x) * b(y)` over `d1 + d2` axes.
pub fn product(a: &LatticeDensity, b: &LatticeDensity) -> Result<LatticeDensity> {
    if a.interpretation() != b.interpretation() {
        return Err(Error::InvalidLattice {
            field: "interpretation",
            reason: format!(
                "cannot concatenate {} with {}",
                a.interpretation(),
                b.interpretation()
            ),
        });
    }
    let mut axes = a.axes().to_vec();
    axes.extend_from_slice(b.axes());
    let mut values = Vec::with_capacity(a.len() * b.len());
    for &va in a.values() {
        values.extend(b.values().iter().map(|&vb| va * vb));
    }
    LatticeDensity::new(axes, values, a.interpretation())
}

/// Replaces axis coordinates; values are untouched.
pub fn relabel_axes(density: &LatticeDensity, maps: &AxisRelabel) -> Result<LatticeDensity> {
    if maps.axes().len() != density.dim() {
        return Err(Error::DimensionMismatch {
            expected: density.dim(),
            found: maps.axes().len(),
        });
    }
    for (k, (new, old)) in maps.axes().iter().zip(density.axes()).enumerate() {
        if new.len() != old.len() {
            return Err(Error::InvalidRelabel(format!(
                "axis {k}: replacement has {} coordinates, axis has {}",
                new.len(),
                old.len()
            )));
        }
    }
    LatticeDensity::new(
        maps.axes().to_vec(),
        density.values().to_vec(),
        density.interpretation(),
    )
}

/// Joint upper survival array: `S[idx]` is the mass at cells strictly greater
/// than `idx` in every coordinate.
///
/// Inclusive suffix sums are accumulated axis by axis, then shifted by one
/// cell along the diagonal. The result is flagged as density samples since it
/// is not itself a pmf.
pub fn survival_upper(density: &LatticeDensity) -> Result<LatticeDensity> {
    density.require_pmf("survival_upper")?;
    let shape = density.shape();
    let strides = density.strides();
    let n = density.len();

    let mut inclusive = density.values().to_vec();
    for (&len, &stride) in shape.iter().zip(strides) {
        if len < 2 {
            continue;
        }
        // Walk every line along axis k from its top end.
        for flat in 0..n {
            let pos = (flat / stride) % len;
            if pos != 0 {
                continue;
            }
            for p in (0..len - 1).rev() {
                let here = flat + p * stride;
                inclusive[here] += inclusive[here + stride];
            }
        }
    }

    let diagonal: usize = strides.iter().sum();
    let mut values = vec![0.0; n];
    let mut index = vec![0usize; shape.len()];
    for (flat, out) in values.iter_mut().enumerate() {
        if index.iter().zip(shape).all(|(&i, &len)| i + 1 < len) {
            *out = inclusive[flat + diagonal];
        }
        advance(&mut index, shape);
    }
    LatticeDensity::new(density.axes().to_vec(), values, Interpretation::Density)
}

/// Conditionally independent mixture `f(x) = sum_y w(y) prod_i f_i(x_i | y)`.
///
/// Each conditional is a 2-axis lattice with shape `[n_i, n_y]` whose columns
/// (fixed `y`) sum to one. The output axes are the conditionals' first axes.
pub fn mixture(conditionals: &[LatticeDensity], weights: &[f64]) -> Result<LatticeDensity> {
    if conditionals.is_empty() {
        return Err(Error::InvalidMixture("no conditional tables".into()));
    }
    let ny = weights.len();
    if ny == 0 {
        return Err(Error::InvalidMixture("weights are empty".into()));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidMixture(
            "weights must be finite and nonnegative".into(),
        ));
    }
    let wsum: f64 = weights.iter().sum();
    if (wsum - 1.0).abs() > PMF_MASS_SLACK {
        return Err(Error::InvalidMixture(format!(
            "weights sum to {wsum}, not 1"
        )));
    }
    for (t, table) in conditionals.iter().enumerate() {
        if table.dim() != 2 || table.shape()[1] != ny {
            return Err(Error::InvalidMixture(format!(
                "table {t} has shape {:?}, expected [n, {ny}]",
                table.shape()
            )));
        }
        let nx = table.shape()[0];
        for y in 0..ny {
            let col: f64 = (0..nx).map(|x| table.values()[x * ny + y]).sum();
            if (col - 1.0).abs() > PMF_MASS_SLACK {
                return Err(Error::InvalidMixture(format!(
                    "table {t} column {y} sums to {col}, not 1"
                )));
            }
        }
    }

    let shape: Vec<usize> = conditionals.iter().map(|t| t.shape()[0]).collect();
    let n: usize = shape.iter().product();
    let mut values = vec![0.0; n];
    let mut index = vec![0usize; shape.len()];
    for out in values.iter_mut() {
        let mut acc = 0.0;
        for (y, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let term: f64 = conditionals
                .iter()
                .zip(&index)
                .map(|(table, &x)| table.values()[x * ny + y])
                .product();
            acc += w * term;
        }
        *out = acc;
        advance(&mut index, &shape);
    }
    let axes = conditionals.iter().map(|t| t.axis(0).to_vec()).collect();
    LatticeDensity::new(axes, values, Interpretation::Pmf)
}

/// Row-major odometer increment.
pub(crate) fn advance(index: &mut [usize], shape: &[usize]) {
    for k in (0..index.len()).rev() {
        index[k] += 1;
        if index[k] < shape[k] {
            return;
        }
        index[k] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pmf(shape: &[usize], values: Vec<f64>) -> LatticeDensity {
        LatticeDensity::from_shape(shape, values, Interpretation::Pmf).unwrap()
    }

    #[test]
    fn reflect_identity_direction() {
        let l = pmf(&[2, 2], vec![0.1, 0.2, 0.3, 0.4]);
        assert_eq!(reflect(&l, &Direction::ones(2)).unwrap(), l);
    }

    #[test]
    fn reflect_single_axis() {
        let l = LatticeDensity::new(vec![vec![-2.0, 5.0]], vec![0.25, 0.75], Interpretation::Pmf)
            .unwrap();
        let r = reflect(&l, &"-1".parse().unwrap()).unwrap();
        assert_eq!(r.axis(0), &[-5.0, 2.0]);
        assert_eq!(r.values(), &[0.75, 0.25]);
    }

    #[test]
    fn reflect_second_axis_of_grid() {
        let l = pmf(&[2, 3], vec![0.0, 0.1, 0.2, 0.3, 0.15, 0.25]);
        let r = reflect(&l, &"+1,-1".parse().unwrap()).unwrap();
        assert_eq!(r.values(), &[0.2, 0.1, 0.0, 0.25, 0.15, 0.3]);
        assert_eq!(r.axis(1), &[-2.0, -1.0, 0.0]);
    }

    #[test]
    fn reflect_dimension_mismatch() {
        let l = pmf(&[2, 2], vec![0.25; 4]);
        assert!(matches!(
            reflect(&l, &Direction::ones(3)),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn marginalize_row_sums() {
        let l = pmf(&[2, 2], vec![0.1, 0.2, 0.3, 0.4]);
        let m = marginalize(&l, &[0]).unwrap();
        assert_abs_diff_eq!(m.values()[0], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(m.values()[1], 0.7, epsilon = 1e-15);
        let c = marginalize(&l, &[1]).unwrap();
        assert_abs_diff_eq!(c.values()[0], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(c.values()[1], 0.6, epsilon = 1e-15);
    }

    #[test]
    fn marginalize_uniform_cube() {
        let l = pmf(&[3, 3, 3], vec![1.0 / 27.0; 27]);
        let m = marginalize(&l, &[1]).unwrap();
        for v in m.values() {
            assert_abs_diff_eq!(*v, 1.0 / 3.0, epsilon = 1e-15);
        }
        assert_eq!(marginalize(&l, &[0, 1, 2]).unwrap(), l);
    }

    #[test]
    fn marginalize_errors() {
        let l = pmf(&[2, 2], vec![0.25; 4]);
        assert!(matches!(
            marginalize(&l, &[]),
            Err(Error::InvalidAxisSet(_))
        ));
        assert!(marginalize(&l, &[2]).is_err());
        assert!(marginalize(&l, &[0, 0]).is_err());
        let dens =
            LatticeDensity::from_shape(&[2, 2], vec![1.0; 4], Interpretation::Density).unwrap();
        assert!(matches!(
            marginalize(&dens, &[0]),
            Err(Error::NotPmf { .. })
        ));
    }

    #[test]
    fn product_of_halves() {
        let a = pmf(&[2], vec![0.5, 0.5]);
        let p = product(&a, &a).unwrap();
        assert_eq!(p.shape(), &[2, 2]);
        assert!(p.values().iter().all(|&v| v == 0.25));
    }

    #[test]
    fn product_with_unit_factor() {
        let a = pmf(&[1], vec![1.0]);
        let b = pmf(&[3], vec![0.2, 0.3, 0.5]);
        let p = product(&a, &b).unwrap();
        assert_eq!(p.shape(), &[1, 3]);
        assert_eq!(p.values(), b.values());
    }

    #[test]
    fn product_flag_mismatch() {
        let a = pmf(&[1], vec![1.0]);
        let b = LatticeDensity::from_shape(&[1], vec![3.0], Interpretation::Density).unwrap();
        assert!(product(&a, &b).is_err());
    }

    #[test]
    fn relabel_keeps_values() {
        let l = pmf(&[3], vec![0.2, 0.3, 0.5]);
        let maps = AxisRelabel::from_fn(&l, |_, x| x * x).unwrap();
        let r = relabel_axes(&l, &maps).unwrap();
        assert_eq!(r.axis(0), &[0.0, 1.0, 4.0]);
        assert_eq!(r.values(), l.values());
        let bad = AxisRelabel::new(vec![vec![0.0, 1.0]]).unwrap();
        assert!(relabel_axes(&l, &bad).is_err());
    }

    #[test]
    fn survival_of_uniform_square() {
        let l = pmf(&[2, 2], vec![0.25; 4]);
        let s = survival_upper(&l).unwrap();
        assert_eq!(s.values(), &[0.25, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn survival_suffix_sums() {
        let l = pmf(&[3], vec![0.2, 0.3, 0.5]);
        let s = survival_upper(&l).unwrap();
        assert_abs_diff_eq!(s.values()[0], 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(s.values()[1], 0.5, epsilon = 1e-15);
        assert_eq!(s.values()[2], 0.0);
    }

    #[test]
    fn survival_matches_brute_force() {
        let vals: Vec<f64> = (0..24).map(|k| (k as f64 + 1.0) / 300.0).collect();
        let l = pmf(&[2, 3, 4], vals);
        let s = survival_upper(&l).unwrap();
        for flat in 0..l.len() {
            let idx = l.unravel(flat);
            let brute: f64 = (0..l.len())
                .filter(|&g| l.unravel(g).iter().zip(&idx).all(|(a, b)| a > b))
                .map(|g| l.values()[g])
                .sum();
            assert_abs_diff_eq!(s.values()[flat], brute, epsilon = 1e-15);
        }
    }

    #[test]
    fn mixture_single_component_is_product() {
        let t1 =
            LatticeDensity::from_shape(&[2, 1], vec![0.3, 0.7], Interpretation::Density).unwrap();
        let t2 = LatticeDensity::from_shape(&[3, 1], vec![0.2, 0.3, 0.5], Interpretation::Density)
            .unwrap();
        let m = mixture(&[t1, t2], &[1.0]).unwrap();
        let expected = [0.06, 0.09, 0.15, 0.14, 0.21, 0.35];
        for (v, e) in m.values().iter().zip(expected) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn mixture_point_mass_weight() {
        let t =
            LatticeDensity::from_shape(&[2, 2], vec![0.9, 0.2, 0.1, 0.8], Interpretation::Density)
                .unwrap();
        let m = mixture(&[t.clone(), t], &[0.0, 1.0]).unwrap();
        let expected = [0.04, 0.16, 0.16, 0.64];
        for (v, e) in m.values().iter().zip(expected) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn mixture_errors() {
        let t =
            LatticeDensity::from_shape(&[2, 2], vec![0.9, 0.2, 0.1, 0.8], Interpretation::Density)
                .unwrap();
        assert!(mixture(std::slice::from_ref(&t), &[1.0]).is_err());
        assert!(mixture(std::slice::from_ref(&t), &[0.5, 0.6]).is_err());
        let bad =
            LatticeDensity::from_shape(&[2, 2], vec![0.9, 0.2, 0.2, 0.8], Interpretation::Density)
                .unwrap();
        assert!(mixture(&[t, bad], &[0.5, 0.5]).is_err());
    }
}
