mod common;

use proptest::prelude::*;

use common::{linspace, ordered_integral};
use totpos::lattice::Direction;
use totpos::orderstats::{
    discretize_pair_density, first_k_density, gap_survival_closed, gap_survival_quadrature,
    pair_density, plrd_margin, prd_check, reg_inc_beta, spacing_check, DistributionModel,
    OrderStatContext,
};
use totpos::positivity::{check_pairs, dfr_check, CheckOptions};

fn model(s: &str) -> DistributionModel {
    s.parse().unwrap()
}

#[test]
fn pair_density_integrates_to_one() {
    for spec in ["exp:1", "uniform:0,1", "weibull:2,1"] {
        let m = model(spec);
        let (lo, _) = m.support();
        let hi = m.truncation_point();
        for &(d, i, j) in &[(3, 1, 2), (4, 2, 3), (6, 1, 6)] {
            let ctx = OrderStatContext::new(d, i, j).unwrap();
            let total =
                ordered_integral(2, lo, hi, 20, 12, &|p| pair_density(&m, &ctx, p[0], p[1]));
            assert!((total - 1.0).abs() < 1e-6, "{spec} {d},{i},{j}: {total}");
        }
    }
}

#[test]
fn first_k_density_integrates_to_one() {
    let m = model("exp:1");
    for &(d, k) in &[(2, 2), (3, 3), (4, 3)] {
        let total = ordered_integral(k, 0.0, m.truncation_point(), 20, 12, &|p| {
            first_k_density(&m, d, p).unwrap()
        });
        assert!((total - 1.0).abs() < 1e-6, "d={d} k={k}: {total}");
    }
}

#[test]
fn gap_survival_examples() {
    let e = model("exp:1");
    let ctx = OrderStatContext::new(3, 1, 3).unwrap();
    for &x in &[0.0, 0.4, 2.5] {
        let a = gap_survival_closed(&e, &ctx, x, 0.5).unwrap();
        let b = gap_survival_quadrature(&e, &ctx, x, 0.5).unwrap();
        assert!((a - b).abs() < 1e-8);
        // Gap of the top two of three memoryless draws: 1 - (1 - e^-y)^2.
        let want = 1.0 - (1.0 - (-0.5f64).exp()).powi(2);
        assert!((a - want).abs() < 1e-12, "{a} vs {want}");
    }
}

#[test]
fn prd_follows_dfr() {
    let ys = [0.1, 0.25, 0.5, 1.0, 2.0];
    for spec in [
        "exp:1",
        "pareto:1,2",
        "weibull:0.5,1",
        "weibull:2,1",
        "weibull:1.5,2",
    ] {
        let m = model(spec);
        let xs = linspace(m.quantile(0.01), m.quantile(0.95), 50);
        let dfr = dfr_check(&m, &xs, &ys, 1e-12).unwrap();
        assert_eq!(dfr.passed(), m.is_dfr(), "{spec}");
        for &(d, i, j) in &[(4, 1, 3), (5, 2, 4), (3, 1, 2)] {
            let ctx = OrderStatContext::new(d, i, j).unwrap();
            let prd = prd_check(&m, &ctx, &xs, &ys, 1e-12).unwrap();
            assert_eq!(prd.passed(), dfr.passed(), "{spec} {d},{i},{j}");
            let s_grid = linspace(m.support().0, m.quantile(0.9), 40);
            let sp = spacing_check(&m, d, i + 1, &s_grid, &[0.1, 0.5, 1.0], 1e-12).unwrap();
            assert_eq!(sp.passed(), dfr.passed(), "spacing {spec} {d},{}", i + 1);
        }
    }
}

#[test]
fn discretized_pair_densities_pass_pairs_check() {
    let cases = [
        ("exp:1", 3, 1, 2, 0.0, 5.0, 20),
        ("uniform:0,1", 5, 2, 4, 0.0, 1.0, 15),
    ];
    for (spec, d, i, j, lo, hi, n) in cases {
        let m = model(spec);
        let ctx = OrderStatContext::new(d, i, j).unwrap();
        let grid = linspace(lo, hi, n);
        let f = discretize_pair_density(&m, &ctx, &grid, &grid).unwrap();
        let r = check_pairs(&f, &Direction::ones(2), &CheckOptions::default()).unwrap();
        assert!(r.passed(), "{spec}: {}", r.to_json());
    }
}

#[test]
fn pair_density_matches_first_two_joint() {
    let u = model("uniform:0,1");
    let ctx = OrderStatContext::new(2, 1, 2).unwrap();
    for &(x, y) in &[(0.1, 0.2), (0.3, 0.9), (0.0, 1.0)] {
        assert_eq!(pair_density(&u, &ctx, x, y), 2.0 * u.pdf(x) * u.pdf(y));
    }
}

fn any_model() -> impl Strategy<Value = DistributionModel> {
    prop_oneof![
        Just(model("uniform:0,1")),
        Just(model("exp:1")),
        Just(model("weibull:0.5,1")),
        Just(model("weibull:2,1")),
        Just(model("pareto:1,2")),
    ]
}

fn ranks() -> impl Strategy<Value = (usize, usize, usize)> {
    (2usize..=6)
        .prop_flat_map(|d| (Just(d), 1..d))
        .prop_flat_map(|(d, i)| (Just(d), Just(i), i + 1..=d))
}

proptest! {
    #[test]
    fn plrd_margin_is_nonnegative(
        m in any_model(),
        (d, i, j) in ranks(),
        u in prop::array::uniform4(1e-6f64..0.999999),
    ) {
        let ctx = OrderStatContext::new(d, i, j).unwrap();
        let q: Vec<f64> = u.iter().map(|&p| m.quantile(p)).collect();
        let (x, x2) = (q[0].min(q[1]), q[0].max(q[1]));
        let (y, y2) = (q[2].min(q[3]), q[2].max(q[3]));
        prop_assert!(plrd_margin(&m, &ctx, x, x2, y, y2).unwrap() >= -1e-12);
    }

    #[test]
    fn gap_survival_decreases_in_y(
        m in any_model(),
        (d, i, j) in ranks(),
        p in 0.01f64..0.9,
        y in 0.0f64..3.0,
        dy in 0.0f64..1.0,
    ) {
        let ctx = OrderStatContext::new(d, i, j).unwrap();
        let x = m.quantile(p);
        let a = gap_survival_closed(&m, &ctx, x, y).unwrap();
        let b = gap_survival_closed(&m, &ctx, x, y + dy).unwrap();
        prop_assert!(b <= a + 1e-14);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn incomplete_beta_stays_in_unit_interval(u in 0.0f64..=1.0, a in 0.05f64..50.0, b in 0.05f64..50.0) {
        let v = reg_inc_beta(u, a, b).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }
}
