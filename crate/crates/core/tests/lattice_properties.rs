use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use totpos::generate;
use totpos::lattice::{
    from_json_str, marginalize, mixture, product, reflect, relabel_axes, survival_upper,
    to_json_string, AxisRelabel, Direction, Interpretation, LatticeDensity,
};
use totpos::positivity::{
    check_chain, check_full, check_pairs, check_survival, CheckOptions, CheckReport,
};

fn lattice_strategy(max_dim: usize, max_len: usize) -> impl Strategy<Value = LatticeDensity> {
    prop::collection::vec(1usize..=max_len, 1..=max_dim).prop_flat_map(|shape| {
        let n: usize = shape.iter().product();
        prop::collection::vec(0.0f64..1.0, n).prop_map(move |values| {
            LatticeDensity::from_shape(&shape, values, Interpretation::Density).unwrap()
        })
    })
}

fn pmf_strategy(max_dim: usize, max_len: usize) -> impl Strategy<Value = LatticeDensity> {
    prop::collection::vec(1usize..=max_len, 1..=max_dim).prop_flat_map(|shape| {
        let n: usize = shape.iter().product();
        prop::collection::vec(0.01f64..1.0, n).prop_map(move |values| {
            LatticeDensity::from_shape(&shape, values, Interpretation::Density)
                .unwrap()
                .normalized()
                .unwrap()
        })
    })
}

fn with_direction(
    s: impl Strategy<Value = LatticeDensity>,
) -> impl Strategy<Value = (LatticeDensity, Direction)> {
    s.prop_flat_map(|f| {
        let d = f.dim();
        (
            Just(f),
            prop::collection::vec(any::<bool>(), d).prop_map(|bits| {
                Direction::new(bits.into_iter().map(|b| if b { 1 } else { -1 }).collect()).unwrap()
            }),
        )
    })
}

fn opts() -> CheckOptions {
    CheckOptions::default()
}

fn sorted_bits(values: &[f64]) -> Vec<u64> {
    let mut v: Vec<u64> = values.iter().map(|x| x.to_bits()).collect();
    v.sort_unstable();
    v
}

fn same_outcome(a: &CheckReport, b: &CheckReport) -> bool {
    a.verdict == b.verdict
        && a.min_margin.to_bits() == b.min_margin.to_bits()
        && a.quadruples_checked == b.quadruples_checked
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reflect_is_an_involution((f, alpha) in with_direction(lattice_strategy(3, 4))) {
        let g = reflect(&f, &alpha).unwrap();
        prop_assert_eq!(sorted_bits(g.values()), sorted_bits(f.values()));
        prop_assert_eq!(reflect(&g, &alpha).unwrap(), f);
    }

    #[test]
    fn marginalize_composes(f in pmf_strategy(3, 3)) {
        let d = f.dim();
        let all: Vec<usize> = (0..d).collect();
        let inner: Vec<usize> = all.iter().copied().filter(|&k| k != d - 1 || d == 1).collect();
        let once = marginalize(&f, &inner).unwrap();
        let twice = marginalize(&once, &[0]).unwrap();
        let direct = marginalize(&f, &[0]).unwrap();
        prop_assert_eq!(twice.shape(), direct.shape());
        for (a, b) in twice.values().iter().zip(direct.values()) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn product_mass_multiplies(a in pmf_strategy(2, 3), b in pmf_strategy(2, 3)) {
        let p = product(&a, &b).unwrap();
        prop_assert_eq!(p.dim(), a.dim() + b.dim());
        prop_assert!((p.total_mass() - a.total_mass() * b.total_mass()).abs() <= 1e-12);
    }

    #[test]
    fn survival_is_nonincreasing(f in pmf_strategy(3, 4)) {
        let s = survival_upper(&f).unwrap();
        for flat in 0..s.len() {
            let idx = s.unravel(flat);
            for k in 0..s.dim() {
                if idx[k] + 1 < s.shape()[k] {
                    let mut next = idx.clone();
                    next[k] += 1;
                    prop_assert!(s.value_at(&next) <= s.value_at(&idx));
                }
            }
        }
    }

    #[test]
    fn relabel_leaves_reports_bit_identical(
        (f, alpha) in with_direction(lattice_strategy(3, 3)),
        scale in 0.1f64..10.0,
        shift in -5.0f64..5.0,
    ) {
        let maps = AxisRelabel::from_fn(&f, |k, x| {
            if k % 2 == 0 { scale * x + shift } else { x.exp() }
        }).unwrap();
        let g = relabel_axes(&f, &maps).unwrap();
        prop_assert_eq!(g.values(), f.values());
        let o = opts();
        prop_assert!(same_outcome(&check_pairs(&f, &alpha, &o).unwrap(), &check_pairs(&g, &alpha, &o).unwrap()));
        prop_assert!(same_outcome(&check_full(&f, &alpha, &o).unwrap(), &check_full(&g, &alpha, &o).unwrap()));
        prop_assert!(same_outcome(&check_chain(&f, &alpha, &o).unwrap(), &check_chain(&g, &alpha, &o).unwrap()));
    }

    #[test]
    fn mixture_of_stochastic_tables_has_unit_mass(seed in any::<u64>(), d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = generate::random_direction(&mut rng, d);
        let shape: Vec<usize> = (0..d).map(|k| 2 + (seed as usize >> k) % 3).collect();
        let m = generate::tp2_mixture(&mut rng, &shape, &alpha).unwrap();
        prop_assert!((m.total_mass() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn direction_symmetry((f, alpha) in with_direction(lattice_strategy(3, 4))) {
        let o = opts();
        let v = check_pairs(&f, &alpha, &o).unwrap().verdict;
        prop_assert_eq!(check_pairs(&f, &alpha.negated(), &o).unwrap().verdict, v);
        let g = reflect(&f, &alpha).unwrap();
        prop_assert_eq!(check_pairs(&g, &Direction::ones(f.dim()), &o).unwrap().verdict, v);
    }

    #[test]
    fn checkers_agree_outside_band((f, alpha) in with_direction(lattice_strategy(3, 3))) {
        let o = opts();
        let reports = [
            check_pairs(&f, &alpha, &o).unwrap(),
            check_full(&f, &alpha, &o).unwrap(),
            check_chain(&f, &alpha, &o).unwrap(),
        ];
        if reports.iter().all(|r| r.min_margin.abs() > 2.0 * o.tol) {
            prop_assert!(reports.iter().all(|r| r.verdict == reports[0].verdict));
        }
    }

    #[test]
    fn outer_products_pass_every_direction(seed in any::<u64>(), d in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape: Vec<usize> = (0..d).map(|k| 2 + (seed as usize >> (2 * k)) % 3).collect();
        let f = generate::independent_product(&mut rng, &shape).unwrap();
        for alpha in Direction::all(d) {
            prop_assert!(check_pairs(&f, &alpha, &opts()).unwrap().passed(), "{}", alpha);
        }
    }

    #[test]
    fn subset_closure(seed in any::<u64>(), kind in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, alpha) = generate::constructed_directional(&mut rng, &[3, 3, 3], kind).unwrap();
        prop_assert!(check_pairs(&f, &alpha, &opts()).unwrap().passed());
        for keep in [vec![0], vec![1], vec![0, 1], vec![0, 2], vec![1, 2]] {
            let g = marginalize(&f, &keep).unwrap();
            let beta = alpha.restrict(&keep).unwrap();
            prop_assert!(check_pairs(&g, &beta, &opts()).unwrap().passed(), "{:?}", keep);
        }
    }

    #[test]
    fn concatenation_closure(seed in any::<u64>(), ka in 0usize..4, kb in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, alpha) = generate::constructed_directional(&mut rng, &[3, 2], ka).unwrap();
        let (b, beta) = generate::constructed_directional(&mut rng, &[2, 3], kb).unwrap();
        let p = product(&a, &b).unwrap();
        prop_assert!(check_pairs(&p, &alpha.concat(&beta), &opts()).unwrap().passed());
    }

    #[test]
    fn survival_forward_direction(seed in any::<u64>(), kind in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, alpha) = generate::constructed_directional(&mut rng, &[3, 3, 3], kind).unwrap();
        prop_assert!(check_pairs(&f, &alpha, &opts()).unwrap().passed());
        prop_assert!(check_survival(&f, &alpha, &opts()).unwrap().passed());
    }

    #[test]
    fn zero_right_hand_side_never_violates(f in lattice_strategy(2, 4), cells in prop::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        // Zeroing cells can only create violations where the zero sits on the
        // left-hand side; a quadruple with rhs = 0 holds.
        let mut values = f.values().to_vec();
        let n = values.len();
        for c in &cells {
            values[c.index(n)] = 0.0;
        }
        let g = LatticeDensity::new(f.axes().to_vec(), values, Interpretation::Density).unwrap();
        let r = check_pairs(&g, &Direction::ones(g.dim()), &opts()).unwrap();
        if let Some(w) = r.witness {
            prop_assert!(w.rhs > 0.0);
        }
    }

    #[test]
    fn json_round_trip_is_exact(f in lattice_strategy(3, 4)) {
        let text = to_json_string(&f);
        prop_assert_eq!(from_json_str(&text).unwrap(), f);
    }
}

#[test]
fn mixture_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let alpha = generate::random_direction(&mut rng, 3);
        let n_y = 3;
        let tables: Vec<LatticeDensity> = alpha
            .signs()
            .iter()
            .map(|&s| generate::tp2_table(&mut rng, 3, n_y, s).unwrap())
            .collect();
        for (t, &s) in tables.iter().zip(alpha.signs()) {
            let dir = Direction::new(vec![s, 1]).unwrap();
            assert!(check_pairs(t, &dir, &opts()).unwrap().passed());
        }
        let m = mixture(&tables, &[0.2, 0.5, 0.3]).unwrap();
        assert!(check_pairs(&m, &alpha, &opts()).unwrap().passed());
    }
}
