mod common;

use proptest::prelude::*;
use sponge::dimension::*;
use sponge::fixtures;
use sponge::model::{BaseIfs, BernoulliWeights, Similarity1D, SpongeTemplate};
use sponge::numeric::Num;

const LY_PHI1_UNIFORM: f64 = 1.3389156697687943;
const MCMULLEN_PHI1: f64 = 1.3496838201955774;

fn moran_residual(ratios: &[f64], s: f64) -> f64 {
    (ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0).abs()
}

/// Full product of a two-map base with unequal ratios and a two-map base with equal ratios.
fn uneven_product() -> SpongeTemplate {
    let map = |r: i64, o: (i64, i64)| Similarity1D::new(Num::ratio(1, r), Num::ratio(o.0, o.1)).unwrap();
    let x = BaseIfs { maps: vec![map(2, (0, 1)), map(4, (3, 4))], grid: None };
    let y = BaseIfs { maps: vec![map(5, (0, 1)), map(5, (4, 5))], grid: None };
    SpongeTemplate::new(vec![x, y], vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap()
}

fn base_moran(t: &SpongeTemplate) -> f64 {
    (0..t.dim())
        .map(|i| {
            let ratios: Vec<f64> = t.bases()[i].maps.iter().map(|m| m.magnitude().to_f64()).collect();
            moran_dimension(&ratios).unwrap()
        })
        .sum()
}

#[test]
fn moran_closed_forms() {
    assert!((moran_dimension(&[0.5, 0.5]).unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(moran_dimension(&[0.3]).unwrap(), 0.0);
    let s = moran_dimension(&[1.0 / 3.0, 1.0 / 3.0]).unwrap();
    assert!((s - 2f64.ln() / 3f64.ln()).abs() <= 1e-12);
    assert!(moran_dimension(&[]).is_err());
}

#[test]
fn phi1_fibers() {
    let f = fiber_systems(&fixtures::phi1(), &[1, 0]).unwrap();
    assert_eq!(f.levels[0].fibers.len(), 1);
    assert_eq!(f.levels[0].fibers[0].letters, vec![0, 1]);
    let second: Vec<(Vec<usize>, Vec<usize>)> =
        f.levels[1].fibers.iter().map(|x| (x.prefix.clone(), x.letters.clone())).collect();
    assert_eq!(second, vec![(vec![0], vec![0, 2]), (vec![1], vec![1])]);

    let f = fiber_systems(&fixtures::phi2(), &[1, 0]).unwrap();
    let second: Vec<(Vec<usize>, Vec<usize>)> =
        f.levels[1].fibers.iter().map(|x| (x.prefix.clone(), x.letters.clone())).collect();
    assert_eq!(second, vec![(vec![0], vec![0]), (vec![1], vec![2])]);

    let f = fiber_systems(&fixtures::full_grid(4, 3), &[1, 0]).unwrap();
    assert!(f.levels[0].fibers.iter().all(|x| x.letters == vec![0, 1, 2]));
    assert!(f.levels[1].fibers.iter().all(|x| x.letters == vec![0, 1, 2, 3]));
}

#[test]
fn formula_examples() {
    let a = assouad_formula(&fixtures::phi1()).unwrap();
    assert!((a.lower - 1.0).abs() < 1e-12);
    assert!((a.upper - (1.0 + 2f64.ln() / 3f64.ln())).abs() < 1e-12);
    let sq = assouad_formula(&fixtures::full_grid(3, 2)).unwrap();
    assert!((sq.lower - 2.0).abs() < 1e-12 && (sq.upper - 2.0).abs() < 1e-12);
    let c = assouad_formula(&fixtures::cantor_product_lg()).unwrap();
    let moran = moran_dimension(&[1.0 / 3.0; 4]).unwrap();
    assert!((c.lower - moran).abs() < 1e-12 && (c.upper - moran).abs() < 1e-12);
    assert!(assouad_formula(&fixtures::cantor_product()).is_err());
    let s = assouad_formula(&fixtures::slg9()).unwrap();
    let expected = 3f64.ln() / 4f64.ln() + 3f64.ln() / 5f64.ln();
    assert!((s.lower - expected).abs() < 1e-12 && (s.upper - expected).abs() < 1e-12);
    assert!((s.lower - 1.4750875).abs() < 1e-7);
}

#[test]
fn ly_examples() {
    let ly = ly_dimension(&fixtures::phi1(), &BernoulliWeights::uniform(3)).unwrap();
    assert!((ly.value - LY_PHI1_UNIFORM).abs() < 1e-12);
    let closed = (3f64.ln() - 2.0 / 3.0 * 2f64.ln()) / 2f64.ln() + (2.0 / 3.0 * 2f64.ln()) / 3f64.ln();
    assert!((ly.value - closed).abs() < 1e-12);
    let grid = ly_dimension(&fixtures::full_grid(4, 3), &BernoulliWeights::uniform(12)).unwrap();
    assert!((grid.value - 2.0).abs() < 1e-12);
    let point = BernoulliWeights::from_f64(vec![1.0, 0.0, 0.0]).unwrap();
    assert!(ly_dimension(&fixtures::phi1(), &point).unwrap().value.abs() < 1e-12);
}

#[test]
fn mcmullen_examples() {
    let m = mcmullen_dimension(&fixtures::phi1()).unwrap();
    assert!((m - MCMULLEN_PHI1).abs() < 1e-12);
    assert!((m - (2f64.powf(2f64.ln() / 3f64.ln()) + 1.0).log2()).abs() < 1e-12);
    assert!((mcmullen_dimension(&fixtures::full_grid(3, 2)).unwrap() - 2.0).abs() < 1e-12);
    let row = SpongeTemplate::from_grid(&[5, 3], (0..5).map(|a| vec![a, 0]).collect()).unwrap();
    assert!((mcmullen_dimension(&row).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn dynamical_examples() {
    let opts = DynOptions::default();
    let grid = dynamical_dimension(&fixtures::full_grid(3, 2), &opts);
    assert!((grid.value - 2.0).abs() < 1e-6);
    assert!(grid.weights.iter().all(|w| (w - 1.0 / 6.0).abs() < 1e-6));
    let single = SpongeTemplate::from_grid(&[3, 2], vec![vec![1, 1]]).unwrap();
    assert!(dynamical_dimension(&single, &opts).value.abs() < 1e-12);
    assert!((dynamical_dimension(&fixtures::phi1(), &opts).value - MCMULLEN_PHI1).abs() < 1e-4);
}

#[test]
fn products_reach_their_moran_sum() {
    let opts = DynOptions::default();
    for t in [fixtures::slg9(), fixtures::separated_cube(), fixtures::full_grid(4, 3), uneven_product()] {
        let d = dynamical_dimension(&t, &opts);
        assert!((d.value - base_moran(&t)).abs() < 1e-6, "{} vs {}", d.value, base_moran(&t));
    }
}

#[test]
fn separation_examples() {
    let s = separation_constant(&fixtures::slg9(), &[0, 1]).unwrap();
    assert_eq!(s.value, Some(Num::ratio(1, 8)));
    let touching = separation_constant(&fixtures::phi1(), &[1, 0]).unwrap();
    assert_eq!(touching.value, Some(Num::zero()));
    assert!(!touching.warnings.is_empty());
    let single = SpongeTemplate::from_grid(&[3, 2], vec![vec![1, 1]]).unwrap();
    assert_eq!(separation_constant(&single, &[1, 0]).unwrap().value, None);
}

#[test]
fn sup_property_on_fixtures() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for t in [fixtures::phi1(), fixtures::phi3(), fixtures::cantor_product(), fixtures::slg9(), fixtures::separated_cube()] {
        let best = dynamical_dimension(&t, &DynOptions::default()).value;
        for _ in 0..100 {
            let raw: Vec<f64> = (0..t.num_digits()).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let s: f64 = raw.iter().sum();
            let w = BernoulliWeights::from_f64(raw.iter().map(|x| x / s).collect()).unwrap();
            assert!(ly_dimension(&t, &w).unwrap().value <= best + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn moran_roots(ratios in prop::collection::vec(0.01f64..0.99, 1..12), extra in 0.01f64..0.99) {
        let s = moran_dimension(&ratios).unwrap();
        prop_assert!(s >= 0.0);
        if ratios.len() > 1 {
            prop_assert!(moran_residual(&ratios, s) <= 1e-10);
        }
        let mut more = ratios.clone();
        more.push(extra);
        let grown = moran_dimension(&more).unwrap();
        prop_assert!(grown >= s);
        if extra.powf(s) > 1e-9 {
            prop_assert!(grown > s);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn formula_is_coherent(t in prop_oneof![common::carpet(), common::grid_template(3)]) {
        if let Ok(a) = assouad_formula(&t) {
            prop_assert!(a.lower <= a.upper + 1e-12);
            let mut lower = 0.0;
            let mut upper = 0.0;
            for level in &a.levels {
                let dims: Vec<f64> = level.fiber_dims.iter().map(|x| x.1).collect();
                prop_assert!(dims.iter().all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
                let lo = dims.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = dims.iter().copied().fold(0.0, f64::max);
                prop_assert_eq!(level.lower, lo);
                prop_assert_eq!(level.upper, hi);
                lower += lo;
                upper += hi;
            }
            prop_assert!((a.lower - lower).abs() < 1e-12 && (a.upper - upper).abs() < 1e-12);
            let fibers = fiber_systems(&t, &a.sigma).unwrap();
            for (k, level) in fibers.levels.iter().enumerate() {
                prop_assert!(level.fibers.iter().all(|f| !f.letters.is_empty()));
                let mut union: Vec<Vec<usize>> = level
                    .fibers
                    .iter()
                    .flat_map(|f| {
                        f.letters.iter().map(|&b| {
                            let mut p = f.prefix.clone();
                            p.push(b);
                            p
                        })
                    })
                    .collect();
                union.sort();
                let mut projected: Vec<Vec<usize>> =
                    t.digits().iter().map(|d| a.sigma[..=k].iter().map(|&i| d[i]).collect()).collect();
                projected.sort();
                projected.dedup();
                prop_assert_eq!(union, projected);
            }
        }
    }

    #[test]
    fn mcmullen_between_formula_bounds(t in common::carpet()) {
        let a = assouad_formula(&t).unwrap();
        let m = mcmullen_dimension(&t).unwrap();
        prop_assert!(a.lower - 1e-9 <= m && m <= a.upper + 1e-9);
    }

    #[test]
    fn ly_ignores_digit_labels(
        (t, p, perm) in common::affine_template(3).prop_flat_map(|t| {
            let k = t.num_digits();
            (Just(t), common::weights(k, 0.0), Just((0..k).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let w = BernoulliWeights::from_f64(p.clone()).unwrap();
        let moved = common::relabel(&t, &perm);
        let moved_w = BernoulliWeights::from_f64(perm.iter().map(|&i| p[i]).collect()).unwrap();
        let a = ly_dimension(&t, &w).unwrap().value;
        let b = ly_dimension(&moved, &moved_w).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12);
        if let (Ok(x), Ok(y)) = (assouad_formula(&t), assouad_formula(&moved)) {
            prop_assert!((x.lower - y.lower).abs() < 1e-12 && (x.upper - y.upper).abs() < 1e-12);
        }
    }

    #[test]
    fn ly_ignores_coordinate_order(
        (t, p, perm) in common::affine_template(3).prop_flat_map(|t| {
            let k = t.num_digits();
            let d = t.dim();
            (Just(t), common::weights(k, 0.0), Just((0..d).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let w = BernoulliWeights::from_f64(p).unwrap();
        let moved = common::permute_coordinates(&t, &perm);
        let a = ly_dimension(&t, &w).unwrap().value;
        let b = ly_dimension(&moved, &w).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
        match (assouad_formula(&t), assouad_formula(&moved)) {
            (Ok(x), Ok(y)) => {
                prop_assert!((x.lower - y.lower).abs() < 1e-12 && (x.upper - y.upper).abs() < 1e-12);
                let transported: Vec<usize> = x.sigma.iter().map(|&i| perm.iter().position(|&k| k == i).unwrap()).collect();
                prop_assert_eq!(transported, y.sigma);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "formula availability changed under a coordinate permutation"),
        }
    }

    #[test]
    fn ly_tie_blocks_are_symmetric(
        (t, p) in (2u32..=5, 1usize..=3).prop_flat_map(|(m, d)| {
            let total = (m as usize).pow(d as u32);
            prop::collection::btree_set(0..total, 1..=total.min(10)).prop_map(move |cells| {
                let ms = vec![m; d];
                SpongeTemplate::from_grid(&ms, cells.into_iter().map(|c| common::unrank(c, &ms)).collect()).unwrap()
            })
        }).prop_flat_map(|t| { let k = t.num_digits(); (Just(t), common::weights(k, 0.0)) })
    ) {
        let w = BernoulliWeights::from_f64(p).unwrap();
        let base = ly_dimension(&t, &w).unwrap().value;
        let d = t.dim();
        let reversed: Vec<usize> = (0..d).rev().collect();
        let moved = common::permute_coordinates(&t, &reversed);
        prop_assert!((ly_dimension(&moved, &w).unwrap().value - base).abs() <= 1e-12);
    }

    #[test]
    fn dynamical_beats_random_measures(
        (t, ps) in common::carpet().prop_flat_map(|t| {
            let k = t.num_digits();
            (Just(t), prop::collection::vec(common::weights(k, 0.0), 5))
        })
    ) {
        let best = dynamical_dimension(&t, &DynOptions { restarts: 8, ..DynOptions::default() }).value;
        for p in ps {
            let w = BernoulliWeights::from_f64(p).unwrap();
            prop_assert!(ly_dimension(&t, &w).unwrap().value <= best + 1e-9);
        }
    }
}
