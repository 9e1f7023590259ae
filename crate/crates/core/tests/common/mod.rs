#![allow(dead_code)]

use proptest::prelude::*;
use sponge::model::{BaseIfs, SpongeTemplate};

/// Random grid templates with `d ≤ max_d` and bases between 2 and 5.
pub fn grid_template(max_d: usize) -> impl Strategy<Value = SpongeTemplate> {
    prop::collection::vec(2u32..=5, 1..=max_d).prop_flat_map(|ms| {
        let total: usize = ms.iter().map(|&m| m as usize).product();
        prop::collection::btree_set(0..total, 1..=total.min(12)).prop_map(move |cells| {
            let digits = cells.into_iter().map(|c| unrank(c, &ms)).collect();
            SpongeTemplate::from_grid(&ms, digits).unwrap()
        })
    })
}

/// Random two-dimensional grid carpets with distinct ratios.
pub fn carpet() -> impl Strategy<Value = SpongeTemplate> {
    (2u32..=5, 2u32..=5)
        .prop_filter("distinct bases", |(m, n)| m != n)
        .prop_flat_map(|(m, n)| {
            let total = (m * n) as usize;
            prop::collection::btree_set(0..total, 1..=total.min(10)).prop_map(move |cells| {
                let digits = cells.into_iter().map(|c| unrank(c, &[m, n])).collect();
                SpongeTemplate::from_grid(&[m, n], digits).unwrap()
            })
        })
}

pub fn unrank(mut code: usize, ms: &[u32]) -> Vec<usize> {
    ms.iter()
        .map(|&m| {
            let a = code % m as usize;
            code /= m as usize;
            a
        })
        .collect()
}

/// Probability vector of length `k` with every entry at least `floor`.
pub fn weights(k: usize, floor: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, k).prop_map(move |raw| {
        let s: f64 = raw.iter().sum::<f64>() + 1e-9;
        let p: Vec<f64> = raw.iter().map(|x| floor + (1.0 - k as f64 * floor) * (x + 1e-9 / k as f64) / s).collect();
        let t: f64 = p.iter().sum();
        p.iter().map(|x| x / t).collect()
    })
}

/// Same attractor with the digit list permuted.
pub fn relabel(t: &SpongeTemplate, perm: &[usize]) -> SpongeTemplate {
    let digits = perm.iter().map(|&i| t.digits()[i].clone()).collect();
    SpongeTemplate::new(t.bases().to_vec(), digits).unwrap()
}

pub fn bases_of(t: &SpongeTemplate) -> Vec<BaseIfs> {
    t.bases().to_vec()
}

/// Random templates whose maps have varying ratios `1/k` and offsets on a `1/(2k)` lattice.
pub fn affine_template(max_d: usize) -> impl Strategy<Value = SpongeTemplate> {
    use sponge::model::Similarity1D;
    use sponge::numeric::Num;
    let map = (2i64..=6).prop_flat_map(|k| (Just(k), 0..=(2 * k - 2)));
    let base = prop::collection::vec(map, 1..=3);
    prop::collection::vec(base, 1..=max_d).prop_flat_map(|raw| {
        let bases: Vec<BaseIfs> = raw
            .iter()
            .map(|maps| BaseIfs {
                maps: maps
                    .iter()
                    .map(|&(k, c)| Similarity1D::new(Num::ratio(1, k), Num::ratio(c, 2 * k)).unwrap())
                    .collect(),
                grid: None,
            })
            .collect();
        let ms: Vec<u32> = bases.iter().map(|b| b.len() as u32).collect();
        let total: usize = ms.iter().map(|&m| m as usize).product();
        prop::collection::btree_set(0..total, 1..=total.min(10)).prop_map(move |cells| {
            let digits = cells.into_iter().map(|c| unrank(c, &ms)).collect();
            SpongeTemplate::new(bases.clone(), digits).unwrap()
        })
    })
}

/// The same template with coordinates reordered: new coordinate `k` is old `perm[k]`.
pub fn permute_coordinates(t: &SpongeTemplate, perm: &[usize]) -> SpongeTemplate {
    let bases = perm.iter().map(|&i| t.bases()[i].clone()).collect();
    let digits = t.digits().iter().map(|a| perm.iter().map(|&i| a[i]).collect()).collect();
    SpongeTemplate::new(bases, digits).unwrap()
}
