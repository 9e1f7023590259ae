//! Reference templates used by the tests, the examples and the CLI docs.

use crate::model::{BaseIfs, Digit, Similarity1D, SpongeTemplate};
use crate::numeric::Num;

fn base(ratio: (i64, i64), offsets: &[(i64, i64)]) -> BaseIfs {
    BaseIfs {
        maps: offsets
            .iter()
            .map(|&(n, d)| Similarity1D::new(Num::ratio(ratio.0, ratio.1), Num::ratio(n, d)).expect("valid map"))
            .collect(),
        grid: None,
    }
}

fn digits(list: &[&[usize]]) -> Vec<Digit> {
    list.iter().map(|d| d.to_vec()).collect()
}

/// 3×2 grid carpet with digits `{(0,0),(1,1),(2,0)}`.
pub fn phi1() -> SpongeTemplate {
    SpongeTemplate::from_grid(&[3, 2], digits(&[&[0, 0], &[1, 1], &[2, 0]])).unwrap()
}

/// 3×2 grid carpet with digits `{(0,0),(2,1)}`; reducible.
pub fn phi2() -> SpongeTemplate {
    SpongeTemplate::from_grid(&[3, 2], digits(&[&[0, 0], &[2, 1]])).unwrap()
}

/// 3×2 grid carpet with digits `{(0,0),(1,1),(2,0),(2,1)}`; uniformly irreducible.
pub fn phi3() -> SpongeTemplate {
    SpongeTemplate::from_grid(&[3, 2], digits(&[&[0, 0], &[1, 1], &[2, 0], &[2, 1]])).unwrap()
}

/// Every cell of the `m×n` grid.
pub fn full_grid(m: u32, n: u32) -> SpongeTemplate {
    let ds = (0..m as usize)
        .flat_map(|a| (0..n as usize).map(move |b| vec![a, b]))
        .collect();
    SpongeTemplate::from_grid(&[m, n], ds).unwrap()
}

/// Product of two middle-third Cantor sets.
pub fn cantor_product() -> SpongeTemplate {
    SpongeTemplate::from_grid(&[3, 3], digits(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]])).unwrap()
}

/// The same set as [`cantor_product`] written with distinct ratios: x ratio 1/3
/// at {0,2/3}, y ratio 1/9 at {0,2/9,2/3,8/9}, all eight digits.
pub fn cantor_product_lg() -> SpongeTemplate {
    let x = base((1, 3), &[(0, 1), (2, 3)]);
    let y = base((1, 9), &[(0, 1), (2, 9), (2, 3), (8, 9)]);
    let ds = (0..2).flat_map(|a| (0..4).map(move |b| vec![a, b])).collect();
    SpongeTemplate::new(vec![x, y], ds).unwrap()
}

/// Strongly separated 3×3 carpet: x ratio 1/4 at offsets {0,3/8,3/4},
/// y ratio 1/5 at offsets {0,2/5,4/5}, all nine digits.
pub fn slg9() -> SpongeTemplate {
    let x = base((1, 4), &[(0, 1), (3, 8), (3, 4)]);
    let y = base((1, 5), &[(0, 1), (2, 5), (4, 5)]);
    let ds = (0..3).flat_map(|a| (0..3).map(move |b| vec![a, b])).collect();
    SpongeTemplate::new(vec![x, y], ds).unwrap()
}

/// Strongly separated and reducible: x ratio 1/4 at {0,3/8,3/4}, y ratio 1/5
/// at {0,4/5}, digits `{(0,0),(2,1)}`.
pub fn separated_reducible() -> SpongeTemplate {
    let x = base((1, 4), &[(0, 1), (3, 8), (3, 4)]);
    let y = base((1, 5), &[(0, 1), (4, 5)]);
    SpongeTemplate::new(vec![x, y], digits(&[&[0, 0], &[2, 1]])).unwrap()
}

/// Strongly separated version of [`phi2`] whose flatness exponent is
/// `log 3 / log 2`: x ratio 1/9 at {0,4/9,8/9}, y ratio 1/4 at {0,3/4},
/// digits `{(0,0),(2,1)}`.
pub fn separated_phi2() -> SpongeTemplate {
    let x = base((1, 9), &[(0, 1), (4, 9), (8, 9)]);
    let y = base((1, 4), &[(0, 1), (3, 4)]);
    SpongeTemplate::new(vec![x, y], digits(&[&[0, 0], &[2, 1]])).unwrap()
}

/// 3×2 grid carpet lying on the line `y = 0`.
pub fn flat_line() -> SpongeTemplate {
    SpongeTemplate::from_grid(&[3, 2], digits(&[&[0, 0], &[1, 0]])).unwrap()
}

/// Strongly separated sponge in three dimensions with ratios 1/4, 1/5, 1/6,
/// two maps per coordinate at the interval ends, all eight digits.
pub fn separated_cube() -> SpongeTemplate {
    let x = base((1, 4), &[(0, 1), (3, 4)]);
    let y = base((1, 5), &[(0, 1), (4, 5)]);
    let z = base((1, 6), &[(0, 1), (5, 6)]);
    let ds = (0..8usize).map(|k| vec![k & 1, (k >> 1) & 1, (k >> 2) & 1]).collect();
    SpongeTemplate::new(vec![x, y, z], ds).unwrap()
}
