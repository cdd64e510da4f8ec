//! Inputs shared by the benchmarks.

use toric_diamond_core::{AugmentedFan, WeightMatrix};

pub fn golden_weights() -> WeightMatrix {
    WeightMatrix::from_i64(&[&[1, 0, 1, 1], &[0, 1, 1, 2]]).unwrap()
}

/// `[I | a | b]` with small coprime entries, `k` rows.
pub fn prime_weights(k: usize) -> WeightMatrix {
    toric_diamond_core::diamond::family_general(k, 1, 0)
        .unwrap()
        .remove(0)
}

pub fn octagon() -> AugmentedFan {
    AugmentedFan::from_pairs(&[
        (1, 1),
        (5, 2),
        (7, 2),
        (5, 1),
        (-1, -1),
        (-5, -2),
        (-7, -2),
        (-5, -1),
    ])
    .unwrap()
}

pub fn hexagon() -> AugmentedFan {
    AugmentedFan::from_pairs(&[(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]).unwrap()
}
