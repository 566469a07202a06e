//! Inputs shared by the benchmarks.

use gridknot::simplify::scramble;
use gridknot::{extremal_diagram, GridDiagram};

/// Scrambled trivial diagrams, one per seed.
pub fn scrambled(count: u64, steps: usize) -> Vec<GridDiagram> {
    (0..count).map(|seed| scramble(seed, steps)).collect()
}

/// The diagram with the most crossings at size `n`.
pub fn extremal(n: usize) -> GridDiagram {
    extremal_diagram(n).expect("size in range")
}

pub fn trefoil() -> GridDiagram {
    GridDiagram::from_one_based(5, &[(1, 3), (2, 4), (3, 5), (1, 4), (2, 5)]).expect("valid grid")
}
