//! Fixed inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spincalc_core::spectral::{DiscreteOperator, Grid, GridFunction};

/// `-c Δ + V` on the unit `points^3` torus with a seeded random potential in `[-lo, lo)`.
pub fn random_operator(points: usize, lo: f64, seed: u64) -> DiscreteOperator {
    let g = Grid::unit(3, points).expect("valid grid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..g.len()).map(|_| rng.random_range(-lo..lo)).collect();
    DiscreteOperator::new(GridFunction::new(g, v).expect("finite values"))
}

/// Seeded strictly negative target curvature on the same grid as `op`.
pub fn random_kappa(op: &DiscreteOperator, seed: u64) -> GridFunction {
    let g = *op.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GridFunction::new(g, (0..g.len()).map(|_| rng.random_range(-2.0..-0.5)).collect()).expect("finite values")
}
