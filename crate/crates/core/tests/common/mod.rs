//! Shared helpers for the integration suites: seeded random spaces and maps
//! at desk scale.

use bvslab::scalar::Scalar;
use bvslab::space::{FiniteSpace, Point, SelfMap};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random valid distance table: symmetric, zero diagonal, entries p/q with
/// numerator and denominator both in 1..=max_den.
pub fn random_space(rng: &mut ChaCha8Rng, n_points: usize, max_den: i64) -> FiniteSpace {
    let points: Vec<Point> = (0..n_points)
        .map(|i| Point::labeled(format!("p{i}")))
        .collect();
    let mut table = vec![vec![Scalar::zero(); n_points]; n_points];
    for i in 0..n_points {
        for j in i + 1..n_points {
            let num = rng.random_range(1..=max_den);
            let den = rng.random_range(1..=max_den);
            let d = Scalar::ratio(num, den);
            table[i][j] = d.clone();
            table[j][i] = d;
        }
    }
    FiniteSpace::new(points, table).expect("construction is valid by construction")
}

/// Uniformly random self-map given by a full image table.
pub fn random_map(rng: &mut ChaCha8Rng, space: &FiniteSpace) -> SelfMap {
    let entries = space
        .points()
        .iter()
        .map(|p| {
            let target = rng.random_range(0..space.len());
            (p.clone(), space.point(target).clone())
        })
        .collect();
    SelfMap::from_table("random", entries)
}
