//! Fixtures shared by the benchmarks.

use l0_affine::fuzz;
use l0_affine::probes::{self, rng_for};
use l0_affine::{MapSpec, ProbSpace, Vector};

/// A seeded space with `atoms` atoms.
pub fn space(atoms: usize, seed: u64) -> ProbSpace {
    fuzz::random_space(&mut rng_for(seed, 0), atoms, atoms)
}

/// A seeded invertible affine map on `space`.
pub fn affine_map(space: &ProbSpace, dim: usize, seed: u64) -> MapSpec {
    MapSpec::Affine(fuzz::random_invertible_affine(
        &mut rng_for(seed, 1),
        space,
        dim,
    ))
}

/// `count` seeded vector pairs on `space`.
pub fn pairs(space: &ProbSpace, dim: usize, count: usize, seed: u64) -> Vec<(Vector, Vector)> {
    let mut rng = rng_for(seed, 2);
    (0..count)
        .map(|_| {
            (
                probes::random_vector(space, dim, &mut rng),
                probes::random_vector(space, dim, &mut rng),
            )
        })
        .collect()
}
