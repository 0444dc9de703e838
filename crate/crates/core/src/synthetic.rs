//! Constructed maps for examples, tests and the `verify` subcommand.

use nalgebra::{Matrix3, Rotation3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bbform::{validate_map, MultiIndex, TrivariateMap};
use crate::bounds::JACOBIAN_SAMPLES;
use crate::Point3;

/// Largest coefficient perturbation used by [`random_map`], in units of the
/// domain edge length.
pub const DEFAULT_AMPLITUDE: f64 = 0.15;

/// Identity plus a uniform perturbation of every coefficient in
/// `[-amplitude, amplitude]³`, redrawn until the sampled Jacobian is positive.
pub fn random_map<R: Rng>(id: u32, amplitude: f64, rng: &mut R) -> TrivariateMap {
    loop {
        let mut g = TrivariateMap::identity(id);
        for c in g.coeffs_mut() {
            *c += Point3::from_fn(|_, _| rng.gen_range(-amplitude..=amplitude));
        }
        if !validate_map(&g, JACOBIAN_SAMPLES).non_positive {
            return g;
        }
    }
}

/// `count` random maps with ids `0..count` from a fixed seed.
pub fn random_maps(seed: u64, count: usize, amplitude: f64) -> Vec<TrivariateMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count as u32).map(|id| random_map(id, amplitude, &mut rng)).collect()
}

/// Identity with the `z` of coefficient `(1,1,1,0)` lowered by `depth`.
///
/// On the face `u3 = 0` the height becomes `-6 depth u0 u1 u2`, dipping to
/// `-2 depth / 9` at the face centroid while every edge stays at `z = 0`.
/// A plane slightly below zero therefore meets that face in a closed loop
/// and no edge at all.
pub fn face_loop_map(id: u32, depth: f64) -> TrivariateMap {
    let mut g = TrivariateMap::identity(id);
    let a = MultiIndex([1, 1, 1, 0]);
    g.set_coeff(a, g.coeff(a) - Point3::new(0.0, 0.0, depth));
    g
}

/// `x = u1, y = u2, z = u3 - u1 + 2 u1²`, Jacobian 1.
///
/// For `z0` in `(1/2, 1)` the plane meets the image in two pieces, one near
/// the vertex `u1 = 1` and one near the vertex `u3 = 1`, with nothing
/// between them around `u1 = 1/2`.
pub fn two_component_map(id: u32) -> TrivariateMap {
    TrivariateMap::interpolate(id, |u| {
        let [_, u1, u2, u3] = u.0;
        Point3::new(u1, u2, u3 - u1 + 2.0 * u1 * u1)
    })
}

/// The identity tetrahedron rotated by `r` about its centroid, then moved by `t`.
pub fn placed_identity(id: u32, r: &Matrix3<f64>, t: Point3) -> TrivariateMap {
    let c = Point3::new(0.25, 0.25, 0.25);
    TrivariateMap::identity(id).transformed(r, &(t + c - r * c))
}

/// Twenty perturbed maps stacked along `z` in a staggered column, so that
/// they become active at different planes of a sweep over `[0, 3]`.
pub fn stacked_mesh(seed: u64) -> Vec<TrivariateMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..20u32)
        .map(|id| {
            let base = random_map(id, 0.1, &mut rng);
            let shift = Point3::new(
                f64::from(id % 4) * 0.6,
                f64::from(id / 4 % 2) * 0.6,
                f64::from(id) * 0.11 + rng.gen_range(0.0..0.05),
            );
            base.transformed(&Matrix3::identity(), &shift)
        })
        .collect()
}

/// The bundled demonstration mesh: a 4 × 3 × 3 block of gently twisted,
/// perturbed tetrahedra.
pub fn demo_mesh() -> Vec<TrivariateMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for layer in 0..3 {
        for row in 0..3 {
            for col in 0..4 {
                let id = out.len() as u32;
                let twist = Rotation3::from_axis_angle(&Point3::z_axis(), 0.15 * f64::from(layer));
                let placed = placed_identity(
                    id,
                    twist.matrix(),
                    Point3::new(f64::from(col) * 0.8, f64::from(row) * 0.8, f64::from(layer) * 0.7),
                );
                let mut g = placed;
                loop {
                    let mut trial = g.clone();
                    for c in trial.coeffs_mut() {
                        *c += Point3::from_fn(|_, _| rng.gen_range(-0.08..=0.08));
                    }
                    if !validate_map(&trial, JACOBIAN_SAMPLES).non_positive {
                        g = trial;
                        break;
                    }
                }
                out.push(g);
            }
        }
    }
    out
}
