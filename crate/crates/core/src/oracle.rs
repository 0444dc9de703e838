//! Brute-force references for the traversal and the offsets.
//!
//! Everything here is `O(n³)` or worse and meant for tests, acceptance runs
//! and the hidden `verify` subcommand.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::bbform::{bernstein, halton_tet_points, simplex_indices, Barycentric4, TrivariateMap};
use crate::bounds::PreparedMap;
use crate::cuboid::SlicePlane;
use crate::paving::{BoxId, Paving};
use crate::traversal::{LoopMode, MappedField, Traversal};
use crate::{Error, Point3, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActiveSource {
    InflatedTest,
    DenseSample,
    Traversal,
    Component,
}

impl fmt::Display for ActiveSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            ActiveSource::InflatedTest => "inflated-test",
            ActiveSource::DenseSample => "dense-sample",
            ActiveSource::Traversal => "traversal",
            ActiveSource::Component => "component",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveSet {
    pub ids: BTreeSet<BoxId>,
    pub source: ActiveSource,
}

impl ActiveSet {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn is_subset(&self, other: &ActiveSet) -> bool {
        self.ids.is_subset(&other.ids)
    }
}

/// Every box whose inflated cuboid meets the plane.
pub fn brute_force_active(map: &PreparedMap, paving: Paving, plane: SlicePlane) -> ActiveSet {
    let field = MappedField::new(map, plane, paving, LoopMode::AlwaysScan);
    ActiveSet {
        ids: paving
            .boxes()
            .filter(|&id| field.cuboid(id).intersects_plane(&plane))
            .collect(),
        source: ActiveSource::InflatedTest,
    }
}

/// The boxes emitted by a traversal.
pub fn traversal_active(map: &PreparedMap, paving: Paving, plane: SlicePlane, mode: LoopMode) -> ActiveSet {
    ActiveSet {
        ids: Traversal::mapped(map, plane, paving, mode).collect(),
        source: ActiveSource::Traversal,
    }
}

/// Trilinear weights of the 8 corners (order `4δi + 2δj + δk`) at `s`.
fn trilinear_weights(s: [f64; 3]) -> [f64; 8] {
    std::array::from_fn(|corner| {
        (0..3)
            .map(|ax| if (corner >> (2 - ax)) & 1 == 1 { s[ax] } else { 1.0 - s[ax] })
            .product()
    })
}

/// Grid of `m³` points of the box, `m = max(2, ⌈∛samples⌉)`, through the
/// trilinear interpolant of its (clamped) lattice corners.
pub fn box_samples(paving: &Paving, id: BoxId, samples_per_box: usize) -> Vec<Barycentric4> {
    let mut m = 2;
    while m * m * m < samples_per_box {
        m += 1;
    }
    let lattice = paving.corner_lattice(id);
    let n = f64::from(paving.n());
    let mut out = Vec::with_capacity(m * m * m);
    let step = 1.0 / (m - 1) as f64;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let s = [a as f64 * step, b as f64 * step, c as f64 * step];
                let w = trilinear_weights(s);
                let p: [f64; 3] = std::array::from_fn(|ax| (0..8).map(|c| w[c] * lattice[c][ax]).sum());
                out.push(Barycentric4::from_lattice(p, n));
            }
        }
    }
    out
}

/// Boxes in which sampled values of `g^z` reach both sides of `z0`.
pub fn dense_sample_active(
    map: &PreparedMap,
    paving: Paving,
    plane: SlicePlane,
    samples_per_box: usize,
) -> Result<ActiveSet> {
    if samples_per_box < 8 {
        return Err(Error::InvalidMesh(format!(
            "dense sampling needs at least 8 samples per box, got {samples_per_box}"
        )));
    }
    let ids = paving
        .boxes()
        .filter(|&id| {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for u in box_samples(&paving, id, samples_per_box) {
                let z = map.map.eval(&u.0).z;
                lo = lo.min(z);
                hi = hi.max(z);
            }
            lo <= plane.z0 && plane.z0 <= hi
        })
        .collect();
    Ok(ActiveSet {
        ids,
        source: ActiveSource::DenseSample,
    })
}

/// Partition of `set` under the neighbor relation, each component found by
/// breadth-first search from its smallest member.
pub fn connected_components(set: &ActiveSet, paving: &Paving) -> Vec<ActiveSet> {
    let mut seen: HashSet<BoxId> = HashSet::new();
    let mut out = Vec::new();
    let mut nb = Vec::new();
    for &start in &set.ids {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        while let Some(id) = queue.pop_front() {
            comp.insert(id);
            paving.neighbors_into(id, &mut nb);
            for &b in &nb {
                if set.ids.contains(&b) && seen.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        out.push(ActiveSet {
            ids: comp,
            source: ActiveSource::Component,
        });
    }
    out
}

/// `Σ g_α B_α(u)` summed term by term.
pub fn evaluate_by_summation(map: &TrivariateMap, u: &Barycentric4) -> Point3 {
    simplex_indices::<4>(3)
        .iter()
        .zip(map.coeffs())
        .map(|(a, c)| c * bernstein(a, &u.0))
        .sum()
}

/// Linear interpolant of the four vertex images.
pub fn vertex_interpolant(map: &TrivariateMap, u: &Barycentric4) -> Point3 {
    (0..4).map(|k| map.eval(&Barycentric4::vertex(k).0) * u.0[k]).sum()
}

/// Per-axis maximum of `|g - ℓ|` over `count` quasi-random points, `ℓ` the
/// linear interpolant of the mapped vertices.
pub fn tet_deviation(map: &TrivariateMap, count: usize) -> Point3 {
    halton_tet_points(count).fold(Point3::zeros(), |acc, u| {
        acc.sup(&(map.eval(&u.0) - vertex_interpolant(map, &u)).abs())
    })
}

/// Per-axis maximum deviation of `g` from the trilinear interpolant of its
/// values at the 8 box corners, sampled on an `m³` grid in the box.
pub fn box_deviation(map: &TrivariateMap, paving: &Paving, id: BoxId, per_axis: usize) -> Point3 {
    let m = per_axis.max(2);
    let lattice = paving.corner_lattice(id);
    let n = f64::from(paving.n());
    let vals = lattice.map(|l| map.eval(&Barycentric4::from_lattice(l, n).0));
    let mut dev = Point3::zeros();
    let step = 1.0 / (m - 1) as f64;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let s = [a as f64 * step, b as f64 * step, c as f64 * step];
                let w = trilinear_weights(s);
                let p: [f64; 3] = std::array::from_fn(|ax| (0..8).map(|c| w[c] * lattice[c][ax]).sum());
                let interp: Point3 = (0..8).map(|c| vals[c] * w[c]).sum();
                let g = map.eval(&Barycentric4::from_lattice(p, n).0);
                dev = dev.sup(&(g - interp).abs());
            }
        }
    }
    dev
}

/// Boxes with at least two corners on one edge of `Δ`, i.e. boxes sharing a
/// segment with an edge.
pub fn geometric_edge_boxes(paving: &Paving) -> BTreeSet<BoxId> {
    let n = f64::from(paving.n());
    paving
        .boxes()
        .filter(|&id| {
            let corners = paving.corner_lattice(id).map(|l| Barycentric4::from_lattice(l, n));
            (0..4).any(|a| {
                (a + 1..4).any(|b| {
                    let on: BTreeSet<[u64; 4]> = corners
                        .iter()
                        .filter(|u| u.0[a].abs() < 1e-12 && u.0[b].abs() < 1e-12)
                        .map(|u| u.0.map(|x| (x * 1e9).round() as u64))
                        .collect();
                    on.len() >= 2
                })
            })
        })
        .collect()
}

/// One property checked by [`verify`].
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

/// Settings of [`verify`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub maps: usize,
    pub seed: u64,
    /// Resolutions are `2^1 ..= 2^max_nu`.
    pub max_nu: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            maps: 10,
            seed: 1,
            max_nu: 4,
        }
    }
}

/// Runs the oracle comparisons on seeded random maps.
pub fn verify(cfg: &VerifyConfig) -> Vec<Check> {
    use crate::synthetic::{face_loop_map, random_maps, two_component_map, DEFAULT_AMPLITUDE};
    let maps: Vec<PreparedMap> = random_maps(cfg.seed, cfg.maps, DEFAULT_AMPLITUDE)
        .into_iter()
        .map(PreparedMap::new)
        .collect();
    let mut trials = 0;
    let (mut eq_scan, mut eq_sound, mut dense_ok) = (0, 0, 0);
    for (k, m) in maps.iter().enumerate() {
        for nu in 1..=cfg.max_nu {
            let paving = Paving::new(nu);
            let (lo, hi) = m.z_range;
            let t = ((k as f64 + 0.5) * 0.618_033_988_75 + f64::from(nu) * 0.1).fract();
            let plane = SlicePlane::new(lo + t * (hi - lo), 0);
            let brute = brute_force_active(m, paving, plane);
            let scan = traversal_active(m, paving, plane, LoopMode::AlwaysScan);
            let sound = traversal_active(m, paving, plane, LoopMode::Sound);
            let dense = dense_sample_active(m, paving, plane, 64).expect("64 >= 8");
            trials += 1;
            eq_scan += usize::from(scan.ids == brute.ids);
            eq_sound += usize::from(sound.ids == brute.ids);
            dense_ok += usize::from(dense.is_subset(&sound));
        }
    }
    let mut dominated = 0;
    for m in &maps {
        let dev = tet_deviation(&m.map, 2000);
        dominated += usize::from((0..3).all(|a| dev[a] <= m.offsets.mu[a] + 1e-12));
    }
    let mut out = vec![
        Check {
            name: "always-scan traversal equals brute force",
            passed: eq_scan == trials,
            detail: format!("{eq_scan}/{trials} trials"),
        },
        Check {
            name: "sound traversal equals brute force",
            passed: eq_sound == trials,
            detail: format!("{eq_sound}/{trials} trials"),
        },
        Check {
            name: "dense sampling within traversal",
            passed: dense_ok == trials,
            detail: format!("{dense_ok}/{trials} trials"),
        },
        Check {
            name: "offset dominates sampled deviation",
            passed: dominated == maps.len(),
            detail: format!("{dominated}/{} maps", maps.len()),
        },
    ];

    let paving = Paving::new(4);
    let lp = PreparedMap::new(face_loop_map(0, 0.45));
    let plane = SlicePlane::new(-0.07, 0);
    let truth = dense_sample_active(&lp, paving, plane, 64).expect("64 >= 8");
    let found = traversal_active(&lp, paving, plane, LoopMode::Sound);
    out.push(Check {
        name: "closed face loop found",
        passed: !truth.is_empty() && truth.is_subset(&found),
        detail: format!("{} of {} sampled boxes", truth.ids.intersection(&found.ids).count(), truth.len()),
    });

    let tc = PreparedMap::new(two_component_map(0));
    let plane = SlicePlane::new(0.75, 0);
    let comps = connected_components(&brute_force_active(&tc, paving, plane), &paving);
    let found = traversal_active(&tc, paving, plane, LoopMode::Sound);
    let union: BTreeSet<BoxId> = comps.iter().flat_map(|c| c.ids.iter().copied()).collect();
    out.push(Check {
        name: "both components traversed",
        passed: comps.len() == 2 && found.ids == union,
        detail: format!("{} components, {} boxes", comps.len(), found.len()),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity() -> PreparedMap {
        PreparedMap::new(TrivariateMap::identity(0))
    }

    #[test]
    fn identity_mid_plane_by_hand() {
        let paving = Paving::new(2);
        let plane = SlicePlane::new(0.5, 0);
        let set = brute_force_active(&identity(), paving, plane);
        // z-span of box (i,j,k) is [k/4, (k+1)/4] clipped by the slant plane
        let by_hand: BTreeSet<BoxId> = paving
            .boxes()
            .filter(|b| {
                let l = paving.corner_lattice(*b);
                let lo = l.iter().map(|c| c[2]).fold(f64::INFINITY, f64::min) / 4.0;
                let hi = l.iter().map(|c| c[2]).fold(f64::NEG_INFINITY, f64::max) / 4.0;
                lo <= 0.5 && 0.5 <= hi
            })
            .collect();
        assert_eq!(set.ids, by_hand);
        assert!(set.ids.iter().all(|b| b.col == 1 || b.col == 2));
        assert!(set.ids.contains(&BoxId::new(0, 0, 1)));
        assert!(set.ids.contains(&BoxId::new(0, 0, 2)));
    }

    #[test]
    fn empty_outside_range() {
        let p = Paving::new(3);
        assert!(brute_force_active(&identity(), p, SlicePlane::new(1.5, 0)).is_empty());
        assert!(dense_sample_active(&identity(), p, SlicePlane::new(-0.5, 0), 8).unwrap().is_empty());
        assert!(dense_sample_active(&identity(), p, SlicePlane::new(0.5, 0), 7).is_err());
    }

    #[test]
    fn identity_dense_matches_interval() {
        let p = Paving::new(3);
        let plane = SlicePlane::new(0.3, 0);
        let dense = dense_sample_active(&identity(), p, plane, 27).unwrap();
        let exact: BTreeSet<BoxId> = p
            .boxes()
            .filter(|b| {
                let z: Vec<f64> = p.corner_lattice(*b).iter().map(|c| c[2] / 8.0).collect();
                let lo = z.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                lo <= 0.3 && 0.3 <= hi
            })
            .collect();
        assert_eq!(dense.ids, exact);
        assert!(dense.is_subset(&brute_force_active(&identity(), p, plane)));
    }

    #[test]
    fn components_of_small_sets() {
        let p = Paving::new(3);
        let empty = ActiveSet {
            ids: BTreeSet::new(),
            source: ActiveSource::InflatedTest,
        };
        assert!(connected_components(&empty, &p).is_empty());
        let two = ActiveSet {
            ids: [BoxId::new(0, 0, 0), BoxId::new(0, 0, 5)].into(),
            source: ActiveSource::InflatedTest,
        };
        let comps = connected_components(&two, &p);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].ids.first(), Some(&BoxId::new(0, 0, 0)));
        let band = brute_force_active(&identity(), p, SlicePlane::new(0.4, 0));
        assert_eq!(connected_components(&band, &p).len(), 1);
    }

    #[test]
    fn two_component_construction() {
        let p = Paving::new(4);
        let g = PreparedMap::new(crate::synthetic::two_component_map(0));
        let set = brute_force_active(&g, p, SlicePlane::new(0.75, 0));
        let comps = connected_components(&set, &p);
        assert_eq!(comps.len(), 2);
        let edge: BTreeSet<BoxId> = p.edge_boxes().into_iter().collect();
        for c in &comps {
            assert!(c.ids.iter().any(|b| edge.contains(b)));
        }
    }

    #[test]
    fn summation_matches_de_casteljau() {
        let g = crate::synthetic::random_maps(2, 1, 0.15).remove(0);
        for u in halton_tet_points(50) {
            assert!((evaluate_by_summation(&g, &u) - g.eval(&u.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn identity_has_no_deviation() {
        let g = TrivariateMap::identity(0);
        assert!(tet_deviation(&g, 100).amax() < 1e-15);
        let p = Paving::new(2);
        for b in p.boxes() {
            assert!(box_deviation(&g, &p, b, 4).amax() < 1e-14);
        }
    }

    #[test]
    fn verify_passes_on_small_run() {
        let checks = verify(&VerifyConfig {
            maps: 3,
            seed: 5,
            max_nu: 3,
        });
        for c in &checks {
            assert!(c.passed, "{c}");
        }
    }
}
