//! The multi-map, multi-plane driver.
//!
//! Maps are bucketed by the plane at which they first become active (the
//! first plane at or above their lowest control point). The sweep adds each
//! bucket to the active set as its plane is reached, drops maps whose
//! highest control point lies below the plane, and traverses every remaining
//! map-plane pair.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::bounds::PreparedMap;
use crate::cuboid::SlicePlane;
use crate::microstructure::{self, CellTemplate, Polyline};
use crate::paving::{BoxId, Paving};
use crate::traversal::{LoopMode, Traversal};
use crate::{Error, Point2, Result};

/// Ascending slice heights.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneStack {
    z: Vec<f64>,
    uniform: Option<(f64, f64)>,
}

impl PlaneStack {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        for (i, w) in z.iter().enumerate() {
            if !w.is_finite() || (i > 0 && !(z[i - 1] < *w)) {
                return Err(Error::UnsortedPlanes(i));
            }
        }
        Ok(PlaneStack { z, uniform: None })
    }

    /// `count` planes `start, start + step, ...`. Bucketing uses direct
    /// indexing for these.
    pub fn uniform(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) && count > 1 {
            return Err(Error::UnsortedPlanes(1));
        }
        let z = (0..count).map(|i| start + step * i as f64).collect();
        let mut s = PlaneStack::new(z)?;
        s.uniform = Some((start, step));
        Ok(s)
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn plane(&self, i: usize) -> SlicePlane {
        SlicePlane::new(self.z[i], i)
    }

    /// Smallest `i` with `z[i] >= zmin`, or `len()` if there is none.
    pub fn first_at_or_above(&self, zmin: f64) -> usize {
        if let Some((start, step)) = self.uniform.filter(|_| !self.z.is_empty()) {
            let guess = ((zmin - start) / step).ceil();
            let mut i = if guess.is_nan() || guess <= 0.0 {
                0
            } else {
                (guess as usize).min(self.z.len())
            };
            // the closed-form guess can be off by one through rounding
            while i > 0 && self.z[i - 1] >= zmin {
                i -= 1;
            }
            while i < self.z.len() && self.z[i] < zmin {
                i += 1;
            }
            i
        } else {
            self.z.partition_point(|p| *p < zmin)
        }
    }
}

/// `buckets[i]` holds the indices of maps that become active at plane `i`;
/// the last bucket (`i = k`) holds maps that are never reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapBuckets {
    pub buckets: Vec<Vec<usize>>,
}

pub fn build_tetrahedron_list(maps: &[PreparedMap], planes: &PlaneStack) -> MapBuckets {
    let mut buckets = vec![Vec::new(); planes.len() + 1];
    for (idx, m) in maps.iter().enumerate() {
        buckets[planes.first_at_or_above(m.z_range.0)].push(idx);
    }
    MapBuckets { buckets }
}

/// One activated box.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceActivation {
    pub plane_index: usize,
    pub z0: f64,
    pub map_id: u32,
    pub box_id: BoxId,
    /// Position in the traversal of this map-plane pair.
    pub order: usize,
    /// Cuboid cross-section, sorted by angle about its center.
    pub polygon: Vec<Point2>,
    /// Microstructure within the slab, projected to the plane.
    pub segments: Vec<[Point2; 2]>,
}

/// Receives activations in sweep order.
pub trait ActivationSink {
    fn accept(&mut self, rec: SliceActivation) -> Result<()>;
}

impl ActivationSink for Vec<SliceActivation> {
    fn accept(&mut self, rec: SliceActivation) -> Result<()> {
        self.push(rec);
        Ok(())
    }
}

/// Counts activations and drops them.
#[derive(Default, Debug)]
pub struct CountingSink(pub u64);

impl ActivationSink for CountingSink {
    fn accept(&mut self, _rec: SliceActivation) -> Result<()> {
        self.0 += 1;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct MicroConfig {
    pub template: CellTemplate,
    /// Slab half-width; `None` picks the template's beam radius relative to
    /// each cuboid's height.
    pub slab: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub loop_mode: LoopMode,
    pub micro: Option<MicroConfig>,
    /// Keep the previous plane's mapped geometry under its box id.
    pub cache_active: bool,
    /// Worker threads for per-map traversals; 0 or 1 runs inline.
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            loop_mode: LoopMode::Sound,
            micro: None,
            cache_active: false,
            jobs: 1,
        }
    }
}

/// Per-plane statistics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlaneStats {
    pub plane_index: usize,
    pub z0: f64,
    pub active_maps: usize,
    pub activations: u64,
    pub cuboid_tests: u64,
    /// Map evaluations spent on microstructure.
    pub micro_evaluations: u64,
    pub cache_hits: u64,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepStats {
    pub n: u32,
    pub planes: Vec<PlaneStats>,
}

impl SweepStats {
    pub fn total_activations(&self) -> u64 {
        self.planes.iter().map(|p| p.activations).sum()
    }

    pub fn total_cuboid_tests(&self) -> u64 {
        self.planes.iter().map(|p| p.cuboid_tests).sum()
    }

    pub fn total_micro_evaluations(&self) -> u64 {
        self.planes.iter().map(|p| p.micro_evaluations).sum()
    }
}

#[derive(Debug, thiserror::Error)]
#[error("sweep aborted at plane {plane_index}, map {map_id}: {source} (output is partial)")]
pub struct SweepError {
    pub plane_index: usize,
    pub map_id: u32,
    /// Statistics of the planes completed before the failure.
    pub partial: SweepStats,
    #[source]
    pub source: Error,
}

type GeometryCache = HashMap<(u32, BoxId), Arc<Vec<Polyline>>>;

struct MapOutput {
    records: Vec<SliceActivation>,
    cuboid_tests: u64,
    micro_evaluations: u64,
    cache_hits: u64,
    geometry: Vec<((u32, BoxId), Arc<Vec<Polyline>>)>,
}

/// Counters of one map-plane pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairStats {
    pub cuboid_tests: u64,
    pub micro_evaluations: u64,
}

/// Traverses one map-plane pair on its own, generating microstructure when
/// configured.
pub fn slice_map(
    map: &PreparedMap,
    plane: SlicePlane,
    paving: Paving,
    config: &SweepConfig,
) -> (Vec<SliceActivation>, PairStats) {
    let out = traverse_pair(map, plane, paving, config, None);
    let stats = PairStats {
        cuboid_tests: out.cuboid_tests,
        micro_evaluations: out.micro_evaluations,
    };
    (out.records, stats)
}

fn traverse_pair(
    map: &PreparedMap,
    plane: SlicePlane,
    paving: Paving,
    config: &SweepConfig,
    cache: Option<&GeometryCache>,
) -> MapOutput {
    let mut t = Traversal::mapped(map, plane, paving, config.loop_mode);
    let mut records = Vec::new();
    let mut micro_evaluations = 0;
    let mut cache_hits = 0;
    let mut geometry = Vec::new();
    let mut order = 0;
    while let Some(id) = t.current() {
        let cuboid = t.field().cuboid(id);
        let polygon = cuboid
            .intersection_polygon(&plane)
            .expect("emitted boxes intersect the plane");
        let mut segments = Vec::new();
        if let Some(micro) = &config.micro {
            let key = (map.id(), id);
            let lines = match cache.and_then(|c| c.get(&key)) {
                Some(hit) => {
                    cache_hits += 1;
                    Arc::clone(hit)
                }
                None => {
                    let lines: Vec<Polyline> = microstructure::generate_cell(&paving, id, &micro.template)
                        .expect("emitted ids are valid")
                        .iter()
                        .map(|seg| {
                            microstructure::map_polyline(&map.map, seg, micro.template.samples_per_beam)
                        })
                        .collect();
                    micro_evaluations += lines.iter().map(|l| l.len() as u64).sum::<u64>();
                    Arc::new(lines)
                }
            };
            let slab = micro.slab.unwrap_or_else(|| {
                let (lo, hi) = cuboid.z_span();
                micro.template.radius_fraction * (hi - lo)
            });
            segments = microstructure::slice_and_emit(&lines, &plane, slab);
            if config.cache_active {
                geometry.push((key, lines));
            }
        }
        records.push(SliceActivation {
            plane_index: plane.index,
            z0: plane.z0,
            map_id: map.id(),
            box_id: id,
            order,
            polygon,
            segments,
        });
        order += 1;
        t.increment().expect("iterator is valid");
    }
    MapOutput {
        records,
        cuboid_tests: t.counters().cuboid_tests,
        micro_evaluations,
        cache_hits,
        geometry,
    }
}

/// Runs the plane sweep over `maps`, streaming activations to `sink`.
/// Within a plane, maps are processed in ascending id order.
pub fn sweep(
    maps: &[PreparedMap],
    planes: &PlaneStack,
    paving: Paving,
    config: &SweepConfig,
    sink: &mut dyn ActivationSink,
) -> std::result::Result<SweepStats, SweepError> {
    let buckets = build_tetrahedron_list(maps, planes);
    let mut stats = SweepStats {
        n: paving.n(),
        planes: Vec::with_capacity(planes.len()),
    };
    let pool = (config.jobs > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .expect("thread pool")
    });
    // ordered by (map id, index) so emission order follows ids
    let mut active: BTreeSet<(u32, usize)> = BTreeSet::new();
    let mut cache: GeometryCache = HashMap::new();
    for i in 0..planes.len() {
        let started = Instant::now();
        let plane = planes.plane(i);
        active.extend(buckets.buckets[i].iter().map(|&m| (maps[m].id(), m)));
        active.retain(|&(_, m)| !(maps[m].z_range.1 < plane.z0));
        let work: Vec<usize> = active.iter().map(|&(_, m)| m).collect();
        let cache_ref = config.cache_active.then_some(&cache);
        let run = |&m: &usize| traverse_pair(&maps[m], plane, paving, config, cache_ref);
        let outputs: Vec<MapOutput> = match &pool {
            Some(pool) => pool.install(|| work.par_iter().map(run).collect()),
            None => work.iter().map(run).collect(),
        };
        let mut ps = PlaneStats {
            plane_index: i,
            z0: plane.z0,
            active_maps: work.len(),
            ..PlaneStats::default()
        };
        let mut next_cache = GeometryCache::new();
        for (out, &m) in outputs.into_iter().zip(&work) {
            ps.cuboid_tests += out.cuboid_tests;
            ps.micro_evaluations += out.micro_evaluations;
            ps.cache_hits += out.cache_hits;
            next_cache.extend(out.geometry);
            for rec in out.records {
                ps.activations += 1;
                if let Err(source) = sink.accept(rec) {
                    return Err(SweepError {
                        plane_index: i,
                        map_id: maps[m].id(),
                        partial: stats,
                        source,
                    });
                }
            }
        }
        if config.cache_active {
            cache = next_cache;
        }
        ps.wall_time_s = started.elapsed().as_secs_f64();
        stats.planes.push(ps);
    }
    Ok(stats)
}
