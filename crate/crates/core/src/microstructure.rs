//! Procedural beam-lattice microstructure per box.
//!
//! Templates live on the unit cube. A box places its template in its
//! lattice cube, clips it to the domain (`a + b + c <= n`), and the slicer
//! maps the beam centerlines through `g` and keeps the parts inside a slab
//! around the plane. Any deterministic box-to-segments generator would fit
//! the same hooks.

use std::fmt;
use std::str::FromStr;

use crate::bbform::{Barycentric4, TrivariateMap};
use crate::cuboid::{SlicePlane, CUBOID_EDGES};
use crate::paving::{BoxId, Paving};
use crate::{Error, Point2, Point3, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TemplateKind {
    /// The 12 cube edges.
    EdgeFrame,
    /// Face diagonals plus the octahedron joining the face centers.
    Octet,
    /// The 4 body diagonals.
    DiagonalCross,
}

impl fmt::Display for TemplateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            TemplateKind::EdgeFrame => "edge-frame",
            TemplateKind::Octet => "octet",
            TemplateKind::DiagonalCross => "diagonal-cross",
        })
    }
}

impl FromStr for TemplateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "edge-frame" => Ok(TemplateKind::EdgeFrame),
            "octet" => Ok(TemplateKind::Octet),
            "diagonal-cross" => Ok(TemplateKind::DiagonalCross),
            other => Err(format!("unknown template {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellTemplate {
    pub kind: TemplateKind,
    /// Beam radius as a fraction of the box edge, in `(0, 0.5)`.
    pub radius_fraction: f64,
    pub samples_per_beam: usize,
}

impl CellTemplate {
    pub fn new(kind: TemplateKind, radius_fraction: f64, samples_per_beam: usize) -> Result<Self> {
        if !(radius_fraction > 0.0 && radius_fraction < 0.5) {
            return Err(Error::InvalidMesh(format!(
                "beam radius fraction {radius_fraction} outside (0, 0.5)"
            )));
        }
        if samples_per_beam < 2 {
            return Err(Error::InvalidMesh(format!(
                "samples per beam must be >= 2, got {samples_per_beam}"
            )));
        }
        Ok(CellTemplate {
            kind,
            radius_fraction,
            samples_per_beam,
        })
    }

    pub fn edge_frame() -> Self {
        CellTemplate::new(TemplateKind::EdgeFrame, 0.1, 5).expect("valid defaults")
    }

    /// Beam centerlines on the unit cube.
    pub fn unit_segments(&self) -> Vec<[[f64; 3]; 2]> {
        let corner = |m: usize| [(m >> 2) & 1, (m >> 1) & 1, m & 1].map(|x| x as f64);
        match self.kind {
            TemplateKind::EdgeFrame => CUBOID_EDGES
                .iter()
                .map(|&(a, b)| [corner(a), corner(b)])
                .collect(),
            TemplateKind::DiagonalCross => (0..4).map(|m| [corner(m), corner(7 - m)]).collect(),
            TemplateKind::Octet => {
                let mut out = Vec::with_capacity(24);
                for axis in 0..3 {
                    for side in [0.0, 1.0] {
                        let mut q = [[0.0; 3]; 4];
                        for (idx, (s, t)) in [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
                            .into_iter()
                            .enumerate()
                        {
                            q[idx][axis] = side;
                            q[idx][(axis + 1) % 3] = s;
                            q[idx][(axis + 2) % 3] = t;
                        }
                        out.push([q[0], q[2]]);
                        out.push([q[1], q[3]]);
                    }
                }
                let centers: Vec<(usize, [f64; 3])> = (0..3)
                    .flat_map(|axis| {
                        [0.0, 1.0].map(|side| {
                            let mut c = [0.5; 3];
                            c[axis] = side;
                            (axis, c)
                        })
                    })
                    .collect();
                for (a, (axa, ca)) in centers.iter().enumerate() {
                    for (axb, cb) in &centers[a + 1..] {
                        if axa != axb {
                            out.push([*ca, *cb]);
                        }
                    }
                }
                out
            }
        }
    }
}

/// A straight segment in the domain.
pub type DomainSegment = [Barycentric4; 2];
/// A sampled mapped centerline.
pub type Polyline = Vec<Point3>;

const CLIP_EPS: f64 = 1e-12;

/// The template's segments placed in box `id` and clipped to the domain.
pub fn generate_cell(paving: &Paving, id: BoxId, tmpl: &CellTemplate) -> Result<Vec<DomainSegment>> {
    if !paving.is_valid_box(id) {
        return Err(Error::InvalidBox { id, n: paving.n() });
    }
    let n = f64::from(paving.n());
    let base = id.as_array().map(f64::from);
    let mut out = Vec::new();
    for [p, q] in tmpl.unit_segments() {
        let a: [f64; 3] = std::array::from_fn(|i| base[i] + p[i]);
        let b: [f64; 3] = std::array::from_fn(|i| base[i] + q[i]);
        let (sa, sb) = (a.iter().sum::<f64>(), b.iter().sum::<f64>());
        let (a, b) = match (sa <= n, sb <= n) {
            (true, true) => (a, b),
            (false, false) => continue,
            (true, false) => {
                let t = (n - sa) / (sb - sa);
                (a, std::array::from_fn(|i| a[i] + t * (b[i] - a[i])))
            }
            (false, true) => {
                let t = (n - sb) / (sa - sb);
                (std::array::from_fn(|i| b[i] + t * (a[i] - b[i])), b)
            }
        };
        let len2: f64 = (0..3).map(|i| (b[i] - a[i]).powi(2)).sum();
        if len2 <= CLIP_EPS * CLIP_EPS {
            continue;
        }
        out.push([Barycentric4::from_lattice(a, n), Barycentric4::from_lattice(b, n)]);
    }
    Ok(out)
}

/// `g` at `samples` equally spaced points of `seg` (at least 2).
pub fn map_polyline(map: &TrivariateMap, seg: &DomainSegment, samples: usize) -> Polyline {
    let samples = samples.max(2);
    (0..samples)
        .map(|s| {
            let t = s as f64 / (samples - 1) as f64;
            map.eval(&seg[0].lerp(&seg[1], t).0)
        })
        .collect()
}

/// Parts of the polylines with `|z - z0| <= slab_halfwidth`, projected to
/// the plane. Pieces crossing the slab boundary are cut by linear
/// interpolation; a piece can collapse to a point when the slab is empty.
pub fn slice_and_emit(polylines: &[Polyline], plane: &SlicePlane, slab_halfwidth: f64) -> Vec<[Point2; 2]> {
    let (lo, hi) = (plane.z0 - slab_halfwidth, plane.z0 + slab_halfwidth);
    let mut out = Vec::new();
    for line in polylines {
        for w in line.windows(2) {
            let (p, q) = (w[0], w[1]);
            let dz = q.z - p.z;
            let (t0, t1) = if dz == 0.0 {
                if p.z < lo || p.z > hi {
                    continue;
                }
                (0.0, 1.0)
            } else {
                let (a, b) = ((lo - p.z) / dz, (hi - p.z) / dz);
                (a.min(b).max(0.0), a.max(b).min(1.0))
            };
            if t0 > t1 {
                continue;
            }
            let at = |t: f64| (p + (q - p) * t).xy();
            out.push([at(t0), at(t1)]);
        }
    }
    out
}
