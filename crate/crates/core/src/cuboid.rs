//! Mapped boxes ("cuboids") and their tests against a constant-z plane.

use crate::bbform::TrivariateMap;
use crate::bounds::Tolerance;
use crate::paving::BoxCorners;
use crate::{Error, Point2, Point3, Result};

/// A slice plane `z = z0`; `index` is its position in the plane stack.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlicePlane {
    pub z0: f64,
    pub index: usize,
}

impl SlicePlane {
    pub fn new(z0: f64, index: usize) -> Self {
        SlicePlane { z0, index }
    }
}

/// Relative slack added to every plane test so that rounding in the map
/// evaluation cannot drop a box that touches the plane exactly.
pub const PLANE_SLACK: f64 = 1e-12;

/// The 12 edges of a box in corner order (pairs differing in one bit).
pub const CUBOID_EDGES: [(usize, usize); 12] = [
    (0, 1),
    (2, 3),
    (4, 5),
    (6, 7),
    (0, 2),
    (1, 3),
    (4, 6),
    (5, 7),
    (0, 4),
    (1, 5),
    (2, 6),
    (3, 7),
];

/// Images of the 8 box corners plus the per-axis tolerance of the map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cuboid {
    pub verts: [Point3; 8],
    pub tol: Point3,
}

pub fn map_box(map: &TrivariateMap, corners: &BoxCorners, tol: &Tolerance) -> Cuboid {
    Cuboid {
        verts: corners.corners.map(|u| map.eval(&u.0)),
        tol: tol.tol,
    }
}

impl Cuboid {
    pub fn z_span(&self) -> (f64, f64) {
        self.verts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.z), hi.max(v.z)))
    }

    /// `min z - tol.z <= z0 <= max z + tol.z`. For a constant-z plane this is
    /// the same as testing every edge of the cuboid offset by `tol.z`.
    pub fn intersects_plane(&self, p: &SlicePlane) -> bool {
        let (lo, hi) = self.z_span();
        let slack = PLANE_SLACK * (1.0 + p.z0.abs());
        lo - self.tol.z - slack <= p.z0 && p.z0 <= hi + self.tol.z + slack
    }

    /// Edge-plane crossings projected to the plane, unsorted. Edges lying in
    /// the plane contribute both endpoints.
    pub fn edge_crossings(&self, p: &SlicePlane) -> Vec<Point2> {
        let z0 = p.z0;
        let mut out = Vec::with_capacity(12);
        for &(a, b) in &CUBOID_EDGES {
            let (va, vb) = (self.verts[a], self.verts[b]);
            let (da, db) = (va.z - z0, vb.z - z0);
            if da * db > 0.0 {
                continue;
            }
            if da == db {
                out.push(va.xy());
                out.push(vb.xy());
            } else {
                let t = da / (da - db);
                out.push((va + (vb - va) * t).xy());
            }
        }
        out
    }

    /// Center of the cuboid's cross-section with the plane: the average of
    /// all edge crossings, or of all 8 vertices when the hit is due to the
    /// tolerance alone.
    pub fn intersection_center(&self, p: &SlicePlane) -> Result<Point2> {
        if !self.intersects_plane(p) {
            return Err(Error::NotIntersecting(p.z0));
        }
        Ok(self.center_unchecked(p))
    }

    pub(crate) fn center_unchecked(&self, p: &SlicePlane) -> Point2 {
        let pts = self.edge_crossings(p);
        if pts.is_empty() {
            self.verts.iter().map(|v| v.xy()).sum::<Point2>() / 8.0
        } else {
            pts.iter().sum::<Point2>() / pts.len() as f64
        }
    }

    /// Cross-section polygon sorted by angle about its center. Tolerance-only
    /// hits fall back to the projected vertices.
    pub fn intersection_polygon(&self, p: &SlicePlane) -> Result<Vec<Point2>> {
        if !self.intersects_plane(p) {
            return Err(Error::NotIntersecting(p.z0));
        }
        let mut pts = self.edge_crossings(p);
        if pts.is_empty() {
            pts = self.verts.iter().map(|v| v.xy()).collect();
        }
        let c = pts.iter().sum::<Point2>() / pts.len() as f64;
        pts.sort_by(|a, b| {
            let ka = (a.y - c.y).atan2(a.x - c.x);
            let kb = (b.y - c.y).atan2(b.x - c.x);
            ka.total_cmp(&kb)
                .then(a.x.total_cmp(&b.x))
                .then(a.y.total_cmp(&b.y))
        });
        pts.dedup_by(|a, b| (*a - *b).norm() <= 1e-15 * (1.0 + a.norm()));
        Ok(pts)
    }
}

/// Signed area of a polygon (shoelace).
pub fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.x * b.y - a.y * b.x
        })
        .sum::<f64>()
        / 2.0
}
