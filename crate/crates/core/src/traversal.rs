//! Depth-first traversal of the active boxes of one map-plane pair.
//!
//! The iterator is seeded with the active boxes on the edges of the domain,
//! plus the active boxes of every face that may carry a closed intersection
//! loop. From the current box it steps to the first unvisited active
//! neighbor in counterclockwise order, walks back along the `to_revisit`
//! stack at leaves, and restarts on the remaining boundary seeds when a
//! component is exhausted.

use std::collections::{HashMap, HashSet};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::bbform::{bb_product, TrivariateMap};
use crate::bounds::{PreparedMap, Tolerance};
use crate::cuboid::{map_box, Cuboid, SlicePlane};
use crate::paving::{BoxId, Paving};
use crate::{Error, Point2, Result};

/// How faces are screened for closed intersection loops.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LoopMode {
    /// No loop if one of the two height derivatives of the face is strictly
    /// one-signed (then the face height has no interior critical point).
    #[default]
    Sound,
    /// No loop if the coefficients of `det(n, ∂t1 g^s, ∂t2 g^s)` are strictly
    /// one-signed.
    PaperDet,
    /// Every face is scanned.
    AlwaysScan,
}

impl fmt::Display for LoopMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            LoopMode::Sound => "sound",
            LoopMode::PaperDet => "paper-det",
            LoopMode::AlwaysScan => "always-scan",
        })
    }
}

impl FromStr for LoopMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sound" => Ok(LoopMode::Sound),
            "paper-det" => Ok(LoopMode::PaperDet),
            "always-scan" => Ok(LoopMode::AlwaysScan),
            other => Err(format!("unknown loop mode {other:?}")),
        }
    }
}

fn strictly_one_sign(c: &[f64]) -> bool {
    c.iter().all(|x| *x > 0.0) || c.iter().all(|x| *x < 0.0)
}

/// Whether the intersection of face `face` with a constant-z plane may
/// contain a closed loop that crosses no edge.
pub fn face_may_have_loop(map: &TrivariateMap, face: usize, mode: LoopMode) -> Result<bool> {
    let patch = map.face_patch(face)?;
    Ok(match mode {
        LoopMode::AlwaysScan => true,
        LoopMode::Sound => {
            let height = patch.component(2);
            let d1 = height.direction_derivative(1)?;
            let d2 = height.direction_derivative(2)?;
            !(strictly_one_sign(&d1.coeffs) || strictly_one_sign(&d2.coeffs))
        }
        LoopMode::PaperDet => {
            let d1 = patch.direction_derivative(1)?;
            let d2 = patch.direction_derivative(2)?;
            let xy = bb_product(&d1.component(0), &d2.component(1));
            let yx = bb_product(&d1.component(1), &d2.component(0));
            let det: Vec<f64> = xy.coeffs.iter().zip(&yx.coeffs).map(|(a, b)| a - b).collect();
            !strictly_one_sign(&det)
        }
    })
}

/// What the traversal needs to know about the boxes.
pub trait ActivationField {
    /// Valid neighbors of `id`, written into `out` in a fixed order.
    fn neighbors_into(&self, id: BoxId, out: &mut Vec<BoxId>);
    /// `Some(center)` iff the box is active; the center orders candidates.
    fn probe(&self, id: BoxId) -> Option<Point2>;
    /// Boundary boxes to test, in seeding order. May contain duplicates.
    fn boundary_candidates(&self) -> Vec<BoxId>;
    /// Expected number of distinct boxes touched.
    fn size_hint(&self) -> usize {
        0
    }
}

/// The field of one prepared map, one plane, one paving.
#[derive(Clone, Copy, Debug)]
pub struct MappedField<'a> {
    pub map: &'a PreparedMap,
    pub plane: SlicePlane,
    pub paving: Paving,
    pub tol: Tolerance,
    pub mode: LoopMode,
}

impl<'a> MappedField<'a> {
    pub fn new(map: &'a PreparedMap, plane: SlicePlane, paving: Paving, mode: LoopMode) -> Self {
        MappedField {
            map,
            plane,
            paving,
            tol: map.tolerance(paving.nu()),
            mode,
        }
    }

    pub fn cuboid(&self, id: BoxId) -> Cuboid {
        let lattice = self.paving.corner_lattice(id);
        let n = f64::from(self.paving.n());
        let corners = crate::paving::BoxCorners {
            lattice,
            corners: lattice.map(|p| crate::bbform::Barycentric4::from_lattice(p, n)),
        };
        map_box(&self.map.map, &corners, &self.tol)
    }

    /// Faces that get scanned under the loop mode.
    pub fn scanned_faces(&self) -> [bool; 4] {
        std::array::from_fn(|f| {
            face_may_have_loop(&self.map.map, f, self.mode).expect("face index in range")
        })
    }
}

impl ActivationField for MappedField<'_> {
    fn neighbors_into(&self, id: BoxId, out: &mut Vec<BoxId>) {
        self.paving.neighbors_into(id, out);
    }

    fn probe(&self, id: BoxId) -> Option<Point2> {
        let c = self.cuboid(id);
        c.intersects_plane(&self.plane).then(|| c.center_unchecked(&self.plane))
    }

    fn boundary_candidates(&self) -> Vec<BoxId> {
        let mut out = self.paving.edge_boxes();
        for (face, scan) in self.scanned_faces().into_iter().enumerate() {
            if scan {
                out.extend(self.paving.face_boxes(face).expect("face index in range"));
            }
        }
        out
    }

    fn size_hint(&self) -> usize {
        let n = self.paving.n() as usize;
        4 * n * n
    }
}

/// Work counters of one traversal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraversalCounters {
    /// Distinct cuboid-plane tests performed.
    pub cuboid_tests: u64,
    /// Of those, tests spent on the boundary scan.
    pub boundary_tests: u64,
    /// Boxes emitted.
    pub emitted: u64,
    /// Stack steps taken while walking back.
    pub walk_back_steps: u64,
    /// Restarts on a boundary seed after the first.
    pub restarts: u64,
}

/// Orders candidates counterclockwise by the angle of `center - current`,
/// measured from `reference - current` (or `+x` when there is no reference).
/// Equal angles fall back to the smaller id.
pub fn sort_ccw(cands: &mut [(BoxId, Point2)], current: Point2, reference: Option<Point2>) {
    let r = reference
        .map(|p| p - current)
        .filter(|d| d.norm_squared() > 0.0)
        .unwrap_or(Point2::new(1.0, 0.0));
    let angle = |p: &Point2| {
        let d = p - current;
        let a = (r.x * d.y - r.y * d.x).atan2(r.dot(&d));
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    };
    cands.sort_by(|a, b| angle(&a.1).total_cmp(&angle(&b.1)).then(a.0.cmp(&b.0)));
}

/// Iterator over the active boxes of one map-plane pair.
pub struct Traversal<F: ActivationField> {
    field: F,
    curr: Option<BoxId>,
    prev: Option<BoxId>,
    to_revisit: Vec<BoxId>,
    visited: HashSet<BoxId>,
    boundary: Vec<BoxId>,
    initial_boundary: Vec<BoxId>,
    valid: bool,
    memo: HashMap<BoxId, Option<Point2>>,
    counters: TraversalCounters,
    parents: Vec<(BoxId, Option<BoxId>)>,
    scratch: Vec<BoxId>,
}

impl<'a> Traversal<MappedField<'a>> {
    pub fn mapped(map: &'a PreparedMap, plane: SlicePlane, paving: Paving, mode: LoopMode) -> Self {
        Traversal::initialize(MappedField::new(map, plane, paving, mode))
    }
}

impl<F: ActivationField> Traversal<F> {
    /// Scans the boundary and positions the iterator on the first seed.
    pub fn initialize(field: F) -> Self {
        let hint = field.size_hint();
        let mut t = Traversal {
            field,
            curr: None,
            prev: None,
            to_revisit: Vec::new(),
            visited: HashSet::with_capacity(hint),
            boundary: Vec::new(),
            initial_boundary: Vec::new(),
            valid: false,
            memo: HashMap::with_capacity(hint),
            counters: TraversalCounters::default(),
            parents: Vec::new(),
            scratch: Vec::with_capacity(12),
        };
        t.boundary = t.find_boundary_boxes();
        t.initial_boundary = t.boundary.clone();
        if let Some(&first) = t.boundary.first() {
            t.step_to(first, None);
            t.valid = true;
        }
        t
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn current(&self) -> Option<BoxId> {
        if self.valid {
            self.curr
        } else {
            None
        }
    }

    pub fn previous(&self) -> Option<BoxId> {
        self.prev
    }

    pub fn counters(&self) -> TraversalCounters {
        self.counters
    }

    /// The boundary seeds found at initialization.
    pub fn boundary_boxes(&self) -> &[BoxId] {
        &self.initial_boundary
    }

    /// Emitted boxes with the box they were reached from (`None` for seeds).
    pub fn trace(&self) -> &[(BoxId, Option<BoxId>)] {
        &self.parents
    }

    pub fn stack(&self) -> &[BoxId] {
        &self.to_revisit
    }

    pub fn is_visited(&self, id: BoxId) -> bool {
        self.visited.contains(&id)
    }

    fn probe(&mut self, id: BoxId) -> Option<Point2> {
        if let Some(hit) = self.memo.get(&id) {
            return *hit;
        }
        self.counters.cuboid_tests += 1;
        let hit = self.field.probe(id);
        self.memo.insert(id, hit);
        hit
    }

    /// Active boxes among the boundary candidates, first occurrence kept.
    pub fn find_boundary_boxes(&mut self) -> Vec<BoxId> {
        let before = self.counters.cuboid_tests;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for id in self.field.boundary_candidates() {
            if seen.insert(id) && self.probe(id).is_some() {
                out.push(id);
            }
        }
        self.counters.boundary_tests += self.counters.cuboid_tests - before;
        out
    }

    fn intersecting_neighbors(&mut self, id: BoxId) -> Vec<(BoxId, Point2)> {
        let mut nb = std::mem::take(&mut self.scratch);
        self.field.neighbors_into(id, &mut nb);
        let out = nb
            .iter()
            .filter_map(|&b| self.probe(b).map(|c| (b, c)))
            .collect();
        self.scratch = nb;
        out
    }

    fn step_to(&mut self, id: BoxId, parent: Option<BoxId>) {
        self.prev = if parent.is_some() { self.curr } else { None };
        self.curr = Some(id);
        self.visited.insert(id);
        self.to_revisit.push(id);
        self.parents.push((id, parent));
        self.counters.emitted += 1;
    }

    /// Advances to the next unvisited active box, or invalidates the
    /// iterator when every component is exhausted.
    pub fn increment(&mut self) -> Result<()> {
        if !self.valid {
            return Err(Error::InvalidIterator);
        }
        let curr = self.curr.expect("valid iterator has a current box");
        if self.intersecting_neighbors(curr).is_empty() {
            self.restart_on_boundary();
        } else {
            self.find_next_box();
        }
        Ok(())
    }

    /// Steps to the first unvisited intersecting neighbor in counterclockwise
    /// order, walking back whenever the current box is a leaf.
    pub fn find_next_box(&mut self) {
        while let Some(curr) = self.curr {
            let mut cands = self.intersecting_neighbors(curr);
            let here = self.center(curr);
            let reference = self.prev.map(|p| self.center(p));
            sort_ccw(&mut cands, here, reference);
            if let Some(&(next, _)) = cands.iter().find(|(b, _)| !self.visited.contains(b)) {
                self.step_to(next, Some(curr));
                return;
            }
            if !self.walk_back_step() {
                self.restart_on_boundary();
                return;
            }
        }
    }

    /// Pops the current box off the stack and continues from the box below it.
    pub fn walk_back(&mut self) {
        if self.walk_back_step() {
            self.find_next_box();
        } else {
            self.restart_on_boundary();
        }
    }

    fn walk_back_step(&mut self) -> bool {
        while self.to_revisit.last().is_some() && self.to_revisit.last() == self.curr.as_ref() {
            self.to_revisit.pop();
        }
        let Some(&top) = self.to_revisit.last() else {
            return false;
        };
        self.counters.walk_back_steps += 1;
        self.prev = self.curr;
        self.curr = Some(top);
        true
    }

    /// Continues with the first unvisited boundary seed, if any.
    pub fn restart_on_boundary(&mut self) {
        let visited = &self.visited;
        self.boundary.retain(|b| !visited.contains(b));
        match self.boundary.first() {
            Some(&seed) => {
                self.to_revisit.clear();
                self.counters.restarts += 1;
                self.step_to(seed, None);
            }
            None => self.valid = false,
        }
    }

    fn center(&mut self, id: BoxId) -> Point2 {
        self.probe(id).unwrap_or_else(|| Point2::new(0.0, 0.0))
    }
}

impl<F: ActivationField> Iterator for Traversal<F> {
    type Item = BoxId;

    fn next(&mut self) -> Option<BoxId> {
        let out = self.current()?;
        self.increment().expect("iterator is valid");
        Some(out)
    }
}
