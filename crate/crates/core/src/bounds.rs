//! Offsets bounding how far a cubic map strays from the linear interpolant
//! of its mapped vertices, and their scaling under dyadic subdivision.
//!
//! Pair indices `i, j` range over the free parameters `u1, u2, u3`; the
//! anchor vertex `k` ranges over `1..=4`, where `4` denotes slot 0 of the
//! barycentric coordinates.

use crate::bbform::{validate_map, JacobianReport, MultiIndex, TrivariateMap};
use crate::{Error, Point3, Result};

/// Which second differences enter the per-pair maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stencil {
    /// Only `d_ijk` with `k ∉ {i, j}`.
    Verbatim,
    /// The verbatim set plus the BB coefficients of `∂²g/∂u_i∂u_j / 6` at all
    /// four vertices. The latter bound the second partials exactly.
    Widened,
}

impl Stencil {
    /// The configuration used unless a caller asks otherwise. The verbatim
    /// stencil under-bounds on generic cubic maps (see the dominance tests),
    /// so the widened one ships; the `verbatim-stencil` feature restores the
    /// verbatim default for experiments.
    #[cfg(not(feature = "verbatim-stencil"))]
    pub const SHIPPED: Stencil = Stencil::Widened;
    #[cfg(feature = "verbatim-stencil")]
    pub const SHIPPED: Stencil = Stencil::Verbatim;
}

/// Barycentric slot of one-based vertex number `k ∈ 1..=4`.
fn slot(k: u8) -> usize {
    usize::from(k % 4)
}

fn e(k: u8) -> [u8; 4] {
    let mut a = [0; 4];
    a[slot(k)] = 1;
    a
}

fn add(a: [u8; 4], b: [u8; 4]) -> [u8; 4] {
    std::array::from_fn(|i| a[i] + b[i])
}

fn scale(a: [u8; 4], m: u8) -> [u8; 4] {
    a.map(|x| x * m)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilEntry {
    /// Unordered pair, `i <= j`, both in `1..=3`.
    pub pair: (u8, u8),
    /// Anchor vertex in `1..=4`.
    pub anchor: u8,
    pub value: Point3,
    /// False for the verbatim `d_ijk`.
    pub widened: bool,
}

/// The second differences of one cubic map.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondDifferences {
    entries: Vec<StencilEntry>,
}

/// `d_ijk = g_{3e_k} - g_{2e_k+e_i} - g_{2e_k+e_j} + g_{e_k+e_i+e_j}`.
pub fn second_difference(map: &TrivariateMap, i: u8, j: u8, k: u8) -> Point3 {
    let (ei, ej, ek) = (e(i), e(j), e(k));
    map.coeff(MultiIndex(scale(ek, 3))) - map.coeff(MultiIndex(add(scale(ek, 2), ei)))
        - map.coeff(MultiIndex(add(scale(ek, 2), ej)))
        + map.coeff(MultiIndex(add(add(ek, ei), ej)))
}

/// `(Δ_{i0} Δ_{j0} g)_{e_k}`, the BB coefficient at vertex `k` of the second
/// partial `∂²g/∂u_i∂u_j`, divided by `m(m-1) = 6`.
fn axis_second_difference(map: &TrivariateMap, i: u8, j: u8, k: u8) -> Point3 {
    let (ei, ej, ek, e0) = (e(i), e(j), e(k), e(4));
    map.coeff(MultiIndex(add(add(ek, ei), ej))) - map.coeff(MultiIndex(add(add(ek, ei), e0)))
        - map.coeff(MultiIndex(add(add(ek, ej), e0)))
        + map.coeff(MultiIndex(add(ek, scale(e0, 2))))
}

const PAIRS: [(u8, u8); 6] = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

/// All second differences of `map`, verbatim and widened.
pub fn second_differences(map: &TrivariateMap) -> SecondDifferences {
    let mut entries = Vec::with_capacity(15 + 18);
    for &(i, j) in &PAIRS {
        for k in 1..=4u8 {
            if k != i && k != j {
                entries.push(StencilEntry {
                    pair: (i, j),
                    anchor: k,
                    value: second_difference(map, i, j, k),
                    widened: false,
                });
            }
        }
    }
    for &(i, j) in &PAIRS {
        // anchor 4 coincides with the verbatim d_ij4
        for k in 1..=3u8 {
            entries.push(StencilEntry {
                pair: (i, j),
                anchor: k,
                value: axis_second_difference(map, i, j, k),
                widened: true,
            });
        }
    }
    SecondDifferences { entries }
}

impl SecondDifferences {
    pub fn entries(&self) -> &[StencilEntry] {
        &self.entries
    }

    /// Verbatim `d_ijk`; `None` when `k ∈ {i, j}` or an index is out of range.
    pub fn get(&self, i: u8, j: u8, k: u8) -> Option<Point3> {
        let pair = (i.min(j), i.max(j));
        self.entries
            .iter()
            .find(|e| !e.widened && e.pair == pair && e.anchor == k)
            .map(|e| e.value)
    }

    /// `max_k |d^axis_ijk|` over the entries admitted by `stencil`.
    pub fn max_abs(&self, i: u8, j: u8, axis: usize, stencil: Stencil) -> f64 {
        let pair = (i.min(j), i.max(j));
        self.entries
            .iter()
            .filter(|e| e.pair == pair && (stencil == Stencil::Widened || !e.widened))
            .map(|e| e.value[axis].abs())
            .fold(0.0, f64::max)
    }
}

/// Per-axis offset `(μ^x, μ^y, μ^z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OffsetVector {
    pub mu: Point3,
}

/// `μ^c = 6/8 · Σ_{i,j ∈ 1..=3} l_i l_j max_k |d^c_ijk|`, mixed pairs counted
/// twice.
pub fn offset_vector(sd: &SecondDifferences, l: [f64; 3], stencil: Stencil) -> Result<OffsetVector> {
    if l.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::NonPositiveEdgeLength(l));
    }
    let mut mu = Point3::zeros();
    for axis in 0..3 {
        let mut sum = 0.0;
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                sum += l[usize::from(i) - 1] * l[usize::from(j) - 1] * sd.max_abs(i, j, axis, stencil);
            }
        }
        mu[axis] = 0.75 * sum;
    }
    Ok(OffsetVector { mu })
}

/// Box-level tolerance `μ / 4^ν`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub tol: Point3,
    pub nu: u32,
}

pub fn scaled_tolerance(mu: &OffsetVector, nu: u32) -> Tolerance {
    let div = 4f64.powi(nu as i32);
    Tolerance {
        tol: mu.mu / div,
        nu,
    }
}

/// Number of Jacobian samples taken when a map is prepared.
pub const JACOBIAN_SAMPLES: usize = 512;

/// A map together with everything the slicer caches per map.
#[derive(Clone, Debug)]
pub struct PreparedMap {
    pub map: TrivariateMap,
    pub z_range: (f64, f64),
    pub second_differences: SecondDifferences,
    pub offsets: OffsetVector,
    pub jacobian: JacobianReport,
}

impl PreparedMap {
    pub fn new(map: TrivariateMap) -> Self {
        Self::with_stencil(map, Stencil::SHIPPED)
    }

    pub fn with_stencil(map: TrivariateMap, stencil: Stencil) -> Self {
        let second_differences = second_differences(&map);
        let offsets = offset_vector(&second_differences, [1.0; 3], stencil)
            .expect("unit edge lengths are positive");
        PreparedMap {
            z_range: map.control_z_range(),
            jacobian: validate_map(&map, JACOBIAN_SAMPLES),
            map,
            second_differences,
            offsets,
        }
    }

    pub fn id(&self) -> u32 {
        self.map.id
    }

    pub fn tolerance(&self, nu: u32) -> Tolerance {
        scaled_tolerance(&self.offsets, nu)
    }
}
