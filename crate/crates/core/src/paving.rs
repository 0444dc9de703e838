//! Box paving of the domain tetrahedron.
//!
//! Lattice coordinates `(a, b, c)` at resolution `n` map to barycentric
//! `u = (1 - (a+b+c)/n, a/n, b/n, c/n)`. Box `(i, j, k)` is the lattice unit
//! cube with base corner `(i, j, k)` cut by `a + b + c <= n`; layer `i` runs
//! toward vertex `u1`, row `j` toward `u2`, column `k` toward `u3`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bbform::Barycentric4;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxId {
    pub layer: u32,
    pub row: u32,
    pub col: u32,
}

impl BoxId {
    pub const fn new(layer: u32, row: u32, col: u32) -> Self {
        BoxId { layer, row, col }
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.layer, self.row, self.col]
    }

    pub fn sum(&self) -> u32 {
        self.layer + self.row + self.col
    }

    fn offset(&self, d: [i32; 3]) -> Option<BoxId> {
        Some(BoxId {
            layer: self.layer.checked_add_signed(d[0])?,
            row: self.row.checked_add_signed(d[1])?,
            col: self.col.checked_add_signed(d[2])?,
        })
    }
}

impl fmt::Display for BoxId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.layer, self.row, self.col)
    }
}

impl FromStr for BoxId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("expected \"i,j,k\", got {s:?}"));
        }
        let p = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("{s:?}: {e}"));
        Ok(BoxId::new(p(parts[0])?, p(parts[1])?, p(parts[2])?))
    }
}

impl Serialize for BoxId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BoxId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The 12 neighbor offsets: 6 axial, then 6 that preserve the index sum.
pub const NEIGHBOR_OFFSETS: [[i32; 3]; 12] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [0, 0, 1],
    [0, 0, -1],
    [1, -1, 0],
    [-1, 1, 0],
    [1, 0, -1],
    [-1, 0, 1],
    [0, 1, -1],
    [0, -1, 1],
];

/// Number of boxes at resolution `n`: `n(n+1)(n+2)/6`.
pub fn total_boxes(n: u64) -> Result<u64> {
    if n < 1 {
        return Err(Error::InvalidResolution(n));
    }
    Ok(n * (n + 1) * (n + 2) / 6)
}

/// Paving at resolution `n = 2^ν`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Paving {
    nu: u32,
    n: u32,
}

/// The 8 corners of a box, ordered by `(δ_i, δ_j, δ_k)` read as a binary
/// number with `δ_k` least significant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxCorners {
    pub lattice: [[f64; 3]; 8],
    pub corners: [Barycentric4; 8],
}

impl Paving {
    pub fn new(nu: u32) -> Self {
        assert!(nu < 31, "resolution exponent {nu} too large");
        Paving { nu, n: 1 << nu }
    }

    pub fn with_n(n: u64) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() || n > 1 << 30 {
            return Err(Error::InvalidResolution(n));
        }
        Ok(Paving::new(n.trailing_zeros()))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn total_boxes(&self) -> u64 {
        total_boxes(u64::from(self.n)).expect("n >= 1")
    }

    pub fn is_valid_box(&self, id: BoxId) -> bool {
        u64::from(id.layer) + u64::from(id.row) + u64::from(id.col) < u64::from(self.n)
    }

    fn check(&self, id: BoxId) -> Result<()> {
        if self.is_valid_box(id) {
            Ok(())
        } else {
            Err(Error::InvalidBox { id, n: self.n })
        }
    }

    /// All valid ids, layer-major.
    pub fn boxes(&self) -> impl Iterator<Item = BoxId> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (0..n - i).flat_map(move |j| (0..n - i - j).map(move |k| BoxId::new(i, j, k)))
        })
    }

    pub fn box_corners(&self, id: BoxId) -> Result<BoxCorners> {
        self.check(id)?;
        let lattice = self.corner_lattice(id);
        let n = f64::from(self.n);
        Ok(BoxCorners {
            lattice,
            corners: lattice.map(|p| Barycentric4::from_lattice(p, n)),
        })
    }

    /// Lattice corners with the clamping rule applied: a corner `c` with
    /// `s = sum(c) > n` moves to `b + t (c - b)`, `t = (n - sum(b)) / (s - sum(b))`.
    pub(crate) fn corner_lattice(&self, id: BoxId) -> [[f64; 3]; 8] {
        let n = f64::from(self.n);
        let b = [id.layer, id.row, id.col].map(f64::from);
        let bs = b[0] + b[1] + b[2];
        std::array::from_fn(|m| {
            let d = [(m >> 2) & 1, (m >> 1) & 1, m & 1].map(|x| x as f64);
            let c = [b[0] + d[0], b[1] + d[1], b[2] + d[2]];
            let s = c[0] + c[1] + c[2];
            if s > n {
                let t = (n - bs) / (s - bs);
                [b[0] + t * d[0], b[1] + t * d[1], b[2] + t * d[2]]
            } else {
                c
            }
        })
    }

    pub fn neighbors(&self, id: BoxId) -> Result<Vec<BoxId>> {
        self.check(id)?;
        let mut out = Vec::with_capacity(12);
        self.neighbors_into(id, &mut out);
        Ok(out)
    }

    pub(crate) fn neighbors_into(&self, id: BoxId, out: &mut Vec<BoxId>) {
        out.clear();
        out.extend(
            NEIGHBOR_OFFSETS
                .iter()
                .filter_map(|d| id.offset(*d))
                .filter(|b| self.is_valid_box(*b)),
        );
    }

    /// Boxes along the 6 domain edges, chain by chain, first occurrence kept.
    pub fn edge_boxes(&self) -> Vec<BoxId> {
        let n = self.n;
        let mut out: Vec<BoxId> = Vec::with_capacity(6 * n as usize);
        let mut seen = std::collections::HashSet::with_capacity(6 * n as usize);
        let chains: [fn(u32, u32) -> BoxId; 6] = [
            |t, _| BoxId::new(t, 0, 0),
            |t, _| BoxId::new(0, t, 0),
            |t, _| BoxId::new(0, 0, t),
            |t, n| BoxId::new(t, n - 1 - t, 0),
            |t, n| BoxId::new(t, 0, n - 1 - t),
            |t, n| BoxId::new(0, t, n - 1 - t),
        ];
        for chain in chains {
            for t in 0..n {
                let id = chain(t, n);
                if seen.insert(id) {
                    out.push(id);
                }
            }
        }
        out
    }

    /// Boxes on face `face`: 1 is `i = 0`, 2 is `j = 0`, 3 is `k = 0`, 0 is the
    /// slant face `i + j + k = n - 1`. Row-major over the two free indices.
    pub fn face_boxes(&self, face: usize) -> Result<Vec<BoxId>> {
        let n = self.n;
        let mut out = Vec::with_capacity((n as usize) * (n as usize + 1) / 2);
        for p in 0..n {
            for q in 0..n - p {
                out.push(match face {
                    0 => BoxId::new(p, q, n - 1 - p - q),
                    1 => BoxId::new(0, p, q),
                    2 => BoxId::new(p, 0, q),
                    3 => BoxId::new(p, q, 0),
                    _ => return Err(Error::FaceOutOfRange(face)),
                });
            }
        }
        Ok(out)
    }

    /// Whether lattice point `p` lies in the region of box `id`
    /// (unit cube cut by `a + b + c <= n`), with slack `eps`.
    pub fn box_contains(&self, id: BoxId, p: [f64; 3], eps: f64) -> bool {
        let b = id.as_array().map(f64::from);
        (0..3).all(|a| p[a] >= b[a] - eps && p[a] <= b[a] + 1.0 + eps)
            && p.iter().sum::<f64>() <= f64::from(self.n) + eps
    }

    /// The box holding lattice point `p` (which must lie in the domain).
    pub fn locate(&self, p: [f64; 3]) -> Option<BoxId> {
        let n = f64::from(self.n);
        if p.iter().any(|x| *x < 0.0) || p.iter().sum::<f64>() > n {
            return None;
        }
        let mut id = p.map(|x| (x.floor() as u32).min(self.n - 1));
        while id.iter().sum::<u32>() > self.n - 1 {
            // only lattice points on the slant face land here; step back along
            // the largest coordinate
            let a = (0..3).max_by_key(|a| id[*a]).expect("3 axes");
            id[a] -= 1;
        }
        Some(BoxId::new(id[0], id[1], id[2]))
    }
}
