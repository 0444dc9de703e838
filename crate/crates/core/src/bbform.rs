//! Bernstein-Bezier polynomials over the tetrahedron and the triangle.
//!
//! Coefficients are stored in the canonical order: multi-indices sorted
//! lexicographically descending as tuples. For the cubic trivariate case this
//! is `3000, 2100, 2010, 2001, 1200, 1110, ..., 0003`, which is also the order
//! used by the mesh file format.

use std::ops::{Add, Mul, Sub};
use std::sync::LazyLock;

use nalgebra::{DMatrix, Matrix3};

use crate::{Error, Point3, Result};

/// Degree of every map handled by this crate.
pub const MAP_DEGREE: u8 = 3;
/// Number of coefficients of a cubic trivariate BB-form.
pub const MAP_COEFFS: usize = 20;
/// Tolerance for barycentric membership.
pub const BARY_EPS: f64 = 1e-12;

/// Multi-index of a trivariate BB coefficient, `(α0, α1, α2, α3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub [u8; 4]);

impl MultiIndex {
    pub fn degree(&self) -> u8 {
        self.0.iter().sum()
    }

    /// Position of this index in the canonical order of its degree.
    pub fn rank(&self) -> usize {
        simplex_rank(&self.0)
    }

    /// `e_i` scaled by `m`.
    pub fn vertex(i: usize, m: u8) -> Self {
        let mut a = [0; 4];
        a[i] = m;
        MultiIndex(a)
    }
}

/// All multi-indices with `N` entries summing to `degree`, lexicographically
/// descending.
pub fn simplex_indices<const N: usize>(degree: u8) -> Vec<[u8; N]> {
    fn rec<const N: usize>(pos: usize, left: u8, cur: &mut [u8; N], out: &mut Vec<[u8; N]>) {
        if pos == N - 1 {
            cur[pos] = left;
            out.push(*cur);
            return;
        }
        for v in (0..=left).rev() {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
    }
    let mut out = Vec::with_capacity(simplex_len(N, degree));
    let mut cur = [0u8; N];
    rec(0, degree, &mut cur, &mut out);
    out
}

/// Number of multi-indices with `vars` entries summing to `degree`.
pub fn simplex_len(vars: usize, degree: u8) -> usize {
    binomial(degree as usize + vars - 1, vars - 1)
}

/// Rank of `alpha` within [`simplex_indices`] of its own degree.
pub fn simplex_rank<const N: usize>(alpha: &[u8; N]) -> usize {
    let mut left: u8 = alpha.iter().sum();
    let mut rank = 0;
    for p in 0..N - 1 {
        for v in alpha[p] + 1..=left {
            rank += simplex_len(N - p - 1, left - v);
        }
        left -= alpha[p];
    }
    rank
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(m: u8) -> f64 {
    (1..=m as u32).map(f64::from).product()
}

/// `m! / Π α_i!`
pub fn multinomial(alpha: &[u8]) -> f64 {
    let m: u8 = alpha.iter().sum();
    factorial(m) / alpha.iter().map(|&a| factorial(a)).product::<f64>()
}

/// For every degree `r` in `1..=3` and every index `β` of degree `r - 1`, the
/// ranks of `β + e_i` at degree `r`.
struct CasteljauTables {
    children: [Vec<[usize; 4]>; 3],
}

static TET_TABLES: LazyLock<CasteljauTables> = LazyLock::new(|| {
    let level = |r: u8| -> Vec<[usize; 4]> {
        simplex_indices::<4>(r - 1)
            .into_iter()
            .map(|beta| {
                std::array::from_fn(|i| {
                    let mut a = beta;
                    a[i] += 1;
                    simplex_rank(&a)
                })
            })
            .collect()
    };
    CasteljauTables {
        children: [level(1), level(2), level(3)],
    }
});

/// Barycentric coordinates with respect to the domain tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Barycentric4(pub [f64; 4]);

impl Barycentric4 {
    /// Validates and renormalizes `u` so the coordinates sum to one.
    pub fn new(u: [f64; 4]) -> Result<Self> {
        let sum: f64 = u.iter().sum();
        if u.iter().any(|c| !c.is_finite() || *c < -BARY_EPS) || (sum - 1.0).abs() > BARY_EPS {
            return Err(Error::InvalidBarycentric(u));
        }
        Ok(Barycentric4(u.map(|c| c / sum)))
    }

    /// Domain point of lattice coordinates `(a, b, c)` at resolution `n`:
    /// `u = (1 - (a+b+c)/n, a/n, b/n, c/n)`.
    pub fn from_lattice(p: [f64; 3], n: f64) -> Self {
        let (u1, u2, u3) = (p[0] / n, p[1] / n, p[2] / n);
        Barycentric4([1.0 - u1 - u2 - u3, u1, u2, u3])
    }

    pub fn vertex(k: usize) -> Self {
        let mut u = [0.0; 4];
        u[k] = 1.0;
        Barycentric4(u)
    }

    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        Barycentric4(std::array::from_fn(|i| self.0[i] + t * (other.0[i] - self.0[i])))
    }

    /// Cartesian parameters `(u1, u2, u3)`.
    pub fn params(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }
}

/// One cubic map `g: Δ → ℝ³` in BB-form.
#[derive(Clone, Debug, PartialEq)]
pub struct TrivariateMap {
    pub id: u32,
    coeffs: [Point3; MAP_COEFFS],
}

impl TrivariateMap {
    pub fn new(id: u32, coeffs: [Point3; MAP_COEFFS]) -> Self {
        TrivariateMap { id, coeffs }
    }

    pub fn from_slice(id: u32, coeffs: &[Point3]) -> Result<Self> {
        let coeffs: [Point3; MAP_COEFFS] =
            coeffs.try_into().map_err(|_| Error::CoefficientCount {
                expected: MAP_COEFFS,
                got: coeffs.len(),
            })?;
        Ok(TrivariateMap { id, coeffs })
    }

    /// The identity on the unit tetrahedron with vertices `0, e_x, e_y, e_z`:
    /// `g(u) = (u1, u2, u3)`.
    pub fn identity(id: u32) -> Self {
        let coeffs = simplex_indices::<4>(MAP_DEGREE)
            .into_iter()
            .map(|a| Point3::new(a[1] as f64, a[2] as f64, a[3] as f64) / 3.0)
            .collect::<Vec<_>>();
        TrivariateMap::from_slice(id, &coeffs).expect("20 canonical indices")
    }

    /// The cubic interpolating `f` at the 20 domain points `α/3`. Exact for
    /// any `f` that is itself a polynomial of degree at most 3.
    pub fn interpolate(id: u32, f: impl Fn(Barycentric4) -> Point3) -> Self {
        let idx = simplex_indices::<4>(MAP_DEGREE);
        let pts: Vec<Barycentric4> = idx
            .iter()
            .map(|a| Barycentric4(a.map(|c| c as f64 / 3.0)))
            .collect();
        let colloc = DMatrix::from_fn(MAP_COEFFS, MAP_COEFFS, |r, c| {
            bernstein(&idx[c], &pts[r].0)
        });
        let lu = colloc.lu();
        let mut coeffs = [Point3::zeros(); MAP_COEFFS];
        for axis in 0..3 {
            let rhs = DMatrix::from_fn(MAP_COEFFS, 1, |r, _| f(pts[r])[axis]);
            let sol = lu.solve(&rhs).expect("Bernstein collocation matrix is invertible");
            for (c, v) in coeffs.iter_mut().zip(sol.iter()) {
                c[axis] = *v;
            }
        }
        TrivariateMap { id, coeffs }
    }

    pub fn degree(&self) -> u8 {
        MAP_DEGREE
    }

    pub fn coeffs(&self) -> &[Point3; MAP_COEFFS] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Point3; MAP_COEFFS] {
        &mut self.coeffs
    }

    pub fn coeff(&self, alpha: MultiIndex) -> Point3 {
        self.coeffs[alpha.rank()]
    }

    pub fn set_coeff(&mut self, alpha: MultiIndex, p: Point3) {
        self.coeffs[alpha.rank()] = p;
    }

    /// Applies `p ↦ r·p + t` to every control point.
    pub fn transformed(&self, r: &Matrix3<f64>, t: &Point3) -> Self {
        TrivariateMap {
            id: self.id,
            coeffs: self.coeffs.map(|p| r * p + t),
        }
    }

    /// Evaluates `Σ g_α B_α(u)` by de Casteljau recursion.
    pub fn evaluate(&self, u: &Barycentric4) -> Result<Point3> {
        let u = Barycentric4::new(u.0)?;
        Ok(self.eval(&u.0))
    }

    /// Unchecked evaluation for coordinates already known to be valid.
    pub(crate) fn eval(&self, u: &[f64; 4]) -> Point3 {
        let lin = self.linear_blossom(u);
        lin.iter().zip(u).map(|(b, w)| b * *w).sum()
    }

    /// The value and the Jacobian `∂g/∂(u1, u2, u3)` (with `u0 = 1 - u1 - u2 - u3`).
    pub fn evaluate_with_jacobian(&self, u: &Barycentric4) -> Result<(Point3, Matrix3<f64>)> {
        let u = Barycentric4::new(u.0)?;
        let b = self.linear_blossom(&u.0);
        let value = b.iter().zip(&u.0).map(|(p, w)| p * *w).sum();
        let m = f64::from(MAP_DEGREE);
        let jac = Matrix3::from_columns(&[
            (b[1] - b[0]) * m,
            (b[2] - b[0]) * m,
            (b[3] - b[0]) * m,
        ]);
        Ok((value, jac))
    }

    /// de Casteljau down to degree 1: the four points `b_{e_i}`.
    fn linear_blossom(&self, u: &[f64; 4]) -> [Point3; 4] {
        let tables = &*TET_TABLES;
        let mut lvl2 = [Point3::zeros(); 10];
        for (dst, ch) in lvl2.iter_mut().zip(&tables.children[2]) {
            *dst = self.coeffs[ch[0]] * u[0]
                + self.coeffs[ch[1]] * u[1]
                + self.coeffs[ch[2]] * u[2]
                + self.coeffs[ch[3]] * u[3];
        }
        let mut lvl1 = [Point3::zeros(); 4];
        for (dst, ch) in lvl1.iter_mut().zip(&tables.children[1]) {
            *dst = lvl2[ch[0]] * u[0] + lvl2[ch[1]] * u[1] + lvl2[ch[2]] * u[2] + lvl2[ch[3]] * u[3];
        }
        lvl1
    }

    /// Minimum and maximum control-point `z`. By the convex hull property
    /// `g^z(Δ)` lies inside this interval.
    pub fn control_z_range(&self) -> (f64, f64) {
        self.coeffs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.z), hi.max(p.z))
            })
    }

    /// Restriction to face `face`, i.e. to `u_face = 0`, as a bivariate cubic.
    /// The patch parameters are the remaining barycentric coordinates in
    /// increasing slot order.
    pub fn face_patch(&self, face: usize) -> Result<TriPatch<Point3>> {
        if face > 3 {
            return Err(Error::FaceOutOfRange(face));
        }
        let coeffs = simplex_indices::<3>(MAP_DEGREE)
            .into_iter()
            .map(|b| self.coeff(MultiIndex(embed_face_index(face, b))))
            .collect();
        Ok(TriPatch {
            degree: MAP_DEGREE,
            coeffs,
        })
    }
}

/// Lifts a bivariate multi-index to the face `u_face = 0`.
pub fn embed_face_index(face: usize, b: [u8; 3]) -> [u8; 4] {
    let mut a = [0u8; 4];
    let mut it = b.into_iter();
    for (slot, v) in a.iter_mut().enumerate() {
        if slot != face {
            *v = it.next().unwrap_or(0);
        }
    }
    a
}

/// Lifts patch parameters to barycentric coordinates on face `face`.
pub fn embed_face_point(face: usize, t: [f64; 3]) -> Barycentric4 {
    let mut u = [0.0; 4];
    let mut it = t.into_iter();
    for (slot, v) in u.iter_mut().enumerate() {
        if slot != face {
            *v = it.next().unwrap_or(0.0);
        }
    }
    Barycentric4(u)
}

/// `B_α(u)` evaluated directly.
pub fn bernstein(alpha: &[u8], u: &[f64]) -> f64 {
    multinomial(alpha)
        * alpha
            .iter()
            .zip(u)
            .map(|(&a, &x)| x.powi(i32::from(a)))
            .product::<f64>()
}

/// Value types a BB patch can carry.
pub trait Coefficient: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl Coefficient for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Coefficient for Point3 {
    fn zero() -> Self {
        Point3::zeros()
    }
}

/// A bivariate BB polynomial over a triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct TriPatch<T> {
    pub degree: u8,
    pub coeffs: Vec<T>,
}

impl<T: Coefficient> TriPatch<T> {
    pub fn new(degree: u8, coeffs: Vec<T>) -> Result<Self> {
        let expected = simplex_len(3, degree);
        if coeffs.len() != expected {
            return Err(Error::CoefficientCount {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(TriPatch { degree, coeffs })
    }

    pub fn coeff(&self, b: [u8; 3]) -> T {
        self.coeffs[simplex_rank(&b)]
    }

    /// de Casteljau evaluation at barycentric `t` (assumed to sum to one).
    pub fn evaluate(&self, t: [f64; 3]) -> T {
        let mut cur = self.coeffs.clone();
        for r in (1..=self.degree).rev() {
            cur = simplex_indices::<3>(r - 1)
                .into_iter()
                .map(|beta| {
                    (0..3).fold(T::zero(), |acc, i| {
                        let mut a = beta;
                        a[i] += 1;
                        acc + cur[simplex_rank(&a)] * t[i]
                    })
                })
                .collect();
        }
        cur[0]
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(T) -> U) -> TriPatch<U> {
        TriPatch {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| f(*c)).collect(),
        }
    }

    /// BB coefficients of the derivative in the direction from vertex 0 to
    /// vertex `dir`: `m (b_{β+e_dir} - b_{β+e_0})`.
    pub fn direction_derivative(&self, dir: usize) -> Result<TriPatch<T>> {
        if !(1..=2).contains(&dir) {
            return Err(Error::DirectionOutOfRange(dir));
        }
        if self.degree == 0 {
            return Err(Error::DegreeZero);
        }
        let m = f64::from(self.degree);
        let coeffs = simplex_indices::<3>(self.degree - 1)
            .into_iter()
            .map(|beta| {
                let mut hi = beta;
                hi[dir] += 1;
                let mut lo = beta;
                lo[0] += 1;
                (self.coeff(hi) - self.coeff(lo)) * m
            })
            .collect();
        Ok(TriPatch {
            degree: self.degree - 1,
            coeffs,
        })
    }
}

impl TriPatch<Point3> {
    pub fn component(&self, axis: usize) -> TriPatch<f64> {
        self.map(|p| p[axis])
    }
}

/// BB coefficients of the directional derivative of `patch` toward vertex `dir`.
pub fn patch_direction_derivative<T: Coefficient>(
    patch: &TriPatch<T>,
    dir: usize,
) -> Result<TriPatch<T>> {
    patch.direction_derivative(dir)
}

/// BB coefficients of the pointwise product of two scalar patches:
/// `(fg)_γ = Σ_{α+β=γ} C(p,α) C(q,β) / C(p+q,γ) f_α g_β`.
pub fn bb_product(f: &TriPatch<f64>, g: &TriPatch<f64>) -> TriPatch<f64> {
    let (p, q) = (f.degree, g.degree);
    let mut coeffs = vec![0.0; simplex_len(3, p + q)];
    let fi = simplex_indices::<3>(p);
    let gi = simplex_indices::<3>(q);
    for (a, fa) in fi.iter().zip(&f.coeffs) {
        let ca = multinomial(a);
        for (b, gb) in gi.iter().zip(&g.coeffs) {
            let gamma = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
            let w = ca * multinomial(b) / multinomial(&gamma);
            coeffs[simplex_rank(&gamma)] += w * fa * gb;
        }
    }
    TriPatch {
        degree: p + q,
        coeffs,
    }
}

/// Result of sampling `det ∇g` over the domain.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianReport {
    pub samples: usize,
    pub min_det: f64,
    pub max_det: f64,
    /// Set when the sampled minimum is not strictly positive.
    pub non_positive: bool,
}

/// Samples `det ∇g` on a Halton sequence mapped uniformly onto `Δ`.
///
/// The determinant is only sampled, never certified; a map failing the check
/// is still usable and the caller decides what to do with the flag.
pub fn validate_map(map: &TrivariateMap, samples: usize) -> JacobianReport {
    let samples = samples.max(1);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for u in halton_tet_points(samples) {
        let (_, jac) = map
            .evaluate_with_jacobian(&u)
            .expect("halton points lie in the domain");
        let d = jac.determinant();
        lo = lo.min(d);
        hi = hi.max(d);
    }
    JacobianReport {
        samples,
        min_det: lo,
        max_det: hi,
        non_positive: !(lo > 0.0),
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut r = 0.0;
    let mut f = inv;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    r
}

/// `count` low-discrepancy points of `Δ` (Halton bases 2, 3, 5, mapped to the
/// simplex by sorting).
pub fn halton_tet_points(count: usize) -> impl Iterator<Item = Barycentric4> {
    (1..=count as u64).map(|i| {
        let mut s = [
            radical_inverse(i, 2),
            radical_inverse(i, 3),
            radical_inverse(i, 5),
        ];
        s.sort_by(f64::total_cmp);
        Barycentric4([s[0], s[1] - s[0], s[2] - s[1], 1.0 - s[2]])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_starts_and_ends_as_documented() {
        let idx = simplex_indices::<4>(3);
        assert_eq!(idx.len(), 20);
        assert_eq!(idx[0], [3, 0, 0, 0]);
        assert_eq!(idx[1], [2, 1, 0, 0]);
        assert_eq!(idx[2], [2, 0, 1, 0]);
        assert_eq!(idx[3], [2, 0, 0, 1]);
        assert_eq!(idx[4], [1, 2, 0, 0]);
        assert_eq!(idx[19], [0, 0, 0, 3]);
        for (r, a) in idx.iter().enumerate() {
            assert_eq!(simplex_rank(a), r);
        }
        for d in 0..6u8 {
            for (r, a) in simplex_indices::<3>(d).iter().enumerate() {
                assert_eq!(simplex_rank(a), r);
            }
        }
    }

    #[test]
    fn barycentric_validation() {
        assert!(Barycentric4::new([0.25; 4]).is_ok());
        assert!(Barycentric4::new([0.5, 0.5, 0.5, -0.5]).is_err());
        assert!(Barycentric4::new([0.3, 0.3, 0.3, 0.3]).is_err());
        assert!(Barycentric4::new([f64::NAN, 0.0, 0.0, 1.0]).is_err());
        let u = Barycentric4::new([1.0 + 5e-13, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(u.0[0], 1.0);
    }

    #[test]
    fn identity_vertices_and_centroid() {
        let g = TrivariateMap::identity(0);
        for k in 0..4 {
            let p = g.evaluate(&Barycentric4::vertex(k)).unwrap();
            assert_eq!(p, g.coeff(MultiIndex::vertex(k, 3)));
        }
        let c = g.evaluate(&Barycentric4([0.25; 4])).unwrap();
        assert!((c - Point3::new(0.25, 0.25, 0.25)).norm() < 1e-15);
    }

    #[test]
    fn identity_and_scaled_jacobians() {
        let g = TrivariateMap::identity(0);
        let r = validate_map(&g, 64);
        assert!((r.min_det - 1.0).abs() < 1e-12 && (r.max_det - 1.0).abs() < 1e-12);
        assert!(!r.non_positive);
        let s = g.transformed(&Matrix3::from_diagonal(&Point3::new(2.0, 1.0, 1.0)), &Point3::zeros());
        let r = validate_map(&s, 64);
        assert!((r.min_det - 2.0).abs() < 1e-12 && (r.max_det - 2.0).abs() < 1e-12);
        let flipped = g.transformed(&Matrix3::from_diagonal(&Point3::new(-1.0, 1.0, 1.0)), &Point3::zeros());
        assert!(validate_map(&flipped, 8).non_positive);
        assert_eq!(validate_map(&g, 0).samples, 1);
    }

    #[test]
    fn control_z_range_of_identity_and_translate() {
        let g = TrivariateMap::identity(0);
        assert_eq!(g.control_z_range(), (0.0, 1.0));
        let t = g.transformed(&Matrix3::identity(), &Point3::new(0.0, 0.0, 5.0));
        assert_eq!(t.control_z_range(), (5.0, 6.0));
    }

    #[test]
    fn face_patch_selects_coefficients() {
        let mut g = TrivariateMap::identity(0);
        for (r, a) in simplex_indices::<4>(3).into_iter().enumerate() {
            if a[0] == 0 {
                g.set_coeff(MultiIndex(a), Point3::new(r as f64, -(r as f64), 7.0));
            }
        }
        let patch = g.face_patch(0).unwrap();
        let expect: Vec<Point3> = simplex_indices::<4>(3)
            .into_iter()
            .enumerate()
            .filter(|(_, a)| a[0] == 0)
            .map(|(r, _)| Point3::new(r as f64, -(r as f64), 7.0))
            .collect();
        assert_eq!(patch.coeffs, expect);
        assert!(matches!(g.face_patch(4), Err(Error::FaceOutOfRange(4))));
    }

    #[test]
    fn identity_face_patch_is_linear_triangle() {
        let g = TrivariateMap::identity(0);
        for face in 0..4 {
            let patch = g.face_patch(face).unwrap();
            let t = [0.2, 0.3, 0.5];
            let expect = g.evaluate(&embed_face_point(face, t)).unwrap();
            assert!((patch.evaluate(t) - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn derivative_of_linear_and_constant_patches() {
        let (p0, p1, p2) = (
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(2.0, 0.0, 3.0),
            Point3::new(0.0, 5.0, 1.0),
        );
        let lin = TriPatch::new(1, vec![p0, p1, p2]).unwrap();
        let d1 = lin.direction_derivative(1).unwrap();
        assert_eq!(d1.degree, 0);
        assert_eq!(d1.coeffs, vec![p1 - p0]);
        let constant = TriPatch::new(2, vec![4.0; 6]).unwrap();
        let d = patch_direction_derivative(&constant, 2).unwrap();
        assert!(d.coeffs.iter().all(|c| *c == 0.0));
        let zero = TriPatch::new(0, vec![1.0]).unwrap();
        assert!(matches!(zero.direction_derivative(1), Err(Error::DegreeZero)));
        assert!(matches!(lin.direction_derivative(3), Err(Error::DirectionOutOfRange(3))));
    }

    #[test]
    fn product_with_barycentric_coordinates() {
        let s1 = TriPatch::new(1, vec![0.0, 1.0, 0.0]).unwrap();
        let s2 = TriPatch::new(1, vec![0.0, 0.0, 1.0]).unwrap();
        let prod = bb_product(&s1, &s2);
        assert_eq!(prod.degree, 2);
        for t in [[0.2, 0.3, 0.5], [0.0, 0.5, 0.5], [1.0 / 3.0; 3]] {
            assert!((prod.evaluate(t) - t[1] * t[2]).abs() < 1e-15);
        }
    }

    #[test]
    fn interpolate_reproduces_identity() {
        let g = TrivariateMap::interpolate(0, |u| Point3::new(u.0[1], u.0[2], u.0[3]));
        let id = TrivariateMap::identity(0);
        for (a, b) in g.coeffs().iter().zip(id.coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
