use std::collections::HashSet;

use mapslice::bbform::{
    bb_product, bernstein, embed_face_point, simplex_indices, Barycentric4, MultiIndex, TriPatch,
    TrivariateMap,
};
use mapslice::bounds::{PreparedMap, Stencil};
use mapslice::cuboid::SlicePlane;
use mapslice::io::{parse_mesh, MeshFile};
use mapslice::microstructure::slice_and_emit;
use mapslice::oracle::{brute_force_active, evaluate_by_summation};
use mapslice::paving::{BoxId, Paving};
use mapslice::synthetic::random_map;
use mapslice::traversal::{sort_ccw, LoopMode, Traversal};
use mapslice::{Point2, Point3};
use nalgebra::Matrix3;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bary() -> impl Strategy<Value = Barycentric4> {
    prop::array::uniform4(0.0..1.0f64).prop_filter_map("nonzero", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| Barycentric4(w.map(|x| x / s)))
    })
}

fn interior_bary() -> impl Strategy<Value = Barycentric4> {
    prop::array::uniform4(0.05..1.0f64).prop_map(|w| {
        let s: f64 = w.iter().sum();
        Barycentric4(w.map(|x| x / s))
    })
}

fn tri() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(0.0..1.0f64).prop_filter_map("nonzero", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| w.map(|x| x / s))
    })
}

fn any_map() -> impl Strategy<Value = TrivariateMap> {
    prop::collection::vec(prop::array::uniform3(-2.0..2.0f64), 20)
        .prop_map(|c| TrivariateMap::from_slice(0, &c.into_iter().map(Point3::from).collect::<Vec<_>>()).unwrap())
}

fn valid_map() -> impl Strategy<Value = TrivariateMap> {
    any::<u64>().prop_map(|seed| random_map(0, 0.15, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn scalar_patch(degree: u8) -> impl Strategy<Value = TriPatch<f64>> {
    let len = simplex_indices::<3>(degree).len();
    prop::collection::vec(-3.0..3.0f64, len).prop_map(move |c| TriPatch::new(degree, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bernstein_partition_of_unity(u in bary()) {
        let s: f64 = simplex_indices::<4>(3).iter().map(|a| bernstein(a, &u.0)).sum();
        prop_assert!((s - 1.0).abs() < 1e-13);
    }

    #[test]
    fn vertices_interpolate_corner_coefficients(g in any_map(), k in 0usize..4) {
        let p = g.evaluate(&Barycentric4::vertex(k)).unwrap();
        prop_assert_eq!(p, g.coeff(MultiIndex::vertex(k, 3)));
    }

    #[test]
    fn affine_maps_are_reproduced(
        a in prop::array::uniform9(-2.0..2.0f64),
        t in prop::array::uniform3(-2.0..2.0f64),
        u in bary(),
    ) {
        let m = Matrix3::from_row_slice(&a);
        let g = TrivariateMap::identity(0).transformed(&m, &Point3::from(t));
        let [_, u1, u2, u3] = u.0;
        let want = m * Point3::new(u1, u2, u3) + Point3::from(t);
        prop_assert!((g.evaluate(&u).unwrap() - want).amax() < 1e-12);
        let mu = PreparedMap::new(g).offsets.mu;
        prop_assert!(mu.amax() < 1e-12);
    }

    #[test]
    fn values_stay_in_the_control_box(g in any_map(), u in bary()) {
        let p = g.evaluate(&u).unwrap();
        for axis in 0..3 {
            let lo = g.coeffs().iter().map(|c| c[axis]).fold(f64::INFINITY, f64::min);
            let hi = g.coeffs().iter().map(|c| c[axis]).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(lo - 1e-12 <= p[axis] && p[axis] <= hi + 1e-12);
        }
    }

    #[test]
    fn de_casteljau_matches_summation(g in any_map(), u in bary()) {
        let a = g.evaluate(&u).unwrap();
        let b = evaluate_by_summation(&g, &u);
        prop_assert!((a - b).amax() < 1e-12);
    }

    #[test]
    fn face_patch_agrees_with_the_map(g in any_map(), face in 0usize..4, t in tri()) {
        let on_face = g.evaluate(&embed_face_point(face, t)).unwrap();
        let patch = g.face_patch(face).unwrap().evaluate(t);
        prop_assert!((on_face - patch).amax() < 1e-12);
    }

    #[test]
    fn jacobian_matches_finite_differences(g in any_map(), u in interior_bary()) {
        let (_, jac) = g.evaluate_with_jacobian(&u).unwrap();
        let h = 1e-6;
        for col in 0..3 {
            let step = |s: f64| {
                let mut w = u.0;
                w[col + 1] += s;
                w[0] -= s;
                g.evaluate(&Barycentric4(w)).unwrap()
            };
            let fd = (step(h) - step(-h)) / (2.0 * h);
            prop_assert!((fd - jac.column(col)).amax() < 1e-6, "column {col}");
        }
    }

    #[test]
    fn patch_derivative_matches_finite_differences(p in scalar_patch(3), t in tri(), dir in 1usize..3) {
        prop_assume!(t[0] > 1e-3 && t[dir] < 1.0 - 1e-3);
        let d = p.direction_derivative(dir).unwrap();
        let h = 1e-6;
        let step = |s: f64| {
            let mut w = t;
            w[dir] += s;
            w[0] -= s;
            p.evaluate(w)
        };
        let fd = (step(h) - step(-h)) / (2.0 * h);
        prop_assert!((fd - d.evaluate(t)).abs() < 1e-6);
    }

    #[test]
    fn product_is_pointwise(f in scalar_patch(2), g in scalar_patch(3), t in tri()) {
        let fg = bb_product(&f, &g);
        prop_assert_eq!(fg.degree, 5);
        prop_assert!((fg.evaluate(t) - f.evaluate(t) * g.evaluate(t)).abs() < 1e-11);
    }

    #[test]
    fn widened_offsets_dominate_verbatim(g in any_map()) {
        let v = PreparedMap::with_stencil(g.clone(), Stencil::Verbatim).offsets.mu;
        let w = PreparedMap::with_stencil(g, Stencil::Widened).offsets.mu;
        prop_assert!((0..3).all(|a| w[a] >= v[a]));
    }

    #[test]
    fn tolerance_quarters_per_level(g in any_map(), nu in 0u32..8) {
        let m = PreparedMap::new(g);
        let a = m.tolerance(nu).tol;
        let b = m.tolerance(nu + 1).tol;
        prop_assert!((a - b * 4.0).amax() <= 1e-12 * a.amax().max(1.0));
    }

    #[test]
    fn neighbor_relation_is_symmetric(nu in 0u32..5, pick in any::<prop::sample::Index>()) {
        let p = Paving::new(nu);
        let boxes: Vec<BoxId> = p.boxes().collect();
        let a = boxes[pick.index(boxes.len())];
        let nb = p.neighbors(a).unwrap();
        prop_assert!(nb.len() <= 12);
        for b in nb {
            prop_assert!(p.is_valid_box(b));
            prop_assert!(p.neighbors(b).unwrap().contains(&a));
        }
    }

    #[test]
    fn paving_covers_without_interior_overlap(nu in 0u32..4, u in bary()) {
        let p = Paving::new(nu);
        let n = f64::from(p.n());
        let l = [u.0[1] * n, u.0[2] * n, u.0[3] * n];
        let holders = p.boxes().filter(|b| p.box_contains(*b, l, 1e-12)).count();
        prop_assert!(holders >= 1);
        let strict = p.boxes().filter(|b| p.box_contains(*b, l, -1e-9)).count();
        prop_assert!(strict <= 1);
        let found = p.locate(l).unwrap();
        prop_assert!(p.box_contains(found, l, 1e-12));
    }

    #[test]
    fn ccw_sort_is_monotone(pts in prop::collection::vec(prop::array::uniform2(-1.0..1.0f64), 1..12),
                            reference in prop::array::uniform2(-1.0..1.0f64)) {
        let mut cands: Vec<(BoxId, Point2)> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| (BoxId::new(i as u32, 0, 0), Point2::new(p[0], p[1])))
            .collect();
        let r = Point2::new(reference[0], reference[1]);
        prop_assume!(r.norm() > 1e-6);
        sort_ccw(&mut cands, Point2::zeros(), Some(r));
        let ang = |p: &Point2| {
            let a = (r.x * p.y - r.y * p.x).atan2(r.dot(p));
            if a < 0.0 { a + std::f64::consts::TAU } else { a }
        };
        for w in cands.windows(2) {
            prop_assert!(ang(&w[0].1) <= ang(&w[1].1));
        }
    }

    #[test]
    fn slab_pieces_stay_in_the_slab(
        zs in prop::collection::vec(-1.0..1.0f64, 2..10),
        slab in 0.0..0.5f64,
        z0 in -0.5..0.5f64,
    ) {
        let line: Vec<Point3> = zs.iter().enumerate().map(|(i, z)| Point3::new(i as f64, 0.0, *z)).collect();
        for seg in slice_and_emit(&[line], &SlicePlane::new(z0, 0), slab) {
            for p in seg {
                // x runs with the sample index, so z is recovered by interpolation
                let i = (p.x.floor() as usize).min(zs.len() - 2);
                let t = p.x - i as f64;
                let z = zs[i] + t * (zs[i + 1] - zs[i]);
                prop_assert!((z - z0).abs() <= slab + 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mesh_round_trip_is_bit_identical(maps in prop::collection::vec(any_map(), 1..4)) {
        let maps: Vec<TrivariateMap> = maps
            .into_iter()
            .enumerate()
            .map(|(i, mut m)| { m.id = i as u32 * 3; m })
            .collect();
        let text = serde_json::to_string(&MeshFile::from_maps(&maps)).unwrap();
        let back = parse_mesh(&text, std::path::Path::new("mem.json")).unwrap();
        for (a, b) in maps.iter().zip(&back) {
            prop_assert_eq!(a, &b.map);
        }
    }

    #[test]
    fn traversal_is_a_duplicate_free_subset(g in valid_map(), nu in 1u32..5, t in 0.0..1.0f64) {
        let m = PreparedMap::new(g);
        let (lo, hi) = m.z_range;
        let plane = SlicePlane::new(lo + t * (hi - lo), 0);
        let paving = Paving::new(nu);
        let emitted: Vec<BoxId> = Traversal::mapped(&m, plane, paving, LoopMode::Sound).collect();
        let unique: HashSet<BoxId> = emitted.iter().copied().collect();
        prop_assert_eq!(unique.len(), emitted.len());
        let brute = brute_force_active(&m, paving, plane);
        prop_assert!(unique.iter().all(|b| brute.ids.contains(b)));
    }
}
