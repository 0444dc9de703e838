use mapslice::bbform::TrivariateMap;
use mapslice::bounds::PreparedMap;
use mapslice::cuboid::SlicePlane;
use mapslice::io::{self, ActivationLog, ColorMode};
use mapslice::paving::Paving;
use mapslice::sweep::{slice_map, sweep, PlaneStack, SliceActivation, SweepConfig};
use mapslice::synthetic::{random_maps, stacked_mesh};
use mapslice::Point2;

fn inside(poly: &[Point2], p: Point2) -> bool {
    let mut c = false;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if (a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y) {
            c = !c;
        }
    }
    c
}

#[test]
fn identity_mid_plane_tiles_the_triangle() {
    let map = PreparedMap::new(TrivariateMap::identity(0));
    let z0 = 0.5;
    let (recs, _) = slice_map(&map, SlicePlane::new(z0, 0), Paving::new(2), &SweepConfig::default());
    let doc = io::svg_document(&recs, ColorMode::Order);
    assert_eq!(doc.matches("<polygon").count(), recs.len());

    // tiles may overlap, so measure the area they cover
    let m = 600;
    let mut hits = 0;
    for a in 0..m {
        for b in 0..m {
            let q = Point2::new((a as f64 + 0.5) / m as f64, (b as f64 + 0.5) / m as f64);
            if recs.iter().any(|r| r.polygon.len() >= 3 && inside(&r.polygon, q)) {
                hits += 1;
            }
        }
    }
    let covered = hits as f64 / (m * m) as f64;
    let triangle = 0.5 * (1.0 - z0) * (1.0 - z0);
    assert!((covered / triangle - 1.0).abs() < 0.05, "covered {covered}, exact {triangle}");
}

#[test]
fn log_round_trips_and_groups_by_plane_then_map() {
    let maps: Vec<PreparedMap> = stacked_mesh(4).into_iter().map(PreparedMap::new).collect();
    let planes = PlaneStack::uniform(0.2, 0.3, 6).unwrap();
    let mut recs: Vec<SliceActivation> = Vec::new();
    sweep(&maps, &planes, Paving::new(2), &SweepConfig::default(), &mut recs).unwrap();
    let log = ActivationLog::from_records(4, &recs);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("log.json");
    log.write(&path).unwrap();
    assert_eq!(ActivationLog::read(&path).unwrap(), log);
    let total: usize = log.planes.iter().flat_map(|p| &p.maps).map(|m| m.activations.len()).sum();
    assert_eq!(total, recs.len());
    for w in log.planes.windows(2) {
        assert!(w[0].index < w[1].index);
    }
    for p in &log.planes {
        for w in p.maps.windows(2) {
            assert!(w[0].map < w[1].map);
        }
        for m in &p.maps {
            let mut boxes: Vec<_> = m.activations.iter().map(|a| a.box_id).collect();
            boxes.sort();
            boxes.dedup();
            assert_eq!(boxes.len(), m.activations.len());
        }
    }
}

#[test]
fn mesh_file_round_trip() {
    let maps = random_maps(9, 6, 0.15);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mesh.json");
    io::write_mesh(&path, &maps).unwrap();
    let back = io::load_mesh(&path).unwrap();
    assert_eq!(back.len(), maps.len());
    for (a, b) in maps.iter().zip(&back) {
        for (p, q) in a.coeffs().iter().zip(b.map.coeffs()) {
            assert_eq!(p.map(f64::to_bits), q.map(f64::to_bits));
        }
    }
}

#[test]
fn unwritable_paths_are_io_errors() {
    let missing = std::path::Path::new("/nonexistent-dir/out");
    assert!(matches!(io::write_svg(&[], missing, ColorMode::Plain), Err(mapslice::Error::Io { .. })));
    assert!(matches!(io::write_stats(&Default::default(), missing), Err(mapslice::Error::Io { .. })));
    assert!(matches!(io::load_mesh(missing), Err(mapslice::Error::Io { .. })));
}

#[test]
fn plane_file_parse_errors_point_at_the_token() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    std::fs::write(&path, "0.1 0.2\n0.3 zz\n").unwrap();
    match io::read_planes(&path) {
        Err(mapslice::Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
        other => panic!("unexpected {other:?}"),
    }
}
