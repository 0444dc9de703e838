use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mapslice::bbform::TrivariateMap;
use mapslice::io::{write_mesh, ActivationLog, MeshFile};

const DEMO: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_mesh.json");

fn mapslice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapslice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn missing_mesh_prints_usage() {
    let out = mapslice(&["--z-start", "0", "--z-step", "0.5", "--count", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn full_run_writes_every_output() {
    let dir = tempfile::tempdir().unwrap();
    let (svg, log, stats) = (dir.path().join("svg"), dir.path().join("log.json"), dir.path().join("stats.csv"));
    let out = mapslice(&[
        "--mesh", DEMO, "--nu", "3", "--z-start", "0.2", "--z-step", "0.4", "--count", "5",
        "--template", "octet", "--slab", "0.02", "--svg-dir", path_str(&svg), "--log", path_str(&log),
        "--stats", path_str(&stats), "--jobs", "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let log = ActivationLog::read(&log).unwrap();
    assert_eq!(log.version, 1);
    assert_eq!(log.n, 8);
    for i in 0..5 {
        let doc = fs::read_to_string(svg.join(format!("plane_{i:04}.svg"))).unwrap();
        let in_log: usize = log
            .planes
            .iter()
            .filter(|p| p.index == i)
            .flat_map(|p| &p.maps)
            .map(|m| m.activations.len())
            .sum();
        assert_eq!(doc.matches("<polygon").count(), in_log, "plane {i}");
    }
    assert!(log.planes.iter().flat_map(|p| &p.maps).flat_map(|m| &m.activations).any(|a| !a.segments.is_empty()));
    let csv = fs::read_to_string(stats).unwrap();
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn uniform_and_listed_planes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let planes = dir.path().join("planes.txt");
    let z: Vec<String> = (0..6).map(|i| format!("{}", 0.05 + 0.3 * i as f64)).collect();
    fs::write(&planes, format!("# heights\n{}\n", z.join("\n"))).unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let common = ["--mesh", DEMO, "--nu", "3"];
    let run_a = mapslice(&[&common[..], &["--z-start", "0.05", "--z-step", "0.3", "--count", "6", "--log", path_str(&a)]].concat());
    let run_b = mapslice(&[&common[..], &["--planes", path_str(&planes), "--log", path_str(&b)]].concat());
    assert_eq!(run_a.status.code(), Some(0));
    assert_eq!(run_b.status.code(), Some(0), "{}", String::from_utf8_lossy(&run_b.stderr));
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

fn run_to(dir: &Path, tag: &str, extra: &[&str]) -> (Vec<u8>, Vec<u8>, String) {
    let log = dir.join(format!("{tag}.json"));
    let svg = dir.join(format!("{tag}-svg"));
    let stats = dir.join(format!("{tag}.csv"));
    let out = mapslice(
        &[
            &["--mesh", DEMO, "--nu", "3", "--z-start", "0.3", "--z-step", "0.5", "--count", "4"][..],
            &["--log", path_str(&log), "--svg-dir", path_str(&svg), "--stats", path_str(&stats)],
            extra,
        ]
        .concat(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let svgs: Vec<u8> = (0..4)
        .flat_map(|i| fs::read(svg.join(format!("plane_{i:04}.svg"))).unwrap())
        .collect();
    (fs::read(log).unwrap(), svgs, fs::read_to_string(stats).unwrap())
}

fn without_time(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let mut cols: Vec<&str> = l.split(',').collect();
            cols.remove(4);
            cols.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to(dir.path(), "a", &[]);
    let b = run_to(dir.path(), "b", &[]);
    let c = run_to(dir.path(), "c", &["--jobs", "4"]);
    assert_eq!(a.0, b.0);
    assert_eq!(a.1, b.1);
    assert_eq!(without_time(&a.2), without_time(&b.2));
    assert_eq!(a.0, c.0);
    assert_eq!(a.1, c.1);
}

#[test]
fn cached_microstructure_matches_regenerated() {
    let dir = tempfile::tempdir().unwrap();
    let plain = run_to(dir.path(), "plain", &["--template", "edge-frame", "--slab", "0.05"]);
    let cached = run_to(dir.path(), "cached", &["--template", "edge-frame", "--slab", "0.05", "--cache-active"]);
    assert_eq!(plain.0, cached.0);
}

#[test]
fn identity_stats_row() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("id.json");
    write_mesh(&mesh, &[TrivariateMap::identity(0)]).unwrap();
    let stats = dir.path().join("s.csv");
    let out = mapslice(&["--mesh", path_str(&mesh), "--nu", "2", "--planes", path_str(&write_planes(dir.path(), "0.5")), "--stats", path_str(&stats)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(stats).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("version"), "1");
    assert_eq!(col("n"), "4");
    assert_eq!(col("total_boxes"), "20");
    let active: f64 = col("boxes_in_intersection").parse().unwrap();
    assert_eq!(col("intersect_total_pct"), mapslice::io::four_significant(100.0 * active / 20.0));
}

fn write_planes(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("planes.txt");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn input_and_io_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = MeshFile::from_maps(&[TrivariateMap::identity(0)]);
    file.maps[0].coeffs.truncate(19);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    let out = mapslice(&["--mesh", path_str(&bad), "--z-start", "0", "--z-step", "1", "--count", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("map #0"));

    let planes = write_planes(dir.path(), "0.5 0.2\n");
    let out = mapslice(&["--mesh", DEMO, "--planes", path_str(&planes)]);
    assert_eq!(out.status.code(), Some(1));

    let out = mapslice(&["--mesh", DEMO, "--z-start", "0", "--z-step", "1", "--count", "1", "--log", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mapslice(&["--mesh", "/nonexistent-dir/m.json", "--z-start", "0", "--z-step", "1", "--count", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hidden_verify_subcommand() {
    let out = mapslice(&["verify", "--maps", "3", "--max-nu", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().count() >= 6);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");
    let help = String::from_utf8_lossy(&mapslice(&["--help"]).stdout).to_string();
    assert!(!help.contains("verify"));
}
