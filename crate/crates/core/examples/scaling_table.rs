// Active boxes, tests and run time per resolution on the identity map,
// laid out as a results table.

use std::time::Instant;

use mapslice::bbform::TrivariateMap;
use mapslice::bounds::PreparedMap;
use mapslice::cuboid::SlicePlane;
use mapslice::io::four_significant;
use mapslice::paving::Paving;
use mapslice::traversal::{LoopMode, Traversal};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let max_nu: u32 = std::env::var("MAPSLICE_MAX_NU")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let map = PreparedMap::new(TrivariateMap::identity(0));
    let plane = SlicePlane::new(0.5, 0);
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>9} {:>9}",
        "n", "time (s)", "active", "total", "pct", "tests"
    );
    for nu in 2..=max_nu {
        let paving = Paving::new(nu);
        let started = Instant::now();
        let mut t = Traversal::mapped(&map, plane, paving, LoopMode::Sound);
        let active = t.by_ref().count();
        let secs = started.elapsed().as_secs_f64();
        let total = paving.total_boxes();
        println!(
            "{:>5} {:>10.4} {:>10} {:>10} {:>9} {:>9}",
            paving.n(),
            secs,
            active,
            total,
            four_significant(100.0 * active as f64 / total as f64),
            t.counters().cuboid_tests
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
