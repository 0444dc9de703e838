// One map, one plane: the traversal against the brute-force set.

use mapslice::bounds::PreparedMap;
use mapslice::cuboid::SlicePlane;
use mapslice::oracle::{brute_force_active, traversal_active};
use mapslice::paving::Paving;
use mapslice::synthetic::random_maps;
use mapslice::traversal::{LoopMode, Traversal};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let map = PreparedMap::new(random_maps(5, 1, 0.15).remove(0));
    let plane = SlicePlane::new(0.4, 0);
    let paving = Paving::new(4);

    let mut t = Traversal::mapped(&map, plane, paving, LoopMode::Sound);
    println!("boundary seeds: {}", t.boundary_boxes().len());
    let first: Vec<String> = t.by_ref().take(8).map(|b| b.to_string()).collect();
    println!("first boxes: {}", first.join("  "));
    let rest = t.by_ref().count();
    let c = t.counters();
    println!(
        "emitted {} boxes with {} cuboid tests ({} on the boundary), {} walk-back steps, {} restarts",
        first.len() + rest,
        c.cuboid_tests,
        c.boundary_tests,
        c.walk_back_steps,
        c.restarts
    );

    let brute = brute_force_active(&map, paving, plane);
    let found = traversal_active(&map, paving, plane, LoopMode::Sound);
    println!(
        "brute force: {} of {} boxes; traversal matches: {}",
        brute.len(),
        paving.total_boxes(),
        brute.ids == found.ids
    );
    if brute.ids != found.ids {
        return Err("traversal differs from brute force".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
