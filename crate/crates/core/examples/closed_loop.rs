// A slice that meets one face in a closed loop, and a slice with two
// disconnected pieces.

use mapslice::bounds::PreparedMap;
use mapslice::cuboid::SlicePlane;
use mapslice::oracle::{brute_force_active, connected_components, traversal_active};
use mapslice::paving::Paving;
use mapslice::synthetic::{face_loop_map, two_component_map};
use mapslice::traversal::{face_may_have_loop, LoopMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let paving = Paving::new(4);
    let bump = PreparedMap::new(face_loop_map(0, 0.45));
    let plane = SlicePlane::new(-0.07, 0);
    let truth = brute_force_active(&bump, paving, plane);
    println!("face loop: {} active boxes, none on an edge", truth.len());
    for mode in [LoopMode::Sound, LoopMode::PaperDet, LoopMode::AlwaysScan] {
        let scanned: Vec<bool> = (0..4)
            .map(|f| face_may_have_loop(&bump.map, f, mode))
            .collect::<Result<_, _>>()?;
        let found = traversal_active(&bump, paving, plane, mode);
        println!("  {mode:>11}: scans faces {scanned:?}, finds {} boxes", found.len());
    }
    if traversal_active(&bump, paving, plane, LoopMode::Sound).ids != truth.ids {
        return Err("sound mode missed the loop".into());
    }

    let banana = PreparedMap::new(two_component_map(1));
    let plane = SlicePlane::new(0.75, 0);
    let set = brute_force_active(&banana, paving, plane);
    let comps = connected_components(&set, &paving);
    let sizes: Vec<usize> = comps.iter().map(|c| c.len()).collect();
    let found = traversal_active(&banana, paving, plane, LoopMode::Sound);
    println!(
        "two pieces: components of size {sizes:?}, traversal visits {} boxes",
        found.len()
    );
    if found.ids != set.ids {
        return Err("a component was missed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
