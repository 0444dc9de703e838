// Box counts, corners, neighbors and boundary boxes of the paving.

use mapslice::paving::{total_boxes, BoxId, Paving};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>6} {:>12}", "n", "boxes");
    for nu in 2..=9 {
        let n = 1u64 << nu;
        println!("{n:>6} {:>12}", total_boxes(n)?);
    }

    let paving = Paving::new(2);
    let apex = BoxId::new(3, 0, 0);
    let corners = paving.box_corners(apex)?;
    println!("corners of box {apex} at n = 4:");
    for (m, l) in corners.lattice.iter().enumerate() {
        println!("  {m}: {l:?}");
    }
    let nb: Vec<String> = paving.neighbors(BoxId::new(1, 1, 1))?.iter().map(|b| b.to_string()).collect();
    println!("neighbors of 1,1,1: {}", nb.join("  "));
    println!("edge boxes: {}", paving.edge_boxes().len());
    for face in 0..4 {
        println!("face {face}: {} boxes", paving.face_boxes(face)?.len());
    }
    let p = [1.2, 0.7, 1.9];
    println!("lattice point {p:?} lies in box {:?}", paving.locate(p).map(|b| b.to_string()));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
