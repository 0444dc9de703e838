// Beam-lattice microstructure: per-box generation, mapping and slab
// slicing, and how the work grows with the paving resolution.

use mapslice::bbform::TrivariateMap;
use mapslice::bounds::PreparedMap;
use mapslice::cuboid::SlicePlane;
use mapslice::microstructure::{generate_cell, CellTemplate, TemplateKind};
use mapslice::paving::{BoxId, Paving};
use mapslice::sweep::{slice_map, MicroConfig, SweepConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let paving = Paving::new(2);
    for kind in [TemplateKind::EdgeFrame, TemplateKind::Octet, TemplateKind::DiagonalCross] {
        let t = CellTemplate::new(kind, 0.1, 5)?;
        let inner = generate_cell(&paving, BoxId::new(0, 0, 0), &t)?.len();
        let slant = generate_cell(&paving, BoxId::new(1, 1, 1), &t)?.len();
        println!("{kind:>14}: {inner:>2} beams inside, {slant:>2} in a slant box");
    }

    let map = PreparedMap::new(TrivariateMap::identity(0));
    let plane = SlicePlane::new(0.5, 0);
    let config = SweepConfig {
        micro: Some(MicroConfig {
            template: CellTemplate::edge_frame(),
            slab: None,
        }),
        ..SweepConfig::default()
    };
    println!("{:>5} {:>8} {:>10} {:>10}", "n", "boxes", "segments", "evals");
    let mut prev = None;
    for nu in 3..=6 {
        let (recs, stats) = slice_map(&map, plane, Paving::new(nu), &config);
        let segments: usize = recs.iter().map(|r| r.segments.len()).sum();
        println!(
            "{:>5} {:>8} {:>10} {:>10}",
            1 << nu,
            recs.len(),
            segments,
            stats.micro_evaluations
        );
        if let Some(p) = prev {
            println!("      growth x{:.2}", stats.micro_evaluations as f64 / p as f64);
        }
        prev = Some(stats.micro_evaluations);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
