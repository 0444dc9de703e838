// Sweep the bundled demo mesh and write SVG slices, the activation log and
// per-plane statistics.
//
// Output goes to `$MAPSLICE_OUT` (default: a temp directory).

use std::path::PathBuf;

use mapslice::io::{self, ActivationLog, ColorMode};
use mapslice::paving::Paving;
use mapslice::sweep::{sweep, PlaneStack, SliceActivation, SweepConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::var_os("MAPSLICE_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("mapslice-sweep-svg"));
    std::fs::create_dir_all(&out)?;
    let maps = io::load_mesh(concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_mesh.json"))?;
    let planes = PlaneStack::uniform(0.1, 0.25, 8)?;
    let paving = Paving::new(3);
    let mut records: Vec<SliceActivation> = Vec::new();
    let stats = sweep(&maps, &planes, paving, &SweepConfig::default(), &mut records)?;

    for (i, ps) in stats.planes.iter().enumerate() {
        let lo = records.partition_point(|r| r.plane_index < i);
        let hi = records.partition_point(|r| r.plane_index <= i);
        io::write_svg(&records[lo..hi], out.join(format!("plane_{i:04}.svg")), ColorMode::Order)?;
        println!(
            "z = {:.2}: {:>2} maps, {:>5} boxes, {:>6} tests",
            ps.z0, ps.active_maps, ps.activations, ps.cuboid_tests
        );
    }
    ActivationLog::from_records(paving.n(), &records).write(out.join("activations.json"))?;
    io::write_stats(&stats, out.join("stats.csv"))?;
    println!("wrote {}", out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
