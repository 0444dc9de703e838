// Regenerate the bundled demo mesh: `cargo run --example make_demo_mesh`.

use mapslice::io::MeshFile;
use mapslice::synthetic::demo_mesh;

/// The demo mesh as written to `data/demo_mesh.json`.
pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let maps = demo_mesh();
    let text = serde_json::to_string_pretty(&MeshFile::from_maps(&maps))? + "\n";
    let back = MeshFile::to_maps(&serde_json::from_str(&text)?)?;
    if back != maps {
        return Err("demo mesh does not round-trip".into());
    }
    Ok(text)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/demo_mesh.json");
    std::fs::write(path, run_example()?)?;
    println!("wrote {path}");
    Ok(())
}
