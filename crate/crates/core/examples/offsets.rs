// Second differences and the box tolerances they induce.

use mapslice::bounds::{offset_vector, PreparedMap, Stencil};
use mapslice::oracle::{box_deviation, tet_deviation};
use mapslice::paving::Paving;
use mapslice::synthetic::random_maps;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = random_maps(3, 1, 0.15).remove(0);
    let prepared = PreparedMap::new(g.clone());
    let sd = &prepared.second_differences;
    println!("{} stencil entries", sd.entries().len());
    for e in sd.entries().iter().filter(|e| !e.widened).take(5) {
        println!("  d_{}{}{} = {:?}", e.pair.0, e.pair.1, e.anchor, e.value.as_slice());
    }
    let verbatim = offset_vector(sd, [1.0; 3], Stencil::Verbatim)?;
    println!("mu (verbatim) = {:?}", verbatim.mu.as_slice());
    println!("mu (shipped)  = {:?}", prepared.offsets.mu.as_slice());
    println!("sampled |g - l| = {:?}", tet_deviation(&g, 10_000).as_slice());

    println!("{:>4} {:>12} {:>12}", "nu", "tol z", "worst box");
    for nu in 0..=4 {
        let paving = Paving::new(nu);
        let tol = prepared.tolerance(nu).tol;
        let worst = paving
            .boxes()
            .map(|b| box_deviation(&g, &paving, b, 4).z)
            .fold(0.0, f64::max);
        println!("{nu:>4} {:>12.3e} {:>12.3e}", tol.z, worst);
        if worst > tol.z {
            return Err(format!("tolerance violated at nu = {nu}").into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
