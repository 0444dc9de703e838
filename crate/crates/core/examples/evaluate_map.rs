// Evaluate a cubic map, its Jacobian, and a face patch.

use mapslice::bbform::{validate_map, Barycentric4, TrivariateMap};
use mapslice::oracle::evaluate_by_summation;
use mapslice::synthetic::random_maps;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let identity = TrivariateMap::identity(0);
    let centroid = Barycentric4::new([0.25; 4])?;
    println!("identity at the centroid: {:?}", identity.evaluate(&centroid)?.as_slice());

    let g = random_maps(11, 1, 0.15).remove(0);
    let u = Barycentric4::new([0.1, 0.2, 0.3, 0.4])?;
    let (p, jac) = g.evaluate_with_jacobian(&u)?;
    let direct = evaluate_by_summation(&g, &u);
    println!("perturbed map at {:?}: {:?}", u.0, p.as_slice());
    println!("  de Casteljau vs direct sum: {:.2e}", (p - direct).norm());
    println!("  det of the Jacobian: {:.6}", jac.determinant());

    let report = validate_map(&g, 1000);
    println!(
        "  sampled det range over 1000 points: [{:.4}, {:.4}]",
        report.min_det, report.max_det
    );

    let face = g.face_patch(3)?;
    println!("  face 3 centroid: {:?}", face.evaluate([1.0 / 3.0; 3]).as_slice());
    if report.non_positive {
        return Err("sampled Jacobian is not positive".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
