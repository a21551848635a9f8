//! The spider at the hub: a point mass lowers the axisymmetric spectrum and
//! enters through an eigenvalue-dependent condition at the center.

use orbweb::spectral::{center_condition_residual, solve_radial, RadialGrid, SpectralOptions};
use orbweb::WebParameters;

fn main() -> Result<(), orbweb::Error> {
    println!("{:>8} {:>10} {:>10} {:>10} {:>12}", "M", "lambda_1", "lambda_2", "lambda_3", "center res");
    for hub_mass in [0.0, 1.0, 5.0, 20.0, 100.0] {
        let params = WebParameters { hub_mass, ..WebParameters::demo() };
        let grid = RadialGrid::liouville(&params, 2048)?;
        let pairs = solve_radial(&params, &grid, 0, 3, &SpectralOptions::default())?;
        let res = pairs.iter().map(|p| center_condition_residual(p, &params)).fold(0.0, f64::max);
        println!(
            "{hub_mass:8.1} {:10.4} {:10.4} {:10.4} {res:12.2e}",
            pairs[0].lambda, pairs[1].lambda, pairs[2].lambda
        );
    }
    Ok(())
}
