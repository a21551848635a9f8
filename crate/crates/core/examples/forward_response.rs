//! Response of the web to a localized impact: modal coefficients of a
//! Gaussian bump, the energy balance, and the displacement seen by one sensor.

use std::f64::consts::PI;

use orbweb::forward::{
    energy_norm_squared, project_source, projection_angles, DisplacementField, SourceField, TimeProfile, TimeShape,
};
use orbweb::spectral::ModalBasis;
use orbweb::WebParameters;

fn main() -> Result<(), orbweb::Error> {
    let params = WebParameters::demo();
    let basis = ModalBasis::build(&params, 2048, 8, 12)?;
    let f = SourceField::bump(params.radius / 3.0, PI / 4.0, 0.1 * params.radius, 1.0);
    let coeffs = project_source(&f, &basis)?;
    let sum = coeffs.weighted_square_sum(&basis);
    let norm = energy_norm_squared(&f, &basis, projection_angles(8));
    println!("energy: coefficients {sum:.6e}, quadrature {norm:.6e}");

    let g = TimeProfile::from_shape(TimeShape::Exponential { amplitude: 1.0, rate: 1.0 }, 6.0, 2e-3)?;
    let field = DisplacementField::new(&basis, &coeffs, &g)?;
    let (rho, theta) = (params.radius / 6.0, 0.0);
    println!("displacement at rho = {rho:.3}, theta = {theta}:");
    for k in 0..=12 {
        let t = 0.5 * k as f64;
        println!("  t = {t:4.1}  u = {:+.4e}", field.at(rho, theta, t)?);
    }
    Ok(())
}
