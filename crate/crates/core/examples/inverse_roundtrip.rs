//! Synthesize a ring measurement near the hub and recover the impact.

use std::f64::consts::PI;

use orbweb::forward::{project_source, synthesize_ring, RingSpec, SourceField, TimeProfile, TimeShape};
use orbweb::inverse::{invert, recommended_dt, recommended_duration, ReconstructionConfig};
use orbweb::spectral::ModalBasis;
use orbweb::WebParameters;

fn main() -> Result<(), orbweb::Error> {
    let params = WebParameters::demo();
    let basis = ModalBasis::build(&params, 2048, 8, 12)?;
    let (rho0, theta0) = (0.6, 4.0);
    let truth = project_source(&SourceField::bump(rho0, theta0, 0.1, 1.0), &basis)?;

    let duration = recommended_duration(&basis);
    let g = TimeProfile::from_shape(
        TimeShape::RaisedCosine { amplitude: 1.0, duration: 0.5 },
        duration,
        recommended_dt(&basis, 8, 12),
    )?;
    let ring = RingSpec::default_for(params.radius, 8);
    let m = synthesize_ring(&basis, &truth, &g, &ring)?;
    println!("{} radii x {} angles x {} samples over {duration:.2}", m.radii.len(), m.angles.len(), m.steps);

    let result = invert(&m, &basis, &g, &ReconstructionConfig::default())?;
    println!("coefficient error {:.2e}", result.coefficients.relative_error(&truth));
    println!("worst condition number {:.3}", result.max_condition);
    if let Some(p) = &result.localization.peak {
        println!("peak at rho = {:.3}, theta = {:.3} (impact at {rho0}, {theta0})", p.rho, p.theta);
        println!("angular miss {:.3} rad", (p.theta - theta0 + PI).rem_euclid(2.0 * PI) - PI);
    }
    Ok(())
}
