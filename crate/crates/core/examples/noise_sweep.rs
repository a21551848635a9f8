//! How measurement noise propagates to the recovered coefficients.

use orbweb::forward::{project_source, synthesize_ring, RingSpec, SourceField, TimeProfile, TimeShape};
use orbweb::inverse::{invert, recommended_dt, recommended_duration, ReconstructionConfig};
use orbweb::spectral::ModalBasis;
use orbweb::WebParameters;

fn main() -> Result<(), orbweb::Error> {
    let params = WebParameters::demo();
    let basis = ModalBasis::build(&params, 2048, 4, 8)?;
    let truth = project_source(&SourceField::bump(0.3, 1.0, 0.12, 1.0), &basis)?;
    let shape = TimeShape::Exponential { amplitude: 1.0, rate: 0.5 };
    let g = TimeProfile::from_shape(shape, recommended_duration(&basis), recommended_dt(&basis, 4, 8))?;
    let clean = RingSpec::default_for(params.radius, 4);
    let peak = synthesize_ring(&basis, &truth, &g, &clean)?.max_abs();
    let config = ReconstructionConfig::with_truncation(4, 8);

    println!("{:>10} {:>14} {:>14}", "noise/peak", "mean error", "worst error");
    for level in [0.0, 1e-5, 1e-4, 1e-3, 1e-2] {
        let errors: Vec<f64> = (0..5)
            .map(|seed| {
                let spec = RingSpec { noise: level * peak, seed, ..clean.clone() };
                let m = synthesize_ring(&basis, &truth, &g, &spec)?;
                Ok(invert(&m, &basis, &g, &config)?.coefficients.relative_error(&truth))
            })
            .collect::<Result<_, orbweb::Error>>()?;
        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        let worst = errors.iter().cloned().fold(0.0, f64::max);
        println!("{level:10.0e} {mean:14.3e} {worst:14.3e}");
    }
    Ok(())
}
