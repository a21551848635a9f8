//! The deconvolution step on its own: remove a known load history from a
//! signal and recover the impulse response.

use orbweb::forward::{differentiate, TimeProfile, TimeShape};
use orbweb::inverse::{convolve, volterra_deconvolve};

fn main() -> Result<(), orbweb::Error> {
    let g = TimeProfile::from_shape(TimeShape::Exponential { amplitude: 1.0, rate: 0.8 }, 8.0, 1e-3)?;
    let times = g.times();
    // Impulse response of a single mode with sqrt(lambda) = 3.
    let kernel: Vec<f64> = times.iter().map(|t| (3.0 * t).sin()).collect();
    let u = convolve(&kernel, &g);
    let recovered = volterra_deconvolve(&differentiate(&u, g.dt), &g)?;
    for k in (0..times.len()).step_by(1000) {
        println!("t = {:4.1}  kernel {:+.6}  recovered {:+.6}", times[k], kernel[k], recovered[k]);
    }
    let worst = kernel.iter().zip(&recovered).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("max deviation {worst:.2e}");

    let vanishing = TimeProfile::from_shape(TimeShape::HalfSine { amplitude: 1.0, duration: 1.0 }, 8.0, 1e-3)?;
    if let Err(e) = volterra_deconvolve(&u, &vanishing) {
        println!("load starting from zero: {e}");
    }
    Ok(())
}
