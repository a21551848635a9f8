//! A web under construction: exponential radial pre-stress instead of the
//! affine profile of the finished web.

use orbweb::spectral::{liouville_length, spectrum_gap_diagnostic, ModalBasis};
use orbweb::{PrestressProfile, WebParameters};

fn main() -> Result<(), orbweb::Error> {
    let finished = WebParameters::demo();
    for (label, params) in [
        ("finished", finished),
        ("unfinished k=0.5", WebParameters { profile: PrestressProfile::Unfinished { k: 0.5 }, ..finished }),
        ("unfinished k=2", WebParameters { profile: PrestressProfile::Unfinished { k: 2.0 }, ..finished }),
    ] {
        let basis = ModalBasis::build(&params, 2048, 2, 5)?;
        println!(
            "{label}: J = {:.4}, T_rho(R) = {:.4}",
            liouville_length(&params)?,
            params.radial_prestress(params.radius)?
        );
        for n in 0..=2 {
            let w: Vec<String> = basis.frequencies(n).iter().map(|w| format!("{w:.3}")).collect();
            println!("  n={n}: {}", w.join(" "));
        }
        let gap = spectrum_gap_diagnostic(&basis).iter().map(|g| g.min_gap).fold(f64::INFINITY, f64::min);
        println!("  smallest gap {gap:.4}");
    }
    Ok(())
}
