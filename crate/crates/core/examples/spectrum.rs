//! Spectrum of the demo web: eigenvalues per angular class, the travel time
//! J, gaps between consecutive frequencies and the normalization check.

use orbweb::spectral::asymptotics::{index_shift, rate_sequence};
use orbweb::spectral::{liouville_length, spectrum_gap_diagnostic, ModalBasis, DEFAULT_NODES};
use orbweb::WebParameters;

fn main() -> Result<(), orbweb::Error> {
    let params = WebParameters::demo();
    let basis = ModalBasis::build(&params, DEFAULT_NODES, 4, 8)?;
    let j = liouville_length(&params)?;
    println!("J = {j:.6}");
    for n in 0..=basis.n_theta {
        let freqs: Vec<String> = basis.frequencies(n).iter().map(|w| format!("{w:7.3}")).collect();
        println!("n={n}  sqrt(lambda): {}", freqs.join(" "));
    }
    for gap in spectrum_gap_diagnostic(&basis) {
        println!("n={} smallest gap {:.4} between m={} and m={}", gap.n, gap.min_gap, gap.at_m, gap.at_m + 1);
    }
    let o = basis.orthonormality()?;
    println!("orthonormality: off-diagonal {:.1e}, diagonal {:.1e}", o.max_off_diagonal, o.max_diagonal_error);

    // m |sqrt(lambda_m) - m pi / J| stays bounded.
    let deep = ModalBasis::build(&params, DEFAULT_NODES, 0, 41)?;
    let rates = rate_sequence(&deep.classes[0], j, index_shift(0, &params), 1.0);
    for (k, r) in rates.iter().filter(|(k, _)| k % 10 == 0) {
        println!("k={k:2}  k |sqrt(lambda) - k pi/J| = {r:.4}");
    }
    Ok(())
}
