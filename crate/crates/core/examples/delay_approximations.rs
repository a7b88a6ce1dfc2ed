//! Step responses of the delay approximations and their L2 errors as the
//! number of stages grows.

use mealsim::delay::{frequency_response, realize, step_comparison, DelayKind, DelaySpec};

fn main() -> mealsim::Result<()> {
    let tau = 10.0;
    let sigma = 2.0;
    println!(
        "{:<10} {}",
        "kind",
        [1, 2, 4, 8, 16]
            .map(|m| format!("{:>10}", format!("M={m}")))
            .join("")
    );
    for kind in DelayKind::ALL {
        let errs: Vec<String> = [1, 2, 4, 8, 16]
            .iter()
            .map(|&m| {
                let c = step_comparison(
                    kind,
                    &DelaySpec::new(tau, m).unwrap(),
                    sigma,
                    3.0 * tau,
                    0.05,
                )
                .unwrap();
                format!("{:>10.4}", c.l2_error())
            })
            .collect();
        println!("{:<10} {}", kind.name(), errs.join(""));
    }

    // e^{−iωτ} has unit modulus; the Padé cascade is all-pass, the lag chain is not.
    let spec = DelaySpec::new(tau, 4)?;
    for kind in [DelayKind::Lag, DelayKind::Pade] {
        let r = realize(kind, &spec, sigma)?;
        let h = frequency_response(r.linear().unwrap(), 0.3).unwrap();
        println!(
            "{:<5} |H(0.3i)| = {:.4}, arg = {:+.4} (exact {:+.4})",
            kind.name(),
            h.norm(),
            h.arg(),
            -0.3 * tau
        );
    }
    Ok(())
}
