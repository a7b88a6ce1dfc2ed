//! Quadrature rules and Lagrange differentiation matrices.

use mealsim::discretization::quadrature::nodes_weights;
use mealsim::discretization::{Family, LagrangeBasis, Rule};

fn main() -> mealsim::Result<()> {
    for (family, rule) in [
        (Family::Legendre, Rule::Gauss),
        (Family::Legendre, Rule::GaussLobatto),
        (Family::Chebyshev, Rule::Gauss),
        (Family::Chebyshev, Rule::GaussLobatto),
    ] {
        let (z, w) = nodes_weights(family, 4, rule)?;
        println!("{family:?} {rule:?} M=4");
        println!("  nodes   {z:.6?}");
        println!("  weights {w:.6?}");
    }

    let (z, _) = nodes_weights(Family::Legendre, 16, Rule::GaussLobatto)?;
    let basis = LagrangeBasis::new(&z)?;
    let f: Vec<f64> = z.iter().map(|x| (2.0 * x).sin()).collect();
    let d1 = basis.differentiate(&f);
    let d2 = basis.differentiate2(&f);
    let e1 = z
        .iter()
        .zip(&d1)
        .map(|(x, d)| (d - 2.0 * (2.0 * x).cos()).abs())
        .fold(0.0, f64::max);
    let e2 = z
        .iter()
        .zip(&d2)
        .map(|(x, d)| (d + 4.0 * (2.0 * x).sin()).abs())
        .fold(0.0, f64::max);
    println!("sin(2x) on 17 Lobatto nodes: max error f' {e1:.1e}, f'' {e2:.1e}");
    println!(
        "interpolant at 0.3: {:.12} (exact {:.12})",
        basis.interpolate(&f, 0.3),
        (0.6f64).sin()
    );
    Ok(())
}
