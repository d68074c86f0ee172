//! Sine basis on the midpoint grid: transform exactness, discrete
//! orthogonality (including the alias families), and the coefficient
//! roundtrip.
//!
//! ```bash
//! cargo run --release -p backheat --example basis_transform
//! ```

use backheat::basis::{
    basis_eval, delta_orthogonality, delta_orthogonality_predicted, discrete_coefficient,
    discrete_coefficient_block, synthesize_field, CoefficientField, GridSpec,
};
use std::f64::consts::PI;

fn main() {
    println!("=== Midpoint-grid sine transform ===\n");

    let grid = GridSpec::new(8, 8).unwrap();
    println!("grid 8x8, first nodes: x_1 = {:.6}, y_1 = {:.6}", grid.nodes_x()[0], grid.nodes_y()[0]);

    // A single in-range mode transforms exactly.
    let values = grid.sample(|x, y| 4.0 * x.sin() * y.sin());
    let c = discrete_coefficient(&values, &grid, 1, 1).unwrap();
    println!("coefficient (1,1) of 4 sin x sin y: {c:.12} (exact 2 pi = {:.12})", 2.0 * PI);

    // Orthogonality: in-range Kronecker plus the alias families beyond the grid.
    println!("\n--- discrete orthogonality, n = m = 4 ---");
    let g4 = GridSpec::new(4, 4).unwrap();
    for (p, q, r, s) in [(1, 1, 1, 1), (1, 1, 2, 1), (1, 1, 7, 1), (1, 1, 9, 1)] {
        let direct = delta_orthogonality(&g4, p, q, r, s);
        let predicted = delta_orthogonality_predicted(&g4, p, q, r, s);
        println!(
            "delta({p},{q},{r},{s}) = {direct:+.8} predicted {predicted:+.8} (1/pi^2 = {:.8})",
            1.0 / (PI * PI)
        );
    }
    println!("note the sign split between the alias families r = 2n - p and r = 2n + p");

    // Out-of-range modes are rejected rather than silently aliased.
    match discrete_coefficient(&values, &grid, 8, 1) {
        Err(e) => println!("\ntransform at mode (8,1) on an 8x8 grid: {e}"),
        Ok(_) => unreachable!(),
    }

    // Roundtrip: synthesize then transform recovers every in-range mode.
    let coeffs = CoefficientField::from_fn(7, 7, |p, q| ((p * q) % 5) as f64 - 2.0).unwrap();
    let field = synthesize_field(&coeffs, &grid);
    let back = discrete_coefficient_block(&field, &grid, 7, 7).unwrap();
    let worst = (1..=7)
        .flat_map(|p| (1..=7).map(move |q| (p, q)))
        .map(|(p, q)| (back[(p - 1, q - 1)] - coeffs.coeff(p, q)).abs())
        .fold(0.0, f64::max);
    println!("\nroundtrip over all 7x7 modes: worst deviation {worst:.2e}");

    println!("\nbasis value phi_11(pi/2, pi/2) = {:.8} (= 2/pi)", basis_eval(1, 1, PI / 2.0, PI / 2.0));
}
