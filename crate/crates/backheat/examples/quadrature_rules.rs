//! Gauss-Legendre rules for the cumulative diffusion and the end-corrected
//! composite rule for time integrals.
//!
//! ```bash
//! cargo run --release -p backheat --example quadrature_rules
//! ```

use backheat::quadrature::{composite_time_weights, gauss_legendre_rule, integrate_gl, TimeGrid};

fn main() {
    println!("=== Quadrature rules ===\n");

    let rule = gauss_legendre_rule(512).unwrap();
    let a1 = integrate_gl(|s| 2.0 - s, 0.0, 1.0, &rule);
    let a2 = integrate_gl(|s| 0.5 * (-s).exp(), 0.0, 1.0, &rule);
    println!("512-node rule:");
    println!("  integral of 2 - t       over [0,1] = {a1:.12} (exact 1.5)");
    println!("  integral of 0.5 e^-t    over [0,1] = {a2:.12} (exact {:.12})", 0.5 * (1.0 - (-1.0f64).exp()));
    println!("  weight sum = {:.12} (exact 2)", rule.weights().iter().sum::<f64>());

    let small = gauss_legendre_rule(2).unwrap();
    println!("\n2-node rule: nodes {:?} (exact +-1/sqrt(3))", small.nodes());

    println!("\n--- end-corrected composite rule ---");
    let w = composite_time_weights(100).unwrap();
    println!("K = 100 boundary weights: {:.6}, {:.6}, {:.6}, then 0.01", w[0], w[1], w[2]);
    println!("weight sum = {:.15}", w.iter().sum::<f64>());

    println!("\naccuracy on [0,1] as K doubles:");
    println!("{:>6} {:>14} {:>14}", "K", "err t^3", "err e^t");
    for k in [50usize, 100, 200, 400] {
        let grid = TimeGrid::new(1.0, k).unwrap();
        let cube: Vec<f64> = grid.points().iter().map(|&t| t * t * t).collect();
        let expv: Vec<f64> = grid.points().iter().map(|&t| t.exp()).collect();
        println!(
            "{:>6} {:>14.3e} {:>14.3e}",
            k,
            (grid.integrate(&cube).unwrap() - 0.25).abs(),
            (grid.integrate(&expv).unwrap() - (1.0f64.exp() - 1.0)).abs()
        );
    }
}
