//! The two bundled problems: diffusion profiles, backward amplification
//! factors, and the mode-wise consistency of (theta, f, h) under the
//! final-data identity.
//!
//! ```bash
//! cargo run --release -p backheat --example forward_problem
//! ```

use backheat::heat::{final_data_coefficients, lambda_pq, ProblemInstance};
use backheat::quadrature::TimeGrid;
use std::f64::consts::PI;

fn main() {
    println!("=== Forward problems ===\n");
    let grid = TimeGrid::new(1.0, 100).unwrap();

    for id in [1usize, 2] {
        let inst = ProblemInstance::builtin_example(id).unwrap();
        let profile = inst.profile();
        let (a1, a2) = profile.bounds_on(1.0);
        let a_t = profile.cumulative(1.0).unwrap();
        println!("--- problem {id} ---");
        println!("a(0) = {:.4}, a(1) = {:.4}, bounds [{a1:.4}, {a2:.4}], A(1) = {a_t:.6}", profile.value(0.0), profile.value(1.0));
        println!(
            "decay factors lambda(T): (1,1) {:.5e}  (3,1) {:.5e}  (5,5) {:.5e}",
            lambda_pq(profile, 1, 1, 1.0).unwrap(),
            lambda_pq(profile, 3, 1, 1.0).unwrap(),
            lambda_pq(profile, 5, 5, 1.0).unwrap()
        );
        println!("theta(pi/2, pi/2) = {:.6}", inst.theta(PI / 2.0, PI / 2.0));

        // final-data identity vs the closed-form coefficients
        let via_identity = final_data_coefficients(&inst, 5, 2, &grid).unwrap();
        let mut worst = 0.0f64;
        for p in 1..=5 {
            for q in 1..=2 {
                worst = worst.max((via_identity.coeff(p, q) - inst.h_coeff(p, q)).abs());
            }
        }
        println!("final-data identity residual over modes <= (5,2): {worst:.2e}");
        println!(
            "h coefficients: (1,1) {:.6}  (3,1) {:.6}\n",
            inst.h_coeff(1, 1),
            inst.h_coeff(3, 1)
        );
    }

    // backward amplification is what makes the inversion unstable
    let inst = ProblemInstance::builtin_example(1).unwrap();
    println!("backward amplification exp(A(T)(p^2+q^2)) for problem 1:");
    for pq in [1usize, 5, 10, 20] {
        let log_amp = inst.profile().cumulative(1.0).unwrap() * (2 * pq * pq) as f64;
        println!("  mode ({pq},{pq}): e^{:.0} ~ 1e{:.0}", log_amp, log_amp / std::f64::consts::LN_10);
    }
}
