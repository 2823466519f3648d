//! Maximal-function estimate of the Hardy-space norm of a Jacobian, its
//! ratio to the product of gradient norms, and the mean flag on an input
//! that cannot be in the Hardy space.

use num_complex::Complex64;

use cclab::spectral::hardy::h1_norm_estimate;
use cclab::spectral::{gradient, jacobian, BumpSpec, Grid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Grid::new(2, 256)?;
    for seed in 0..4 {
        let u: Vec<_> = (0..2)
            .map(|j| BumpSpec::centered(2, 1.2, 0.4).with_band(4, 10 * seed + j).sample(&g, "u"))
            .collect();
        let ju = jacobian(&u)?;
        let est = h1_norm_estimate(&ju, -5, 1);
        let grad_norms: f64 = u
            .iter()
            .map(|c| gradient(c).map(|gr| gr.iter().map(|d| d.l2_norm().powi(2)).sum::<f64>().sqrt()))
            .product::<Result<f64, _>>()?;
        println!(
            "seed {seed}: ‖Ju‖_H1 ≈ {:.4e}, ratio {:.4}, relative mean {:.1e}, flag {}",
            est.value,
            est.value / grad_norms,
            est.relative_mean,
            est.mean_flag
        );
    }
    let positive = BumpSpec::centered(2, 1.2, 0.4).sample(&g, "h").map(|c| Complex64::new(c.re * c.re, 0.0));
    let est = h1_norm_estimate(&positive, -5, 1);
    println!("nonnegative bump: relative mean {:.2}, flag {}", est.relative_mean, est.mean_flag);
    Ok(())
}
