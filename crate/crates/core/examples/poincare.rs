//! Higher-order Poincaré inequality on random subcubes: the ratio of the
//! oscillation around the best polynomial to the scaled `k`-th derivative.

use cclab::spectral::{BumpSpec, Cube, Grid, PoincareField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Grid::new(2, 128)?;
    let f = BumpSpec::centered(2, 1.5, 0.5).with_band(5, 9).sample(&g, "f");
    for k in 1..=3 {
        let pf = PoincareField::new(&f, k)?;
        let mut worst: f64 = 0.0;
        for (i, side) in [8usize, 16, 32, 64].into_iter().enumerate() {
            // Cubes around the bump, slightly off its center.
            let start = g.n() / 2 - side / 2;
            let cube = Cube {
                origin: [start + 3 * i, start - 2 * i, 0],
                side,
            };
            let r = pf.check(&cube, 2.0)?;
            worst = worst.max(r.ratio);
            println!("k={k} side={side:>2}: ratio {:.4} (poly terms {})", r.ratio, r.polynomial.len());
        }
        println!("k={k}: worst ratio {worst:.4}");
    }
    Ok(())
}
