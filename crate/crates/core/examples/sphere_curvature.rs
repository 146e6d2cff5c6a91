//! Sectional curvature of round spheres from finite-difference Christoffels,
//! and the flat control.

use gnlift::diffgeo::{metric_at, riemann_at, ChartPoint};
use gnlift::manifolds::{Euclidean, RoundSphere2, StereographicSphere};

fn main() -> gnlift::Result<()> {
    let s2 = RoundSphere2::new();
    for coords in [[0.7, 0.2], [1.2, -2.0], [2.4, 1.1]] {
        let x = ChartPoint::new(&coords);
        let r = riemann_at(&s2, &x)?;
        let k = r.sectional(&metric_at(&s2, &x)?, 0, 1);
        println!("S^2 at {coords:?}: K = {k:.8}");
    }

    let s3 = StereographicSphere::new(3);
    let x = ChartPoint::new(&[0.3, -0.2, 0.5]);
    let (r, g) = (riemann_at(&s3, &x)?, metric_at(&s3, &x)?);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        println!("S^3 plane ({i},{j}): K = {:.8}", r.sectional(&g, i, j));
    }

    let flat = riemann_at(&Euclidean::new(3), &ChartPoint::new(&[1.0, 2.0, 3.0]))?;
    println!("R^3: max |R| = {:e}", flat.max_abs());
    Ok(())
}
