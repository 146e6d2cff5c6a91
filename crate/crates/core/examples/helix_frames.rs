//! The lift frame of the helix normal bundle against direct differentiation
//! of the immersion, and the Frenet data it encodes.

use std::sync::Arc;

use nalgebra::dvector;

use gnlift::normal_lift::{coordinate_frame, lift_frame, lift_point};
use gnlift::scenarios::Helix;

fn main() -> gnlift::Result<()> {
    // the built-in "helix" scenario
    let helix = Arc::new(Helix::new(1.0, 0.5));
    println!("curvature {:.6}, torsion {:.6}", helix.curvature(), helix.torsion());
    let p = lift_point(helix, &dvector![0.8], &dvector![1.0, -0.5])?;
    println!("t = |u|^2 = {}", p.t);
    println!("M_0 = {:.6?}", p.m_vec(0).as_slice());
    println!("N_0 = {:.6?}", p.n_vec(0).as_slice());

    let assembled = lift_frame(&p)?;
    let direct = coordinate_frame(&p);
    for (k, (a, b)) in assembled.vectors.iter().zip(&direct.vectors).enumerate() {
        println!("frame {k}: |assembled - chart| = {:.3e}", (&a.0 - &b.0).amax());
    }
    Ok(())
}
