//! On the unit circle with b_j = 0 weights, a normal of the lift whose H and V
//! both have nonzero normal components.

use nalgebra::dvector;

use gnlift::bundle::split_tangent;
use gnlift::gnatural::{gnat_metric_eval, GNaturalMetric, LiftPair, WeightFamily};
use gnlift::normal_lift::{lift_frame, lift_point};
use gnlift::scenarios::scenario_by_name;

fn main() -> gnlift::Result<()> {
    let (a1, a2, a3) = (1.0, 1.0, 1.0);
    let family = WeightFamily::constants("example", [a1, a2, a3], [0.0; 3]);
    let scenario = scenario_by_name("circle")?;
    let metric = GNaturalMetric::new(scenario.ambient(), family, 16.0)?;
    let v = 1.0;
    let p = lift_point(scenario, &dvector![0.4], &dvector![v])?;
    let (gamma, delta) = (1.0, 1.0);
    let alpha = -(a2 + v * a1) / (a1 + a3 + v * a2) * gamma;
    let beta = -a1 / a2 * delta;
    println!("alpha = {alpha:.6}, beta = {beta:.6}");

    let (s, n) = (p.delta(0), p.eta(0));
    let h = &s * alpha + &n * beta;
    let vv = &s * gamma + &n * delta;
    let frame = lift_frame(&p)?;
    let bp = p.bundle_point();
    let nu = LiftPair::new(h.clone(), vv.clone());
    for (name, z) in ["d_t", "d_v"].iter().zip(&frame.vectors) {
        let (zh, zv) = split_tangent(z, &bp, &p.gamma);
        let g = gnat_metric_eval(&metric, &p.x, &p.u, &LiftPair::new(zh, zv), &nu)?;
        println!("G({name}, H^h + V^v) = {g:.3e}");
    }
    println!("g(H, n) = {:.6}, g(V, n) = {:.6}", p.dot(&h, &n), p.dot(&vv, &n));
    Ok(())
}
