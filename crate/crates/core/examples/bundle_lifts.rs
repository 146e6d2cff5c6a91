//! Horizontal and vertical lifts on TS^2 and the Cheeger–Gromoll metric on them.

use nalgebra::{dvector, DVector};

use gnlift::bundle::{bundle_metric_matrix, horizontal_lift, lift, split_tangent, vertical_lift, BundlePoint};
use gnlift::diffgeo::{christoffel_default, ChartPoint};
use gnlift::gnatural::{gnat_metric_eval, preset_family, GNaturalMetric, LiftPair};
use gnlift::manifolds::RoundSphere2;

fn main() -> gnlift::Result<()> {
    let base = std::sync::Arc::new(RoundSphere2::new());
    let metric = GNaturalMetric::new(base.clone(), preset_family("cheeger-gromoll")?, 16.0)?;
    let x = dvector![1.0, 0.4];
    let u = dvector![0.5, -0.8];
    let p = BundlePoint::new(x.clone(), u.clone());
    let gamma = christoffel_default(base.as_ref(), &ChartPoint::new(x.as_slice()))?;

    let (h, v) = (dvector![1.0, 0.0], dvector![0.0, 1.0]);
    let hh = horizontal_lift(&h, &p, &gamma)?;
    let vv = vertical_lift(&v, &p)?;
    println!("X^h = {:.6?}", hh.0.as_slice());
    println!("Y^v = {:.6?}", vv.0.as_slice());

    // the same pairing two ways: 4x4 matrix and the lift-pair formula
    let big_g = bundle_metric_matrix(&metric, &p)?;
    let z = lift(&h, &v, &p, &gamma)?;
    let via_matrix = z.0.dot(&(&big_g * &z.0));
    let pair = LiftPair::new(h.clone(), v.clone());
    let via_pairs = gnat_metric_eval(&metric, &x, &u, &pair, &pair)?;
    println!("G(Z,Z): matrix {via_matrix:.12}, lift pairs {via_pairs:.12}");

    let (h2, v2): (DVector<f64>, DVector<f64>) = split_tangent(&z, &p, &gamma);
    println!("split back: H = {:.6?}, V = {:.6?}", h2.as_slice(), v2.as_slice());
    Ok(())
}
