//! Normal space of the lift of S^2 in R^4 under two metrics, with the
//! closed-form spanning set for a2 = b2 = 0 families.

use nalgebra::{dvector, DMatrix};

use gnlift::gnatural::{preset_family, GNaturalMetric};
use gnlift::normal_lift::{lift_frame, lift_point, lm_induced_metric, lm_normal_space, special_normal_basis};
use gnlift::scenarios::scenario_by_name;

fn main() -> gnlift::Result<()> {
    let scenario = scenario_by_name("sphere-r4")?;
    let p = lift_point(scenario.clone(), &dvector![1.1, 0.6], &dvector![0.7, -0.4])?;
    let frame = lift_frame(&p)?;
    for family in ["cheeger-gromoll", "coupled"] {
        let metric = GNaturalMetric::new(scenario.ambient(), preset_family(family)?, 16.0)?;
        println!("{family}: induced metric on LM\n{:.5}", lm_induced_metric(&metric, &frame, &p)?);
        let normals = lm_normal_space(&metric, &frame, &p)?;
        for (i, nu) in normals.basis.iter().enumerate() {
            let tangency: Vec<f64> = (0..p.codim()).flat_map(|x| [p.dot(&nu.h, &p.eta(x)), p.dot(&nu.v, &p.eta(x))]).collect();
            println!("  nu_{i}: normal components of (H, V) = {tangency:.3?}");
        }
        match special_normal_basis(&metric, &p) {
            Ok(basis) => {
                let cols = DMatrix::from_columns(&basis.iter().map(|b| b.0.clone()).collect::<Vec<_>>());
                println!("  special basis rank {}", cols.rank(1e-10));
            }
            Err(e) => println!("  special basis unavailable: {e}"),
        }
    }
    Ok(())
}
