//! Mehler–Fock transform: sech-power pairs and a Plancherel round trip.
//!
//! cargo run --release --example mehler_fock

use std::sync::Arc;

use venturi::models::{build_model, Grid, SampledFunction};
use venturi::transforms::{calibrated, forward, inverse, pair_table, relative_l2, LambdaGrid};

fn main() -> venturi::Result<()> {
    for c in pair_table()?.checks {
        println!(
            "{:<5} {}  measured {:?}",
            if c.pass { "ok" } else { "FAIL" },
            c.name,
            c.measured
        );
    }
    for name in ["cosh", "mehler", "sl2c"] {
        let model = calibrated(&build_model(name)?)?;
        let grid = Arc::new(Grid::for_model(&model, 10.0)?);
        let f = SampledFunction::from_fn(grid.clone(), |x| (1.0 + x * x) * (-x * x).exp());
        let fhat = forward(&model, &f, &LambdaGrid::default().nodes)?;
        let back = inverse(&model, &fhat, grid)?;
        println!(
            "{name}: Plancherel scale {:.6}, round-trip relative L2 error {:.2e}",
            model.plancherel_scale,
            relative_l2(&f, &back)
        );
    }
    Ok(())
}
