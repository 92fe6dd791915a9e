//! Product formula for characters and hypergroup convolution.
//!
//! cargo run --release --example convolution

use std::sync::Arc;

use num_complex::Complex64;
use venturi::models::{build_model, Grid, SampledFunction};
use venturi::transforms::{calibrated, convolve, forward, product_formula_residual, LambdaGrid};

fn main() -> venturi::Result<()> {
    for name in ["cosh", "sl2c", "mehler"] {
        let model = calibrated(&build_model(name)?)?;
        let r = product_formula_residual(&model, Complex64::from(1.0), 0.7, 1.3)?;
        let grid = Arc::new(Grid::for_model(&model, 12.0)?);
        let f = SampledFunction::from_fn(grid.clone(), |x| (-x * x).exp());
        let g = SampledFunction::from_fn(grid, |x| x * (-x * x / 2.0).exp());
        let fg = convolve(&model, &f, &g)?;
        let lg = LambdaGrid::default();
        let lhs = forward(&model, &fg, &lg.nodes)?;
        let rhs = forward(&model, &f, &lg.nodes)?.product(&forward(&model, &g, &lg.nodes)?);
        let err = lhs
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        println!("{name}: product formula residual {r:.2e}, convolution theorem error {err:.2e}");
    }
    Ok(())
}
