//! T_A(f) = ∫ f φ_A m as a kernel matrix: eigen-action, multiplicativity and norms.
//!
//! cargo run --release --example operator_calculus

use std::sync::Arc;

use venturi::models::{build_model, Grid, SampledFunction};
use venturi::opcalc::{diagonalization_residual, discretize, homomorphism_residual, sampled_norm, schur_bound, t_a};

fn main() -> venturi::Result<()> {
    for name in ["cosh", "sl2c"] {
        let model = build_model(name)?;
        let grid = Arc::new(Grid::for_model(&model, 20.0)?);
        let ctx = discretize(&model, grid.clone(), 2.0)?;
        let f = SampledFunction::from_fn(grid.clone(), |x| (-x * x).exp());
        let g = SampledFunction::from_fn(grid, |x| x * x * (-x * x).exp());
        let k = t_a(&ctx, &f)?;
        println!("{name}:");
        println!("  time reach of T_A(f)          {:.2}", k.reach);
        println!(
            "  eigen-action residual         {:.2e}",
            diagonalization_residual(&ctx, &f, &[0.5, 1.0, 2.0])?
        );
        println!(
            "  homomorphism residual         {:.2e}",
            homomorphism_residual(&ctx, &f, &g)?
        );
        println!("  Schur bound                   {:.6}", schur_bound(&k));
        println!("  largest sampled L2 norm ratio {:.6}", sampled_norm(&k, 2.0, 100, 1));
    }
    Ok(())
}
