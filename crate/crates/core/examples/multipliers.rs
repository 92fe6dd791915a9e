//! s-variation, Marcinkiewicz norms and the transferred calculus Λ_{A/ω}(g).
//!
//! cargo run --release --example multipliers

use std::f64::consts::PI;
use std::sync::Arc;

use venturi::models::{build_model, Grid};
use venturi::multipliers::{marcinkiewicz_norm_refined, s_variation, transfer_apply, VariationSample, DEFAULT_J_RANGE};
use venturi::opcalc::discretize;
use venturi::transforms::{LambdaGrid, SpectralFunction};

fn main() -> venturi::Result<()> {
    let sample = VariationSample::new(vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![0.0, 1.0, 0.2, 0.9, -0.5])?;
    for s in [1.0, 2.0, 4.0] {
        println!("var_{s} = {:.6}", s_variation(&sample, s)?);
    }
    let h = |l: f64| if l == 0.0 { 8.0 / PI } else { 8.0 * l / (PI * l).sinh() };
    let norm = marcinkiewicz_norm_refined(&h, 2.0, DEFAULT_J_RANGE)?;
    println!(
        "8 l cosech(pi l): sup {:.6}, M_2 norm {:.6}",
        norm.sup_norm, norm.ms_norm
    );
    for row in norm.rows().iter().filter(|r| r[1] > 1e-3) {
        println!("  j={:>3}  var+ {:.6}  var- {:.6}", row[0], row[1], row[2]);
    }

    let model = build_model("cosh")?;
    let ctx = discretize(&model, Arc::new(Grid::for_model(&model, 20.0)?), 2.0)?;
    let ghat = SpectralFunction::from_fn(&model, &LambdaGrid::default(), |l| (-2.0 * (l - 1.0).powi(2)).exp());
    for c in transfer_apply(&ctx, &ghat, 2.0, 2.0)?.checks {
        println!(
            "{:<5} {} = {:.3e}",
            if c.pass { "ok" } else { "FAIL" },
            c.name,
            c.measured.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
