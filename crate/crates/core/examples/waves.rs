//! The cosine family cos(tA): a travelling bump, L^p growth and spherical means on H^3.
//!
//! cargo run --release --example waves

use std::sync::Arc;

use venturi::models::{build_model, Grid, SampledFunction};
use venturi::waves::{frac_wave_check, norm_growth_curve, smooth_bump, support_radius, WaveState, DEFAULT_SEED};

fn main() -> venturi::Result<()> {
    let model = build_model("cosh")?;
    let grid = Arc::new(Grid::for_model(&model, 20.0)?);
    let bump = SampledFunction::from_fn(grid.clone(), |x| smooth_bump((x - 4.0) / 0.5));
    for t in [0.0, 1.0, 2.0] {
        let state = WaveState::evolve(&model, &bump, t)?;
        let (x, peak) = state
            .rows()
            .into_iter()
            .map(|r| (r[0], r[1]))
            .fold((0.0, 0.0f64), |a, b| if b.1.abs() > a.1.abs() { b } else { a });
        println!(
            "t={t}: largest |u| = {:.4} at x = {x:.3}, support radius {:.3}",
            peak.abs(),
            support_radius(&model, t, &bump)
        );
    }
    for p in [2.0, 4.0] {
        let curve = norm_growth_curve(&model, p, &[1.0, 2.0, 4.0], 8, DEFAULT_SEED)?;
        for [t, ratio, bound] in curve.rows {
            println!("p={p} t={t}: sampled ratio {ratio:.4} <= bound {bound:.4}");
        }
    }
    let h3 = build_model("sl2c")?;
    let grid = Arc::new(Grid::for_model(&h3, 20.0)?);
    let f = SampledFunction::from_fn(grid, |x| (-2.0 * x * x).exp());
    for c in frac_wave_check(1.0, &f)?.checks {
        println!(
            "{:<5} {} ({:.2e})",
            if c.pass { "ok" } else { "FAIL" },
            c.name,
            c.measured.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
