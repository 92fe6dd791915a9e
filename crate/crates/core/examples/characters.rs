//! Characters of the three built-in hypergroups by four independent routes.
//!
//! cargo run --example characters

use num_complex::Complex64;
use venturi::characters::{phi_closed, phi_from_laplace, phi_ode, phi_volterra};
use venturi::models::{HypergroupModel, ModelKind, WeightProfile};

fn main() -> venturi::Result<()> {
    let lambda = Complex64::from(1.5);
    let xs = [0.5, 1.0, 2.0, 4.0];
    for kind in ModelKind::ALL {
        let model = HypergroupModel::new(kind);
        println!("{kind}: m(x) at 1 = {:.6}, omega0 = {}", model.m(1.0), model.omega0());
        let ode = phi_ode(&model.profile, lambda, &xs)?;
        for e in &ode {
            println!(
                "  x={:<4} ode {:+.12}  closed {:+.12}  laplace {:+.12}",
                e.x,
                e.value.re,
                phi_closed(&model, lambda, e.x).re,
                phi_from_laplace(&model, lambda, e.x).re
            );
        }
    }
    // a weight without a closed form: real hyperbolic 4-space
    let profile = WeightProfile::hyperbolic(3);
    let volterra = phi_volterra(&profile, lambda, &xs)?;
    let ode = phi_ode(&profile, lambda, &xs)?;
    println!("{}:", profile.name());
    for (v, o) in volterra.iter().zip(&ode) {
        println!("  x={:<4} volterra {:+.12}  ode {:+.12}", v.x, v.value.re, o.value.re);
    }
    Ok(())
}
