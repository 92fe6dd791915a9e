//! Sup-norm probe of a holomorphic function on a Venturi region as the strip widens.
//!
//! cargo run --example venturi_probe

use std::f64::consts::PI;

use num_complex::Complex64;
use venturi::transforms::{venturi_norm_probe, VenturiRegion};

fn main() -> venturi::Result<()> {
    // the Mehler transform of sech^3(x/2), with poles at ±i
    let f = |z: Complex64| z * 8.0 / (z * PI).sinh();
    for omega in [0.5, 0.9, 0.99, 0.999] {
        let r = venturi_norm_probe(&f, &VenturiRegion::new(PI / 4.0, omega)?, 0);
        let get = |n: &str| r.get(n).and_then(|c| c.measured).unwrap_or(f64::NAN);
        println!(
            "omega={omega:<6} sup |f| {:>10.3}  nearest pole {:.4}  bounded: {}",
            get("probe sup |f|"),
            get("probe nearest pole distance"),
            r.get("probe bounded (no blow-up)").is_some_and(|c| c.pass)
        );
    }
    Ok(())
}
