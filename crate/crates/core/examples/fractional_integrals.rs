//! Fractional integrals with the kernel (cosh x − cosh t)^(α−1).
//!
//! cargo run --release --example fractional_integrals

use std::f64::consts::PI;

use num_complex::Complex64;
use venturi::characters::mehler_phi;
use venturi::fracint::{growth_check, mehler_dirichlet_check, order, u_beta, w_alpha, FracOrder};

fn main() -> venturi::Result<()> {
    let f = |t: f64| (-t).exp();
    let x = 1.5;
    let twice = w_alpha(|t| w_alpha(f, order(0.5), t).unwrap(), order(0.5), x)?;
    let once = w_alpha(f, order(1.0), x)?;
    println!("W_1/2 W_1/2 f = {:.15}, W_1 f = {:.15}", twice.re, once.re);

    let complex = FracOrder::new(Complex64::new(0.5, 0.75))?;
    println!("W_(0.5+0.75i) f({x}) = {:.12}", w_alpha(f, complex, x)?);

    let lambda = 2.0;
    let link = (2.0 / PI).sqrt() * u_beta(|t: f64| (lambda * t).cos(), order(0.5), x)?.re;
    println!(
        "sqrt(2/pi) U_1/2 cos = {link:.12}, Legendre function = {:.12}",
        mehler_phi(Complex64::from(lambda), x).re
    );

    for nu in 1..=2 {
        for c in mehler_dirichlet_check(nu, 1.0, 1.0).checks {
            println!("{:<5} {}", if c.pass { "ok" } else { "FAIL" }, c.name);
        }
    }
    for c in growth_check()?.checks {
        println!(
            "{:<5} {} = {:.6}",
            if c.pass { "ok" } else { "FAIL" },
            c.name,
            c.measured.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
