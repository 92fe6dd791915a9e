use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::mehler_theta_nodes;
use crate::models::{HypergroupModel, ModelKind};
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityKind {
    None,
    /// constant density on (-x, x)
    Uniform(f64),
    /// 1 / (π√2 √(cosh x - cosh t))
    Mehler,
}

/// The measure τ_x on [-x, x] with φ_λ(x) = ∫ cos(λt) τ_x(dt).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRep {
    pub x: f64,
    pub atoms: Vec<(f64, f64)>,
    pub density: DensityKind,
    pub total_mass: f64,
}

impl MeasureRep {
    pub fn density_at(&self, t: f64) -> f64 {
        if t.abs() >= self.x {
            return 0.0;
        }
        match self.density {
            DensityKind::None => 0.0,
            DensityKind::Uniform(d) => d,
            DensityKind::Mehler => 1.0 / (PI * SQRT_2 * (self.x.cosh() - t.cosh()).sqrt()),
        }
    }

    /// Nodes and weights for ∫ g dτ_x, resolving oscillations up to frequency `freq`.
    pub fn quadrature_nodes(&self, freq: f64) -> Vec<(f64, f64)> {
        let mut out = self.atoms.clone();
        match self.density {
            DensityKind::None => {}
            DensityKind::Uniform(d) => {
                let panels = (freq * 2.0 * self.x / 3.0).ceil() as usize + 1;
                let rule = gauss_legendre(16);
                let h = 2.0 * self.x / panels as f64;
                for p in 0..panels {
                    let lo = -self.x + p as f64 * h;
                    out.extend(rule.on(lo, lo + h).map(|(t, w)| (t, w * d)));
                }
            }
            DensityKind::Mehler => {
                for (t, w) in mehler_theta_nodes(self.x, freq) {
                    out.push((t, w / PI));
                    out.push((-t, w / PI));
                }
            }
        }
        out
    }

    pub fn integrate(&self, g: impl Fn(f64) -> Complex64, freq: f64) -> Complex64 {
        self.quadrature_nodes(freq).into_iter().map(|(t, w)| g(t) * w).sum()
    }
}

pub fn laplace_rep(model: &HypergroupModel, x: f64) -> MeasureRep {
    let (atoms, density) = match model.kind {
        ModelKind::Cosh => {
            let mass = 0.5 / x.cosh();
            (vec![(-x, mass), (x, mass)], DensityKind::None)
        }
        ModelKind::Sl2c => (Vec::new(), DensityKind::Uniform(0.5 / x.sinh())),
        ModelKind::Mehler => (Vec::new(), DensityKind::Mehler),
    };
    let mut rep = MeasureRep {
        x,
        atoms,
        density,
        total_mass: 0.0,
    };
    rep.total_mass = rep.integrate(|_| Complex64::from(1.0), 0.0).re;
    rep
}

/// φ_λ(x) as the cosine transform of τ_x.
pub fn phi_from_laplace(model: &HypergroupModel, lambda: Complex64, x: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::from(1.0);
    }
    let freq = lambda.re.abs() + lambda.im.abs();
    laplace_rep(model, x).integrate(|t| (lambda * t).cos(), freq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::phi_closed;
    use crate::models::build_model;

    #[test]
    fn total_mass_is_phi_zero() {
        for name in ["cosh", "sl2c", "mehler"] {
            let m = build_model(name).unwrap();
            for x in [0.5, 1.0, 2.0, 4.0] {
                let rep = laplace_rep(&m, x);
                let phi0 = phi_closed(&m, Complex64::from(0.0), x).re;
                assert!((rep.total_mass - phi0).abs() < 1e-8, "{name} x={x}");
            }
        }
        let cosh = build_model("cosh").unwrap();
        assert!((laplace_rep(&cosh, 1.0).total_mass - 0.648_054_273_663_885_4).abs() < 1e-12);
        let sl2c = build_model("sl2c").unwrap();
        assert!((laplace_rep(&sl2c, 2.0).total_mass - 2.0 / 2f64.sinh()).abs() < 1e-12);
    }

    #[test]
    fn laplace_agrees_with_closed_form() {
        for name in ["cosh", "sl2c", "mehler"] {
            let m = build_model(name).unwrap();
            for l in [0.3, 1.5, 4.0] {
                for x in [0.4, 1.0, 3.0] {
                    let a = phi_from_laplace(&m, Complex64::from(l), x);
                    let b = phi_closed(&m, Complex64::from(l), x);
                    assert!((a - b).norm() < 1e-8, "{name} λ={l} x={x}");
                }
            }
        }
    }

    #[test]
    fn complex_parameter_bound() {
        // |φ_{t+is}(x)| ≤ ∫ cosh(su) τ_x(du)
        let lam = Complex64::new(2.0, 0.4);
        for name in ["cosh", "sl2c", "mehler"] {
            let m = build_model(name).unwrap();
            let rep = laplace_rep(&m, 3.0);
            let bound = rep.integrate(|u| Complex64::from((0.4 * u).cosh()), 2.4).re;
            let v = phi_from_laplace(&m, lam, 3.0).norm();
            assert!(v <= bound, "{name}");
        }
    }

    #[test]
    fn masses_nonnegative() {
        let m = build_model("mehler").unwrap();
        let rep = laplace_rep(&m, 2.0);
        assert!(rep.quadrature_nodes(3.0).iter().all(|&(_, w)| w > 0.0));
        assert!(rep.density_at(1.999) > 0.0);
        assert_eq!(rep.density_at(2.5), 0.0);
    }
}
