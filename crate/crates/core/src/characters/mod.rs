//! Hypergroup characters φ_λ(x): closed forms, ODE integration, Bessel-kernel Volterra series
//! and Laplace representations.

mod laplace;
mod volterra;

pub use laplace::{laplace_rep, phi_from_laplace, DensityKind, MeasureRep};
pub use volterra::{phi_volterra, volterra_solve, VolterraSolution};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::models::{HypergroupModel, ModelKind, WeightProfile};
use crate::ode::{self, Tolerance};
use crate::quadrature::{gauss_jacobi, gauss_legendre};
use crate::special::{gamma_real, sinc};

/// One evaluation of a character, with the intermediate pieces an engine produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacterEval {
    pub lambda: Complex64,
    pub x: f64,
    pub value: Complex64,
    /// √m · φ
    pub psi: Option<Complex64>,
    pub rho: Option<Complex64>,
    pub bessel_part: Option<Complex64>,
}

impl CharacterEval {
    fn plain(lambda: Complex64, x: f64, value: Complex64) -> Self {
        Self {
            lambda,
            x,
            value,
            psi: None,
            rho: None,
            bessel_part: None,
        }
    }
}

/// θ-quadrature for ∫₀^{π/2} g(t(θ)) / cosh(t/2) dθ with sinh(t/2) = sinh(x/2) sin θ.
///
/// Returns (t, weight / cosh(t/2)) pairs. Panels are uniform where sinh(x/2) sin θ ≤ 1 and
/// geometric beyond, where t grows like log θ.
pub(crate) fn mehler_theta_nodes(x: f64, freq: f64) -> Vec<(f64, f64)> {
    let s = (x / 2.0).sinh();
    let rule = gauss_legendre(16);
    let theta0 = if s > 1.0 { (1.0 / s).asin() } else { PI / 2.0 };
    let t0 = 2.0 * (s * theta0.sin()).asinh();
    let mut edges = Vec::new();
    let n0 = (freq * t0 / 3.0).ceil() as usize + 1;
    edges.extend((0..=n0).map(|k| theta0 * k as f64 / n0 as f64));
    if theta0 < PI / 2.0 {
        let log_ratio = (PI / (freq + 1.0)).min(std::f64::consts::LN_2);
        let mut th = theta0;
        while th < PI / 2.0 {
            th = (th * log_ratio.exp()).min(PI / 2.0);
            if PI / 2.0 - th < 1e-3 * (th - edges.last().copied().unwrap_or(0.0)) {
                th = PI / 2.0;
            }
            edges.push(th);
        }
    }
    let mut out = Vec::with_capacity(16 * edges.len());
    for w in edges.windows(2) {
        for (th, wt) in rule.on(w[0], w[1]) {
            let sh = s * th.sin();
            let t = 2.0 * sh.asinh();
            out.push((t, wt / (1.0 + sh * sh).sqrt()));
        }
    }
    out
}

/// P_{iλ-1/2}(cosh x) from its integral representation.
pub fn mehler_phi(lambda: Complex64, x: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::from(1.0);
    }
    let freq = lambda.re.abs() + lambda.im.abs();
    let sum: Complex64 = mehler_theta_nodes(x, freq)
        .into_iter()
        .map(|(t, w)| (lambda * t).cos() * w)
        .sum();
    sum * (2.0 / PI)
}

/// Closed-form character of a built-in model.
pub fn phi_closed(model: &HypergroupModel, lambda: Complex64, x: f64) -> Complex64 {
    let x = x.abs();
    if x == 0.0 {
        return Complex64::from(1.0);
    }
    match model.kind {
        ModelKind::Cosh => (lambda * x).cos() / x.cosh(),
        ModelKind::Sl2c => sinc(lambda * x) * (x / x.sinh()),
        ModelKind::Mehler => mehler_phi(lambda, x),
    }
}

/// Real-λ character table `table[i][j] = φ_{λ_i}(x_j)`.
pub fn character_table(model: &HypergroupModel, lambdas: &[f64], xs: &[f64]) -> Vec<Vec<f64>> {
    use rayon::prelude::*;
    match model.kind {
        ModelKind::Mehler => {
            let lmax = lambdas.iter().fold(0.0f64, |a, l| a.max(l.abs()));
            let columns: Vec<Vec<f64>> = xs
                .par_iter()
                .map(|&x| {
                    if x == 0.0 {
                        return vec![1.0; lambdas.len()];
                    }
                    let nodes = mehler_theta_nodes(x, lmax);
                    if let Some(step) = uniform_step(lambdas) {
                        return cosine_sums_uniform(&nodes, lambdas[0], step, lambdas.len());
                    }
                    lambdas
                        .iter()
                        .map(|&l| 2.0 / PI * nodes.iter().map(|&(t, w)| (l * t).cos() * w).sum::<f64>())
                        .collect()
                })
                .collect();
            (0..lambdas.len())
                .map(|i| columns.iter().map(|c| c[i]).collect())
                .collect()
        }
        _ => lambdas
            .par_iter()
            .map(|&l| {
                xs.iter()
                    .map(|&x| phi_closed(model, Complex64::from(l), x).re)
                    .collect()
            })
            .collect(),
    }
}

fn uniform_step(lambdas: &[f64]) -> Option<f64> {
    if lambdas.len() < 3 {
        return None;
    }
    let h = lambdas[1] - lambdas[0];
    let scale = lambdas.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    lambdas
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-12 * scale)
        .then_some(h)
}

/// (2/π) Σ w cos((l0 + k h) t) for k < n, via the three-term cosine recurrence.
fn cosine_sums_uniform(nodes: &[(f64, f64)], l0: f64, h: f64, n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n];
    for &(t, w) in nodes {
        let two_c = 2.0 * (h * t).cos();
        let (mut prev, mut cur) = ((l0 * t).cos(), ((l0 + h) * t).cos());
        acc[0] += w * prev;
        acc[1] += w * cur;
        for a in acc.iter_mut().skip(2) {
            let next = two_c * cur - prev;
            prev = cur;
            cur = next;
            *a += w * cur;
        }
    }
    acc.iter_mut().for_each(|a| *a *= 2.0 / PI);
    acc
}

pub const ODE_START: f64 = 1e-4;

fn taylor_seed(profile: &WeightProfile, lambda: Complex64, x: f64) -> [Complex64; 2] {
    let mu = lambda * lambda + profile.omega0().powi(2);
    let denom = 4.0 * (profile.gamma() + 1.0);
    [Complex64::from(1.0) - mu * x * x / denom, -mu * x * 2.0 / denom]
}

/// Integrate -φ'' - (m'/m)φ' = (λ² + ω₀²)φ from a Taylor seed near the origin.
pub fn phi_ode(profile: &WeightProfile, lambda: Complex64, x_targets: &[f64]) -> Result<Vec<CharacterEval>> {
    if x_targets.windows(2).any(|w| w[1] < w[0]) {
        return Err(domain("phi_ode targets must be nondecreasing"));
    }
    if let Some(&bad) = x_targets.iter().find(|&&x| !(0.0..=50.0).contains(&x)) {
        return Err(domain(format!("phi_ode target {bad} outside [0, 50]")));
    }
    let mu = lambda * lambda + profile.omega0().powi(2);
    let split = x_targets.partition_point(|&x| x <= ODE_START);
    let mut out: Vec<CharacterEval> = x_targets[..split]
        .iter()
        .map(|&x| CharacterEval::plain(lambda, x, taylor_seed(profile, lambda, x)[0]))
        .collect();
    let rhs = |x: f64, y: &[Complex64; 2]| [y[1], -y[1] * profile.log_derivative(x) - mu * y[0]];
    let states = ode::integrate(
        rhs,
        ODE_START,
        taylor_seed(profile, lambda, ODE_START),
        &x_targets[split..],
        Tolerance::default(),
    )?;
    out.extend(x_targets[split..].iter().zip(states).map(|(&x, y)| {
        let mut e = CharacterEval::plain(lambda, x, y[0]);
        e.psi = Some(y[0] * profile.m(x).sqrt());
        e
    }));
    Ok(out)
}

fn bessel_nodes(lambda: Complex64, x: f64) -> usize {
    let need = (lambda.norm() * x).ceil() as usize + 40;
    need.max(64).div_ceil(32) * 32
}

/// The Bessel-type kernel j_λ(x) from its integral representation
/// Γ(γ+1) x^{γ+1/2} / (Γ(1/2)Γ(γ+1/2)) ∫_{-1}^{1} (1-u²)^{γ-1/2} cos(λxu) du.
///
/// This equals x^{γ+1/2} at λ = 0, i.e. Γ(γ+1) times λ^{-γ} x^{1/2} 2^γ J_γ(λx).
pub fn bessel_j(gamma: f64, lambda: Complex64, x: f64) -> Result<Complex64> {
    if gamma < 0.5 {
        return Err(domain(format!("bessel_j needs gamma >= 1/2, got {gamma}")));
    }
    if !(x > 0.0) {
        return Err(domain(format!("bessel_j needs x > 0, got {x}")));
    }
    let rule = gauss_jacobi(bessel_nodes(lambda, x), gamma - 0.5, gamma - 0.5);
    let integral: Complex64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&u, &w)| (lambda * (x * u)).cos() * w)
        .sum();
    let pre = gamma_real(gamma + 1.0) * x.powf(gamma + 0.5) / (gamma_real(0.5) * gamma_real(gamma + 0.5));
    Ok(integral * pre)
}

/// |-φ'' - (m'/m)φ' - (λ²+ω₀²)φ| at x, derivatives by central differences of step h.
pub fn eigen_residual(
    profile: &WeightProfile,
    lambda: Complex64,
    x: f64,
    h: f64,
    phi: impl Fn(f64) -> Complex64,
) -> f64 {
    let (fm, f0, fp) = (phi(x - h), phi(x), phi(x + h));
    let d1 = (fp - fm) / (2.0 * h);
    let d2 = (fp - f0 * 2.0 + fm) / (h * h);
    let mu = lambda * lambda + profile.omega0().powi(2);
    (-d2 - d1 * profile.log_derivative(x) - mu * f0).norm()
}

pub(crate) fn check_lambda_finite(lambda: Complex64) -> Result<()> {
    if lambda.re.is_finite() && lambda.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite spectral parameter {lambda}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_model;

    fn c(re: f64) -> Complex64 {
        Complex64::from(re)
    }

    #[test]
    fn trivial_characters() {
        let sl2c = build_model("sl2c").unwrap();
        let mehler = build_model("mehler").unwrap();
        for x in [0.5, 1.0, 2.0, 7.0] {
            assert!((phi_closed(&sl2c, Complex64::i(), x) - 1.0).norm() < 1e-13);
            assert!((phi_closed(&mehler, Complex64::new(0.0, 0.5), x) - 1.0).norm() < 1e-8);
        }
        for m in ["cosh", "mehler", "sl2c"] {
            assert_eq!(phi_closed(&build_model(m).unwrap(), c(3.0), 0.0), c(1.0));
        }
    }

    #[test]
    fn mehler_matches_conical_legendre_values() {
        // P_{iλ-1/2}(cosh x), reference values from an arbitrary-precision evaluation
        let cases = [
            (1.0, 2.0, 0.197_281_880_122_509_63),
            (0.0, 1.0, 0.940_862_159_249_349_8),
            (2.5, 0.7, 0.360_870_406_027_663_9),
            (4.0, 8.0, 0.010_055_078_584_304_864),
            (12.0, 20.0, 1.335_993_345_262_065_7e-5),
        ];
        let m = build_model("mehler").unwrap();
        for (l, x, expect) in cases {
            let v = phi_closed(&m, c(l), x);
            assert!((v.re - expect).abs() < 1e-12, "λ={l} x={x}: {v}");
        }
    }

    #[test]
    fn mehler_far_out() {
        // λ = i/2 stays exactly 1 even where the θ-integrand is sharply peaked
        let m = build_model("mehler").unwrap();
        for x in [10.0, 20.0, 40.0] {
            assert!((phi_closed(&m, Complex64::new(0.0, 0.5), x) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn ode_matches_closed_forms() {
        let xs: Vec<f64> = (1..=80).map(|k| 0.1 * k as f64).collect();
        for name in ["cosh", "sl2c", "mehler"] {
            let m = build_model(name).unwrap();
            for l in [0.5, 1.0, 2.0, 4.0] {
                let ode = phi_ode(&m.profile, c(l), &xs).unwrap();
                for e in ode {
                    let err = (e.value - phi_closed(&m, c(l), e.x)).norm();
                    assert!(err < 1e-6, "{name} λ={l} x={} err={err}", e.x);
                }
            }
        }
    }

    #[test]
    fn ode_sl2c_reference_value() {
        let m = build_model("sl2c").unwrap();
        let v = phi_ode(&m.profile, c(2.0), &[1.0]).unwrap()[0].value;
        assert!((v.re - 2f64.sin() / (2.0 * 1f64.sinh())).abs() < 1e-6);
        let one = phi_ode(&m.profile, Complex64::i(), &[0.5, 3.0]).unwrap();
        assert!(one.iter().all(|e| (e.value - 1.0).norm() < 1e-8));
    }

    #[test]
    fn ode_rejects_unsorted_targets() {
        let m = build_model("sl2c").unwrap();
        assert!(phi_ode(&m.profile, c(1.0), &[2.0, 1.0]).is_err());
    }

    #[test]
    fn bessel_at_zero_frequency() {
        for g in [0.5, 1.0, 1.7] {
            let x = 1.3;
            let v = bessel_j(g, c(0.0), x).unwrap();
            assert!((v.re - x.powf(g + 0.5)).abs() < 1e-10 * x.powf(g + 0.5));
        }
    }

    #[test]
    fn bessel_half_order_is_a_sine() {
        for x in [0.3, 1.0, 4.0] {
            let v = bessel_j(0.5, c(2.0), x).unwrap();
            assert!((v.re - (2.0 * x).sin() / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn bessel_equation_residual() {
        let g = 1.0;
        let l = c(1.7);
        let h = 1e-3;
        for x in [0.5, 1.0, 2.0] {
            let j = |y: f64| bessel_j(g, l, y).unwrap();
            let d2 = (j(x + h) - j(x) * 2.0 + j(x - h)) / (h * h);
            let res = -d2 + j(x) * ((4.0 * g * g - 1.0) / (4.0 * x * x)) - l * l * j(x);
            assert!(res.norm() < 1e-6, "x={x} res={res}");
        }
    }

    #[test]
    fn eigen_residual_small_for_closed_forms() {
        for name in ["cosh", "sl2c", "mehler"] {
            let m = build_model(name).unwrap();
            for l in [0.5, 2.0] {
                for x in [0.5, 2.0, 5.0] {
                    let r = eigen_residual(&m.profile, c(l), x, 1e-3, |y| phi_closed(&m, c(l), y));
                    assert!(r < 1e-5 * (1.0 + l * l), "{name} λ={l} x={x} r={r}");
                }
            }
        }
    }

    #[test]
    fn table_matches_pointwise() {
        let m = build_model("mehler").unwrap();
        let t = character_table(&m, &[0.3, 5.0], &[0.0, 1.0, 6.0]);
        assert!((t[1][2] - phi_closed(&m, c(5.0), 6.0).re).abs() < 1e-12);
        assert_eq!(t[0][0], 1.0);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn model(k: usize) -> HypergroupModel {
        HypergroupModel::new(ModelKind::ALL[k])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn even_and_real(k in 0usize..3, l in 0.0f64..6.0, x in 0.05f64..10.0) {
            let m = model(k);
            let a = phi_closed(&m, Complex64::from(l), x);
            let b = phi_closed(&m, Complex64::from(-l), x);
            prop_assert!((a - b).norm() < 1e-12);
            prop_assert!(a.im.abs() < 1e-10);
        }

        #[test]
        fn eigenrelation(k in 0usize..3, l in 0.0f64..4.0, x in 0.3f64..6.0) {
            let m = model(k);
            let lam = Complex64::from(l);
            let r = eigen_residual(&m.profile, lam, x, 1e-3, |y| phi_closed(&m, lam, y));
            prop_assert!(r <= 1e-5 * (1.0 + l * l), "residual {r}");
        }

        #[test]
        fn laplace_mass_is_phi_zero(k in 0usize..3, x in 0.1f64..6.0) {
            let m = model(k);
            let mass = laplace_rep(&m, x).integrate(|_| Complex64::from(1.0), 0.0).re;
            let phi0 = phi_closed(&m, Complex64::default(), x).re;
            prop_assert!((mass - phi0).abs() < 1e-8);
        }
    }
}
