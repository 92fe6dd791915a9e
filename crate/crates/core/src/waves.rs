//! Explicit cosine families on the cosh and sl2c models, wave residuals, propagation,
//! L^p growth and spherical means on hyperbolic 3-space.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::fracint::kernel_rule;
use crate::models::{Grid, HypergroupModel, ModelKind, SampledFunction};
use crate::quadrature::gauss_legendre;
use crate::report::{CheckEntry, CheckReport};
use crate::special::gamma_real;

pub const SUPPORT_THRESHOLD: f64 = 1e-12;
pub const FRONT_THRESHOLD: f64 = 1e-10;
pub const TIME_STEP: f64 = 1e-3;
pub const DEFAULT_SEED: u64 = 0x5eed;

fn require_explicit(model: &HypergroupModel) -> Result<()> {
    match model.kind {
        ModelKind::Cosh | ModelKind::Sl2c => Ok(()),
        ModelKind::Mehler => Err(domain(
            "the Mehler model has no closed-form cosine family; use the spectral calculus",
        )),
    }
}

/// Outermost node where |h| exceeds the support threshold (0 if none).
pub fn support(h: &SampledFunction) -> f64 {
    h.grid
        .nodes()
        .iter()
        .zip(&h.values)
        .rev()
        .find(|(_, v)| v.abs() > SUPPORT_THRESHOLD)
        .map_or(0.0, |(&x, _)| x)
}

/// h·cosh (even) or h·sinh (odd) on the whole line.
fn extended(kind: ModelKind, h: &SampledFunction, r: f64) -> f64 {
    let a = r.abs();
    match kind {
        ModelKind::Sl2c => r.signum() * h.at(a) * a.sinh(),
        _ => h.at(a) * a.cosh(),
    }
}

/// (cos(tA) h)(s) from the two-translate formula; values of h beyond xMax count as 0.
pub fn cosine_eval(kind: ModelKind, h: &SampledFunction, t: f64, s: f64) -> f64 {
    let sum = |s: f64| extended(kind, h, s + t) + extended(kind, h, s - t);
    match kind {
        ModelKind::Sl2c if s < 1e-7 => {
            // (ĥ(t+s) − ĥ(t−s)) / 2s as s → 0
            let e = 1e-5;
            (extended(kind, h, t + e) - extended(kind, h, t - e)) / (2.0 * e)
        }
        ModelKind::Sl2c => sum(s) / (2.0 * s.sinh()),
        _ => sum(s) / (2.0 * s.cosh()),
    }
}

/// cos(tA) h on the grid of h, after checking that the support stays inside it.
pub fn cosine_apply(model: &HypergroupModel, t: f64, h: &SampledFunction) -> Result<SampledFunction> {
    require_explicit(model)?;
    let reach = support(h) + t.abs();
    if reach > h.grid.x_max() {
        return Err(Error::Truncation {
            what: "cosine family: support(h) + t".into(),
            measured: reach,
            limit: h.grid.x_max(),
        });
    }
    cosine_apply_unchecked(model, t, h)
}

/// cos(tA) h without the support check, for comparisons on interior nodes.
pub fn cosine_apply_unchecked(model: &HypergroupModel, t: f64, h: &SampledFunction) -> Result<SampledFunction> {
    require_explicit(model)?;
    let values = h
        .grid
        .nodes()
        .iter()
        .map(|&s| cosine_eval(model.kind, h, t, s))
        .collect();
    SampledFunction::new(h.grid.clone(), values)
}

/// A snapshot u(·, t) = cos(tA) h.
#[derive(Debug, Clone)]
pub struct WaveState {
    pub grid: Arc<Grid>,
    pub u: Vec<f64>,
    pub t: f64,
    pub model: HypergroupModel,
}

impl WaveState {
    pub fn evolve(model: &HypergroupModel, h: &SampledFunction, t: f64) -> Result<Self> {
        let u = cosine_apply(model, t, h)?;
        Ok(Self {
            grid: u.grid,
            u: u.values,
            t,
            model: model.clone(),
        })
    }

    /// (x, u) rows for CSV export.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.grid
            .nodes()
            .iter()
            .zip(&self.u)
            .map(|(&x, &u)| vec![x, u])
            .collect()
    }
}

fn second_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

fn first_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - f(x + 2.0 * h) + 8.0 * (f(x + h) - f(x - h))) / (12.0 * h)
}

/// max |u_tt + (L − ω₀²) u| over interior nodes, u = cos(tA) h.
pub fn wave_residual(model: &HypergroupModel, h: &SampledFunction, t: f64) -> f64 {
    if require_explicit(model).is_err() {
        return f64::NAN;
    }
    let kind = model.kind;
    let d = TIME_STEP;
    let w2 = model.omega0().powi(2);
    let upper = h.grid.x_max() - t.abs() - 4.0 * d;
    h.grid
        .nodes()
        .par_iter()
        .filter(|&&s| s > 4.0 * d && s < upper)
        .map(|&s| {
            let u_tt = second_difference(|tau| cosine_eval(kind, h, tau, s), t, d);
            let at = |x: f64| cosine_eval(kind, h, t, x);
            let drift = match kind {
                ModelKind::Sl2c => 2.0 / s.tanh(),
                _ => 2.0 * s.tanh(),
            };
            let l_u = -second_difference(at, s, d) - drift * first_difference(at, s, d);
            (u_tt + l_u - w2 * at(s)).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// max |u(·, δ) − u(·, −δ)| / 2δ at t = 0.
pub fn initial_velocity(model: &HypergroupModel, h: &SampledFunction) -> f64 {
    h.grid
        .nodes()
        .iter()
        .map(|&s| {
            (cosine_eval(model.kind, h, TIME_STEP, s) - cosine_eval(model.kind, h, -TIME_STEP, s)).abs()
                / (2.0 * TIME_STEP)
        })
        .fold(0.0, f64::max)
}

/// Outermost node where |cos(tA) h| exceeds the front threshold.
pub fn support_radius(model: &HypergroupModel, t: f64, h: &SampledFunction) -> f64 {
    h.grid
        .nodes()
        .iter()
        .rev()
        .find(|&&s| cosine_eval(model.kind, h, t, s).abs() > FRONT_THRESHOLD)
        .copied()
        .unwrap_or(0.0)
}

/// Analytic constant in ‖cos(tA)‖_p ≤ c_p (cosh t)^{(p−2)/p} on the cosh model.
pub fn lp_constant(p: f64) -> f64 {
    2f64.powf((p - 2.0) / p)
}

/// exp(−1/(1−u²)) on |u| < 1.
pub fn smooth_bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

/// A random sum of three compactly supported bumps inside [0, 4.5].
pub fn random_profile(rng: &mut impl Rng, grid: Arc<Grid>) -> SampledFunction {
    let bumps: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.0..3.0),
                rng.gen_range(0.3..1.5),
            )
        })
        .collect();
    SampledFunction::from_fn(grid, move |x| {
        bumps.iter().map(|&(a, c, w)| a * smooth_bump((x - c) / w)).sum()
    })
}

fn random_profiles(grid: &Arc<Grid>, trials: usize, seed: u64) -> Vec<SampledFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| random_profile(&mut rng, grid.clone())).collect()
}

fn require_cosh(model: &HypergroupModel) -> Result<()> {
    if model.kind != ModelKind::Cosh {
        return Err(domain(format!(
            "growth checks run on the cosh model, got {}",
            model.kind
        )));
    }
    Ok(())
}

/// Grid wide enough for the random profiles at all requested times.
fn growth_grid(model: &HypergroupModel, t_list: &[f64]) -> Result<Arc<Grid>> {
    let t_max = t_list.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    let x_max = (4.5 + t_max + 1.0).max(crate::models::DEFAULT_X_MAX);
    let panels = (x_max / 0.625).ceil() as usize;
    Ok(Arc::new(Grid::new(&model.profile, x_max, panels, 16)?))
}

/// (t, worst ratio, bound) rows.
pub struct GrowthCurve {
    pub rows: Vec<[f64; 3]>,
    pub empirical_constant: f64,
}

pub fn norm_growth_curve(
    model: &HypergroupModel,
    p: f64,
    t_list: &[f64],
    trials: usize,
    seed: u64,
) -> Result<GrowthCurve> {
    require_cosh(model)?;
    let grid = growth_grid(model, t_list)?;
    let hs = random_profiles(&grid, trials, seed);
    let norms: Vec<f64> = hs.iter().map(|h| h.lp_norm(p)).collect::<Result<_>>()?;
    let cp = lp_constant(p);
    let mut rows = Vec::new();
    let mut emp = 0.0f64;
    for &t in t_list {
        let worst = hs
            .par_iter()
            .zip(&norms)
            .map(|(h, n)| Ok(cosine_apply(model, t, h)?.lp_norm(p)? / n))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let growth = t.cosh().powf((p - 2.0) / p);
        emp = emp.max(worst / growth);
        rows.push([t, worst, cp * growth]);
    }
    Ok(GrowthCurve {
        rows,
        empirical_constant: emp,
    })
}

pub fn norm_growth(model: &HypergroupModel, p: f64, t_list: &[f64], trials: usize) -> Result<CheckReport> {
    norm_growth_seeded(model, p, t_list, trials, DEFAULT_SEED)
}

pub fn norm_growth_seeded(
    model: &HypergroupModel,
    p: f64,
    t_list: &[f64],
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let curve = norm_growth_curve(model, p, t_list, trials, seed)?;
    let mut r = CheckReport::new();
    for row in &curve.rows {
        r.push(CheckEntry::at_most(
            format!("||cos(tA)h||_{p} / ||h||_{p} at t={}", row[0]),
            "L^p growth of the cosine family",
            row[1],
            row[2] * (1.0 + 1e-9),
        ));
    }
    r.push(CheckEntry::at_most(
        format!("empirical c_{p}"),
        "L^p growth of the cosine family",
        curve.empirical_constant,
        lp_constant(p) * (1.0 + 1e-9),
    ));
    Ok(r)
}

/// A_t f(x): average of f over the sphere of radius t about a point at radius x in H³.
pub fn spherical_mean(t: f64, f: &SampledFunction) -> Result<SampledFunction> {
    let reach = support(f) + t.abs();
    if reach > f.grid.x_max() {
        return Err(Error::Truncation {
            what: "spherical mean: support(f) + t".into(),
            measured: reach,
            limit: f.grid.x_max(),
        });
    }
    spherical_mean_unchecked(t, f)
}

pub const SPHERE_NODES: usize = 64;

/// ½ ∫_{−1}^{1} f(arccosh(cosh x cosh t − sinh x sinh t u)) du, with u = cos θ.
pub fn spherical_mean_at(t: f64, f: &SampledFunction, x: f64) -> f64 {
    let rule = gauss_legendre(SPHERE_NODES);
    let (a, b) = (x.cosh() * t.cosh(), x.sinh() * t.sinh());
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&u, &w)| {
            // cosh r − 1, written without cancellation
            let s = 2.0 * ((x - t) / 2.0).sinh().powi(2) + b * (1.0 - u);
            let r = if s < 0.5 {
                (s + (s * (s + 2.0)).sqrt()).ln_1p()
            } else {
                (a - b * u).acosh()
            };
            0.5 * w * f.at(r)
        })
        .sum()
}

pub fn spherical_mean_unchecked(t: f64, f: &SampledFunction) -> Result<SampledFunction> {
    let values = f.grid.nodes().par_iter().map(|&x| spherical_mean_at(t, f, x)).collect();
    SampledFunction::new(f.grid.clone(), values)
}

/// ∫₀ᵗ k(τ) cos(τA) f dτ for a quadrature rule in τ, on the sl2c model.
fn time_integral(rule: &[(f64, f64)], weight: impl Fn(f64) -> f64 + Sync, f: &SampledFunction) -> Vec<f64> {
    f.grid
        .nodes()
        .par_iter()
        .map(|&s| {
            rule.iter()
                .map(|&(tau, w)| w * weight(tau) * cosine_eval(ModelKind::Sl2c, f, tau, s))
                .sum()
        })
        .collect()
}

fn max_relative(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale.max(f64::MIN_POSITIVE)
}

/// W₁(cos(·A)) f at time t against the spherical mean on H³.
pub fn frac_wave_check(t: f64, f: &SampledFunction) -> Result<CheckReport> {
    let mut r = CheckReport::new();
    let mean = spherical_mean(t, f)?;
    if t == 0.0 {
        r.push(CheckEntry::residual(
            "W_1(cos(.A)) f vanishes at t = 0",
            "fractional wave identity on H^3",
            0.0,
            1e-12,
        ));
        return Ok(r);
    }
    let rule = kernel_rule(1.0, t)?;
    let w1 = time_integral(&rule, f64::sinh, f);
    let u1 = time_integral(&rule, |_| 1.0, f);
    let sh = t.sinh();
    let literal: Vec<f64> = mean.values.iter().map(|v| sh * sh * v).collect();
    let corrected: Vec<f64> = mean.values.iter().map(|v| sh * v).collect();
    r.push(CheckEntry::residual(
        format!("W_1(cos(.A)) f = sinh^2 t A_t f (t={t}), max relative error"),
        "fractional wave identity on H^3",
        max_relative(&w1, &literal),
        1e-3,
    ));
    r.push(CheckEntry::residual(
        format!("U_1(cos(.A)) f = sinh t A_t f (t={t}), max relative error"),
        "fractional wave identity on H^3 (corrected)",
        max_relative(&u1, &corrected),
        1e-3,
    ));
    Ok(r)
}

/// The scalar form of the fractional wave identity on a character.
pub fn frac_wave_scalar(lambda: f64, t: f64) -> Result<(f64, f64)> {
    let rule = kernel_rule(1.0, t)?;
    let lhs: f64 = rule.iter().map(|&(tau, w)| w * tau.sinh() * (lambda * tau).cos()).sum();
    let rhs = t.sinh() * (lambda * t).sin() / lambda;
    Ok((lhs, rhs))
}

/// ‖W_n(cos(·A))h‖_p / (‖h‖_p sinh^n t) against M₀ Γ(ω₀+1)/Γ(ω₀+n+1) cosh(ω₀ t)(1 + ε).
pub fn wn_growth(model: &HypergroupModel, n: u32, t_list: &[f64]) -> Result<CheckReport> {
    wn_growth_with(model, n, 2.0, t_list, 8, DEFAULT_SEED)
}

pub const WN_SLACK: f64 = 0.1;

pub fn wn_growth_with(
    model: &HypergroupModel,
    n: u32,
    p: f64,
    t_list: &[f64],
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    require_cosh(model)?;
    if !(1..=3).contains(&n) {
        return Err(domain(format!("W_n growth needs n in 1..=3, got {n}")));
    }
    // growth exponent of the cosine family on L^p, with M₀ measured on the same vectors
    let omega = (p - 2.0) / p;
    let curve = norm_growth_curve(model, p, t_list, trials, seed)?;
    let m0 = curve.empirical_constant.max(f64::MIN_POSITIVE);
    let grid = growth_grid(model, t_list)?;
    let hs = random_profiles(&grid, trials, seed);
    let mut r = CheckReport::new();
    r.push(CheckEntry::record(
        format!("measured M0 for W_{n}, p={p}"),
        "growth of W_n(cos(tA))",
        m0,
    ));
    let coeff = gamma_real(omega + 1.0) / gamma_real(omega + n as f64 + 1.0);
    for &t in t_list {
        let rule = kernel_rule(n as f64, t)?;
        let worst = hs
            .par_iter()
            .map(|h| {
                let mut acc = vec![0.0; grid.len()];
                for &(tau, w) in &rule {
                    let u = cosine_apply(model, tau, h)?;
                    for (a, v) in acc.iter_mut().zip(&u.values) {
                        *a += w * tau.sinh() * v;
                    }
                }
                let out = SampledFunction::new(grid.clone(), acc)?;
                Ok(out.lp_norm(p)? / h.lp_norm(p)?)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let ratio = worst / t.sinh().powi(n as i32);
        let bound = m0 * coeff * (omega * t).cosh() * (1.0 + WN_SLACK);
        r.push(CheckEntry::at_most(
            format!("||W_{n}(cos(.A))h||_{p} / (||h||_{p} sinh^{n} t) at t={t}"),
            "growth of W_n(cos(tA))",
            ratio,
            bound,
        ));
    }
    Ok(r)
}


#[cfg(test)]
mod properties {
    use super::*;
    use crate::models::build_model;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn spherical_mean_keeps_sign_and_mass(c in 0.0f64..3.0, w in 0.5f64..2.0, t in 0.1f64..3.0) {
            let m = build_model("sl2c").unwrap();
            let g = Arc::new(Grid::for_model(&m, 20.0).unwrap());
            let f = SampledFunction::from_fn(g.clone(), |x| smooth_bump((x - c) / w));
            let mean = spherical_mean(t, &f).unwrap();
            let low = mean.values.iter().fold(0.0f64, |a, &v| a.min(v));
            // the mean averages the panel interpolant, so it can dip by the interpolation error
            let ripple = (0..=4000)
                .map(|k| {
                    let x = 6.0 * k as f64 / 4000.0;
                    (g.interpolate(&f.values, x) - smooth_bump((x - c) / w)).abs()
                })
                .fold(0.0, f64::max);
            prop_assert!(low >= -1.1 * ripple - 1e-15, "min {low}, ripple {ripple}");
            let before = g.integrate_measure(&f.values);
            let after = g.integrate_measure(&mean.values);
            let reach = c + w + t;
            let slack = ripple * ((2.0 * reach).sinh() - 2.0 * reach);
            prop_assert!((before - after).abs() <= 1e-6 * before + slack, "{before} {after}");
        }

        #[test]
        fn finite_propagation(a in 0.5f64..3.0, t in 0.0f64..5.0, k in 0usize..2) {
            let m = build_model(["cosh", "sl2c"][k]).unwrap();
            let g = Arc::new(Grid::for_model(&m, 20.0).unwrap());
            let h = SampledFunction::from_fn(g.clone(), |x| smooth_bump(x / a));
            prop_assert!(support_radius(&m, t, &h) - support(&h) <= t + 2.0 * g.panel_width());
        }
    }
}
