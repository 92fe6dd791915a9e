//! s-variation, Marcinkiewicz multiplier norms and the transferred calculus Λ_{A/ω}(g).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::phi_closed;
use crate::error::{domain, Error, Result};
use crate::models::{Grid, ModelKind, SampledFunction};
use crate::opcalc::{kernel_from_profile, sampled_norm, KernelMatrix, OperatorContext, TimeProfile};
use crate::report::{CheckEntry, CheckReport};
use crate::transforms::{convolve, SpectralFunction, TAIL_LIMIT};
use crate::waves::lp_constant;

/// Samples h(ξ_j) at strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationSample {
    points: Vec<f64>,
    values: Vec<f64>,
}

impl VariationSample {
    pub fn new(points: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(domain("variation sample: points and values differ in length"));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("variation sample: points must be strictly increasing"));
        }
        Ok(Self { points, values })
    }

    pub fn from_fn(points: Vec<f64>, h: impl Fn(f64) -> f64) -> Result<Self> {
        let values = points.iter().map(|&x| h(x)).collect();
        Self::new(points, values)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_exponent(s: f64) -> Result<()> {
    if !(s >= 1.0) {
        return Err(domain(format!("s-variation needs s >= 1, got {s}")));
    }
    Ok(())
}

/// Endpoints and (non-strict) local extrema: an optimal partition only uses these.
fn turning_points(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let keep = i == 0 || i + 1 == n || (v[i] - v[i - 1]) * (v[i + 1] - v[i]) <= 0.0;
        if keep {
            out.push(v[i]);
        }
    }
    out
}

/// max over subsequences of (Σ|Δh|^s)^{1/s}.
pub fn s_variation(sample: &VariationSample, s: f64) -> Result<f64> {
    check_exponent(s)?;
    if sample.values.len() < 2 {
        return Err(domain("s-variation needs at least two points"));
    }
    let v = turning_points(&sample.values);
    // best[j]: largest Σ|Δh|^s over chains ending at j
    let mut best = vec![0.0f64; v.len()];
    for j in 1..v.len() {
        best[j] = (0..j)
            .map(|i| best[i] + (v[j] - v[i]).abs().powf(s))
            .fold(0.0, f64::max);
    }
    Ok(best.iter().copied().fold(0.0, f64::max).powf(1.0 / s))
}

/// Exhaustive enumeration over all subsequences; for checking `s_variation` on short samples.
pub fn s_variation_brute(sample: &VariationSample, s: f64) -> Result<f64> {
    check_exponent(s)?;
    let n = sample.values.len();
    if n > 20 {
        return Err(domain("brute-force variation is limited to 20 points"));
    }
    let v = &sample.values;
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let mut prev: Option<f64> = None;
        let mut sum = 0.0;
        for (i, &x) in v.iter().enumerate() {
            if mask & (1 << i) != 0 {
                if let Some(p) = prev {
                    sum += (x - p).abs().powf(s);
                }
                prev = Some(x);
            }
        }
        best = best.max(sum);
    }
    Ok(best.powf(1.0 / s))
}

/// var_s over the dyadic intervals [2^j, 2^{j+1}] and [−2^{j+1}, −2^j].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicVariation {
    pub j: i32,
    pub positive: f64,
    pub negative: f64,
}

impl DyadicVariation {
    pub fn max(&self) -> f64 {
        self.positive.max(self.negative)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierNorm {
    pub sup_norm: f64,
    pub dyadic_variations: Vec<DyadicVariation>,
    pub ms_norm: f64,
    pub l2_norm: Option<f64>,
}

impl MultiplierNorm {
    /// (j, var on the positive interval, var on the negative interval) rows.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.dyadic_variations
            .iter()
            .map(|d| vec![d.j as f64, d.positive, d.negative])
            .collect()
    }
}

pub const DEFAULT_J_RANGE: (i32, i32) = (-10, 6);
pub const DEFAULT_SAMPLES: usize = 256;

fn geometric_mesh(lo: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| lo * 2f64.powf(k as f64 / n as f64)).collect()
}

/// ‖h‖_{M_s} on a fixed geometric mesh of `samples` cells per dyadic interval.
pub fn marcinkiewicz_norm(
    h: &(dyn Fn(f64) -> f64 + Sync),
    s: f64,
    j_range: (i32, i32),
    samples: usize,
) -> Result<MultiplierNorm> {
    check_exponent(s)?;
    let (j0, j1) = j_range;
    if j1 < j0 || samples < 1 {
        return Err(domain("dyadic range must be nonempty"));
    }
    let per_j: Vec<(DyadicVariation, f64)> = (j0..=j1)
        .into_par_iter()
        .map(|j| {
            let mesh = geometric_mesh(2f64.powi(j), samples);
            let pos = VariationSample::from_fn(mesh.clone(), h)?;
            // the negative interval, traversed left to right
            let neg_pts: Vec<f64> = mesh.iter().rev().map(|x| -x).collect();
            let neg = VariationSample::from_fn(neg_pts, h)?;
            let sup = pos.values.iter().chain(&neg.values).fold(0.0f64, |a, v| a.max(v.abs()));
            Ok((
                DyadicVariation {
                    j,
                    positive: s_variation(&pos, s)?,
                    negative: s_variation(&neg, s)?,
                },
                sup,
            ))
        })
        .collect::<Result<_>>()?;
    let sup_norm = per_j.iter().map(|p| p.1).fold(0.0, f64::max);
    let dyadic_variations: Vec<DyadicVariation> = per_j.into_iter().map(|p| p.0).collect();
    let worst = dyadic_variations.iter().map(|d| d.max()).fold(0.0, f64::max);
    Ok(MultiplierNorm {
        sup_norm,
        dyadic_variations,
        ms_norm: sup_norm + worst,
        l2_norm: None,
    })
}

/// As `marcinkiewicz_norm`, doubling the mesh until the norm changes by less than 10⁻³ relative.
pub fn marcinkiewicz_norm_refined(
    h: &(dyn Fn(f64) -> f64 + Sync),
    s: f64,
    j_range: (i32, i32),
) -> Result<MultiplierNorm> {
    let mut samples = DEFAULT_SAMPLES;
    let mut current = marcinkiewicz_norm(h, s, j_range, samples)?;
    while samples < 1 << 16 {
        samples *= 2;
        let next = marcinkiewicz_norm(h, s, j_range, samples)?;
        let change = (next.ms_norm - current.ms_norm).abs() / next.ms_norm.max(f64::MIN_POSITIVE);
        current = next;
        if change < 1e-3 {
            break;
        }
    }
    Ok(current)
}

/// ĝ on its λ-grid as an even, piecewise-linear evaluator, zero beyond the grid.
pub fn spectral_evaluator(ghat: &SpectralFunction) -> impl Fn(f64) -> f64 + Sync + '_ {
    move |l: f64| {
        let l = l.abs();
        let nodes = &ghat.lambda_nodes;
        let k = nodes.partition_point(|&x| x <= l);
        if k == 0 || k >= nodes.len() {
            return if k == nodes.len() && l == nodes[k - 1] {
                ghat.values[k - 1].re
            } else {
                0.0
            };
        }
        let (a, b) = (nodes[k - 1], nodes[k]);
        let u = (l - a) / (b - a);
        ghat.values[k - 1].re * (1.0 - u) + ghat.values[k].re * u
    }
}

/// g(x) = (2/π) ∫₀^∞ cos(λx)/cosh x ĝ(λ) dλ.
pub fn g_from_ghat(ghat: &SpectralFunction, grid: Arc<Grid>) -> SampledFunction {
    let values = grid
        .nodes()
        .par_iter()
        .map(|&x| {
            2.0 / PI
                * ghat
                    .lambda_nodes
                    .iter()
                    .zip(&ghat.values)
                    .zip(&ghat.quad_weights)
                    .map(|((&l, v), w)| (l * x).cos() * v.re * w)
                    .sum::<f64>()
                / x.cosh()
        })
        .collect();
    SampledFunction { grid, values }
}

/// Time profile u ↦ c·g(ωu)·cosh(ωu)^k of an operator ∫ Φ(u) cos(uA) du.
fn rescaled_profile(ctx: &OperatorContext, g: &SampledFunction, omega: f64, c: f64, cosh_power: i32) -> TimeProfile {
    let g = g.clone();
    TimeProfile::new(
        Arc::new(move |u: f64| c * g.at(omega * u) * (omega * u).cosh().powi(cosh_power)),
        ctx.model.omega0(),
        ctx.grid.x_max() / omega,
    )
}

/// Λ_{A/ω}(g) = (1/π) ∫₀^∞ cos(tA/ω) g(t) dt.
pub fn lambda_transfer(ctx: &OperatorContext, g: &SampledFunction, omega: f64) -> Result<KernelMatrix> {
    kernel_from_profile(ctx, &rescaled_profile(ctx, g, omega, omega / PI, 0))
}

/// T_{A/ω}(f) = ∫₀^∞ f(t) cos(tA/ω) cosh t dt.
pub fn t_transfer(ctx: &OperatorContext, f: &SampledFunction, omega: f64) -> Result<KernelMatrix> {
    kernel_from_profile(ctx, &rescaled_profile(ctx, f, omega, omega, 1))
}

/// (1/π) ∫₀^∞ g(t) cos(tλ/ω) dt on the grid of g.
pub fn transfer_scalar(g: &SampledFunction, lambda: f64, omega: f64) -> f64 {
    g.grid
        .nodes()
        .iter()
        .zip(g.grid.quad_weights())
        .zip(&g.values)
        .map(|((&t, w), v)| v * (t * lambda / omega).cos() * w)
        .sum::<f64>()
        / PI
}

fn block_distance(ctx: &OperatorContext, a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>, len: usize) -> f64 {
    let _ = ctx;
    (a - b).view((0, 0), (len, len)).norm() / b.view((0, 0), (len, len)).norm()
}

/// Growth of ‖cos(tA)‖_p on the context's space, as (constant, exponent).
fn cosine_growth(ctx: &OperatorContext) -> Option<(f64, f64)> {
    match ctx.model.kind {
        ModelKind::Cosh if ctx.p >= 2.0 => Some((lp_constant(ctx.p), (ctx.p - 2.0) / ctx.p)),
        _ if ctx.p == 2.0 => Some((1.0, 0.0)),
        _ => None,
    }
}

pub const TRANSFER_LAMBDAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const NORM_TRIALS: usize = 200;

/// Builds Λ_{A/ω}(g) for g recovered from ĝ and checks it against T_{A/ω}(g/cosh),
/// multiplicativity, the eigen-action and the operator-norm bound.
pub fn transfer_apply(ctx: &OperatorContext, ghat: &SpectralFunction, omega: f64, s: f64) -> Result<CheckReport> {
    if !(omega > ctx.model.omega0()) {
        return Err(domain(format!(
            "transfer needs omega > omega0 = {}, got {omega}",
            ctx.model.omega0()
        )));
    }
    let last = ghat.values.last().map_or(0.0, |v| v.norm());
    if !(last < TAIL_LIMIT) {
        return Err(Error::Truncation {
            what: "transferred multiplier: spectral values at lambda max".into(),
            measured: last,
            limit: TAIL_LIMIT,
        });
    }
    let g = g_from_ghat(ghat, ctx.grid.clone());
    let lam = lambda_transfer(ctx, &g, omega)?;
    let len = ctx.interior_len(lam.reach);
    if len == 0 {
        return Err(Error::Truncation {
            what: "time support of the transferred multiplier".into(),
            measured: lam.reach,
            limit: ctx.grid.x_max(),
        });
    }
    let over_cosh = SampledFunction::from_fn(ctx.grid.clone(), |x| g.at(x) / x.cosh());
    let t = t_transfer(ctx, &over_cosh, omega)?;
    let (lam_op, t_op) = (lam.operator(), t.operator());
    let reference = "transferred calculus factorization";
    let mut r = CheckReport::new();
    r.push(CheckEntry::residual(
        "Lambda_(A/w)(g) = T_(A/w)(g/cosh), relative interior distance",
        reference,
        block_distance(ctx, &lam_op, &t_op, len),
        1e-6,
    ));
    r.push(CheckEntry::residual(
        "Lambda_(A/w)(g) = (1/pi) T_(A/w)(g/cosh), relative interior distance",
        "transferred calculus factorization (corrected)",
        block_distance(ctx, &lam_op, &(&t_op / PI), len),
        1e-6,
    ));

    // multiplicativity through the cosh-hypergroup convolution
    let cosh_model = crate::models::HypergroupModel::new(ModelKind::Cosh);
    let cosh_grid = Arc::new(Grid::new(
        &cosh_model.profile,
        ctx.grid.x_max(),
        ctx.grid.len() / ctx.grid.order(),
        ctx.grid.order(),
    )?);
    let a = SampledFunction::from_fn(cosh_grid, |x| over_cosh.at(x));
    let mut aa = convolve(&cosh_model, &a, &a)?;
    let floor = 1e-15 * aa.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    aa.values.iter_mut().filter(|v| v.abs() < floor).for_each(|v| *v = 0.0);
    let aa = SampledFunction::new(ctx.grid.clone(), aa.values)?;
    let t_aa = t_transfer(ctx, &aa, omega)?.operator();
    let square = &lam_op * &lam_op;
    let len2 = ctx.interior_len(2.0 * lam.reach).max(1);
    r.push(CheckEntry::residual(
        "Lambda(g) Lambda(g) = T(g/cosh * g/cosh), relative interior distance",
        "multiplicativity of the transferred calculus",
        block_distance(ctx, &square, &t_aa, len2),
        1e-3,
    ));
    r.push(CheckEntry::residual(
        "Lambda(g) Lambda(g) = pi^-2 T(g/cosh * g/cosh), relative interior distance",
        "multiplicativity of the transferred calculus (corrected)",
        block_distance(ctx, &square, &(&t_aa / (PI * PI)), len2),
        1e-3,
    ));

    // eigen-action on characters
    let worst = TRANSFER_LAMBDAS
        .iter()
        .map(|&l| {
            let phi: Vec<f64> = ctx
                .grid
                .nodes()
                .iter()
                .map(|&x| phi_closed(&ctx.model, Complex64::from(l), x).re)
                .collect();
            let c = transfer_scalar(&g, l, omega);
            let lhs = lam.apply(&phi);
            let diff: Vec<f64> = lhs.iter().zip(&phi).map(|(a, b)| a - c * b).collect();
            ctx.interior_norm(&diff, len) / ctx.interior_norm(&phi, len)
        })
        .fold(0.0, f64::max);
    r.push(CheckEntry::residual(
        "Lambda(g) phi_l = multiplier(l) phi_l, max relative interior residual",
        "transferred calculus on characters",
        worst,
        1e-3,
    ));

    // one-sided operator-norm check
    let ms = marcinkiewicz_norm(&spectral_evaluator(ghat), s, DEFAULT_J_RANGE, DEFAULT_SAMPLES)?;
    let sampled = sampled_norm(&lam, ctx.p, NORM_TRIALS, 0x6d73);
    r.push(CheckEntry::record(
        "multiplier M_s norm",
        "multiplier norm bound",
        ms.ms_norm,
    ));
    r.push(CheckEntry::record(
        "sampled ||Lambda(g)|| / ||g^||_Ms",
        "multiplier norm bound",
        sampled / ms.ms_norm,
    ));
    if let Some((cp, exponent)) = cosine_growth(ctx) {
        let analytic: f64 = g
            .grid
            .nodes()
            .iter()
            .zip(g.grid.quad_weights())
            .zip(&g.values)
            .map(|((&t, w), v)| v.abs() * cp * (t / omega).cosh().powf(exponent) * w)
            .sum::<f64>()
            / PI;
        r.push(CheckEntry::at_most(
            "sampled ||Lambda(g)|| within the analytic bound",
            "multiplier norm bound",
            sampled,
            analytic * (1.0 + 1e-9),
        ));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_model;
    use crate::opcalc::discretize;
    use crate::transforms::{forward, LambdaGrid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample(values: &[f64]) -> VariationSample {
        VariationSample::new((0..values.len()).map(|i| i as f64).collect(), values.to_vec()).unwrap()
    }

    #[test]
    fn variation_examples() {
        let mono = sample(&[0.0, 0.5, 0.7, 2.0, 3.5]);
        for s in [1.0, 1.5, 3.0] {
            assert!((s_variation(&mono, s).unwrap() - 3.5).abs() < 1e-14);
        }
        let alt = sample(&[0.0, 1.0, 0.0, 1.0, 0.0]);
        assert!((s_variation(&alt, 2.0).unwrap() - 2.0).abs() < 1e-14);
        assert!(s_variation(&alt, 0.5).is_err());
        assert!(VariationSample::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn dp_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for trial in 0..100 {
            let n = rng.gen_range(2..=12);
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let smp = sample(&v);
            for s in [1.0, 1.5, 2.0, 3.0] {
                let (a, b) = (s_variation(&smp, s).unwrap(), s_variation_brute(&smp, s).unwrap());
                assert!((a - b).abs() < 1e-12, "trial {trial} s={s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn norm_examples() {
        let c = marcinkiewicz_norm(&|_| -2.5, 2.0, (-3, 3), 64).unwrap();
        assert_eq!(c.ms_norm, 2.5);
        let h = |l: f64| if l == 0.0 { 8.0 / PI } else { 8.0 * l / (PI * l).sinh() };
        let n = marcinkiewicz_norm(&h, 2.0, (-6, 4), DEFAULT_SAMPLES).unwrap();
        // h is even and decreasing on (0, inf): each dyadic variation is the endpoint drop
        let drop = (-6..=4)
            .map(|j| h(2f64.powi(j)) - h(2f64.powi(j + 1)))
            .fold(0.0, f64::max);
        let expected = h(2f64.powi(-6)) + drop;
        assert!(
            (n.ms_norm - expected).abs() < 1e-12 * expected,
            "{} vs {expected}",
            n.ms_norm
        );
        let sinc = |l: f64| if l == 0.0 { 1.0 } else { l.sin() / l };
        let n1 = marcinkiewicz_norm(&sinc, 1.0, (-4, 4), 128).unwrap().ms_norm;
        let n2 = marcinkiewicz_norm(&sinc, 2.0, (-4, 4), 128).unwrap().ms_norm;
        assert!(n1 >= n2);
    }

    #[test]
    fn recover_g() {
        let m = build_model("cosh").unwrap();
        let grid = Arc::new(Grid::for_model(&m, 10.0).unwrap());
        let f = SampledFunction::from_fn(grid.clone(), |x| (-x * x).exp());
        let lg = LambdaGrid::default();
        let fh = forward(&m, &f, &lg.nodes).unwrap();
        let g = g_from_ghat(&fh, grid.clone());
        assert!(crate::transforms::relative_l2(&f, &g) < 1e-4);
        let zero = SpectralFunction::from_fn(&m, &lg, |_| 0.0);
        assert!(g_from_ghat(&zero, grid.clone()).values.iter().all(|&v| v == 0.0));
        let gauss = SpectralFunction::from_fn(&m, &lg, |l| (-l * l).exp());
        let g = g_from_ghat(&gauss, grid.clone());
        for (&x, v) in grid.nodes().iter().zip(&g.values) {
            let exact = (-x * x / 4.0).exp() / PI.sqrt();
            assert!((v * x.cosh() - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn transfer_report() {
        let m = build_model("cosh").unwrap();
        let grid = Arc::new(Grid::for_model(&m, 20.0).unwrap());
        let ctx = discretize(&m, grid, 2.0).unwrap();
        let lg = LambdaGrid::default();
        let ghat = SpectralFunction::from_fn(&m, &lg, |l| {
            (-(l - 1.0) * (l - 1.0) * 2.0).exp() + (-(l + 1.0) * (l + 1.0) * 2.0).exp()
        });
        let r = transfer_apply(&ctx, &ghat, 2.0, 2.0).unwrap();
        let pass: Vec<bool> = r.checks.iter().map(|c| c.pass).collect();
        assert_eq!(pass, [false, true, false, true, true, true, true, true], "{r:#?}");
        assert!(transfer_apply(&ctx, &ghat, 0.9, 2.0).is_err());
    }
}
