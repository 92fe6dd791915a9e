//! Grid realization of the operator functional calculus on the explicit models.
//!
//! Every operator here has the form ∫₀^∞ Φ(t) cos(tA) dt for an even time profile Φ, and
//! is stored through its kernel against the measure m:
//! cosh: K(s, r) = [Φ(|r−s|) + Φ(r+s)] / (2 cosh s cosh r)
//! sl2c: K(s, r) = [Φ(|r−s|) − Φ(r+s)] / (8 sinh s sinh r)

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr_free::standard_normal;
use rayon::prelude::*;

use crate::characters::{laplace_rep, phi_closed};
use crate::error::{domain, Error, Result};
use crate::models::{lp_norm_values, Eval, Grid, HypergroupModel, ModelKind, SampledFunction};
use crate::quadrature::gauss_legendre;
use crate::transforms::{convolve, forward, physical_tail, TAIL_LIMIT};
use crate::waves::cosine_eval;

/// Threshold on |Φ(T)| cosh(ω₀ T) that fixes the time truncation T.
pub const TIME_TAIL: f64 = 1e-12;
/// Fraction of the grid kept for operator-identity comparisons.
pub const INTERIOR_FRACTION: f64 = 0.9;

mod rand_distr_free {
    use rand::Rng;

    /// Box–Muller normal deviate.
    pub fn standard_normal(rng: &mut impl Rng) -> f64 {
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        let v: f64 = rng.gen();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }
}

/// An explicit model on a grid, acting on L^p(m).
#[derive(Debug, Clone)]
pub struct OperatorContext {
    pub model: HypergroupModel,
    pub grid: Arc<Grid>,
    pub p: f64,
}

pub fn discretize(model: &HypergroupModel, grid: Arc<Grid>, p: f64) -> Result<OperatorContext> {
    if model.kind == ModelKind::Mehler {
        return Err(domain("operator discretization needs the cosh or sl2c model"));
    }
    if !(p >= 1.0) {
        return Err(domain(format!("L^p needs p >= 1, got {p}")));
    }
    Ok(OperatorContext {
        model: model.clone(),
        grid,
        p,
    })
}

impl OperatorContext {
    fn sampled(&self, h: &[f64]) -> Result<SampledFunction> {
        SampledFunction::new(self.grid.clone(), h.to_vec())
    }

    /// Dense matrix of cos(tA), assembled from the interpolation stencils.
    pub fn cosine(&self, t: f64) -> DMatrix<f64> {
        let n = self.grid.len();
        let mut c = DMatrix::zeros(n, n);
        let sl2c = self.model.kind == ModelKind::Sl2c;
        for (i, &s) in self.grid.nodes().iter().enumerate() {
            let denom = if sl2c { 2.0 * s.sinh() } else { 2.0 * s.cosh() };
            for r in [s + t, s - t] {
                let a = r.abs();
                let factor = if sl2c { r.signum() * a.sinh() } else { a.cosh() };
                if let Some((start, basis)) = self.grid.interp_stencil(a) {
                    for (k, b) in basis.iter().enumerate() {
                        c[(i, start + k)] += factor * b / denom;
                    }
                }
            }
        }
        c
    }

    pub fn apply_cosine(&self, t: f64, h: &[f64]) -> Result<Vec<f64>> {
        let h = self.sampled(h)?;
        Ok(self
            .grid
            .nodes()
            .iter()
            .map(|&s| cosine_eval(self.model.kind, &h, t, s))
            .collect())
    }

    /// φ_A(x) = ∫ cos(tA) τ_x(dt).
    pub fn phi_a(&self, x: f64) -> DMatrix<f64> {
        match self.model.kind {
            ModelKind::Sl2c if x > 0.0 => {
                let panels = (x / 0.25).ceil() as usize;
                let rule = gauss_legendre(16);
                let h = x / panels as f64;
                let mut acc = DMatrix::zeros(self.grid.len(), self.grid.len());
                for p in 0..panels {
                    for (t, w) in rule.on(p as f64 * h, (p + 1) as f64 * h) {
                        acc += self.cosine(t) * w;
                    }
                }
                acc / x.sinh()
            }
            ModelKind::Sl2c => self.cosine(0.0),
            _ => self.cosine(x) / x.cosh(),
        }
    }

    /// Number of leading nodes kept when the operator reaches `reach` in time.
    pub fn interior_len(&self, reach: f64) -> usize {
        let limit = (INTERIOR_FRACTION * self.grid.x_max()).min(self.grid.x_max() - reach);
        self.grid.nodes().iter().take_while(|&&s| s <= limit).count()
    }

    /// L^p(m) norm of the first `len` entries.
    pub fn interior_norm(&self, v: &[f64], len: usize) -> f64 {
        let mut masked = v.to_vec();
        masked[len..].iter_mut().for_each(|x| *x = 0.0);
        lp_norm_values(&self.grid, &masked, self.p).unwrap_or(f64::NAN)
    }
}

/// F(p_i, q_j) with the measure weights of both variables.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub entries: DMatrix<f64>,
    pub row_measure: Vec<f64>,
    pub col_measure: Vec<f64>,
    /// Time support of the profile the kernel came from (0 if unknown).
    pub reach: f64,
}

impl KernelMatrix {
    pub fn new(entries: DMatrix<f64>, row_measure: Vec<f64>, col_measure: Vec<f64>) -> Result<Self> {
        if entries.nrows() != row_measure.len() || entries.ncols() != col_measure.len() {
            return Err(domain("kernel matrix and measure sizes differ"));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(domain("kernel matrix has non-finite entries"));
        }
        Ok(Self {
            entries,
            row_measure,
            col_measure,
            reach: 0.0,
        })
    }

    /// (Kh)_i = Σ_j F_ij h_j μ_j
    pub fn apply(&self, h: &[f64]) -> Vec<f64> {
        let weighted: Vec<f64> = h.iter().zip(&self.col_measure).map(|(a, b)| a * b).collect();
        (&self.entries * nalgebra::DVector::from_vec(weighted))
            .iter()
            .copied()
            .collect()
    }

    /// The operator matrix F diag(μ).
    pub fn operator(&self) -> DMatrix<f64> {
        let mut m = self.entries.clone();
        for (j, mut col) in m.column_iter_mut().enumerate() {
            col *= self.col_measure[j];
        }
        m
    }
}

/// max(sup_i Σ_j |F_ij| μ_j, sup_j Σ_i |F_ij| ν_i): bounds the norm on every L^p.
pub fn schur_bound(k: &KernelMatrix) -> f64 {
    let rows = k
        .entries
        .row_iter()
        .map(|r| r.iter().zip(&k.col_measure).map(|(f, w)| f.abs() * w).sum::<f64>())
        .fold(0.0, f64::max);
    let cols = k
        .entries
        .column_iter()
        .map(|c| c.iter().zip(&k.row_measure).map(|(f, w)| f.abs() * w).sum::<f64>())
        .fold(0.0, f64::max);
    rows.max(cols)
}

fn discrete_norm(v: &[f64], w: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return v.iter().fold(0.0, |a, x| a.max(x.abs()));
    }
    v.iter()
        .zip(w)
        .map(|(x, w)| x.abs().powf(p) * w)
        .sum::<f64>()
        .powf(1.0 / p)
}

/// Largest ‖Kh‖_p/‖h‖_p over random Gaussian vectors.
pub fn sampled_norm(k: &KernelMatrix, p: f64, trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let h: Vec<f64> = (0..k.col_measure.len()).map(|_| standard_normal(&mut rng)).collect();
            discrete_norm(&k.apply(&h), &k.row_measure, p) / discrete_norm(&h, &k.col_measure, p)
        })
        .fold(0.0, f64::max)
}

/// An even time profile Φ with its truncation point.
#[derive(Clone)]
pub struct TimeProfile {
    pub phi: Eval,
    pub reach: f64,
}

impl TimeProfile {
    /// Finds the truncation point by scanning down from `horizon`.
    pub fn new(phi: Eval, omega0: f64, horizon: f64) -> Self {
        let step = 0.01;
        let mut t = horizon;
        while t > 0.0 && (phi(t).abs() * (omega0 * t).cosh()) < TIME_TAIL {
            t -= step;
        }
        Self {
            phi,
            reach: (t + step).min(horizon),
        }
    }
}

/// Kernel of ∫₀^∞ Φ(t) cos(tA) dt.
pub fn kernel_from_profile(ctx: &OperatorContext, profile: &TimeProfile) -> Result<KernelMatrix> {
    let nodes = ctx.grid.nodes();
    let n = nodes.len();
    let sl2c = ctx.model.kind == ModelKind::Sl2c;
    let phi = &profile.phi;
    let rows: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&s| {
            nodes
                .iter()
                .map(|&r| {
                    if sl2c {
                        (phi((r - s).abs()) - phi(r + s)) / (8.0 * s.sinh() * r.sinh())
                    } else {
                        (phi((r - s).abs()) + phi(r + s)) / (2.0 * s.cosh() * r.cosh())
                    }
                })
                .collect()
        })
        .collect();
    let entries = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let w = ctx.grid.measure_weights().to_vec();
    let mut k = KernelMatrix::new(entries, w.clone(), w)?;
    k.reach = profile.reach;
    Ok(k)
}

/// Time profile of T_A(f) = ∫ f(x) φ_A(x) m(x) dx.
pub fn t_a_profile(ctx: &OperatorContext, f: &SampledFunction) -> Result<TimeProfile> {
    if f.grid.len() != ctx.grid.len() || f.grid.x_max() != ctx.grid.x_max() {
        return Err(domain("function and operator context live on different grids"));
    }
    let tail = physical_tail(&ctx.model, f);
    if !(tail < TAIL_LIMIT) {
        return Err(Error::Truncation {
            what: "T_A(f): integrand at xMax".into(),
            measured: tail,
            limit: TAIL_LIMIT,
        });
    }
    let f = f.clone();
    let phi: Eval = match ctx.model.kind {
        ModelKind::Sl2c => {
            let tail = upper_sinh_integral(&f);
            Arc::new(move |t: f64| 4.0 * tail.at(t))
        }
        _ => Arc::new(move |t: f64| f.at(t) * t.cosh()),
    };
    let profile = TimeProfile::new(phi, ctx.model.omega0(), ctx.grid.x_max());
    require_interior(ctx, profile.reach)?;
    Ok(profile)
}

/// t ↦ ∫_t^{xMax} f(x) sinh x dx, summed from the top so that small tails keep their digits.
fn upper_sinh_integral(f: &SampledFunction) -> SampledFunction {
    let grid = f.grid.clone();
    let h = grid.panel_width();
    let order = grid.order();
    let rule = gauss_legendre(order);
    let integrand = |x: f64| f.at(x) * x.sinh();
    let panels = grid.len() / order;
    let mut above = vec![0.0; panels + 1];
    for p in (0..panels).rev() {
        let lo = p as f64 * h;
        above[p] = above[p + 1] + rule.on(lo, lo + h).map(|(x, w)| integrand(x) * w).sum::<f64>();
    }
    let values = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let p = i / order;
            let hi = (p + 1) as f64 * h;
            above[p + 1] + rule.on(t, hi).map(|(x, w)| integrand(x) * w).sum::<f64>()
        })
        .collect();
    SampledFunction { grid, values }
}

fn require_interior(ctx: &OperatorContext, reach: f64) -> Result<()> {
    if ctx.interior_len(reach) == 0 {
        return Err(Error::Truncation {
            what: "time support of the operator".into(),
            measured: reach,
            limit: ctx.grid.x_max(),
        });
    }
    Ok(())
}

/// T_A(f) as a kernel matrix.
pub fn t_a(ctx: &OperatorContext, f: &SampledFunction) -> Result<KernelMatrix> {
    kernel_from_profile(ctx, &t_a_profile(ctx, f)?)
}

/// Σ_k w_k Φ(t_k) cos(t_k A) h by quadrature in time, for smooth h.
pub fn time_quadrature_action(ctx: &OperatorContext, profile: &TimeProfile, h: &[f64]) -> Result<Vec<f64>> {
    let h = ctx.sampled(h)?;
    let rule = gauss_legendre(16);
    let panels = (profile.reach / 0.25).ceil().max(1.0) as usize;
    let width = profile.reach / panels as f64;
    let times: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| rule.on(p as f64 * width, (p + 1) as f64 * width).collect::<Vec<_>>())
        .collect();
    Ok(ctx
        .grid
        .nodes()
        .par_iter()
        .map(|&s| {
            times
                .iter()
                .map(|&(t, w)| w * (profile.phi)(t) * cosine_eval(ctx.model.kind, &h, t, s))
                .sum()
        })
        .collect())
}

fn interior_relative(ctx: &OperatorContext, a: &[f64], b: &[f64], len: usize) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    ctx.interior_norm(&diff, len) / ctx.interior_norm(b, len)
}

/// max over λ of ‖T_A(f)φ_λ − f̂(λ)φ_λ‖ / ‖φ_λ‖ on the interior block.
pub fn diagonalization_residual(ctx: &OperatorContext, f: &SampledFunction, lambdas: &[f64]) -> Result<f64> {
    let k = t_a(ctx, f)?;
    let fhat = forward(&ctx.model, f, lambdas)?;
    let len = ctx.interior_len(k.reach);
    let mut worst = 0.0f64;
    for (&l, fh) in lambdas.iter().zip(&fhat.values) {
        let phi: Vec<f64> = ctx
            .grid
            .nodes()
            .iter()
            .map(|&x| phi_closed(&ctx.model, Complex64::from(l), x).re)
            .collect();
        let lhs = k.apply(&phi);
        let rhs: Vec<f64> = phi.iter().map(|v| v * fh.re).collect();
        let diff: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        worst = worst.max(ctx.interior_norm(&diff, len) / ctx.interior_norm(&phi, len));
    }
    Ok(worst)
}

fn block_frobenius(m: &DMatrix<f64>, len: usize) -> f64 {
    m.view((0, 0), (len, len)).norm()
}

/// ‖T_A(f∗g) − T_A(f)T_A(g)‖ / ‖T_A(f)T_A(g)‖ on the interior block.
pub fn homomorphism_residual(ctx: &OperatorContext, f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    let tf = t_a(ctx, f)?;
    let tg = t_a(ctx, g)?;
    let mut fg = convolve(&ctx.model, f, g)?;
    // values below relative round-off carry no information; the cosh weights would amplify them
    let floor = 1e-15 * fg.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    fg.values.iter_mut().filter(|v| v.abs() < floor).for_each(|v| *v = 0.0);
    let tfg = t_a(ctx, &fg)?;
    let product = tf.operator() * tg.operator();
    let len = ctx.interior_len(tf.reach + tg.reach).min(ctx.interior_len(tfg.reach));
    if len == 0 {
        return Err(Error::Truncation {
            what: "combined time support of T_A(f) T_A(g)".into(),
            measured: tf.reach + tg.reach,
            limit: ctx.grid.x_max(),
        });
    }
    let diff = tfg.operator() - &product;
    Ok(block_frobenius(&diff, len) / block_frobenius(&product, len))
}

/// An even function together with its Fourier transform ∫ f(x) e^{−ixξ} dx.
#[derive(Clone)]
pub struct FourierPair {
    pub name: String,
    pub f: Eval,
    pub ff: Eval,
}

impl FourierPair {
    pub fn gaussian() -> Self {
        Self {
            name: "exp(-z^2)".into(),
            f: Arc::new(|z: f64| (-z * z).exp()),
            ff: Arc::new(|xi: f64| PI.sqrt() * (-xi * xi / 4.0).exp()),
        }
    }
}

/// Physicists' Hermite polynomial H_n.
pub fn hermite(n: u32, z: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * z);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// f = H_{2ν}(z) e^{−z²}, ℱf(ξ) = √π (−1)^ν ξ^{2ν} e^{−ξ²/4}.
pub fn hermite_example(nu: u32) -> FourierPair {
    let sign = if nu.is_multiple_of(2) { 1.0 } else { -1.0 };
    FourierPair {
        name: format!("H_{}(z) exp(-z^2)", 2 * nu),
        f: Arc::new(move |z: f64| hermite(2 * nu, z) * (-z * z).exp()),
        ff: Arc::new(move |xi: f64| sign * PI.sqrt() * xi.powi(2 * nu as i32) * (-xi * xi / 4.0).exp()),
    }
}

/// ∫ f(x) cos(xξ) dx by quadrature, to validate a claimed transform.
pub fn fourier_cosine_quadrature(f: &dyn Fn(f64) -> f64, xi: f64, half_width: f64) -> f64 {
    2.0 * crate::quadrature::integrate(|x| f(x) * (x * xi).cos(), 0.0, half_width, 64, 16)
}

fn fc_profile(ctx: &OperatorContext, pair: &FourierPair) -> Result<TimeProfile> {
    let ff = pair.ff.clone();
    let profile = TimeProfile::new(Arc::new(move |t| ff(t) / PI), ctx.model.omega0(), 200.0);
    require_interior(ctx, profile.reach)?;
    Ok(profile)
}

/// f(A) = (1/2π) ∫ ℱf(t) cos(tA) dt as a kernel matrix.
pub fn lambda_fc(ctx: &OperatorContext, pair: &FourierPair) -> Result<KernelMatrix> {
    kernel_from_profile(ctx, &fc_profile(ctx, pair)?)
}

/// (1/2π) ∫ ℱf(ξ) cos(ξλ) dξ, by quadrature up to the time truncation.
pub fn multiplier_scalar(ctx: &OperatorContext, pair: &FourierPair, lambda: f64) -> Result<f64> {
    let profile = fc_profile(ctx, pair)?;
    let panels = (profile.reach / 0.25).ceil().max(1.0) as usize;
    Ok(crate::quadrature::integrate(
        |t| (profile.phi)(t) * (lambda * t).cos(),
        0.0,
        profile.reach,
        panels,
        16,
    ))
}

/// ‖(1/2π)∫ℱf(ξ)cos(ξA)dξ φ_λ − scalar·φ_λ‖ / ‖φ_λ‖ on the interior block.
pub fn multiplier_residual(ctx: &OperatorContext, pair: &FourierPair, lambda: f64) -> Result<f64> {
    let profile = fc_profile(ctx, pair)?;
    let phi: Vec<f64> = ctx
        .grid
        .nodes()
        .iter()
        .map(|&x| phi_closed(&ctx.model, Complex64::from(lambda), x).re)
        .collect();
    let lhs = time_quadrature_action(ctx, &profile, &phi)?;
    let c = multiplier_scalar(ctx, pair, lambda)?;
    let rhs: Vec<f64> = phi.iter().map(|v| c * v).collect();
    let len = ctx.interior_len(profile.reach);
    let diff: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    Ok(ctx.interior_norm(&diff, len) / ctx.interior_norm(&phi, len))
}

/// Relative interior distance between two kernel operators acting on smooth probes.
pub fn kernel_distance(ctx: &OperatorContext, a: &KernelMatrix, b: &KernelMatrix, probes: &[Vec<f64>]) -> f64 {
    let len = ctx.interior_len(a.reach.max(b.reach));
    probes
        .iter()
        .map(|h| interior_relative(ctx, &a.apply(h), &b.apply(h), len))
        .fold(0.0, f64::max)
}

/// sup_x ∫ cosh(ω₀ u) τ_x(du), sampled on (0, 20].
pub fn measured_m0(model: &HypergroupModel) -> f64 {
    let w = model.omega0();
    (1..=80)
        .map(|k| {
            let x = k as f64 * 0.25;
            laplace_rep(model, x)
                .integrate(|u| Complex64::from((w * u).cosh()), 0.0)
                .re
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_model;

    fn ctx(name: &str) -> OperatorContext {
        let m = build_model(name).unwrap();
        let g = Arc::new(Grid::for_model(&m, 20.0).unwrap());
        discretize(&m, g, 2.0).unwrap()
    }

    fn gaussian(c: &OperatorContext) -> SampledFunction {
        SampledFunction::from_fn(c.grid.clone(), |x| (-x * x).exp())
    }

    fn probes(c: &OperatorContext) -> Vec<Vec<f64>> {
        [0.3, 1.0, 3.0]
            .iter()
            .map(|&w| c.grid.nodes().iter().map(|x| (-x * x * w).exp()).collect())
            .collect()
    }

    #[test]
    fn cosine_and_phi_at_zero() {
        for name in ["cosh", "sl2c"] {
            let c = ctx(name);
            let id = DMatrix::<f64>::identity(c.grid.len(), c.grid.len());
            assert!((c.cosine(0.0) - &id).amax() < 1e-12);
            assert!((c.phi_a(0.0) - &id).amax() < 1e-12);
        }
        let c = ctx("cosh");
        assert!((c.phi_a(1.3) - c.cosine(1.3) / 1.3f64.cosh()).amax() < 1e-10);
        assert!(discretize(&build_model("mehler").unwrap(), c.grid.clone(), 2.0).is_err());
    }

    #[test]
    fn cosine_matrix_matches_pointwise() {
        let c = ctx("sl2c");
        let h = &probes(&c)[1];
        let dense = &c.cosine(0.7) * nalgebra::DVector::from_vec(h.clone());
        let direct = c.apply_cosine(0.7, h).unwrap();
        let e = dense
            .iter()
            .zip(&direct)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(e < 1e-12);
    }

    #[test]
    fn phi_a_is_bounded() {
        for name in ["cosh", "sl2c"] {
            let c = ctx(name);
            let m0 = measured_m0(&c.model);
            assert!((m0 - 1.0).abs() < 1e-10, "{name}: {m0}");
            let w = c.grid.measure_weights().to_vec();
            for x in [0.5, 2.0] {
                let op = c.phi_a(x);
                let k = KernelMatrix::new(
                    DMatrix::from_fn(c.grid.len(), c.grid.len(), |i, j| op[(i, j)] / w[j]),
                    w.clone(),
                    w.clone(),
                )
                .unwrap();
                let s = sampled_norm(&k, 2.0, 20, 1);
                assert!(s <= m0 * (1.0 + 1e-6), "{name} x={x}: {s}");
            }
        }
    }

    #[test]
    fn kernel_matches_time_quadrature() {
        for name in ["cosh", "sl2c"] {
            let c = ctx(name);
            let f = gaussian(&c);
            let profile = t_a_profile(&c, &f).unwrap();
            let k = kernel_from_profile(&c, &profile).unwrap();
            let len = c.interior_len(k.reach);
            for h in probes(&c) {
                let direct = time_quadrature_action(&c, &profile, &h).unwrap();
                let e = interior_relative(&c, &k.apply(&h), &direct, len);
                assert!(e < 1e-8, "{name}: {e}");
            }
        }
    }

    #[test]
    fn narrow_bump_gives_identity() {
        let c = ctx("cosh");
        let eps = 0.1;
        let raw = SampledFunction::from_fn(c.grid.clone(), |x| (-(x / eps).powi(2)).exp());
        let bump = raw.scaled(1.0 / c.grid.integrate_measure(&raw.values));
        let k = t_a(&c, &bump).unwrap();
        let len = c.interior_len(k.reach);
        let h = &probes(&c)[0];
        assert!(interior_relative(&c, &k.apply(h), h, len) < 1e-2);
    }

    #[test]
    fn diagonalization() {
        for name in ["cosh", "sl2c"] {
            let c = ctx(name);
            let r = diagonalization_residual(&c, &gaussian(&c), &[0.5, 1.0, 2.0, 4.0]).unwrap();
            assert!(r < 1e-4, "{name}: {r}");
        }
    }

    #[test]
    fn multiplicativity() {
        for name in ["cosh", "sl2c"] {
            let c = ctx(name);
            let f = gaussian(&c);
            let g = SampledFunction::from_fn(c.grid.clone(), |x| x * x * (-x * x).exp());
            let r = homomorphism_residual(&c, &f, &g).unwrap();
            assert!(r < 1e-3, "{name}: {r}");
        }
    }

    #[test]
    fn multipliers_and_inversion() {
        let c = ctx("cosh");
        let g = FourierPair::gaussian();
        for l in [0.0, 1.0] {
            assert!(multiplier_residual(&c, &g, l).unwrap() < 1e-4);
            assert!((multiplier_scalar(&c, &g, l).unwrap() - (g.f)(l)).abs() < 1e-10);
        }
        let h = hermite_example(1);
        assert!(multiplier_residual(&c, &h, 1.0).unwrap() < 1e-4);
    }

    #[test]
    fn hermite_pairs_and_moments() {
        for nu in 0..3 {
            let pair = hermite_example(nu);
            for xi in [0.0, 0.7, 2.5] {
                let q = fourier_cosine_quadrature(&*pair.f, xi, 12.0);
                assert!((q - (pair.ff)(xi)).abs() < 1e-10, "nu={nu} xi={xi}");
            }
        }
        let f4 = hermite_example(2).f;
        for j in 0..4 {
            let v = crate::quadrature::integrate(|x| x.powi(j) * f4(x), -12.0, 12.0, 48, 16);
            assert!(v.abs() < 1e-10, "j={j}: {v}");
        }
    }

    #[test]
    fn functional_calculus_eigen_action() {
        let c = ctx("cosh");
        let pair = hermite_example(2);
        let k = lambda_fc(&c, &pair).unwrap();
        let len = c.interior_len(k.reach);
        for l in [0.5, 1.5] {
            let phi: Vec<f64> = c
                .grid
                .nodes()
                .iter()
                .map(|&x| phi_closed(&c.model, Complex64::from(l), x).re)
                .collect();
            let want: Vec<f64> = phi.iter().map(|v| v * (pair.f)(l)).collect();
            let e = interior_relative(&c, &k.apply(&phi), &want, len);
            let scale = (pair.f)(l).abs().max(1.0);
            assert!(e * scale < 1e-3, "l={l}: {e}");
        }
    }

    #[test]
    fn gaussian_calculus_matches_t_a() {
        let c = ctx("cosh");
        let via_fc = lambda_fc(&c, &FourierPair::gaussian()).unwrap();
        let g = SampledFunction::from_fn(c.grid.clone(), |x| (-x * x / 4.0).exp() / (PI.sqrt() * x.cosh()));
        let via_t = t_a(&c, &g).unwrap();
        assert!(kernel_distance(&c, &via_fc, &via_t, &probes(&c)) < 1e-3);
    }

    #[test]
    fn schur_dominates_sampled_norms() {
        let c = ctx("cosh");
        let k = t_a(&c, &gaussian(&c)).unwrap();
        let b = schur_bound(&k);
        for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
            assert!(sampled_norm(&k, p, 50, 7) <= b * (1.0 + 1e-12), "p={p}");
        }
        // diagonal kernel: bound is the largest diagonal mass
        let w = vec![0.5, 2.0, 1.0];
        let d = KernelMatrix::new(
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0])),
            w.clone(),
            w.clone(),
        )
        .unwrap();
        assert_eq!(schur_bound(&d), 2.0);
        // rank one u vᵀ
        let (u, v) = ([1.0, -2.0, 0.5], [0.5, 1.0, -1.0]);
        let r = KernelMatrix::new(DMatrix::from_fn(3, 3, |i, j| u[i] * v[j]), w.clone(), w.clone()).unwrap();
        let l1 = |a: &[f64]| a.iter().zip(&w).map(|(x, w)| x.abs() * w).sum::<f64>();
        let sup = |a: &[f64]| a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let expect = (sup(&u) * l1(&v)).max(sup(&v) * l1(&u));
        assert!((schur_bound(&r) - expect).abs() < 1e-15);
    }
}
