//! Weight profiles, the three built-in hypergroup models, grids and weighted norms.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::quadrature::{self, barycentric_weights, gauss_legendre, lagrange_basis};
use crate::report::{CheckEntry, CheckReport};

pub type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// coth x - 1/x, accurate near 0.
pub(crate) fn coth_minus_inv(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        x / 3.0 - x * x2 / 45.0 + 2.0 * x * x2 * x2 / 945.0
    } else {
        1.0 / x.tanh() - 1.0 / x
    }
}

/// 1/x² - 1/sinh²x, accurate near 0.
pub(crate) fn inv_sq_minus_csch_sq(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        1.0 / 3.0 - x2 / 15.0 + 2.0 * x2 * x2 / 189.0
    } else {
        1.0 / (x * x) - 1.0 / x.sinh().powi(2)
    }
}

/// Density m(x) = x^{2γ+1} q(x) of an invariant measure on (0, ∞).
#[derive(Clone)]
pub struct WeightProfile {
    name: String,
    gamma: f64,
    omega0: f64,
    m: Eval,
    /// q'/q and its derivative, when known in closed form.
    log_q: Option<(Eval, Eval)>,
}

impl fmt::Debug for WeightProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightProfile")
            .field("name", &self.name)
            .field("gamma", &self.gamma)
            .field("omega0", &self.omega0)
            .finish_non_exhaustive()
    }
}

impl WeightProfile {
    /// A profile given only by its density; derivatives are taken numerically.
    pub fn custom(
        name: impl Into<String>,
        gamma: f64,
        omega0: f64,
        m: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            gamma,
            omega0,
            m: Arc::new(m),
            log_q: None,
        }
    }

    /// Supply q'/q and (q'/q)' in closed form.
    pub fn with_log_q(
        mut self,
        u: impl Fn(f64) -> f64 + Send + Sync + 'static,
        du: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.log_q = Some((Arc::new(u), Arc::new(du)));
        self
    }

    /// m(x) = 2^k sinh^k x, the radial volume density of real hyperbolic (k+1)-space.
    pub fn hyperbolic(k: u32) -> Self {
        let kf = k as f64;
        let scale = 2f64.powi(k as i32);
        Self::custom(format!("sinh^{k}"), (kf - 1.0) / 2.0, kf / 2.0, move |x| {
            scale * x.sinh().powi(k as i32)
        })
        .with_log_q(move |x| kf * coth_minus_inv(x), move |x| kf * inv_sq_minus_csch_sq(x))
    }

    /// m(x) = x^{2γ+1}: a flat profile with q ≡ 1 and ω₀ = 0.
    pub fn power(gamma: f64) -> Self {
        Self::custom(format!("x^{}", 2.0 * gamma + 1.0), gamma, 0.0, move |x| {
            x.powf(2.0 * gamma + 1.0)
        })
        .with_log_q(|_| 0.0, |_| 0.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn m(&self, x: f64) -> f64 {
        (self.m)(x)
    }

    pub fn q(&self, x: f64) -> f64 {
        self.m(x) / x.powf(2.0 * self.gamma + 1.0)
    }

    fn numeric_log_m_prime(&self, x: f64) -> f64 {
        let h = 1e-5 * x;
        (self.m(x + h) - self.m(x - h)) / (2.0 * h * self.m(x))
    }

    /// m'(x)/m(x).
    pub fn log_derivative(&self, x: f64) -> f64 {
        match &self.log_q {
            Some((u, _)) => u(x) + (2.0 * self.gamma + 1.0) / x,
            None => self.numeric_log_m_prime(x),
        }
    }

    /// q'/q and its derivative at x.
    fn log_q_derivs(&self, x: f64) -> (f64, f64) {
        match &self.log_q {
            Some((u, du)) => (u(x), du(x)),
            None => {
                let g = 2.0 * self.gamma + 1.0;
                let u = |y: f64| self.numeric_log_m_prime(y) - g / y;
                // outer step larger than the inner one so the nested difference stays above round-off
                let h = 1e-3 * x;
                (u(x), (u(x + h) - u(x - h)) / (2.0 * h))
            }
        }
    }

    /// The perturbation Q(x) = u'/2 + u²/4 + (2γ+1)u/(2x) - ω₀², u = q'/q.
    pub fn big_q(&self, x: f64) -> f64 {
        let (u, du) = self.log_q_derivs(x);
        du / 2.0 + u * u / 4.0 + (2.0 * self.gamma + 1.0) * u / (2.0 * x) - self.omega0 * self.omega0
    }
}

/// (q(x), Q(x)).
pub fn q_profile(profile: &WeightProfile, x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(domain(format!("q_profile needs x > 0, got {x}")));
    }
    Ok((profile.q(x), profile.big_q(x)))
}

/// Check the small-x, large-x and positivity conditions a profile needs for the Volterra construction.
pub fn validate_weight(profile: &WeightProfile) -> CheckReport {
    let mut r = CheckReport::new();
    let g = profile.gamma();

    // (i) behaviour at the origin
    r.push(CheckEntry::at_most(
        "origin: gamma >= 1/2",
        "small-x condition",
        0.5 - g,
        0.0,
    ));
    let m_tiny = profile.m(1e-8);
    r.push(CheckEntry::at_most(
        "origin: m(0+) = 0",
        "small-x condition",
        m_tiny,
        1e-6,
    ));
    let r3 = profile.q(1e-3);
    let r4 = profile.q(1e-4);
    let rel = (r3 - r4).abs() / r4.abs();
    r.push(CheckEntry::flag(
        "origin: m/x^(2gamma+1) converges to a positive limit",
        "small-x condition",
        r4 > 0.0 && rel <= 1e-3,
        rel,
    ));

    // (ii) growth at infinity
    let samples: Vec<f64> = (1..=5000).map(|k| 50.0 * k as f64 / 5000.0).collect();
    let monotone = samples.windows(2).all(|w| profile.m(w[1]) >= profile.m(w[0]));
    r.push(CheckEntry::flag(
        "infinity: m nondecreasing on (0, 50]",
        "large-x condition",
        monotone,
        0.0,
    ));
    // the remainder in m'/m decays at least like 1/x; one Richardson step removes it
    let limit = 2.0 * profile.log_derivative(40.0) - profile.log_derivative(20.0);
    r.push(CheckEntry::close(
        "infinity: m'/m tends to 2 omega0",
        "large-x condition",
        limit,
        2.0 * profile.omega0(),
        1e-6,
    ));

    // (iii) nonnegative integrable perturbation
    let min_q = samples.iter().map(|&x| profile.big_q(x)).fold(f64::INFINITY, f64::min);
    r.push(CheckEntry::at_most(
        "perturbation: Q >= 0",
        "positivity condition",
        -min_q,
        1e-10,
    ));
    let integral = quadrature::integrate(|x| profile.big_q(x), 0.0, 50.0, 100, 16);
    r.push(CheckEntry::flag(
        "perturbation: integral of Q over (0, 50] finite",
        "positivity condition",
        integral.is_finite(),
        integral,
    ));
    r
}

/// The three built-in hypergroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Cosh,
    Mehler,
    Sl2c,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Cosh, ModelKind::Mehler, ModelKind::Sl2c];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Cosh => "cosh",
            ModelKind::Mehler => "mehler",
            ModelKind::Sl2c => "sl2c",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosh" => Ok(ModelKind::Cosh),
            "mehler" => Ok(ModelKind::Mehler),
            "sl2c" => Ok(ModelKind::Sl2c),
            other => Err(Error::Config(format!(
                "unknown model '{other}' (expected cosh, mehler or sl2c)"
            ))),
        }
    }
}

/// A named hypergroup: weight, Plancherel density and bookkeeping flags.
#[derive(Debug, Clone)]
pub struct HypergroupModel {
    pub kind: ModelKind,
    pub profile: WeightProfile,
    /// Multiplies the nominal Plancherel density; see `transforms::calibrate`.
    pub plancherel_scale: f64,
    /// False for the cosh hypergroup, whose density does not vanish at the origin.
    pub chebli_trimeche: bool,
}

impl HypergroupModel {
    pub fn new(kind: ModelKind) -> Self {
        let profile = match kind {
            ModelKind::Cosh => WeightProfile::custom("cosh", -0.5, 1.0, |x| x.cosh().powi(2))
                .with_log_q(|x| 2.0 * x.tanh(), |x| 2.0 / x.cosh().powi(2)),
            ModelKind::Mehler => {
                WeightProfile::custom("mehler", 0.0, 0.5, f64::sinh).with_log_q(coth_minus_inv, inv_sq_minus_csch_sq)
            }
            ModelKind::Sl2c => WeightProfile::custom("sl2c", 0.5, 1.0, |x| 4.0 * x.sinh().powi(2))
                .with_log_q(|x| 2.0 * coth_minus_inv(x), |x| 2.0 * inv_sq_minus_csch_sq(x)),
        };
        Self {
            kind,
            profile,
            plancherel_scale: 1.0,
            chebli_trimeche: kind != ModelKind::Cosh,
        }
    }

    pub fn with_plancherel_scale(mut self, c: f64) -> Self {
        self.plancherel_scale = c;
        self
    }

    /// The Plancherel density before scaling.
    pub fn plancherel_shape(&self, lambda: f64) -> f64 {
        match self.kind {
            ModelKind::Cosh => 2.0 / PI,
            ModelKind::Mehler => lambda * (PI * lambda).tanh(),
            ModelKind::Sl2c => lambda * lambda / (4.0 * PI),
        }
    }

    pub fn plancherel(&self, lambda: f64) -> f64 {
        self.plancherel_scale * self.plancherel_shape(lambda)
    }

    /// Spectral parameter with φ_λ ≡ 1, if any.
    pub fn trivial_character_point(&self) -> Option<Complex64> {
        match self.kind {
            ModelKind::Cosh => None,
            ModelKind::Mehler => Some(Complex64::new(0.0, 0.5)),
            ModelKind::Sl2c => Some(Complex64::new(0.0, 1.0)),
        }
    }

    pub fn omega0(&self) -> f64 {
        self.profile.omega0()
    }

    pub fn m(&self, x: f64) -> f64 {
        self.profile.m(x)
    }
}

pub fn build_model(name: &str) -> Result<HypergroupModel> {
    Ok(HypergroupModel::new(name.parse()?))
}

/// Composite Gauss–Legendre grid on (0, xMax] with model measure weights.
#[derive(Debug, Clone)]
pub struct Grid {
    x_max: f64,
    panels: usize,
    order: usize,
    nodes: Vec<f64>,
    quad_weights: Vec<f64>,
    measure_weights: Vec<f64>,
    reference_nodes: Vec<f64>,
    bary: Vec<f64>,
}

pub const DEFAULT_X_MAX: f64 = 20.0;
pub const DEFAULT_PANELS: usize = 32;
pub const PANEL_ORDER: usize = 16;

impl Grid {
    pub fn new(profile: &WeightProfile, x_max: f64, panels: usize, order: usize) -> Result<Self> {
        if !(x_max > 0.0) || panels == 0 || order < 2 {
            return Err(Error::Config(format!(
                "grid needs xMax > 0, panels >= 1, order >= 2 (got {x_max}, {panels}, {order})"
            )));
        }
        let rule = gauss_legendre(order);
        let h = x_max / panels as f64;
        let (nodes, quad_weights): (Vec<f64>, Vec<f64>) = (0..panels)
            .flat_map(|p| {
                let lo = p as f64 * h;
                rule.on(lo, lo + h).collect::<Vec<_>>()
            })
            .unzip();
        let measure_weights = nodes
            .iter()
            .zip(&quad_weights)
            .map(|(&x, &w)| profile.m(x) * w)
            .collect();
        let reference_nodes = rule.nodes.clone();
        let bary = barycentric_weights(&reference_nodes);
        Ok(Self {
            x_max,
            panels,
            order,
            nodes,
            quad_weights,
            measure_weights,
            reference_nodes,
            bary,
        })
    }

    /// Default layout: 32 panels of 16 nodes.
    pub fn for_model(model: &HypergroupModel, x_max: f64) -> Result<Self> {
        Self::new(&model.profile, x_max, DEFAULT_PANELS, PANEL_ORDER)
    }

    /// A grid with about `n` nodes (rounded up to whole panels).
    pub fn with_nodes(model: &HypergroupModel, x_max: f64, n: usize) -> Result<Self> {
        Self::new(&model.profile, x_max, n.div_ceil(PANEL_ORDER).max(1), PANEL_ORDER)
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    pub fn measure_weights(&self) -> &[f64] {
        &self.measure_weights
    }

    pub fn panel_width(&self) -> f64 {
        self.x_max / self.panels as f64
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// First node index and Lagrange weights of the panel polynomial through `x`.
    /// `None` when x lies outside [0, xMax].
    pub fn interp_stencil(&self, x: f64) -> Option<(usize, Vec<f64>)> {
        if !(0.0..=self.x_max * (1.0 + 1e-14)).contains(&x) {
            return None;
        }
        let h = self.panel_width();
        let p = ((x / h) as usize).min(self.panels - 1);
        let u = 2.0 * (x - p as f64 * h) / h - 1.0;
        let mut basis = vec![0.0; self.order];
        lagrange_basis(&self.reference_nodes, &self.bary, u, &mut basis);
        Some((p * self.order, basis))
    }

    /// Panel-polynomial interpolation of nodal values; zero outside [0, xMax].
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        if !(0.0..=self.x_max * (1.0 + 1e-14)).contains(&x) {
            return 0.0;
        }
        let h = self.panel_width();
        let p = ((x / h) as usize).min(self.panels - 1);
        let u = 2.0 * (x - p as f64 * h) / h - 1.0;
        let mut buf = [0.0; 64];
        let mut heap;
        let basis = if self.order <= buf.len() {
            &mut buf[..self.order]
        } else {
            heap = vec![0.0; self.order];
            &mut heap[..]
        };
        lagrange_basis(&self.reference_nodes, &self.bary, u, basis);
        let start = p * self.order;
        basis
            .iter()
            .zip(&values[start..start + self.order])
            .map(|(b, v)| b * v)
            .sum()
    }

    /// ∫ f m over the grid.
    pub fn integrate_measure(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.measure_weights).map(|(v, w)| v * w).sum()
    }
}

/// Samples of a real function at the nodes of a grid.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    pub grid: Arc<Grid>,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "{} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![0.0; grid.len()];
        Self { grid, values }
    }

    pub fn at(&self, x: f64) -> f64 {
        self.grid.interpolate(&self.values, x)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_norm(&self.grid, self, p)
    }
}

/// Weighted L^p(m) norm on the grid; p = ∞ gives the sup norm.
pub fn lp_norm(grid: &Grid, f: &SampledFunction, p: f64) -> Result<f64> {
    lp_norm_values(grid, &f.values, p)
}

pub fn lp_norm_values(grid: &Grid, values: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(domain(format!("L^p norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(0.0, |a, v| a.max(v.abs())));
    }
    let s: f64 = values
        .iter()
        .zip(grid.measure_weights())
        .map(|(v, w)| v.abs().powf(p) * w)
        .sum();
    Ok(s.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2c_density_value() {
        let m = build_model("sl2c").unwrap();
        assert!((m.m(1.0) - 5.524_391_382_167_262).abs() < 1e-12);
    }

    #[test]
    fn unknown_model_is_a_config_error() {
        assert!(matches!(build_model("torus"), Err(Error::Config(_))));
    }

    #[test]
    fn plancherel_shapes() {
        let mehler = build_model("mehler").unwrap();
        assert!((mehler.plancherel(0.7) - 0.7 * (PI * 0.7).tanh()).abs() < 1e-15);
        let cosh = build_model("cosh").unwrap();
        assert!((cosh.plancherel(3.0) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn sl2c_perturbation_vanishes() {
        let m = build_model("sl2c").unwrap();
        for x in [1e-4, 0.01, 0.5, 1.0, 3.0, 10.0, 40.0] {
            let (_, big_q) = q_profile(&m.profile, x).unwrap();
            assert!(big_q.abs() < 1e-10, "x={x} Q={big_q}");
        }
    }

    #[test]
    fn flat_profile_has_no_perturbation() {
        let p = WeightProfile::power(0.5);
        assert_eq!(q_profile(&p, 2.0).unwrap(), (1.0, 0.0));
        let numeric = WeightProfile::custom("x^2", 0.5, 0.0, |x| x * x);
        assert!(numeric.big_q(2.0).abs() < 1e-8);
    }

    #[test]
    fn mehler_perturbation_against_symbolic_value() {
        // Q(1) for m = sinh x, γ = 0, ω₀ = 1/2, written out by hand:
        // u = coth 1 - 1, u' = 1 - csch²1, Q = u'/2 + u²/4 + u/2 - 1/4
        let c = 1.0 / 1f64.tanh();
        let csch2 = 1.0 / 1f64.sinh().powi(2);
        let u = c - 1.0;
        let expect = (1.0 - csch2) / 2.0 + u * u / 4.0 + u / 2.0 - 0.25;
        let m = build_model("mehler").unwrap();
        assert!((m.profile.big_q(1.0) - expect).abs() < 1e-12);
        // the numerical-derivative route agrees
        let numeric = WeightProfile::custom("sinh", 0.0, 0.5, f64::sinh);
        assert!((numeric.big_q(1.0) - expect).abs() < 1e-7);
    }

    #[test]
    fn q_profile_rejects_nonpositive_x() {
        let m = build_model("cosh").unwrap();
        assert!(matches!(q_profile(&m.profile, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn validate_sl2c_passes() {
        let m = build_model("sl2c").unwrap();
        let r = validate_weight(&m.profile);
        assert!(r.all_pass(), "{:#?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn validate_cosh_fails_at_origin() {
        let m = build_model("cosh").unwrap();
        let r = validate_weight(&m.profile);
        assert!(!r.get("origin: m(0+) = 0").unwrap().pass);
        assert!(r.get("infinity: m'/m tends to 2 omega0").unwrap().pass);
    }

    #[test]
    fn validate_power_law_limit() {
        let r = validate_weight(&WeightProfile::power(0.5));
        assert!(r.get("infinity: m'/m tends to 2 omega0").unwrap().pass);
    }

    #[test]
    fn measure_weights_match_antiderivatives() {
        let x: f64 = 20.0;
        let cases: [(&str, f64); 3] = [
            ("cosh", (x + x.sinh() * x.cosh()) / 2.0),
            ("sl2c", (2.0 * x).sinh() - 2.0 * x),
            ("mehler", x.cosh() - 1.0),
        ];
        for (name, exact) in cases {
            let m = build_model(name).unwrap();
            let g = Grid::for_model(&m, x).unwrap();
            let total: f64 = g.measure_weights().iter().sum();
            assert!((total - exact).abs() <= 1e-8 * exact, "{name}");
        }
    }

    #[test]
    fn lp_norm_of_one_on_unit_interval() {
        let m = build_model("cosh").unwrap();
        let g = Arc::new(Grid::for_model(&m, 1.0).unwrap());
        let one = SampledFunction::from_fn(g.clone(), |_| 1.0);
        let expect = ((1.0 + 1f64.sinh() * 1f64.cosh()) / 2.0).sqrt();
        assert!((one.lp_norm(2.0).unwrap() - expect).abs() < 1e-8);
        assert_eq!(SampledFunction::zeros(g).lp_norm(3.0).unwrap(), 0.0);
        assert!(one.lp_norm(0.5).is_err());
    }

    #[test]
    fn interpolation_is_spectrally_accurate() {
        let m = build_model("cosh").unwrap();
        let g = Grid::for_model(&m, 20.0).unwrap();
        let vals: Vec<f64> = g.nodes().iter().map(|&x| (4.0 * x).cos() / x.cosh()).collect();
        for x in [0.0, 0.013, 3.3, 7.77, 19.99] {
            let err = (g.interpolate(&vals, x) - (4.0 * x).cos() / x.cosh()).abs();
            assert!(err < 1e-10, "x={x} err={err}");
        }
        assert_eq!(g.interpolate(&vals, 20.5), 0.0);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn antiderivative(kind: ModelKind, x: f64) -> f64 {
        match kind {
            ModelKind::Cosh => (x + x.sinh() * x.cosh()) / 2.0,
            ModelKind::Sl2c => (2.0 * x).sinh() - 2.0 * x,
            ModelKind::Mehler => x.cosh() - 1.0,
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn measure_weights_integrate_m(x_max in 0.5f64..20.0, panels in 4usize..40, k in 0usize..3) {
            let kind = ModelKind::ALL[k];
            let model = HypergroupModel::new(kind);
            let grid = Grid::new(&model.profile, x_max, panels, PANEL_ORDER).unwrap();
            let total: f64 = grid.measure_weights().iter().sum();
            let exact = antiderivative(kind, x_max);
            prop_assert!((total - exact).abs() <= 1e-8 * exact.max(1.0));
        }

        #[test]
        fn lp_norm_is_homogeneous_and_monotone(c in -5.0f64..5.0, w in 0.2f64..3.0, p in 1.0f64..8.0) {
            let model = HypergroupModel::new(ModelKind::Cosh);
            let grid = Arc::new(Grid::for_model(&model, 10.0).unwrap());
            let f = SampledFunction::from_fn(grid.clone(), |x| (-w * x * x).exp());
            let larger = SampledFunction::from_fn(grid, |x| (-w * x * x).exp() * (1.0 + x.sin().powi(2)));
            let n = f.lp_norm(p).unwrap();
            prop_assert!((f.scaled(c).lp_norm(p).unwrap() - c.abs() * n).abs() <= 1e-12 * n.max(1e-300) * (1.0 + c.abs()));
            prop_assert!(larger.lp_norm(p).unwrap() >= n);
        }
    }
}
