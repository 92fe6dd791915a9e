//! Named verification suites, the tolerance registry and suite configuration.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::characters::{phi_closed, phi_from_laplace, phi_ode, phi_volterra, volterra_solve};
use crate::error::{Error, Result};
use crate::fracint::{self, derivative, order, u_beta, w_alpha, DIFF_STEP};
use crate::models::{Grid, HypergroupModel, ModelKind, SampledFunction, WeightProfile, DEFAULT_X_MAX, PANEL_ORDER};
use crate::multipliers::{self, s_variation, s_variation_brute, VariationSample};
use crate::opcalc::{self, discretize, FourierPair, OperatorContext};
use crate::report::{CheckEntry, CheckReport, GridInfo, SuiteReport};
use crate::transforms::{self, LambdaGrid, SpectralFunction, VenturiRegion};
use crate::waves::{self, smooth_bump};

pub const DEFAULT_NODES: usize = 512;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Characters,
    Transforms,
    Fracint,
    Waves,
    Opcalc,
    Multipliers,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "characters",
        "transforms",
        "fracint",
        "waves",
        "opcalc",
        "multipliers",
        "all",
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Characters => "characters",
            Suite::Transforms => "transforms",
            Suite::Fracint => "fracint",
            Suite::Waves => "waves",
            Suite::Opcalc => "opcalc",
            Suite::Multipliers => "multipliers",
            Suite::All => "all",
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Characters,
                Suite::Transforms,
                Suite::Fracint,
                Suite::Waves,
                Suite::Opcalc,
                Suite::Multipliers,
            ],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| {
                [
                    Suite::Characters,
                    Suite::Transforms,
                    Suite::Fracint,
                    Suite::Waves,
                    Suite::Opcalc,
                    Suite::Multipliers,
                    Suite::All,
                ][i]
            })
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown suite '{s}' (expected one of {})",
                    Self::NAMES.join(", ")
                ))
            })
    }
}

/// Every tolerance a suite uses, by name, overridable per run.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances(BTreeMap<&'static str, f64>);

const DEFAULT_TOLERANCES: [(&str, f64); 22] = [
    ("character.closed", 1e-6),
    ("character.laplace", 1e-6),
    ("character.volterra", 1e-5),
    ("character.volterra_rho", 1e-14),
    ("transform.pair", 1e-3),
    ("transform.roundtrip", 1e-4),
    ("transform.convolution", 1e-4),
    ("product.explicit", 1e-8),
    ("product.mehler", 1e-4),
    ("fracint.semigroup", 1e-7),
    ("fracint.mehler_link", 1e-6),
    ("fracint.derivative", 1e-5),
    ("wave.eigen", 1e-6),
    ("wave.residual", 1e-3),
    ("wave.support_cells", 2.0),
    ("wave.frac", 1e-3),
    ("opcalc.diagonal", 1e-3),
    ("opcalc.homomorphism", 1e-3),
    ("opcalc.multiplier", 1e-4),
    ("opcalc.moments", 1e-10),
    ("opcalc.hermite_eigen", 1e-3),
    ("multipliers.transfer", 1e-6),
];

impl Default for Tolerances {
    fn default() -> Self {
        Self(DEFAULT_TOLERANCES.into_iter().collect())
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Config(format!("tolerance {name} must be a nonnegative number")));
        }
        match self.0.get_mut(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::Config(format!(
                "unknown tolerance '{name}' (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    /// Parses `name=value`.
    pub fn apply(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected name=value, got '{assignment}'")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("tolerance value '{value}' is not a number")))?;
        self.set(name.trim(), value)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.0.keys().copied()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// `None` runs every model the suite supports.
    pub model: Option<ModelKind>,
    pub x_max: f64,
    pub panels: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            model: None,
            x_max: DEFAULT_X_MAX,
            panels: DEFAULT_NODES / PANEL_ORDER,
            seed: DEFAULT_SEED,
            tolerances: Tolerances::default(),
        }
    }
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            ..Self::default()
        }
    }

    pub fn with_model(mut self, model: ModelKind) -> Self {
        self.model = Some(model);
        self
    }

    /// Node count, rounded up to whole panels.
    pub fn set_nodes(&mut self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Config("node count must be positive".into()));
        }
        self.panels = n.div_ceil(PANEL_ORDER);
        Ok(())
    }

    pub fn set_x_max(&mut self, x_max: f64) -> Result<()> {
        if !(x_max.is_finite() && x_max > 0.0) {
            return Err(Error::Config(format!("xmax must be positive, got {x_max}")));
        }
        self.x_max = x_max;
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.panels * PANEL_ORDER
    }

    pub fn model_tag(&self) -> &'static str {
        self.model.map_or("all", ModelKind::as_str)
    }

    fn grid(&self, model: &HypergroupModel) -> Result<Arc<Grid>> {
        Ok(Arc::new(Grid::new(
            &model.profile,
            self.x_max,
            self.panels,
            PANEL_ORDER,
        )?))
    }

    fn tol(&self, name: &str) -> f64 {
        self.tolerances.get(name)
    }

    fn models(&self, allowed: &[ModelKind]) -> Vec<ModelKind> {
        match self.model {
            Some(m) => allowed.iter().copied().filter(|&a| a == m).collect(),
            None => allowed.to_vec(),
        }
    }
}

/// A labelled real test function.
type NamedFn = (&'static str, fn(f64) -> f64);

type Run = Box<dyn Fn(&SuiteConfig) -> Result<CheckReport> + Send + Sync>;

struct Job {
    label: String,
    run: Run,
}

fn job(label: impl Into<String>, run: impl Fn(&SuiteConfig) -> Result<CheckReport> + Send + Sync + 'static) -> Job {
    Job {
        label: label.into(),
        run: Box::new(run),
    }
}

/// Re-grade tolerance-style entries of a library report against a registered tolerance.
fn regrade(mut r: CheckReport, tol: f64) -> CheckReport {
    for c in &mut r.checks {
        if let (Some(m), Some(e), Some(t)) = (c.measured, c.expected, c.tolerance) {
            if t > 0.0 {
                c.tolerance = Some(tol);
                c.pass = (m - e).abs() <= tol;
            }
        }
    }
    r
}

fn single(entry: CheckEntry) -> CheckReport {
    std::iter::once(entry).collect()
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that a broken evaluation fails its check
    values.into_iter().fold(
        0.0,
        |a: f64, v| if v.is_nan() || a.is_nan() { f64::NAN } else { a.max(v) },
    )
}

const CHARACTER_LAMBDAS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

fn character_jobs(cfg: &SuiteConfig, jobs: &mut Vec<Job>) {
    for kind in cfg.models(&ModelKind::ALL) {
        jobs.push(job(format!("{kind} closed form against ODE"), move |cfg| {
            let model = HypergroupModel::new(kind);
            let xs: Vec<f64> = (1..=80).map(|k| k as f64 * 0.1).collect();
            let tol = cfg.tol("character.closed");
            CHARACTER_LAMBDAS
                .par_iter()
                .map(|&l| {
                    let ode = phi_ode(&model.profile, Complex64::from(l), &xs)?;
                    let err = max_of(
                        ode.iter()
                            .map(|e| (e.value - phi_closed(&model, Complex64::from(l), e.x)).norm()),
                    );
                    Ok(CheckEntry::residual(
                        format!("{kind}: max |phi_ode - phi_closed| on [0.1, 8], l={l}"),
                        "closed-form characters",
                        err,
                        tol,
                    ))
                })
                .collect()
        }));
        jobs.push(job(format!("{kind} Laplace representation"), move |cfg| {
            let model = HypergroupModel::new(kind);
            let tol = cfg.tol("character.laplace");
            let err = max_of([0.5, 2.0].iter().flat_map(|&l| {
                let model = &model;
                [0.5, 2.0, 5.0].into_iter().map(move |x| {
                    let lam = Complex64::from(l);
                    (phi_from_laplace(model, lam, x) - phi_closed(model, lam, x)).norm()
                })
            }));
            Ok(single(CheckEntry::residual(
                format!("{kind}: max |Laplace integral - phi_closed|"),
                "Laplace representation of characters",
                err,
                tol,
            )))
        }));
    }
    if cfg.model.is_none() || cfg.model == Some(ModelKind::Sl2c) {
        jobs.push(job("Volterra correction vanishes for sl2c", |cfg| {
            let model = HypergroupModel::new(ModelKind::Sl2c);
            let rho = [0.5, 2.0]
                .iter()
                .map(|&l| {
                    let sol = volterra_solve(&model.profile, Complex64::from(l), 8.0)?;
                    Ok(max_of(sol.rho_at_nodes().map(|(_, r)| r.norm())))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(single(CheckEntry::residual(
                "sl2c: max |rho| of the Volterra correction",
                "Volterra series with vanishing potential",
                max_of(rho),
                cfg.tol("character.volterra_rho"),
            )))
        }));
    }
    jobs.push(job("Volterra against ODE for 8 sinh^3", |cfg| {
        let profile = WeightProfile::hyperbolic(3);
        let xs: Vec<f64> = (0..=49).map(|k| 0.1 + k as f64 * 0.1).collect();
        CHARACTER_LAMBDAS
            .par_iter()
            .map(|&l| {
                let lam = Complex64::from(l);
                let v = phi_volterra(&profile, lam, &xs)?;
                let o = phi_ode(&profile, lam, &xs)?;
                Ok(CheckEntry::residual(
                    format!("8 sinh^3: max |phi_volterra - phi_ode| on [0.1, 5], l={l}"),
                    "Volterra series for the characters",
                    max_of(v.iter().zip(&o).map(|(a, b)| (a.value - b.value).norm())),
                    cfg.tol("character.volterra"),
                ))
            })
            .collect()
    }));
}

fn transform_jobs(cfg: &SuiteConfig, jobs: &mut Vec<Job>) {
    for kind in cfg.models(&ModelKind::ALL) {
        jobs.push(job(format!("{kind} Plancherel round trip"), move |cfg| {
            let raw = HypergroupModel::new(kind);
            let c = transforms::calibrate(&raw)?;
            let model = raw.clone().with_plancherel_scale(c);
            let grid = cfg.grid(&model)?;
            let lg = LambdaGrid::default();
            let mut r = CheckReport::new();
            let mut scale = CheckEntry::record(
                format!("{kind}: fitted Plancherel scale against the nominal density"),
                "Plancherel measure",
                c,
            );
            scale.expected = Some(1.0);
            r.push(scale);
            let tests: [NamedFn; 2] = [
                ("exp(-x^2)", |x| (-x * x).exp()),
                ("x^2 exp(-x^2)", |x| x * x * (-x * x).exp()),
            ];
            for (name, f) in tests {
                let f = SampledFunction::from_fn(grid.clone(), f);
                let back = transforms::inverse(&model, &transforms::forward(&model, &f, &lg.nodes)?, grid.clone())?;
                r.push(CheckEntry::residual(
                    format!("{kind}: relative L2(m) round-trip error for {name}"),
                    "Plancherel inversion",
                    transforms::relative_l2(&f, &back),
                    cfg.tol("transform.roundtrip"),
                ));
            }
            Ok(r)
        }));
        jobs.push(job(format!("{kind} product formula"), move |cfg| {
            let model = HypergroupModel::new(kind);
            let pts = [0.5, 1.0, 2.0];
            let mut lattice = Vec::with_capacity(27);
            for l in pts {
                for x in pts {
                    lattice.extend(pts.map(|y| (l, x, y)));
                }
            }
            let res = lattice
                .par_iter()
                .map(|&(l, x, y)| transforms::product_formula_residual(&model, Complex64::from(l), x, y))
                .collect::<Result<Vec<f64>>>()?;
            let key = if kind == ModelKind::Mehler {
                "product.mehler"
            } else {
                "product.explicit"
            };
            Ok(single(CheckEntry::residual(
                format!("{kind}: max product formula residual on a 3x3x3 lattice"),
                "product formula for characters",
                max_of(res),
                cfg.tol(key),
            )))
        }));
        jobs.push(job(format!("{kind} convolution theorem"), move |cfg| {
            let model = transforms::calibrated(&HypergroupModel::new(kind))?;
            let grid = Arc::new(Grid::for_model(&model, 12.0)?);
            let f = SampledFunction::from_fn(grid.clone(), |x| (-x * x).exp());
            let g = SampledFunction::from_fn(grid, |x| x * (-x * x / 2.0).exp());
            let lg = LambdaGrid::default();
            let lhs = transforms::forward(&model, &transforms::convolve(&model, &f, &g)?, &lg.nodes)?;
            let rhs = transforms::forward(&model, &f, &lg.nodes)?.product(&transforms::forward(&model, &g, &lg.nodes)?);
            Ok(single(CheckEntry::residual(
                format!("{kind}: max |(f*g)^ - f^ g^|"),
                "convolution theorem",
                max_of(lhs.values.iter().zip(&rhs.values).map(|(a, b)| (a - b).norm())),
                cfg.tol("transform.convolution"),
            )))
        }));
    }
    if cfg.model.is_none() || cfg.model == Some(ModelKind::Mehler) {
        jobs.push(job("Mehler-Fock pair table", |cfg| {
            Ok(regrade(transforms::pair_table()?, cfg.tol("transform.pair")))
        }));
        jobs.push(job("Venturi probe", |_| {
            let f = |z: Complex64| z * 8.0 / (z * PI).sinh();
            Ok(transforms::venturi_norm_probe(
                &f,
                &VenturiRegion::new(PI / 4.0, 0.9)?,
                0,
            ))
        }));
    }
}

fn fracint_jobs(jobs: &mut Vec<Job>) {
    jobs.push(job("semigroup", |cfg| {
        let fs: [fn(f64) -> f64; 3] = [|t| (2.0 * t).cos(), |t| (-t).exp(), |t| t * t];
        let cases: Vec<(f64, f64, usize, f64)> = [(0.5, 0.5), (0.5, 1.0), (1.0, 1.0)]
            .iter()
            .flat_map(|&(a, b)| (0..3).flat_map(move |i| [0.5, 1.0, 2.0, 4.0].map(|x| (a, b, i, x))))
            .collect();
        let errs = cases
            .par_iter()
            .map(|&(a, b, i, x)| {
                let f = fs[i];
                let lhs = w_alpha(
                    |t| w_alpha(f, order(b), t).map(|v| v.re).unwrap_or(f64::NAN),
                    order(a),
                    x,
                )?
                .re;
                let rhs = w_alpha(f, order(a + b), x)?.re;
                Ok((lhs - rhs).abs() / rhs.abs().max(1.0))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(single(CheckEntry::residual(
            "max relative |W_a W_b f - W_(a+b) f|",
            "semigroup law of the fractional integrals",
            max_of(errs),
            cfg.tol("fracint.semigroup"),
        )))
    }));
    jobs.push(job("left inverses", |cfg| {
        let f = |t: f64| (2.0 * t).cos();
        let e = |t: f64| (-t).exp();
        let errs = [0.7, 1.1, 2.3].map(|x| {
            let dw = derivative(
                |y| w_alpha(f, order(1.0), y).unwrap_or(Complex64::from(f64::NAN)),
                x,
                DIFF_STEP,
            )
            .re / x.sinh();
            let du = derivative(
                |y| u_beta(e, order(1.0), y).unwrap_or(Complex64::from(f64::NAN)),
                x,
                DIFF_STEP,
            )
            .re;
            (dw - f(x)).abs().max((du - e(x)).abs())
        });
        Ok(single(CheckEntry::residual(
            "max |(1/sinh x) d/dx W_1 f - f| and |d/dx U_1 f - f|",
            "left inverses of the fractional integrals",
            max_of(errs),
            cfg.tol("fracint.semigroup"),
        )))
    }));
    jobs.push(job("Legendre links", |cfg| {
        let mut r = CheckReport::new();
        for l in [0.5, 2.0] {
            for x in [0.8, 2.0] {
                let mut part = fracint::mehler_dirichlet_check(0, l, x).checks.into_iter();
                if let Some(link) = part.next() {
                    r.extend(regrade(single(link), cfg.tol("fracint.mehler_link")));
                }
                r.extend(regrade(part.collect(), cfg.tol("fracint.derivative")));
            }
        }
        Ok(r)
    }));
    jobs.push(job("derivative relation", |cfg| {
        let mut r = CheckReport::new();
        for nu in [1, 2] {
            for x in [1.0, 2.0] {
                r.extend(regrade(
                    fracint::mehler_dirichlet_check(nu, 1.0, x),
                    cfg.tol("fracint.derivative"),
                ));
            }
        }
        Ok(r)
    }));
    jobs.push(job("scalar growth", |_| fracint::growth_check()));
}

fn wave_jobs(cfg: &SuiteConfig, jobs: &mut Vec<Job>) {
    for kind in cfg.models(&[ModelKind::Cosh, ModelKind::Sl2c]) {
        jobs.push(job(format!("{kind} wave eigen-action"), move |cfg| {
            let model = HypergroupModel::new(kind);
            let grid = cfg.grid(&model)?;
            let t = 1.7;
            let limit = grid.x_max() - t - 0.1;
            let errs = CHARACTER_LAMBDAS
                .iter()
                .map(|&l| {
                    let phi = SampledFunction::from_fn(grid.clone(), |x| phi_closed(&model, Complex64::from(l), x).re);
                    let u = waves::cosine_apply_unchecked(&model, t, &phi)?;
                    Ok(max_of(
                        grid.nodes()
                            .iter()
                            .zip(u.values.iter().zip(&phi.values))
                            .filter(|(&x, _)| x < limit)
                            .map(|(_, (a, b))| (a - (l * t).cos() * b).abs()),
                    ))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(single(CheckEntry::residual(
                format!("{kind}: max |cos(tA) phi_l - cos(l t) phi_l|, t={t}"),
                "cosine family on characters",
                max_of(errs),
                cfg.tol("wave.eigen"),
            )))
        }));
        jobs.push(job(format!("{kind} wave equation"), move |cfg| {
            let model = HypergroupModel::new(kind);
            let grid = cfg.grid(&model)?;
            let gauss = SampledFunction::from_fn(grid.clone(), |x| (-x * x).exp());
            let phi = SampledFunction::from_fn(grid, |x| phi_closed(&model, Complex64::from(2.0), x).re);
            let tol = cfg.tol("wave.residual");
            Ok([
                CheckEntry::residual(
                    format!("{kind}: wave residual for exp(-x^2), t=1"),
                    "abstract wave equation",
                    waves::wave_residual(&model, &gauss, 1.0),
                    tol,
                ),
                CheckEntry::residual(
                    format!("{kind}: wave residual for phi_2, t=0.8"),
                    "abstract wave equation",
                    waves::wave_residual(&model, &phi, 0.8),
                    tol,
                ),
                CheckEntry::residual(
                    format!("{kind}: initial velocity for exp(-x^2)"),
                    "abstract wave equation",
                    waves::initial_velocity(&model, &gauss),
                    tol,
                ),
            ]
            .into_iter()
            .collect())
        }));
        jobs.push(job(format!("{kind} finite propagation"), move |cfg| {
            let model = HypergroupModel::new(kind);
            let grid = cfg.grid(&model)?;
            let a = 2.0;
            let h = SampledFunction::from_fn(grid.clone(), |x| smooth_bump(x / a));
            let cells = cfg.tol("wave.support_cells") * grid.panel_width();
            Ok([0.5, 1.0, 2.5, 5.0]
                .iter()
                .map(|&t| {
                    CheckEntry::at_most(
                        format!("{kind}: support radius excess over {a} + t, t={t}"),
                        "finite propagation speed",
                        waves::support_radius(&model, t, &h) - a - t,
                        cells,
                    )
                })
                .collect())
        }));
    }
    if cfg.model.is_none() || cfg.model == Some(ModelKind::Cosh) {
        jobs.push(job("L^p growth of cos(tA)", |cfg| {
            let model = HypergroupModel::new(ModelKind::Cosh);
            let ts = [0.5, 1.0, 2.0, 3.0, 4.0, 5.0];
            let mut r = CheckReport::new();
            for p in [2.0, 4.0, 8.0] {
                r.extend(waves::norm_growth_seeded(&model, p, &ts, 16, cfg.seed)?);
            }
            Ok(r)
        }));
        jobs.push(job("growth of W_n(cos(tA))", |cfg| {
            let model = HypergroupModel::new(ModelKind::Cosh);
            let mut r = CheckReport::new();
            for n in 1..=3 {
                r.extend(waves::wn_growth_with(
                    &model,
                    n,
                    2.0,
                    &[0.5, 1.0, 2.0, 4.0],
                    8,
                    cfg.seed,
                )?);
            }
            Ok(r)
        }));
    }
    if cfg.model.is_none() || cfg.model == Some(ModelKind::Sl2c) {
        jobs.push(job("fractional wave identity", |cfg| {
            let model = HypergroupModel::new(ModelKind::Sl2c);
            let grid = cfg.grid(&model)?;
            let f = SampledFunction::from_fn(grid, |x| (-2.0 * x * x).exp());
            let mut r = CheckReport::new();
            for t in [0.5, 1.0, 2.0] {
                r.extend(regrade(waves::frac_wave_check(t, &f)?, cfg.tol("wave.frac")));
            }
            Ok(r)
        }));
    }
}

fn context(cfg: &SuiteConfig, kind: ModelKind, p: f64) -> Result<OperatorContext> {
    let model = HypergroupModel::new(kind);
    let grid = cfg.grid(&model)?;
    discretize(&model, grid, p)
}

fn opcalc_jobs(cfg: &SuiteConfig, jobs: &mut Vec<Job>) {
    let before = jobs.len();
    for kind in cfg.models(&[ModelKind::Cosh, ModelKind::Sl2c]) {
        jobs.push(job(format!("{kind} diagonalization"), move |cfg| {
            let ctx = context(cfg, kind, 2.0)?;
            let f = SampledFunction::from_fn(ctx.grid.clone(), |x| (-x * x).exp());
            Ok(single(CheckEntry::residual(
                format!("{kind}: max relative |T_A(f) phi_l - f^(l) phi_l| on the interior"),
                "operator calculus on characters",
                opcalc::diagonalization_residual(&ctx, &f, &CHARACTER_LAMBDAS)?,
                cfg.tol("opcalc.diagonal"),
            )))
        }));
        jobs.push(job(format!("{kind} homomorphism"), move |cfg| {
            let ctx = context(cfg, kind, 2.0)?;
            let f = SampledFunction::from_fn(ctx.grid.clone(), |x| (-x * x).exp());
            let g = SampledFunction::from_fn(ctx.grid.clone(), |x| x * x * (-x * x).exp());
            Ok(single(CheckEntry::residual(
                format!("{kind}: relative |T_A(f*g) - T_A(f) T_A(g)| on the interior"),
                "operator calculus is multiplicative",
                opcalc::homomorphism_residual(&ctx, &f, &g)?,
                cfg.tol("opcalc.homomorphism"),
            )))
        }));
        jobs.push(job(format!("{kind} multiplier identity"), move |cfg| {
            let ctx = context(cfg, kind, 2.0)?;
            let mut r = CheckReport::new();
            for (pair, l) in [
                (FourierPair::gaussian(), 0.0),
                (FourierPair::gaussian(), 1.0),
                (opcalc::hermite_example(1), 1.0),
            ] {
                r.push(CheckEntry::residual(
                    format!("{kind}: multiplier identity for {} at l={l}", pair.name),
                    "functional calculus through the Fourier transform",
                    opcalc::multiplier_residual(&ctx, &pair, l)?,
                    cfg.tol("opcalc.multiplier"),
                ));
            }
            Ok(r)
        }));
        jobs.push(job(format!("{kind} Hermite example"), move |cfg| {
            let ctx = context(cfg, kind, 2.0)?;
            let pair = opcalc::hermite_example(2);
            let k = opcalc::lambda_fc(&ctx, &pair)?;
            let len = ctx.interior_len(k.reach);
            let errs = [0.5, 1.5].map(|l| {
                let phi: Vec<f64> = ctx
                    .grid
                    .nodes()
                    .iter()
                    .map(|&x| phi_closed(&ctx.model, Complex64::from(l), x).re)
                    .collect();
                let fl = (pair.f)(l);
                let diff: Vec<f64> = k.apply(&phi).iter().zip(&phi).map(|(a, b)| a - fl * b).collect();
                ctx.interior_norm(&diff, len) / ctx.interior_norm(&phi, len)
            });
            Ok(single(CheckEntry::residual(
                format!("{kind}: max relative |f(A) phi_l - f(l) phi_l| for {}", pair.name),
                "holomorphic calculus example",
                max_of(errs),
                cfg.tol("opcalc.hermite_eigen"),
            )))
        }));
        jobs.push(job(format!("{kind} Schur bound"), move |cfg| {
            let ctx = context(cfg, kind, 2.0)?;
            let f = SampledFunction::from_fn(ctx.grid.clone(), |x| (-x * x).exp());
            let k = opcalc::t_a(&ctx, &f)?;
            let bound = opcalc::schur_bound(&k);
            let mut r: CheckReport = [1.0, 2.0, 4.0, f64::INFINITY]
                .iter()
                .map(|&p| {
                    CheckEntry::at_most(
                        format!("{kind}: largest of 200 sampled norm ratios of T_A(f), p={p}"),
                        "Schur test",
                        opcalc::sampled_norm(&k, p, 200, cfg.seed),
                        bound * (1.0 + 1e-12),
                    )
                })
                .collect();
            r.push(CheckEntry::record(
                format!("{kind}: measured M0"),
                "uniform bound of phi_A",
                opcalc::measured_m0(&ctx.model),
            ));
            Ok(r)
        }));
    }
    if jobs.len() == before {
        return;
    }
    jobs.push(job("Hermite moments", |cfg| {
        let tol = cfg.tol("opcalc.moments");
        let f4 = opcalc::hermite_example(2).f;
        let moments =
            max_of((0..4).map(|j| crate::quadrature::integrate(|x| x.powi(j) * f4(x), -12.0, 12.0, 48, 16).abs()));
        let pairs = max_of((0..3).flat_map(|nu| {
            let pair = opcalc::hermite_example(nu);
            [0.0, 0.7, 2.5].map(|xi| (opcalc::fourier_cosine_quadrature(&*pair.f, xi, 12.0) - (pair.ff)(xi)).abs())
        }));
        Ok([
            CheckEntry::residual(
                "max |moment j| of H_4(z) exp(-z^2), j < 4",
                "holomorphic calculus example",
                moments,
                tol,
            ),
            CheckEntry::residual(
                "max |quadrature - closed Fourier transform| of H_2n exp(-z^2)",
                "holomorphic calculus example",
                pairs,
                tol,
            ),
        ]
        .into_iter()
        .collect())
    }));
}

fn multiplier_jobs(cfg: &SuiteConfig, jobs: &mut Vec<Job>) {
    jobs.push(job("s-variation", |cfg| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let samples: Vec<VariationSample> = (0..100)
            .map(|_| {
                let n = rng.gen_range(2..=12);
                let values = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                VariationSample::new((0..n).map(|i| i as f64).collect(), values)
            })
            .collect::<Result<_>>()?;
        let mut worst = 0.0f64;
        let mut monotone = true;
        for s in &samples {
            let mut prev = f64::INFINITY;
            for e in [1.0, 1.5, 2.0, 3.0, 4.0] {
                let (dp, brute) = (s_variation(s, e)?, s_variation_brute(s, e)?);
                worst = worst.max((dp - brute).abs() / brute.max(f64::MIN_POSITIVE));
                monotone &= dp <= prev * (1.0 + 1e-12);
                prev = dp;
            }
        }
        Ok([
            CheckEntry::residual(
                "max relative |dynamic program - enumeration| over 100 samples",
                "s-variation",
                worst,
                1e-12,
            ),
            CheckEntry::flag("var_s nonincreasing in s", "s-variation", monotone, worst),
        ]
        .into_iter()
        .collect())
    }));
    jobs.push(job("Marcinkiewicz norm", |_| {
        let h = |l: f64| if l == 0.0 { 8.0 / PI } else { 8.0 * l / (PI * l).sinh() };
        let n = multipliers::marcinkiewicz_norm_refined(&h, 2.0, multipliers::DEFAULT_J_RANGE)?;
        Ok(single(CheckEntry::record(
            "M_2 norm of 8 l cosech(pi l)",
            "Marcinkiewicz multiplier norm",
            n.ms_norm,
        )))
    }));
    for kind in cfg.models(&[ModelKind::Cosh, ModelKind::Sl2c]) {
        let ps: &[f64] = if kind == ModelKind::Cosh { &[2.0, 4.0] } else { &[2.0] };
        for &p in ps {
            jobs.push(job(format!("{kind} transferred calculus, p={p}"), move |cfg| {
                let ctx = context(cfg, kind, p)?;
                let ghat = SpectralFunction::from_fn(&ctx.model, &LambdaGrid::default(), |l| {
                    (-2.0 * (l - 1.0).powi(2)).exp() + (-2.0 * (l + 1.0).powi(2)).exp()
                });
                let r = multipliers::transfer_apply(&ctx, &ghat, 2.0 * ctx.model.omega0(), 2.0)?;
                let mut out = CheckReport::new();
                for (i, mut c) in r.checks.into_iter().enumerate() {
                    c.name = format!("{kind}, p={p}: {}", c.name);
                    out.push(if i < 2 {
                        regrade(single(c), cfg.tol("multipliers.transfer")).checks.remove(0)
                    } else {
                        c
                    });
                }
                Ok(out)
            }));
        }
    }
}

/// Runs the configured suite; numerical failures inside a check become failing entries.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut jobs = Vec::new();
    for part in cfg.suite.parts() {
        match part {
            Suite::Characters => character_jobs(cfg, &mut jobs),
            Suite::Transforms => transform_jobs(cfg, &mut jobs),
            Suite::Fracint => fracint_jobs(&mut jobs),
            Suite::Waves => wave_jobs(cfg, &mut jobs),
            Suite::Opcalc => opcalc_jobs(cfg, &mut jobs),
            Suite::Multipliers => multiplier_jobs(cfg, &mut jobs),
            Suite::All => unreachable!("expanded by parts"),
        }
    }
    if jobs.is_empty() {
        return Err(Error::Config(format!(
            "suite {} has no checks for model {}",
            cfg.suite,
            cfg.model_tag()
        )));
    }
    let reports: Vec<CheckReport> = jobs
        .par_iter()
        .map(|j| {
            (j.run)(cfg).unwrap_or_else(|e| {
                single(CheckEntry::flag(
                    format!("{}: {e}", j.label),
                    "numerical failure",
                    false,
                    f64::NAN,
                ))
            })
        })
        .collect();
    Ok(SuiteReport {
        suite: cfg.suite.to_string(),
        model: cfg.model_tag().to_string(),
        seed: cfg.seed,
        grid: GridInfo {
            x_max: cfg.x_max,
            n: cfg.nodes(),
        },
        checks: reports.into_iter().flat_map(|r| r.checks).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.apply("wave.eigen=1e-4").unwrap();
        assert_eq!(t.get("wave.eigen"), 1e-4);
        assert!(t.apply("nope=1").is_err());
        assert!(t.apply("wave.eigen").is_err());
        assert!(t.apply("wave.eigen=-1").is_err());
    }

    #[test]
    fn suite_names_round_trip() {
        for n in Suite::NAMES {
            assert_eq!(n.parse::<Suite>().unwrap().as_str(), n);
        }
        assert!("foo".parse::<Suite>().is_err());
    }

    #[test]
    fn nodes_round_up_to_panels() {
        let mut c = SuiteConfig::default();
        c.set_nodes(500).unwrap();
        assert_eq!(c.nodes(), 512);
        c.set_nodes(1).unwrap();
        assert_eq!(c.nodes(), 16);
    }

    #[test]
    fn regrade_tightens() {
        let r = single(CheckEntry::residual("r", "x", 1e-5, 1e-4));
        assert!(!regrade(r, 1e-6).all_pass());
    }

    #[test]
    fn mehler_has_no_opcalc_suite() {
        let cfg = SuiteConfig::new(Suite::Opcalc).with_model(ModelKind::Mehler);
        assert!(matches!(run_suite(&cfg), Err(Error::Config(_))));
    }
}
