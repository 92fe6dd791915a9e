//! Tabulated curves for CSV export.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::characters::{phi_closed, phi_ode};
use crate::error::{domain, Error, Result};
use crate::models::{Grid, HypergroupModel, ModelKind, SampledFunction};
use crate::transforms::{forward, pair_formula, sech5_transform};
use crate::waves::{norm_growth_curve, smooth_bump, WaveState};

/// A header plus numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Curve {
    fn new(header: &[&str], rows: Vec<Vec<f64>>) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        }
    }

    pub fn to_csv(&self) -> String {
        let header: Vec<&str> = self.header.iter().map(String::as_str).collect();
        crate::report::csv_string(&header, &self.rows)
    }
}

/// `n` equally spaced points on [a, b].
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// (x, φ by ODE, φ closed form).
pub fn character_curve(model: &HypergroupModel, lambda: f64, xs: &[f64]) -> Result<Curve> {
    let lam = Complex64::from(lambda);
    let ode = phi_ode(&model.profile, lam, xs)?;
    let rows = ode
        .iter()
        .map(|e| vec![e.x, e.value.re, phi_closed(model, lam, e.x).re])
        .collect();
    Ok(Curve::new(&["x", "phi_ode", "phi_closed"], rows))
}

/// Radial test functions with known transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Gauss,
    Sech2,
    Sech3,
    Sech5,
}

impl TestFunction {
    pub const NAMES: [&'static str; 4] = ["gauss", "sech2", "sech3", "sech5"];

    pub fn eval(self, x: f64) -> f64 {
        let s = 1.0 / (x / 2.0).cosh();
        match self {
            TestFunction::Gauss => (-x * x).exp(),
            TestFunction::Sech2 => s * s,
            TestFunction::Sech3 => s.powi(3),
            TestFunction::Sech5 => s.powi(5),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(Self::NAMES[i])
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss" => Ok(TestFunction::Gauss),
            "sech2" => Ok(TestFunction::Sech2),
            "sech3" => Ok(TestFunction::Sech3),
            "sech5" => Ok(TestFunction::Sech5),
            other => Err(Error::Config(format!(
                "unknown test function '{other}' (expected one of {})",
                Self::NAMES.join(", ")
            ))),
        }
    }
}

/// Width of the x-grid used for the slowly decaying sech powers.
const SECH_X_MAX: f64 = 60.0;

/// (λ, f̂) plus the pair-table reference columns that apply.
pub fn transform_curve(model: &HypergroupModel, f: TestFunction, lambdas: &[f64]) -> Result<Curve> {
    let x_max = if f == TestFunction::Gauss { 12.0 } else { SECH_X_MAX };
    let panels = (x_max / 0.5).ceil() as usize;
    let grid = Arc::new(Grid::new(&model.profile, x_max, panels, 16)?);
    let sampled = SampledFunction::from_fn(grid, |x| f.eval(x));
    let fhat = forward(model, &sampled, lambdas)?;
    let mehler = model.kind == ModelKind::Mehler;
    let mut rows = Vec::with_capacity(lambdas.len());
    for (&l, v) in lambdas.iter().zip(&fhat.values) {
        let mut row = vec![l, v.re];
        match f {
            TestFunction::Sech3 if mehler => row.extend(pair_formula(3, l)),
            TestFunction::Sech5 if mehler => {
                row.extend(pair_formula(5, l));
                row.push(sech5_transform(l));
            }
            _ => {}
        }
        rows.push(row);
    }
    let header: &[&str] = match f {
        TestFunction::Sech3 if mehler => &["lambda", "transform", "pair_formula"],
        TestFunction::Sech5 if mehler => &["lambda", "transform", "pair_formula", "corrected_formula"],
        _ => &["lambda", "transform"],
    };
    Ok(Curve::new(header, rows))
}

/// (x, u) snapshot of cos(tA) applied to a bump of radius 2.
pub fn wave_curve(model: &HypergroupModel, grid: Arc<Grid>, t: f64) -> Result<Curve> {
    let h = SampledFunction::from_fn(grid, |x| smooth_bump(x / 2.0));
    Ok(Curve::new(&["x", "u"], WaveState::evolve(model, &h, t)?.rows()))
}

/// (t, worst sampled ‖cos(tA)‖_p ratio, bound).
pub fn growth_curve(model: &HypergroupModel, p: f64, times: &[f64], trials: usize, seed: u64) -> Result<Curve> {
    if trials == 0 {
        return Err(domain("growth curve needs at least one trial"));
    }
    let curve = norm_growth_curve(model, p, times, trials, seed)?;
    Ok(Curve::new(
        &["t", "ratio", "bound"],
        curve.rows.iter().map(|r| r.to_vec()).collect(),
    ))
}
