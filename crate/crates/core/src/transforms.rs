//! Generalized Fourier transform, Plancherel inversion, convolution, the Mehler–Fock pair
//! table and probes of Venturi regions.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::{character_table, phi_closed};
use crate::error::{domain, Error, Result};
use crate::models::{Grid, HypergroupModel, ModelKind, SampledFunction};
use crate::quadrature::gauss_legendre;
use crate::report::{CheckEntry, CheckReport};
use crate::special::erfc;

pub const TAIL_LIMIT: f64 = 1e-10;
pub const DEFAULT_LAMBDA_MAX: f64 = 12.0;
pub const DEFAULT_LAMBDA_NODES: usize = 600;

/// Uniform trapezoid nodes on [0, λMax].
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LambdaGrid {
    pub fn uniform(lambda_max: f64, n: usize) -> Self {
        let h = lambda_max / (n - 1) as f64;
        let nodes = (0..n).map(|k| k as f64 * h).collect();
        let weights = (0..n).map(|k| if k == 0 || k == n - 1 { h / 2.0 } else { h }).collect();
        Self { nodes, weights }
    }
}

impl Default for LambdaGrid {
    fn default() -> Self {
        Self::uniform(DEFAULT_LAMBDA_MAX, DEFAULT_LAMBDA_NODES)
    }
}

/// Values of f̂ on a λ-grid with trapezoid and Plancherel weights.
#[derive(Debug, Clone)]
pub struct SpectralFunction {
    pub lambda_nodes: Vec<f64>,
    pub values: Vec<Complex64>,
    pub quad_weights: Vec<f64>,
    pub plancherel_weights: Vec<f64>,
}

impl SpectralFunction {
    pub fn from_fn(model: &HypergroupModel, grid: &LambdaGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_values(model, grid, grid.nodes.iter().map(|&l| Complex64::from(f(l))).collect())
    }

    pub fn from_values(model: &HypergroupModel, grid: &LambdaGrid, values: Vec<Complex64>) -> Self {
        let plancherel_weights = grid
            .nodes
            .iter()
            .zip(&grid.weights)
            .map(|(&l, &w)| model.plancherel(l) * w)
            .collect();
        Self {
            lambda_nodes: grid.nodes.clone(),
            values,
            quad_weights: grid.weights.clone(),
            plancherel_weights,
        }
    }

    /// Pointwise product on a shared λ-grid.
    pub fn product(&self, other: &SpectralFunction) -> SpectralFunction {
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            *a *= b;
        }
        out
    }

    /// ∫ |f̂|² dπ₀
    pub fn energy(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.plancherel_weights)
            .map(|(v, w)| v.norm_sqr() * w)
            .sum()
    }
}

/// φ₀ at the last grid node times |f m| there: the largest neglected integrand.
pub(crate) fn physical_tail(model: &HypergroupModel, f: &SampledFunction) -> f64 {
    let grid = &f.grid;
    let k = grid.len() - 1;
    let x = grid.nodes()[k];
    let phi0 = phi_closed(model, Complex64::from(0.0), x).re;
    (f.values[k] * model.m(x) * phi0).abs()
}

pub fn forward(model: &HypergroupModel, f: &SampledFunction, lambda_nodes: &[f64]) -> Result<SpectralFunction> {
    let tail = physical_tail(model, f);
    if !(tail < TAIL_LIMIT) {
        return Err(Error::Truncation {
            what: format!("{} forward transform: integrand at xMax", model.kind),
            measured: tail,
            limit: TAIL_LIMIT,
        });
    }
    let grid = &f.grid;
    let fm: Vec<f64> = f
        .values
        .iter()
        .zip(grid.measure_weights())
        .map(|(v, w)| v * w)
        .collect();
    let scale = fm.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let active: Vec<usize> = (0..fm.len())
        .filter(|&j| fm[j].abs() > 1e-300 && fm[j].abs() >= 1e-30 * scale)
        .collect();
    let xs: Vec<f64> = active.iter().map(|&j| grid.nodes()[j]).collect();
    let table = character_table(model, lambda_nodes, &xs);
    let values = table
        .iter()
        .map(|row| Complex64::from(row.iter().zip(&active).map(|(p, &j)| p * fm[j]).sum::<f64>()))
        .collect();
    let weights = trapezoid(lambda_nodes);
    let plancherel_weights = lambda_nodes
        .iter()
        .zip(&weights)
        .map(|(&l, &w)| model.plancherel(l) * w)
        .collect();
    Ok(SpectralFunction {
        lambda_nodes: lambda_nodes.to_vec(),
        values,
        quad_weights: weights,
        plancherel_weights,
    })
}

fn trapezoid(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    (0..n)
        .map(|k| {
            let left = if k > 0 { nodes[k] - nodes[k - 1] } else { 0.0 };
            let right = if k + 1 < n { nodes[k + 1] - nodes[k] } else { 0.0 };
            (left + right) / 2.0
        })
        .collect()
}

/// f(x) = ∫ f̂(λ) φ_λ(x) π₀(dλ) at arbitrary radii.
pub fn inverse_at(model: &HypergroupModel, fhat: &SpectralFunction, xs: &[f64]) -> Result<Vec<f64>> {
    let k = fhat.lambda_nodes.len() - 1;
    let tail = fhat.values[k].norm() * model.plancherel(fhat.lambda_nodes[k]);
    if !(tail < TAIL_LIMIT) {
        return Err(Error::Truncation {
            what: format!("{} inverse transform: spectral integrand at lambda max", model.kind),
            measured: tail,
            limit: TAIL_LIMIT,
        });
    }
    // recompute the weights so a calibrated model takes effect
    let pw: Vec<f64> = fhat
        .lambda_nodes
        .iter()
        .zip(&fhat.quad_weights)
        .map(|(&l, &w)| model.plancherel(l) * w)
        .collect();
    let coeff: Vec<f64> = fhat.values.iter().zip(&pw).map(|(v, w)| v.re * w).collect();
    let table = character_table(model, &fhat.lambda_nodes, xs);
    Ok((0..xs.len())
        .map(|j| table.iter().zip(&coeff).map(|(row, c)| row[j] * c).sum())
        .collect())
}

pub fn inverse(model: &HypergroupModel, fhat: &SpectralFunction, grid: Arc<Grid>) -> Result<SampledFunction> {
    let values = inverse_at(model, fhat, grid.nodes())?;
    SampledFunction::new(grid, values)
}

/// Relative L²(m) distance between two samples on the same grid.
pub fn relative_l2(a: &SampledFunction, b: &SampledFunction) -> f64 {
    let w = a.grid.measure_weights();
    let num: f64 = a
        .values
        .iter()
        .zip(&b.values)
        .zip(w)
        .map(|((x, y), w)| (x - y).powi(2) * w)
        .sum();
    let den: f64 = a.values.iter().zip(w).map(|(x, w)| x * x * w).sum();
    (num / den).sqrt()
}

/// Plancherel constant c such that c · (nominal density) inverts `forward`,
/// fitted by least squares on a Gaussian round trip.
pub fn calibrate(model: &HypergroupModel) -> Result<f64> {
    let raw = model.clone().with_plancherel_scale(1.0);
    let grid = Arc::new(Grid::for_model(&raw, 10.0)?);
    let f = SampledFunction::from_fn(grid.clone(), |x| (-x * x).exp());
    let lg = LambdaGrid::default();
    let fhat = forward(&raw, &f, &lg.nodes)?;
    let back = inverse(&raw, &fhat, grid.clone())?;
    let w = grid.measure_weights();
    let (mut fb, mut bb) = (0.0, 0.0);
    for ((a, b), w) in f.values.iter().zip(&back.values).zip(w) {
        fb += a * b * w;
        bb += b * b * w;
    }
    Ok(fb / bb)
}

/// The model with its Plancherel density calibrated by `calibrate`.
pub fn calibrated(model: &HypergroupModel) -> Result<HypergroupModel> {
    Ok(model.clone().with_plancherel_scale(calibrate(model)?))
}

/// Integrate over [0, xMax] on the grid's panels, split at extra breakpoints.
fn split_quadrature(grid: &Grid, breaks: &[f64]) -> Vec<(f64, f64)> {
    let h = grid.panel_width();
    let n = (grid.x_max() / h).round() as usize;
    let mut edges: Vec<f64> = (0..=n).map(|k| k as f64 * h).collect();
    edges.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < grid.x_max()));
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let rule = gauss_legendre(grid.order());
    edges
        .windows(2)
        .flat_map(|w| rule.on(w[0], w[1]).collect::<Vec<_>>())
        .collect()
}

/// Hypergroup convolution (f∗g)(z) = ∫ f(x) g(x∗z) m(x) dx.
pub fn convolve(model: &HypergroupModel, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    let grid = f.grid.clone();
    match model.kind {
        ModelKind::Mehler => {
            let lg = LambdaGrid::default();
            let fh = forward(model, f, &lg.nodes)?;
            let gh = forward(model, g, &lg.nodes)?;
            inverse(model, &fh.product(&gh), grid)
        }
        ModelKind::Cosh => {
            let tg = |s: f64| {
                let s = s.abs();
                g.at(s) * s.cosh()
            };
            let values = grid
                .nodes()
                .par_iter()
                .map(|&z| {
                    split_quadrature(&grid, &[z, grid.x_max() - z])
                        .into_iter()
                        .map(|(x, w)| {
                            let gx = (tg(x - z) + tg(x + z)) / (2.0 * x.cosh() * z.cosh());
                            f.at(x) * gx * model.m(x) * w
                        })
                        .sum()
                })
                .collect();
            SampledFunction::new(grid, values)
        }
        ModelKind::Sl2c => {
            let anti = SinhAntiderivative::new(g);
            let values = grid
                .nodes()
                .par_iter()
                .map(|&z| {
                    split_quadrature(&grid, &[z, grid.x_max() - z])
                        .into_iter()
                        .map(|(x, w)| {
                            let gx = (anti.at(x + z) - anti.at((x - z).abs())) / (2.0 * x.sinh() * z.sinh());
                            f.at(x) * gx * model.m(x) * w
                        })
                        .sum()
                })
                .collect();
            SampledFunction::new(grid, values)
        }
    }
}

/// s ↦ ∫₀^s g(t) sinh t dt for a sampled g, held as nodal values on g's grid.
pub(crate) struct SinhAntiderivative<'a> {
    grid: &'a Grid,
    values: Vec<f64>,
    total: f64,
}

impl<'a> SinhAntiderivative<'a> {
    pub(crate) fn new(g: &'a SampledFunction) -> Self {
        let grid = &*g.grid;
        let h = grid.panel_width();
        let rule = gauss_legendre(grid.order());
        let integrand = |t: f64| g.at(t) * t.sinh();
        let mut values = Vec::with_capacity(grid.len());
        let mut edge = 0.0;
        for (p, chunk) in grid.nodes().chunks(grid.order()).enumerate() {
            let lo = p as f64 * h;
            for &x in chunk {
                values.push(edge + rule.on(lo, x).map(|(t, w)| integrand(t) * w).sum::<f64>());
            }
            edge += rule.on(lo, lo + h).map(|(t, w)| integrand(t) * w).sum::<f64>();
        }
        Self {
            grid,
            values,
            total: edge,
        }
    }

    pub(crate) fn at(&self, s: f64) -> f64 {
        if s >= self.grid.x_max() {
            self.total
        } else {
            self.grid.interpolate(&self.values, s)
        }
    }
}

/// |∫ φ_λ d(δ_x ∗ δ_y) - φ_λ(x) φ_λ(y)|
pub fn product_formula_residual(model: &HypergroupModel, lambda: Complex64, x: f64, y: f64) -> Result<f64> {
    if lambda.im.abs() > model.omega0() + 1e-12 {
        return Err(domain(format!(
            "|Im λ| = {} exceeds omega0 = {}",
            lambda.im.abs(),
            model.omega0()
        )));
    }
    let phi = |t: f64| phi_closed(model, lambda, t);
    let target = phi(x) * phi(y);
    let lhs = match model.kind {
        ModelKind::Cosh => {
            let (s, d) = (x + y, (x - y).abs());
            (phi(s) * s.cosh() + phi(d) * d.cosh()) / (2.0 * x.cosh() * y.cosh())
        }
        ModelKind::Sl2c => {
            let (lo, hi) = ((x - y).abs(), x + y);
            if hi == 0.0 {
                Complex64::from(1.0)
            } else {
                let panels = ((lambda.norm() + 1.0) * (hi - lo) / 2.0).ceil() as usize + 1;
                let rule = gauss_legendre(16);
                let h = (hi - lo) / panels as f64;
                let mut acc = Complex64::default();
                for p in 0..panels {
                    let a = lo + p as f64 * h;
                    for (t, w) in rule.on(a, a + h) {
                        acc += phi(t) * (t.sinh() * w);
                    }
                }
                acc / (2.0 * x.sinh() * y.sinh())
            }
        }
        ModelKind::Mehler => mehler_spectral_product(model, lambda, x, y)?,
    };
    Ok((lhs - target).norm())
}

/// φ_λ(x∗y) for the Mehler model through the spectral side: cut φ_λ off smoothly beyond
/// x+y, transform, and resynthesize the product φ_μ(x)φ_μ(y).
fn mehler_spectral_product(model: &HypergroupModel, lambda: Complex64, x: f64, y: f64) -> Result<Complex64> {
    let edge = x + y + 5.0;
    let x_max = edge + 12.0;
    let grid = Arc::new(Grid::new(&model.profile, x_max, (x_max / 0.5).ceil() as usize, 16)?);
    let cut = |t: f64| 0.5 * erfc(t - edge);
    let lg = LambdaGrid::default();
    let mut out = Complex64::default();
    // real and imaginary parts of φ_λ are transformed separately
    for part in 0..2 {
        let g = SampledFunction::from_fn(grid.clone(), |t| {
            let v = phi_closed(model, lambda, t);
            (if part == 0 { v.re } else { v.im }) * cut(t)
        });
        if g.values.iter().all(|&v| v == 0.0) {
            continue;
        }
        let gh = forward(model, &g, &lg.nodes)?;
        let table = character_table(model, &lg.nodes, &[x, y]);
        let v: f64 = gh
            .values
            .iter()
            .zip(&gh.plancherel_weights)
            .zip(&table)
            .map(|((g, w), row)| g.re * w * row[0] * row[1])
            .sum();
        out += if part == 0 {
            Complex64::from(v)
        } else {
            Complex64::new(0.0, v)
        };
    }
    Ok(out)
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn cosech(x: f64) -> f64 {
    1.0 / x.sinh()
}

/// Closed forms claimed for the Mehler transforms of sech^k(x/2).
pub fn pair_formula(power: u32, lambda: f64) -> Option<f64> {
    match power {
        3 => Some(8.0 * lambda * cosech(PI * lambda)),
        5 => Some(16.0 / 3.0 * lambda.powi(3) * cosech(PI * lambda)),
        _ => None,
    }
}

/// The Mehler transform of sech⁵(x/2) as it actually evaluates.
pub fn sech5_transform(lambda: f64) -> f64 {
    32.0 / 9.0 * lambda * (lambda * lambda + 1.0) * cosech(PI * lambda)
}

pub const PAIR_LAMBDAS: [f64; 16] = [
    0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5, 3.75, 4.0,
];

/// Mehler transforms of sech^power(x/2) at the given λ.
pub fn sech_power_transform(power: u32, lambdas: &[f64]) -> Result<Vec<f64>> {
    let model = HypergroupModel::new(ModelKind::Mehler);
    let grid = Arc::new(Grid::new(&model.profile, 60.0, 120, 16)?);
    let f = SampledFunction::from_fn(grid, |x| sech(x / 2.0).powi(power as i32));
    Ok(forward(&model, &f, lambdas)?.values.iter().map(|v| v.re).collect())
}

fn max_relative_error(got: &[f64], want: impl Iterator<Item = f64>) -> f64 {
    got.iter()
        .zip(want)
        .map(|(g, w)| ((g - w) / w).abs())
        .fold(0.0, f64::max)
}

/// Compare numerical Mehler transforms with the sech-power pair formulas.
pub fn pair_table() -> Result<CheckReport> {
    let mut r = CheckReport::new();
    let ls = &PAIR_LAMBDAS;
    let row2 = sech_power_transform(3, ls)?;
    r.push(CheckEntry::residual(
        "pair sech^3(x/2) -> 8 l cosech(pi l), max relative error",
        "Mehler-Fock pair table, sech^3 row",
        max_relative_error(&row2, ls.iter().map(|&l| pair_formula(3, l).unwrap())),
        1e-3,
    ));
    let row3 = sech_power_transform(5, ls)?;
    r.push(CheckEntry::residual(
        "pair sech^5(x/2) -> (16/3) l^3 cosech(pi l), max relative error",
        "Mehler-Fock pair table, sech^5 row",
        max_relative_error(&row3, ls.iter().map(|&l| pair_formula(5, l).unwrap())),
        1e-3,
    ));
    r.push(CheckEntry::residual(
        "pair sech^5(x/2) -> (32/9) l (l^2+1) cosech(pi l), max relative error",
        "Mehler-Fock pair table, sech^5 row (corrected)",
        max_relative_error(&row3, ls.iter().map(|&l| sech5_transform(l))),
        1e-3,
    ));
    let even = sech_power_transform(2, ls)?;
    let ratios: Vec<f64> = even.iter().zip(ls).map(|(v, &l)| v / sech(PI * l)).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|q| ((q - mean) / mean).abs()).fold(0.0, f64::max);
    r.push(CheckEntry::residual(
        "pair sech^2(x/2) / sech(pi l) constant, max relative spread",
        "Mehler-Fock pair table, even power",
        spread,
        1e-3,
    ));
    r.push(CheckEntry::record(
        "pair sech^2(x/2) constant",
        "Mehler-Fock pair table, even power",
        mean,
    ));
    Ok(r)
}

/// Union of the strip |Im z| < ω and the double sector of half-angle θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VenturiRegion {
    pub theta: f64,
    pub omega: f64,
}

impl VenturiRegion {
    pub fn new(theta: f64, omega: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI) || !(omega > 0.0) {
            return Err(domain(format!(
                "Venturi region needs 0 < theta < pi and omega > 0, got ({theta}, {omega})"
            )));
        }
        Ok(Self { theta, omega })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        venturi_contains(z, self)
    }
}

pub fn venturi_contains(z: Complex64, region: &VenturiRegion) -> bool {
    if z.im.abs() < region.omega {
        return true;
    }
    z != Complex64::default() && (z.arg().abs() < region.theta || (-z).arg().abs() < region.theta)
}

pub const PROBE_OFFSET: f64 = 1e-2;
pub const PROBE_RADIUS: f64 = 50.0;
pub const POLE_EXCLUSION: f64 = 1e-3;
pub const BLOW_UP: f64 = 1e6;

/// Points at distance `offset` inside the boundary of the region, |z| ≤ radius.
fn probe_points(region: &VenturiRegion, offset: f64, radius: f64) -> Vec<Complex64> {
    let mut upper = Vec::new();
    let step = 1e-3;
    let th = region.theta.min(PI / 2.0);
    // strip edge, up to where the sector boundary takes over
    let corner = if th < PI / 2.0 { region.omega / th.tan() } else { 0.0 };
    let y = region.omega - offset;
    let n = (corner / step).ceil() as usize;
    for k in 0..=n {
        let x = corner * k as f64 / n.max(1) as f64;
        upper.push(Complex64::new(x, y));
    }
    // sector ray, pulled inward by the offset
    let r0 = (corner * corner + region.omega * region.omega).sqrt();
    let mut r = r0;
    while r <= radius {
        let ang = th - (offset / r).min(th);
        let z = Complex64::from_polar(r, ang);
        if z.im >= y {
            upper.push(z);
        }
        r += step * (1.0 + r / 10.0);
    }
    // mirror into the other quadrants
    let mut pts = Vec::with_capacity(4 * upper.len() + 2001);
    for z in upper {
        pts.push(z);
        pts.push(z.conj());
        pts.push(-z);
        pts.push(-z.conj());
    }
    let m = 2000;
    pts.extend((0..=m).map(|k| Complex64::from(-radius + 2.0 * radius * k as f64 / m as f64)));
    pts
}

/// Suprema of |f| and |z^k f| near the boundary of a Venturi region, with pole detection.
pub fn venturi_norm_probe(f: &dyn Fn(Complex64) -> Complex64, region: &VenturiRegion, k: u32) -> CheckReport {
    let mut sup = 0.0f64;
    let mut sup_k = 0.0f64;
    let mut nearest_pole = f64::INFINITY;
    let h = 1e-6;
    for z in probe_points(region, PROBE_OFFSET, PROBE_RADIUS) {
        let mut v = f(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            // removable singularities such as z/sinh z at 0
            v = f(z + Complex64::new(1e-7, 1e-7));
        }
        let dv = (f(z + h) - f(z - h)) / (2.0 * h);
        // a simple pole at p gives f/f' = p - z
        let dist = if dv.norm() > 0.0 && v.norm() > 1.0 {
            (v / dv).norm()
        } else {
            f64::INFINITY
        };
        nearest_pole = nearest_pole.min(dist);
        if dist < POLE_EXCLUSION {
            continue;
        }
        let a = v.norm();
        if a.is_finite() {
            sup = sup.max(a);
            sup_k = sup_k.max(a * z.norm().powi(k as i32));
        } else {
            sup = f64::INFINITY;
        }
    }
    let blow_up = sup > BLOW_UP || nearest_pole < 2.0 * PROBE_OFFSET;
    let mut r = CheckReport::new();
    r.push(CheckEntry::record("probe sup |f|", "Venturi region norm", sup));
    r.push(CheckEntry::record(
        format!("probe sup |z^{k} f|"),
        "Venturi region norm",
        sup_k,
    ));
    r.push(CheckEntry::record(
        "probe nearest pole distance",
        "Venturi region norm",
        nearest_pole.min(f64::MAX),
    ));
    r.push(CheckEntry::flag(
        "probe bounded (no blow-up)",
        "Venturi region norm",
        !blow_up,
        sup,
    ));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_model;

    fn gauss_grid(name: &str, x_max: f64) -> (HypergroupModel, Arc<Grid>) {
        let m = build_model(name).unwrap();
        let g = Arc::new(Grid::for_model(&m, x_max).unwrap());
        (m, g)
    }

    #[test]
    fn zero_maps_to_zero() {
        let (m, g) = gauss_grid("cosh", 10.0);
        let lg = LambdaGrid::default();
        let fh = forward(&m, &SampledFunction::zeros(g.clone()), &lg.nodes).unwrap();
        assert!(fh.values.iter().all(|v| v.norm() == 0.0));
        let back = inverse(&m, &fh, g).unwrap();
        assert!(back.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tail_violation_is_reported() {
        let (m, g) = gauss_grid("mehler", 10.0);
        let f = SampledFunction::from_fn(g, |_| 1.0);
        assert!(matches!(forward(&m, &f, &[1.0]), Err(Error::Truncation { .. })));
    }

    #[test]
    fn cosh_transform_of_sech_squared() {
        // ∫ sech²x cos(λx)/cosh x cosh²x dx = (π/2) sech(πλ/2)
        let (m, g) = gauss_grid("cosh", 30.0);
        let f = SampledFunction::from_fn(g, |x| sech(x).powi(2));
        let fh = forward(&m, &f, &[0.0, 0.5, 2.0]).unwrap();
        for (l, v) in fh.lambda_nodes.iter().zip(&fh.values) {
            let exact = PI / 2.0 * sech(PI * l / 2.0);
            assert!((v.re - exact).abs() < 1e-9, "λ={l}");
        }
    }

    #[test]
    fn round_trips() {
        for name in ["cosh", "mehler"] {
            let (m, g) = gauss_grid(name, 10.0);
            let f = SampledFunction::from_fn(g.clone(), |x| (-x * x).exp() * x * x);
            let lg = LambdaGrid::default();
            let back = inverse(&m, &forward(&m, &f, &lg.nodes).unwrap(), g).unwrap();
            assert!(relative_l2(&f, &back) < 1e-4, "{name}");
        }
    }

    #[test]
    fn calibration_constants() {
        for (name, expect) in [("cosh", 1.0), ("mehler", 1.0), ("sl2c", 2.0)] {
            let c = calibrate(&build_model(name).unwrap()).unwrap();
            assert!((c - expect).abs() < 1e-6, "{name}: {c}");
        }
    }

    #[test]
    fn product_formula_cosh_and_sl2c() {
        for name in ["cosh", "sl2c"] {
            let m = build_model(name).unwrap();
            let r = product_formula_residual(&m, Complex64::from(2.0), 1.0, 1.5).unwrap();
            assert!(r < 1e-10, "{name}: {r}");
        }
        let sl2c = build_model("sl2c").unwrap();
        let r = product_formula_residual(&sl2c, Complex64::i(), 0.7, 1.2).unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn sl2c_product_against_antiderivative() {
        // ∫_{|x-y|}^{x+y} sin(λt) dt / (2λ sinh x sinh y)
        let (l, x, y) = (1.0f64, 0.7f64, 1.2f64);
        let exact = ((l * (x - y)).cos() - (l * (x + y)).cos()) / (2.0 * l * l * x.sinh() * y.sinh());
        let m = build_model("sl2c").unwrap();
        let phi = |t: f64| phi_closed(&m, Complex64::from(l), t).re;
        assert!((exact - phi(x) * phi(y)).abs() < 1e-14);
        assert!(product_formula_residual(&m, Complex64::from(l), x, y).unwrap() < 1e-8);
    }

    #[test]
    fn venturi_membership() {
        let r = VenturiRegion::new(PI / 4.0, 1.0).unwrap();
        assert!(r.contains(Complex64::new(0.0, 0.5)));
        assert!(r.contains(Complex64::new(10.0, 9.0)));
        assert!(!r.contains(Complex64::new(1.0, 5.0)));
        assert!(!r.contains(Complex64::new(0.0, 1.0)));
    }

    #[test]
    fn probe_of_constant_is_one() {
        let r = venturi_norm_probe(&|_| Complex64::from(1.0), &VenturiRegion::new(0.5, 0.7).unwrap(), 0);
        assert_eq!(r.get("probe sup |f|").unwrap().measured, Some(1.0));
        assert!(r.get("probe bounded (no blow-up)").unwrap().pass);
    }

    #[test]
    fn probe_flags_the_pole_as_omega_approaches_one() {
        let f = |z: Complex64| z * 8.0 / (z * PI).sinh();
        let ok = venturi_norm_probe(&f, &VenturiRegion::new(PI / 4.0, 0.9).unwrap(), 0);
        assert!(ok.get("probe bounded (no blow-up)").unwrap().pass);
        let bad = venturi_norm_probe(&f, &VenturiRegion::new(PI / 4.0, 0.999).unwrap(), 0);
        assert!(!bad.get("probe bounded (no blow-up)").unwrap().pass);
        let sup = bad.get("probe sup |f|").unwrap().measured.unwrap();
        // simple pole of residue 8/π at i, seen from distance 1 - ω + offset
        let predicted = 8.0 / PI / (1.0 - 0.999 + PROBE_OFFSET);
        assert!((sup / predicted - 1.0).abs() < 0.05, "sup={sup} predicted={predicted}");
    }

    fn gaussian_pair(m: &HypergroupModel) -> (SampledFunction, SampledFunction) {
        let g = Arc::new(Grid::for_model(m, 12.0).unwrap());
        (
            SampledFunction::from_fn(g.clone(), |x| (-x * x).exp()),
            SampledFunction::from_fn(g, |x| x * (-x * x / 2.0).exp()),
        )
    }

    #[test]
    fn convolution_commutes_and_multiplies_transforms() {
        for name in ["cosh", "sl2c", "mehler"] {
            let m = calibrated(&build_model(name).unwrap()).unwrap();
            let (f, h) = gaussian_pair(&m);
            let fh = convolve(&m, &f, &h).unwrap();
            let hf = convolve(&m, &h, &f).unwrap();
            let d = fh
                .values
                .iter()
                .zip(&hf.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(d < 1e-10, "{name}: {d}");
            let lg = LambdaGrid::default();
            let lhs = forward(&m, &fh, &lg.nodes).unwrap();
            let rhs = forward(&m, &f, &lg.nodes)
                .unwrap()
                .product(&forward(&m, &h, &lg.nodes).unwrap());
            let e = lhs
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(e < 1e-4, "{name}: {e}");
        }
    }

    #[test]
    fn narrow_bump_is_an_approximate_identity() {
        for name in ["cosh", "sl2c"] {
            let m = build_model(name).unwrap();
            let g = Arc::new(Grid::new(&m.profile, 6.0, 48, 16).unwrap());
            let eps = 0.05;
            let raw = SampledFunction::from_fn(g.clone(), |x| (-(x / eps).powi(2)).exp());
            let mass = g.integrate_measure(&raw.values);
            let bump = raw.scaled(1.0 / mass);
            let f = SampledFunction::from_fn(g.clone(), |x| (-x * x).exp());
            let out = convolve(&m, &f, &bump).unwrap();
            let err = f
                .values
                .iter()
                .zip(&out.values)
                .zip(g.nodes())
                .filter(|(_, &x)| x < 3.0)
                .map(|((a, b), _)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-2, "{name}: {err}");
        }
    }

    #[test]
    fn mehler_product_formula() {
        let m = build_model("mehler").unwrap();
        for (l, x, y) in [(0.5, 0.5, 1.0), (2.0, 2.0, 1.0)] {
            let r = product_formula_residual(&m, Complex64::from(l), x, y).unwrap();
            assert!(r < 1e-8, "{r}");
        }
        let r = product_formula_residual(&m, Complex64::new(0.0, 0.5), 1.0, 0.5).unwrap();
        assert!(r < 1e-8);
        assert!(product_formula_residual(&m, Complex64::new(0.0, 0.6), 1.0, 0.5).is_err());
    }

    #[test]
    fn pair_rows() {
        let t = pair_table().unwrap();
        let rows: Vec<bool> = t.checks.iter().map(|c| c.pass).collect();
        assert_eq!(rows, [true, false, true, true, true]);
        let c = t.get("pair sech^2(x/2) constant").unwrap().measured.unwrap();
        assert!((c - 2.0 * PI).abs() < 1e-8);
    }
}
