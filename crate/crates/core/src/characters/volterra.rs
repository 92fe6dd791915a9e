use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{bessel_j, check_lambda_finite, CharacterEval};
use crate::error::{domain, Error, Result};
use crate::models::WeightProfile;
use crate::quadrature::{barycentric_weights, gauss_legendre, lagrange_basis};
use crate::special::sinc;

const ORDER: usize = 16;
const FIRST_EDGE: f64 = 1e-6;
const GEOMETRIC_END: f64 = 0.5;
const UNIFORM_WIDTH: f64 = 0.5;
const MAX_ITERATIONS: usize = 200;
const MAX_RADIUS: f64 = 20.0;

/// sin(λd)/λ, continuous through λ = 0 and valid for complex λ.
fn kernel(lambda: Complex64, d: f64) -> Complex64 {
    sinc(lambda * d) * d
}

fn panel_edges(x_end: f64) -> Vec<f64> {
    let mut edges = vec![0.0];
    let mut e = FIRST_EDGE;
    while e < GEOMETRIC_END && e < x_end {
        edges.push(e);
        e *= 2.0;
    }
    let start = *edges.last().unwrap();
    if x_end > start {
        let n = ((x_end - start) / UNIFORM_WIDTH).ceil().max(1.0) as usize;
        edges.extend((1..=n).map(|k| start + (x_end - start) * k as f64 / n as f64));
    }
    edges
}

/// Fixed point ρ of the Volterra equation for ψ = j + ρ, on a log-refined panel grid.
#[derive(Debug, Clone)]
pub struct VolterraSolution {
    profile: WeightProfile,
    lambda: Complex64,
    edges: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Q(y) + (4γ²-1)/(4y²) at the nodes
    potential: Vec<f64>,
    /// Q(y) j(y) at the nodes
    source: Vec<Complex64>,
    rho: Vec<Complex64>,
    /// Constant making φ(0+) = 1.
    pub normalization: Complex64,
    pub iterations: usize,
    pub last_change: f64,
}

struct Row {
    source: Complex64,
    /// (first column, coefficients) for the full panels, then the partial panel
    full: Vec<Complex64>,
    partial_start: usize,
    partial: [Complex64; ORDER],
}

impl VolterraSolution {
    fn potential_at(profile: &WeightProfile, y: f64) -> f64 {
        let g = profile.gamma();
        profile.big_q(y) + (4.0 * g * g - 1.0) / (4.0 * y * y)
    }

    fn panel_of(&self, x: f64) -> usize {
        let p = self.edges.partition_point(|&e| e <= x);
        p.saturating_sub(1).min(self.edges.len() - 2)
    }

    /// Quadrature row for ρ(x) = source + Σ coefficients · ρ(nodes).
    fn row(&self, x: f64) -> Result<Row> {
        let lambda = self.lambda;
        let p = self.panel_of(x);
        let first = p * ORDER;
        let full: Vec<Complex64> = (0..first)
            .map(|k| kernel(lambda, x - self.nodes[k]) * (self.weights[k] * self.potential[k]))
            .collect();
        let mut source: Complex64 = (0..first)
            .map(|k| kernel(lambda, x - self.nodes[k]) * self.source[k] * self.weights[k])
            .sum();
        let (a, b) = (self.edges[p], self.edges[p + 1]);
        let panel_nodes: Vec<f64> = self.nodes[first..first + ORDER]
            .iter()
            .map(|&y| 2.0 * (y - a) / (b - a) - 1.0)
            .collect();
        let bary = barycentric_weights(&panel_nodes);
        let mut partial = [Complex64::default(); ORDER];
        let mut basis = [0.0; ORDER];
        let power = self.profile.gamma() + 0.5;
        if x > a {
            let rule = gauss_legendre(ORDER);
            for (z, w) in rule.on(a, x) {
                let k = kernel(lambda, x - z);
                let j = bessel_j(self.profile.gamma(), lambda, z)?;
                source += k * j * (self.profile.big_q(z) * w);
                let coef = k * (w * Self::potential_at(&self.profile, z));
                lagrange_basis(&panel_nodes, &bary, 2.0 * (z - a) / (b - a) - 1.0, &mut basis);
                // interpolate ρ/y^{γ+1/2}, which stays bounded at the origin
                let panel = &self.nodes[first..first + ORDER];
                for ((pm, &bm), &y) in partial.iter_mut().zip(&basis).zip(panel) {
                    *pm += coef * (bm * (z / y).powf(power));
                }
            }
        }
        Ok(Row {
            source,
            full,
            partial_start: first,
            partial,
        })
    }

    fn rho_at(&self, x: f64) -> Result<Complex64> {
        let row = self.row(x)?;
        let mut v = row.source;
        v += row.full.iter().zip(&self.rho).map(|(c, r)| c * r).sum::<Complex64>();
        v += row
            .partial
            .iter()
            .zip(&self.rho[row.partial_start..row.partial_start + ORDER])
            .map(|(c, r)| c * r)
            .sum::<Complex64>();
        Ok(v)
    }

    /// φ_λ(x) with its Bessel part and correction.
    pub fn eval(&self, x: f64) -> Result<CharacterEval> {
        let end = *self.edges.last().unwrap();
        if !(0.0..=end).contains(&x) {
            return Err(domain(format!("Volterra solution covers [0, {end}], asked for {x}")));
        }
        if x == 0.0 {
            return Ok(CharacterEval {
                lambda: self.lambda,
                x,
                value: Complex64::from(1.0),
                psi: Some(Complex64::default()),
                rho: Some(Complex64::default()),
                bessel_part: Some(Complex64::default()),
            });
        }
        let j = bessel_j(self.profile.gamma(), self.lambda, x)?;
        let rho = self.rho_at(x)?;
        let psi = j + rho;
        Ok(CharacterEval {
            lambda: self.lambda,
            x,
            value: self.normalization * psi / self.profile.m(x).sqrt(),
            psi: Some(psi),
            rho: Some(rho),
            bessel_part: Some(j),
        })
    }

    pub fn rho_at_nodes(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.nodes.iter().copied().zip(self.rho.iter().copied())
    }
}

/// Solve the Volterra equation on (0, x_end] by Picard iteration from ρ = 0.
pub fn volterra_solve(profile: &WeightProfile, lambda: Complex64, x_end: f64) -> Result<VolterraSolution> {
    check_lambda_finite(lambda)?;
    let g = profile.gamma();
    if g < 0.5 {
        return Err(domain(format!("Volterra construction needs gamma >= 1/2, got {g}")));
    }
    if !(x_end > 0.0 && x_end <= MAX_RADIUS) {
        return Err(domain(format!(
            "Volterra radius must lie in (0, {MAX_RADIUS}], got {x_end}"
        )));
    }
    let edges = panel_edges(x_end);
    let rule = gauss_legendre(ORDER);
    let (nodes, weights): (Vec<f64>, Vec<f64>) = edges
        .windows(2)
        .flat_map(|w| rule.on(w[0], w[1]).collect::<Vec<_>>())
        .unzip();
    let potential = nodes
        .iter()
        .map(|&y| VolterraSolution::potential_at(profile, y))
        .collect();
    let source = nodes
        .par_iter()
        .map(|&y| Ok(bessel_j(g, lambda, y)? * profile.big_q(y)))
        .collect::<Result<Vec<_>>>()?;
    let n = nodes.len();
    let mut sol = VolterraSolution {
        profile: profile.clone(),
        lambda,
        edges,
        nodes,
        weights,
        potential,
        source,
        rho: vec![Complex64::default(); n],
        normalization: Complex64::from(1.0),
        iterations: 0,
        last_change: f64::INFINITY,
    };

    let rows = sol.nodes.par_iter().map(|&x| sol.row(x)).collect::<Result<Vec<_>>>()?;
    let mut mat = DMatrix::<Complex64>::zeros(n, n);
    let mut rhs = DVector::<Complex64>::zeros(n);
    for (i, row) in rows.iter().enumerate() {
        rhs[i] = row.source;
        for (k, &c) in row.full.iter().enumerate() {
            mat[(i, k)] = c;
        }
        for (m, &c) in row.partial.iter().enumerate() {
            mat[(i, row.partial_start + m)] += c;
        }
    }

    let mut rho = DVector::<Complex64>::zeros(n);
    loop {
        let next = &rhs + &mat * &rho;
        let change = (&next - &rho)
            .iter()
            .map(|d| d.norm())
            .fold(0.0f64, |a, d| if d.is_nan() { f64::NAN } else { a.max(d) });
        let scale = next.iter().fold(1.0f64, |a, v| a.max(v.norm()));
        rho = next;
        sol.iterations += 1;
        sol.last_change = change;
        if change <= 1e-12 * scale {
            break;
        }
        if sol.iterations >= MAX_ITERATIONS || !change.is_finite() {
            return Err(Error::Convergence {
                iterations: sol.iterations,
                last_change: change,
            });
        }
    }
    sol.rho = rho.iter().copied().collect();

    let x0 = sol.nodes[0];
    let raw = (bessel_j(g, lambda, x0)? + sol.rho[0]) / profile.m(x0).sqrt();
    let mu = lambda * lambda + profile.omega0().powi(2);
    sol.normalization = (Complex64::from(1.0) - mu * x0 * x0 / (4.0 * (g + 1.0))) / raw;
    Ok(sol)
}

/// φ_λ at each requested radius via the Volterra construction.
pub fn phi_volterra(profile: &WeightProfile, lambda: Complex64, x_grid: &[f64]) -> Result<Vec<CharacterEval>> {
    let end = x_grid.iter().fold(0.0f64, |a, &x| a.max(x));
    if end == 0.0 {
        return Ok(x_grid
            .iter()
            .map(|&x| CharacterEval {
                lambda,
                x,
                value: Complex64::from(1.0),
                psi: None,
                rho: None,
                bessel_part: None,
            })
            .collect());
    }
    let sol = volterra_solve(profile, lambda, end)?;
    x_grid.iter().map(|&x| sol.eval(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{phi_closed, phi_ode};
    use crate::models::build_model;

    #[test]
    fn sl2c_has_no_correction() {
        let m = build_model("sl2c").unwrap();
        let sol = volterra_solve(&m.profile, Complex64::from(1.3), 6.0).unwrap();
        // Q vanishes up to rounding, so ρ does too
        assert!(sol.rho_at_nodes().all(|(_, r)| r.norm() < 1e-14));
        for x in [0.2, 1.0, 5.5] {
            let e = sol.eval(x).unwrap();
            let exact = phi_closed(&m, Complex64::from(1.3), x);
            assert!((e.value - exact).norm() < 1e-12, "x={x}");
        }
        assert!((sol.normalization.re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn hyperbolic_four_space_against_ode() {
        let p = WeightProfile::hyperbolic(3);
        let xs: Vec<f64> = (0..=49).map(|k| 0.1 + 0.1 * k as f64).collect();
        for l in [0.5, 1.0, 2.0] {
            let lam = Complex64::from(l);
            let v = phi_volterra(&p, lam, &xs).unwrap();
            let o = phi_ode(&p, lam, &xs).unwrap();
            for (a, b) in v.iter().zip(&o) {
                assert!((a.value - b.value).norm() < 1e-5, "λ={l} x={}", a.x);
            }
        }
    }

    #[test]
    fn ground_state_positive_and_decreasing() {
        let p = WeightProfile::hyperbolic(3);
        let xs: Vec<f64> = (0..=50).map(|k| 0.1 * k as f64).collect();
        let v = phi_volterra(&p, Complex64::from(0.0), &xs).unwrap();
        assert!(v.iter().all(|e| e.value.re > 0.0));
        assert!(v.windows(2).all(|w| w[1].value.re <= w[0].value.re));
    }

    #[test]
    fn rejects_small_gamma() {
        let m = build_model("mehler").unwrap();
        assert!(matches!(
            volterra_solve(&m.profile, Complex64::from(1.0), 2.0),
            Err(Error::Domain(_))
        ));
    }
}
