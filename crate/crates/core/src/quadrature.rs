//! Gauss–Legendre and Gauss–Jacobi rules, composite panels, barycentric weights.

use nalgebra::{DMatrix, SymmetricEigen};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::special::gamma_real;

/// Nodes and weights on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Nodes and weights mapped affinely onto [a, b].
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&u, &w)| (mid + half * u, half * w))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn legendre_uncached(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// Gauss–Jacobi rule for the weight (1-u)^a (1+u)^b on [-1, 1], via Golub–Welsch.
fn jacobi_uncached(n: usize, a: f64, b: f64) -> Rule {
    let ab = a + b;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        jm[(k, k)] = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let k1 = kf + 1.0;
            let s1 = 2.0 * k1 + ab;
            let beta2 = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + ab) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0))
            };
            jm[(k, k + 1)] = beta2.sqrt();
            jm[(k + 1, k)] = beta2.sqrt();
        }
    }
    let mu0 = 2f64.powf(ab + 1.0) * gamma_real(a + 1.0) * gamma_real(b + 1.0) / gamma_real(ab + 2.0);
    let eig = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

type Cache<K> = OnceLock<Mutex<HashMap<K, Arc<Rule>>>>;

static LEGENDRE: Cache<usize> = OnceLock::new();
static JACOBI: Cache<(usize, u64, u64)> = OnceLock::new();

pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    let cache = LEGENDRE.get_or_init(Default::default);
    let mut map = cache.lock().expect("rule cache poisoned");
    map.entry(n).or_insert_with(|| Arc::new(legendre_uncached(n))).clone()
}

pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Arc<Rule> {
    let cache = JACOBI.get_or_init(Default::default);
    let key = (n, a.to_bits(), b.to_bits());
    if let Some(r) = cache.lock().expect("rule cache poisoned").get(&key) {
        return r.clone();
    }
    let rule = Arc::new(jacobi_uncached(n, a, b));
    cache.lock().expect("rule cache poisoned").insert(key, rule.clone());
    rule
}

/// Integrate `f` over [a, b] with `panels` equal Gauss–Legendre panels of `order` nodes.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + p as f64 * h;
            rule.on(lo, lo + h).map(|(x, w)| w * f(x)).sum::<f64>()
        })
        .sum()
}

/// Barycentric weights for interpolation through `nodes`.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let prod: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &xk)| xj - xk)
                .product();
            1.0 / prod
        })
        .collect()
}

/// Lagrange basis values at `x` (second barycentric form); sums to 1.
pub fn lagrange_basis(nodes: &[f64], bary: &[f64], x: f64, out: &mut [f64]) {
    if let Some(j) = nodes.iter().position(|&xj| xj == x) {
        out.iter_mut().for_each(|v| *v = 0.0);
        out[j] = 1.0;
        return;
    }
    let mut denom = 0.0;
    for ((o, &xj), &wj) in out.iter_mut().zip(nodes).zip(bary) {
        *o = wj / (x - xj);
        denom += *o;
    }
    out.iter_mut().for_each(|v| *v /= denom);
}
