//! Gamma function for complex argument and a few removable-singularity helpers.

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function on the complex plane (Lanczos, with reflection for Re z < 1/2).
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::from(PI) / (s * gamma(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::from(LANCZOS[0]);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * acc
}

pub fn gamma_real(x: f64) -> f64 {
    gamma(Complex64::from(x)).re
}

/// sin(z)/z with the removable singularity filled in.
pub fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        Complex64::from(1.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// sinh(x)/x.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

pub fn erfc(x: f64) -> f64 {
    statrs::function::erf::erfc(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_integers_and_half() {
        assert!((gamma_real(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma_real(0.5) - PI.sqrt()).abs() < 1e-13);
        assert!((gamma_real(1.5) - PI.sqrt() / 2.0).abs() < 1e-13);
        assert!((gamma_real(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gamma_reflection_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        let y = 0.7;
        let g = gamma(Complex64::new(0.0, y));
        let expect = PI / (y * (PI * y).sinh());
        assert!((g.norm_sqr() - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn sinc_is_continuous_at_the_switch() {
        for x in [0.99e-4, 1.01e-4] {
            let x2: f64 = x * x;
            assert!((sinc(Complex64::from(x)).re - (1.0 - x2 / 6.0)).abs() < 1e-15);
            assert!((sinhc(x) - (1.0 + x2 / 6.0)).abs() < 1e-15);
        }
    }
}
