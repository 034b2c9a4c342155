//! One-dimensional quadrature rules.

use std::f64::consts::{FRAC_PI_2, PI};

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n <= 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Nodes of a rule mapped onto `[a, b]`, as `(node, weight)` pairs.
pub fn gauss_on(a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> impl Iterator<Item = (f64, f64)> + '_ {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    rule.0.iter().zip(&rule.1).map(move |(&x, &w)| (mid + half * x, half * w))
}

/// Tanh–sinh nodes on `[a, b]` with step `2^-level`. Nodes are placed by their
/// distance from the nearer endpoint so that endpoint singularities such as
/// `log(1/r)^s` are sampled without rounding onto the endpoint.
pub fn tanh_sinh(a: f64, b: f64, level: u32) -> Vec<(f64, f64)> {
    let h = (-(level as f64)).exp2();
    let len = b - a;
    let mut out = Vec::new();
    let kmax = (4.0 / h) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        let w = len * h * FRAC_PI_2 * t.cosh() / (2.0 * ch * ch);
        if !(w > 1e-300) {
            continue;
        }
        // 1/(1+e^{-2u}) and its complement, each computed without cancellation
        let x = if u < 0.0 {
            a + len / (1.0 + (-2.0 * u).exp())
        } else {
            b - len / (1.0 + (2.0 * u).exp())
        };
        if x > a && x < b {
            out.push((x, w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(8);
        let s: f64 = gauss_on(0.0, 2.0, &rule).map(|(x, w)| w * x.powi(15)).sum();
        assert!((s - 2f64.powi(16) / 16.0).abs() < 1e-10);
        let total: f64 = rule.1.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_handles_log_endpoint() {
        // int_0^1 r log(1/r)^0.5 dr = Gamma(1.5) / 2^1.5
        let s: f64 = tanh_sinh(0.0, 1.0, 6).into_iter().map(|(r, w)| w * r * (1.0 / r).ln().sqrt()).sum();
        let exact = 0.5 * PI.sqrt() / 2f64.powf(1.5);
        assert!((s - exact).abs() < 1e-12, "{s} vs {exact}");
    }
}
