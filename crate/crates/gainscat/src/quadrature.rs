//! Gauss–Legendre panel quadrature.
//!
//! The oscillatory integrals in this crate (Fresnel-phased screen integrals,
//! damped time-correlation integrals) are evaluated as composite Gauss rules
//! over panels sized by the caller to resolve the local oscillation. A
//! fixed-order rule on a panel spanning at most one oscillation period is
//! accurate to near machine precision, so the composite error is dominated
//! by panel count, not rule order.

use num_complex::Complex64;

/// A Gauss–Legendre rule of fixed order on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    /// Build an `n`-point rule by Newton iteration on the Legendre polynomial
    /// roots (initial guesses from the Chebyshev approximation).
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss rule order must be at least 1");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 {
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
            // middle node sits exactly at the origin
            let (_, d) = legendre_with_derivative(n, 0.0);
            nodes[n / 2] = 0.0;
            weights[n / 2] = 2.0 / (d * d);
        }
        GaussRule { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integrate a complex-valued `f` over `[a, b]`.
    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Composite rule over consecutive panel boundaries, each panel split into
/// `2^subdivide` equal pieces. Panel sums are compensated (Kahan) so heavily
/// cancelling oscillatory integrals are not limited by accumulation
/// roundoff.
pub fn composite<F: Fn(f64) -> f64>(
    rule: &GaussRule,
    f: &F,
    boundaries: &[f64],
    subdivide: u32,
) -> f64 {
    let pieces = 1usize << subdivide;
    let mut acc = 0.0;
    let mut carry = 0.0;
    for pair in boundaries.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let step = (b - a) / pieces as f64;
        for k in 0..pieces {
            let lo = a + step * k as f64;
            let hi = if k + 1 == pieces { b } else { lo + step };
            let term = rule.integrate(f, lo, hi) - carry;
            let next = acc + term;
            carry = (next - acc) - term;
            acc = next;
        }
    }
    acc
}

/// Complex-valued counterpart of [`composite`].
pub fn composite_complex<F: Fn(f64) -> Complex64>(
    rule: &GaussRule,
    f: &F,
    boundaries: &[f64],
    subdivide: u32,
) -> Complex64 {
    let pieces = 1usize << subdivide;
    let mut acc = Complex64::new(0.0, 0.0);
    for pair in boundaries.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let step = (b - a) / pieces as f64;
        for k in 0..pieces {
            let lo = a + step * k as f64;
            let hi = if k + 1 == pieces { b } else { lo + step };
            acc += rule.integrate_complex(f, lo, hi);
        }
    }
    acc
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_nodes_match_reference() {
        let rule = GaussRule::new(5);
        // classical values for n = 5
        let expected = [
            -0.906179845938664,
            -0.538469310105683,
            0.0,
            0.538469310105683,
            0.906179845938664,
        ];
        for (x, e) in rule.nodes.iter().zip(expected) {
            assert!((x - e).abs() < 1e-12, "node {x} vs {e}");
        }
        let wsum: f64 = rule.weights.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-13);
    }

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = GaussRule::new(8);
        // degree 15 is exact for an 8-point rule
        let f = |x: f64| 3.0 * x.powi(15) - x.powi(7) + 2.0 * x.powi(2) + 1.0;
        let exact = 3.0 / 16.0 * (2f64.powi(16) - 1.0) - (2f64.powi(8) - 1.0) / 8.0
            + 2.0 / 3.0 * (2f64.powi(3) - 1.0)
            + 1.0;
        let got = rule.integrate(&f, 1.0, 2.0);
        assert!((got - exact).abs() / exact.abs() < 1e-14);
    }

    #[test]
    fn composite_handles_oscillation() {
        let rule = GaussRule::new(16);
        let f = |x: f64| (10.0 * x).cos();
        let bounds: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
        let got = composite(&rule, &f, &bounds, 0);
        let exact = (10.0f64 * 10.0).sin() / 10.0;
        assert!((got - exact).abs() < 1e-12);
    }
}
