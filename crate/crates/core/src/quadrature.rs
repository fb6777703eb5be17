//! Legendre polynomials, Gauss–Legendre rules and a product rule on the
//! sphere.

use crate::algebra::BlochVector;
use crate::Real;

/// `P_n(u)` by the three-term recurrence.
pub fn legendre<T: Real>(n: usize, u: T) -> T {
    legendre_with_derivative(n, u).0
}

/// `(P_n(u), P_n'(u))`. The derivative formula is singular at `u = ±1`,
/// where the closed form `n(n+1)/2 · (±1)^{n+1}` is used.
pub fn legendre_with_derivative<T: Real>(n: usize, u: T) -> (T, T) {
    let mut p_prev = T::one();
    if n == 0 {
        return (p_prev, T::zero());
    }
    let mut p = u;
    for k in 1..n {
        let kf = T::count(k);
        let next = ((kf + kf + T::one()) * u * p - kf * p_prev) / (kf + T::one());
        p_prev = p;
        p = next;
    }
    let nf = T::count(n);
    let denom = u * u - T::one();
    let dp = if denom == T::zero() {
        let sign = if u > T::zero() || n % 2 == 1 { T::one() } else { -T::one() };
        sign * nf * (nf + T::one()) * T::lit(0.5)
    } else {
        nf * (u * p - p_prev) / denom
    };
    (p, dp)
}

/// An `n`-point Gauss–Legendre rule on `[−1, 1]`, exact for polynomials of
/// degree `2n − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = T::count(n);
        let tol = T::epsilon() * T::lit(4.0);
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton.
            let mut x = (T::PI() * (T::count(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= tol {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫₋₁¹ f(u) du`.
    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Legendre in `cos θ` times the trapezoid rule in azimuth, normalized
/// so the sphere has total mass 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature<T> {
    polar: GaussLegendre<T>,
    azimuthal: usize,
}

pub const DEFAULT_POLAR_NODES: usize = 64;
pub const DEFAULT_AZIMUTHAL_NODES: usize = 64;

impl<T: Real> Default for SphereQuadrature<T> {
    fn default() -> Self {
        Self::new(DEFAULT_POLAR_NODES, DEFAULT_AZIMUTHAL_NODES)
    }
}

impl<T: Real> SphereQuadrature<T> {
    pub fn new(polar: usize, azimuthal: usize) -> Self {
        assert!(azimuthal > 0, "need at least one azimuthal node");
        Self {
            polar: GaussLegendre::new(polar),
            azimuthal,
        }
    }

    /// `∫ f(m) dm` over the uniform probability measure on the sphere.
    pub fn integrate(&self, f: impl Fn(&BlochVector<T>) -> T) -> T {
        let dphi = T::TAU() / T::count(self.azimuthal);
        let mut total = T::zero();
        for (&u, &w) in self.polar.nodes.iter().zip(&self.polar.weights) {
            let ring: T = (0..self.azimuthal)
                .map(|k| f(&BlochVector::from_polar(u, dphi * T::count(k))))
                .sum();
            total += w * ring;
        }
        // du/2 · dφ/2π
        total * T::lit(0.5) / T::count(self.azimuthal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_polynomials() {
        let u = 0.3f64;
        assert_eq!(legendre(0, u), 1.0);
        assert_eq!(legendre(1, u), u);
        assert!((legendre(2, u) - (3.0 * u * u - 1.0) / 2.0).abs() < 1e-15);
        assert!((legendre(3, u) - (5.0 * u.powi(3) - 3.0 * u) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for n in 1..8 {
            for &u in &[-0.9, -0.2, 0.4, 0.77] {
                let h = 1e-6;
                let fd = (legendre::<f64>(n, u + h) - legendre(n, u - h)) / (2.0 * h);
                let (_, d) = legendre_with_derivative(n, u);
                assert!((fd - d).abs() < 1e-7, "n={n} u={u}");
            }
            let (_, d1) = legendre_with_derivative::<f64>(n, 1.0);
            let nf = n as f64;
            assert!((d1 - nf * (nf + 1.0) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rule_integrates_monomials_exactly() {
        let rule = GaussLegendre::<f64>::new(5);
        for k in 0..10 {
            let got = rule.integrate(|x| x.powi(k));
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "degree {k}");
        }
        let w: f64 = rule.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn large_rule_is_accurate() {
        let rule = GaussLegendre::<f64>::new(64);
        assert!((rule.integrate(|x| x.exp()) - (1f64.exp() - (-1f64).exp())).abs() < 1e-13);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sphere_rule_moments() {
        let q = SphereQuadrature::<f64>::default();
        assert!((q.integrate(|_| 1.0) - 1.0).abs() < 1e-14);
        let c = |i: usize| move |m: &BlochVector<f64>| m.components()[i].powi(2);
        for i in 0..3 {
            assert!((q.integrate(c(i)) - 1.0 / 3.0).abs() < 1e-14);
        }
        assert!(q.integrate(|m| m.components()[0] * m.components()[1]).abs() < 1e-15);
    }
}
