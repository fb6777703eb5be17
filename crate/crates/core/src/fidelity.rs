//! Fidelity functions of the angle between the true and guessed directions,
//! expanded in Legendre polynomials of `u = cos θ`.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{parallel_state, trace_pair, BlochVector};
use crate::measurement::{outcome_density, CovariantSeed, DiscretePovm};
use crate::quadrature::{legendre, GaussLegendre, SphereQuadrature};
use crate::{Error, Real, Result};

/// Legendre coefficients of a fidelity function. Only `f0, f1, f2` enter the
/// average fidelity of a two-spin covariant measurement; higher orders are
/// kept for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySpec<T> {
    pub f0: T,
    pub f1: T,
    pub f2: T,
    /// Coefficients of `P₃, P₄, …`.
    pub tail: Vec<T>,
}

impl<T: Real> FidelitySpec<T> {
    pub fn new(f0: T, f1: T, f2: T) -> Result<Self> {
        if ![f0, f1, f2].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("fidelity coefficient"));
        }
        Ok(Self {
            f0,
            f1,
            f2,
            tail: Vec::new(),
        })
    }

    pub fn with_tail(mut self, tail: Vec<T>) -> Result<Self> {
        if tail.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("fidelity tail coefficient"));
        }
        self.tail = tail;
        Ok(self)
    }

    /// The truncated series `f0 + f1 P₁(u) + f2 P₂(u) + Σ tail`.
    pub fn evaluate(&self, u: T) -> T {
        let head = self.f0 + self.f1 * u + self.f2 * legendre(2, u);
        self.tail
            .iter()
            .enumerate()
            .fold(head, |acc, (k, c)| acc + *c * legendre(k + 3, u))
    }

    /// Gradient of the average fidelity in the `(α, γ)` plane.
    pub fn objective_gradient(&self) -> (T, T) {
        (self.f1 / T::lit(3.0), self.f2 / T::lit(10.0))
    }
}

/// Built-in fidelity functions addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedFidelity {
    /// `|⟨↑m|↑n⟩|² = (1 + cos θ)/2`.
    Overlap,
    /// `sin² θ = 1 − cos² θ`: reward for guessing a direction in the plane
    /// normal to the spins.
    Plane,
}

impl NamedFidelity {
    pub const ALL: [NamedFidelity; 2] = [NamedFidelity::Overlap, NamedFidelity::Plane];

    pub fn key(self) -> &'static str {
        match self {
            NamedFidelity::Overlap => "overlap",
            NamedFidelity::Plane => "plane",
        }
    }

    pub fn evaluate<T: Real>(self, u: T) -> T {
        match self {
            NamedFidelity::Overlap => (T::one() + u) * T::lit(0.5),
            NamedFidelity::Plane => T::one() - u * u,
        }
    }

    /// Exact Legendre coefficients.
    pub fn spec<T: Real>(self) -> FidelitySpec<T> {
        let third = T::one() / T::lit(3.0);
        let (f0, f1, f2) = match self {
            NamedFidelity::Overlap => (T::lit(0.5), T::lit(0.5), T::zero()),
            NamedFidelity::Plane => (third + third, T::zero(), -(third + third)),
        };
        FidelitySpec {
            f0,
            f1,
            f2,
            tail: Vec::new(),
        }
    }
}

impl fmt::Display for NamedFidelity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for NamedFidelity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "overlap" => Ok(NamedFidelity::Overlap),
            "plane" => Ok(NamedFidelity::Plane),
            other => Err(Error::InvalidArgument(format!(
                "unknown fidelity '{other}' (expected overlap, plane or f0,f1,f2)"
            ))),
        }
    }
}

/// A fidelity given either by name or directly by its Legendre coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum Fidelity<T> {
    Named(NamedFidelity),
    Coefficients(FidelitySpec<T>),
}

impl<T: Real> Fidelity<T> {
    pub fn evaluate(&self, u: T) -> T {
        match self {
            Fidelity::Named(n) => n.evaluate(u),
            Fidelity::Coefficients(s) => s.evaluate(u),
        }
    }

    pub fn spec(&self) -> FidelitySpec<T> {
        match self {
            Fidelity::Named(n) => n.spec(),
            Fidelity::Coefficients(s) => s.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Fidelity::Named(n) => n.key().to_string(),
            Fidelity::Coefficients(s) => format!("{},{},{}", s.f0, s.f1, s.f2),
        }
    }
}

impl<T: Real> FromStr for Fidelity<T> {
    type Err = Error;

    /// `overlap`, `plane`, or a comma-separated triple `f0,f1,f2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.contains(',') {
            return s.parse().map(Fidelity::Named);
        }
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "fidelity triple needs exactly 3 coefficients, got {}",
                parts.len()
            )));
        }
        let mut c = [T::zero(); 3];
        for (slot, p) in c.iter_mut().zip(&parts) {
            let x: f64 = p
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("malformed coefficient '{p}'")))?;
            *slot = T::lit(x);
        }
        FidelitySpec::new(c[0], c[1], c[2]).map(Fidelity::Coefficients)
    }
}

/// Legendre coefficients `fₙ = (2n+1)/2 ∫₋₁¹ f(u) Pₙ(u) du` for
/// `n ≤ max(order, 2)`, computed with a `nodes`-point Gauss rule.
pub fn project_legendre<T: Real>(
    f: impl Fn(T) -> T,
    order: usize,
    nodes: usize,
) -> Result<FidelitySpec<T>> {
    let required = 2 * order + 1;
    if nodes < required {
        return Err(Error::InsufficientNodes {
            order,
            nodes,
            required,
        });
    }
    let rule = GaussLegendre::new(nodes);
    let values: Vec<T> = rule.nodes.iter().map(|&u| f(u)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("fidelity function value"));
    }
    let coeff = |n: usize| {
        let integral: T = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .zip(&values)
            .map(|((&u, &w), &v)| w * v * legendre(n, u))
            .sum();
        integral * T::count(2 * n + 1) * T::lit(0.5)
    };
    Ok(FidelitySpec {
        f0: coeff(0),
        f1: coeff(1),
        f2: coeff(2),
        tail: (3..=order).map(coeff).collect(),
    })
}

/// `f0 + (α/3) f1 + (γ/10) f2`.
pub fn average_fidelity<T: Real>(seed: &CovariantSeed<T>, spec: &FidelitySpec<T>) -> T {
    spec.f0 + seed.alpha * spec.f1 / T::lit(3.0) + seed.gamma * spec.f2 / T::lit(10.0)
}

/// Average fidelity by direct integration over true directions `m`, with the
/// guess fixed at `+ẑ`.
pub fn average_fidelity_by_quadrature<T: Real>(
    seed: &CovariantSeed<T>,
    f: impl Fn(T) -> T,
) -> T {
    average_fidelity_with(&SphereQuadrature::default(), seed, f)
}

pub fn average_fidelity_with<T: Real>(
    quadrature: &SphereQuadrature<T>,
    seed: &CovariantSeed<T>,
    f: impl Fn(T) -> T,
) -> T {
    let n = BlochVector::unit_z();
    quadrature.integrate(|m| f(n.dot(m)) * outcome_density(seed, &n, m))
}

/// Average fidelity of a finite POVM: `∫ dm Σₖ wₖ f(nₖ·m) Tr[ρ(m,m) aₖ]`,
/// with the trace taken on the operators themselves.
pub fn discrete_average_fidelity<T: Real>(povm: &DiscretePovm<T>, f: impl Fn(T) -> T) -> T {
    SphereQuadrature::default().integrate(|m| {
        let rho = parallel_state(m);
        povm.elements
            .iter()
            .map(|e| e.weight * f(e.direction.dot(m)) * trace_pair(&rho, &e.operator))
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_of_named_fidelities() {
        for named in NamedFidelity::ALL {
            let got = project_legendre(|u: f64| named.evaluate(u), 6, 16).unwrap();
            let want = named.spec::<f64>();
            assert!((got.f0 - want.f0).abs() < 1e-14);
            assert!((got.f1 - want.f1).abs() < 1e-14);
            assert!((got.f2 - want.f2).abs() < 1e-14);
            assert!(got.tail.iter().all(|c| c.abs() < 1e-14));
        }
    }

    #[test]
    fn projection_of_constant() {
        let got = project_legendre(|_| 1.0f64, 2, 5).unwrap();
        assert!((got.f0 - 1.0).abs() < 1e-15 && got.f1.abs() < 1e-15 && got.f2.abs() < 1e-15);
    }

    #[test]
    fn projection_rejects_too_few_nodes() {
        assert_eq!(
            project_legendre(|u: f64| u, 4, 8),
            Err(Error::InsufficientNodes {
                order: 4,
                nodes: 8,
                required: 9
            })
        );
    }

    #[test]
    fn headline_values_from_closed_form() {
        let overlap = NamedFidelity::Overlap.spec::<f64>();
        let par = CovariantSeed::new(1.5, 1.0).unwrap();
        assert!((average_fidelity(&par, &overlap) - 0.75).abs() < 1e-15);
        let anti = CovariantSeed::new(3f64.sqrt(), 2.0).unwrap();
        assert!((average_fidelity(&anti, &overlap) - (0.5 + 3f64.sqrt() / 6.0)).abs() < 1e-15);
        let spec = FidelitySpec::new(0.3, -0.2, 0.9).unwrap();
        assert_eq!(average_fidelity(&CovariantSeed::default(), &spec), 0.3);
    }

    #[test]
    fn quadrature_route_matches_headline_values() {
        let par = CovariantSeed::<f64>::new(1.5, 1.0).unwrap();
        let got = average_fidelity_by_quadrature(&par, |u| NamedFidelity::Overlap.evaluate(u));
        assert!((got - 0.75).abs() < 1e-10);
        let plane = CovariantSeed::<f64>::new(0.0, -2.0).unwrap();
        let got = average_fidelity_by_quadrature(&plane, |u| NamedFidelity::Plane.evaluate(u));
        assert!((got - 0.8).abs() < 1e-10);
        let any = CovariantSeed::<f64>::new(0.4, -0.9).unwrap();
        assert!((average_fidelity_by_quadrature(&any, |_| 0.37) - 0.37).abs() < 1e-12);
    }

    #[test]
    fn fidelity_parsing() {
        assert_eq!(
            "overlap".parse::<Fidelity<f64>>().unwrap(),
            Fidelity::Named(NamedFidelity::Overlap)
        );
        let f: Fidelity<f64> = "1, 0,0".parse().unwrap();
        assert_eq!(f.spec(), FidelitySpec::new(1.0, 0.0, 0.0).unwrap());
        assert!("cosine".parse::<Fidelity<f64>>().is_err());
        assert!("1,2".parse::<Fidelity<f64>>().is_err());
        assert!("1,x,2".parse::<Fidelity<f64>>().is_err());
        assert!("1,inf,2".parse::<Fidelity<f64>>().is_err());
    }

    #[test]
    fn spec_evaluation_includes_tail() {
        let spec = FidelitySpec::new(0.1, 0.2, 0.3)
            .unwrap()
            .with_tail(vec![0.5])
            .unwrap();
        let u = 0.4f64;
        let want = 0.1 + 0.2 * u + 0.3 * legendre(2, u) + 0.5 * legendre(3, u);
        assert!((spec.evaluate(u) - want).abs() < 1e-15);
    }
}
