//! Maximizing the average fidelity over each admissible region.
//!
//! The objective `f0 + (f1/3) α + (f2/10) γ` is linear in the seed, so its
//! maximum over a closed convex region sits on the boundary:
//!
//! * parallel: the triangle with vertices `(±3/2, 1)` and `(0, −2)`;
//! * antiparallel: below the cap `γ = 2`, above the parabola `γ = α² − 1`;
//! * LOCC: below the cap `γ = 1`, above the same parabola.

use rayon::prelude::*;

use crate::fidelity::{average_fidelity, FidelitySpec};
use crate::measurement::{is_admissible, Constraint, CovariantSeed, MeasurementClass};
use crate::Real;

/// Tolerance on the certificate: every listed active constraint has
/// `|slack| ≤ ACTIVE_TOLERANCE` at the optimal seed.
pub const ACTIVE_TOLERANCE: f64 = 1e-12;

/// The optimal measurement for one class.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum<T> {
    pub class: MeasurementClass,
    pub seed: CovariantSeed<T>,
    /// Average fidelity at `seed`.
    pub value: T,
    /// Constraints tight at `seed`.
    pub active_constraints: Vec<Constraint>,
    /// When a whole boundary segment is optimal, its two endpoints. `seed` is
    /// then the segment midpoint.
    pub tie: Option<[CovariantSeed<T>; 2]>,
    /// The objective is constant (`f1 = f2 = 0`); every admissible seed is
    /// optimal and `(0, 0)` is returned.
    pub degenerate: bool,
}

impl<T: Real> Optimum<T> {
    fn build(
        class: MeasurementClass,
        seed: CovariantSeed<T>,
        spec: &FidelitySpec<T>,
        active_constraints: Vec<Constraint>,
        tie: Option<[CovariantSeed<T>; 2]>,
    ) -> Self {
        Self {
            class,
            seed,
            value: average_fidelity(&seed, spec),
            active_constraints,
            tie,
            degenerate: false,
        }
    }

    pub fn is_unique(&self) -> bool {
        self.tie.is_none() && !self.degenerate
    }

    /// Checks admissibility and that all listed constraints are tight.
    pub fn certificate_holds(&self) -> bool {
        let tol = T::lit(ACTIVE_TOLERANCE);
        is_admissible(&self.seed, self.class)
            && self
                .active_constraints
                .iter()
                .all(|c| c.slack(&self.seed).abs() <= tol)
    }
}

/// Closed-form global maximum of the average fidelity over `class`.
pub fn optimize<T: Real>(spec: &FidelitySpec<T>, class: MeasurementClass) -> Optimum<T> {
    let (c1, c2) = spec.objective_gradient();
    if c1 == T::zero() && c2 == T::zero() {
        let seed = CovariantSeed::default();
        return Optimum {
            class,
            seed,
            value: average_fidelity(&seed, spec),
            active_constraints: Vec::new(),
            tie: None,
            degenerate: true,
        };
    }
    match class {
        MeasurementClass::CollectiveParallel => optimize_triangle(spec, c1, c2),
        MeasurementClass::CollectiveAntiparallel => {
            optimize_parabolic(spec, class, c1, c2, T::lit(2.0), Constraint::GammaAtMostTwo)
        }
        MeasurementClass::Locc => {
            optimize_parabolic(spec, class, c1, c2, T::one(), Constraint::GammaAtMostOne)
        }
    }
}

fn optimize_triangle<T: Real>(spec: &FidelitySpec<T>, c1: T, c2: T) -> Optimum<T> {
    use Constraint::*;
    let class = MeasurementClass::CollectiveParallel;
    let half = T::lit(1.5);
    // Each vertex with the two edges meeting there.
    let vertices = [
        (seed(half, T::one()), [GammaAtMostOne, DownDown]),
        (seed(-half, T::one()), [GammaAtMostOne, UpUp]),
        (seed(T::zero(), -T::lit(2.0)), [UpUp, DownDown]),
    ];
    let objective = |s: &CovariantSeed<T>| c1 * s.alpha + c2 * s.gamma;
    let values = vertices.map(|(s, _)| objective(&s));
    let best = values.iter().copied().fold(T::neg_infinity(), T::max);
    let tie_tol = T::epsilon() * T::lit(16.0) * (c1.abs() + c2.abs()) * T::lit(2.0);
    let winners: Vec<usize> = (0..3).filter(|&i| best - values[i] <= tie_tol).collect();

    match winners.as_slice() {
        [i] => {
            let (s, active) = vertices[*i];
            Optimum::build(class, s, spec, active.to_vec(), None)
        }
        [i, j] => {
            let (a, ca) = vertices[*i];
            let (b, cb) = vertices[*j];
            let shared: Vec<Constraint> = ca.iter().copied().filter(|c| cb.contains(c)).collect();
            let mid = seed(
                (a.alpha + b.alpha) * T::lit(0.5),
                (a.gamma + b.gamma) * T::lit(0.5),
            );
            Optimum::build(class, mid, spec, shared, Some([a, b]))
        }
        // Three-way ties only occur for a zero gradient, handled upstream.
        _ => unreachable!("nonzero linear objective ties at most two triangle vertices"),
    }
}

fn optimize_parabolic<T: Real>(
    spec: &FidelitySpec<T>,
    class: MeasurementClass,
    c1: T,
    c2: T,
    cap: T,
    cap_constraint: Constraint,
) -> Optimum<T> {
    let corner_alpha = parabola_corner(cap);
    let corner = |sign: T| seed(sign * corner_alpha, cap);
    let both = vec![cap_constraint, Constraint::Parabola];

    if c2 > T::zero() {
        // Rising in γ: the optimum is on the cap.
        if c1 == T::zero() {
            return Optimum::build(
                class,
                seed(T::zero(), cap),
                spec,
                vec![cap_constraint],
                Some([corner(-T::one()), corner(T::one())]),
            );
        }
        return Optimum::build(class, corner(c1.signum()), spec, both, None);
    }
    if c2 == T::zero() {
        return Optimum::build(class, corner(c1.signum()), spec, both, None);
    }
    // Falling in γ: maximize c1 α + c2 (α² − 1) along the parabola.
    let stationary = -c1 / (T::lit(2.0) * c2);
    if stationary.abs() >= corner_alpha {
        return Optimum::build(class, corner(stationary.signum()), spec, both, None);
    }
    Optimum::build(
        class,
        on_parabola(stationary),
        spec,
        vec![Constraint::Parabola],
        None,
    )
}

fn seed<T: Real>(alpha: T, gamma: T) -> CovariantSeed<T> {
    CovariantSeed { alpha, gamma }
}

/// `√(1 + cap)`, shrunk by a few ulps if rounding puts it outside the
/// parabola.
fn parabola_corner<T: Real>(cap: T) -> T {
    let mut a = (T::one() + cap).sqrt();
    while Constraint::Parabola.slack(&seed(a, cap)) < T::zero() {
        a *= T::one() - T::epsilon();
    }
    a
}

/// `(α, α² − 1)`, nudged upward if rounding leaves it outside the region.
fn on_parabola<T: Real>(alpha: T) -> CovariantSeed<T> {
    let mut s = seed(alpha, alpha * alpha - T::one());
    while Constraint::Parabola.slack(&s) < T::zero() {
        s.gamma = s.gamma + T::epsilon() * s.gamma.abs().max(T::one());
    }
    s
}

/// Exhaustive scan of a `grid × grid` lattice over `[−3, 3]²`, keeping the
/// best admissible point. Ties keep the lowest lattice index, so the result
/// does not depend on how rows are split across threads.
pub fn brute_force_optimum<T: Real>(
    spec: &FidelitySpec<T>,
    class: MeasurementClass,
    grid: usize,
) -> Optimum<T> {
    assert!(grid >= 2, "lattice needs at least two points per side");
    let lo = -T::lit(3.0);
    let step = T::lit(6.0) / T::count(grid - 1);
    let coord = |i: usize| lo + step * T::count(i);

    let best = (0..grid)
        .into_par_iter()
        .filter_map(|i| {
            let alpha = coord(i);
            let mut row_best: Option<(T, usize, usize)> = None;
            for j in 0..grid {
                let s = seed(alpha, coord(j));
                if !is_admissible(&s, class) {
                    continue;
                }
                let v = average_fidelity(&s, spec);
                if row_best.is_none_or(|(b, _, _)| v > b) {
                    row_best = Some((v, i, j));
                }
            }
            row_best
        })
        .reduce_with(|a, b| {
            if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                b
            } else {
                a
            }
        });

    let (_, i, j) = best.expect("lattice over [-3,3]^2 contains admissible points");
    let s = seed(coord(i), coord(j));
    let tol = T::lit(ACTIVE_TOLERANCE);
    let active = class
        .constraints()
        .iter()
        .copied()
        .filter(|c| c.slack(&s).abs() <= tol)
        .collect();
    let (c1, c2) = spec.objective_gradient();
    Optimum {
        class,
        seed: s,
        value: average_fidelity(&s, spec),
        active_constraints: active,
        tie: None,
        degenerate: c1 == T::zero() && c2 == T::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidelity::NamedFidelity;

    fn spec(f0: f64, f1: f64, f2: f64) -> FidelitySpec<f64> {
        FidelitySpec::new(f0, f1, f2).unwrap()
    }

    #[test]
    fn overlap_optima() {
        let s = NamedFidelity::Overlap.spec::<f64>();
        let par = optimize(&s, MeasurementClass::CollectiveParallel);
        assert_eq!(par.seed, seed(1.5, 1.0));
        assert_eq!(par.value, 0.75);
        let anti = optimize(&s, MeasurementClass::CollectiveAntiparallel);
        assert!((anti.seed.alpha - 3f64.sqrt()).abs() < 1e-15);
        assert!((anti.value - (0.5 + 1.0 / (2.0 * 3f64.sqrt()))).abs() < 1e-12);
        let locc = optimize(&s, MeasurementClass::Locc);
        assert!((locc.seed.alpha - 2f64.sqrt()).abs() < 1e-15);
        assert!((locc.value - (0.5 + 1.0 / (3.0 * 2f64.sqrt()))).abs() < 1e-12);
        for o in [par, anti, locc] {
            assert!(o.certificate_holds(), "{o:?}");
            assert!(o.is_unique());
        }
    }

    #[test]
    fn plane_optima() {
        let s = NamedFidelity::Plane.spec::<f64>();
        let par = optimize(&s, MeasurementClass::CollectiveParallel);
        assert_eq!(par.seed, seed(0.0, -2.0));
        assert!((par.value - 0.8).abs() < 1e-12);
        for class in [MeasurementClass::CollectiveAntiparallel, MeasurementClass::Locc] {
            let o = optimize(&s, class);
            assert_eq!(o.seed.alpha, 0.0);
            assert_eq!(o.seed.gamma, -1.0);
            assert!((o.value - 11.0 / 15.0).abs() < 1e-12);
            assert_eq!(o.active_constraints, vec![Constraint::Parabola]);
        }
    }

    #[test]
    fn degenerate_objective() {
        for class in MeasurementClass::ALL {
            let o = optimize(&spec(0.4, 0.0, 0.0), class);
            assert!(o.degenerate);
            assert_eq!(o.seed, seed(0.0, 0.0));
            assert_eq!(o.value, 0.4);
        }
    }

    #[test]
    fn top_edge_tie_returns_midpoint() {
        let o = optimize(&spec(0.0, 0.0, 1.0), MeasurementClass::CollectiveParallel);
        assert_eq!(o.seed, seed(0.0, 1.0));
        assert_eq!(o.active_constraints, vec![Constraint::GammaAtMostOne]);
        assert_eq!(o.tie, Some([seed(1.5, 1.0), seed(-1.5, 1.0)]));
        assert!(o.certificate_holds());
    }

    #[test]
    fn side_edge_tie_returns_midpoint() {
        // gradient (c1, c2) ∝ (1, -1/2): f1/3 = 1, f2/10 = -1/2
        let o = optimize(&spec(0.0, 3.0, -5.0), MeasurementClass::CollectiveParallel);
        assert_eq!(o.seed, seed(0.75, -0.5));
        assert_eq!(o.active_constraints, vec![Constraint::DownDown]);
        assert!(o.tie.is_some());
        assert!(o.certificate_holds());
    }

    #[test]
    fn cap_tie_for_antiparallel() {
        let o = optimize(&spec(0.0, 0.0, 1.0), MeasurementClass::CollectiveAntiparallel);
        assert_eq!(o.seed, seed(0.0, 2.0));
        assert_eq!(o.active_constraints, vec![Constraint::GammaAtMostTwo]);
        assert!(o.certificate_holds());
    }

    #[test]
    fn interior_parabola_point() {
        // c1 = 0.1, c2 = -0.1 -> alpha* = 0.5
        let o = optimize(&spec(0.0, 0.3, -1.0), MeasurementClass::Locc);
        assert!((o.seed.alpha - 0.5).abs() < 1e-15);
        assert!((o.seed.gamma + 0.75).abs() < 1e-15);
        assert!(o.certificate_holds());
    }

    #[test]
    fn brute_force_agrees_on_named_fidelities() {
        let o = brute_force_optimum(
            &NamedFidelity::Overlap.spec::<f64>(),
            MeasurementClass::CollectiveParallel,
            2001,
        );
        assert!((o.value - 0.75).abs() < 2e-3);
        let o = brute_force_optimum(&NamedFidelity::Plane.spec::<f64>(), MeasurementClass::Locc, 2001);
        assert!((o.value - 11.0 / 15.0).abs() < 2e-3);
    }

    #[test]
    fn brute_force_degenerate() {
        let o = brute_force_optimum(&spec(0.25, 0.0, 0.0), MeasurementClass::Locc, 101);
        assert_eq!(o.value, 0.25);
        assert!(o.degenerate);
    }
}
