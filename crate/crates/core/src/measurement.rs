//! The two-parameter family of covariant measurements on two spins.
//!
//! After imposing rotation covariance, exchange symmetry and completeness,
//! the POVM density for the guess `+ẑ` is
//!
//! ```text
//! a_ẑ = I + α (Sz⊗I + I⊗Sz) + γ (2 Sz⊗Sz − Sx⊗Sx − Sy⊗Sy)
//! ```
//!
//! and the density for a guess `n` is its rotated copy. The density is taken
//! with respect to the uniform probability measure on the sphere of guesses.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::algebra::{
    antiparallel_state, parallel_state, trace_pair, vec3, BlochVector, Rotation, TwoSpinOperator,
};
use crate::error::MomentDeficiency;
use crate::{Error, Real, Result};

/// The pair `(α, γ)` fixing the covariant POVM.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CovariantSeed<T> {
    pub alpha: T,
    pub gamma: T,
}

impl<T: Real> CovariantSeed<T> {
    pub fn new(alpha: T, gamma: T) -> Result<Self> {
        if !alpha.is_finite() || !gamma.is_finite() {
            return Err(Error::NonFinite("seed"));
        }
        Ok(Self { alpha, gamma })
    }

    /// The seed operator `a_ẑ`.
    pub fn operator(&self) -> TwoSpinOperator<T> {
        let (a, g) = (self.alpha, self.gamma);
        let z = T::zero();
        TwoSpinOperator::from_parts(
            T::one(),
            [z, z, a],
            [z, z, a],
            [[-g, z, z], [z, -g, z], [z, z, g + g]],
        )
    }

    /// Spectrum of the seed operator, ascending: `1 ± α + γ/2` on `|↑↑⟩`,
    /// `|↓↓⟩`, `1 − γ` on the triplet-0 state and `1` on the singlet.
    pub fn spectrum(&self) -> [T; 4] {
        let (a, g) = (self.alpha, self.gamma);
        let h = g * T::lit(0.5);
        sorted([T::one() + a + h, T::one() - a + h, T::one() - g, T::one()])
    }

    /// Spectrum of the partially flipped seed operator, ascending:
    /// `1 − γ/2` twice on `{|↑↑⟩, |↓↓⟩}` and `1 + γ/2 ± √(α² + γ²/4)` on the
    /// `{|↑↓⟩, |↓↑⟩}` block.
    pub fn flipped_spectrum(&self) -> [T; 4] {
        let (a, g) = (self.alpha, self.gamma);
        let h = g * T::lit(0.5);
        let r = (a * a + h * h).sqrt();
        sorted([T::one() - h, T::one() - h, T::one() + h - r, T::one() + h + r])
    }

    /// `1 + αu + (γ/2) P₂(u)` with `u = n·m`.
    pub fn density_at(&self, u: T) -> T {
        T::one() + self.alpha * u + self.gamma * T::lit(0.5) * legendre_p2(u)
    }

    /// Minimum and maximum of [`density_at`](Self::density_at) over
    /// `u ∈ [−1, 1]`.
    pub fn density_range(&self) -> (T, T) {
        // density = (1 − γ/4) + αu + (3γ/4)u²
        let curvature = T::lit(0.75) * self.gamma;
        let mut lo = self.density_at(-T::one()).min(self.density_at(T::one()));
        let mut hi = self.density_at(-T::one()).max(self.density_at(T::one()));
        if curvature != T::zero() {
            let u = -self.alpha / (T::lit(2.0) * curvature);
            if u.abs() <= T::one() {
                let v = self.density_at(u);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }
}

fn sorted<T: Real>(mut v: [T; 4]) -> [T; 4] {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}

pub(crate) fn legendre_p2<T: Real>(u: T) -> T {
    (T::lit(3.0) * u * u - T::one()) * T::lit(0.5)
}

/// Which positivity conditions a measurement must meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasurementClass {
    /// Collective measurement on parallel spins: `a_n ≥ 0`.
    CollectiveParallel,
    /// Collective measurement on antiparallel spins: the flipped `a_n ≥ 0`.
    CollectiveAntiparallel,
    /// Both of the above, a necessary condition for realizability by local
    /// operations and classical communication.
    Locc,
}

impl MeasurementClass {
    pub const ALL: [MeasurementClass; 3] = [
        MeasurementClass::CollectiveParallel,
        MeasurementClass::CollectiveAntiparallel,
        MeasurementClass::Locc,
    ];

    /// The inequalities cutting out this class's region in the `(α, γ)` plane.
    pub fn constraints(self) -> &'static [Constraint] {
        use Constraint::*;
        match self {
            MeasurementClass::CollectiveParallel => &[GammaAtMostOne, UpUp, DownDown],
            MeasurementClass::CollectiveAntiparallel => &[GammaAtMostTwo, Parabola],
            MeasurementClass::Locc => &[GammaAtMostOne, Parabola],
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            MeasurementClass::CollectiveParallel => "parallel",
            MeasurementClass::CollectiveAntiparallel => "antiparallel",
            MeasurementClass::Locc => "locc",
        }
    }
}

impl fmt::Display for MeasurementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for MeasurementClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "parallel" | "collective-parallel" => Ok(Self::CollectiveParallel),
            "antiparallel" | "collective-antiparallel" => Ok(Self::CollectiveAntiparallel),
            "locc" => Ok(Self::Locc),
            other => Err(Error::InvalidArgument(format!(
                "unknown measurement class '{other}' (expected parallel, antiparallel or locc)"
            ))),
        }
    }
}

/// One inequality `slack(α, γ) ≥ 0` bounding an admissible region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    /// `1 − γ ≥ 0`
    GammaAtMostOne,
    /// `2 − γ ≥ 0`
    GammaAtMostTwo,
    /// `1 + α + γ/2 ≥ 0`
    UpUp,
    /// `1 − α + γ/2 ≥ 0`
    DownDown,
    /// `1 + γ − α² ≥ 0`
    Parabola,
}

impl Constraint {
    pub fn slack<T: Real>(self, seed: &CovariantSeed<T>) -> T {
        let (a, g) = (seed.alpha, seed.gamma);
        let one = T::one();
        match self {
            Constraint::GammaAtMostOne => one - g,
            Constraint::GammaAtMostTwo => T::lit(2.0) - g,
            Constraint::UpUp => one + a + g * T::lit(0.5),
            Constraint::DownDown => one - a + g * T::lit(0.5),
            Constraint::Parabola => one + g - a * a,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Constraint::GammaAtMostOne => "gamma<=1",
            Constraint::GammaAtMostTwo => "gamma<=2",
            Constraint::UpUp => "1+alpha+gamma/2>=0",
            Constraint::DownDown => "1-alpha+gamma/2>=0",
            Constraint::Parabola => "1+gamma-alpha^2>=0",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn seed_operator<T: Real>(seed: &CovariantSeed<T>) -> TwoSpinOperator<T> {
    seed.operator()
}

/// The POVM density for guess `n`: the seed operator rotated from `ẑ` to `n`.
pub fn oriented_element<T: Real>(seed: &CovariantSeed<T>, n: &BlochVector<T>) -> TwoSpinOperator<T> {
    let r = Rotation::between(&BlochVector::unit_z(), n);
    seed.operator().rotate(&r)
}

/// Probability density of guessing `n` when both spins point along `m`.
pub fn outcome_density<T: Real>(seed: &CovariantSeed<T>, n: &BlochVector<T>, m: &BlochVector<T>) -> T {
    seed.density_at(n.dot(m))
}

/// The closed-form region test, evaluated without tolerance. Boundary points
/// are admissible.
pub fn is_admissible<T: Real>(seed: &CovariantSeed<T>, class: MeasurementClass) -> bool {
    class
        .constraints()
        .iter()
        .all(|c| c.slack(seed) >= T::zero())
}

/// Smallest eigenvalue that decides admissibility for `class`, from the dense
/// eigensolver.
pub fn relevant_min_eigenvalue<T: Real>(seed: &CovariantSeed<T>, class: MeasurementClass) -> T {
    let op = seed.operator();
    match class {
        MeasurementClass::CollectiveParallel => op.min_eigenvalue(),
        MeasurementClass::CollectiveAntiparallel => op.partial_spin_flip().min_eigenvalue(),
        MeasurementClass::Locc => op
            .min_eigenvalue()
            .min(op.partial_spin_flip().min_eigenvalue()),
    }
}

/// Admissibility decided by diagonalizing the seed operator (and its flip).
pub fn numeric_admissibility<T: Real>(
    seed: &CovariantSeed<T>,
    class: MeasurementClass,
    tol: T,
) -> bool {
    relevant_min_eigenvalue(seed, class) >= -tol
}

/// Tolerance on the 2-design moment conditions.
pub const DESIGN_TOLERANCE: f64 = 1e-10;

/// Checks `Σ nₖ = 0` and `(1/K) Σ nₖnₖᵀ = I/3` to within `tol` per entry.
pub fn check_two_design<T: Real>(
    directions: &[BlochVector<T>],
    tol: T,
) -> std::result::Result<(), MomentDeficiency> {
    let k = directions.len();
    let mut first = vec3::zero::<T>();
    let mut second = vec3::zero_mat::<T>();
    for n in directions {
        let v = n.components();
        first = vec3::add(&first, &v);
        second = vec3::mat_zip(&second, &vec3::outer(&v, &v), |a, b| a + b);
    }
    let (first_dev, second_dev) = if k == 0 {
        (T::zero(), T::one() / T::lit(3.0))
    } else {
        let inv = T::count(k).recip();
        let first_dev = first.iter().fold(T::zero(), |m, x| m.max(x.abs() * inv));
        let third = T::one() / T::lit(3.0);
        let mut second_dev = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { third } else { T::zero() };
                second_dev = second_dev.max((second[i][j] * inv - want).abs());
            }
        }
        (first_dev, second_dev)
    };
    if k == 0 || first_dev > tol || second_dev > tol {
        return Err(MomentDeficiency {
            count: k,
            first_moment: first_dev.to_f64_lossy(),
            second_moment: second_dev.to_f64_lossy(),
            tolerance: tol.to_f64_lossy(),
        });
    }
    Ok(())
}

/// One outcome of a finite POVM.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmElement<T> {
    pub direction: BlochVector<T>,
    pub weight: T,
    /// The density; the POVM effect is `weight · operator`.
    pub operator: TwoSpinOperator<T>,
}

/// A finite covariant POVM built on a spherical 2-design.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePovm<T> {
    pub seed: CovariantSeed<T>,
    pub elements: Vec<PovmElement<T>>,
}

impl<T: Real> DiscretePovm<T> {
    /// `Σ weight · operator`.
    pub fn completeness_sum(&self) -> TwoSpinOperator<T> {
        self.elements
            .iter()
            .map(|e| e.operator * e.weight)
            .sum()
    }

    /// Max coefficient deviation of the completeness sum from the identity.
    pub fn completeness_residual(&self) -> T {
        self.completeness_sum()
            .max_coeff_diff(&TwoSpinOperator::identity())
    }

    pub fn total_weight(&self) -> T {
        self.elements.iter().map(|e| e.weight).sum()
    }

    /// Whether every effect is positive semidefinite within `tol`.
    pub fn is_positive(&self, tol: T) -> bool {
        self.elements
            .iter()
            .all(|e| e.operator.min_eigenvalue() >= -tol)
    }

    /// Probability of each outcome for the parallel state along `m`.
    pub fn outcome_probabilities(&self, m: &BlochVector<T>) -> Vec<T> {
        let rho = parallel_state(m);
        self.elements
            .iter()
            .map(|e| e.weight * trace_pair(&rho, &e.operator))
            .collect()
    }

    /// Probability of each outcome of the flipped POVM for the antiparallel
    /// state along `m`.
    pub fn flipped_outcome_probabilities(&self, m: &BlochVector<T>) -> Vec<T> {
        let rho = antiparallel_state(m);
        self.elements
            .iter()
            .map(|e| e.weight * trace_pair(&rho, &e.operator.partial_spin_flip()))
            .collect()
    }
}

/// Realizes the covariant POVM on a finite direction set with equal weights.
pub fn discretize<T: Real>(
    seed: &CovariantSeed<T>,
    directions: &[BlochVector<T>],
) -> Result<DiscretePovm<T>> {
    let tol = T::lit(DESIGN_TOLERANCE).max(T::epsilon() * T::lit(64.0));
    check_two_design(directions, tol).map_err(Error::NotDesign)?;
    let weight = T::count(directions.len()).recip();
    let elements = directions
        .iter()
        .map(|n| PovmElement {
            direction: *n,
            weight,
            operator: oriented_element(seed, n),
        })
        .collect();
    Ok(DiscretePovm {
        seed: *seed,
        elements,
    })
}

/// Standard spherical designs of strength at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Design {
    Tetrahedron,
    Octahedron,
    Cube,
    Icosahedron,
}

impl Design {
    pub fn directions<T: Real>(self) -> Vec<BlochVector<T>> {
        let raw: Vec<[f64; 3]> = match self {
            Design::Tetrahedron => vec![
                [1.0, 1.0, 1.0],
                [1.0, -1.0, -1.0],
                [-1.0, 1.0, -1.0],
                [-1.0, -1.0, 1.0],
            ],
            Design::Octahedron => vec![
                [1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
            ],
            Design::Cube => {
                let mut v = Vec::with_capacity(8);
                for sx in [-1.0, 1.0] {
                    for sy in [-1.0, 1.0] {
                        for sz in [-1.0, 1.0] {
                            v.push([sx, sy, sz]);
                        }
                    }
                }
                v
            }
            Design::Icosahedron => {
                let phi = (1.0 + 5f64.sqrt()) / 2.0;
                let mut v = Vec::with_capacity(12);
                for s1 in [-1.0, 1.0] {
                    for s2 in [-1.0, 1.0] {
                        v.push([0.0, s1, s2 * phi]);
                        v.push([s1, s2 * phi, 0.0]);
                        v.push([s2 * phi, 0.0, s1]);
                    }
                }
                v
            }
        };
        raw.into_iter()
            .map(|p| BlochVector::normalized(p.map(T::lit)).expect("nonzero design vertex"))
            .collect()
    }
}

impl FromStr for Design {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tetrahedron" => Ok(Design::Tetrahedron),
            "octahedron" => Ok(Design::Octahedron),
            "cube" => Ok(Design::Cube),
            "icosahedron" => Ok(Design::Icosahedron),
            other => Err(Error::InvalidArgument(format!("unknown design '{other}'"))),
        }
    }
}

/// Parses a direction list: one unit vector per line as three
/// whitespace-separated decimals. Blank lines and `#` comments are skipped.
pub fn parse_directions<T: Real>(text: &str) -> Result<Vec<BlochVector<T>>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(format!("expected 3 numbers, found {}", fields.len())));
        }
        let mut v = [T::zero(); 3];
        for (slot, field) in v.iter_mut().zip(&fields) {
            let x: f64 = field
                .parse()
                .map_err(|_| parse_err(format!("malformed number '{field}'")))?;
            *slot = T::lit(x);
        }
        out.push(BlochVector::new(v).map_err(|e| parse_err(e.to_string()))?);
    }
    Ok(out)
}

pub fn load_directions<T: Real>(path: &Path) -> Result<Vec<BlochVector<T>>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    parse_directions(&text)
}
