//! Covariant measurements on two spin-1/2 particles.
//!
//! Two spins point along an unknown direction `m`, uniformly distributed on
//! the sphere, either parallel (`m, m`) or antiparallel (`m, −m`). A covariant
//! measurement guesses a direction `n`; a fidelity function `f(n·m)` scores
//! the guess. The crate covers:
//!
//! * [`algebra`]: two-qubit operators in the spin basis, the partial spin
//!   flip, product states, rotations and a dense eigenvalue oracle;
//! * [`measurement`]: the two-parameter covariant POVM family and its three
//!   admissibility regions (collective parallel, collective antiparallel,
//!   LOCC-necessary), plus finite realizations on spherical 2-designs;
//! * [`fidelity`]: Legendre expansions and the average fidelity;
//! * [`optimizer`]: closed-form optimal measurements and a lattice oracle;
//! * [`monte_carlo`]: seeded simulations of the measurements and of the
//!   explicit local strategy.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `f64` aliases
//! below are what most callers want.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
mod error;
pub mod fidelity;
pub mod measurement;
pub mod monte_carlo;
pub mod optimizer;
pub mod quadrature;
mod scalar;

pub use error::{Error, MomentDeficiency, Result};
pub use scalar::Real;

pub use algebra::{antiparallel_state, parallel_state, trace_pair, BlochVector, Rotation, TwoSpinOperator};
pub use fidelity::{
    average_fidelity, average_fidelity_by_quadrature, project_legendre, Fidelity, FidelitySpec,
    NamedFidelity,
};
pub use measurement::{
    discretize, is_admissible, numeric_admissibility, oriented_element, outcome_density,
    seed_operator, Constraint, CovariantSeed, Design, DiscretePovm, MeasurementClass,
};
pub use monte_carlo::{estimate_fidelity, estimate_locc_strategy, SimulationReport};
pub use optimizer::{brute_force_optimum, optimize, Optimum};

pub type Direction = BlochVector<f64>;
pub type Operator = TwoSpinOperator<f64>;
pub type Seed = CovariantSeed<f64>;
pub type Spec = FidelitySpec<f64>;
pub type Povm = DiscretePovm<f64>;
pub type OptimumF64 = Optimum<f64>;
pub type Report = SimulationReport<f64>;
