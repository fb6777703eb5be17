//! Seeded Monte Carlo checks of the analytic fidelities.
//!
//! Trials are split into fixed-size chunks; chunk `k` draws from the ChaCha8
//! stream `k` of the master seed. Chunk statistics are merged in chunk order,
//! so reports are bit-identical whatever the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{vec3, BlochVector};
use crate::measurement::{is_admissible, CovariantSeed, MeasurementClass};
use crate::{Error, Real, Result};

/// Trials per RNG substream.
pub const CHUNK_TRIALS: usize = 1 << 14;

/// Outcome of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport<T> {
    pub trials: usize,
    pub mean_fidelity: T,
    /// Sample standard deviation over `√trials`; zero for a single trial.
    pub standard_error: T,
    pub rng_seed: u64,
    /// Accepted over proposed directions; 1 for samplers without rejection.
    pub acceptance_rate: T,
    /// Largest `density / envelope` seen by the rejection sampler.
    pub max_envelope_ratio: T,
}

impl<T: Real> SimulationReport<T> {
    /// `|mean − expected|` in units of the standard error.
    pub fn z_score(&self, expected: T) -> T {
        let diff = (self.mean_fidelity - expected).abs();
        if self.standard_error > T::zero() {
            diff / self.standard_error
        } else if diff == T::zero() {
            T::zero()
        } else {
            T::infinity()
        }
    }

    pub fn within(&self, expected: T, standard_errors: T) -> bool {
        self.z_score(expected) <= standard_errors
    }
}

/// The RNG for chunk `chunk` of a run seeded with `master`.
pub fn substream(master: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(chunk);
    rng
}

fn unit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.random::<f64>())
}

/// A direction uniform on the sphere: `cos θ` uniform on `[−1, 1]`, azimuth
/// uniform on `[0, 2π)`.
pub fn sample_uniform_direction<T: Real, R: Rng + ?Sized>(rng: &mut R) -> BlochVector<T> {
    let u = unit::<T, _>(rng) * T::lit(2.0) - T::one();
    let phi = unit::<T, _>(rng) * T::TAU();
    BlochVector::from_polar(u, phi)
}

/// One accepted draw from [`OutcomeSampler`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw<T> {
    pub direction: BlochVector<T>,
    pub proposals: u64,
    pub max_ratio: T,
}

/// Rejection sampler for guesses `n` with density
/// `1 + α(n·m) + (γ/2) P₂(n·m)` over the uniform sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeSampler<T> {
    seed: CovariantSeed<T>,
    envelope: T,
}

impl<T: Real> OutcomeSampler<T> {
    /// Requires the seed to be admissible for collective measurements on
    /// parallel or antiparallel spins, which makes the density nonnegative.
    pub fn new(seed: CovariantSeed<T>) -> Result<Self> {
        let admissible = is_admissible(&seed, MeasurementClass::CollectiveParallel)
            || is_admissible(&seed, MeasurementClass::CollectiveAntiparallel);
        let (lo, hi) = seed.density_range();
        if !admissible || lo < T::zero() {
            return Err(Error::InadmissibleSeed {
                alpha: seed.alpha.to_f64_lossy(),
                gamma: seed.gamma.to_f64_lossy(),
            });
        }
        Ok(Self { seed, envelope: hi })
    }

    /// The envelope constant `M = max_u density(u)`.
    pub fn envelope(&self) -> T {
        self.envelope
    }

    pub fn seed(&self) -> &CovariantSeed<T> {
        &self.seed
    }

    pub fn sample<R: Rng + ?Sized>(&self, m: &BlochVector<T>, rng: &mut R) -> Draw<T> {
        let mut proposals = 0;
        let mut max_ratio = T::zero();
        loop {
            proposals += 1;
            let n = sample_uniform_direction::<T, _>(rng);
            let ratio = self.seed.density_at(n.dot(m)) / self.envelope;
            max_ratio = max_ratio.max(ratio);
            if unit::<T, _>(rng) < ratio {
                return Draw {
                    direction: n,
                    proposals,
                    max_ratio,
                };
            }
        }
    }
}

/// Draws a guess for spins along `m` from the covariant measurement `seed`.
pub fn sample_outcome<T: Real, R: Rng + ?Sized>(
    seed: &CovariantSeed<T>,
    m: &BlochVector<T>,
    rng: &mut R,
) -> Result<BlochVector<T>> {
    Ok(OutcomeSampler::new(*seed)?.sample(m, rng).direction)
}

/// Running mean and sum of squared deviations, mergeable in a fixed order.
#[derive(Debug, Clone, Copy)]
struct Stats<T> {
    n: usize,
    mean: T,
    m2: T,
    proposals: u64,
    max_ratio: T,
}

impl<T: Real> Stats<T> {
    fn new() -> Self {
        Self {
            n: 0,
            mean: T::zero(),
            m2: T::zero(),
            proposals: 0,
            max_ratio: T::zero(),
        }
    }

    fn push(&mut self, x: T) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / T::count(self.n);
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return Self {
                proposals: self.proposals + other.proposals,
                max_ratio: self.max_ratio.max(other.max_ratio),
                ..other
            };
        }
        if other.n == 0 {
            return Self {
                proposals: self.proposals + other.proposals,
                max_ratio: self.max_ratio.max(other.max_ratio),
                ..self
            };
        }
        let n = self.n + other.n;
        let (na, nb, nn) = (T::count(self.n), T::count(other.n), T::count(n));
        let d = other.mean - self.mean;
        Self {
            n,
            mean: self.mean + d * nb / nn,
            m2: self.m2 + other.m2 + d * d * na * nb / nn,
            proposals: self.proposals + other.proposals,
            max_ratio: self.max_ratio.max(other.max_ratio),
        }
    }

    fn report(self, rng_seed: u64) -> SimulationReport<T> {
        let se = if self.n > 1 {
            (self.m2 / T::count(self.n - 1)).sqrt() / T::count(self.n).sqrt()
        } else {
            T::zero()
        };
        let acceptance_rate = if self.proposals == 0 {
            T::one()
        } else {
            T::count(self.n) / T::lit(self.proposals as f64)
        };
        SimulationReport {
            trials: self.n,
            mean_fidelity: self.mean,
            standard_error: se,
            rng_seed,
            acceptance_rate,
            max_envelope_ratio: self.max_ratio,
        }
    }
}

/// Runs `trials` trials in chunks, one substream per chunk.
fn run_chunked<T: Real>(
    trials: usize,
    rng_seed: u64,
    trial: impl Fn(&mut ChaCha8Rng, &mut Stats<T>) + Sync,
) -> Result<SimulationReport<T>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let partials: Vec<Stats<T>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(rng_seed, k as u64);
            let mut stats = Stats::new();
            let count = CHUNK_TRIALS.min(trials - k * CHUNK_TRIALS);
            for _ in 0..count {
                trial(&mut rng, &mut stats);
            }
            stats
        })
        .collect();
    let total = partials.into_iter().fold(Stats::new(), Stats::merge);
    Ok(total.report(rng_seed))
}

/// Estimates the average fidelity of the covariant measurement `seed`: `m`
/// uniform, the guess drawn by rejection sampling, score `f(n·m)`.
pub fn estimate_fidelity<T: Real>(
    seed: &CovariantSeed<T>,
    f: impl Fn(T) -> T + Sync,
    trials: usize,
    rng_seed: u64,
) -> Result<SimulationReport<T>> {
    let sampler = OutcomeSampler::new(*seed)?;
    run_chunked(trials, rng_seed, |rng, stats: &mut Stats<T>| {
        let m = sample_uniform_direction::<T, _>(rng);
        let draw = sampler.sample(&m, rng);
        stats.proposals += draw.proposals;
        stats.max_ratio = stats.max_ratio.max(draw.max_ratio);
        stats.push(f(draw.direction.dot(&m)));
    })
}

/// Orientation of the second spin relative to the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinAlignment {
    Parallel,
    Antiparallel,
}

/// The one-round local strategy: Alice measures spin along `a`, Bob along an
/// orthogonal `b`, and the guess is the normalized sum of the two outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectrixStrategy<T> {
    a: BlochVector<T>,
    b: BlochVector<T>,
}

impl<T: Real> Default for BisectrixStrategy<T> {
    fn default() -> Self {
        Self {
            a: BlochVector::unit_x(),
            b: BlochVector::unit_y(),
        }
    }
}

impl<T: Real> BisectrixStrategy<T> {
    pub fn new(a: BlochVector<T>, b: BlochVector<T>) -> Result<Self> {
        let dot = a.dot(&b);
        if dot.abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) {
            return Err(Error::NotOrthogonal {
                dot: dot.to_f64_lossy(),
            });
        }
        Ok(Self { a, b })
    }

    /// One trial with the first spin along `m`. For antiparallel spins Bob's
    /// spin points along `−m` and he reports the opposite of his outcome,
    /// which is the flipped version of the same measurement.
    pub fn trial<R: Rng + ?Sized>(
        &self,
        m: &BlochVector<T>,
        alignment: SpinAlignment,
        rng: &mut R,
    ) -> BlochVector<T> {
        let half = T::lit(0.5);
        let p_alice = (T::one() + m.dot(&self.a)) * half;
        let alice = if unit::<T, _>(rng) < p_alice { T::one() } else { -T::one() };
        let (bob_spin, report_sign) = match alignment {
            SpinAlignment::Parallel => (*m, T::one()),
            SpinAlignment::Antiparallel => (-*m, -T::one()),
        };
        let p_bob = (T::one() + bob_spin.dot(&self.b)) * half;
        let bob = if unit::<T, _>(rng) < p_bob { T::one() } else { -T::one() };
        let sum = vec3::add(
            &vec3::scale(&self.a.components(), alice),
            &vec3::scale(&self.b.components(), bob * report_sign),
        );
        BlochVector::from_normalized(vec3::scale(&sum, T::SQRT_2().recip()))
    }
}

/// A single bisectrix trial for parallel spins along `m`.
pub fn locc_bisectrix_trial<T: Real, R: Rng + ?Sized>(
    m: &BlochVector<T>,
    a: &BlochVector<T>,
    b: &BlochVector<T>,
    rng: &mut R,
) -> Result<BlochVector<T>> {
    Ok(BisectrixStrategy::new(*a, *b)?.trial(m, SpinAlignment::Parallel, rng))
}

/// Mean overlap fidelity `(1 + m·guess)/2` of the bisectrix strategy with
/// axes `x̂, ŷ` on parallel spins.
pub fn estimate_locc_strategy<T: Real>(trials: usize, rng_seed: u64) -> Result<SimulationReport<T>> {
    estimate_strategy(&BisectrixStrategy::default(), SpinAlignment::Parallel, trials, rng_seed)
}

pub fn estimate_strategy<T: Real>(
    strategy: &BisectrixStrategy<T>,
    alignment: SpinAlignment,
    trials: usize,
    rng_seed: u64,
) -> Result<SimulationReport<T>> {
    run_chunked(trials, rng_seed, |rng, stats: &mut Stats<T>| {
        let m = sample_uniform_direction::<T, _>(rng);
        let guess = strategy.trial(&m, alignment, rng);
        stats.proposals += 1;
        stats.push((T::one() + m.dot(&guess)) * T::lit(0.5));
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_direction_is_unit_and_reproducible() {
        let mut r1 = substream(7, 0);
        let mut r2 = substream(7, 0);
        let a: BlochVector<f64> = sample_uniform_direction(&mut r1);
        let b: BlochVector<f64> = sample_uniform_direction(&mut r2);
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-12);
        let mut r3 = substream(7, 1);
        assert_ne!(a, sample_uniform_direction(&mut r3));
    }

    #[test]
    fn trivial_seed_accepts_everything() {
        let sampler = OutcomeSampler::new(CovariantSeed::<f64>::default()).unwrap();
        assert_eq!(sampler.envelope(), 1.0);
        let mut rng = substream(1, 0);
        for _ in 0..100 {
            assert_eq!(sampler.sample(&BlochVector::unit_z(), &mut rng).proposals, 1);
        }
    }

    #[test]
    fn rejects_inadmissible_seed() {
        let bad = CovariantSeed::new(3.0, 0.0).unwrap();
        assert!(matches!(OutcomeSampler::new(bad), Err(Error::InadmissibleSeed { .. })));
        // nonnegative density but outside every region
        let outside = CovariantSeed::new(0.0, 3.0).unwrap();
        assert!(OutcomeSampler::new(outside).is_err());
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(estimate_locc_strategy::<f64>(0, 1).is_err());
    }

    #[test]
    fn single_trial_in_range() {
        let r = estimate_locc_strategy::<f64>(1, 3).unwrap();
        assert_eq!(r.trials, 1);
        assert!((0.0..=1.0).contains(&r.mean_fidelity));
        assert_eq!(r.standard_error, 0.0);
    }

    #[test]
    fn non_orthogonal_axes_rejected() {
        let a = BlochVector::<f64>::unit_x();
        let b = BlochVector::normalized([1.0, 1.0, 0.0]).unwrap();
        let mut rng = substream(0, 0);
        assert!(matches!(
            locc_bisectrix_trial(&BlochVector::unit_z(), &a, &b, &mut rng),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn bisectrix_output_is_unit() {
        let s = BisectrixStrategy::<f64>::default();
        let mut rng = substream(5, 0);
        for _ in 0..1000 {
            let m = sample_uniform_direction(&mut rng);
            let g = s.trial(&m, SpinAlignment::Parallel, &mut rng);
            assert!((g.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn stats_merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 101.0).collect();
        let mut all = Stats::new();
        xs.iter().for_each(|&x| all.push(x));
        let mut a = Stats::new();
        let mut b = Stats::new();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert!((merged.mean - all.mean).abs() < 1e-14);
        assert!((merged.m2 - all.m2).abs() < 1e-10);
    }
}
