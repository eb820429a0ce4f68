//! Seeded synthetic data generators.
//!
//! Both generators run on ChaCha8, a portable counter-based stream cipher
//! RNG, with normal variates produced by a Box-Muller transform of its
//! uniforms, so outputs are bit-reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DatasetError {
    #[error("n_per_class must be at least 1")]
    EmptyClass,
    #[error("sigma must be positive and finite, got {0}")]
    BadSigma(f64),
    #[error("noise sigma must be nonnegative and finite, got {0}")]
    BadNoise(f64),
    #[error("turns and radius_scale must be positive and finite")]
    BadShape,
    #[error("outlier fraction must lie in [0, 1), got {0}")]
    BadFraction(f64),
}

/// Two-arm Archimedean spiral: class 1 traces `r(θ) ∝ θ`, class 2 is its
/// point reflection through the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralSpec {
    pub n_per_class: usize,
    /// Total angular extent in revolutions.
    pub turns: f64,
    /// Isotropic Gaussian noise std in coordinate units.
    pub noise_sigma: f64,
    pub radius_scale: f64,
    pub seed: u64,
}

impl SpiralSpec {
    pub fn new(
        n_per_class: usize,
        turns: f64,
        noise_sigma: f64,
        radius_scale: f64,
        seed: u64,
    ) -> Result<Self, DatasetError> {
        if n_per_class == 0 {
            return Err(DatasetError::EmptyClass);
        }
        if !(turns.is_finite() && turns > 0.0 && radius_scale.is_finite() && radius_scale > 0.0) {
            return Err(DatasetError::BadShape);
        }
        if !(noise_sigma.is_finite() && noise_sigma >= 0.0) {
            return Err(DatasetError::BadNoise(noise_sigma));
        }
        Ok(Self {
            n_per_class,
            turns,
            noise_sigma,
            radius_scale,
            seed,
        })
    }

    /// Benchmark defaults: 200 points per class, 1.75 revolutions,
    /// noise 0.05, unit radius.
    pub fn benchmark(seed: u64) -> Self {
        Self::new(200, 1.75, 0.05, 1.0, seed).unwrap()
    }
}

/// Gaussian score mixture with an optional outlier fraction shifted away
/// from both class means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreMixtureSpec {
    pub mean1: f64,
    pub mean2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub n1: usize,
    pub n2: usize,
    pub outlier_fraction: f64,
    pub outlier_shift: f64,
    pub seed: u64,
}

impl ScoreMixtureSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mean1: f64,
        mean2: f64,
        sigma1: f64,
        sigma2: f64,
        n1: usize,
        n2: usize,
        outlier_fraction: f64,
        outlier_shift: f64,
        seed: u64,
    ) -> Result<Self, DatasetError> {
        if n1 == 0 || n2 == 0 {
            return Err(DatasetError::EmptyClass);
        }
        for &s in &[sigma1, sigma2] {
            if !(s.is_finite() && s > 0.0) {
                return Err(DatasetError::BadSigma(s));
            }
        }
        if !(0.0..1.0).contains(&outlier_fraction) {
            return Err(DatasetError::BadFraction(outlier_fraction));
        }
        Ok(Self {
            mean1,
            mean2,
            sigma1,
            sigma2,
            n1,
            n2,
            outlier_fraction,
            outlier_shift,
            seed,
        })
    }
}

/// Standard normal draw via Box-Muller on two uniforms from `rng`.
fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Generates the two spiral arms. Labels are +1 for class 1 and -1 for
/// class 2; each class-2 point reuses the class-1 parameter value, so with
/// zero noise the arms are exact point reflections of each other.
pub fn generate_spiral(spec: &SpiralSpec) -> (Vec<[f64; 2]>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut points = Vec::with_capacity(2 * spec.n_per_class);
    let mut labels = Vec::with_capacity(2 * spec.n_per_class);
    for _ in 0..spec.n_per_class {
        let u = 1.0 - rng.random::<f64>(); // (0, 1]
        let theta = 2.0 * std::f64::consts::PI * spec.turns * u;
        let r = spec.radius_scale * u;
        let base = [r * theta.cos(), r * theta.sin()];
        let n1 = [normal(&mut rng), normal(&mut rng)];
        let n2 = [normal(&mut rng), normal(&mut rng)];
        points.push([
            base[0] + spec.noise_sigma * n1[0],
            base[1] + spec.noise_sigma * n1[1],
        ]);
        labels.push(1.0);
        points.push([
            -base[0] + spec.noise_sigma * n2[0],
            -base[1] + spec.noise_sigma * n2[1],
        ]);
        labels.push(-1.0);
    }
    (points, labels)
}

/// Generates labeled scalar scores. The first `⌊fraction·n⌋` draws of each
/// class are shifted outward (away from both means) by `outlier_shift`.
pub fn generate_scores(spec: &ScoreMixtureSpec) -> (Vec<f64>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut scores = Vec::with_capacity(spec.n1 + spec.n2);
    let mut labels = Vec::with_capacity(spec.n1 + spec.n2);
    // Outward direction per class: away from the other class's mean.
    let dir1 = if spec.mean1 <= spec.mean2 { -1.0 } else { 1.0 };
    for (label, n, mean, sigma, dir) in [
        (0u8, spec.n1, spec.mean1, spec.sigma1, dir1),
        (1u8, spec.n2, spec.mean2, spec.sigma2, -dir1),
    ] {
        let outliers = (spec.outlier_fraction * n as f64).floor() as usize;
        for i in 0..n {
            let mut s = mean + sigma * normal(&mut rng);
            if i < outliers {
                s += dir * spec.outlier_shift;
            }
            scores.push(s);
            labels.push(label);
        }
    }
    (scores, labels)
}
