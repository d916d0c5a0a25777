//! Run parameters shared by the verification suites.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("p-adic precision must be at least 2, got {0}")]
    Precision(u32),
    #[error("tolerance must be positive and finite, got {0}")]
    Tolerance(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// Relative tolerance for embedding-dependent quantities.
    pub tol: f64,
    /// Tolerance for identities that involve no square roots.
    pub exact_tol: f64,
    /// Sampled `τ` per catalog entry (and for the elliptic suite).
    pub tau_samples: usize,
    pub positivity_samples: usize,
    pub precision: u32,
    /// Good primes for the split check.
    pub split_primes: Vec<u64>,
    pub tau_re: (f64, f64),
    pub tau_im: (f64, f64),
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            tol: 1e-9,
            exact_tol: 1e-12,
            tau_samples: 100,
            positivity_samples: 1000,
            precision: 20,
            split_primes: vec![3, 5, 7, 11],
            tau_re: (-2.0, 2.0),
            tau_im: (0.1, 10.0),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.tau_samples == 0 || self.positivity_samples == 0 {
            return Err(ConfigError::ZeroSamples);
        }
        if self.precision < 2 {
            return Err(ConfigError::Precision(self.precision));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(ConfigError::Tolerance(self.tol));
        }
        Ok(())
    }

    pub fn sample_tau<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        Complex64::new(
            rng.gen_range(self.tau_re.0..self.tau_re.1),
            rng.gen_range(self.tau_im.0..self.tau_im.1),
        )
    }
}
