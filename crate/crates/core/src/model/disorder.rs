use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::scalar::Real;

/// One draw of the on-site fields `h_i`, uniform on `[-strength, strength]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization<T = f64> {
    pub fields: Vec<T>,
    pub strength: T,
    pub seed: u64,
}

impl<T: Real> DisorderRealization<T> {
    pub fn clean(n_sites: usize) -> Self {
        Self { fields: vec![T::zero(); n_sites], strength: T::zero(), seed: 0 }
    }

    /// Explicit fields, with the strength set to their largest magnitude.
    pub fn from_fields(fields: Vec<T>) -> Self {
        let strength = fields.iter().fold(T::zero(), |m, h| m.max(h.abs()));
        Self { fields, strength, seed: 0 }
    }

    pub fn n_sites(&self) -> usize {
        self.fields.len()
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            fields: self.fields.iter().map(|&h| h * factor).collect(),
            strength: self.strength * factor.abs(),
            seed: self.seed,
        }
    }
}

/// Draws `n_sites` independent fields uniformly from `[-strength, strength]`.
pub fn sample_disorder<T: Real>(strength: T, n_sites: usize, seed: u64) -> Result<DisorderRealization<T>> {
    if !(strength >= T::zero()) {
        return Err(Error::NegativeDisorder(strength.to_f64().unwrap_or(f64::NAN)));
    }
    let mut rng = rng_from_seed(seed);
    let fields = (0..n_sites)
        .map(|_| {
            let u: f64 = rng.random();
            strength * T::lit(2.0 * u - 1.0)
        })
        .collect();
    Ok(DisorderRealization { fields, strength, seed })
}
