use ndarray::Array1;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::Basis;
use crate::scalar::Real;

/// A pure state: complex amplitudes over a basis.
#[derive(Debug, Clone)]
pub struct SpinState<T = f64> {
    pub amplitudes: Array1<Complex<T>>,
    pub basis: Basis,
}

impl<T: Real> SpinState<T> {
    pub fn new(basis: Basis, amplitudes: Array1<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: amplitudes.len() });
        }
        Ok(Self { amplitudes, basis })
    }

    /// Computational basis state with the given bitstring.
    pub fn basis_state(basis: Basis, bits: u64) -> Result<Self> {
        let k = basis
            .index_of(bits)
            .ok_or_else(|| Error::InvalidArgument(format!("bitstring {bits:#b} not in basis")))?;
        let mut amplitudes = Array1::from_elem(basis.dim(), Complex::new(T::zero(), T::zero()));
        amplitudes[k] = Complex::new(T::one(), T::zero());
        Ok(Self { amplitudes, basis })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > T::zero()) {
            return Err(Error::InvalidArgument("cannot normalize a zero state".into()));
        }
        self.amplitudes.mapv_inplace(|a| a / n);
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(self.amplitudes.iter().zip(other.amplitudes.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn distance(&self, other: &Self) -> Result<T> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<T>()
            .sqrt())
    }
}
