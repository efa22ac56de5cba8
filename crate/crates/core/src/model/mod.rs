//! Spin-chain models: couplings, disorder, bases, Hamiltonians and local
//! Pauli operators.
//!
//! Basis convention: site `k` is bit `k` of a basis index (bit 0 least
//! significant) and a cleared bit is spin up, i.e. the `+1` eigenstate of
//! `σᶻ`.

mod basis;
mod disorder;
mod hamiltonian;
mod pauli;

pub use basis::{build_sector, Basis, SectorBasis};
pub use disorder::{sample_disorder, DisorderRealization};
pub use hamiltonian::{build_hamiltonian, build_ising_hamiltonian, HamiltonianMatrix};
pub use pauli::{local_pauli, Axis, PauliOperator};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest chain supported by the bit-packed basis.
pub const MAX_SITES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Interaction<T = f64> {
    NearestNeighbor,
    /// `J_ij = J / |i - j|^exponent`.
    PowerLaw { exponent: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    #[default]
    Open,
}

/// Static description of a spin chain.
///
/// Lattice spacing is one, so the nearest-neighbour coupling equals
/// `coupling` for both interaction kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec<T = f64> {
    pub n_sites: usize,
    pub interaction: Interaction<T>,
    pub coupling: T,
    pub anisotropy: T,
    #[serde(default)]
    pub boundary: Boundary,
}

impl<T: Real> ChainSpec<T> {
    pub fn new(n_sites: usize, interaction: Interaction<T>, coupling: T, anisotropy: T) -> Result<Self> {
        let spec = Self { n_sites, interaction, coupling, anisotropy, boundary: Boundary::Open };
        spec.validate()?;
        Ok(spec)
    }

    pub fn nearest_neighbor(n_sites: usize, anisotropy: T) -> Result<Self> {
        Self::new(n_sites, Interaction::NearestNeighbor, T::one(), anisotropy)
    }

    pub fn power_law(n_sites: usize, exponent: T, anisotropy: T) -> Result<Self> {
        Self::new(n_sites, Interaction::PowerLaw { exponent }, T::one(), anisotropy)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || self.n_sites > MAX_SITES {
            return Err(Error::InvalidChain(format!(
                "n_sites must lie in [2, {MAX_SITES}], got {}",
                self.n_sites
            )));
        }
        if !(self.coupling > T::zero()) || !self.coupling.is_finite() {
            return Err(Error::InvalidChain(format!("coupling must be positive, got {}", self.coupling)));
        }
        if !self.anisotropy.is_finite() {
            return Err(Error::InvalidChain("anisotropy must be finite".into()));
        }
        if let Interaction::PowerLaw { exponent } = self.interaction {
            if !(exponent > T::zero()) || !exponent.is_finite() {
                return Err(Error::InvalidChain(format!("power-law exponent must be positive, got {exponent}")));
            }
        }
        Ok(())
    }

    pub fn with_sites(&self, n_sites: usize) -> Result<Self> {
        let spec = Self { n_sites, ..*self };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_anisotropy(&self, anisotropy: T) -> Self {
        Self { anisotropy, ..*self }
    }

    /// Coupling between two sites at distance `r` (zero for `r = 0`).
    pub fn coupling_at(&self, r: usize) -> T {
        if r == 0 {
            return T::zero();
        }
        match self.interaction {
            Interaction::NearestNeighbor if r == 1 => self.coupling,
            Interaction::NearestNeighbor => T::zero(),
            Interaction::PowerLaw { exponent } => self.coupling / T::from_usize(r).unwrap().powf(exponent),
        }
    }

    /// Symmetric coupling matrix `J_ij` with zero diagonal.
    pub fn couplings(&self) -> Array2<T> {
        Array2::from_shape_fn((self.n_sites, self.n_sites), |(i, j)| self.coupling_at(i.abs_diff(j)))
    }
}

/// Builds the coupling matrix after validating `spec`.
pub fn build_couplings<T: Real>(spec: &ChainSpec<T>) -> Result<Array2<T>> {
    spec.validate()?;
    Ok(spec.couplings())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_examples() {
        let pl3 = ChainSpec::power_law(5, 3.0, 0.0).unwrap();
        assert_eq!(build_couplings(&pl3).unwrap()[[0, 2]], 0.125);
        let nn = ChainSpec::nearest_neighbor(5, 0.0).unwrap();
        assert_eq!(nn.couplings()[[1, 3]], 0.0);
        assert_eq!(nn.couplings()[[1, 2]], 1.0);
        let pl6 = ChainSpec::power_law(5, 6.0, 0.0).unwrap();
        assert_eq!(pl6.couplings()[[4, 2]], 1.0 / 64.0);
    }

    #[test]
    fn couplings_symmetric_with_zero_diagonal() {
        let spec = ChainSpec::power_law(7, 1.7, -2.0).unwrap();
        let j = spec.couplings();
        for a in 0..7 {
            assert_eq!(j[[a, a]], 0.0);
            for b in 0..7 {
                assert_eq!(j[[a, b]], j[[b, a]]);
            }
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(ChainSpec::<f64>::nearest_neighbor(1, 0.0).is_err());
        assert!(ChainSpec::power_law(4, 0.0, 0.0).is_err());
        assert!(ChainSpec::power_law(4, -1.0, 0.0).is_err());
        assert!(ChainSpec::new(4, Interaction::NearestNeighbor, 0.0, 0.0).is_err());
    }

    #[test]
    fn nearest_neighbor_element_is_coupling_for_every_exponent() {
        for alpha in [0.5, 1.0, 3.0, 6.0, 12.0] {
            let spec = ChainSpec::new(4, Interaction::PowerLaw { exponent: alpha }, 2.5, 0.0).unwrap();
            assert_eq!(spec.couplings()[[1, 2]], 2.5);
        }
    }
}
