//! Time evolution: exact block diagonalization and Lanczos propagation.

mod grid;
mod krylov;
mod spectral;
mod state;

use std::sync::Arc;

pub use grid::TimeGrid;
pub use krylov::{KrylovOptions, KrylovPropagator};
pub use spectral::{EigenBlock, EigenOperator, OperatorPiece, SpectralPropagator, DEFAULT_DENSE_CAP};
pub use state::SpinState;

use crate::error::Result;
use crate::model::{Basis, HamiltonianMatrix};
use crate::scalar::Real;

/// A propagator `exp(-iHt)` chosen by problem size.
#[derive(Debug, Clone)]
pub enum Propagator<T = f64> {
    Spectral(SpectralPropagator<T>),
    Krylov(KrylovPropagator<T>),
}

impl<T: Real> Propagator<T> {
    /// Exact diagonalization when every block fits under `dense_cap`,
    /// Krylov otherwise.
    pub fn for_hamiltonian(h: HamiltonianMatrix<T>, dense_cap: usize, options: KrylovOptions<T>) -> Result<Self> {
        let largest = h.components().iter().map(Vec::len).max().unwrap_or(0);
        if largest <= dense_cap {
            Ok(Propagator::Spectral(SpectralPropagator::diagonalize_with_cap(&h, dense_cap)?))
        } else {
            Ok(Propagator::Krylov(KrylovPropagator::new(Arc::new(h), options)?))
        }
    }

    pub fn basis(&self) -> &Basis {
        match self {
            Propagator::Spectral(p) => p.basis(),
            Propagator::Krylov(p) => p.hamiltonian().basis(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Propagator::Spectral(_))
    }

    pub fn evolve(&self, psi: &SpinState<T>, t: T) -> Result<SpinState<T>> {
        match self {
            Propagator::Spectral(p) => p.evolve(psi, t),
            Propagator::Krylov(p) => p.evolve(psi, t),
        }
    }
}
