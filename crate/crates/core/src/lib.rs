//! Simulation of operator growth in disordered XXZ spin chains.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] builds coupling matrices, disorder realizations, sector bases
//!   and sparse Hamiltonians;
//! * [`evolve`] turns a Hamiltonian into a propagator (exact block
//!   diagonalization or Lanczos/Krylov) acting on [`evolve::SpinState`]s;
//! * [`otoc`] evaluates out-of-time-order commutators by quantum typicality,
//!   exact traces, single states, a short-time operator series and the Ising
//!   closed form;
//! * [`floquet`] describes π/2-pulse sequences, their toggling-frame
//!   averages and the driven echo protocol;
//! * [`analysis`] runs disorder ensembles and extracts light cones,
//!   distributions, slow fractions and initial-state sampling statistics.
//!
//! Numerical kernels are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the pipelines use. Pulse
//! sequence bookkeeping is generic over [`Field`] and also runs on exact
//! rationals ([`ExactSequence`]).

pub mod analysis;
pub mod error;
pub mod evolve;
pub mod floquet;
pub mod linalg;
pub mod model;
pub mod otoc;
pub mod rng;
pub mod scalar;

extern crate blas_src;
extern crate openblas_src;

pub use error::{Error, Result};
pub use scalar::{Field, Real};

pub type Chain = model::ChainSpec<f64>;
pub type Disorder = model::DisorderRealization<f64>;
pub type Hamiltonian = model::HamiltonianMatrix<f64>;
pub type State = evolve::SpinState<f64>;
pub type Spectral = evolve::SpectralPropagator<f64>;
pub type Propagator = evolve::Propagator<f64>;
pub type Series = otoc::OtocSeries<f64>;
pub type Sequence = floquet::PulseSequence<f64>;
pub type ExactSequence = floquet::PulseSequence<num_rational::Rational64>;
pub type Ensemble = analysis::EnsembleResult<f64>;
