use num_complex::Complex;

use super::sequence::{PulseAxis, PulseSequence};
use crate::error::{Error, Result};
use crate::evolve::{SpectralPropagator, SpinState};
use crate::model::{build_hamiltonian, Axis, HamiltonianMatrix, ChainSpec, DisorderRealization};
use crate::scalar::Real;

/// Applies the global pulse `Π_k exp(∓iπ/4 σᵃ_k)` in place (full basis).
pub fn apply_global_pulse<T: Real>(psi: &mut SpinState<T>, pulse: PulseAxis) -> Result<()> {
    if psi.basis.is_sector() {
        return Err(Error::LeavesSector);
    }
    let n = psi.basis.n_sites();
    let r = T::one() / T::two().sqrt();
    let s = if pulse.is_positive() { T::one() } else { -T::one() };
    // (I − i s σᵃ)/√2 on (up, down); σˣ = [[0,1],[1,0]], σʸ = [[0,−i],[i,0]].
    let (d, off_ud, off_du) = match pulse.axis() {
        Axis::X => {
            let o = Complex::new(T::zero(), -s * r);
            (Complex::new(r, T::zero()), o, o)
        }
        Axis::Y => (Complex::new(r, T::zero()), Complex::new(-s * r, T::zero()), Complex::new(s * r, T::zero())),
        Axis::Z => return Err(Error::InvalidSequence("pulses must be transverse".into())),
    };
    let amps = psi.amplitudes.as_slice_mut().expect("contiguous amplitudes");
    for site in 0..n {
        let bit = 1usize << site;
        for k in 0..amps.len() {
            if k & bit != 0 {
                continue;
            }
            let (up, down) = (amps[k], amps[k | bit]);
            amps[k] = d * up + off_ud * down;
            amps[k | bit] = off_du * up + d * down;
        }
    }
    Ok(())
}

/// `scale · H_int + field_scale · Σ h_i σᶻ_i` in the full basis, where
/// `H_int` is the interaction part of `spec`.
pub fn lab_hamiltonian<T: Real>(
    spec: &ChainSpec<T>,
    disorder: &DisorderRealization<T>,
    scale: T,
    field_scale: T,
) -> Result<HamiltonianMatrix<T>> {
    let with_fields = build_hamiltonian(spec, disorder, None)?;
    let clean = build_hamiltonian(spec, &DisorderRealization::clean(spec.n_sites), None)?;
    with_fields.combine(field_scale, &clean, scale - field_scale)
}

/// Lab-frame chain `scale · H_XX + field_scale · Σ h_i σᶻ_i` under ideal pulses.
#[derive(Debug, Clone)]
pub struct DrivenSystem<T = f64> {
    propagator: SpectralPropagator<T>,
}

impl<T: Real> DrivenSystem<T> {
    /// The couplings of `spec` enter as a pure XX interaction; its
    /// anisotropy is ignored.
    pub fn new(spec: &ChainSpec<T>, disorder: &DisorderRealization<T>, scale: T, field_scale: T) -> Result<Self> {
        let h = lab_hamiltonian(&spec.with_anisotropy(T::zero()), disorder, scale, field_scale)?;
        Ok(Self { propagator: SpectralPropagator::diagonalize(&h)? })
    }

    pub fn propagator(&self) -> &SpectralPropagator<T> {
        &self.propagator
    }

    /// One period of `seq` applied to `psi`.
    pub fn cycle(&self, seq: &PulseSequence<T>, psi: &SpinState<T>) -> Result<SpinState<T>> {
        let mut state = psi.clone();
        let mut last = T::zero();
        for p in &seq.pulses {
            let dt = p.offset - last;
            if dt > T::zero() {
                state = self.propagator.evolve(&state, dt)?;
            }
            apply_global_pulse(&mut state, p.axis)?;
            last = p.offset;
        }
        let dt = seq.cycle_time - last;
        if dt > T::zero() {
            state = self.propagator.evolve(&state, dt)?;
        }
        Ok(state)
    }

    pub fn run(&self, seq: &PulseSequence<T>, psi: &SpinState<T>, n_cycles: usize) -> Result<SpinState<T>> {
        seq.validate()?;
        let mut state = psi.clone();
        for _ in 0..n_cycles {
            state = self.cycle(seq, &state)?;
        }
        Ok(state)
    }
}

/// Evolves `psi` through `n_cycles` periods of `seq` under
/// `scale · (H_XX + Σ h_i σᶻ_i)`.
pub fn simulate_driven<T: Real>(
    spec: &ChainSpec<T>,
    disorder: &DisorderRealization<T>,
    seq: &PulseSequence<T>,
    psi: &SpinState<T>,
    n_cycles: usize,
    scale: T,
) -> Result<SpinState<T>> {
    DrivenSystem::new(spec, disorder, scale, scale)?.run(seq, psi, n_cycles)
}
