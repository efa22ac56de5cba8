use ndarray::Array2;

use super::drive::{lab_hamiltonian, DrivenSystem};
use super::sequence::PulseSequence;
use crate::error::{Error, Result};
use crate::evolve::{SpectralPropagator, SpinState};
use crate::model::{local_pauli, Axis, ChainSpec, DisorderRealization};
use crate::otoc::{otoc_from_correlator, Estimator, OtocMetadata, OtocSeries};
use crate::scalar::Real;

/// One run of the echo measurement of `F = ⟨σᵃ_i(t) σᵃ_j σᵃ_i(t) σᵃ_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoProtocolConfig<T = f64> {
    pub probe: usize,
    pub measured: usize,
    pub axis: Axis,
    pub time: T,
    /// Backward evolution runs under `−scale · H_int` for `time / scale`.
    pub scale: T,
    /// Drive applied in both directions; `None` evolves under the static XXZ
    /// chain forward.
    pub sequence: Option<PulseSequence<T>>,
    /// Whether the backward fields are `−scale · h` rather than `+h`.
    pub flip_disorder: bool,
}

impl<T: Real> EchoProtocolConfig<T> {
    pub fn new(probe: usize, measured: usize, axis: Axis, time: T) -> Self {
        Self { probe, measured, axis, time, scale: T::one(), sequence: None, flip_disorder: true }
    }
}

enum Leg<T> {
    Static(SpectralPropagator<T>),
    Driven(DrivenSystem<T>, PulseSequence<T>),
}

impl<T: Real> Leg<T> {
    fn evolve(&self, psi: &SpinState<T>, time: T) -> Result<SpinState<T>> {
        match self {
            Leg::Static(p) => p.evolve(psi, time),
            Leg::Driven(sys, seq) => sys.run(seq, psi, cycle_count(time, seq.cycle_time)?),
        }
    }
}

fn cycle_count<T: Real>(time: T, cycle: T) -> Result<usize> {
    let n = (time / cycle).round();
    let tol = T::lit(1e-9).max(T::epsilon() * T::lit(64.0)) * n.max(T::one());
    if !(time >= T::zero()) || (time / cycle - n).abs() > tol {
        return Err(Error::NotCycleMultiple {
            time: time.to_f64().unwrap_or(f64::NAN),
            cycle: cycle.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(n.to_usize().unwrap_or(0))
}

/// Forward and backward propagators of the echo protocol for one disorder
/// realization.
pub struct EchoRunner<T = f64> {
    forward: Leg<T>,
    backward: Leg<T>,
    scale: T,
    n_sites: usize,
    label: Option<String>,
    flip_disorder: bool,
}

impl<T: Real> EchoRunner<T> {
    /// Undriven forward evolution uses `spec` as given. With a drive, both
    /// legs use the lab XX chain with the couplings of `spec`, and the
    /// backward leg runs the same number of cycles of the sequence
    /// compressed by `1/scale`.
    pub fn new(
        spec: &ChainSpec<T>,
        disorder: &DisorderRealization<T>,
        scale: T,
        sequence: Option<&PulseSequence<T>>,
        flip_disorder: bool,
    ) -> Result<Self> {
        if !(scale > T::zero()) || !scale.is_finite() {
            return Err(Error::InvalidArgument(format!("echo scale must be positive, got {scale}")));
        }
        let back_fields = if flip_disorder { -scale } else { T::one() };
        let (forward, backward) = match sequence {
            None => {
                let fwd = lab_hamiltonian(spec, disorder, T::one(), T::one())?;
                let bwd = lab_hamiltonian(spec, disorder, -scale, back_fields)?;
                (Leg::Static(SpectralPropagator::diagonalize(&fwd)?), Leg::Static(SpectralPropagator::diagonalize(&bwd)?))
            }
            Some(seq) => {
                seq.validate()?;
                let fwd = DrivenSystem::new(spec, disorder, T::one(), T::one())?;
                let bwd = DrivenSystem::new(spec, disorder, -scale, back_fields)?;
                (Leg::Driven(fwd, seq.clone()), Leg::Driven(bwd, seq.scaled(T::one() / scale)))
            }
        };
        Ok(Self {
            forward,
            backward,
            scale,
            n_sites: spec.n_sites,
            label: sequence.map(|s| s.name.clone()),
            flip_disorder,
        })
    }

    pub fn forward(&self, psi: &SpinState<T>, time: T) -> Result<SpinState<T>> {
        self.forward.evolve(psi, time)
    }

    /// Backward leg for a forward duration `time`.
    pub fn backward(&self, psi: &SpinState<T>, time: T) -> Result<SpinState<T>> {
        self.backward.evolve(psi, time / self.scale)
    }

    /// `F_j` for every measured site, from a forward-evolved state.
    fn measure(&self, psi: &SpinState<T>, evolved: &SpinState<T>, probe: usize, sites: &[usize], axis: Axis, time: T) -> Result<Vec<T>> {
        let kick = local_pauli(axis, probe, &psi.basis)?;
        let kicked = SpinState { amplitudes: kick.apply(evolved.amplitudes.view()), basis: psi.basis.clone() };
        let out = self.backward(&kicked, time)?;
        sites
            .iter()
            .map(|&j| {
                let op = local_pauli(axis, j, &psi.basis)?;
                let lambda = expectation(&op, psi)?;
                if (lambda.abs() - T::one()).abs() > T::epsilon().sqrt() {
                    return Err(Error::InvalidArgument(format!(
                        "initial state is not an eigenstate of σ{axis} on site {j}"
                    )));
                }
                Ok(lambda * expectation(&op, &out)?)
            })
            .collect()
    }

    /// Echo estimate of `C_j(t) = 2 − 2F_j(t)` on a non-decreasing time grid.
    pub fn series(&self, psi: &SpinState<T>, probe: usize, sites: &[usize], axis: Axis, times: &[T]) -> Result<OtocSeries<T>> {
        crate::otoc::check_sites(self.n_sites, probe, sites)?;
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument("echo times must be non-decreasing".into()));
        }
        let mut values = Array2::zeros((sites.len(), times.len()));
        let mut state = psi.clone();
        let mut last = T::zero();
        for (k, &t) in times.iter().enumerate() {
            state = self.forward(&state, t - last)?;
            last = t;
            for (row, f) in self.measure(psi, &state, probe, sites, axis, t)?.into_iter().enumerate() {
                values[[row, k]] = otoc_from_correlator(f);
            }
        }
        let metadata = OtocMetadata {
            axis,
            probe,
            sites: sites.to_vec(),
            estimator: Estimator::Echo {
                scale: self.scale.to_f64().unwrap_or(f64::NAN),
                sequence: self.label.clone(),
                flip_disorder: self.flip_disorder,
            },
            disorder_seeds: vec![],
            spec: None,
        };
        OtocSeries::new(times.to_vec(), values, metadata)
    }
}

fn expectation<T: Real>(op: &crate::model::PauliOperator, psi: &SpinState<T>) -> Result<T> {
    let applied = SpinState { amplitudes: op.apply(psi.amplitudes.view()), basis: psi.basis.clone() };
    Ok(psi.inner(&applied)?.re)
}

/// Runs the echo protocol once and returns the measured `F`.
pub fn simulate_echo_protocol<T: Real>(
    cfg: &EchoProtocolConfig<T>,
    spec: &ChainSpec<T>,
    disorder: &DisorderRealization<T>,
    psi: &SpinState<T>,
) -> Result<T> {
    let runner = EchoRunner::new(spec, disorder, cfg.scale, cfg.sequence.as_ref(), cfg.flip_disorder)?;
    crate::otoc::check_sites(spec.n_sites, cfg.probe, &[cfg.measured])?;
    let evolved = runner.forward(psi, cfg.time)?;
    Ok(runner.measure(psi, &evolved, cfg.probe, &[cfg.measured], cfg.axis, cfg.time)?[0])
}
