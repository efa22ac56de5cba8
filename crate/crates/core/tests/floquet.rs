use ndarray::Array2;
use num_complex::Complex;
use scramble_core::analysis::neel_state;
use scramble_core::evolve::{Propagator, SpectralPropagator, SpinState};
use scramble_core::floquet::{
    apply_global_pulse, modified_sequence, simulate_driven, simulate_echo_protocol, toggling_average,
    wahuha_sequence, EchoProtocolConfig, EchoRunner, FrameMap, PulseAxis, SignedAxis,
};
use scramble_core::model::{build_hamiltonian, local_pauli, sample_disorder, Axis, Basis};
use scramble_core::otoc::otoc_state;
use scramble_core::{Chain, Disorder, Error};

type C = Complex<f64>;

fn pulse_matrix(p: PulseAxis) -> Array2<C> {
    let basis = Basis::full(1);
    let mut m = Array2::zeros((2, 2));
    for col in 0..2 {
        let mut s = SpinState::<f64>::basis_state(basis.clone(), col as u64).unwrap();
        apply_global_pulse(&mut s, p).unwrap();
        m.column_mut(col).assign(&s.amplitudes);
    }
    m
}

fn dagger(m: &Array2<C>) -> Array2<C> {
    m.t().mapv(|v| v.conj())
}

#[test]
fn pulse_conjugation_matches_frame_maps() {
    let basis = Basis::full(1);
    let paulis: Vec<Array2<C>> = Axis::ALL.iter().map(|&a| local_pauli(a, 0, &basis).unwrap().to_dense()).collect();
    for p in [PulseAxis::PlusX, PulseAxis::MinusX, PulseAxis::PlusY, PulseAxis::MinusY] {
        let r = pulse_matrix(p);
        let id = dagger(&r).dot(&r);
        assert!((id[[0, 0]] - 1.0).norm() < 1e-14 && id[[0, 1]].norm() < 1e-14);
        let map = FrameMap::pulse(p);
        for a in Axis::ALL {
            let conj = dagger(&r).dot(&paulis[a.index()]).dot(&r);
            let img = map.apply(SignedAxis::new(a, true));
            let expected = paulis[img.axis.index()].mapv(|v| v * img.sign::<f64>());
            assert!((&conj - &expected).iter().all(|d| d.norm() < 1e-14), "{p} on {a}");
        }
    }
}

fn test_chain(n: usize) -> (Chain, Disorder) {
    (Chain::power_law(n, 3.0, 0.0).unwrap(), sample_disorder(2.0, n, 11).unwrap())
}

#[test]
fn zero_cycles_is_identity() {
    let (spec, dis) = test_chain(4);
    let psi = neel_state::<f64>(Axis::X, 4);
    let seq = modified_sequence(0.5, 0.1).unwrap();
    let out = simulate_driven(&spec, &dis, &seq, &psi, 0, 1.0).unwrap();
    assert!(out.distance(&psi).unwrap() < 1e-15);
}

#[test]
fn zero_anisotropy_reduces_to_static_xx() {
    let (spec, dis) = test_chain(5);
    let psi = neel_state::<f64>(Axis::X, 5);
    let seq = wahuha_sequence(0.0, 0.2).unwrap();
    let driven = simulate_driven(&spec, &dis, &seq, &psi, 7, 1.0).unwrap();
    let h = build_hamiltonian(&spec, &dis, None).unwrap();
    let direct = SpectralPropagator::diagonalize(&h).unwrap().evolve(&psi, 1.4).unwrap();
    assert!(driven.distance(&direct).unwrap() < 1e-10);
}

fn average_error(tc: f64) -> f64 {
    let (spec, dis) = test_chain(5);
    let psi = neel_state::<f64>(Axis::X, 5);
    let total = 1.0;
    let seq = modified_sequence(0.5, tc).unwrap();
    let cycles = (total / tc).round() as usize;
    let driven = simulate_driven(&spec, &dis, &seq, &psi, cycles, 1.0).unwrap();
    let avg = toggling_average(&seq, &spec, &dis).unwrap();
    let (eff, eff_dis) = avg.effective_xxz(&spec, &dis).unwrap();
    let h = build_hamiltonian(&eff, &eff_dis, None).unwrap();
    let target = SpectralPropagator::diagonalize(&h).unwrap().evolve(&psi, total).unwrap();
    driven.distance(&target).unwrap()
}

#[test]
fn modified_sequence_converges_quadratically() {
    let coarse = average_error(0.1);
    let fine = average_error(0.05);
    assert!(coarse < 0.1, "{coarse}");
    let ratio = coarse / fine;
    assert!(ratio > 3.0 && ratio < 5.0, "ratio {ratio}");
}

#[test]
fn exact_reversal_reproduces_state_otoc() {
    let n = 6;
    let spec = Chain::power_law(n, 3.0, 0.7).unwrap();
    let dis = sample_disorder(3.0, n, 5).unwrap();
    let psi = neel_state::<f64>(Axis::X, n);
    let times = [0.3, 0.9, 2.0];
    let sites = [3, 4, 5];
    let h = build_hamiltonian(&spec, &dis, None).unwrap();
    let prop = Propagator::Spectral(SpectralPropagator::diagonalize(&h).unwrap());
    let exact = otoc_state(&prop, &psi, 2, &sites, Axis::X, &times, "neel-x").unwrap();
    for k in [1.0, 2.0] {
        let echo = EchoRunner::new(&spec, &dis, k, None, true).unwrap().series(&psi, 2, &sites, Axis::X, &times).unwrap();
        let diff = (&echo.values - &exact.values).mapv(f64::abs).fold(0.0f64, |a, &b| a.max(b));
        assert!(diff < 1e-9, "k={k}: {diff}");
    }
    // Without flipping the fields the reversal is imperfect.
    let partial = EchoRunner::new(&spec, &dis, 2.0, None, false).unwrap().series(&psi, 2, &sites, Axis::X, &times).unwrap();
    let diff = (&partial.values - &exact.values).mapv(f64::abs).fold(0.0f64, |a, &b| a.max(b));
    assert!(diff > 1e-3);
}

#[test]
fn driven_echo_tracks_average_hamiltonian() {
    let n = 6;
    let (delta, tc) = (0.5, 0.02);
    let spec = Chain::power_law(n, 3.0, 0.0).unwrap();
    let dis = sample_disorder(2.0, n, 9).unwrap();
    let psi = neel_state::<f64>(Axis::X, n);
    let seq = modified_sequence(delta, tc).unwrap();
    let times: Vec<f64> = (1..=5).map(|m| m as f64 * 10.0 * tc).collect();
    let echo = EchoRunner::new(&spec, &dis, 1.0, Some(&seq), true).unwrap().series(&psi, 2, &[3], Axis::X, &times).unwrap();
    let avg = toggling_average(&seq, &spec, &dis).unwrap();
    let (eff, eff_dis) = avg.effective_xxz(&spec, &dis).unwrap();
    assert!((eff.anisotropy - delta).abs() < 1e-12);
    let h = build_hamiltonian(&eff, &eff_dis, None).unwrap();
    let prop = Propagator::Spectral(SpectralPropagator::diagonalize(&h).unwrap());
    let target = otoc_state(&prop, &psi, 2, &[3], Axis::X, &times, "neel-x").unwrap();
    for (a, b) in echo.values.iter().zip(target.values.iter()) {
        assert!((a - b).abs() < 0.02, "{a} vs {b}");
    }
}

#[test]
fn single_run_matches_series_and_checks_cycle_multiples() {
    let (spec, dis) = test_chain(5);
    let psi = neel_state::<f64>(Axis::X, 5);
    let seq = modified_sequence(0.5, 0.1).unwrap();
    let mut cfg = EchoProtocolConfig::new(1, 3, Axis::X, 0.5);
    cfg.sequence = Some(seq.clone());
    let f = simulate_echo_protocol(&cfg, &spec, &dis, &psi).unwrap();
    let series = EchoRunner::new(&spec, &dis, 1.0, Some(&seq), true).unwrap().series(&psi, 1, &[3], Axis::X, &[0.5]).unwrap();
    assert!((2.0 - 2.0 * f - series.values[[0, 0]]).abs() < 1e-12);
    cfg.time = 0.55;
    assert!(matches!(simulate_echo_protocol(&cfg, &spec, &dis, &psi), Err(Error::NotCycleMultiple { .. })));
    // σᶻ is not diagonal on a Néel-x state.
    cfg.time = 0.5;
    cfg.axis = Axis::Z;
    assert!(matches!(simulate_echo_protocol(&cfg, &spec, &dis, &psi), Err(Error::InvalidArgument(_))));
}
