use std::sync::Arc;

use num_rational::Rational64;
use proptest::prelude::*;
use scramble_core::analysis::{density_from_samples, fit_lightcone, LightConeModel, PdfOptions};
use scramble_core::evolve::{KrylovOptions, KrylovPropagator, Propagator, SpectralPropagator};
use scramble_core::floquet::{
    modified_sequence, wahuha_sequence, FrameMap, PauliSum, PulseAxis, SignedAxis, simulate_echo_protocol,
    EchoProtocolConfig,
};
use scramble_core::model::{build_hamiltonian, sample_disorder, Axis, Interaction, SectorBasis};
use scramble_core::otoc::{haar_state, ising_otoc_closed_form, otoc_state};
use scramble_core::{analysis::neel_state, Chain};

fn chain() -> impl Strategy<Value = Chain> {
    (2usize..=7, prop::bool::ANY, 0.5f64..6.0, -2.5f64..2.5, 0.2f64..3.0).prop_map(|(n, pl, alpha, delta, j)| {
        let interaction = if pl { Interaction::PowerLaw { exponent: alpha } } else { Interaction::NearestNeighbor };
        Chain::new(n, interaction, j, delta).unwrap()
    })
}

fn pulse_axis() -> impl Strategy<Value = PulseAxis> {
    prop_oneof![Just(PulseAxis::PlusX), Just(PulseAxis::MinusX), Just(PulseAxis::PlusY), Just(PulseAxis::MinusY)]
}

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn couplings_are_symmetric_and_normalized(spec in chain()) {
        let j = spec.couplings();
        for a in 0..spec.n_sites {
            prop_assert_eq!(j[[a, a]], 0.0);
            for b in 0..spec.n_sites {
                prop_assert_eq!(j[[a, b]], j[[b, a]]);
            }
        }
        prop_assert_eq!(j[[0, 1]], spec.coupling);
        for r in 2..spec.n_sites {
            match spec.interaction {
                Interaction::PowerLaw { .. } => prop_assert!(spec.coupling_at(r) < spec.coupling_at(r - 1)),
                Interaction::NearestNeighbor => prop_assert_eq!(spec.coupling_at(r), 0.0),
            }
        }
    }

    #[test]
    fn hamiltonians_are_symmetric(spec in chain(), h in 0.0f64..20.0, seed in any::<u64>()) {
        let dis = sample_disorder(h, spec.n_sites, seed).unwrap();
        prop_assert_eq!(build_hamiltonian(&spec, &dis, None).unwrap().max_asymmetry(), 0.0);
        let sector = SectorBasis::largest(spec.n_sites).unwrap();
        prop_assert_eq!(build_hamiltonian(&spec, &dis, Some(&sector)).unwrap().max_asymmetry(), 0.0);
    }

    #[test]
    fn disorder_is_reproducible_and_bounded(n in 2usize..20, h in 0.0f64..30.0, seed in any::<u64>()) {
        let a = sample_disorder(h, n, seed).unwrap();
        prop_assert_eq!(&a, &sample_disorder(h, n, seed).unwrap());
        prop_assert!(a.fields.iter().all(|f| f.abs() <= h));
    }

    #[test]
    fn evolution_is_unitary_and_methods_agree(spec in chain(), h in 0.0f64..10.0, seed in any::<u64>(), t in 0.0f64..20.0) {
        let dis = sample_disorder(h, spec.n_sites, seed).unwrap();
        let ham = build_hamiltonian(&spec, &dis, None).unwrap();
        let exact = SpectralPropagator::diagonalize(&ham).unwrap();
        let krylov = KrylovPropagator::new(Arc::new(ham), KrylovOptions::default()).unwrap();
        let psi = haar_state::<f64>(exact.basis(), seed ^ 0x5a5a);
        let a = exact.evolve(&psi, t).unwrap();
        let b = krylov.evolve(&psi, t).unwrap();
        prop_assert!((a.norm() - 1.0).abs() < 1e-10);
        let diff = (&a.amplitudes - &b.amplitudes).mapv(|z| z.norm_sqr()).sum().sqrt();
        prop_assert!(diff < 1e-7, "spectral vs Krylov {diff}");
    }

    #[test]
    fn commutator_norms_lie_in_range(spec in chain(), h in 0.0f64..10.0, seed in any::<u64>(), ax in axis(),
                                     times in prop::collection::vec(0.0f64..50.0, 1..5)) {
        prop_assume!(spec.n_sites >= 3);
        let dis = sample_disorder(h, spec.n_sites, seed).unwrap();
        let prop = Propagator::Spectral(SpectralPropagator::diagonalize(&build_hamiltonian(&spec, &dis, None).unwrap()).unwrap());
        let psi = haar_state::<f64>(prop.basis(), seed);
        let sites: Vec<usize> = (1..spec.n_sites).collect();
        let s = otoc_state(&prop, &psi, 0, &sites, ax, &times, "haar").unwrap();
        prop_assert!(s.min_value() >= -1e-10 && s.max_value() <= 4.0 + 1e-10);
    }

    #[test]
    fn echo_reproduces_the_state_otoc(h in 0.0f64..6.0, seed in any::<u64>(), k in 1.0f64..3.0, t in 0.0f64..5.0, delta in -1.5f64..1.5) {
        let spec = Chain::power_law(4, 3.0, delta).unwrap();
        let dis = sample_disorder(h, 4, seed).unwrap();
        let prop = Propagator::Spectral(SpectralPropagator::diagonalize(&build_hamiltonian(&spec, &dis, None).unwrap()).unwrap());
        let psi = neel_state::<f64>(Axis::X, 4);
        let exact = otoc_state(&prop, &psi, 1, &[3], Axis::X, &[t], "neel-x").unwrap();
        let cfg = EchoProtocolConfig { scale: k, ..EchoProtocolConfig::new(1, 3, Axis::X, t) };
        let f = simulate_echo_protocol(&cfg, &spec, &dis, &psi).unwrap();
        prop_assert!((2.0 - 2.0 * f - exact.values[[0, 0]]).abs() < 1e-9);
    }

    #[test]
    fn frame_maps_form_a_group(pulses in prop::collection::vec(pulse_axis(), 0..12), ax in axis(), positive in any::<bool>()) {
        let total = pulses.iter().fold(FrameMap::IDENTITY, |acc, &p| FrameMap::pulse(p).compose(&acc));
        prop_assert_eq!(total.compose(&total.inverse()), FrameMap::IDENTITY);
        prop_assert_eq!(total.inverse().compose(&total), FrameMap::IDENTITY);
        let a = SignedAxis::new(ax, positive);
        let stepwise = pulses.iter().fold(a, |s, &p| FrameMap::pulse(p).apply(s));
        prop_assert_eq!(total.apply(a), stepwise);
        // A pulse and its opposite cancel.
        for p in [PulseAxis::PlusX, PulseAxis::PlusY] {
            let q = if p == PulseAxis::PlusX { PulseAxis::MinusX } else { PulseAxis::MinusY };
            prop_assert_eq!(FrameMap::pulse(p).compose(&FrameMap::pulse(q)), FrameMap::IDENTITY);
        }
    }

    #[test]
    fn exact_average_factors(num in 0i64..200, tc in 1i64..50) {
        let delta = Rational64::new(num, 100);
        let tc = Rational64::new(tc, 10);
        let (zero, one, two) = (Rational64::from_integer(0), Rational64::from_integer(1), Rational64::from_integer(2));
        for seq in [wahuha_sequence(delta, tc).unwrap(), modified_sequence(delta, tc).unwrap()] {
            let f = seq.average_factors();
            prop_assert_eq!(f.weights.iter().fold(zero, |a, &w| a + w), one);
            prop_assert_eq!(f.couplings.iter().fold(zero, |a, &c| a + c), two);
            prop_assert_eq!(f.couplings[2], delta * f.couplings[0]);
            prop_assert_eq!(f.couplings[0], f.couplings[1]);
            prop_assert_eq!(seq.net_rotation(), FrameMap::IDENTITY);
        }
    }

    #[test]
    fn pauli_commutators_are_antisymmetric(terms_a in prop::collection::vec((0usize..4, axis(), -2.0f64..2.0), 1..5),
                                           terms_b in prop::collection::vec((0usize..4, axis(), -2.0f64..2.0), 1..5)) {
        let build = |terms: &[(usize, Axis, f64)]| {
            let mut s = PauliSum::new();
            for &(site, ax, c) in terms {
                s.add_term(&[(site, ax)], num_complex::Complex::new(c, 0.0));
            }
            s
        };
        let (a, b) = (build(&terms_a), build(&terms_b));
        let mut sum = a.commutator(&b);
        sum.add(&b.commutator(&a), num_complex::Complex::new(1.0, 0.0));
        prop_assert!(sum.norm() < 1e-12);
        prop_assert!(a.commutator(&a).norm() < 1e-12);
    }

    #[test]
    fn ising_closed_form_in_range(alpha in 0.5f64..8.0, c in 0.1f64..3.0, r in 1usize..20, t in 0.0f64..1e4) {
        let v = ising_otoc_closed_form(alpha, c, r, t).unwrap();
        prop_assert!((0.0..=4.0 + 1e-12).contains(&v));
    }

    #[test]
    fn lightcone_fits_recover_exponents(beta in 0.2f64..4.0, a in -3.0f64..3.0, r_min in 1i64..3) {
        let exp: Vec<(i64, Option<f64>)> = (1..10).map(|r| (r, Some((a + beta * r as f64).exp()))).collect();
        prop_assert!((fit_lightcone(&exp, 0.5, LightConeModel::Exponential, r_min).unwrap().beta - beta).abs() < 1e-9);
        let alg: Vec<(i64, Option<f64>)> = (1..10).map(|r| (r, Some(a.exp() * (r as f64).powf(beta)))).collect();
        prop_assert!((fit_lightcone(&alg, 0.5, LightConeModel::Algebraic, r_min).unwrap().beta - beta).abs() < 1e-9);
    }

    #[test]
    fn histograms_integrate_to_one(xs in prop::collection::vec(0.0f64..4.0, 1..300)) {
        let d = density_from_samples(&xs, &PdfOptions::default()).unwrap();
        let width = 4.0 / d.histogram.len() as f64;
        prop_assert!((d.histogram.iter().sum::<f64>() * width - 1.0).abs() < 1e-9);
        prop_assert!(d.kde.iter().all(|&k| k >= 0.0));
    }
}

#[test]
fn kernels_run_in_single_precision() {
    let spec = scramble_core::model::ChainSpec::<f32>::power_law(5, 3.0, -2.0).unwrap();
    let dis = sample_disorder(2.0f32, 5, 3).unwrap();
    let prop = Propagator::Spectral(SpectralPropagator::diagonalize(&build_hamiltonian(&spec, &dis, None).unwrap()).unwrap());
    let psi = neel_state::<f32>(Axis::X, 5);
    let s32 = otoc_state(&prop, &psi, 1, &[2, 3, 4], Axis::X, &[0.5, 2.0], "neel-x").unwrap();

    let spec64 = Chain::power_law(5, 3.0, -2.0).unwrap();
    let dis64 = scramble_core::model::DisorderRealization::from_fields(dis.fields.iter().map(|&h| h as f64).collect());
    let prop64 = Propagator::Spectral(SpectralPropagator::diagonalize(&build_hamiltonian(&spec64, &dis64, None).unwrap()).unwrap());
    let s64 = otoc_state(&prop64, &neel_state::<f64>(Axis::X, 5), 1, &[2, 3, 4], Axis::X, &[0.5, 2.0], "neel-x").unwrap();
    for (a, b) in s32.values.iter().zip(s64.values.iter()) {
        assert!((*a as f64 - b).abs() < 1e-4, "{a} vs {b}");
    }
}
