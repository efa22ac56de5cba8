use ndarray::Array2;
use num_complex::Complex;

use super::pauli_sum::PauliSum;
use super::sequence::{Frame, PulseSequence, SignedAxis};
use crate::error::{Error, Result};
use crate::model::{Axis, ChainSpec, DisorderRealization};
use crate::scalar::{Field, Real};

/// Sequence-only part of the toggling-frame average, exact in any field.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageFactors<F> {
    /// Fraction of the cycle with lab `σᶻ` along `±a` (index by axis).
    pub weights: [F; 3],
    /// Multiplier of `σᵃσᵃ` couplings, `1 − weights[a]`.
    pub couplings: [F; 3],
    /// Signed time fraction multiplying `h σᵃ`.
    pub fields: [F; 3],
    /// `d_fg = Σ_{k>l} τ_k τ_l ([f_k=f, f_l=g] − [f_k=g, f_l=f])` for
    /// distinct frames `f, g`; the first-order Magnus term is
    /// `−i/(2t_c) Σ d_fg [H̃_f, H̃_g]`.
    pub first_order: Vec<(SignedAxis, SignedAxis, F)>,
}

impl<F: Field> PulseSequence<F> {
    pub fn average_factors(&self) -> AverageFactors<F> {
        let frames = self.frames();
        let tc = self.cycle_time.clone();
        let zero = || [F::zero(), F::zero(), F::zero()];
        let mut weights = zero();
        let mut fields = zero();
        for f in &frames {
            let a = f.z.axis.index();
            let frac = f.duration.clone() / tc.clone();
            weights[a] = weights[a].clone() + frac.clone();
            fields[a] = fields[a].clone() + f.z.sign::<F>() * frac;
        }
        let couplings = [
            F::one() - weights[0].clone(),
            F::one() - weights[1].clone(),
            F::one() - weights[2].clone(),
        ];
        let mut distinct: Vec<SignedAxis> = Vec::new();
        for f in &frames {
            if !distinct.contains(&f.z) {
                distinct.push(f.z);
            }
        }
        let mut first_order = Vec::new();
        for (a, &f) in distinct.iter().enumerate() {
            for &g in &distinct[a + 1..] {
                first_order.push((f, g, pair_weight(&frames, f, g)));
            }
        }
        AverageFactors { weights, couplings, fields, first_order }
    }
}

fn pair_weight<F: Field>(frames: &[Frame<F>], f: SignedAxis, g: SignedAxis) -> F {
    let mut d = F::zero();
    for k in 0..frames.len() {
        for l in 0..k {
            let w = frames[k].duration.clone() * frames[l].duration.clone();
            if frames[k].z == f && frames[l].z == g {
                d = d + w;
            } else if frames[k].z == g && frames[l].z == f {
                d = d - w;
            }
        }
    }
    d
}

/// Zeroth-order (average) Hamiltonian of a driven XX chain with `σᶻ` fields,
/// and the size of its first-order correction.
#[derive(Debug, Clone, PartialEq)]
pub struct ToggleFrameAverage<T = f64> {
    pub frames: Vec<Frame<T>>,
    pub factors: AverageFactors<T>,
    /// `J_ij` times the `σˣσˣ` (= `σʸσʸ` for the built-in sequences) factor.
    pub j_perp: Array2<T>,
    /// `J_ij` times the `σᶻσᶻ` factor.
    pub j_par: Array2<T>,
    /// Per-site `(h_x, h_y, h_z)`.
    pub fields: Vec<[T; 3]>,
    /// Normalized Frobenius norm of the first Magnus correction.
    pub first_order_norm: T,
}

/// `U† (H_XX + Σ h σᶻ) U` in a frame where lab `σᶻ` maps to `z`.
pub fn frame_hamiltonian<T: Real>(
    spec: &ChainSpec<T>,
    disorder: &DisorderRealization<T>,
    z: SignedAxis,
) -> PauliSum<T> {
    let n = spec.n_sites;
    let j = spec.couplings();
    let mut h = PauliSum::new();
    for a in 0..n {
        for b in a + 1..n {
            if j[[a, b]] == T::zero() {
                continue;
            }
            // XX + YY = (XX + YY + ZZ) − zz, and the first bracket is invariant.
            for axis in Axis::ALL {
                if axis != z.axis {
                    h.add_term(&[(a, axis), (b, axis)], Complex::new(j[[a, b]], T::zero()));
                }
            }
        }
        let hz = disorder.fields[a] * z.sign::<T>();
        if hz != T::zero() {
            h.add_term(&[(a, z.axis)], Complex::new(hz, T::zero()));
        }
    }
    h
}

/// Toggling-frame average of the lab Hamiltonian `H_XX + Σ h_i σᶻ_i` under
/// the pulse sequence.
pub fn toggling_average<T: Real>(
    seq: &PulseSequence<T>,
    spec: &ChainSpec<T>,
    disorder: &DisorderRealization<T>,
) -> Result<ToggleFrameAverage<T>> {
    seq.validate()?;
    spec.validate()?;
    if disorder.n_sites() != spec.n_sites {
        return Err(Error::DimensionMismatch { expected: spec.n_sites, found: disorder.n_sites() });
    }
    let factors = seq.average_factors();
    let j = spec.couplings();
    let j_perp = j.mapv(|v| v * factors.couplings[0]);
    let j_par = j.mapv(|v| v * factors.couplings[2]);
    let fields = disorder
        .fields
        .iter()
        .map(|&h| [h * factors.fields[0], h * factors.fields[1], h * factors.fields[2]])
        .collect();
    let mut first = PauliSum::new();
    for (f, g, d) in &factors.first_order {
        if *d == T::zero() {
            continue;
        }
        let c = frame_hamiltonian(spec, disorder, *f).commutator(&frame_hamiltonian(spec, disorder, *g));
        first.add(&c, Complex::new(*d, T::zero()));
    }
    let first_order_norm = first.norm() / (T::two() * seq.cycle_time);
    Ok(ToggleFrameAverage { frames: seq.frames(), factors, j_perp, j_par, fields, first_order_norm })
}

impl<T: Real> ToggleFrameAverage<T> {
    /// The XXZ part of the average as a model: couplings scaled by the
    /// `σˣσˣ` factor, anisotropy `J∥/J⊥`, and the `σᶻ` fields. Transverse
    /// fields are not representable and are dropped.
    pub fn effective_xxz(
        &self,
        spec: &ChainSpec<T>,
        disorder: &DisorderRealization<T>,
    ) -> Result<(ChainSpec<T>, DisorderRealization<T>)> {
        let c = &self.factors.couplings;
        if (c[0] - c[1]).abs() > T::lit(1e-12) * c[0].abs() || !(c[0] > T::zero()) {
            return Err(Error::InvalidSequence("average is not of XXZ form".into()));
        }
        let mut eff = spec.clone();
        eff.coupling = spec.coupling * c[0];
        eff.anisotropy = c[2] / c[0];
        Ok((eff, disorder.scaled(self.factors.fields[2])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{modified_sequence, wahuha_sequence};
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn exact_factors() {
        for delta in [r(0, 1), r(1, 2), r(1, 1), r(3, 2), r(19, 10)] {
            let two = r(2, 1);
            for seq in [wahuha_sequence(delta, r(1, 10)).unwrap(), modified_sequence(delta, r(1, 10)).unwrap()] {
                let f = seq.average_factors();
                assert_eq!(f.couplings[0], two / (two + delta));
                assert_eq!(f.couplings[1], f.couplings[0]);
                assert_eq!(f.couplings[2], two * delta / (two + delta));
                assert_eq!(f.couplings[2], delta * f.couplings[0]);
                assert_eq!(f.fields[2], (two - delta) / (two + delta));
                // Both built-in cycles are reflection symmetric.
                assert!(f.first_order.iter().all(|(_, _, d)| *d == r(0, 1)));
            }
            let w = wahuha_sequence(delta, r(1, 10)).unwrap().average_factors();
            assert_eq!(w.fields[0], delta / (two + delta));
            assert_eq!(w.fields[1], delta / (two + delta));
            let m = modified_sequence(delta, r(1, 10)).unwrap().average_factors();
            assert_eq!(m.fields[0], r(0, 1));
            assert_eq!(m.fields[1], r(0, 1));
        }
    }

    #[test]
    fn asymmetric_cycle_has_first_order_term() {
        // WAHUHA started at its first pulse: frames Y X Y Z.
        let w = wahuha_sequence(0.5, 0.1).unwrap();
        let shift = w.pulses[0].offset;
        let mut pulses: Vec<_> = w.pulses.iter().map(|p| super::super::Pulse { offset: p.offset - shift, axis: p.axis }).collect();
        pulses[0].offset = 0.0;
        let seq = PulseSequence { name: "shifted".into(), cycle_time: 0.1, pulses };
        let spec = ChainSpec::power_law(4, 3.0, 0.5).unwrap();
        let dis = DisorderRealization::from_fields(vec![1.0, -2.0, 0.5, 3.0]);
        let avg = toggling_average(&seq, &spec, &dis).unwrap();
        assert!(avg.first_order_norm > 1e-3);
        let sym = toggling_average(&modified_sequence(0.5, 0.1).unwrap(), &spec, &dis).unwrap();
        assert!(sym.first_order_norm < 1e-12);
    }

    #[test]
    fn effective_xxz_in_floating_point() {
        let spec = ChainSpec::power_law(5, 3.0, 0.0).unwrap();
        let dis = DisorderRealization::from_fields(vec![1.0, -2.0, 0.5, 3.0, 0.0]);
        for delta in [0.3f64, 0.5, 1.7] {
            for seq in [wahuha_sequence(delta, 0.1).unwrap(), modified_sequence(delta, 0.1).unwrap()] {
                let (eff, eff_dis) = toggling_average(&seq, &spec, &dis).unwrap().effective_xxz(&spec, &dis).unwrap();
                assert!((eff.anisotropy - delta).abs() < 1e-12);
                assert!((eff.coupling - 2.0 / (2.0 + delta)).abs() < 1e-12);
                assert!((eff_dis.fields[3] - 3.0 * (2.0 - delta) / (2.0 + delta)).abs() < 1e-12);
            }
        }
    }
}
