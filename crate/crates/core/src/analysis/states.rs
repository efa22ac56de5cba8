use ndarray::Array1;
use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::evolve::SpinState;
use crate::model::{Axis, Basis, SectorBasis};
use crate::rng::rng_from_seed;
use crate::scalar::Real;

/// `(⟨↑|s⟩, ⟨↓|s⟩)` for the `±1` eigenstate of `σᵃ`.
pub fn single_spin_eigenstate<T: Real>(axis: Axis, positive: bool) -> [Complex<T>; 2] {
    let r = T::FRAC_1_SQRT_2();
    let zero = Complex::new(T::zero(), T::zero());
    let s = if positive { T::one() } else { -T::one() };
    match axis {
        Axis::Z if positive => [Complex::new(T::one(), T::zero()), zero],
        Axis::Z => [zero, Complex::new(T::one(), T::zero())],
        Axis::X => [Complex::new(r, T::zero()), Complex::new(s * r, T::zero())],
        Axis::Y => [Complex::new(r, T::zero()), Complex::new(T::zero(), s * r)],
    }
}

/// Tensor product of single-site spinors in the full basis.
pub fn product_state<T: Real>(spinors: &[[Complex<T>; 2]]) -> SpinState<T> {
    let n = spinors.len();
    let amplitudes = Array1::from_shape_fn(1usize << n, |k| {
        let mut a = Complex::new(T::one(), T::zero());
        for (site, s) in spinors.iter().enumerate() {
            a = a * s[k >> site & 1];
        }
        a
    });
    SpinState { amplitudes, basis: Basis::full(n) }
}

/// Each site independently in a random `±` eigenstate of `σᵃ`.
pub fn random_bitstring_state<T: Real>(axis: Axis, n_sites: usize, seed: u64) -> SpinState<T> {
    let mut rng = rng_from_seed(seed);
    let spinors: Vec<_> = (0..n_sites).map(|_| single_spin_eigenstate(axis, rng.random::<bool>())).collect();
    product_state(&spinors)
}

/// Each site an independent Haar-random spin-½ state.
pub fn random_product_state<T: Real>(n_sites: usize, seed: u64) -> SpinState<T> {
    let mut rng = rng_from_seed(seed);
    let spinors: Vec<[Complex<T>; 2]> = (0..n_sites)
        .map(|_| {
            let mut g = [0.0f64; 4];
            for x in g.iter_mut() {
                *x = StandardNormal.sample(&mut rng);
            }
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            [Complex::new(T::lit(g[0] / norm), T::lit(g[1] / norm)), Complex::new(T::lit(g[2] / norm), T::lit(g[3] / norm))]
        })
        .collect();
    product_state(&spinors)
}

/// Néel state along `axis`: `+` on even sites, `−` on odd sites.
pub fn neel_state<T: Real>(axis: Axis, n_sites: usize) -> SpinState<T> {
    let spinors: Vec<_> = (0..n_sites).map(|k| single_spin_eigenstate(axis, k % 2 == 0)).collect();
    product_state(&spinors)
}

/// Uniformly chosen computational basis state of a sector.
pub fn sector_bitstring_state<T: Real>(sector: &SectorBasis, seed: u64) -> SpinState<T> {
    let mut rng = rng_from_seed(seed);
    let k = rng.random_range(0..sector.dim());
    let mut amplitudes = Array1::from_elem(sector.dim(), Complex::new(T::zero(), T::zero()));
    amplitudes[k] = Complex::new(T::one(), T::zero());
    SpinState { amplitudes, basis: Basis::sector(sector.clone()) }
}

/// Projects a full-basis state onto a sector and renormalizes.
pub fn project_to_sector<T: Real>(state: &SpinState<T>, sector: &SectorBasis) -> Result<SpinState<T>> {
    if state.basis != Basis::full(sector.n_sites()) {
        return Err(Error::BasisMismatch);
    }
    let amplitudes = Array1::from_iter(sector.states().iter().map(|&b| state.amplitudes[b as usize]));
    let mut out = SpinState { amplitudes, basis: Basis::sector(sector.clone()) };
    out.normalize()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::local_pauli;

    #[test]
    fn z_bitstring_is_a_basis_state() {
        let s = random_bitstring_state::<f64>(Axis::Z, 5, 3);
        assert_eq!(s.amplitudes.iter().filter(|a| a.norm() > 0.0).count(), 1);
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn x_bitstring_is_a_product_of_x_eigenstates() {
        let s = random_bitstring_state::<f64>(Axis::X, 4, 8);
        for site in 0..4 {
            let x = local_pauli(Axis::X, site, &s.basis).unwrap();
            let xs = SpinState { amplitudes: x.apply(s.amplitudes.view()), basis: s.basis.clone() };
            let ev = s.inner(&xs).unwrap();
            assert!((ev.re.abs() - 1.0).abs() < 1e-12 && ev.im.abs() < 1e-12);
        }
    }

    #[test]
    fn product_state_is_pure_on_each_site() {
        let s = random_product_state::<f64>(3, 1);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        for site in 0..3 {
            // Reduced density matrix of `site`.
            let mut rho = [[Complex::new(0.0, 0.0); 2]; 2];
            for k in 0..8usize {
                for l in 0..8usize {
                    if k & !(1 << site) == l & !(1 << site) {
                        rho[k >> site & 1][l >> site & 1] += s.amplitudes[k] * s.amplitudes[l].conj();
                    }
                }
            }
            let purity: f64 = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| (rho[a][b] * rho[b][a]).re).sum();
            assert!((purity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_renormalizes() {
        let sector = SectorBasis::largest(4).unwrap();
        let s = project_to_sector(&random_product_state::<f64>(4, 2), &sector).unwrap();
        assert_eq!(s.dim(), 6);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        let neel = neel_state::<f64>(Axis::Z, 4);
        assert_eq!(neel.amplitudes[0b1010].re, 1.0);
    }
}
