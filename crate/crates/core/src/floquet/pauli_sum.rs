use std::collections::BTreeMap;

use num_complex::Complex;

use crate::model::Axis;
use crate::scalar::Real;

/// Sparse linear combination of Pauli strings. A string is stored as
/// `(x, z)` bit masks: site `k` carries `X` if only `x` has bit `k`, `Z` if
/// only `z` has it, and `Y` if both do.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum<T> {
    terms: BTreeMap<(u64, u64), Complex<T>>,
}

fn site_op(x: u64, z: u64, k: usize) -> u8 {
    ((x >> k & 1) | (z >> k & 1) << 1) as u8
}

/// Power of `i` in the product of single-site operators `a · b`
/// (encoding: 1 = X, 2 = Z, 3 = Y).
fn phase_power(a: u8, b: u8) -> u8 {
    // X·Y = iZ, Y·Z = iX, Z·X = iY.
    match (a, b) {
        (1, 3) | (3, 2) | (2, 1) => 1,
        (3, 1) | (2, 3) | (1, 2) => 3,
        _ => 0,
    }
}

impl<T: Real> PauliSum<T> {
    pub fn new() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · Π σ^{a}_{site}`.
    pub fn add_term(&mut self, ops: &[(usize, Axis)], coeff: Complex<T>) {
        let (mut x, mut z) = (0u64, 0u64);
        for &(site, axis) in ops {
            let bit = 1u64 << site;
            match axis {
                Axis::X => x ^= bit,
                Axis::Z => z ^= bit,
                Axis::Y => {
                    x ^= bit;
                    z ^= bit;
                }
            }
        }
        self.add_raw((x, z), coeff);
    }

    fn add_raw(&mut self, key: (u64, u64), coeff: Complex<T>) {
        let entry = self.terms.entry(key).or_insert(Complex::new(T::zero(), T::zero()));
        *entry += coeff;
        if *entry == Complex::new(T::zero(), T::zero()) {
            self.terms.remove(&key);
        }
    }

    pub fn add(&mut self, other: &PauliSum<T>, scale: Complex<T>) {
        for (&key, &c) in &other.terms {
            self.add_raw(key, c * scale);
        }
    }

    pub fn mul(&self, other: &PauliSum<T>) -> PauliSum<T> {
        let mut out = PauliSum::new();
        for (&(x1, z1), &c1) in &self.terms {
            for (&(x2, z2), &c2) in &other.terms {
                let mut power = 0u8;
                let mut overlap = (x1 | z1) & (x2 | z2);
                while overlap != 0 {
                    let k = overlap.trailing_zeros() as usize;
                    power += phase_power(site_op(x1, z1, k), site_op(x2, z2, k));
                    overlap &= overlap - 1;
                }
                let phase = match power % 4 {
                    0 => Complex::new(T::one(), T::zero()),
                    1 => Complex::new(T::zero(), T::one()),
                    2 => Complex::new(-T::one(), T::zero()),
                    _ => Complex::new(T::zero(), -T::one()),
                };
                out.add_raw((x1 ^ x2, z1 ^ z2), c1 * c2 * phase);
            }
        }
        out
    }

    pub fn commutator(&self, other: &PauliSum<T>) -> PauliSum<T> {
        let mut out = self.mul(other);
        out.add(&other.mul(self), Complex::new(-T::one(), T::zero()));
        out
    }

    /// Normalized Frobenius norm `sqrt(Tr(A†A) / D) = sqrt(Σ |c|²)`.
    pub fn norm(&self) -> T {
        self.terms.values().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    /// Coefficient of a Pauli string given as `(site, axis)` factors.
    pub fn coefficient(&self, ops: &[(usize, Axis)]) -> Complex<T> {
        let mut probe = PauliSum::new();
        probe.add_term(ops, Complex::new(T::one(), T::zero()));
        let key = *probe.terms.keys().next().expect("one term");
        self.terms.get(&key).copied().unwrap_or(Complex::new(T::zero(), T::zero()))
    }
}
