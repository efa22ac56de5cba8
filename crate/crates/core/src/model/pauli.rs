use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::Basis;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::InvalidArgument(format!("unknown axis '{other}'"))),
        }
    }
}

/// Matrix-free single-site Pauli operator `σᵃ_site` on a basis.
///
/// Acting on basis element `k` it returns a single element `target(k)` with
/// coefficient `phase · sign(k)`, where `phase ∈ {1, i}` is global and
/// `sign(k) = ±1`.
#[derive(Debug, Clone)]
pub struct PauliOperator {
    axis: Axis,
    site: usize,
    basis: Basis,
}

/// Builds `σᵃ_site`. Transverse axes are rejected on a sector basis.
pub fn local_pauli(axis: Axis, site: usize, basis: &Basis) -> Result<PauliOperator> {
    let n_sites = basis.n_sites();
    if site >= n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    if basis.is_sector() && axis != Axis::Z {
        return Err(Error::LeavesSector);
    }
    Ok(PauliOperator { axis, site, basis: basis.clone() })
}

impl PauliOperator {
    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn site(&self) -> usize {
        self.site
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn is_real(&self) -> bool {
        self.axis != Axis::Y
    }

    pub fn global_phase<T: Real>(&self) -> Complex<T> {
        match self.axis {
            Axis::Y => Complex::new(T::zero(), T::one()),
            _ => Complex::new(T::one(), T::zero()),
        }
    }

    /// `(target index, ±1)` for basis element `k`.
    #[inline]
    pub fn action(&self, k: usize) -> (usize, i8) {
        let bits = self.basis.bits(k);
        let down = bits >> self.site & 1 == 1;
        match self.axis {
            Axis::Z => (k, if down { -1 } else { 1 }),
            Axis::X | Axis::Y => {
                let target = self.basis.index_of(bits ^ (1 << self.site)).expect("flip stays in the full basis");
                let sign = if self.axis == Axis::Y && down { -1 } else { 1 };
                (target, sign)
            }
        }
    }

    /// Full complex coefficient for basis element `k`.
    pub fn coefficient<T: Real>(&self, k: usize) -> (usize, Complex<T>) {
        let (target, sign) = self.action(k);
        let s = if sign > 0 { T::one() } else { -T::one() };
        (target, self.global_phase::<T>() * s)
    }

    pub fn apply<T: Real>(&self, x: ArrayView1<'_, Complex<T>>) -> Array1<Complex<T>> {
        let mut y = Array1::from_elem(x.len(), Complex::new(T::zero(), T::zero()));
        for k in 0..x.len() {
            let (t, c) = self.coefficient::<T>(k);
            y[t] = c * x[k];
        }
        y
    }

    pub fn to_dense<T: Real>(&self) -> Array2<Complex<T>> {
        let n = self.basis.dim();
        let mut m = Array2::from_elem((n, n), Complex::new(T::zero(), T::zero()));
        for k in 0..n {
            let (t, c) = self.coefficient::<T>(k);
            m[[t, k]] = c;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SectorBasis;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    #[test]
    fn single_site_matrices() {
        let basis = Basis::Full { n_sites: 1 };
        let x = local_pauli(Axis::X, 0, &basis).unwrap().to_dense::<f64>();
        assert_eq!(x, ndarray::array![[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]]);
        let y = local_pauli(Axis::Y, 0, &basis).unwrap().to_dense::<f64>();
        assert_eq!(y, ndarray::array![[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]);
        let z = local_pauli(Axis::Z, 0, &basis).unwrap().to_dense::<f64>();
        assert_eq!(z, ndarray::array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]]);
    }

    #[test]
    fn involutory_hermitian_and_anticommuting() {
        let basis = Basis::full(3);
        for site in 0..3 {
            let mats: Vec<Array2<C>> =
                Axis::ALL.iter().map(|&a| local_pauli(a, site, &basis).unwrap().to_dense()).collect();
            let id = Array2::from_diag(&Array1::from_elem(8, c(1., 0.)));
            for m in &mats {
                assert_eq!(m.dot(m), id);
                assert_eq!(m.t().mapv(|v| v.conj()), *m);
            }
            let xz = mats[0].dot(&mats[2]);
            let zx = mats[2].dot(&mats[0]);
            assert_eq!(xz, -zx);
            // σˣσʸ = iσᶻ
            assert_eq!(mats[0].dot(&mats[1]), mats[2].mapv(|v| v * c(0., 1.)));
        }
    }

    #[test]
    fn transverse_axes_leave_sectors() {
        let basis = Basis::sector(SectorBasis::new(4, 2).unwrap());
        assert!(matches!(local_pauli(Axis::X, 0, &basis), Err(Error::LeavesSector)));
        assert!(matches!(local_pauli(Axis::Y, 0, &basis), Err(Error::LeavesSector)));
        assert!(local_pauli(Axis::Z, 0, &basis).is_ok());
        assert!(matches!(local_pauli(Axis::Z, 4, &basis), Err(Error::SiteOutOfRange { .. })));
    }
}
