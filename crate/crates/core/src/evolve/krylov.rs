use std::sync::Arc;

use ndarray::{Array1, Array2};
use num_complex::Complex;

use super::SpinState;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::model::HamiltonianMatrix;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions<T = f64> {
    /// Target bound on the accumulated error over one call to `evolve`.
    pub tol: T,
    pub max_dim: usize,
    pub max_substeps: usize,
}

impl<T: Real> Default for KrylovOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-8).max(T::epsilon() * T::lit(100.0)), max_dim: 30, max_substeps: 100_000 }
    }
}

/// Lanczos propagator with adaptive substeps.
#[derive(Debug, Clone)]
pub struct KrylovPropagator<T = f64> {
    hamiltonian: Arc<HamiltonianMatrix<T>>,
    options: KrylovOptions<T>,
}

struct Lanczos<T> {
    vectors: Vec<Array1<Complex<T>>>,
    values: Array1<T>,
    /// Eigenvectors of the tridiagonal matrix, as columns.
    rotation: Array2<T>,
    /// Residual coupling `β_{m}` out of the subspace (zero on breakdown).
    leak: T,
}

impl<T: Real> KrylovPropagator<T> {
    pub fn new(hamiltonian: Arc<HamiltonianMatrix<T>>, options: KrylovOptions<T>) -> Result<Self> {
        if !(options.tol > T::zero()) || options.max_dim < 2 {
            return Err(Error::InvalidArgument("krylov tolerance must be positive and max_dim >= 2".into()));
        }
        Ok(Self { hamiltonian, options })
    }

    pub fn hamiltonian(&self) -> &HamiltonianMatrix<T> {
        &self.hamiltonian
    }

    pub fn options(&self) -> &KrylovOptions<T> {
        &self.options
    }

    fn lanczos(&self, v0: &Array1<Complex<T>>) -> Result<Lanczos<T>> {
        let h = &*self.hamiltonian;
        let m_max = self.options.max_dim.min(h.dim());
        let mut vectors = vec![v0.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<T> = Vec::new();
        let mut w = Array1::from_elem(h.dim(), Complex::new(T::zero(), T::zero()));
        let mut leak = T::zero();
        let scale = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        loop {
            let j = vectors.len() - 1;
            h.apply(vectors[j].view(), w.view_mut());
            let a: T = vectors[j].iter().zip(w.iter()).map(|(v, x)| (v.conj() * x).re).sum();
            alpha.push(a);
            // Full reorthogonalization, twice.
            for _ in 0..2 {
                for v in &vectors {
                    let c: Complex<T> = v.iter().zip(w.iter()).map(|(v, x)| v.conj() * x).sum();
                    w.zip_mut_with(v, |x, v| *x -= c * v);
                }
            }
            let b = w.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
            let norm_scale = alpha.iter().chain(beta.iter()).fold(T::one(), |acc, x| acc.max(x.abs()));
            if b <= scale * norm_scale {
                break;
            }
            if vectors.len() == m_max {
                leak = b;
                break;
            }
            beta.push(b);
            vectors.push(w.mapv(|x| x / b));
        }
        let m = alpha.len();
        let mut t = Array2::zeros((m, m));
        for k in 0..m {
            t[[k, k]] = alpha[k];
            if k + 1 < m {
                t[[k, k + 1]] = beta[k];
                t[[k + 1, k]] = beta[k];
            }
        }
        let (values, rotation) = symmetric_eigen(&t)?;
        Ok(Lanczos { vectors, values, rotation, leak })
    }

    /// Coefficients `exp(-i T dt) e₁` in the Lanczos basis.
    fn coefficients(l: &Lanczos<T>, dt: T) -> Array1<Complex<T>> {
        let m = l.values.len();
        let mut c = Array1::from_elem(m, Complex::new(T::zero(), T::zero()));
        for k in 0..m {
            let w = T::cis(-l.values[k] * dt) * l.rotation[[0, k]];
            for a in 0..m {
                c[a] += w * l.rotation[[a, k]];
            }
        }
        c
    }

    pub fn evolve(&self, psi: &SpinState<T>, t: T) -> Result<SpinState<T>> {
        if psi.basis != *self.hamiltonian.basis() {
            return Err(Error::BasisMismatch);
        }
        let total = t.abs();
        let dir = if t < T::zero() { -T::one() } else { T::one() };
        let mut v = psi.amplitudes.clone();
        let mut done = T::zero();
        let mut steps = 0;
        let mut last_estimate = T::zero();
        while done < total {
            steps += 1;
            if steps > self.options.max_substeps {
                return Err(Error::KrylovNonConvergence { estimate: last_estimate.to_f64().unwrap_or(f64::NAN) });
            }
            let beta = v.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
            if beta == T::zero() {
                break;
            }
            let l = self.lanczos(&v.mapv(|x| x / beta))?;
            let m = l.values.len();
            let mut dt = total - done;
            let mut halvings = 0;
            let c = loop {
                let c = Self::coefficients(&l, dir * dt);
                let estimate = beta * l.leak * c[m - 1].norm();
                last_estimate = estimate;
                if estimate <= self.options.tol * dt / total.max(T::min_positive_value()) {
                    break c;
                }
                halvings += 1;
                if halvings > 60 {
                    return Err(Error::KrylovNonConvergence { estimate: estimate.to_f64().unwrap_or(f64::NAN) });
                }
                dt = dt * T::lit(0.5);
            };
            let mut next = Array1::from_elem(v.len(), Complex::new(T::zero(), T::zero()));
            for (a, basis_vec) in l.vectors.iter().enumerate() {
                let w = c[a] * beta;
                next.zip_mut_with(basis_vec, |x, b| *x += w * b);
            }
            v = next;
            done = if total - done - dt <= T::epsilon() * total { total } else { done + dt };
        }
        Ok(SpinState { amplitudes: v, basis: psi.basis.clone() })
    }
}
