use ndarray::{s, Array1, Array2, ArrayView2};
use num_complex::Complex;

use super::SpinState;
use crate::error::{Error, Result};
use crate::linalg::{real_complex_gemm, real_complex_mul, symmetric_eigen};
use crate::model::{Basis, HamiltonianMatrix, PauliOperator};
use crate::scalar::Real;

/// Largest block that is diagonalized densely by default.
pub const DEFAULT_DENSE_CAP: usize = 8192;

/// One diagonalized block of a block-diagonal Hamiltonian.
#[derive(Debug, Clone)]
pub struct EigenBlock<T> {
    /// Basis indices spanned by the block.
    pub members: Vec<usize>,
    /// First row of the block in eigen coordinates.
    pub offset: usize,
    pub energies: Array1<T>,
    /// Eigenvectors as columns, rows indexed like `members`.
    pub vectors: Array2<T>,
}

impl<T> EigenBlock<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Exact propagator from a full eigendecomposition.
///
/// The Hamiltonian is split into the connected components of its sparsity
/// graph and each component is diagonalized densely. "Eigen coordinates" are
/// the concatenation of the per-block eigenbases.
#[derive(Debug, Clone)]
pub struct SpectralPropagator<T = f64> {
    basis: Basis,
    blocks: Vec<EigenBlock<T>>,
    energies: Array1<T>,
    /// Basis index -> (block, row within block).
    location: Vec<(u32, u32)>,
}

impl<T: Real> SpectralPropagator<T> {
    pub fn diagonalize(h: &HamiltonianMatrix<T>) -> Result<Self> {
        Self::diagonalize_with_cap(h, DEFAULT_DENSE_CAP)
    }

    /// Fails with [`Error::DenseCapExceeded`] if any block is larger than `cap`.
    pub fn diagonalize_with_cap(h: &HamiltonianMatrix<T>, cap: usize) -> Result<Self> {
        let components = h.components();
        if let Some(big) = components.iter().map(Vec::len).max() {
            if big > cap {
                return Err(Error::DenseCapExceeded { dim: big, cap });
            }
        }
        let mut location = vec![(0u32, 0u32); h.dim()];
        let mut blocks = Vec::with_capacity(components.len());
        let mut offset = 0;
        for (b, members) in components.into_iter().enumerate() {
            let (energies, vectors) = if members.len() == 1 {
                (Array1::from_elem(1, h.get(members[0], members[0])), Array2::from_elem((1, 1), T::one()))
            } else {
                symmetric_eigen(&h.dense_block(&members))?
            };
            for (a, &m) in members.iter().enumerate() {
                location[m] = (b as u32, a as u32);
            }
            let len = members.len();
            blocks.push(EigenBlock { members, offset, energies, vectors });
            offset += len;
        }
        let energies = Array1::from_iter(blocks.iter().flat_map(|b| b.energies.iter().copied()));
        Ok(Self { basis: h.basis().clone(), blocks, energies, location })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn blocks(&self) -> &[EigenBlock<T>] {
        &self.blocks
    }

    /// Energies in eigen-coordinate order.
    pub fn energies(&self) -> &Array1<T> {
        &self.energies
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut e = self.energies.to_vec();
        e.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
        e
    }

    /// Largest entry of `H V - V E` over all blocks.
    pub fn reconstruction_residual(&self, h: &HamiltonianMatrix<T>) -> T {
        let mut worst = T::zero();
        for b in &self.blocks {
            let hv = h.dense_block(&b.members).dot(&b.vectors);
            for ((i, k), &v) in hv.indexed_iter() {
                worst = worst.max((v - b.vectors[[i, k]] * b.energies[k]).abs());
            }
        }
        worst
    }

    /// Columns of `x` (basis coordinates) in eigen coordinates.
    pub fn to_eigen(&self, x: ArrayView2<'_, Complex<T>>) -> Array2<Complex<T>> {
        assert_eq!(x.nrows(), self.dim());
        let m = x.ncols();
        let mut out = Array2::from_elem((self.dim(), m), Complex::new(T::zero(), T::zero()));
        for b in &self.blocks {
            let gathered = Array2::from_shape_fn((b.len(), m), |(a, c)| x[[b.members[a], c]]);
            real_complex_gemm(
                b.vectors.t(),
                gathered.view(),
                T::zero(),
                out.slice_mut(s![b.offset..b.offset + b.len(), ..]),
            );
        }
        out
    }

    /// Inverse of [`Self::to_eigen`].
    pub fn from_eigen(&self, y: ArrayView2<'_, Complex<T>>) -> Array2<Complex<T>> {
        assert_eq!(y.nrows(), self.dim());
        let m = y.ncols();
        let mut out = Array2::from_elem((self.dim(), m), Complex::new(T::zero(), T::zero()));
        for b in &self.blocks {
            let local = real_complex_mul(b.vectors.view(), y.slice(s![b.offset..b.offset + b.len(), ..]));
            for (a, &mem) in b.members.iter().enumerate() {
                out.row_mut(mem).assign(&local.row(a));
            }
        }
        out
    }

    /// Multiplies eigen-coordinate row `k` by `exp(-i E_k t)`.
    pub fn apply_phases(&self, y: &mut Array2<Complex<T>>, t: T) {
        for (mut row, &e) in y.rows_mut().into_iter().zip(self.energies.iter()) {
            let p = T::cis(-e * t);
            row.mapv_inplace(|v| v * p);
        }
    }

    /// `exp(-iHt)` applied to every column of `x`.
    pub fn evolve_batch(&self, x: ArrayView2<'_, Complex<T>>, t: T) -> Array2<Complex<T>> {
        let mut y = self.to_eigen(x);
        self.apply_phases(&mut y, t);
        self.from_eigen(y.view())
    }

    pub fn evolve(&self, psi: &SpinState<T>, t: T) -> Result<SpinState<T>> {
        if psi.basis != self.basis {
            return Err(Error::BasisMismatch);
        }
        let x = psi.amplitudes.view().insert_axis(ndarray::Axis(1));
        let y = self.evolve_batch(x, t);
        Ok(SpinState { amplitudes: y.column(0).to_owned(), basis: self.basis.clone() })
    }

    /// Operator `Vᵀ σ V` in eigen coordinates.
    pub fn eigen_operator(&self, op: &PauliOperator) -> Result<EigenOperator<T>> {
        if *op.basis() != self.basis {
            return Err(Error::BasisMismatch);
        }
        let mut pieces = Vec::new();
        for (sb, src) in self.blocks.iter().enumerate() {
            // σ V_s, grouped by the block each row lands in.
            let mut by_target: Vec<(usize, Array2<T>)> = Vec::new();
            for (a, &k) in src.members.iter().enumerate() {
                let (target, sign) = op.action(k);
                let (tb, row) = self.location[target];
                let tb = tb as usize;
                let slot = match by_target.iter().position(|(b, _)| *b == tb) {
                    Some(p) => p,
                    None => {
                        by_target.push((tb, Array2::zeros((self.blocks[tb].len(), src.len()))));
                        by_target.len() - 1
                    }
                };
                let sign = if sign > 0 { T::one() } else { -T::one() };
                by_target[slot].1.row_mut(row as usize).scaled_add(sign, &src.vectors.row(a));
            }
            for (tb, m) in by_target {
                let matrix = self.blocks[tb].vectors.t().dot(&m);
                pieces.push(OperatorPiece { target: tb, source: sb, matrix });
            }
        }
        Ok(EigenOperator { phase: op.global_phase(), pieces })
    }

    pub(crate) fn block_rows(&self, block: usize) -> std::ops::Range<usize> {
        let b = &self.blocks[block];
        b.offset..b.offset + b.len()
    }
}

#[derive(Debug, Clone)]
pub struct OperatorPiece<T> {
    pub target: usize,
    pub source: usize,
    pub matrix: Array2<T>,
}

/// A single-site Pauli operator in eigen coordinates: a global phase times a
/// real block-sparse matrix.
#[derive(Debug, Clone)]
pub struct EigenOperator<T> {
    pub phase: Complex<T>,
    pub pieces: Vec<OperatorPiece<T>>,
}

impl<T: Real> EigenOperator<T> {
    /// `A y` for eigen-coordinate columns `y`.
    pub fn apply(&self, prop: &SpectralPropagator<T>, y: ArrayView2<'_, Complex<T>>) -> Array2<Complex<T>> {
        let mut out = Array2::from_elem(y.dim(), Complex::new(T::zero(), T::zero()));
        for p in &self.pieces {
            let src = y.slice(s![prop.block_rows(p.source), ..]);
            let dst = out.slice_mut(s![prop.block_rows(p.target), ..]);
            real_complex_gemm(p.matrix.view(), src, T::one(), dst);
        }
        if self.phase.im != T::zero() {
            out.mapv_inplace(|v| v * self.phase);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_hamiltonian, local_pauli, sample_disorder, Axis, ChainSpec, SectorBasis,
    };

    fn random_state(dim: usize, seed: u64) -> Array1<Complex<f64>> {
        use rand::Rng;
        let mut rng = crate::rng::rng_from_seed(seed);
        let v: Array1<Complex<f64>> =
            Array1::from_shape_fn(dim, |_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v / Complex::new(n, 0.0)
    }

    fn dense_exp(h: &HamiltonianMatrix<f64>, t: f64) -> Array2<Complex<f64>> {
        let (e, v) = symmetric_eigen(&h.to_dense()).unwrap();
        let n = e.len();
        let mut out = Array2::from_elem((n, n), Complex::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                out[[i, j]] = (0..n).map(|k| Complex::from_polar(v[[i, k]] * v[[j, k]], -e[k] * t)).sum();
            }
        }
        out
    }

    #[test]
    fn block_propagator_matches_dense_exponential() {
        let spec = ChainSpec::power_law(6, 1.5, 0.7).unwrap();
        let dis = sample_disorder(2.0, 6, 5).unwrap();
        let h = build_hamiltonian(&spec, &dis, None).unwrap();
        let prop = SpectralPropagator::diagonalize(&h).unwrap();
        assert_eq!(prop.blocks().len(), 7);
        assert!(prop.reconstruction_residual(&h) < 1e-12);
        let psi = SpinState::new(h.basis().clone(), random_state(64, 1)).unwrap();
        let got = prop.evolve(&psi, 0.8).unwrap();
        let want = dense_exp(&h, 0.8).dot(&psi.amplitudes);
        let err = (&got.amplitudes - &want).iter().map(|a| a.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn eigen_operator_matches_direct_product() {
        let spec = ChainSpec::power_law(5, 1.0, 0.3).unwrap();
        let dis = sample_disorder(1.0, 5, 2).unwrap();
        let h = build_hamiltonian(&spec, &dis, None).unwrap();
        let prop = SpectralPropagator::diagonalize(&h).unwrap();
        let x = random_state(32, 3).insert_axis(ndarray::Axis(1));
        for axis in Axis::ALL {
            let op = local_pauli(axis, 2, h.basis()).unwrap();
            let a = prop.eigen_operator(&op).unwrap();
            let y = prop.to_eigen(x.view());
            let got = prop.from_eigen(a.apply(&prop, y.view()).view());
            let want = op.apply(x.column(0));
            let err = (&got.column(0) - &want).iter().map(|a| a.norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "{axis}: {err}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let spec = ChainSpec::nearest_neighbor(6, 1.0).unwrap();
        let h = build_hamiltonian(&spec, &crate::model::DisorderRealization::clean(6), None).unwrap();
        assert!(matches!(
            SpectralPropagator::diagonalize_with_cap(&h, 10),
            Err(Error::DenseCapExceeded { dim: 20, cap: 10 })
        ));
    }

    #[test]
    fn sector_propagator_preserves_norm_f32() {
        let spec = ChainSpec::<f32>::power_law(6, 2.0, 0.5).unwrap();
        let dis = sample_disorder(3.0f32, 6, 9).unwrap();
        let sector = SectorBasis::largest(6).unwrap();
        let h = build_hamiltonian(&spec, &dis, Some(&sector)).unwrap();
        let prop = SpectralPropagator::diagonalize(&h).unwrap();
        let psi = SpinState::<f32>::basis_state(h.basis().clone(), 0b000111).unwrap();
        let out = prop.evolve(&psi, 3.0).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-5);
    }
}
