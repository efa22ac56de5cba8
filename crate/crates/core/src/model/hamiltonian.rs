use ndarray::{Array2, ArrayView1, ArrayViewMut1};
use num_complex::Complex;

use super::{Basis, ChainSpec, DisorderRealization, SectorBasis};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real symmetric Hamiltonian in compressed sparse row form.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix<T = f64> {
    basis: Basis,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Real> HamiltonianMatrix<T> {
    /// Assembles a matrix row by row. Each row lists `(column, value)` pairs.
    pub fn from_rows(basis: Basis, rows: Vec<Vec<(usize, T)>>) -> Result<Self> {
        let dim = basis.dim();
        if rows.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: rows.len() });
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            for (c, v) in row {
                if c >= dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: c + 1 });
                }
                match cols.last() {
                    Some(&last) if last == c && cols.len() > *row_ptr.last().unwrap() => {
                        *vals.last_mut().unwrap() += v;
                    }
                    _ => {
                        cols.push(c);
                        vals.push(v);
                    }
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(Self { basis, row_ptr, cols, vals })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.row(i).find(|&(c, _)| c == j).map_or(T::zero(), |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim()).all(|i| self.row(i).all(|(c, v)| c == i || v == T::zero()))
    }

    /// Largest `|H_ij - H_ji|`.
    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim() {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> Array2<T> {
        let n = self.dim();
        let mut m = Array2::zeros((n, n));
        for i in 0..n {
            for (j, v) in self.row(i) {
                m[[i, j]] += v;
            }
        }
        m
    }

    /// Dense submatrix on the given (sorted or unsorted) basis indices.
    pub fn dense_block(&self, members: &[usize]) -> Array2<T> {
        let mut local = vec![usize::MAX; self.dim()];
        for (k, &m) in members.iter().enumerate() {
            local[m] = k;
        }
        let mut block = Array2::zeros((members.len(), members.len()));
        for (a, &m) in members.iter().enumerate() {
            for (c, v) in self.row(m) {
                let b = local[c];
                if b != usize::MAX {
                    block[[a, b]] += v;
                }
            }
        }
        block
    }

    /// `y = H x`.
    pub fn apply(&self, x: ArrayView1<'_, Complex<T>>, mut y: ArrayViewMut1<'_, Complex<T>>) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        for i in 0..self.dim() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += x[self.cols[k]] * self.vals[k];
            }
            y[i] = acc;
        }
    }

    /// Connected components of the sparsity graph, each sorted, ordered by
    /// their smallest member. For magnetization-conserving models these are
    /// (subsets of) the sectors.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for (j, v) in self.row(i) {
                if v != T::zero() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            if label[root] == usize::MAX {
                label[root] = groups.len();
                groups.push(Vec::new());
            }
            groups[label[root]].push(i);
        }
        groups
    }

    /// Returns `scale * H`.
    pub fn scaled(&self, scale: T) -> Self {
        Self { vals: self.vals.iter().map(|&v| v * scale).collect(), ..self.clone() }
    }

    /// `a · self + b · other` on a common basis.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        let rows = (0..self.dim())
            .map(|i| {
                self.row(i)
                    .map(|(c, v)| (c, a * v))
                    .chain(other.row(i).map(|(c, v)| (c, b * v)))
                    .collect()
            })
            .collect();
        Self::from_rows(self.basis.clone(), rows)
    }

    /// Real expectation value `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, psi: ArrayView1<'_, Complex<T>>) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim() {
            for (j, v) in self.row(i) {
                acc += (psi[i].conj() * psi[j]).re * v;
            }
        }
        acc
    }
}

#[inline]
fn spin<T: Real>(bits: u64, site: usize) -> T {
    if bits >> site & 1 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn check_inputs<T: Real>(
    spec: &ChainSpec<T>,
    disorder: &DisorderRealization<T>,
    sector: Option<&SectorBasis>,
) -> Result<()> {
    spec.validate()?;
    if disorder.n_sites() != spec.n_sites {
        return Err(Error::DimensionMismatch { expected: spec.n_sites, found: disorder.n_sites() });
    }
    if let Some(s) = sector {
        if s.n_sites() != spec.n_sites {
            return Err(Error::DimensionMismatch { expected: spec.n_sites, found: s.n_sites() });
        }
    }
    Ok(())
}

/// XXZ Hamiltonian `Σ_{i<j} J_ij (σˣσˣ + σʸσʸ + Δ σᶻσᶻ) + Σ_i h_i σᶻ_i`,
/// in the full basis or in `sector`.
pub fn build_hamiltonian<T: Real>(
    spec: &ChainSpec<T>,
    disorder: &DisorderRealization<T>,
    sector: Option<&SectorBasis>,
) -> Result<HamiltonianMatrix<T>> {
    check_inputs(spec, disorder, sector)?;
    let basis = match sector {
        Some(s) => Basis::sector(s.clone()),
        None => Basis::full(spec.n_sites),
    };
    let n = spec.n_sites;
    let j = spec.couplings();
    let pairs: Vec<(usize, usize, T)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .map(|(a, b)| (a, b, j[[a, b]]))
        .filter(|&(_, _, c)| c != T::zero())
        .collect();
    let two = T::two();
    let rows = (0..basis.dim())
        .map(|k| {
            let bits = basis.bits(k);
            let mut diag = T::zero();
            let mut row = Vec::new();
            for (site, &h) in disorder.fields.iter().enumerate() {
                diag += h * spin::<T>(bits, site);
            }
            for &(a, b, c) in &pairs {
                let za: T = spin(bits, a);
                let zb: T = spin(bits, b);
                diag += c * spec.anisotropy * za * zb;
                if za != zb {
                    let flipped = bits ^ (1 << a) ^ (1 << b);
                    let col = basis.index_of(flipped).expect("flip-flop preserves magnetization");
                    row.push((col, two * c));
                }
            }
            row.push((k, diag));
            row
        })
        .collect();
    HamiltonianMatrix::from_rows(basis, rows)
}

/// Diagonal Ising Hamiltonian `Σ_{i<j} J_ij σᶻσᶻ + Σ_i h_i σᶻ_i` in the full basis.
pub fn build_ising_hamiltonian<T: Real>(
    spec: &ChainSpec<T>,
    disorder: &DisorderRealization<T>,
) -> Result<HamiltonianMatrix<T>> {
    check_inputs(spec, disorder, None)?;
    let basis = Basis::full(spec.n_sites);
    let n = spec.n_sites;
    let j = spec.couplings();
    let rows = (0..basis.dim())
        .map(|k| {
            let bits = k as u64;
            let mut e = T::zero();
            for a in 0..n {
                let za: T = spin(bits, a);
                e += disorder.fields[a] * za;
                for b in a + 1..n {
                    e += j[[a, b]] * za * spin::<T>(bits, b);
                }
            }
            vec![(k, e)]
        })
        .collect();
    HamiltonianMatrix::from_rows(basis, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_sector, sample_disorder, Interaction};

    fn two_site(anisotropy: f64) -> ChainSpec<f64> {
        ChainSpec::nearest_neighbor(2, anisotropy).unwrap()
    }

    #[test]
    fn two_site_flip_flop_element() {
        let h = build_hamiltonian(&two_site(0.0), &DisorderRealization::clean(2), None).unwrap();
        // |↓↑⟩ = bits 01, |↑↓⟩ = bits 10.
        assert_eq!(h.get(1, 2), 2.0);
        assert_eq!(h.get(2, 1), 2.0);
        assert!(h.diagonal().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn two_site_diagonal_with_fields() {
        let (d, h1, h2) = (1.0, 0.3, -1.7);
        let disorder = DisorderRealization::from_fields(vec![h1, h2]);
        let h = build_hamiltonian(&two_site(d), &disorder, None).unwrap();
        // Index k: bit 0 is site 0, set bit is spin down.
        let expected = [d + h1 + h2, -d - h1 + h2, -d + h1 - h2, d - h1 - h2];
        for (k, e) in expected.iter().enumerate() {
            assert!((h.get(k, k) - e).abs() < 1e-15);
        }
    }

    #[test]
    fn hermitian_and_magnetization_conserving() {
        let spec = ChainSpec::power_law(7, 3.0, -2.0).unwrap();
        let disorder = sample_disorder(5.0, 7, 3).unwrap();
        let h = build_hamiltonian(&spec, &disorder, None).unwrap();
        assert_eq!(h.max_asymmetry(), 0.0);
        for i in 0..h.dim() {
            for (j, v) in h.row(i) {
                if v != 0.0 {
                    assert_eq!((i as u64).count_ones(), (j as u64).count_ones());
                }
            }
        }
    }

    #[test]
    fn sector_blocks_match_full_matrix() {
        let spec = ChainSpec::power_law(6, 3.0, 0.5).unwrap();
        let disorder = sample_disorder(2.0, 6, 11).unwrap();
        let full = build_hamiltonian(&spec, &disorder, None).unwrap().to_dense();
        for n_up in 0..=6 {
            let sector = build_sector(6, n_up).unwrap();
            let block = build_hamiltonian(&spec, &disorder, Some(&sector)).unwrap().to_dense();
            for (a, &sa) in sector.states().iter().enumerate() {
                for (b, &sb) in sector.states().iter().enumerate() {
                    assert_eq!(block[[a, b]], full[[sa as usize, sb as usize]]);
                }
            }
        }
    }

    #[test]
    fn ising_examples() {
        let spec = ChainSpec::power_law(2, 3.0, 0.0).unwrap();
        let h = build_ising_hamiltonian(&spec, &DisorderRealization::clean(2)).unwrap();
        assert_eq!(h.diagonal(), vec![1.0, -1.0, -1.0, 1.0]);
        assert!(h.is_diagonal());
        let spec3 = ChainSpec::power_law(3, 3.0, 0.0).unwrap();
        let h3 = build_ising_hamiltonian(&spec3, &DisorderRealization::clean(3)).unwrap();
        assert_eq!(h3.get(0, 0), 2.125);
        let dense = build_ising_hamiltonian(&spec3, &sample_disorder(4.0, 3, 1).unwrap()).unwrap().to_dense();
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert_eq!(dense[[i, j]], 0.0);
                }
            }
        }
    }

    #[test]
    fn mismatched_disorder_rejected() {
        let spec = ChainSpec::new(4, Interaction::NearestNeighbor, 1.0, 0.0).unwrap();
        let err = build_hamiltonian(&spec, &DisorderRealization::clean(3), None).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn components_are_sectors() {
        let spec = ChainSpec::nearest_neighbor(5, -2.0).unwrap();
        let h = build_hamiltonian(&spec, &sample_disorder(1.0, 5, 0).unwrap(), None).unwrap();
        let comps = h.components();
        assert_eq!(comps.len(), 6);
        let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 32);
        assert!(sizes.contains(&10));
    }
}
