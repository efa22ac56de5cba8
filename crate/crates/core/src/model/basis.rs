use std::sync::Arc;

use crate::error::{Error, Result};

/// Fixed-magnetization basis: all bitstrings with `n_sites - n_up` set bits,
/// in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    n_sites: usize,
    n_up: usize,
    states: Vec<u64>,
}

impl SectorBasis {
    pub fn new(n_sites: usize, n_up: usize) -> Result<Self> {
        if n_up > n_sites || n_sites > super::MAX_SITES {
            return Err(Error::InvalidSector { n_sites, n_up });
        }
        let n_down = (n_sites - n_up) as u32;
        let states = (0u64..1 << n_sites).filter(|s| s.count_ones() == n_down).collect();
        Ok(Self { n_sites, n_up, states })
    }

    /// The sector with `⌊N/2⌋` up spins.
    pub fn largest(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, n_sites / 2)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn index_of(&self, bits: u64) -> Option<usize> {
        self.states.binary_search(&bits).ok()
    }
}

/// Builds the sector basis with `n_up` up spins.
pub fn build_sector(n_sites: usize, n_up: usize) -> Result<SectorBasis> {
    SectorBasis::new(n_sites, n_up)
}

/// Basis of a state or operator: the full product basis or one sector.
#[derive(Debug, Clone)]
pub enum Basis {
    Full { n_sites: usize },
    Sector(Arc<SectorBasis>),
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Basis::Full { n_sites: a }, Basis::Full { n_sites: b }) => a == b,
            (Basis::Sector(a), Basis::Sector(b)) => a.n_sites == b.n_sites && a.n_up == b.n_up,
            _ => false,
        }
    }
}

impl Basis {
    pub fn full(n_sites: usize) -> Self {
        Basis::Full { n_sites }
    }

    pub fn sector(sector: SectorBasis) -> Self {
        Basis::Sector(Arc::new(sector))
    }

    pub fn n_sites(&self) -> usize {
        match self {
            Basis::Full { n_sites } => *n_sites,
            Basis::Sector(s) => s.n_sites,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Basis::Full { n_sites } => 1 << n_sites,
            Basis::Sector(s) => s.dim(),
        }
    }

    pub fn is_sector(&self) -> bool {
        matches!(self, Basis::Sector(_))
    }

    /// Bitstring of basis element `k`.
    #[inline]
    pub fn bits(&self, k: usize) -> u64 {
        match self {
            Basis::Full { .. } => k as u64,
            Basis::Sector(s) => s.states[k],
        }
    }

    #[inline]
    pub fn index_of(&self, bits: u64) -> Option<usize> {
        match self {
            Basis::Full { n_sites } => (bits < 1 << n_sites).then_some(bits as usize),
            Basis::Sector(s) => s.index_of(bits),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn sector_sizes() {
        assert_eq!(build_sector(4, 2).unwrap().dim(), 6);
        assert_eq!(build_sector(13, 6).unwrap().dim(), 1716);
        assert_eq!(SectorBasis::largest(13).unwrap().n_up(), 6);
        for n in 2..10 {
            for k in 0..=n {
                assert_eq!(build_sector(n, k).unwrap().dim() as u64, binomial(n as u64, k as u64));
            }
        }
    }

    #[test]
    fn index_round_trip_and_ordering() {
        let s = build_sector(10, 4).unwrap();
        for (k, &bits) in s.states().iter().enumerate() {
            assert_eq!(s.index_of(bits), Some(k));
            assert_eq!(10 - bits.count_ones() as usize, 4);
        }
        assert!(s.states().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn out_of_range_sector_rejected() {
        assert!(matches!(build_sector(4, 5), Err(Error::InvalidSector { .. })));
    }
}
