//! Dense operators that preserve the number of down spins, stored one block
//! per sector.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::{sector_indices, SparseOperator, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonal {
    n_sites: usize,
    blocks: Vec<DMatrix<C64>>,
}

impl BlockDiagonal {
    pub fn zeros(n_sites: usize) -> Self {
        let blocks = (0..=n_sites)
            .map(|n| {
                let d = sector_indices(n_sites, n).len();
                DMatrix::zeros(d, d)
            })
            .collect();
        Self { n_sites, blocks }
    }

    pub fn identity(n_sites: usize) -> Self {
        let blocks = (0..=n_sites)
            .map(|n| DMatrix::identity(sector_indices(n_sites, n).len(), sector_indices(n_sites, n).len()))
            .collect();
        Self { n_sites, blocks }
    }

    /// Splits a sector-preserving sparse operator into blocks.
    pub fn from_sparse(op: &SparseOperator) -> Result<Self> {
        let off = op.off_sector_max();
        if off > 0.0 {
            return Err(Error::Structural(format!(
                "operator couples different sectors (entry magnitude {off:e})"
            )));
        }
        let n_sites = op.n_sites();
        let blocks = (0..=n_sites).map(|n| op.block(&sector_indices(n_sites, n))).collect();
        Ok(Self { n_sites, blocks })
    }

    pub fn from_blocks(n_sites: usize, blocks: Vec<DMatrix<C64>>) -> Self {
        assert_eq!(blocks.len(), n_sites + 1);
        Self { n_sites, blocks }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn block(&self, n: usize) -> &DMatrix<C64> {
        &self.blocks[n]
    }

    pub fn block_mut(&mut self, n: usize) -> &mut DMatrix<C64> {
        &mut self.blocks[n]
    }

    pub fn blocks(&self) -> &[DMatrix<C64>] {
        &self.blocks
    }

    pub fn to_sparse(&self) -> SparseOperator {
        let mut entries = Vec::new();
        for (n, b) in self.blocks.iter().enumerate() {
            let idx = sector_indices(self.n_sites, n);
            for (i, &r) in idx.iter().enumerate() {
                for (j, &c) in idx.iter().enumerate() {
                    entries.push((r, c, b[(i, j)]));
                }
            }
        }
        SparseOperator::from_triplets(self.n_sites, entries)
    }

    pub fn map(&self, f: impl Fn(&DMatrix<C64>) -> DMatrix<C64>) -> Self {
        Self {
            n_sites: self.n_sites,
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(usize, &DMatrix<C64>) -> Result<DMatrix<C64>>) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(n, b)| f(n, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n_sites: self.n_sites,
            blocks,
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            n_sites: self.n_sites,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        self.map(|b| b.adjoint())
    }

    pub fn inverse(&self) -> Result<Self> {
        self.try_map(|n, b| {
            b.clone()
                .try_inverse()
                .ok_or_else(|| Error::Structural(format!("sector {n} block is singular")))
        })
    }

    /// Eigenvalues of every Hermitian block, ascending within a block.
    pub fn hermitian_eigenvalues(&self) -> Vec<Vec<f64>> {
        self.blocks.iter().map(hermitian_eigenvalues).collect()
    }

    /// `f(A)` for Hermitian blocks via the spectral decomposition.
    pub fn hermitian_function(&self, f: impl Fn(f64) -> f64) -> Self {
        self.map(|b| {
            if b.nrows() == 0 {
                return b.clone();
            }
            let (values, vectors) = hermitian_eigen(b);
            let d = DVector::from_iterator(values.len(), values.iter().map(|&l| C64::new(f(l), 0.0)));
            &vectors * DMatrix::from_diagonal(&d) * vectors.adjoint()
        })
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| max_norm(&(a - b)))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .map(max_norm)
            .fold(0.0, f64::max)
    }
}

/// Largest entry modulus, 0 for an empty matrix.
pub fn max_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn to_faer<T: Copy>(m: &DMatrix<T>) -> faer::Mat<T> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    if m.nrows() == 0 {
        return (Vec::new(), m.clone());
    }
    let evd = to_faer(m)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("Hermitian eigensolver converges");
    let values = evd.S().column_vector().iter().map(|z| z.re).collect();
    let u = evd.U();
    (values, DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| u[(i, j)]))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    to_faer(m)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("Hermitian eigensolver converges")
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    to_faer(m)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("symmetric eigensolver converges")
}

/// Eigenvalues of a general complex matrix.
pub fn general_eigenvalues(m: &DMatrix<C64>) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    to_faer(m).eigenvalues().expect("eigensolver converges")
}
