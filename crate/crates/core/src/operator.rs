//! Sparse complex operators on `(C^2)^{\otimes N}`.
//!
//! Basis convention: a tensor basis vector `v_{a1} (x) ... (x) v_{aN}` has
//! index `sum_k bit_k 2^{N-k}` where `bit_k = 0` for spin up (`+1/2`) and
//! `bit_k = 1` for spin down. Site 1 is the most significant bit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Entries below this magnitude are dropped from sparse storage.
pub const DROP_TOL: f64 = 1e-15;

/// Row-compressed complex operator. Each row stores `(column, value)` pairs
/// sorted by column, all nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    n_sites: usize,
    rows: Vec<Vec<(usize, C64)>>,
}

/// One stored entry, as exported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub re: f64,
    pub im: f64,
}

impl SparseOperator {
    pub fn zeros(n_sites: usize) -> Self {
        Self {
            n_sites,
            rows: vec![Vec::new(); 1 << n_sites],
        }
    }

    pub fn identity(n_sites: usize) -> Self {
        Self::diagonal(n_sites, |_| ONE)
    }

    pub fn diagonal(n_sites: usize, f: impl Fn(usize) -> C64) -> Self {
        let rows = (0..1usize << n_sites)
            .map(|s| {
                let v = f(s);
                if v.norm() > DROP_TOL {
                    vec![(s, v)]
                } else {
                    Vec::new()
                }
            })
            .collect();
        Self { n_sites, rows }
    }

    /// Permutation operator sending basis vector `s` to `perm(s)`.
    pub fn permutation(n_sites: usize, perm: impl Fn(usize) -> usize) -> Self {
        let dim = 1usize << n_sites;
        let mut rows = vec![Vec::new(); dim];
        for s in 0..dim {
            rows[perm(s)].push((s, ONE));
        }
        Self { n_sites, rows }
    }

    pub fn from_triplets(n_sites: usize, entries: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let dim = 1usize << n_sites;
        let mut dense_rows: Vec<std::collections::BTreeMap<usize, C64>> = vec![Default::default(); dim];
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside dimension {dim}");
            *dense_rows[r].entry(c).or_insert(ZERO) += v;
        }
        let rows = dense_rows
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| v.norm() > DROP_TOL).collect())
            .collect();
        Self { n_sites, rows }
    }

    pub fn from_dense(n_sites: usize, m: &DMatrix<C64>) -> Self {
        let dim = 1usize << n_sites;
        assert_eq!(m.nrows(), dim);
        assert_eq!(m.ncols(), dim);
        let rows = (0..dim)
            .map(|r| {
                (0..dim)
                    .filter_map(|c| {
                        let v = m[(r, c)];
                        (v.norm() > DROP_TOL).then_some((c, v))
                    })
                    .collect()
            })
            .collect();
        Self { n_sites, rows }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.rows[row]
            .binary_search_by_key(&col, |&(c, _)| c)
            .map_or(ZERO, |k| self.rows[row][k].1)
    }

    pub fn row(&self, row: usize) -> &[(usize, C64)] {
        &self.rows[row]
    }

    pub fn triplets(&self) -> Vec<Triplet> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.iter().map(move |&(c, v)| Triplet {
                    row: r,
                    col: c,
                    re: v.re,
                    im: v.im,
                })
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                m[(r, c)] = v;
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(c, v)| (c, v * s))
                    .filter(|(_, v)| v.norm() > DROP_TOL)
                    .collect()
            })
            .collect();
        Self {
            n_sites: self.n_sites,
            rows,
        }
    }

    /// Entrywise complex conjugate (`T A T` for the antilinear `T`).
    pub fn conj(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(c, v)| (c, v.conj())).collect())
            .collect();
        Self {
            n_sites: self.n_sites,
            rows,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.dim()];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                rows[c].push((r, v));
            }
        }
        Self {
            n_sites: self.n_sites,
            rows,
        }
    }

    /// Hermitian adjoint `A^*`.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn apply(&self, x: &DVector<C64>) -> DVector<C64> {
        assert_eq!(x.len(), self.dim());
        DVector::from_iterator(
            self.dim(),
            self.rows
                .iter()
                .map(|row| row.iter().map(|&(c, v)| v * x[c]).sum::<C64>()),
        )
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n_sites, other.n_sites, "site count mismatch");
        let dim = self.dim();
        let mut acc = vec![ZERO; dim];
        let mut touched = vec![false; dim];
        let mut cols = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                cols.clear();
                for &(k, a) in row {
                    for &(c, b) in &other.rows[k] {
                        if !touched[c] {
                            touched[c] = true;
                            cols.push(c);
                        }
                        acc[c] += a * b;
                    }
                }
                cols.sort_unstable();
                let out = cols
                    .iter()
                    .filter_map(|&c| {
                        let v = acc[c];
                        acc[c] = ZERO;
                        touched[c] = false;
                        (v.norm() > DROP_TOL).then_some((c, v))
                    })
                    .collect();
                out
            })
            .collect();
        Self {
            n_sites: self.n_sites,
            rows,
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        assert_eq!(self.n_sites, other.n_sites, "site count mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let (c, v) = match (a.get(i), b.get(j)) {
                        (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                            i += 1;
                            j += 1;
                            (ca, va + vb * sign)
                        }
                        (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                            i += 1;
                            (ca, va)
                        }
                        (Some(&(ca, va)), None) => {
                            i += 1;
                            (ca, va)
                        }
                        (_, Some(&(cb, vb))) => {
                            j += 1;
                            (cb, vb * sign)
                        }
                        (None, None) => unreachable!(),
                    };
                    if v.norm() > DROP_TOL {
                        out.push((c, v));
                    }
                }
                out
            })
            .collect();
        Self {
            n_sites: self.n_sites,
            rows,
        }
    }

    /// `[self, other] = self other - other self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|row| row.iter().map(|(_, v)| v.norm()))
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|row| row.iter().map(|(_, v)| v.norm_sqr()))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }

    /// `max|A - B| / max(max|A|, max|B|)`, zero when both vanish.
    pub fn relative_deviation(&self, other: &Self) -> f64 {
        let scale = self.max_abs().max(other.max_abs());
        if scale == 0.0 {
            0.0
        } else {
            self.max_deviation(other) / scale
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_deviation(&self.adjoint()) <= tol
    }

    /// Block of rows/columns restricted to the given basis indices.
    pub fn block(&self, indices: &[usize]) -> DMatrix<C64> {
        let mut position = vec![usize::MAX; self.dim()];
        for (k, &s) in indices.iter().enumerate() {
            position[s] = k;
        }
        let mut m = DMatrix::zeros(indices.len(), indices.len());
        for (k, &s) in indices.iter().enumerate() {
            for &(c, v) in &self.rows[s] {
                if position[c] != usize::MAX {
                    m[(k, position[c])] = v;
                }
            }
        }
        m
    }

    /// Largest magnitude of an entry coupling different down-spin sectors.
    pub fn off_sector_max(&self) -> f64 {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.iter()
                    .filter(move |(c, _)| c.count_ones() != r.count_ones())
                    .map(|(_, v)| v.norm())
            })
            .fold(0.0, f64::max)
    }
}

impl Mul for &SparseOperator {
    type Output = SparseOperator;
    fn mul(self, rhs: Self) -> SparseOperator {
        self.matmul(rhs)
    }
}

impl Add for &SparseOperator {
    type Output = SparseOperator;
    fn add(self, rhs: Self) -> SparseOperator {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &SparseOperator {
    type Output = SparseOperator;
    fn sub(self, rhs: Self) -> SparseOperator {
        self.combine(rhs, -1.0)
    }
}

/// Antilinear operator `x -> A conj(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOp {
    pub linear: SparseOperator,
}

impl AntilinearOp {
    /// Adjoint action `X -> (this) X (this)` for an antilinear involution.
    /// With linear part `A` this is `A conj(X) A^{-1}`; for `A = A^{-1}` it is `A conj(X) A`.
    pub fn conjugate(&self, x: &SparseOperator) -> SparseOperator {
        &(&self.linear * &x.conj()) * &self.linear
    }

    pub fn apply(&self, x: &DVector<C64>) -> DVector<C64> {
        self.linear.apply(&x.map(|v| v.conj()))
    }
}

/// Number of down spins in basis state `s`.
pub fn down_count(s: usize) -> usize {
    s.count_ones() as usize
}

/// Basis indices with exactly `n` down spins, ascending.
pub fn sector_indices(n_sites: usize, n: usize) -> Vec<usize> {
    (0..1usize << n_sites).filter(|&s| down_count(s) == n).collect()
}

/// `S^z` eigenvalue of basis state `s`.
pub fn sz_value(n_sites: usize, s: usize) -> f64 {
    n_sites as f64 / 2.0 - down_count(s) as f64
}

/// Bit mask of site `k` (1-based).
pub fn site_mask(n_sites: usize, k: usize) -> usize {
    1 << (n_sites - k)
}

pub fn is_down(n_sites: usize, s: usize, k: usize) -> bool {
    s & site_mask(n_sites, k) != 0
}
