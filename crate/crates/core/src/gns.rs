//! Word bases of the GNS modules, their Gram matrices and the comparison
//! with the metric inner product on the spin chain.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::{symmetric_eigenvalues, BlockDiagonal};
use crate::diagram::{word_to_diagram, TLWord};
use crate::error::{Error, Result};
use crate::functional::{omega, omega_star_product, star_product_counts, StrandCounts};
use crate::operator::{sector_indices, SparseOperator, C64};
use crate::qnum::QContext;
use crate::spin::{apply_word, vacuum_index};

/// Relative pivot threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-9;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Default cap on the word length explored by the basis search.
pub fn default_max_word_len(n_sites: usize) -> usize {
    2 * binomial(n_sites, n_sites / 2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    pub n_sites: usize,
    pub n: usize,
    pub words: Vec<TLWord>,
    pub gram: DMatrix<f64>,
}

/// `G_ij = omega_n(a_i^* a_j)`.
pub fn gram_matrix(words: &[TLWord], n: usize, ctx: &QContext) -> Result<DMatrix<f64>> {
    let k = words.len();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = omega_star_product(&words[i], &words[j], n, ctx)?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// Strand counts of `a_i^* a_j` for every pair.
pub fn counts_table(words: &[TLWord], n: usize) -> Result<Vec<Vec<StrandCounts>>> {
    words
        .iter()
        .map(|a| words.iter().map(|b| star_product_counts(a, b, n)).collect())
        .collect()
}

/// Incremental `L D L^T` factorisation deciding whether a new column extends
/// the rank of a symmetric matrix.
struct RankTracker {
    lower: Vec<Vec<f64>>,
    pivots: Vec<f64>,
    largest: f64,
    tol: f64,
}

impl RankTracker {
    fn new(tol: f64) -> Self {
        Self {
            lower: Vec::new(),
            pivots: Vec::new(),
            largest: 0.0,
            tol,
        }
    }

    /// `column` holds the inner products with the kept vectors, `diag` the self product.
    fn try_push(&mut self, column: &[f64], diag: f64) -> bool {
        let k = self.pivots.len();
        let mut y = vec![0.0; k];
        for i in 0..k {
            let s: f64 = (0..i).map(|l| self.lower[i][l] * y[l] * self.pivots[l]).sum();
            y[i] = (column[i] - s) / self.pivots[i];
        }
        let residual = diag - (0..k).map(|l| y[l] * y[l] * self.pivots[l]).sum::<f64>();
        let scale = self.largest.max(diag.abs());
        if scale == 0.0 || residual.abs() <= self.tol * scale {
            return false;
        }
        self.lower.push(y);
        self.pivots.push(residual);
        self.largest = self.largest.max(residual.abs());
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisOptions {
    pub max_word_len: Option<usize>,
    pub rank_tol: f64,
}

impl Default for BasisOptions {
    fn default() -> Self {
        Self {
            max_word_len: None,
            rank_tol: RANK_TOL,
        }
    }
}

/// Breadth-first search over left multiples of the unit, keeping a word when it
/// raises the rank of the running Gram matrix. Within a length, candidates are
/// tried in lexicographic order and each diagram keeps its smallest spelling.
pub fn generate_basis_words(n_sites: usize, n: usize, ctx: &QContext, opts: BasisOptions) -> Result<SectorBasis> {
    if n > n_sites {
        return Err(Error::SectorIndex { n, n_sites });
    }
    ctx.ensure_generic(n_sites)?;
    let expected = binomial(n_sites, n);
    let max_len = opts.max_word_len.unwrap_or_else(|| default_max_word_len(n_sites));

    let mut kept: Vec<TLWord> = Vec::new();
    let mut tracker = RankTracker::new(opts.rank_tol);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut level = vec![TLWord::unit(n_sites)];
    seen.insert(word_to_diagram(&level[0]).pairing().to_vec());
    let mut len = 0;

    loop {
        let mut next_parents = Vec::new();
        for w in level {
            let column = kept
                .iter()
                .map(|k| omega_star_product(k, &w, n, ctx))
                .collect::<Result<Vec<_>>>()?;
            let diag = omega_star_product(&w, &w, n, ctx)?;
            if tracker.try_push(&column, diag) {
                kept.push(w.clone());
                next_parents.push(w);
                if kept.len() == expected {
                    let gram = gram_matrix(&kept, n, ctx)?;
                    return Ok(SectorBasis {
                        n_sites,
                        n,
                        words: kept,
                        gram,
                    });
                }
            }
        }
        len += 1;
        if len > max_len || next_parents.is_empty() {
            return Err(Error::Degenerate {
                rank: kept.len(),
                expected,
                max_len,
                r: ctx.r(),
            });
        }
        let mut candidates: Vec<TLWord> = next_parents
            .iter()
            .flat_map(|w| (1..n_sites).map(move |i| w.left_mul(i).expect("index in range")))
            .collect();
        candidates.sort_by(|a, b| a.letters().cmp(b.letters()));
        level = candidates
            .into_iter()
            .filter(|c| seen.insert(word_to_diagram(c).pairing().to_vec()))
            .collect();
    }
}

/// A basis from explicit words, checked for full rank.
pub fn basis_from_words(words: Vec<TLWord>, n: usize, ctx: &QContext) -> Result<SectorBasis> {
    let n_sites = words.first().map(TLWord::n_sites).unwrap_or(0);
    if let Some(w) = words.iter().find(|w| w.n_sites() != n_sites) {
        return Err(Error::SiteMismatch {
            left: n_sites,
            right: w.n_sites(),
        });
    }
    let gram = gram_matrix(&words, n, ctx)?;
    let rank = symmetric_rank(&gram, RANK_TOL);
    let expected = binomial(n_sites, n);
    if rank != expected || words.len() != expected {
        return Err(Error::Degenerate {
            rank,
            expected,
            max_len: words.iter().map(TLWord::len).max().unwrap_or(0),
            r: ctx.r(),
        });
    }
    Ok(SectorBasis {
        n_sites,
        n,
        words,
        gram,
    })
}

/// Number of eigenvalues above `tol` times the largest in magnitude.
pub fn symmetric_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let ev = symmetric_eigenvalues(m);
    let largest = ev.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    ev.iter().filter(|&&l| l.abs() > tol * largest).count()
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    symmetric_eigenvalues(m)[0]
}

/// `count` words with uniformly chosen letters and lengths uniform in `1..=2N`.
pub fn sample_words<R: Rng>(n_sites: usize, count: usize, rng: &mut R) -> Vec<TLWord> {
    if n_sites < 2 {
        return vec![TLWord::unit(n_sites); count];
    }
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=2 * n_sites);
            let letters = (0..len).map(|_| rng.gen_range(1..n_sites)).collect();
            TLWord::new(n_sites, letters).expect("letters in range")
        })
        .collect()
}

/// Position of `Omega_n` inside the sector ordering.
pub fn vacuum_position(n_sites: usize, n: usize) -> usize {
    let vac = vacuum_index(n_sites, n);
    sector_indices(n_sites, n)
        .iter()
        .position(|&s| s == vac)
        .expect("vacuum lies in its sector")
}

/// `U_n a = pi(a) Omega_n`, in sector coordinates.
pub fn u_map(word: &TLWord, n: usize, generators: &[SparseOperator]) -> DVector<C64> {
    let n_sites = word.n_sites();
    let mut omega_n = DVector::zeros(1 << n_sites);
    omega_n[vacuum_index(n_sites, n)] = C64::new(1.0, 0.0);
    let full = apply_word(word, generators, &omega_n);
    let idx = sector_indices(n_sites, n);
    DVector::from_iterator(idx.len(), idx.iter().map(|&s| full[s]))
}

/// Columns `U_n a_i`.
pub fn u_matrix(words: &[TLWord], n: usize, generators: &[SparseOperator]) -> DMatrix<C64> {
    let cols: Vec<DVector<C64>> = words.iter().map(|w| u_map(w, n, generators)).collect();
    if cols.is_empty() {
        return DMatrix::zeros(0, 0);
    }
    DMatrix::from_columns(&cols)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordDeviation {
    pub word: Vec<usize>,
    pub omega: f64,
    pub expectation_re: f64,
    pub expectation_im: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub n_sites: usize,
    pub n: usize,
    pub r: f64,
    pub basis_size: usize,
    pub sampled: usize,
    pub gram_deviation: f64,
    pub word_deviation: f64,
    pub max_abs_deviation: f64,
    pub words: Vec<WordDeviation>,
}

/// Compares `omega_n(a)` with `<Omega_n, pi(a) Omega_n>_eta` for every basis and
/// sample word, and the Gram matrix with `U^* eta U`.
pub fn verify_conjecture(
    basis: &SectorBasis,
    sample: &[TLWord],
    eta: &BlockDiagonal,
    generators: &[SparseOperator],
    ctx: &QContext,
) -> Result<ConjectureReport> {
    let (n_sites, n) = (basis.n_sites, basis.n);
    let eta_n = eta.block(n);
    let vac = vacuum_position(n_sites, n);
    let vac_row = eta_n.row(vac).into_owned();

    let mut words = Vec::with_capacity(basis.words.len() + sample.len());
    for w in basis.words.iter().chain(sample) {
        let lhs = omega(w, n, ctx)?;
        let rhs = (&vac_row * u_map(w, n, generators))[(0, 0)];
        words.push(WordDeviation {
            word: w.letters().to_vec(),
            omega: lhs,
            expectation_re: rhs.re,
            expectation_im: rhs.im,
            deviation: (rhs - lhs).norm(),
        });
    }
    let word_deviation = words.iter().map(|d| d.deviation).fold(0.0, f64::max);

    let u = u_matrix(&basis.words, n, generators);
    let metric_gram = u.adjoint() * eta_n * &u;
    let gram_deviation = basis
        .gram
        .iter()
        .zip(metric_gram.iter())
        .map(|(&g, m)| (m - g).norm())
        .fold(0.0, f64::max);

    Ok(ConjectureReport {
        n_sites,
        n,
        r: ctx.r(),
        basis_size: basis.words.len(),
        sampled: sample.len(),
        gram_deviation,
        word_deviation,
        max_abs_deviation: gram_deviation.max(word_deviation),
        words,
    })
}

/// Explored span dimension against the Gram rank on all distinct diagrams of
/// words up to `max_len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullIdealReport {
    pub explored: usize,
    pub rank: usize,
    pub null_dimension: usize,
}

pub fn null_ideal_dimension(n_sites: usize, n: usize, ctx: &QContext, max_len: usize) -> Result<NullIdealReport> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut words = vec![TLWord::unit(n_sites)];
    seen.insert(word_to_diagram(&words[0]).pairing().to_vec());
    let mut frontier = words.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 1..n_sites {
                let c = w.left_mul(i)?;
                if seen.insert(word_to_diagram(&c).pairing().to_vec()) {
                    next.push(c);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let gram = gram_matrix(&words, n, ctx)?;
    let rank = symmetric_rank(&gram, RANK_TOL);
    Ok(NullIdealReport {
        explored: words.len(),
        rank,
        null_dimension: words.len() - rank,
    })
}

/// Matrix of left multiplication by `e_i` in the word basis, obtained by
/// projecting with the Gram matrix: `M = G^{-1} [omega_n(a_j^* e_i a_k)]`.
pub fn left_multiplication(basis: &SectorBasis, i: usize, ctx: &QContext) -> Result<DMatrix<f64>> {
    let k = basis.words.len();
    let mut rhs = DMatrix::zeros(k, k);
    for (col, a) in basis.words.iter().enumerate() {
        let shifted = a.left_mul(i)?;
        for (row, b) in basis.words.iter().enumerate() {
            rhs[(row, col)] = omega_star_product(b, &shifted, basis.n, ctx)?;
        }
    }
    basis
        .gram
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Structural("Gram matrix is singular".into()))
}

/// `max_i |U M_i - E_i|_n U| / max(1, |U|)` over all generators.
pub fn intertwining_deviation(basis: &SectorBasis, generators: &[SparseOperator], ctx: &QContext) -> Result<f64> {
    let (n_sites, n) = (basis.n_sites, basis.n);
    let idx = sector_indices(n_sites, n);
    let u = u_matrix(&basis.words, n, generators);
    let scale = u.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let mut worst = 0.0f64;
    for (k, e) in generators.iter().enumerate() {
        let m = left_multiplication(basis, k + 1, ctx)?.map(|x| C64::new(x, 0.0));
        let e_n = e.block(&idx);
        let dev = (&u * m - e_n * &u).iter().map(|c| c.norm()).fold(0.0, f64::max);
        worst = worst.max(dev / scale);
    }
    Ok(worst)
}
