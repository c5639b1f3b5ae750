//! The quasi-Hermiticity metric `eta` and the two charge-like operators `C`, `C'`.
//!
//! Three independent routes are provided:
//!
//! 1. `eta = sum |path, m>_T <path, m|_T` over conjugated path states,
//! 2. `eta = R C'` with `C'` built from the quantum-group generators
//!    (or from its action `C'|path, m> = (-1)^{N/2 - j_N} |path, -m>`),
//! 3. `eta = P C` with `C` the image of the half-twist braid in the Hecke algebra,
//!    rescaled by `q^{N(N-4)/4 + j(j+1)}` on each spin-`j` isotypic subspace.
//!
//! All of them are tied together by the relation suites in [`crate::relations`].

use nalgebra::DMatrix;

use crate::blocks::{general_eigenvalues, BlockDiagonal};
use crate::error::{Error, Result};
use crate::operator::{sector_indices, sz_value, SparseOperator, C64};
use crate::paths::{all_path_states, enumerate_paths, BratteliPath, PathState};
use crate::qnum::QContext;
use crate::spin::{build_b, build_h, build_quantum_group, build_symmetries};

/// Path states of one down-spin sector as the columns of a square matrix.
#[derive(Debug, Clone)]
pub struct SectorPaths {
    pub paths: Vec<BratteliPath>,
    pub matrix: DMatrix<C64>,
    pub inverse: DMatrix<C64>,
}

/// The unrestricted path basis, organised by sector.
#[derive(Debug, Clone)]
pub struct PathBasis {
    n_sites: usize,
    states: Vec<PathState>,
    sectors: Vec<SectorPaths>,
}

impl PathBasis {
    pub fn new(n_sites: usize, ctx: &QContext) -> Result<Self> {
        let states = all_path_states(&enumerate_paths(n_sites, None, None), ctx)?;
        let mut sectors = Vec::with_capacity(n_sites + 1);
        for n in 0..=n_sites {
            let dim = sector_indices(n_sites, n).len();
            let members: Vec<&PathState> = states.iter().filter(|s| s.n_down == n).collect();
            if members.len() != dim {
                return Err(Error::Structural(format!(
                    "sector {n} has {} path states for dimension {dim}",
                    members.len()
                )));
            }
            let matrix = DMatrix::from_fn(dim, dim, |i, k| members[k].coefficients[i]);
            let inverse = matrix
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::Structural(format!("path basis of sector {n} is singular")))?;
            sectors.push(SectorPaths {
                paths: members.iter().map(|s| s.path.clone()).collect(),
                matrix,
                inverse,
            });
        }
        Ok(Self {
            n_sites,
            states,
            sectors,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn states(&self) -> &[PathState] {
        &self.states
    }

    pub fn sector(&self, n: usize) -> &SectorPaths {
        &self.sectors[n]
    }

    /// Distinct endpoint values `2 j_N`, ascending.
    pub fn twice_endpoints(&self) -> Vec<usize> {
        let mut ends: Vec<usize> = self.states.iter().map(|s| s.path.twice_end()).collect();
        ends.sort_unstable();
        ends.dedup();
        ends
    }

    /// Projector onto the span of path states with endpoint `2 j_N = twice_j`,
    /// along the other path states.
    pub fn spin_projector(&self, twice_j: usize) -> BlockDiagonal {
        let blocks = self
            .sectors
            .iter()
            .map(|s| {
                let mut cols = s.matrix.clone();
                for (k, p) in s.paths.iter().enumerate() {
                    if p.twice_end() != twice_j {
                        cols.column_mut(k).fill(C64::new(0.0, 0.0));
                    }
                }
                cols * &s.inverse
            })
            .collect();
        BlockDiagonal::from_blocks(self.n_sites, blocks)
    }
}

fn accumulate_eta(n_sites: usize, states: &[PathState]) -> BlockDiagonal {
    let mut eta = BlockDiagonal::zeros(n_sites);
    for s in states {
        // |path, m>_T = T |path, m> has conjugated coefficients
        let t = s.coefficients.map(|c| c.conj());
        let block = eta.block_mut(s.n_down);
        *block += &t * t.adjoint();
    }
    eta
}

/// Minimum eigenvalue over all sectors.
pub fn min_eigenvalue(m: &BlockDiagonal) -> f64 {
    m.hermitian_eigenvalues()
        .iter()
        .flat_map(|ev| ev.first().copied())
        .fold(f64::INFINITY, f64::min)
}

/// `eta` as a sum of projectors onto the conjugated path basis, per sector.
/// Requires `r > N`; fails if the result is not Hermitian positive definite.
pub fn build_eta_blocks(n_sites: usize, ctx: &QContext) -> Result<BlockDiagonal> {
    ctx.ensure_generic(n_sites)?;
    let states = all_path_states(&enumerate_paths(n_sites, None, None), ctx)?;
    let eta = accumulate_eta(n_sites, &states);
    let herm = eta.max_deviation(&eta.adjoint());
    if herm > ctx.tol() * eta.max_abs().max(1.0) {
        return Err(Error::Structural(format!("eta is not Hermitian (deviation {herm:e})")));
    }
    let min = min_eigenvalue(&eta);
    if !(min > 0.0) {
        return Err(Error::Structural(format!(
            "eta is not positive definite (minimum eigenvalue {min:e})"
        )));
    }
    Ok(eta)
}

pub fn build_eta(n_sites: usize, ctx: &QContext) -> Result<SparseOperator> {
    build_eta_blocks(n_sites, ctx).map(|b| b.to_sparse())
}

/// Message attached to every restricted-path build.
pub const RESTRICTED_WARNING: &str =
    "restricted path set: the metric identities are only exercised for r > N; results are unchecked";

/// `eta` summed over the restricted paths `2 j_k + 1 < r` only. The result is
/// generally singular on the full space; no positivity check is made.
pub fn build_eta_restricted(n_sites: usize, ctx: &QContext) -> Result<(SparseOperator, &'static str)> {
    let states = all_path_states(&enumerate_paths(n_sites, None, Some(ctx.r())), ctx)?;
    Ok((accumulate_eta(n_sites, &states).to_sparse(), RESTRICTED_WARNING))
}

fn parity_sign(n_sites: usize, twice_end: usize) -> f64 {
    // (-1)^{N/2 - j_N}
    if ((n_sites - twice_end) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `C'` from its action on the path basis: `|path, m> -> (-1)^{N/2 - j_N} |path, -m>`.
pub fn build_cprime_from_action(basis: &PathBasis) -> SparseOperator {
    let n_sites = basis.n_sites;
    let mut entries = Vec::new();
    for n in 0..=n_sites {
        let src = basis.sector(n);
        let dst = basis.sector(n_sites - n);
        let signs = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            src.paths.len(),
            src.paths.iter().map(|p| C64::new(parity_sign(n_sites, p.twice_end()), 0.0)),
        ));
        let block = &dst.matrix * signs * &src.inverse;
        let rows = sector_indices(n_sites, n_sites - n);
        let cols = sector_indices(n_sites, n);
        for (i, &r) in rows.iter().enumerate() {
            for (k, &c) in cols.iter().enumerate() {
                entries.push((r, c, block[(i, k)]));
            }
        }
    }
    SparseOperator::from_triplets(n_sites, entries)
}

fn sz_projector(n_sites: usize, m: f64) -> SparseOperator {
    SparseOperator::diagonal(n_sites, |s| {
        if (sz_value(n_sites, s) - m).abs() < 1e-9 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn power(op: &SparseOperator, k: usize) -> SparseOperator {
    (0..k).fold(SparseOperator::identity(op.n_sites()), |acc, _| &acc * op)
}

/// `C'` from the quantum-group generators: on the spin-`j` isotypic subspace,
///
/// `C'_j = (-1)^{N/2 - j} sum_{m >= 0} [j-m]_q! / [j+m]_q! ((S^-)^{2m} d(S^z = m) + (S^+)^{2m} d(S^z = -m)) / 2^{d(m = 0)}`.
pub fn build_cprime_from_generators(basis: &PathBasis, ctx: &QContext) -> SparseOperator {
    let n_sites = basis.n_sites;
    let qg = build_quantum_group(n_sites, ctx);
    let dim = 1usize << n_sites;
    let mut total = DMatrix::<C64>::zeros(dim, dim);
    for twice_j in basis.twice_endpoints() {
        let mut cj = SparseOperator::zeros(n_sites);
        let mut twice_m = twice_j % 2;
        while twice_m <= twice_j {
            let m = twice_m as f64 / 2.0;
            let weight = ctx.q_factorial((twice_j - twice_m) / 2) / ctx.q_factorial((twice_j + twice_m) / 2);
            let lower = &power(&qg.s_minus, twice_m) * &sz_projector(n_sites, m);
            let raise = &power(&qg.s_plus, twice_m) * &sz_projector(n_sites, -m);
            let halving = if twice_m == 0 { 0.5 } else { 1.0 };
            cj = &cj + &(&lower + &raise).scale(C64::new(weight * halving, 0.0));
            twice_m += 2;
        }
        let sign = parity_sign(n_sites, twice_j);
        let projector = basis.spin_projector(twice_j).to_sparse().to_dense();
        total += cj.to_dense() * projector * C64::new(sign, 0.0);
    }
    SparseOperator::from_dense(n_sites, &total)
}

/// Image of the braid `beta = beta_1 beta_2 ... beta_{N-1}` with `beta_n = b_n b_{n-1} ... b_1`.
pub fn half_twist(n_sites: usize, ctx: &QContext) -> SparseOperator {
    let bs: Vec<SparseOperator> = (1..n_sites)
        .map(|i| build_b(i, n_sites, ctx).expect("index in range"))
        .collect();
    let mut out = SparseOperator::identity(n_sites);
    for n in 1..n_sites {
        for i in (1..=n).rev() {
            out = &out * &bs[i - 1];
        }
    }
    out
}

/// `C = sum_j q^{N(N-4)/4 + j(j+1)} B Pi_j` with `B` the half-twist image.
pub fn build_c(basis: &PathBasis, ctx: &QContext) -> Result<SparseOperator> {
    let n_sites = basis.n_sites;
    let twist = BlockDiagonal::from_sparse(&half_twist(n_sites, ctx))?;
    let base = (n_sites * n_sites) as f64 / 4.0 - n_sites as f64;
    let mut c = BlockDiagonal::zeros(n_sites);
    for twice_j in basis.twice_endpoints() {
        let j = twice_j as f64 / 2.0;
        let scale = ctx.q_pow(base + j * (j + 1.0));
        let part = twist.mul(&basis.spin_projector(twice_j));
        for n in 0..=n_sites {
            *c.block_mut(n) += part.block(n) * scale;
        }
    }
    Ok(c.to_sparse())
}

/// All three metric constructions at once.
#[derive(Debug, Clone)]
pub struct MetricSet {
    pub eta: SparseOperator,
    pub eta_blocks: BlockDiagonal,
    pub c: SparseOperator,
    pub c_prime: SparseOperator,
    pub c_prime_generators: SparseOperator,
}

impl MetricSet {
    pub fn build(n_sites: usize, ctx: &QContext) -> Result<Self> {
        let eta_blocks = build_eta_blocks(n_sites, ctx)?;
        let basis = PathBasis::new(n_sites, ctx)?;
        Ok(Self {
            eta: eta_blocks.to_sparse(),
            eta_blocks,
            c: build_c(&basis, ctx)?,
            c_prime: build_cprime_from_action(&basis),
            c_prime_generators: build_cprime_from_generators(&basis, ctx),
        })
    }

    /// `P C`, which equals `eta`.
    pub fn eta_from_c(&self) -> SparseOperator {
        let p = build_symmetries(self.eta.n_sites()).parity;
        &p * &self.c
    }

    /// `R C'`, which equals `eta`.
    pub fn eta_from_c_prime(&self) -> SparseOperator {
        let r = build_symmetries(self.eta.n_sites()).spin_reversal;
        &r * &self.c_prime
    }
}

/// `eta^{1/2}`, `eta^{-1/2}` and `h = eta^{1/2} H eta^{-1/2}`.
#[derive(Debug, Clone)]
pub struct HermitianForm {
    pub eta_sqrt: BlockDiagonal,
    pub eta_inv_sqrt: BlockDiagonal,
    pub h: BlockDiagonal,
}

pub fn eta_sqrt_and_h(eta: &BlockDiagonal, hamiltonian: &SparseOperator, ctx: &QContext) -> Result<HermitianForm> {
    let min = min_eigenvalue(eta);
    if !(min > 0.0) {
        return Err(Error::Structural(format!(
            "eta is not positive definite (minimum eigenvalue {min:e})"
        )));
    }
    let eta_sqrt = eta.hermitian_function(f64::sqrt);
    let eta_inv_sqrt = eta.hermitian_function(|l| 1.0 / l.sqrt());
    let h_blocks = BlockDiagonal::from_sparse(hamiltonian)?;
    let h = eta_sqrt.mul(&h_blocks).mul(&eta_inv_sqrt);
    let herm = h.max_deviation(&h.adjoint());
    if herm > ctx.tol().max(1e-9) * h.max_abs().max(1.0) {
        return Err(Error::Structural(format!("h is not Hermitian (deviation {herm:e})")));
    }
    Ok(HermitianForm {
        eta_sqrt,
        eta_inv_sqrt,
        h,
    })
}

pub fn sort_by_real(values: &mut [C64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Eigenvalues of `H`, computed sector by sector with a non-Hermitian solver,
/// sorted by real part.
pub fn spectrum_h(n_sites: usize, ctx: &QContext) -> Result<Vec<C64>> {
    let blocks = BlockDiagonal::from_sparse(&build_h(n_sites, ctx))?;
    let mut out: Vec<C64> = blocks.blocks().iter().flat_map(general_eigenvalues).collect();
    sort_by_real(&mut out);
    Ok(out)
}

/// Eigenvalues of a Hermitian block operator, ascending.
pub fn spectrum_hermitian(h: &BlockDiagonal) -> Vec<f64> {
    let mut out: Vec<f64> = h.hermitian_eigenvalues().into_iter().flatten().collect();
    out.sort_by(f64::total_cmp);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::build_e;

    #[test]
    fn one_site_identity() {
        let ctx = QContext::new(2.5).unwrap();
        let eta = build_eta(1, &ctx).unwrap();
        assert!(eta.max_deviation(&SparseOperator::identity(1)) < 1e-15);
    }

    #[test]
    fn two_site_closed_form() {
        // Hand sum of the triplet and singlet projectors on (up down, down up):
        // (1/[2]) [[2, q^{-1} - q], [q - q^{-1}, 2]], and 1 on the other two states.
        let ctx = QContext::new(3.1).unwrap();
        let eta = build_eta(2, &ctx).unwrap();
        let q = ctx.q();
        let two = ctx.q_number(2.0);
        let expected = SparseOperator::from_triplets(
            2,
            vec![
                (0, 0, C64::new(1.0, 0.0)),
                (3, 3, C64::new(1.0, 0.0)),
                (1, 1, C64::new(2.0 / two, 0.0)),
                (2, 2, C64::new(2.0 / two, 0.0)),
                (1, 2, (q.inv() - q) / two),
                (2, 1, (q - q.inv()) / two),
            ],
        );
        assert!(eta.max_deviation(&expected) < 1e-14);
        let e = build_e(1, 2, &ctx).unwrap();
        assert!((&eta * &e).max_deviation(&(&e.adjoint() * &eta)) < 1e-14);
    }

    #[test]
    fn regime_enforced() {
        let ctx = QContext::new(3.0).unwrap();
        assert!(matches!(build_eta(4, &ctx), Err(Error::Regime { .. })));
        let (eta, warning) = build_eta_restricted(4, &ctx).unwrap();
        assert_eq!(warning, RESTRICTED_WARNING);
        // single restricted path (0, 1/2, 0, 1/2, 0): rank one
        assert_eq!(eta.n_sites(), 4);
        assert!(eta.nnz() > 0);
    }

    #[test]
    fn positive_at_four_sites() {
        let ctx = QContext::new(5.5).unwrap();
        let eta = build_eta_blocks(4, &ctx).unwrap();
        assert!(min_eigenvalue(&eta) > 0.0);
    }

    #[test]
    fn three_routes_agree_small() {
        for n_sites in 2..=5 {
            let ctx = QContext::new(n_sites as f64 + 2.0).unwrap();
            let set = MetricSet::build(n_sites, &ctx).unwrap();
            assert!(set.eta_from_c().max_deviation(&set.eta) < 1e-12);
            assert!(set.eta_from_c_prime().max_deviation(&set.eta) < 1e-12);
            assert!(set.c_prime_generators.max_deviation(&set.c_prime) < 1e-12);
            let id = SparseOperator::identity(n_sites);
            assert!((&set.c_prime * &set.c_prime).max_deviation(&id) < 1e-12);
        }
    }

    #[test]
    fn cprime_action_on_paths() {
        let ctx = QContext::new(6.0).unwrap();
        let basis = PathBasis::new(4, &ctx).unwrap();
        let cp = build_cprime_from_action(&basis);
        for s in basis.states() {
            let image = cp.apply(&s.to_full());
            let partner = basis
                .states()
                .iter()
                .find(|t| t.path == s.path && t.twice_m == -s.twice_m)
                .unwrap();
            let sign = parity_sign(4, s.path.twice_end());
            assert!((image - partner.to_full() * C64::new(sign, 0.0)).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-12);
        }
    }

    #[test]
    fn two_site_h_spectrum() {
        let ctx = QContext::new(2.7).unwrap();
        let eta = build_eta_blocks(2, &ctx).unwrap();
        let form = eta_sqrt_and_h(&eta, &build_h(2, &ctx), &ctx).unwrap();
        let ev = spectrum_hermitian(&form.h);
        let expected = [-ctx.loop_weight(), 0.0, 0.0, 0.0];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
        assert!(form.eta_sqrt.mul(&form.eta_sqrt).max_deviation(&eta) < 1e-13);
    }
}
