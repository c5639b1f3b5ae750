//! Matrix representations on the spin chain: Temperley-Lieb generators, the
//! Hamiltonian, `U_q(sl_2)` generators, discrete symmetries and Hecke images.

use nalgebra::DVector;

use crate::diagram::TLWord;
use crate::error::{Error, Result};
use crate::operator::{down_count, is_down, site_mask, sz_value, AntilinearOp, SparseOperator, C64};
use crate::qnum::QContext;

fn check_index(i: usize, n_sites: usize) -> Result<()> {
    if i == 0 || i >= n_sites {
        Err(Error::GeneratorIndex {
            index: i,
            max: n_sites.saturating_sub(1),
            n_sites,
        })
    } else {
        Ok(())
    }
}

/// `sigma^z` eigenvalue (+1 up, -1 down) of site `k` in basis state `s`.
fn sigma_z(n_sites: usize, s: usize, k: usize) -> f64 {
    if is_down(n_sites, s, k) {
        -1.0
    } else {
        1.0
    }
}

/// Anisotropies `(Delta_+, Delta_-)` with `Delta_pm = (q pm q^{-1}) / 2`.
pub fn anisotropies(ctx: &QContext) -> (C64, C64) {
    let q = ctx.q();
    let qi = ctx.q_inv();
    ((q + qi) / 2.0, (q - qi) / 2.0)
}

/// `E_i = (sx sx + sy sy)/2 + D_+ (sz sz - 1)/2 + D_- (sz_i - sz_{i+1})/2` on sites `i, i+1`.
///
/// On the `(up down, down up)` pair the local block is `[[-q^{-1}, 1], [1, -q]]`.
pub fn build_e(i: usize, n_sites: usize, ctx: &QContext) -> Result<SparseOperator> {
    check_index(i, n_sites)?;
    let (d_plus, d_minus) = anisotropies(ctx);
    let dim = 1usize << n_sites;
    let flip = site_mask(n_sites, i) | site_mask(n_sites, i + 1);
    let mut entries = Vec::with_capacity(2 * dim);
    for s in 0..dim {
        let a = sigma_z(n_sites, s, i);
        let b = sigma_z(n_sites, s, i + 1);
        let diag = d_plus * ((a * b - 1.0) / 2.0) + d_minus * ((a - b) / 2.0);
        entries.push((s, s, diag));
        if a != b {
            entries.push((s ^ flip, s, C64::new(1.0, 0.0)));
        }
    }
    Ok(SparseOperator::from_triplets(n_sites, entries))
}

/// All generators `E_1 .. E_{N-1}`.
pub fn build_generators(n_sites: usize, ctx: &QContext) -> Vec<SparseOperator> {
    (1..n_sites)
        .map(|i| build_e(i, n_sites, ctx).expect("index in range"))
        .collect()
}

/// `H = sum_i E_i`.
pub fn build_h(n_sites: usize, ctx: &QContext) -> SparseOperator {
    build_generators(n_sites, ctx)
        .iter()
        .fold(SparseOperator::zeros(n_sites), |acc, e| &acc + e)
}

/// The Hamiltonian written out directly in Pauli form with its boundary term
/// `Delta_- (sz_1 - sz_N) / 2`, independent of [`build_e`].
pub fn build_h_pauli(n_sites: usize, ctx: &QContext) -> SparseOperator {
    let (d_plus, d_minus) = anisotropies(ctx);
    let dim = 1usize << n_sites;
    let mut entries = Vec::new();
    for s in 0..dim {
        let mut diag = d_minus * ((sigma_z(n_sites, s, 1) - sigma_z(n_sites, s, n_sites)) / 2.0);
        for k in 1..n_sites {
            let a = sigma_z(n_sites, s, k);
            let b = sigma_z(n_sites, s, k + 1);
            diag += d_plus * ((a * b - 1.0) / 2.0);
            if a != b {
                // (sx sx + sy sy) / 2 = sigma^+ sigma^- + sigma^- sigma^+
                let t = s ^ site_mask(n_sites, k) ^ site_mask(n_sites, k + 1);
                entries.push((t, s, C64::new(1.0, 0.0)));
            }
        }
        entries.push((s, s, diag));
    }
    SparseOperator::from_triplets(n_sites, entries)
}

/// Images of `S^+`, `S^-`, `q^{S^z}` and `q^{-S^z}`.
#[derive(Debug, Clone)]
pub struct QuantumGroup {
    pub s_plus: SparseOperator,
    pub s_minus: SparseOperator,
    pub q_sz: SparseOperator,
    pub q_minus_sz: SparseOperator,
}

/// Coproduct ordering for the raising/lowering sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coproduct {
    /// `q^{sz/2}` on sites left of the active one, `q^{-sz/2}` to the right.
    Standard,
    /// The opposite coproduct: `q^{-sz/2}` left, `q^{sz/2}` right.
    Opposite,
}

fn ladder(n_sites: usize, ctx: &QContext, raising: bool, coproduct: Coproduct) -> SparseOperator {
    let dim = 1usize << n_sites;
    let sign = match coproduct {
        Coproduct::Standard => 1.0,
        Coproduct::Opposite => -1.0,
    };
    let mut entries = Vec::new();
    for s in 0..dim {
        for n in 1..=n_sites {
            // sigma^+ maps down -> up, sigma^- maps up -> down
            if is_down(n_sites, s, n) != raising {
                continue;
            }
            let exponent: f64 = (1..=n_sites)
                .filter(|&k| k != n)
                .map(|k| {
                    let half = sigma_z(n_sites, s, k) / 2.0;
                    if k < n {
                        sign * half
                    } else {
                        -sign * half
                    }
                })
                .sum();
            entries.push((s ^ site_mask(n_sites, n), s, ctx.q_pow(exponent)));
        }
    }
    SparseOperator::from_triplets(n_sites, entries)
}

pub fn build_quantum_group(n_sites: usize, ctx: &QContext) -> QuantumGroup {
    build_quantum_group_with(n_sites, ctx, Coproduct::Standard)
}

pub fn build_quantum_group_with(n_sites: usize, ctx: &QContext, coproduct: Coproduct) -> QuantumGroup {
    QuantumGroup {
        s_plus: ladder(n_sites, ctx, true, coproduct),
        s_minus: ladder(n_sites, ctx, false, coproduct),
        q_sz: SparseOperator::diagonal(n_sites, |s| ctx.q_pow(sz_value(n_sites, s))),
        q_minus_sz: SparseOperator::diagonal(n_sites, |s| ctx.q_pow(-sz_value(n_sites, s))),
    }
}

/// `[2 S^z]_q` as a diagonal operator.
pub fn q_number_2sz(n_sites: usize, ctx: &QContext) -> SparseOperator {
    SparseOperator::diagonal(n_sites, |s| C64::new(ctx.q_number(2.0 * sz_value(n_sites, s)), 0.0))
}

/// `S^z` as a diagonal operator.
pub fn build_sz(n_sites: usize) -> SparseOperator {
    SparseOperator::diagonal(n_sites, |s| C64::new(sz_value(n_sites, s), 0.0))
}

/// Parity, spin reversal and time reversal.
#[derive(Debug, Clone)]
pub struct Symmetries {
    pub parity: SparseOperator,
    pub spin_reversal: SparseOperator,
    pub time_reversal: AntilinearOp,
}

/// Reverses the order of the `n_sites` bits of `s`.
pub fn reverse_sites(n_sites: usize, s: usize) -> usize {
    (0..n_sites).fold(0, |acc, k| acc | (((s >> k) & 1) << (n_sites - 1 - k)))
}

pub fn build_symmetries(n_sites: usize) -> Symmetries {
    let all = (1usize << n_sites) - 1;
    Symmetries {
        parity: SparseOperator::permutation(n_sites, |s| reverse_sites(n_sites, s)),
        spin_reversal: SparseOperator::permutation(n_sites, |s| s ^ all),
        time_reversal: AntilinearOp {
            linear: SparseOperator::identity(n_sites),
        },
    }
}

/// `B_i = q^{-1} + E_i`.
pub fn build_b(i: usize, n_sites: usize, ctx: &QContext) -> Result<SparseOperator> {
    let e = build_e(i, n_sites, ctx)?;
    Ok(&SparseOperator::identity(n_sites).scale(ctx.q_inv()) + &e)
}

/// `B_i^{-1} = q + E_i`.
pub fn build_b_inv(i: usize, n_sites: usize, ctx: &QContext) -> Result<SparseOperator> {
    let e = build_e(i, n_sites, ctx)?;
    Ok(&SparseOperator::identity(n_sites).scale(ctx.q()) + &e)
}

/// Ordered product of generator matrices; `rep(e_a e_b) = E_a E_b`.
pub fn rep_of_word(w: &TLWord, ctx: &QContext) -> SparseOperator {
    rep_of_word_with(w, &build_generators(w.n_sites(), ctx))
}

pub fn rep_of_word_with(w: &TLWord, generators: &[SparseOperator]) -> SparseOperator {
    w.letters()
        .iter()
        .fold(SparseOperator::identity(w.n_sites()), |acc, &i| &acc * &generators[i - 1])
}

/// `pi(w) x` applied letter by letter, rightmost first.
pub fn apply_word(w: &TLWord, generators: &[SparseOperator], x: &DVector<C64>) -> DVector<C64> {
    w.letters()
        .iter()
        .rev()
        .fold(x.clone(), |v, &i| generators[i - 1].apply(&v))
}

/// Basis index of `Omega_n`: `n` down spins on the leftmost sites, then ups.
pub fn vacuum_index(n_sites: usize, n: usize) -> usize {
    (1..=n).fold(0, |acc, k| acc | site_mask(n_sites, k))
}

/// Fails unless `E_i^2 = -(q + q^{-1}) E_i` for every generator.
pub fn self_test(n_sites: usize, ctx: &QContext) -> Result<()> {
    for (k, e) in build_generators(n_sites, ctx).iter().enumerate() {
        let lhs = e * e;
        let rhs = e.scale(C64::new(-ctx.loop_weight(), 0.0));
        let dev = lhs.relative_deviation(&rhs);
        if dev > ctx.tol() {
            return Err(Error::Structural(format!(
                "E_{}^2 != -(q+1/q) E_{}: relative deviation {dev:e}",
                k + 1,
                k + 1
            )));
        }
    }
    Ok(())
}

/// Checks that an operator preserves the down-spin number.
pub fn preserves_sectors(op: &SparseOperator) -> bool {
    op.off_sector_max() == 0.0
}

/// Largest entry of `op` that does not shift the down-spin count by `shift`.
pub fn sector_shift_violation(op: &SparseOperator, shift: isize) -> f64 {
    (0..op.dim())
        .flat_map(|r| {
            op.row(r).iter().filter_map(move |&(c, v)| {
                let d = down_count(r) as isize - down_count(c) as isize;
                (d != shift).then_some(v.norm())
            })
        })
        .fold(0.0, f64::max)
}
