//! Paths on the `sl_2` Bratteli diagram and the associated path basis.
//!
//! Spins are stored doubled (`2j`) so that every value is an integer.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{is_down, sector_indices, C64};
use crate::qnum::QContext;

/// `(2j_0, 2j_1, ..., 2j_N)` with `j_0 = 0`, `j_1 = 1/2`, steps of `+-1/2`, all `j_k >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BratteliPath {
    twice_spins: Vec<usize>,
}

impl BratteliPath {
    pub fn new(twice_spins: Vec<usize>) -> Result<Self> {
        let ok = twice_spins.len() >= 2
            && twice_spins[0] == 0
            && twice_spins[1] == 1
            && twice_spins.windows(2).all(|w| w[0].abs_diff(w[1]) == 1);
        if ok {
            Ok(Self { twice_spins })
        } else {
            Err(Error::Structural(format!("not a Bratteli path: {twice_spins:?}")))
        }
    }

    pub fn n_sites(&self) -> usize {
        self.twice_spins.len() - 1
    }

    pub fn twice_spins(&self) -> &[usize] {
        &self.twice_spins
    }

    /// `j_k` as a real number.
    pub fn spin(&self, k: usize) -> f64 {
        self.twice_spins[k] as f64 / 2.0
    }

    /// Twice the endpoint spin, `2 j_N`.
    pub fn twice_end(&self) -> usize {
        *self.twice_spins.last().expect("non-empty")
    }

    pub fn end(&self) -> f64 {
        self.twice_end() as f64 / 2.0
    }

    /// Allowed in the restricted diagram: `2 j_k + 1 < r` for all `k`.
    pub fn is_restricted(&self, r: f64) -> bool {
        self.twice_spins[1..].iter().all(|&j2| (j2 + 1) as f64 <= r - 1e-12)
    }
}

/// All paths of length `n_sites`, up-steps explored first, optionally filtered by
/// endpoint `2 j_N` and by the restriction `2 j_k + 1 < r`.
pub fn enumerate_paths(n_sites: usize, twice_end: Option<usize>, r: Option<f64>) -> Vec<BratteliPath> {
    fn extend(prefix: &mut Vec<usize>, n_sites: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n_sites + 1 {
            out.push(prefix.clone());
            return;
        }
        let last = *prefix.last().expect("non-empty");
        prefix.push(last + 1);
        extend(prefix, n_sites, out);
        prefix.pop();
        if last > 0 {
            prefix.push(last - 1);
            extend(prefix, n_sites, out);
            prefix.pop();
        }
    }
    if n_sites == 0 {
        return Vec::new();
    }
    let mut raw = Vec::new();
    extend(&mut vec![0, 1], n_sites, &mut raw);
    raw.into_iter()
        .map(|twice_spins| BratteliPath { twice_spins })
        .filter(|p| twice_end.is_none_or(|e| p.twice_end() == e))
        .filter(|p| r.is_none_or(|r| p.is_restricted(r)))
        .collect()
}

/// Direction of a fusion step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// `j -> j + 1/2`
    Up,
    /// `j -> j - 1/2`
    Down,
}

fn is_half_integer(x: f64) -> bool {
    (2.0 * x - (2.0 * x).round()).abs() < 1e-12
}

fn sqrt_ratio(num: f64, den: f64, j: f64, m: f64, ctx: &QContext) -> Result<f64> {
    let ratio = num / den;
    if ratio < -ctx.tol() || !ratio.is_finite() {
        return Err(Error::Radicand { value: ratio, j, m });
    }
    Ok(ratio.max(0.0).sqrt())
}

/// q-Clebsch-Gordan coefficient for fusing spin `j` (weight `m`) with a spin-1/2
/// of weight `alpha`:
///
/// - up: `q^{-alpha j + m/2} ([j + 2 alpha m + 1] / [2j + 1])^{1/2}`
/// - down: `2 alpha q^{alpha (j+1) + m/2} ([j - 2 alpha m] / [2j + 1])^{1/2}`
pub fn cg(j: f64, m: f64, alpha: f64, step: Step, ctx: &QContext) -> Result<C64> {
    if !is_half_integer(j) || !is_half_integer(m) || j < 0.0 || m.abs() > j + 1e-12 || !is_half_integer(j - m) {
        return Err(Error::Weight { j, m });
    }
    if (alpha.abs() - 0.5).abs() > 1e-12 {
        return Err(Error::Weight { j: 0.5, m: alpha });
    }
    let den = ctx.q_number(2.0 * j + 1.0);
    match step {
        Step::Up => {
            let mag = sqrt_ratio(ctx.q_number(j + 2.0 * alpha * m + 1.0), den, j, m, ctx)?;
            Ok(ctx.q_pow(-alpha * j + m / 2.0) * mag)
        }
        Step::Down => {
            if j < 0.5 {
                return Err(Error::Weight { j, m });
            }
            let mag = sqrt_ratio(ctx.q_number(j - 2.0 * alpha * m), den, j, m, ctx)?;
            Ok(ctx.q_pow(alpha * (j + 1.0) + m / 2.0) * (2.0 * alpha * mag))
        }
    }
}

/// A path-basis vector `|path, m>`, stored on its down-spin sector.
#[derive(Debug, Clone, PartialEq)]
pub struct PathState {
    pub path: BratteliPath,
    /// Twice the weight, `2m`.
    pub twice_m: isize,
    /// Number of down spins, `N/2 - m`.
    pub n_down: usize,
    /// Coefficients aligned with `sector_indices(N, n_down)`.
    pub coefficients: DVector<C64>,
}

impl PathState {
    pub fn m(&self) -> f64 {
        self.twice_m as f64 / 2.0
    }

    /// Embeds into the full `2^N`-dimensional space.
    pub fn to_full(&self) -> DVector<C64> {
        let n_sites = self.path.n_sites();
        let mut v = DVector::zeros(1 << n_sites);
        for (k, s) in sector_indices(n_sites, self.n_down).into_iter().enumerate() {
            v[s] = self.coefficients[k];
        }
        v
    }
}

/// `|path, m> = sum_alpha <alpha | path, m> v_alpha` with the coefficient a
/// product of one Clebsch-Gordan factor per fusion step.
pub fn path_state(path: &BratteliPath, twice_m: isize, ctx: &QContext) -> Result<PathState> {
    let n_sites = path.n_sites();
    let twice_end = path.twice_end() as isize;
    if twice_m.abs() > twice_end || (twice_end - twice_m) % 2 != 0 {
        return Err(Error::Weight {
            j: path.end(),
            m: twice_m as f64 / 2.0,
        });
    }
    let n_down = ((n_sites as isize - twice_m) / 2) as usize;
    let indices = sector_indices(n_sites, n_down);
    let mut coefficients = DVector::zeros(indices.len());
    'config: for (slot, &s) in indices.iter().enumerate() {
        let alpha = |k: usize| -> f64 { if is_down(n_sites, s, k) { -0.5 } else { 0.5 } };
        let mut partial = alpha(1);
        let mut coeff = C64::new(1.0, 0.0);
        for k in 1..n_sites {
            let j = path.spin(k);
            let next = path.spin(k + 1);
            let a = alpha(k + 1);
            if (partial + a).abs() > next + 1e-12 {
                continue 'config;
            }
            let step = if next > j { Step::Up } else { Step::Down };
            coeff *= cg(j, partial, a, step, ctx)?;
            partial += a;
        }
        coefficients[slot] = coeff;
    }
    Ok(PathState {
        path: path.clone(),
        twice_m,
        n_down,
        coefficients,
    })
}

/// Every path state `|path, m>` for the given path set, paths in order and
/// `m` descending within a path.
pub fn all_path_states(paths: &[BratteliPath], ctx: &QContext) -> Result<Vec<PathState>> {
    let mut out = Vec::new();
    for p in paths {
        let e = p.twice_end() as isize;
        let mut m2 = e;
        while m2 >= -e {
            out.push(path_state(p, m2, ctx)?);
            m2 -= 2;
        }
    }
    Ok(out)
}
