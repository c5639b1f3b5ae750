//! Oriented diagrams and the sector functionals `omega_n`.
//!
//! The profile `s_n` (n down arrows followed by ups) is placed on both the top
//! and the bottom boundary. A strand is oriented when it joins compatible
//! arrows; the functional vanishes as soon as one strand is unoriented.
//! A cup `b_i b_j` (`i < j`) is anticlockwise when it runs down at `i` and up
//! at `j`; caps never count.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagram::{word_to_diagram, PlanarDiagram, Strand, TLWord};
use crate::error::{Error, Result};
use crate::qnum::QContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arrow {
    Down,
    Up,
}

/// `n_down` down arrows on the leftmost sites, ups elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrientationProfile {
    n_sites: usize,
    n_down: usize,
}

impl OrientationProfile {
    pub fn new(n_sites: usize, n_down: usize) -> Result<Self> {
        if n_down > n_sites {
            return Err(Error::SectorIndex { n: n_down, n_sites });
        }
        Ok(Self { n_sites, n_down })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_down(&self) -> usize {
        self.n_down
    }

    /// Arrow at 0-based site `k`.
    pub fn arrow(&self, k: usize) -> Arrow {
        if k < self.n_down {
            Arrow::Down
        } else {
            Arrow::Up
        }
    }

    pub fn arrows(&self) -> Vec<Arrow> {
        (0..self.n_sites).map(|k| self.arrow(k)).collect()
    }
}

/// Unoriented strands, anticlockwise cups and closed loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct StrandCounts {
    pub x0: usize,
    pub x: usize,
    pub y: usize,
}

pub fn classify_strands(d: &PlanarDiagram, s: &OrientationProfile) -> Result<StrandCounts> {
    if d.n_sites() != s.n_sites() {
        return Err(Error::SiteMismatch {
            left: d.n_sites(),
            right: s.n_sites(),
        });
    }
    let mut counts = StrandCounts {
        y: d.loops(),
        ..Default::default()
    };
    for strand in d.strands() {
        match strand {
            Strand::Through { bottom, top } => {
                if s.arrow(bottom) != s.arrow(top) {
                    counts.x0 += 1;
                }
            }
            Strand::Cup { left, right } => match (s.arrow(left), s.arrow(right)) {
                (Arrow::Down, Arrow::Up) => counts.x += 1,
                (Arrow::Up, Arrow::Down) => {}
                _ => counts.x0 += 1,
            },
            Strand::Cap { left, right } => {
                if s.arrow(left) == s.arrow(right) {
                    counts.x0 += 1;
                }
            }
        }
    }
    Ok(counts)
}

/// `1 + sum_{k=1}^{L} (-1)^k (q^k + q^{-k})`, i.e. `sum_{k=-L}^{L} (-q)^k`.
///
/// For `L < 0` the sum runs backwards: `sum_{k=1}^{L} = -sum_{k=L+1}^{0}`,
/// which gives `f(L) = -f(-L-1)`. `L = 0` is the empty sum.
fn alternating_bracket(limit: isize, ctx: &QContext) -> Complex64 {
    if limit < 0 {
        return -alternating_bracket(-limit - 1, ctx);
    }
    (1..=limit).fold(Complex64::new(1.0, 0.0), |acc, k| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc + (ctx.q_pow(k as f64) + ctx.q_pow(-(k as f64))) * sign
    })
}

/// Value of `omega_n` from strand counts, in complex arithmetic.
pub fn omega_from_counts(n_sites: usize, n: usize, counts: StrandCounts, ctx: &QContext) -> Complex64 {
    if counts.x0 > 0 {
        return Complex64::new(0.0, 0.0);
    }
    let loop_factor = Complex64::new(ctx.loop_weight().powi(counts.y as i32), 0.0);
    if n_sites.is_multiple_of(2) {
        let half = n_sites as f64 / 2.0;
        let sign = if (counts.x + counts.y).is_multiple_of(2) { 1.0 } else { -1.0 };
        let num = ctx.q_pow(half - n as f64) + ctx.q_pow(n as f64 - half);
        let den = ctx.q_pow(half - counts.x as f64) + ctx.q_pow(counts.x as f64 - half);
        loop_factor * sign * num / den
    } else {
        let half = (n_sites as isize - 1) / 2;
        let sign = if (n + counts.y).is_multiple_of(2) { 1.0 } else { -1.0 };
        let num = alternating_bracket(half - n as isize, ctx);
        let den = alternating_bracket(half - counts.x as isize, ctx);
        loop_factor * sign * num / den
    }
}

fn check_sector(n_sites: usize, n: usize) -> Result<()> {
    if n > n_sites {
        Err(Error::SectorIndex { n, n_sites })
    } else {
        Ok(())
    }
}

fn validated_real(value: Complex64, what: impl FnOnce() -> String, ctx: &QContext) -> Result<f64> {
    if value.im.abs() > ctx.tol() * value.norm().max(1.0) {
        Err(Error::NotReal {
            what: what(),
            imag: value.im,
            tol: ctx.tol(),
        })
    } else {
        Ok(value.re)
    }
}

/// `omega_n` of a diagram.
pub fn omega_diagram(d: &PlanarDiagram, n: usize, ctx: &QContext) -> Result<f64> {
    check_sector(d.n_sites(), n)?;
    let profile = OrientationProfile::new(d.n_sites(), n)?;
    let counts = classify_strands(d, &profile)?;
    let value = omega_from_counts(d.n_sites(), n, counts, ctx);
    validated_real(value, || format!("omega_{n} of diagram"), ctx)
}

/// `omega_n(w)` together with the strand counts it was computed from.
pub fn omega_with_counts(w: &TLWord, n: usize, ctx: &QContext) -> Result<(f64, StrandCounts)> {
    check_sector(w.n_sites(), n)?;
    let d = word_to_diagram(w);
    let profile = OrientationProfile::new(w.n_sites(), n)?;
    let counts = classify_strands(&d, &profile)?;
    let value = omega_from_counts(w.n_sites(), n, counts, ctx);
    let re = validated_real(value, || format!("omega_{n}({w})"), ctx)?;
    Ok((re, counts))
}

pub fn omega(w: &TLWord, n: usize, ctx: &QContext) -> Result<f64> {
    omega_with_counts(w, n, ctx).map(|(v, _)| v)
}

/// GNS inner product `<a, b>_{omega_n} = omega_n(a^* b)`.
pub fn omega_star_product(a: &TLWord, b: &TLWord, n: usize, ctx: &QContext) -> Result<f64> {
    omega(&a.star().concat(b)?, n, ctx)
}

/// Strand counts of `a^* b` under `s_n`.
pub fn star_product_counts(a: &TLWord, b: &TLWord, n: usize) -> Result<StrandCounts> {
    let w = a.star().concat(b)?;
    classify_strands(&word_to_diagram(&w), &OrientationProfile::new(w.n_sites(), n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(n: usize, letters: &[usize]) -> TLWord {
        TLWord::new(n, letters.to_vec()).unwrap()
    }

    #[test]
    fn worked_counts() {
        let d = word(4, &[2, 2, 3, 1, 2]).diagram();
        let c = classify_strands(&d, &OrientationProfile::new(4, 2).unwrap()).unwrap();
        assert_eq!(c, StrandCounts { x0: 0, x: 2, y: 1 });

        let d = word(5, &[2, 1, 3, 4, 2]).diagram();
        let c = classify_strands(&d, &OrientationProfile::new(5, 2).unwrap()).unwrap();
        assert!(c.x0 > 0);

        for n_sites in 1..6 {
            for n in 0..=n_sites {
                let c = classify_strands(
                    &PlanarDiagram::identity(n_sites),
                    &OrientationProfile::new(n_sites, n).unwrap(),
                )
                .unwrap();
                assert_eq!(c, StrandCounts::default());
            }
        }
        assert!(classify_strands(&PlanarDiagram::identity(3), &OrientationProfile::new(4, 1).unwrap()).is_err());
    }

    #[test]
    fn worked_values() {
        let ctx = QContext::new(6.5).unwrap();
        let v = omega(&word(4, &[2, 2, 3, 1, 2]), 2, &ctx).unwrap();
        assert!((v + ctx.loop_weight()).abs() < 1e-13);
        assert_eq!(omega(&word(5, &[2, 1, 3, 4, 2]), 2, &ctx).unwrap(), 0.0);
        let ctx2 = QContext::new(3.3).unwrap();
        assert!((omega(&word(2, &[1]), 1, &ctx2).unwrap() + 1.0).abs() < 1e-14);
        assert!(matches!(
            omega(&TLWord::unit(3), 4, &ctx),
            Err(Error::SectorIndex { n: 4, n_sites: 3 })
        ));
    }

    #[test]
    fn unit_value_even() {
        let ctx = QContext::new(9.1).unwrap();
        for n_sites in [2usize, 4, 6] {
            let half = n_sites as f64 / 2.0;
            for n in 0..=n_sites {
                let expected = (ctx.q_pow(half - n as f64) + ctx.q_pow(n as f64 - half))
                    / (ctx.q_pow(half) + ctx.q_pow(-half));
                let v = omega(&TLWord::unit(n_sites), n, &ctx).unwrap();
                assert!((v - expected.re).abs() < 1e-13 && expected.im.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn bracket_reflection() {
        let ctx = QContext::new(7.7).unwrap();
        assert_eq!(alternating_bracket(0, &ctx), Complex64::new(1.0, 0.0));
        for l in 0..4 {
            let a = alternating_bracket(l, &ctx);
            let b = alternating_bracket(-l - 1, &ctx);
            assert!((a + b).norm() < 1e-14);
            // closed form sum_{k=-L}^{L} (-q)^k
            let q = -ctx.q();
            let direct: Complex64 = (-l..=l).map(|k| q.powi(k as i32)).sum();
            assert!((a - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn star_product_example() {
        let ctx = QContext::new(7.0).unwrap();
        let a6 = word(5, &[1, 3, 2]);
        let a10 = word(5, &[3, 2, 1, 4, 3, 2]);
        let v = omega_star_product(&a6, &a10, 2, &ctx).unwrap();
        assert!((v + ctx.loop_weight()).abs() < 1e-13);
        let e2 = word(5, &[2]);
        assert_eq!(star_product_counts(&e2, &e2, 2).unwrap(), StrandCounts { x0: 0, x: 1, y: 1 });
        let one = TLWord::unit(5);
        assert_eq!(
            omega_star_product(&one, &one, 2, &ctx).unwrap(),
            omega(&one, 2, &ctx).unwrap()
        );
    }
}
