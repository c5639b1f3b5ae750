//! Deformation parameter and q-numbers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Deformation data `q = exp(i pi / r)` together with the comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QContext {
    r: f64,
    q: Complex64,
    tol: f64,
}

impl QContext {
    pub fn new(r: f64) -> Result<Self> {
        Self::with_tol(r, DEFAULT_TOL)
    }

    pub fn with_tol(r: f64, tol: f64) -> Result<Self> {
        if !r.is_finite() || r <= 1.0 {
            return Err(Error::InvalidParameter {
                r,
                reason: "r must be finite and greater than 1",
            });
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter {
                r,
                reason: "tolerance must be positive",
            });
        }
        Ok(Self {
            r,
            q: Complex64::from_polar(1.0, PI / r),
            tol,
        })
    }

    /// Context for an `n_sites` chain, rejecting `r <= N`.
    pub fn generic(r: f64, n_sites: usize) -> Result<Self> {
        let ctx = Self::new(r)?;
        ctx.ensure_generic(n_sites)?;
        Ok(ctx)
    }

    pub fn ensure_generic(&self, n_sites: usize) -> Result<()> {
        if self.r > n_sites as f64 {
            Ok(())
        } else {
            Err(Error::Regime {
                r: self.r,
                n_sites,
            })
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn q_inv(&self) -> Complex64 {
        self.q.conj()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `q^x` on the principal branch, for real (typically half-integer) `x`.
    pub fn q_pow(&self, x: f64) -> Complex64 {
        Complex64::from_polar(1.0, PI * x / self.r)
    }

    /// `q + q^{-1} = 2 cos(pi / r)`; each closed loop carries `-(q + q^{-1})`.
    pub fn loop_weight(&self) -> f64 {
        2.0 * (PI / self.r).cos()
    }

    /// `[x]_q = (q^x - q^{-x}) / (q - q^{-1}) = sin(pi x / r) / sin(pi / r)`.
    pub fn q_number(&self, x: f64) -> f64 {
        (PI * x / self.r).sin() / (PI / self.r).sin()
    }

    /// `[k]_q! = [1]_q [2]_q ... [k]_q`, with `[0]_q! = 1`.
    pub fn q_factorial(&self, k: usize) -> f64 {
        (1..=k).map(|i| self.q_number(i as f64)).product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_number_matches_complex_definition() {
        let ctx = QContext::new(5.5).unwrap();
        let q = ctx.q();
        for &x in &[0.5, 1.0, 1.5, 2.0, 3.0, 4.5] {
            let direct = (ctx.q_pow(x) - ctx.q_pow(-x)) / (q - q.inv());
            assert!(direct.im.abs() < 1e-14);
            assert!((direct.re - ctx.q_number(x)).abs() < 1e-13);
        }
        assert!((ctx.q_number(2.0) - ctx.loop_weight()).abs() < 1e-14);
    }

    #[test]
    fn q_factorial_convention() {
        let ctx = QContext::new(7.0).unwrap();
        assert_eq!(ctx.q_factorial(0), 1.0);
        assert!((ctx.q_factorial(1) - 1.0).abs() < 1e-15);
        let f3 = ctx.q_number(2.0) * ctx.q_number(3.0);
        assert!((ctx.q_factorial(3) - f3).abs() < 1e-13);
    }

    #[test]
    fn regime_check() {
        assert!(QContext::generic(3.0, 4).is_err());
        assert!(QContext::generic(4.5, 4).is_ok());
        assert!(QContext::new(0.5).is_err());
        assert!(QContext::with_tol(5.0, 0.0).is_err());
    }
}
