use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("generator index {index} out of range 1..={max} for {n_sites} sites")]
    GeneratorIndex {
        index: usize,
        max: usize,
        n_sites: usize,
    },

    #[error("site count mismatch: {left} vs {right}")]
    SiteMismatch { left: usize, right: usize },

    #[error("down-spin count {n} out of range 0..={n_sites}")]
    SectorIndex { n: usize, n_sites: usize },

    #[error("invalid deformation parameter r = {r}: {reason}")]
    InvalidParameter { r: f64, reason: &'static str },

    #[error("r = {r} is outside the generic regime r > N = {n_sites}")]
    Regime { r: f64, n_sites: usize },

    #[error("{what}: imaginary part {imag:e} exceeds tolerance {tol:e}")]
    NotReal { what: String, imag: f64, tol: f64 },

    #[error("negative radicand {value:e} in Clebsch-Gordan coefficient (j = {j}, m = {m})")]
    Radicand { value: f64, j: f64, m: f64 },

    #[error("invalid weight m = {m} for spin j = {j}")]
    Weight { j: f64, m: f64 },

    #[error("structural failure: {0}")]
    Structural(String),

    #[error("degenerate Gram matrix: rank {rank} < {expected} after words up to length {max_len} (r = {r} is non-generic)")]
    Degenerate {
        rank: usize,
        expected: usize,
        max_len: usize,
        r: f64,
    },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
