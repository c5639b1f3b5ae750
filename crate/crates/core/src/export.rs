//! Serialisable records shared by the command line and the browser demo.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diagram::{PlanarDiagram, TLWord};
use crate::error::{Error, Result};
use crate::functional::StrandCounts;
use crate::gns::SectorBasis;
use crate::operator::{SparseOperator, Triplet};
use crate::paths::BratteliPath;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramRecord {
    pub n_sites: usize,
    pub pairs: Vec<[usize; 2]>,
    pub loops: usize,
}

impl From<&PlanarDiagram> for DiagramRecord {
    fn from(d: &PlanarDiagram) -> Self {
        let pairs = d
            .pairing()
            .iter()
            .enumerate()
            .filter(|&(a, &b)| a < b)
            .map(|(a, &b)| [a, b])
            .collect();
        Self {
            n_sites: d.n_sites(),
            pairs,
            loops: d.loops(),
        }
    }
}

impl DiagramRecord {
    pub fn to_diagram(&self) -> Result<PlanarDiagram> {
        let mut pairing = vec![usize::MAX; 2 * self.n_sites];
        for &[a, b] in &self.pairs {
            if a >= pairing.len() || b >= pairing.len() {
                return Err(Error::Structural(format!("point label out of range in pair ({a}, {b})")));
            }
            pairing[a] = b;
            pairing[b] = a;
        }
        PlanarDiagram::from_pairing(self.n_sites, pairing, self.loops)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub name: String,
    pub n_sites: usize,
    pub r: f64,
    pub dim: usize,
    pub entries: Vec<Triplet>,
}

impl OperatorRecord {
    pub fn new(name: impl Into<String>, r: f64, op: &SparseOperator) -> Self {
        Self {
            name: name.into(),
            n_sites: op.n_sites(),
            r,
            dim: op.dim(),
            entries: op.triplets(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsTables {
    pub x0: Vec<Vec<usize>>,
    pub x: Vec<Vec<usize>>,
    pub y: Vec<Vec<usize>>,
}

impl From<&[Vec<StrandCounts>]> for CountsTables {
    fn from(table: &[Vec<StrandCounts>]) -> Self {
        let pick = |f: fn(&StrandCounts) -> usize| table.iter().map(|row| row.iter().map(f).collect()).collect();
        Self {
            x0: pick(|c| c.x0),
            x: pick(|c| c.x),
            y: pick(|c| c.y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorBasisRecord {
    pub n_sites: usize,
    pub n: usize,
    pub r: f64,
    pub words: Vec<Vec<usize>>,
    /// Row-major real parts.
    pub gram_re: Vec<f64>,
    /// Row-major imaginary parts; the Gram matrix is real so these are zero.
    pub gram_im: Vec<f64>,
    pub counts: CountsTables,
}

impl SectorBasisRecord {
    pub fn new(basis: &SectorBasis, r: f64, counts: &[Vec<StrandCounts>]) -> Self {
        let k = basis.words.len();
        let gram_re = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|p| basis.gram[p]).collect();
        Self {
            n_sites: basis.n_sites,
            n: basis.n,
            r,
            words: basis.words.iter().map(|w| w.letters().to_vec()).collect(),
            gram_re,
            gram_im: vec![0.0; k * k],
            counts: counts.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaRecord {
    pub n_sites: usize,
    pub n: usize,
    pub r: f64,
    pub word: Vec<usize>,
    pub value: f64,
    pub counts: StrandCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    /// `2 j_k` for `k = 0..N`.
    pub twice_spins: Vec<usize>,
}

impl From<&BratteliPath> for PathRecord {
    fn from(p: &BratteliPath) -> Self {
        Self {
            twice_spins: p.twice_spins().to_vec(),
        }
    }
}

/// Upper-triangular table of `x/y` cells, `-` where a strand is unoriented.
///
/// ```text
/// ,a1,a2
/// a1,0/0,1/0
/// a2,,1/1
/// ```
pub fn counts_csv(table: &[Vec<StrandCounts>]) -> String {
    let k = table.len();
    let mut out = String::new();
    for j in 0..k {
        write!(out, ",a{}", j + 1).unwrap();
    }
    out.push('\n');
    for (i, row) in table.iter().enumerate() {
        write!(out, "a{}", i + 1).unwrap();
        for (j, c) in row.iter().enumerate() {
            out.push(',');
            if j < i {
                continue;
            }
            if c.x0 > 0 {
                out.push('-');
            } else {
                write!(out, "{}/{}", c.x, c.y).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// `name,row,col,re,im` lines for each operator.
pub fn operators_csv(ops: &[OperatorRecord]) -> String {
    let mut out = String::from("name,row,col,re,im\n");
    for op in ops {
        for t in &op.entries {
            writeln!(out, "{},{},{},{:e},{:e}", op.name, t.row, t.col, t.re, t.im).unwrap();
        }
    }
    out
}

/// Parses `"2;1 2;3 2"`-style lists, one word per `;`-separated field.
pub fn parse_word_list(n_sites: usize, text: &str) -> Result<Vec<TLWord>> {
    let mut offset = 0;
    let mut words = Vec::new();
    for field in text.split(';') {
        let w = TLWord::parse(n_sites, field).map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse {
                position: position + offset,
                message,
            },
            other => other,
        })?;
        words.push(w);
        offset += field.len() + 1;
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagram_record_roundtrip() {
        let w = TLWord::new(5, vec![3, 2, 1, 4, 3, 2]).unwrap();
        let d = w.diagram();
        let rec = DiagramRecord::from(&d);
        assert_eq!(rec.pairs, vec![[0, 3], [1, 2], [4, 5], [6, 9], [7, 8]]);
        assert_eq!(rec.to_diagram().unwrap(), d);
        let text = serde_json::to_string(&rec).unwrap();
        let back: DiagramRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn operator_record_json() {
        let ctx = crate::QContext::new(5.0).unwrap();
        let e1 = crate::spin::build_generators(2, &ctx).remove(0);
        let rec = OperatorRecord::new("e1", 5.0, &e1);
        assert_eq!(rec.dim, 4);
        assert_eq!(rec.entries.len(), 4);
        let back: OperatorRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn csv_layout() {
        let c = |x0, x, y| StrandCounts { x0, x, y };
        let table = vec![vec![c(0, 0, 0), c(1, 0, 0)], vec![c(1, 0, 0), c(0, 1, 1)]];
        assert_eq!(counts_csv(&table), ",a1,a2\na1,0/0,-\na2,,1/1\n");
    }

    #[test]
    fn word_lists() {
        let ws = parse_word_list(5, ";2;1 2").unwrap();
        assert_eq!(ws.len(), 3);
        assert!(ws[0].is_empty());
        assert_eq!(ws[2].letters(), &[1, 2]);
        match parse_word_list(5, "2;1 x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
    }
}
