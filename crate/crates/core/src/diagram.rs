//! Temperley-Lieb words and planar (Kauffman) diagrams.
//!
//! A word `e_{i1} e_{i2} ... e_{ik}` is read as an operator product: the
//! rightmost letter acts first and sits at the bottom of the stacked diagram.
//! Boundary points are labelled `0..N` for the bottom row (`b1..bN`) and
//! `N..2N` for the top row (`t1..tN`).

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// An element of the word monoid of `TL_N`; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TLWord {
    n_sites: usize,
    letters: Vec<usize>,
}

impl TLWord {
    pub fn new(n_sites: usize, letters: Vec<usize>) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::GeneratorIndex {
                index: 0,
                max: 0,
                n_sites,
            });
        }
        for &i in &letters {
            check_generator(i, n_sites)?;
        }
        Ok(Self { n_sites, letters })
    }

    pub fn unit(n_sites: usize) -> Self {
        Self {
            n_sites,
            letters: Vec::new(),
        }
    }

    pub fn generator(i: usize, n_sites: usize) -> Result<Self> {
        Self::new(n_sites, vec![i])
    }

    /// Parses whitespace-separated generator indices, e.g. `"2 2 3 1 2"`.
    /// The empty string is the unit. Errors carry the byte offset of the bad token.
    pub fn parse(n_sites: usize, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for token in text.split_whitespace() {
            let position = text[offset..].find(token).map_or(offset, |p| p + offset);
            offset = position + token.len();
            let token = token.trim_start_matches('e');
            let i: usize = token.parse().map_err(|_| Error::Parse {
                position,
                message: format!("expected a generator index, found {token:?}"),
            })?;
            if i == 0 || i >= n_sites {
                return Err(Error::Parse {
                    position,
                    message: format!("generator index {i} out of range 1..={}", n_sites.saturating_sub(1)),
                });
            }
            letters.push(i);
        }
        Self::new(n_sites, letters)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The `*` involution: reverses the letter sequence (generators are self-adjoint).
    pub fn star(&self) -> Self {
        Self {
            n_sites: self.n_sites,
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    /// Concatenation `self * other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.n_sites != other.n_sites {
            return Err(Error::SiteMismatch {
                left: self.n_sites,
                right: other.n_sites,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Self {
            n_sites: self.n_sites,
            letters,
        })
    }

    /// Left multiplication `e_i * self`.
    pub fn left_mul(&self, i: usize) -> Result<Self> {
        check_generator(i, self.n_sites)?;
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(i);
        letters.extend_from_slice(&self.letters);
        Ok(Self {
            n_sites: self.n_sites,
            letters,
        })
    }

    pub fn diagram(&self) -> PlanarDiagram {
        word_to_diagram(self)
    }
}

impl fmt::Display for TLWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(|i| format!("e{i}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn check_generator(i: usize, n_sites: usize) -> Result<()> {
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

/// Side of a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Bottom,
    Top,
}

/// A labelled boundary point, 1-based position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub side: Boundary,
    pub position: usize,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Boundary::Bottom => write!(f, "b{}", self.position),
            Boundary::Top => write!(f, "t{}", self.position),
        }
    }
}

/// Kind of strand in a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strand {
    /// Bottom point `i` joined to top point `j` (0-based site indices).
    Through { bottom: usize, top: usize },
    /// Bottom arc between sites `left < right`.
    Cup { left: usize, right: usize },
    /// Top arc between sites `left < right`.
    Cap { left: usize, right: usize },
}

/// Non-crossing perfect matching of `2N` boundary points plus the number of
/// closed loops removed while composing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    n_sites: usize,
    pairing: Vec<usize>,
    loops: usize,
}

impl PlanarDiagram {
    pub fn identity(n_sites: usize) -> Self {
        let n = n_sites;
        let pairing = (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect();
        Self {
            n_sites,
            pairing,
            loops: 0,
        }
    }

    /// Builds a diagram from an involution over the `2N` point labels, validating
    /// the perfect-matching and planarity invariants.
    pub fn from_pairing(n_sites: usize, pairing: Vec<usize>, loops: usize) -> Result<Self> {
        let d = Self {
            n_sites,
            pairing,
            loops,
        };
        if d.pairing.len() != 2 * n_sites {
            return Err(Error::Structural(format!(
                "pairing has {} entries, expected {}",
                d.pairing.len(),
                2 * n_sites
            )));
        }
        for (p, &q) in d.pairing.iter().enumerate() {
            if q >= 2 * n_sites || q == p || d.pairing[q] != p {
                return Err(Error::Structural(format!("pairing is not a perfect matching at point {p}")));
            }
        }
        if !d.is_planar() {
            return Err(Error::Structural("pairing has crossing strands".into()));
        }
        Ok(d)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    /// Involution over point labels (`0..N` bottom, `N..2N` top).
    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn partner(&self, point: usize) -> usize {
        self.pairing[point]
    }

    pub fn point(&self, label: usize) -> Point {
        if label < self.n_sites {
            Point {
                side: Boundary::Bottom,
                position: label + 1,
            }
        } else {
            Point {
                side: Boundary::Top,
                position: label - self.n_sites + 1,
            }
        }
    }

    /// Same diagram with the loop counter reset.
    pub fn without_loops(&self) -> Self {
        Self {
            loops: 0,
            ..self.clone()
        }
    }

    pub fn same_pairing(&self, other: &Self) -> bool {
        self.n_sites == other.n_sites && self.pairing == other.pairing
    }

    /// Strands in order of their smallest point label.
    pub fn strands(&self) -> Vec<Strand> {
        let n = self.n_sites;
        let mut out = Vec::with_capacity(n);
        for (a, &b) in self.pairing.iter().enumerate() {
            if a > b {
                continue;
            }
            let strand = match (a < n, b < n) {
                (true, true) => Strand::Cup { left: a, right: b },
                (true, false) => Strand::Through {
                    bottom: a,
                    top: b - n,
                },
                (false, false) => Strand::Cap {
                    left: a - n,
                    right: b - n,
                },
                (false, true) => unreachable!("a < b"),
            };
            out.push(strand);
        }
        out
    }

    pub fn through_count(&self) -> usize {
        (0..self.n_sites).filter(|&p| self.pairing[p] >= self.n_sites).count()
    }

    /// Non-crossing test on the circular order `b1..bN, tN..t1`.
    pub fn is_planar(&self) -> bool {
        let n = self.n_sites;
        let circular = |label: usize| if label < n { label } else { 3 * n - 1 - label };
        let mut by_position = vec![0usize; 2 * n];
        for label in 0..2 * n {
            by_position[circular(label)] = label;
        }
        let mut stack = Vec::with_capacity(n);
        for (pos, &label) in by_position.iter().enumerate() {
            let other = circular(self.pairing[label]);
            if other > pos {
                stack.push(pos);
            } else if stack.pop() != Some(other) {
                return false;
            }
        }
        stack.is_empty()
    }

    /// Top-bottom mirror image; the diagram of `star(w)`.
    pub fn flip(&self) -> Self {
        let n = self.n_sites;
        let swap = |p: usize| if p < n { p + n } else { p - n };
        let mut pairing = vec![0; 2 * n];
        for (p, &q) in self.pairing.iter().enumerate() {
            pairing[swap(p)] = swap(q);
        }
        Self {
            n_sites: n,
            pairing,
            loops: self.loops,
        }
    }
}

/// Diagram of the generator `e_i`: cup `b_i b_{i+1}`, cap `t_i t_{i+1}`, straight lines elsewhere.
pub fn generator_diagram(i: usize, n_sites: usize) -> Result<PlanarDiagram> {
    check_generator(i, n_sites)?;
    let mut d = PlanarDiagram::identity(n_sites);
    let (a, b) = (i - 1, i);
    let n = n_sites;
    d.pairing[a] = b;
    d.pairing[b] = a;
    d.pairing[n + a] = n + b;
    d.pairing[n + b] = n + a;
    Ok(d)
}

#[derive(Clone, Copy)]
enum Layer {
    Upper,
    Lower,
}

/// Stacks `upper` on top of `lower`, joining `lower`'s top row to `upper`'s
/// bottom row. Closed loops formed in the middle are added to the loop count.
pub fn compose(upper: &PlanarDiagram, lower: &PlanarDiagram) -> Result<PlanarDiagram> {
    if upper.n_sites != lower.n_sites {
        return Err(Error::SiteMismatch {
            left: upper.n_sites,
            right: lower.n_sites,
        });
    }
    let n = upper.n_sites;
    let mut visited = vec![false; n];
    let mut pairing = vec![usize::MAX; 2 * n];

    // Walks from an external point until the strand exits on the other end.
    let mut trace = |mut layer: Layer, mut p: usize| -> usize {
        loop {
            match layer {
                Layer::Lower => {
                    let q = lower.pairing[p];
                    if q < n {
                        return q;
                    }
                    visited[q - n] = true;
                    layer = Layer::Upper;
                    p = q - n;
                }
                Layer::Upper => {
                    let q = upper.pairing[p];
                    if q >= n {
                        return q;
                    }
                    visited[q] = true;
                    layer = Layer::Lower;
                    p = q + n;
                }
            }
        }
    };

    for start in 0..n {
        if pairing[start] == usize::MAX {
            let end = trace(Layer::Lower, start);
            pairing[start] = end;
            pairing[end] = start;
        }
    }
    for start in n..2 * n {
        if pairing[start] == usize::MAX {
            let end = trace(Layer::Upper, start);
            pairing[start] = end;
            pairing[end] = start;
        }
    }

    let mut interface_loops = 0;
    for m in 0..n {
        if visited[m] {
            continue;
        }
        interface_loops += 1;
        let mut cur = m;
        loop {
            visited[cur] = true;
            let across = upper.pairing[cur];
            visited[across] = true;
            cur = lower.pairing[across + n] - n;
            if visited[cur] {
                break;
            }
        }
    }

    Ok(PlanarDiagram {
        n_sites: n,
        pairing,
        loops: upper.loops + lower.loops + interface_loops,
    })
}

/// Diagram of a word: left fold of [`compose`] starting from the identity.
pub fn word_to_diagram(w: &TLWord) -> PlanarDiagram {
    let n = w.n_sites;
    w.letters.iter().fold(PlanarDiagram::identity(n), |acc, &i| {
        let g = generator_diagram(i, n).expect("letters validated on construction");
        compose(&acc, &g).expect("same site count")
    })
}

/// Same product folded from the right; used to check associativity independence.
pub fn word_to_diagram_right(w: &TLWord) -> PlanarDiagram {
    let n = w.n_sites;
    w.letters.iter().rev().fold(PlanarDiagram::identity(n), |acc, &i| {
        let g = generator_diagram(i, n).expect("letters validated on construction");
        compose(&g, &acc).expect("same site count")
    })
}

pub fn star(w: &TLWord) -> TLWord {
    w.star()
}

/// Nesting height of each arc among the given `(left, right)` arcs (innermost = 1).
fn arc_heights(arcs: &[(usize, usize)]) -> Vec<usize> {
    let mut heights = vec![1; arcs.len()];
    let mut order: Vec<usize> = (0..arcs.len()).collect();
    order.sort_by_key(|&k| arcs[k].1 - arcs[k].0);
    for (idx, &k) in order.iter().enumerate() {
        let (l, r) = arcs[k];
        let inner = order[..idx]
            .iter()
            .filter(|&&m| arcs[m].0 > l && arcs[m].1 < r)
            .map(|&m| heights[m])
            .max()
            .unwrap_or(0);
        heights[k] = inner + 1;
    }
    heights
}

fn arc_rows(n: usize, arcs: &[(usize, usize)], through: &[usize], closing: (char, char)) -> Vec<String> {
    let heights = arc_heights(arcs);
    let max_h = heights.iter().copied().max().unwrap_or(0);
    let width = 2 * n - 1;
    let mut rows = Vec::new();
    for level in 1..=max_h.max(1) {
        let mut row = vec![' '; width];
        for &p in through {
            row[2 * p] = '│';
        }
        for (k, &(l, r)) in arcs.iter().enumerate() {
            if heights[k] > level {
                row[2 * l] = '│';
                row[2 * r] = '│';
            } else if heights[k] == level {
                row[2 * l] = closing.0;
                row[2 * r] = closing.1;
                for c in row.iter_mut().take(2 * r).skip(2 * l + 1) {
                    *c = '─';
                }
            }
        }
        rows.push(row.into_iter().collect::<String>().trim_end().to_string());
    }
    rows
}

/// Text picture of a diagram: top labels, caps, cups, bottom labels, then
/// `loops=<count>`. Shifted propagating lines are listed after the picture.
pub fn render_diagram(d: &PlanarDiagram) -> String {
    let n = d.n_sites;
    let strands = d.strands();
    let mut caps = Vec::new();
    let mut cups = Vec::new();
    let mut through = Vec::new();
    for s in &strands {
        match *s {
            Strand::Cap { left, right } => caps.push((left, right)),
            Strand::Cup { left, right } => cups.push((left, right)),
            Strand::Through { bottom, top } => through.push((bottom, top)),
        }
    }
    let labels: String = (1..=n)
        .map(|k| (k % 10).to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let tops: Vec<usize> = through.iter().map(|&(_, t)| t).collect();
    let bottoms: Vec<usize> = through.iter().map(|&(b, _)| b).collect();

    let mut lines = vec![labels.clone()];
    if caps.is_empty() && cups.is_empty() {
        lines.extend(arc_rows(n, &[], &tops, ('└', '┘')));
    } else {
        if !caps.is_empty() {
            lines.extend(arc_rows(n, &caps, &tops, ('└', '┘')));
        }
        if !through.iter().all(|&(b, t)| b == t) || caps.is_empty() || cups.is_empty() {
            let mut row = vec![' '; 2 * n - 1];
            for &(b, t) in &through {
                row[2 * b] = if b == t { '│' } else { '┆' };
            }
            lines.push(row.into_iter().collect::<String>().trim_end().to_string());
        }
        if !cups.is_empty() {
            let mut rows = arc_rows(n, &cups, &bottoms, ('┌', '┐'));
            rows.reverse();
            lines.extend(rows);
        }
    }
    lines.push(labels);
    let shifted: Vec<String> = through
        .iter()
        .filter(|(b, t)| b != t)
        .map(|&(b, t)| format!("b{}-t{}", b + 1, t + 1))
        .collect();
    if !shifted.is_empty() {
        lines.push(format!("through: {}", shifted.join(" ")));
    }
    lines.push(format!("loops={}", d.loops));
    lines.join("\n")
}

/// Renders a word's diagram with a header stating the stacking convention.
pub fn render_word(w: &TLWord) -> String {
    format!(
        "{w}  (rightmost letter acts first, drawn at the bottom)\n{}",
        render_diagram(&word_to_diagram(w))
    )
}
