//! Strand tracing by union-find, independent of diagram composition.

use std::collections::HashSet;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Stacks one layer per letter, rightmost letter at the bottom, joins points
/// with a union-find and reads off the boundary pairing and the closed loops.
/// Layer 0 is a plain identity so that the bottom and top levels differ.
pub fn trace(n_sites: usize, letters: &[usize]) -> (Vec<usize>, usize) {
    let k = letters.len() + 1;
    let id = |level: usize, site: usize| level * n_sites + site;
    let mut uf = UnionFind::new((k + 1) * n_sites);
    for s in 0..n_sites {
        uf.union(id(0, s), id(1, s));
    }
    for (t, &g) in letters.iter().rev().enumerate() {
        let (t, g) = (t + 1, g - 1);
        for s in 0..n_sites {
            if s != g && s != g + 1 {
                uf.union(id(t, s), id(t + 1, s));
            }
        }
        uf.union(id(t, g), id(t, g + 1));
        uf.union(id(t + 1, g), id(t + 1, g + 1));
    }
    let label = |level: usize, site: usize| if level == 0 { site } else { n_sites + site };
    let boundary: Vec<(usize, usize)> = (0..n_sites).map(|s| (0, s)).chain((0..n_sites).map(|s| (k, s))).collect();
    let mut pairing = vec![usize::MAX; 2 * n_sites];
    for &(la, sa) in &boundary {
        for &(lb, sb) in &boundary {
            if (la, sa) != (lb, sb) && uf.find(id(la, sa)) == uf.find(id(lb, sb)) {
                pairing[label(la, sa)] = label(lb, sb);
            }
        }
    }
    let boundary_roots: HashSet<usize> = boundary.iter().map(|&(l, s)| uf.find(id(l, s))).collect();
    let inner_roots: HashSet<usize> = (1..k)
        .flat_map(|l| (0..n_sites).map(move |s| (l, s)))
        .map(|(l, s)| uf.find(id(l, s)))
        .filter(|r| !boundary_roots.contains(r))
        .collect();
    (pairing, inner_roots.len())
}

