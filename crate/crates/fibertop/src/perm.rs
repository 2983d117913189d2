//! Permutations of the sheet set `0..n` in image form.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermError {
    /// Some image is outside `0..degree`.
    OutOfRange { index: usize, value: usize, degree: usize },
    /// Two indices map to the same image; reported at the second occurrence.
    NotABijection { index: usize },
    /// A cycle mentions a sheet twice or one outside `0..degree`.
    BadCycle { cycle: usize },
}

impl fmt::Display for PermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermError::OutOfRange { index, value, degree } => {
                write!(f, "image {value} at index {index} is outside 0..{degree}")
            }
            PermError::NotABijection { index } => {
                write!(f, "not a bijection: repeated image at index {index}")
            }
            PermError::BadCycle { cycle } => write!(f, "cycle {cycle} is not a valid disjoint cycle"),
        }
    }
}

impl std::error::Error for PermError {}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (index, &value) in images.iter().enumerate() {
            if value >= n {
                return Err(PermError::OutOfRange { index, value, degree: n });
            }
            if seen[value] {
                return Err(PermError::NotABijection { index });
            }
            seen[value] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `0..n` from disjoint cycles; sheets not
    /// mentioned are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for (ci, cycle) in cycles.iter().enumerate() {
            for (k, &s) in cycle.iter().enumerate() {
                if s >= n || touched[s] {
                    return Err(PermError::BadCycle { cycle: ci });
                }
                touched[s] = true;
                images[s] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Left-to-right composition: `self` acts first, `other` second.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&v| other.images[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    /// Relabels sheets by `g`: sheet `i` becomes `g(i)`.
    pub fn relabeled(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    /// Cycles including fixed points. Each cycle starts at its smallest
    /// sheet; cycles are ordered by that sheet.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn cycle_containing(&self, i: usize) -> Vec<usize> {
        let mut cycle = vec![i];
        let mut cur = self.images[i];
        while cur != i {
            cycle.push(cur);
            cur = self.images[cur];
        }
        let min_pos = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, &s)| s)
            .map(|(p, _)| p)
            .unwrap();
        cycle.rotate_left(min_pos);
        cycle
    }

    /// Restriction to an invariant sheet subset, relabeled to `0..cells.len()`
    /// in the order of the (ascending) `cells` slice. `None` if the subset is
    /// not invariant.
    pub fn restricted(&self, cells: &[usize]) -> Option<Permutation> {
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
        let pos = |s: usize| cells.binary_search(&s).ok();
        let mut images = Vec::with_capacity(cells.len());
        for &s in cells {
            images.push(pos(self.images[s])?);
        }
        Some(Permutation { images })
    }

    /// Cycle-notation display skipping fixed points: `(0 1)(2 3)`, `id`.
    pub fn fmt_cycles(&self) -> String {
        let nontrivial: Vec<Vec<usize>> =
            self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return "id".to_string();
        }
        nontrivial
            .iter()
            .map(|c| {
                let body: Vec<String> = c.iter().map(|s| s.to_string()).collect();
                format!("({})", body.join(" "))
            })
            .collect::<Vec<_>>()
            .join("")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_cycles())
    }
}

/// Union-find over `0..n` with the smallest element as representative.
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }

    /// Classes with members ascending, ordered by smallest element.
    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let root = self.find(i);
            buckets[root].push(i);
        }
        buckets.into_iter().filter(|b| !b.is_empty()).collect()
    }

    pub(crate) fn class_count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&x| self.find(x) == x).count()
    }
}

/// Orbits of `0..n` under the group generated by `gens`, each orbit sorted,
/// orbits ordered by smallest element. An empty generator list yields
/// singleton orbits.
pub fn orbits(n: usize, gens: &[&Permutation]) -> Vec<Vec<usize>> {
    let mut ds = DisjointSet::new(n);
    for g in gens {
        debug_assert_eq!(g.degree(), n);
        for i in 0..n {
            ds.union(i, g.apply(i));
        }
    }
    ds.classes()
}

pub fn is_transitive(n: usize, gens: &[&Permutation]) -> bool {
    orbits(n, gens).len() <= 1
}
