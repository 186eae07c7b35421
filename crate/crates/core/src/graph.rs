//! Dense bit-matrix graphs and the graph algebra used by the channel
//! constructions: disjoint union, strong product, powers, complement and
//! induced subgraphs.
//!
//! Vertex numbering is fixed so that independent tools agree on it:
//! a disjoint union places part `j` at offset `n_0 + … + n_{j-1}`, and a
//! strong product numbers the pair `(a, b)` as `a * n_h + b`. Powers are
//! iterated products, so a k-tuple is numbered in row-major order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::KSubset;

/// Upper limit on `n * n` adjacency bits for any constructed graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCap(pub u64);

impl SizeCap {
    pub const DEFAULT_BITS: u64 = 1 << 31;

    pub fn check(self, vertices: u64) -> Result<()> {
        let bits = vertices as u128 * vertices as u128;
        if bits > self.0 as u128 {
            return Err(Error::SizeCapExceeded { vertices, bits, cap: self.0 });
        }
        Ok(())
    }
}

impl Default for SizeCap {
    fn default() -> Self {
        SizeCap(Self::DEFAULT_BITS)
    }
}

/// Per-vertex annotation: owning channel and the subset the vertex stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexLabel {
    pub channel: u32,
    pub subset: KSubset,
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A set of vertices of an `n`-vertex graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet { n, bits: vec![0; words_for(n)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = VertexSet::new(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = VertexSet::new(n);
        for v in indices {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v as u64, limit: n as u64 });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} outside universe {}", self.n);
        self.bits[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.bits[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.bits[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_bits(&self.bits)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.bits
    }
}

pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + b)
        })
    })
}

/// Finite simple graph stored as `n` bit-rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    labels: Option<Vec<VertexLabel>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .field("labeled", &self.labels.is_some())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn edgeless(n: usize) -> Self {
        let words = words_for(n);
        Graph { n, words, bits: vec![0; n * words], labels: None }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::edgeless(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::edgeless(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n);
            }
        } else if n == 2 {
            g.add_edge(0, 1);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::edgeless(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::edgeless(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v) as u64, limit: n as u64 });
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph whose row `u` is filled by `fill(u, row)`, in
    /// parallel. `fill` must describe a symmetric relation with no loops.
    pub fn from_row_fn<F>(n: usize, cap: SizeCap, fill: F) -> Result<Self>
    where
        F: Fn(usize, &mut [u64]) + Sync,
    {
        cap.check(n as u64)?;
        let mut g = Graph::edgeless(n);
        if g.words > 0 {
            g.bits.par_chunks_mut(g.words).enumerate().for_each(|(u, row)| fill(u, row));
        }
        debug_assert!(g.validate().is_ok());
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u}, {v})");
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "bad pair ({u}, {v})");
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
        self.bits[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(u))
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn labels(&self) -> Option<&[VertexLabel]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<VertexLabel>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::invalid(format!("{} labels for {} vertices", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    /// Checks irreflexivity, symmetry and that padding bits are clear.
    pub fn validate(&self) -> Result<()> {
        let tail = self.n % 64;
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return Err(Error::Consistency(format!("loop at vertex {u}")));
            }
            if tail != 0 && self.row(u)[self.words - 1] >> tail != 0 {
                return Err(Error::Consistency(format!("padding bits set in row {u}")));
            }
            if let Some(v) = self.neighbors(u).find(|&v| !self.has_edge(v, u)) {
                return Err(Error::Consistency(format!("asymmetric pair ({u}, {v})")));
            }
        }
        if let Some(l) = &self.labels {
            if l.len() != self.n {
                return Err(Error::Consistency("label count differs from n".into()));
            }
        }
        Ok(())
    }
}

/// Disjoint union; part `j` occupies the block starting at the sum of the
/// earlier part sizes. Labels survive only when every part is labeled.
pub fn disjoint_union(parts: &[&Graph], cap: SizeCap) -> Result<Graph> {
    if parts.is_empty() {
        return Err(Error::invalid("disjoint union of zero graphs"));
    }
    let n: usize = parts.iter().map(|g| g.n).sum();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for g in parts {
        offsets.push(acc);
        acc += g.n;
    }
    let owner: Vec<(usize, usize)> =
        parts.iter().enumerate().flat_map(|(j, g)| (0..g.n).map(move |v| (j, v))).collect();
    let mut out = Graph::from_row_fn(n, cap, |u, row| {
        let (j, v) = owner[u];
        for w in parts[j].neighbors(v) {
            let t = offsets[j] + w;
            row[t / 64] |= 1 << (t % 64);
        }
    })?;
    if parts.iter().all(|g| g.labels.is_some()) {
        let labels = parts.iter().flat_map(|g| g.labels.as_ref().unwrap().iter().cloned()).collect();
        out = out.with_labels(labels)?;
    }
    Ok(out)
}

/// Strong product `g ⊠ h`; pair `(a, b)` is vertex `a * h.n() + b`.
pub fn strong_product(g: &Graph, h: &Graph, cap: SizeCap) -> Result<Graph> {
    let n = (g.n as u64).checked_mul(h.n as u64).ok_or(Error::Overflow("strong_product"))?;
    cap.check(n)?;
    let nh = h.n;
    let closed = |graph: &Graph, v: usize| -> Vec<usize> {
        let mut c: Vec<usize> = graph.neighbors(v).collect();
        c.push(v);
        c
    };
    let g_closed: Vec<Vec<usize>> = (0..g.n).map(|a| closed(g, a)).collect();
    let h_closed: Vec<Vec<usize>> = (0..h.n).map(|b| closed(h, b)).collect();
    Graph::from_row_fn(n as usize, cap, |u, row| {
        let (a, b) = (u / nh, u % nh);
        for &c in &g_closed[a] {
            for &d in &h_closed[b] {
                let t = c * nh + d;
                row[t / 64] |= 1 << (t % 64);
            }
        }
        row[u / 64] &= !(1 << (u % 64));
    })
}

/// k-th strong power, built as `((g ⊠ g) ⊠ g) …` so tuples are numbered
/// row-major.
pub fn power(g: &Graph, k: u32, cap: SizeCap) -> Result<Graph> {
    if k == 0 {
        return Err(Error::invalid("power exponent must be positive"));
    }
    let total = (g.n as u64).checked_pow(k).ok_or(Error::Overflow("power"))?;
    cap.check(total)?;
    let mut acc = g.clone().without_labels();
    for _ in 1..k {
        acc = strong_product(&acc, g, cap)?;
    }
    Ok(acc)
}

/// Row-major index of a tuple in the k-th power of an `n`-vertex graph.
pub fn power_index(n: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &v| acc * n + v)
}

/// Subgraph on `s`, vertices renumbered in increasing order.
pub fn induced(g: &Graph, s: &VertexSet) -> Result<Graph> {
    if s.is_empty() {
        return Err(Error::invalid("induced subgraph on the empty set"));
    }
    if s.universe() != g.n {
        return Err(Error::invalid("vertex set universe differs from graph size"));
    }
    let keep = s.to_vec();
    let mut out = Graph::from_row_fn(keep.len(), SizeCap(u64::MAX), |i, row| {
        for (j, &v) in keep.iter().enumerate() {
            if g.has_edge(keep[i], v) {
                row[j / 64] |= 1 << (j % 64);
            }
        }
    })?;
    if let Some(labels) = &g.labels {
        out = out.with_labels(keep.iter().map(|&v| labels[v].clone()).collect())?;
    }
    Ok(out)
}

pub fn complement(g: &Graph) -> Graph {
    let n = g.n;
    let mut out = Graph::from_row_fn(n, SizeCap(u64::MAX), |u, row| {
        for (w, &x) in row.iter_mut().zip(g.row(u)) {
            *w = !x;
        }
        if !n.is_multiple_of(64) {
            let last = row.len() - 1;
            row[last] &= (1u64 << (n % 64)) - 1;
        }
        row[u / 64] &= !(1 << (u % 64));
    })
    .expect("uncapped");
    out.labels = g.labels.clone();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cap() -> SizeCap {
        SizeCap::default()
    }

    #[test]
    fn union_examples() {
        let k2 = Graph::complete(2);
        let u = disjoint_union(&[&k2, &k2], cap()).unwrap();
        assert_eq!((u.n(), u.edge_count()), (4, 2));
        assert!(u.has_edge(0, 1) && u.has_edge(2, 3));
        assert!(!(0..2).any(|a| (2..4).any(|b| u.has_edge(a, b))));

        let c5 = Graph::cycle(5);
        assert_eq!(disjoint_union(&[&c5], cap()).unwrap(), c5);
        let u = disjoint_union(&[&c5, &Graph::edgeless(1)], cap()).unwrap();
        assert_eq!((u.n(), u.edge_count()), (6, 5));
        assert!(disjoint_union(&[], cap()).is_err());
    }

    #[test]
    fn union_respects_cap() {
        let g = Graph::edgeless(10);
        assert!(matches!(disjoint_union(&[&g, &g], SizeCap(399)), Err(Error::SizeCapExceeded { vertices: 20, .. })));
    }

    #[test]
    fn product_examples() {
        let c5 = Graph::cycle(5);
        assert_eq!(strong_product(&c5, &c5, cap()).unwrap().n(), 25);
        let k2 = Graph::complete(2);
        assert_eq!(strong_product(&k2, &k2, cap()).unwrap(), Graph::complete(4));
        let k1 = Graph::edgeless(1);
        assert_eq!(strong_product(&c5, &k1, cap()).unwrap(), c5);
        assert!(strong_product(&c5, &c5, SizeCap(624)).is_err());
    }

    #[test]
    fn power_examples() {
        let c5 = Graph::cycle(5);
        assert_eq!(power(&c5, 1, cap()).unwrap(), c5);
        let sq = power(&c5, 2, cap()).unwrap();
        assert_eq!(sq.n(), 25);
        assert!((0..25).all(|v| sq.degree(v) == 8));
        let k1 = Graph::edgeless(1);
        assert_eq!(power(&k1, 4, cap()).unwrap(), k1);
        assert!(power(&c5, 0, cap()).is_err());
        assert!(power(&c5, 40, cap()).is_err());
    }

    #[test]
    fn induced_examples() {
        let c5 = Graph::cycle(5);
        let s = VertexSet::from_indices(5, [1, 2, 3]).unwrap();
        assert_eq!(induced(&c5, &s).unwrap(), Graph::path(3));
        assert_eq!(induced(&c5, &VertexSet::full(5)).unwrap(), c5);
        let k5 = Graph::complete(5);
        let s = VertexSet::from_indices(5, [0, 4]).unwrap();
        assert_eq!(induced(&k5, &s).unwrap(), Graph::complete(2));
        assert!(induced(&c5, &VertexSet::new(5)).is_err());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&Graph::complete(6)), Graph::edgeless(6));
        let g = Graph::from_edges(70, &[(0, 69), (3, 4), (64, 65)]).unwrap();
        assert_eq!(complement(&complement(&g)), g);
        complement(&g).validate().unwrap();
        // C5 is isomorphic to its complement via v -> 2v mod 5
        let c5 = Graph::cycle(5);
        let cc = complement(&c5);
        for u in 0..5 {
            for v in 0..5 {
                if u != v {
                    assert_eq!(c5.has_edge(u, v), cc.has_edge(2 * u % 5, 2 * v % 5));
                }
            }
        }
    }

    #[test]
    fn validate_catches_asymmetry() {
        let mut g = Graph::edgeless(3);
        g.bits[1] = 0b100; // 0 -> 2 only
        assert!(g.validate().is_err());
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
    }

    #[test]
    fn vertex_set_basics() {
        let mut s = VertexSet::from_indices(130, [0, 64, 129]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        s.remove(64);
        assert!(!s.contains(64) && s.contains(129));
        assert!(VertexSet::from_indices(5, [5]).is_err());
    }
}
