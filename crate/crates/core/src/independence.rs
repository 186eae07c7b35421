//! Independence numbers: verification, an exact branch-and-bound solver,
//! independence checks in strong powers that never build the power, and
//! capacity brackets.
//!
//! The solver searches for a maximum clique in the complement with greedy
//! colouring bounds over bit-sets (the BBMC scheme). Vertices are ordered
//! by descending complement degree, ties by index. Runs are deterministic
//! for a given node budget; a wall-clock limit is optional and marks the
//! result as time-limited.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{iter_bits, power, Graph, SizeCap, VertexSet};
use crate::math::kth_root;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub nodes: u64,
    #[serde(skip)]
    pub wall: Option<Duration>,
}

impl Budget {
    pub fn nodes(nodes: u64) -> Self {
        Budget { nodes, wall: None }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::nodes(DEFAULT_NODE_BUDGET)
    }
}

fn ser_set<S: Serializer>(set: &VertexSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.iter())
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaResult {
    pub size: usize,
    #[serde(serialize_with = "ser_set")]
    pub witness: VertexSet,
    /// The search finished, so `size` is the independence number.
    pub exact: bool,
    pub nodes: u64,
    /// A wall-clock limit was configured; such runs are not reproducible.
    pub time_limited: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn is_independent(g: &Graph, s: &VertexSet) -> bool {
    assert_eq!(s.universe(), g.n(), "vertex set universe differs from graph size");
    s.iter().all(|v| g.row(v).iter().zip(s.words()).all(|(a, b)| a & b == 0))
}

struct Search<'a> {
    words: usize,
    comp: &'a [u64],
    best: Vec<u32>,
    current: Vec<u32>,
    nodes: u64,
    budget: Budget,
    started: Instant,
    aborted: bool,
    scratch_u: Vec<u64>,
    scratch_q: Vec<u64>,
    levels: Vec<Level>,
}

/// Candidate set of one search node: `p` is only meaningful at the word
/// positions listed in `nz`, which hold every nonzero word.
#[derive(Default)]
struct Level {
    p: Vec<u64>,
    nz: Vec<u32>,
    verts: Vec<u32>,
    colors: Vec<u32>,
}

impl Search<'_> {
    #[inline]
    fn comp_row(&self, v: usize) -> &[u64] {
        &self.comp[v * self.words..(v + 1) * self.words]
    }

    fn out_of_budget(&mut self) -> bool {
        if self.nodes >= self.budget.nodes {
            return true;
        }
        if let Some(limit) = self.budget.wall {
            if self.nodes.is_multiple_of(1024) && self.started.elapsed() >= limit {
                return true;
            }
        }
        false
    }

    /// Greedy sequential colouring of the level's candidates; records
    /// vertices whose colour is at least `kmin`, in non-decreasing colour
    /// order.
    fn color(&mut self, level: &mut Level, kmin: u32) {
        level.verts.clear();
        level.colors.clear();
        let mut u = std::mem::take(&mut self.scratch_u);
        let mut q = std::mem::take(&mut self.scratch_q);
        let nz = &level.nz;
        let m = nz.len();
        for &w in nz {
            u[w as usize] = level.p[w as usize];
        }
        let mut k = 0u32;
        let mut first = 0;
        loop {
            while first < m && u[nz[first] as usize] == 0 {
                first += 1;
            }
            if first == m {
                break;
            }
            k += 1;
            for &w in &nz[first..] {
                q[w as usize] = u[w as usize];
            }
            let mut j = first;
            loop {
                while j < m && q[nz[j] as usize] == 0 {
                    j += 1;
                }
                if j == m {
                    break;
                }
                let wi = nz[j] as usize;
                let v = wi * 64 + q[wi].trailing_zeros() as usize;
                let mask = !(1u64 << (v % 64));
                u[wi] &= mask;
                q[wi] &= mask;
                let row = self.comp_row(v);
                for &w in &nz[j..] {
                    q[w as usize] &= !row[w as usize];
                }
                if k >= kmin {
                    level.verts.push(v as u32);
                    level.colors.push(k);
                }
            }
        }
        self.scratch_u = u;
        self.scratch_q = q;
    }

    fn expand(&mut self, depth: usize) {
        self.nodes += 1;
        if self.out_of_budget() {
            self.aborted = true;
            return;
        }
        if self.levels.len() <= depth + 1 {
            self.levels.push(Level { p: vec![0; self.words], ..Default::default() });
        }
        let mut level = std::mem::take(&mut self.levels[depth]);
        let kmin = (self.best.len() as i64 - self.current.len() as i64 + 1).max(1) as u32;
        self.color(&mut level, kmin);

        for idx in (0..level.verts.len()).rev() {
            if self.current.len() + level.colors[idx] as usize <= self.best.len() {
                break;
            }
            let v = level.verts[idx] as usize;
            self.current.push(v as u32);
            let mut child = std::mem::take(&mut self.levels[depth + 1]);
            child.nz.clear();
            let row = self.comp_row(v);
            for &w in &level.nz {
                let x = level.p[w as usize] & row[w as usize];
                child.p[w as usize] = x;
                if x != 0 {
                    child.nz.push(w);
                }
            }
            let leaf = child.nz.is_empty();
            self.levels[depth + 1] = child;
            if leaf {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(depth + 1);
            }
            self.current.pop();
            if self.aborted {
                break;
            }
            level.p[v / 64] &= !(1u64 << (v % 64));
        }
        self.levels[depth] = level;
    }
}

/// Maximum independent set by branch and bound within `budget`.
pub fn max_independent_set(g: &Graph, budget: Budget) -> AlphaResult {
    let started = Instant::now();
    let n = g.n();
    if n == 0 {
        return AlphaResult {
            size: 0,
            witness: VertexSet::new(0),
            exact: true,
            nodes: 0,
            time_limited: budget.wall.is_some(),
            elapsed: started.elapsed(),
        };
    }
    let mut order: Vec<usize> = (0..n).collect();
    let degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    // descending complement degree == ascending degree in g
    order.sort_by_key(|&v| (degree[v], v));
    let words = n.div_ceil(64);
    let mut comp = vec![0u64; n * words];
    comp.par_chunks_mut(words).enumerate().for_each(|(i, row)| {
        let v = order[i];
        for (j, &w) in order.iter().enumerate() {
            if j != i && !g.has_edge(v, w) {
                row[j / 64] |= 1 << (j % 64);
            }
        }
    });

    let mut search = Search {
        words,
        comp: &comp,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        budget,
        started,
        aborted: false,
        scratch_u: vec![0; words],
        scratch_q: vec![0; words],
        levels: Vec::new(),
    };

    // greedy incumbent in search order
    let mut allowed = vec![!0u64; words];
    if !n.is_multiple_of(64) {
        allowed[words - 1] = (1u64 << (n % 64)) - 1;
    }
    loop {
        let Some(v) = iter_bits(&allowed).next() else { break };
        search.best.push(v as u32);
        let row = search.comp_row(v);
        for (a, r) in allowed.iter_mut().zip(row) {
            *a &= r;
        }
    }

    let mut root = Level { p: vec![!0u64; words], nz: (0..words as u32).collect(), ..Default::default() };
    if !n.is_multiple_of(64) {
        root.p[words - 1] = (1u64 << (n % 64)) - 1;
    }
    search.levels.push(root);
    search.expand(0);

    let witness = VertexSet::from_indices(n, search.best.iter().map(|&i| order[i as usize])).expect("witness in range");
    debug_assert!(is_independent(g, &witness));
    AlphaResult {
        size: witness.len(),
        witness,
        exact: !search.aborted,
        nodes: search.nodes,
        time_limited: budget.wall.is_some(),
        elapsed: started.elapsed(),
    }
}

/// α of a disjoint union from exact part results: the sum of the parts.
pub fn alpha_of_union(parts: &[AlphaResult]) -> Result<usize> {
    if let Some(i) = parts.iter().position(|p| !p.exact) {
        return Err(Error::Inexact(format!("part {i} has no exact independence number")));
    }
    Ok(parts.iter().map(|p| p.size).sum())
}

fn adjacent_in_power(g: &Graph, a: &[usize], b: &[usize]) -> bool {
    a != b && a.iter().zip(b).all(|(&x, &y)| x == y || g.has_edge(x, y))
}

/// First pair `(i, j)`, `i < j`, of tuples adjacent in `g^k`, scanning
/// `i` in increasing order. Identical tuples name the same vertex and are
/// not a violation.
pub fn power_violation(g: &Graph, k: usize, tuples: &[Vec<usize>]) -> Result<Option<(usize, usize)>> {
    if k == 0 {
        return Err(Error::invalid("power exponent must be positive"));
    }
    for (i, t) in tuples.iter().enumerate() {
        if t.len() != k {
            return Err(Error::invalid(format!("tuple {i} has arity {}, expected {k}", t.len())));
        }
        if let Some(&v) = t.iter().find(|&&v| v >= g.n()) {
            return Err(Error::IndexOutOfRange { index: v as u64, limit: g.n() as u64 });
        }
    }
    Ok((0..tuples.len()).into_par_iter().find_map_first(|i| {
        (i + 1..tuples.len()).find(|&j| adjacent_in_power(g, &tuples[i], &tuples[j])).map(|j| (i, j))
    }))
}

/// Whether the tuples form an independent set of `g^k`, without building it.
pub fn is_independent_in_power(g: &Graph, k: usize, tuples: &[Vec<usize>]) -> Result<bool> {
    Ok(power_violation(g, k, tuples)?.is_none())
}

/// A certified upper bound on the capacity, with a short provenance string.
#[derive(Clone, Debug, Serialize)]
pub struct CertifiedUpper {
    pub value: f64,
    pub certificate: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerAlpha {
    pub k: u32,
    pub vertices: usize,
    pub size: usize,
    pub exact: bool,
    pub nodes: u64,
}

/// Certified interval containing the Shannon capacity.
#[derive(Clone, Debug, Serialize)]
pub struct CapacityBracket {
    pub lower: f64,
    /// `None` stands for +∞.
    pub upper: Option<f64>,
    /// `(k, α(G^k))` attaining the lower bound.
    pub lower_witness: (u32, usize),
    pub upper_certificate: Option<String>,
    pub powers: Vec<PowerAlpha>,
}

impl CapacityBracket {
    pub fn upper_value(&self) -> f64 {
        self.upper.unwrap_or(f64::INFINITY)
    }
}

/// Greedy clique cover of `g`. Every independent set of `G^k` meets each
/// product of cover cliques at most once, so the cover size bounds the capacity.
pub fn clique_cover_upper(g: &Graph) -> CertifiedUpper {
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n() {
        match cliques.iter_mut().find(|c| c.iter().all(|&u| g.has_edge(u, v))) {
            Some(c) => c.push(v),
            None => cliques.push(vec![v]),
        }
    }
    CertifiedUpper {
        value: cliques.len() as f64,
        certificate: format!("greedy clique cover with {} cliques", cliques.len()),
    }
}

pub fn capacity_bracket(
    g: &Graph,
    k_max: u32,
    upper: Option<CertifiedUpper>,
    budget: Budget,
    cap: SizeCap,
) -> Result<CapacityBracket> {
    if k_max == 0 {
        return Err(Error::invalid("k_max must be positive"));
    }
    if g.n() == 0 {
        return Err(Error::invalid("capacity of the empty graph"));
    }
    let mut powers = Vec::new();
    let mut lower = 1.0f64;
    let mut lower_witness = (1, 1);
    for k in 1..=k_max {
        let gk = power(g, k, cap)?;
        let res = max_independent_set(&gk, budget);
        if res.exact {
            let value = kth_root(res.size as f64, k);
            if value > lower {
                lower = value;
                lower_witness = (k, res.size);
            }
        }
        powers.push(PowerAlpha { k, vertices: gk.n(), size: res.size, exact: res.exact, nodes: res.nodes });
    }
    if let Some(u) = &upper {
        // tolerate rounding in the k-th root
        if lower > u.value * (1.0 + 1e-12) {
            return Err(Error::Consistency(format!("lower bound {lower} exceeds certified upper bound {}", u.value)));
        }
    }
    Ok(CapacityBracket {
        lower,
        upper: upper.as_ref().map(|u| u.value),
        lower_witness,
        upper_certificate: upper.map(|u| u.certificate),
        powers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::strong_product;

    fn alpha(g: &Graph) -> usize {
        let r = max_independent_set(g, Budget::default());
        assert!(r.exact);
        assert!(is_independent(g, &r.witness));
        r.size
    }

    #[test]
    fn clique_cover_bounds() {
        assert_eq!(clique_cover_upper(&Graph::cycle(5)).value, 3.0);
        assert_eq!(clique_cover_upper(&Graph::complete(4)).value, 1.0);
        assert_eq!(clique_cover_upper(&Graph::edgeless(4)).value, 4.0);
    }

    #[test]
    fn is_independent_examples() {
        let c5 = Graph::cycle(5);
        assert!(is_independent(&c5, &VertexSet::from_indices(5, [0, 2]).unwrap()));
        assert!(!is_independent(&c5, &VertexSet::from_indices(5, [0, 1]).unwrap()));
        assert!(is_independent(&c5, &VertexSet::from_indices(5, [3]).unwrap()));
    }

    #[test]
    fn alpha_examples() {
        let c5 = Graph::cycle(5);
        assert_eq!(alpha(&c5), 2);
        let sq = strong_product(&c5, &c5, SizeCap::default()).unwrap();
        assert_eq!(alpha(&sq), 5);
        assert_eq!(alpha(&Graph::complete(7)), 1);
        assert_eq!(alpha(&Graph::edgeless(70)), 70);
        assert_eq!(alpha(&Graph::edgeless(0)), 0);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let c = Graph::cycle(61);
        let r = max_independent_set(&c, Budget::nodes(1));
        assert!(!r.exact);
        assert!(is_independent(&c, &r.witness));
        assert!(r.size <= 30);
        let timed = max_independent_set(&c, Budget { nodes: u64::MAX, wall: Some(Duration::from_secs(60)) });
        assert!(timed.time_limited && timed.exact);
        assert_eq!(timed.size, 30);
    }

    #[test]
    fn union_alpha() {
        let c5 = max_independent_set(&Graph::cycle(5), Budget::default());
        assert_eq!(alpha_of_union(&[c5.clone(), c5.clone()]).unwrap(), 4);
        let k3 = max_independent_set(&Graph::complete(3), Budget::default());
        let e4 = max_independent_set(&Graph::edgeless(4), Budget::default());
        assert_eq!(alpha_of_union(&[k3, e4]).unwrap(), 5);
        assert_eq!(alpha_of_union(std::slice::from_ref(&c5)).unwrap(), 2);
        let partial = max_independent_set(&Graph::cycle(61), Budget::nodes(1));
        assert!(matches!(alpha_of_union(&[c5, partial]), Err(Error::Inexact(_))));
    }

    #[test]
    fn power_independence_examples() {
        let c5 = Graph::cycle(5);
        // (0,1) adjacent but (0,2) not, so the pair is non-adjacent in C5^2
        assert!(is_independent_in_power(&c5, 2, &[vec![0, 0], vec![1, 2]]).unwrap());
        assert!(!is_independent_in_power(&c5, 2, &[vec![0, 0], vec![1, 1]]).unwrap());
        assert!(is_independent_in_power(&c5, 3, &[vec![4, 4, 4]]).unwrap());
        let k2 = Graph::complete(2);
        assert!(!is_independent_in_power(&k2, 1, &[vec![0], vec![1]]).unwrap());
        assert!(is_independent_in_power(&k2, 1, &[vec![0], vec![0]]).unwrap());
        assert!(is_independent_in_power(&k2, 2, &[vec![0]]).is_err());
        assert!(is_independent_in_power(&k2, 1, &[vec![2]]).is_err());
    }

    #[test]
    fn brackets() {
        let b = capacity_bracket(&Graph::cycle(5), 2, None, Budget::default(), SizeCap::default()).unwrap();
        assert_eq!(b.lower, 5f64.sqrt());
        assert_eq!(b.lower_witness, (2, 5));
        assert_eq!(b.upper_value(), f64::INFINITY);

        let up = CertifiedUpper { value: 6.0, certificate: "edgeless".into() };
        let b = capacity_bracket(&Graph::edgeless(6), 1, Some(up), Budget::default(), SizeCap::default()).unwrap();
        assert_eq!((b.lower, b.upper), (6.0, Some(6.0)));

        let b = capacity_bracket(&Graph::complete(4), 1, None, Budget::default(), SizeCap::default()).unwrap();
        assert_eq!(b.lower, 1.0);

        let bad = CertifiedUpper { value: 2.0, certificate: "wrong".into() };
        assert!(capacity_bracket(&Graph::edgeless(3), 1, Some(bad), Budget::default(), SizeCap::default()).is_err());
    }
}
