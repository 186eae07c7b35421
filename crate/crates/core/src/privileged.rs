//! Channel graphs whose sums have high capacity exactly for coalitions that
//! contain a privileged set.
//!
//! Given a family `F` of subsets of the senders `[t]`, the inclusion-maximal
//! `F`-free sets `Y` each receive a distinct prime `p_Y`, and sender `i`
//! gets `A_i = { p_Y : i ∈ Y }`. A coalition `X` then has
//! `∩_{i∈X} A_i ≠ ∅` exactly when it contains no member of `F`.
//!
//! Sender `i`'s graph lives on the `s`-subsets of `[r]`; distinct `A`, `B`
//! are adjacent when `|A ∩ B| ≡ s (mod q)` for some `q ∈ A_i`.
//! Restricted coalitions are capped by a polynomial-representation
//! certificate over their common prime; privileged coalitions carry the
//! diagonal independent set `{(A, …, A)}` in the `|F|`-th power.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dimacs;
use crate::error::{Error, Result};
use crate::graph::{disjoint_union, Graph, SizeCap, VertexLabel};
use crate::independence::power_violation;
use crate::math::{binomial_u64, colex_subsets, is_prime, kth_root, next_primes, KSubset, PrimeList};
use crate::polyrep::{
    dimension_bound, verify_certificate, CertificateReport, DimensionBound, RepresentationCertificate,
};

pub const MAX_SENDERS: u32 = 20;
pub const MANIFEST_FORMAT_VERSION: u32 = 1;

/// Sender sets as bit-masks: sender `i` (1-based) is bit `i - 1`.
pub type Coalition = u32;

pub fn mask_from_ids(t: u32, ids: &[u32]) -> Result<Coalition> {
    ids.iter().try_fold(0u32, |m, &i| {
        if i == 0 || i > t {
            Err(Error::invalid(format!("sender {i} outside [1, {t}]")))
        } else {
            Ok(m | 1 << (i - 1))
        }
    })
}

pub fn ids_from_mask(mask: Coalition) -> Vec<u32> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// A family of subsets of `[t]`, deduplicated and sorted by mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    t: u32,
    members: Vec<Coalition>,
}

impl SubsetFamily {
    pub fn new(t: u32, members: impl IntoIterator<Item = Coalition>) -> Result<Self> {
        if !(2..=MAX_SENDERS).contains(&t) {
            return Err(Error::invalid(format!("t = {t} outside [2, {MAX_SENDERS}]")));
        }
        let all = (1u32 << t) - 1;
        let mut set = BTreeSet::new();
        for m in members {
            if m == 0 {
                return Err(Error::invalid("family contains the empty set"));
            }
            if m & !all != 0 {
                return Err(Error::invalid(format!("member {:?} not within [1, {t}]", ids_from_mask(m))));
            }
            set.insert(m);
        }
        Ok(SubsetFamily { t, members: set.into_iter().collect() })
    }

    /// From 1-based sender id lists.
    pub fn from_lists(t: u32, lists: &[Vec<u32>]) -> Result<Self> {
        if lists.iter().any(|l| l.is_empty()) {
            return Err(Error::invalid("family contains the empty set"));
        }
        let masks = lists.iter().map(|l| mask_from_ids(t, l)).collect::<Result<Vec<_>>>()?;
        SubsetFamily::new(t, masks)
    }

    /// Every `k`-subset of `[t]`: the threshold family.
    pub fn threshold(t: u32, k: u32) -> Result<Self> {
        let masks = (1..1u32 << t).filter(|m| m.count_ones() == k);
        SubsetFamily::new(t, masks)
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn members(&self) -> &[Coalition] {
        &self.members
    }

    pub fn to_lists(&self) -> Vec<Vec<u32>> {
        self.members.iter().map(|&m| ids_from_mask(m)).collect()
    }

    pub fn contains_member_within(&self, x: Coalition) -> bool {
        self.members.iter().any(|&f| f & !x == 0)
    }

    /// SHA-256 of the canonical JSON form (sorted, deduplicated id lists).
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(&(self.t, self.to_lists())).expect("serializable");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

/// Inclusion-maximal subsets of `[t]` containing no member of the family,
/// in colex (= increasing mask) order.
pub fn maximal_free_sets(family: &SubsetFamily) -> Vec<Coalition> {
    let t = family.t;
    let size = 1usize << t;
    let mut blocked = vec![false; size];
    for &f in &family.members {
        blocked[f as usize] = true;
    }
    // superset closure, increasing masks see their subsets first
    for m in 1..size {
        if !blocked[m] {
            blocked[m] = (0..t).any(|b| m >> b & 1 == 1 && blocked[m & !(1 << b)]);
        }
    }
    (0..size)
        .filter(|&m| !blocked[m] && (0..t).all(|b| m >> b & 1 == 1 || blocked[m | 1 << b]))
        .map(|m| m as Coalition)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignedSet {
    pub y: Vec<u32>,
    pub prime: u64,
}

/// The maximal free sets with their primes, and the prime sets `A_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntichainAssignment {
    t: u32,
    maximal_free_sets: Vec<Coalition>,
    primes: Vec<u64>,
    a_sets: Vec<Vec<u64>>,
}

impl AntichainAssignment {
    pub fn maximal_free_sets(&self) -> &[Coalition] {
        &self.maximal_free_sets
    }

    pub fn prime_of(&self, y: Coalition) -> Option<u64> {
        self.maximal_free_sets.iter().position(|&m| m == y).map(|i| self.primes[i])
    }

    /// `A_i` for 1-based sender `i`, increasing.
    pub fn a_set(&self, i: u32) -> &[u64] {
        &self.a_sets[i as usize - 1]
    }

    pub fn a_sets(&self) -> &[Vec<u64>] {
        &self.a_sets
    }

    pub fn primes_used(&self) -> &[u64] {
        &self.primes
    }

    pub fn union_size(&self) -> usize {
        self.a_sets.iter().flatten().collect::<BTreeSet<_>>().len()
    }

    pub fn assigned(&self) -> Vec<AssignedSet> {
        self.maximal_free_sets
            .iter()
            .zip(&self.primes)
            .map(|(&y, &prime)| AssignedSet { y: ids_from_mask(y), prime })
            .collect()
    }

    /// Antichain, freeness and Sperner-size checks.
    pub fn check(&self, family: &SubsetFamily) -> Result<()> {
        let ys = &self.maximal_free_sets;
        for (i, &a) in ys.iter().enumerate() {
            if family.contains_member_within(a) {
                return Err(Error::Consistency(format!("{:?} contains a family member", ids_from_mask(a))));
            }
            if let Some(&b) = ys.iter().skip(i + 1).find(|&&b| a & b == a || a & b == b) {
                return Err(Error::Consistency(format!(
                    "{:?} and {:?} are comparable",
                    ids_from_mask(a),
                    ids_from_mask(b)
                )));
            }
        }
        let sperner = binomial_u64(self.t as u64, self.t as u64 / 2).unwrap();
        if self.union_size() as u64 > sperner {
            return Err(Error::Consistency(format!("|∪A_i| = {} exceeds {sperner}", self.union_size())));
        }
        Ok(())
    }
}

/// Assigns the first pool primes to the maximal free sets in colex order.
pub fn build_assignment(family: &SubsetFamily, pool: &PrimeList) -> Result<AntichainAssignment> {
    let ys = maximal_free_sets(family);
    if pool.len() < ys.len() {
        return Err(Error::Validation(format!(
            "prime pool has {} primes, {} maximal free sets need one each",
            pool.len(),
            ys.len()
        )));
    }
    let primes = pool.as_slice()[..ys.len()].to_vec();
    let a_sets = (0..family.t)
        .map(|b| {
            let mut a: Vec<u64> = ys.iter().zip(&primes).filter(|(y, _)| *y >> b & 1 == 1).map(|(_, &p)| p).collect();
            a.sort_unstable();
            a
        })
        .collect();
    Ok(AntichainAssignment { t: family.t, maximal_free_sets: ys, primes, a_sets })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoalitionStatus {
    /// `∩_{i∈X} A_i`, increasing.
    pub free_intersection: Vec<u64>,
    pub contains_f: bool,
}

pub fn coalition_status(
    family: &SubsetFamily,
    assignment: &AntichainAssignment,
    x: Coalition,
) -> Result<CoalitionStatus> {
    if x == 0 {
        return Err(Error::invalid("empty coalition"));
    }
    if x >> family.t != 0 {
        return Err(Error::invalid(format!("coalition {:?} not within [1, {}]", ids_from_mask(x), family.t)));
    }
    let members = ids_from_mask(x);
    let mut inter: Vec<u64> = assignment.a_set(members[0]).to_vec();
    for &i in &members[1..] {
        let a = assignment.a_set(i);
        inter.retain(|p| a.contains(p));
    }
    Ok(CoalitionStatus { free_intersection: inter, contains_f: family.contains_member_within(x) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamWarning {
    pub prime: u64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamReport {
    pub passed: bool,
    pub failures: Vec<String>,
    pub warnings: Vec<ParamWarning>,
    /// `Some(p)` when `s = p²` and `r = p³` for a prime `p`.
    pub canonical_p: Option<u64>,
}

/// Intersection sizes of two distinct `s`-subsets of `[r]`.
pub fn achievable_overlaps(r: u32, s: u32) -> std::ops::Range<u32> {
    (2 * s).saturating_sub(r)..s
}

/// Admissibility of `(r, s, primes)` for the intersection-rule graphs.
pub fn validate_params(r: u32, s: u32, primes: &[u64]) -> ParamReport {
    let mut failures = Vec::new();
    let mut warnings = Vec::new();
    if s == 0 || r == 0 {
        failures.push("r and s must be positive".to_string());
    }
    if s > r {
        failures.push(format!("s = {s} exceeds r = {r}"));
    }
    for &q in primes {
        if !is_prime(q) {
            failures.push(format!("{q} is not prime"));
        } else if (s as u64).is_multiple_of(q) {
            failures.push(format!("{q} divides s = {s}"));
        }
    }
    for (i, &a) in primes.iter().enumerate() {
        for &b in &primes[i + 1..] {
            if a == b {
                failures.push(format!("prime {a} repeated"));
            } else if (a as u128) * (b as u128) <= s as u128 {
                failures.push(format!("{a}·{b} ≤ s = {s}, overlaps are not pinned by the two residues"));
            }
        }
    }
    if s <= r && s > 0 {
        for &q in primes {
            if q > 0 && !achievable_overlaps(r, s).any(|v| (v as u64) % q == s as u64 % q) {
                warnings.push(ParamWarning {
                    prime: q,
                    message: format!(
                        "no overlap in {:?} is ≡ {s} (mod {q}); the rule never fires",
                        achievable_overlaps(r, s)
                    ),
                });
            }
        }
    }
    let canonical_p =
        (1..=s).map(|p| p as u64).find(|&p| p * p == s as u64).filter(|&p| is_prime(p) && p * p * p == r as u64);
    ParamReport { passed: failures.is_empty(), failures, warnings, canonical_p }
}

/// The `s`-subsets of `[r]` in colex order with their bit-masks.
pub(crate) struct SubsetTable {
    pub subsets: Vec<KSubset>,
    pub stride: usize,
    pub masks: Vec<u64>,
}

impl SubsetTable {
    pub fn new(r: u32, s: u32) -> Self {
        let subsets: Vec<KSubset> = colex_subsets(r, s).collect();
        let stride = (r as usize).div_ceil(64);
        let mut masks = Vec::with_capacity(subsets.len() * stride);
        for sub in &subsets {
            masks.extend(sub.to_words());
        }
        SubsetTable { subsets, stride, masks }
    }

    #[inline]
    pub fn overlap(&self, u: usize, v: usize) -> usize {
        let a = &self.masks[u * self.stride..(u + 1) * self.stride];
        let b = &self.masks[v * self.stride..(v + 1) * self.stride];
        a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
    }
}

fn vertex_count(r: u32, s: u32, cap: SizeCap) -> Result<usize> {
    let n = binomial_u64(r as u64, s as u64).ok_or(Error::Overflow("C(r, s)"))?;
    cap.check(n)?;
    Ok(n as usize)
}

pub(crate) fn build_graph_from_table(
    table: &SubsetTable,
    s: u32,
    a_set: &[u64],
    channel: u32,
    cap: SizeCap,
) -> Result<Graph> {
    let n = table.subsets.len();
    let fires: Vec<bool> = (0..=s as u64).map(|w| a_set.iter().any(|&q| w % q == s as u64 % q)).collect();
    let g = Graph::from_row_fn(n, cap, |u, row| {
        if a_set.is_empty() {
            return;
        }
        for v in (0..n).filter(|&v| v != u) {
            if fires[table.overlap(u, v)] {
                row[v / 64] |= 1 << (v % 64);
            }
        }
    })?;
    let labels = table.subsets.iter().map(|sub| VertexLabel { channel, subset: sub.clone() }).collect();
    g.with_labels(labels)
}

/// Intersection-rule graph for one sender, labeled with `channel`.
pub fn build_graph(r: u32, s: u32, a_set: &[u64], channel: u32, cap: SizeCap) -> Result<Graph> {
    vertex_count(r, s, cap)?;
    build_graph_from_table(&SubsetTable::new(r, s), s, a_set, channel, cap)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeSource {
    /// The primes following `p`, as many as there are maximal free sets.
    After(u64),
    Pool(PrimeList),
}

/// A family, its prime assignment, and the constructed graphs `G_1..G_t`.
#[derive(Clone, Debug)]
pub struct PrivilegedSystem {
    pub family: SubsetFamily,
    pub r: u32,
    pub s: u32,
    pub pool: PrimeList,
    pub assignment: AntichainAssignment,
    pub params: ParamReport,
    pub graphs: Vec<Graph>,
}

impl PrivilegedSystem {
    pub fn build(family: SubsetFamily, r: u32, s: u32, primes: PrimeSource, cap: SizeCap) -> Result<Self> {
        let pool = match primes {
            PrimeSource::After(p) => {
                let needed = maximal_free_sets(&family).len().max(1);
                next_primes(p, needed)?
            }
            PrimeSource::Pool(pool) => pool,
        };
        let assignment = build_assignment(&family, &pool)?;
        assignment.check(&family)?;
        let params = validate_params(r, s, assignment.primes_used());
        if !params.passed {
            return Err(Error::Validation(params.failures.join("; ")));
        }
        vertex_count(r, s, cap)?;
        let table = SubsetTable::new(r, s);
        let graphs = (1..=family.t)
            .map(|i| build_graph_from_table(&table, s, assignment.a_set(i), i, cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(PrivilegedSystem { family, r, s, pool, assignment, params, graphs })
    }

    pub fn n(&self) -> usize {
        self.graphs[0].n()
    }

    pub fn t(&self) -> u32 {
        self.family.t
    }

    /// Disjoint union of `G_i` for `i ∈ X`, in increasing sender order.
    pub fn union_over(&self, x: Coalition, cap: SizeCap) -> Result<Graph> {
        let parts: Vec<&Graph> = ids_from_mask(x).iter().map(|&i| &self.graphs[i as usize - 1]).collect();
        disjoint_union(&parts, cap)
    }
}

/// `(A^(i_1), …, A^(i_|F|))` for every `s`-subset `A`, numbered in the
/// union over `X` (sender `i` at block position of `i` within `X`).
pub fn diagonal_tuples(system: &PrivilegedSystem, f: Coalition, x: Coalition) -> Result<Vec<Vec<usize>>> {
    if !system.family.members.contains(&f) {
        return Err(Error::invalid(format!("{:?} is not a family member", ids_from_mask(f))));
    }
    if f & !x != 0 {
        return Err(Error::invalid(format!("{:?} is not contained in {:?}", ids_from_mask(f), ids_from_mask(x))));
    }
    let n = system.n();
    let blocks: Vec<usize> =
        ids_from_mask(f).iter().map(|&i| (x & ((1 << (i - 1)) - 1)).count_ones() as usize).collect();
    Ok((0..n).map(|a| blocks.iter().map(|&b| b * n + a).collect()).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalWitness {
    pub f: Vec<u32>,
    pub arity: usize,
    pub tuples: usize,
    pub verified: bool,
    pub first_violation: Option<(usize, usize)>,
}

/// Checks the diagonal tuples of `f` for independence in the `|F|`-th power
/// of the union over `f`, the part of any larger union they live in.
pub fn verify_diagonal(system: &PrivilegedSystem, f: Coalition, cap: SizeCap) -> Result<DiagonalWitness> {
    let tuples = diagonal_tuples(system, f, f)?;
    let union = system.union_over(f, cap)?;
    let arity = f.count_ones() as usize;
    let violation = power_violation(&union, arity, &tuples)?;
    Ok(DiagonalWitness {
        f: ids_from_mask(f),
        arity,
        tuples: tuples.len(),
        verified: violation.is_none(),
        first_violation: violation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Privileged,
    Restricted,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBound {
    pub value: f64,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub coalition: Vec<u32>,
    pub verdict: Verdict,
    pub n: usize,
    pub lower: LowerBound,
    pub upper: Option<DimensionBound>,
    pub common_prime: Option<u64>,
    pub free_intersection: Vec<u64>,
    pub diagonal: Option<DiagonalWitness>,
    pub certificate: Option<CertificateReport>,
}

/// Certified capacity bracket for the sum of the graphs in `X`.
pub fn bound_report(system: &PrivilegedSystem, x: Coalition, cap: SizeCap) -> Result<BoundReport> {
    let status = coalition_status(&system.family, &system.assignment, x)?;
    let restricted = !status.free_intersection.is_empty();
    if restricted == status.contains_f {
        return Err(Error::Consistency(format!(
            "coalition {:?}: intersection {:?} but contains_f = {}",
            ids_from_mask(x),
            status.free_intersection,
            status.contains_f
        )));
    }
    let n = system.n();
    let mut report = BoundReport {
        coalition: ids_from_mask(x),
        verdict: if restricted { Verdict::Restricted } else { Verdict::Privileged },
        n,
        lower: LowerBound { value: 0.0, witness: String::new() },
        upper: None,
        common_prime: None,
        free_intersection: status.free_intersection.clone(),
        diagonal: None,
        certificate: None,
    };
    if restricted {
        let q = status.free_intersection[0];
        let copies = x.count_ones();
        report.lower = LowerBound { value: copies as f64, witness: "one vertex from each summand".into() };
        let union = system.union_over(x, cap)?;
        let cert = RepresentationCertificate::from_graph(&union, q)?;
        let verified = verify_certificate(&union, &cert)?;
        if verified.valid {
            report.upper = Some(dimension_bound(copies as u64, q, system.r as u64));
        }
        report.common_prime = Some(q);
        report.certificate = Some(verified);
    } else {
        let best = system
            .family
            .members
            .iter()
            .copied()
            .filter(|&f| f & !x == 0)
            .min_by_key(|&f| (f.count_ones(), f))
            .expect("privileged coalition contains a member");
        let k = best.count_ones();
        let diagonal = verify_diagonal(system, best, cap)?;
        if !diagonal.verified {
            return Err(Error::Consistency(format!("diagonal set of {:?} is not independent", diagonal.f)));
        }
        report.lower = LowerBound {
            value: kth_root(n as f64, k),
            witness: format!("{n} diagonal {k}-tuples over senders {:?}", diagonal.f),
        };
        report.diagonal = Some(diagonal);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemManifest {
    pub format_version: u32,
    pub t: u32,
    pub family: Vec<Vec<u32>>,
    pub family_sha256: String,
    pub r: u32,
    pub s: u32,
    pub n: usize,
    pub prime_pool: Vec<u64>,
    pub canonical_p: Option<u64>,
    pub assignment: Vec<AssignedSet>,
    pub a_sets: Vec<Vec<u64>>,
    pub graph_files: Vec<String>,
}

impl PrivilegedSystem {
    pub fn manifest(&self, graph_files: Vec<String>) -> SystemManifest {
        SystemManifest {
            format_version: MANIFEST_FORMAT_VERSION,
            t: self.t(),
            family: self.family.to_lists(),
            family_sha256: self.family.digest(),
            r: self.r,
            s: self.s,
            n: self.n(),
            prime_pool: self.pool.as_slice().to_vec(),
            canonical_p: self.params.canonical_p,
            assignment: self.assignment.assigned(),
            a_sets: self.assignment.a_sets().to_vec(),
            graph_files,
        }
    }

    /// Writes `manifest.json` and, if asked, `g<i>.dimacs` with label sidecars.
    pub fn save(&self, dir: &Path, write_graphs: bool) -> Result<SystemManifest> {
        fs::create_dir_all(dir)?;
        let mut files = Vec::new();
        if write_graphs {
            for (i, g) in self.graphs.iter().enumerate() {
                let name = format!("g{}.dimacs", i + 1);
                dimacs::save_graph(&dir.join(&name), g)?;
                files.push(name);
            }
        }
        let manifest = self.manifest(files);
        fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
        Ok(manifest)
    }

    /// Rebuilds the system described by `dir/manifest.json` and checks that
    /// the assignment matches the recorded one.
    pub fn load(dir: &Path, cap: SizeCap) -> Result<Self> {
        let manifest: SystemManifest = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
        if manifest.format_version != MANIFEST_FORMAT_VERSION {
            return Err(Error::parse(format!("unsupported manifest version {}", manifest.format_version)));
        }
        let family = SubsetFamily::from_lists(manifest.t, &manifest.family)?;
        let pool = PrimeList::new(manifest.prime_pool.clone())?;
        let system = PrivilegedSystem::build(family, manifest.r, manifest.s, PrimeSource::Pool(pool), cap)?;
        let rebuilt = system.manifest(manifest.graph_files.clone());
        if rebuilt != manifest {
            return Err(Error::Consistency("manifest does not match the rebuilt system".into()));
        }
        Ok(system)
    }
}

/// Every adjacency of `G_i` agrees with the overlap rule on sampled pairs;
/// returns the number of mismatches.
pub fn spot_check_edges(system: &PrivilegedSystem, pairs: &[(usize, usize)]) -> Vec<usize> {
    let s = system.s as u64;
    system
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let a = system.assignment.a_set(i as u32 + 1);
            let labels = g.labels().expect("system graphs are labeled");
            pairs
                .iter()
                .filter(|&&(u, v)| {
                    let expected = u != v && {
                        let w = labels[u].subset.intersection_size(&labels[v].subset) as u64;
                        a.iter().any(|&q| w % q == s % q)
                    };
                    g.has_edge(u, v) != expected
                })
                .count()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(t: u32, lists: &[&[u32]]) -> SubsetFamily {
        SubsetFamily::from_lists(t, &lists.iter().map(|l| l.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn ids(ms: &[Coalition]) -> Vec<Vec<u32>> {
        ms.iter().map(|&m| ids_from_mask(m)).collect()
    }

    #[test]
    fn maximal_free_examples() {
        assert_eq!(ids(&maximal_free_sets(&fam(3, &[&[1, 2], &[3]]))), vec![vec![1], vec![2]]);
        assert_eq!(ids(&maximal_free_sets(&SubsetFamily::threshold(3, 2).unwrap())), vec![vec![1], vec![2], vec![3]]);
        assert_eq!(ids(&maximal_free_sets(&fam(3, &[]))), vec![vec![1, 2, 3]]);
        // every singleton forbidden: only the empty set is free
        assert_eq!(maximal_free_sets(&SubsetFamily::threshold(3, 1).unwrap()), vec![0]);
    }

    #[test]
    fn family_validation() {
        assert!(SubsetFamily::from_lists(3, &[vec![]]).is_err());
        assert!(SubsetFamily::from_lists(3, &[vec![4]]).is_err());
        assert!(SubsetFamily::from_lists(1, &[]).is_err());
        assert!(SubsetFamily::from_lists(21, &[]).is_err());
        let f = SubsetFamily::from_lists(3, &[vec![2, 1], vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(f.to_lists(), vec![vec![1, 2], vec![1, 2, 3]]);
        assert_eq!(f.digest(), fam(3, &[&[1, 2, 3], &[1, 2]]).digest());
    }

    #[test]
    fn assignment_examples() {
        let f = fam(3, &[&[1, 2], &[3]]);
        let a = build_assignment(&f, &PrimeList::new(vec![3, 5]).unwrap()).unwrap();
        assert_eq!(a.prime_of(0b001), Some(3));
        assert_eq!(a.prime_of(0b010), Some(5));
        assert_eq!(a.a_sets(), &[vec![3], vec![5], vec![]]);
        a.check(&f).unwrap();

        let a = build_assignment(&fam(2, &[]), &PrimeList::new(vec![3]).unwrap()).unwrap();
        assert_eq!(a.a_sets(), &[vec![3], vec![3]]);

        assert!(build_assignment(&f, &PrimeList::new(vec![3]).unwrap()).is_err());
    }

    #[test]
    fn coalition_examples() {
        let f = fam(3, &[&[1, 2], &[3]]);
        let a = build_assignment(&f, &PrimeList::new(vec![3, 5]).unwrap()).unwrap();
        let st = coalition_status(&f, &a, 0b001).unwrap();
        assert_eq!((st.free_intersection, st.contains_f), (vec![3], false));
        let st = coalition_status(&f, &a, 0b011).unwrap();
        assert_eq!((st.free_intersection.is_empty(), st.contains_f), (true, true));
        let st = coalition_status(&f, &a, 0b100).unwrap();
        assert_eq!((st.free_intersection.is_empty(), st.contains_f), (true, true));
        assert!(coalition_status(&f, &a, 0).is_err());
        assert!(coalition_status(&f, &a, 0b1000).is_err());
    }

    #[test]
    fn params_examples() {
        let rep = validate_params(16, 8, &[3, 5, 7]);
        assert!(rep.passed && rep.warnings.is_empty(), "{rep:?}");
        let rep = validate_params(8, 4, &[3, 5]);
        assert!(rep.passed);
        assert_eq!(rep.warnings.iter().map(|w| w.prime).collect::<Vec<_>>(), vec![5]);
        assert!(!validate_params(16, 8, &[3, 4]).passed);
        assert!(!validate_params(8, 16, &[3]).passed);
        assert!(!validate_params(20, 20, &[3, 5]).passed);
        assert!(!validate_params(16, 8, &[3, 3]).passed);
        assert!(!validate_params(16, 8, &[2]).passed);
        assert_eq!(validate_params(27, 9, &[5]).canonical_p, Some(3));
        assert_eq!(validate_params(16, 8, &[3]).canonical_p, None);
    }

    #[test]
    fn graph_rule_examples() {
        let g = build_graph(8, 4, &[3], 1, SizeCap::default()).unwrap();
        assert_eq!(g.n(), 70);
        let labels = g.labels().unwrap();
        for (u, v) in [(0, 1), (0, 69), (5, 40)] {
            let w = labels[u].subset.intersection_size(&labels[v].subset);
            assert_eq!(g.has_edge(u, v), w % 3 == 1, "pair ({u},{v}) overlap {w}");
        }
        // each 4-subset of [8] meets exactly 16 others in one element
        assert!((0..70).all(|v| g.degree(v) == 16));
        assert_eq!(build_graph(8, 4, &[], 1, SizeCap::default()).unwrap().edge_count(), 0);
        assert!(build_graph(16, 8, &[3], 1, SizeCap(1000)).is_err());
    }

    #[test]
    fn small_system_reports() {
        let f = SubsetFamily::threshold(3, 2).unwrap();
        let sys = PrivilegedSystem::build(
            f,
            8,
            4,
            PrimeSource::Pool(PrimeList::new(vec![3, 5, 7]).unwrap()),
            SizeCap::default(),
        );
        // 5 and 7 never fire on overlaps 0..3 but are admissible
        let sys = sys.unwrap();
        assert_eq!(sys.params.warnings.len(), 2);
        let rep = bound_report(&sys, 0b011, SizeCap::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Privileged);
        assert!(rep.diagonal.as_ref().unwrap().verified);
        assert!((rep.lower.value - 70f64.sqrt()).abs() < 1e-12);
        let rep = bound_report(&sys, 0b001, SizeCap::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Restricted);
        assert_eq!(rep.common_prime, Some(3));
        assert_eq!(rep.upper.unwrap().as_u64(), Some(37));
        assert!(bound_report(&sys, 0, SizeCap::default()).is_err());
    }

    #[test]
    fn diagonal_tuple_layout() {
        let f = SubsetFamily::threshold(3, 2).unwrap();
        let sys = PrivilegedSystem::build(f, 8, 4, PrimeSource::After(2), SizeCap::default()).unwrap();
        let t = diagonal_tuples(&sys, 0b101, 0b111).unwrap();
        assert_eq!(t.len(), 70);
        assert_eq!(t[3], vec![3, 2 * 70 + 3]);
        let t = diagonal_tuples(&sys, 0b101, 0b101).unwrap();
        assert_eq!(t[3], vec![3, 70 + 3]);
        assert!(diagonal_tuples(&sys, 0b101, 0b001).is_err());
        assert!(diagonal_tuples(&sys, 0b001, 0b001).is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let f = fam(3, &[&[1, 2], &[3]]);
        let sys = PrivilegedSystem::build(f, 8, 4, PrimeSource::After(2), SizeCap::default()).unwrap();
        let m = sys.save(dir.path(), true).unwrap();
        assert_eq!(m.graph_files, vec!["g1.dimacs", "g2.dimacs", "g3.dimacs"]);
        let back = PrivilegedSystem::load(dir.path(), SizeCap::default()).unwrap();
        assert_eq!(back.graphs, sys.graphs);
        let g1 = dimacs::load_graph(&dir.path().join("g1.dimacs"), SizeCap::default()).unwrap();
        assert_eq!(g1, sys.graphs[0]);
    }
}
