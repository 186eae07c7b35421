//! Explicit `t`-edge-colourings of the complete graph on the `s`-subsets of
//! `[r]`: the pair `{A, B}` gets colour `i` when `|A ∩ B| ≡ s (mod p_i)`.
//! Pairs matching no rule get a fixed fallback colour.
//!
//! Colour class `H_i` (edges coloured `i`) has a polynomial representation
//! over `Z_{p_i}`, so any set of `Σ_{j<p_i} C(r, j) + 1` vertices spans an
//! edge of colour `i`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, SizeCap, VertexLabel};
use crate::independence::{max_independent_set, Budget};
use crate::math::{binomial_u64, PrimeList};
use crate::polyrep::{dimension_bound, verify_certificate, CertificateReport, RepresentationCertificate};
use crate::privileged::{achievable_overlaps, validate_params, ParamReport, SubsetTable};

pub const COLORING_FORMAT_VERSION: u32 = 1;
pub const MAX_COLORS: usize = 255;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FallbackRule {
    /// `1 + ((rank(A) + rank(B)) mod t)`.
    RankSumModT,
}

impl FallbackRule {
    fn color(self, u: usize, v: usize, t: usize) -> u8 {
        match self {
            FallbackRule::RankSumModT => (1 + (u + v) % t) as u8,
        }
    }
}

/// Index of the pair `u < v` in the order (0,1), (0,2), …, (1,2), ….
#[inline]
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringHeader {
    pub format_version: u32,
    pub n: usize,
    pub t: usize,
    pub r: u32,
    pub s: u32,
    pub primes: Vec<u64>,
    pub fallback_rule: FallbackRule,
}

/// Colouring of `K_n`, one byte per pair in upper-triangle order.
#[derive(Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    header: ColoringHeader,
    colors: Vec<u8>,
}

impl std::fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EdgeColoring").field("header", &self.header).finish_non_exhaustive()
    }
}

/// For each overlap `w < s`, the colour whose rule fires, if any.
fn rule_table(s: u32, primes: &[u64]) -> Vec<Option<u8>> {
    (0..s as u64).map(|w| primes.iter().position(|&p| w % p == s as u64 % p).map(|i| i as u8 + 1)).collect()
}

fn row_slices(colors: &mut [u8], n: usize) -> Vec<&mut [u8]> {
    let mut rows = Vec::with_capacity(n);
    let mut rest = colors;
    for u in 0..n {
        let (row, tail) = rest.split_at_mut(n - u - 1);
        rows.push(row);
        rest = tail;
    }
    rows
}

pub fn build_coloring(
    r: u32,
    s: u32,
    primes: &PrimeList,
    fallback: FallbackRule,
    cap: SizeCap,
) -> Result<EdgeColoring> {
    let t = primes.len();
    if t == 0 || t > MAX_COLORS {
        return Err(Error::invalid(format!("need 1..={MAX_COLORS} colours, got {t}")));
    }
    let params = validate_params(r, s, primes.as_slice());
    if !params.passed {
        return Err(Error::Validation(params.failures.join("; ")));
    }
    let n = binomial_u64(r as u64, s as u64).ok_or(Error::Overflow("C(r, s)"))?;
    cap.check(n)?;
    let n = n as usize;
    let table = SubsetTable::new(r, s);
    let rules = rule_table(s, primes.as_slice());
    let mut colors = vec![0u8; n * n.saturating_sub(1) / 2];
    row_slices(&mut colors, n).into_par_iter().enumerate().for_each(|(u, row)| {
        for (off, c) in row.iter_mut().enumerate() {
            let v = u + 1 + off;
            *c = rules[table.overlap(u, v)].unwrap_or_else(|| fallback.color(u, v, t));
        }
    });
    let header = ColoringHeader {
        format_version: COLORING_FORMAT_VERSION,
        n,
        t,
        r,
        s,
        primes: primes.as_slice().to_vec(),
        fallback_rule: fallback,
    };
    Ok(EdgeColoring { header, colors })
}

impl EdgeColoring {
    pub fn header(&self) -> &ColoringHeader {
        &self.header
    }

    pub fn n(&self) -> usize {
        self.header.n
    }

    pub fn t(&self) -> usize {
        self.header.t
    }

    pub fn color(&self, u: usize, v: usize) -> u8 {
        assert!(u != v, "no colour on the diagonal");
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.colors[pair_index(self.header.n, a, b)]
    }

    /// Overwrites one pair; for building mutated colourings in tests.
    pub fn set_color(&mut self, u: usize, v: usize, c: u8) {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let n = self.header.n;
        self.colors[pair_index(n, a, b)] = c;
    }

    pub fn recolor_all(&mut self, from: u8, to: u8) {
        self.colors.par_iter_mut().filter(|c| **c == from).for_each(|c| *c = to);
    }

    pub fn pair_colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn params(&self) -> ParamReport {
        validate_params(self.header.r, self.header.s, &self.header.primes)
    }

    /// Header as one JSON line, then the pair colours as raw bytes.
    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut out = BufWriter::new(out);
        serde_json::to_writer(&mut out, &self.header)?;
        out.write_all(b"\n")?;
        out.write_all(&self.colors)?;
        out.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut input = BufReader::new(input);
        let mut line = String::new();
        input.read_line(&mut line)?;
        let header: ColoringHeader = serde_json::from_str(line.trim_end())?;
        if header.format_version != COLORING_FORMAT_VERSION {
            return Err(Error::parse(format!("unsupported colouring version {}", header.format_version)));
        }
        if binomial_u64(header.r as u64, header.s as u64) != Some(header.n as u64) {
            return Err(Error::parse("n differs from C(r, s)"));
        }
        if header.t != header.primes.len() || header.t == 0 || header.t > MAX_COLORS {
            return Err(Error::parse("colour count differs from prime count"));
        }
        let pairs = header.n * header.n.saturating_sub(1) / 2;
        let mut colors = Vec::with_capacity(pairs);
        input.read_to_end(&mut colors)?;
        if colors.len() != pairs {
            return Err(Error::parse(format!("expected {pairs} colour bytes, found {}", colors.len())));
        }
        if let Some(k) = colors.iter().position(|&c| c == 0 || c as usize > header.t) {
            return Err(Error::parse(format!("pair {k} has colour {}", colors[k])));
        }
        Ok(EdgeColoring { header, colors })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_to(File::create(path)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_from(File::open(path)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueClass {
    pub color: u8,
    pub prime: u64,
    pub overlaps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapConflict {
    pub overlap: u32,
    pub colors: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WellDefinedReport {
    pub well_defined: bool,
    pub overlap_range: (u32, u32),
    pub residue_classes: Vec<ResidueClass>,
    pub conflicts: Vec<OverlapConflict>,
}

/// Scans the achievable overlaps for values matching two colour rules.
pub fn check_params_well_defined(r: u32, s: u32, primes: &[u64]) -> WellDefinedReport {
    let range = achievable_overlaps(r, s);
    let residue_classes: Vec<ResidueClass> = primes
        .iter()
        .enumerate()
        .map(|(i, &p)| ResidueClass {
            color: i as u8 + 1,
            prime: p,
            overlaps: range.clone().filter(|&v| v as u64 % p == s as u64 % p).collect(),
        })
        .collect();
    let conflicts: Vec<OverlapConflict> = range
        .clone()
        .filter_map(|v| {
            let colors: Vec<u8> = residue_classes.iter().filter(|c| c.overlaps.contains(&v)).map(|c| c.color).collect();
            (colors.len() > 1).then_some(OverlapConflict { overlap: v, colors })
        })
        .collect();
    WellDefinedReport {
        well_defined: conflicts.is_empty(),
        overlap_range: (range.start, range.end),
        residue_classes,
        conflicts,
    }
}

pub fn check_well_defined(coloring: &EdgeColoring) -> WellDefinedReport {
    let h = &coloring.header;
    check_params_well_defined(h.r, h.s, &h.primes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleMismatch {
    pub u: usize,
    pub v: usize,
    pub expected: u8,
    pub found: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleAudit {
    pub pairs_checked: u64,
    pub rule_pairs: u64,
    pub mismatch_count: u64,
    /// First mismatches in pair order, at most 100.
    pub mismatches: Vec<RuleMismatch>,
}

/// Exhaustive scan: every pair carries the colour of the rule its overlap
/// fires, or the fallback colour when none fires.
pub fn audit_rules(coloring: &EdgeColoring) -> RuleAudit {
    let h = &coloring.header;
    let (n, t) = (h.n, h.t);
    let table = SubsetTable::new(h.r, h.s);
    let rules = rule_table(h.s, &h.primes);
    let rows: Vec<(u64, u64, Vec<RuleMismatch>)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let (mut fired, mut bad, mut listed) = (0u64, 0u64, Vec::new());
            for v in u + 1..n {
                let found = coloring.colors[pair_index(n, u, v)];
                let rule = rules[table.overlap(u, v)];
                if rule.is_some() {
                    fired += 1;
                }
                let expected = rule.unwrap_or_else(|| h.fallback_rule.color(u, v, t));
                if found != expected {
                    bad += 1;
                    if listed.len() < 100 {
                        listed.push(RuleMismatch { u, v, expected, found });
                    }
                }
            }
            (fired, bad, listed)
        })
        .collect();
    let mut audit = RuleAudit {
        pairs_checked: coloring.colors.len() as u64,
        rule_pairs: 0,
        mismatch_count: 0,
        mismatches: Vec::new(),
    };
    for (fired, bad, listed) in rows {
        audit.rule_pairs += fired;
        audit.mismatch_count += bad;
        let room = 100 - audit.mismatches.len();
        audit.mismatches.extend(listed.into_iter().take(room));
    }
    audit
}

/// Spanning subgraph of the `i`-coloured pairs.
#[derive(Clone, Debug)]
pub struct ColorClass {
    pub color: u8,
    pub graph: Graph,
}

/// Colour class `H_i`, labeled as a single channel `i` over the subsets.
pub fn color_class(coloring: &EdgeColoring, i: u8, cap: SizeCap) -> Result<ColorClass> {
    let h = &coloring.header;
    if i == 0 || i as usize > h.t {
        return Err(Error::invalid(format!("colour {i} outside [1, {}]", h.t)));
    }
    let n = h.n;
    let g = Graph::from_row_fn(n, cap, |u, row| {
        for v in (0..n).filter(|&v| v != u) {
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if coloring.colors[pair_index(n, a, b)] == i {
                row[v / 64] |= 1 << (v % 64);
            }
        }
    })?;
    let table = SubsetTable::new(h.r, h.s);
    let labels = table.subsets.into_iter().map(|subset| VertexLabel { channel: i as u32, subset }).collect();
    Ok(ColorClass { color: i, graph: g.with_labels(labels)? })
}

fn realizable(r: u32, s: u32, p: u64) -> bool {
    achievable_overlaps(r, s).any(|v| v as u64 % p == s as u64 % p)
}

/// Every induced subgraph on this many vertices contains colour `i`.
pub fn rainbow_threshold(coloring: &EdgeColoring, i: u8) -> Result<u64> {
    let h = &coloring.header;
    if i == 0 || i as usize > h.t {
        return Err(Error::invalid(format!("colour {i} outside [1, {}]", h.t)));
    }
    let p = h.primes[i as usize - 1];
    if !realizable(h.r, h.s, p) {
        return Err(Error::Validation(format!("colour {i} (prime {p}) is never forced by its rule")));
    }
    let bound = dimension_bound(1, p, h.r as u64).as_u64().ok_or(Error::Overflow("rainbow threshold"))?;
    Ok(bound + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RainbowMode {
    Exact,
    Sampled { size: usize, trials: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct ColorCertificate {
    pub color: u8,
    pub prime: u64,
    pub realizable: bool,
    pub threshold: Option<u64>,
    pub dimension_bound: u64,
    pub relaxed_bound: String,
    pub edges: usize,
    pub certificate: Option<CertificateReport>,
    pub alpha: Option<usize>,
    pub alpha_exact: Option<bool>,
    pub alpha_nodes: Option<u64>,
    pub alpha_within_bound: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleFailure {
    pub trial: usize,
    pub missing: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleOutcome {
    pub size: usize,
    pub trials: usize,
    pub seed: u64,
    pub rainbow_trials: usize,
    /// For each colour, the number of trials lacking it.
    pub missing_counts: Vec<usize>,
    /// First failing trials, at most 100.
    pub failures: Vec<SampleFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RainbowReport {
    pub mode: RainbowMode,
    pub passed: bool,
    pub colors: Vec<ColorCertificate>,
    pub sampling: Option<SampleOutcome>,
}

/// Colours present among the pairs of `vertices`, as a bit-mask (bit c-1).
fn colors_present(coloring: &EdgeColoring, vertices: &[usize]) -> u64 {
    let n = coloring.header.n;
    let t = coloring.header.t;
    let all = if t == 64 { !0 } else { (1u64 << t) - 1 };
    let mut seen = 0u64;
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            let c = coloring.colors[pair_index(n, u, v)];
            if c as usize <= 64 {
                seen |= 1 << (c - 1);
            }
            if seen & all == all {
                return seen;
            }
        }
    }
    seen
}

fn sample_trials(coloring: &EdgeColoring, size: usize, trials: usize, seed: u64) -> Result<SampleOutcome> {
    let (n, t) = (coloring.header.n, coloring.header.t);
    if size < 2 {
        return Err(Error::invalid("sampled subgraphs need at least 2 vertices to carry a colour"));
    }
    if size > n {
        return Err(Error::invalid(format!("sample size {size} exceeds n = {n}")));
    }
    if t > 64 {
        return Err(Error::invalid("sampled rainbow checks support at most 64 colours"));
    }
    let missing: Vec<Vec<u8>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let mut vs = sample(&mut rng, n, size).into_vec();
            vs.sort_unstable();
            let seen = colors_present(coloring, &vs);
            (1..=t as u8).filter(|c| seen >> (c - 1) & 1 == 0).collect()
        })
        .collect();
    let mut missing_counts = vec![0; t];
    let mut failures = Vec::new();
    for (trial, m) in missing.iter().enumerate() {
        for &c in m {
            missing_counts[c as usize - 1] += 1;
        }
        if !m.is_empty() && failures.len() < 100 {
            failures.push(SampleFailure { trial, missing: m.clone() });
        }
    }
    Ok(SampleOutcome {
        size,
        trials,
        seed,
        rainbow_trials: missing.iter().filter(|m| m.is_empty()).count(),
        missing_counts,
        failures,
    })
}

/// Rainbow verification: per-colour certificates (and α within `budget`)
/// in exact mode, seeded random induced subgraphs in sampled mode.
pub fn verify_rainbow(
    coloring: &EdgeColoring,
    mode: RainbowMode,
    budget: Budget,
    cap: SizeCap,
) -> Result<RainbowReport> {
    let h = &coloring.header;
    let mut colors = Vec::new();
    for (idx, &p) in h.primes.iter().enumerate() {
        let i = idx as u8 + 1;
        let bound = dimension_bound(1, p, h.r as u64);
        let real = realizable(h.r, h.s, p);
        let mut cc = ColorCertificate {
            color: i,
            prime: p,
            realizable: real,
            threshold: if real { Some(rainbow_threshold(coloring, i)?) } else { None },
            dimension_bound: bound.as_u64().ok_or(Error::Overflow("dimension bound"))?,
            relaxed_bound: bound.relaxed.to_string(),
            edges: 0,
            certificate: None,
            alpha: None,
            alpha_exact: None,
            alpha_nodes: None,
            alpha_within_bound: None,
        };
        if mode == RainbowMode::Exact {
            let class = color_class(coloring, i, cap)?;
            cc.edges = class.graph.edge_count();
            let cert = RepresentationCertificate::from_graph(&class.graph, p)?;
            cc.certificate = Some(verify_certificate(&class.graph, &cert)?);
            let alpha = max_independent_set(&class.graph, budget);
            cc.alpha = Some(alpha.size);
            cc.alpha_exact = Some(alpha.exact);
            cc.alpha_nodes = Some(alpha.nodes);
            cc.alpha_within_bound = Some(alpha.size as u64 <= cc.dimension_bound);
        }
        colors.push(cc);
    }
    let sampling = match mode {
        RainbowMode::Exact => None,
        RainbowMode::Sampled { size, trials, seed } => Some(sample_trials(coloring, size, trials, seed)?),
    };
    let passed = match &sampling {
        Some(s) => s.rainbow_trials == s.trials,
        None => {
            colors.iter().all(|c| c.certificate.as_ref().is_some_and(|r| r.valid) && c.alpha_within_bound == Some(true))
        }
    };
    Ok(RainbowReport { mode, passed, colors, sampling })
}
