//! Polynomial-representation certificates for intersection graphs.
//!
//! A vertex `A` of channel `i` is represented by
//! `f_A(x) = Π_{u ∈ Z_q, u ≠ s mod q} (u − Σ_{j∈A} x_j^(i))` and the 0/1
//! point `c_A` that sets `x_j^(i) = 1` exactly for `j ∈ A`. Every
//! evaluation point is 0/1, so `f_A(c_B)` depends only on the weight
//! `w = |A ∩ B|` (same channel) or `w = 0` (different channels), and the
//! polynomials are never materialised. A valid certificate bounds the
//! Shannon capacity by `copies · Σ_{i<q} C(r, i)`.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexLabel};
use crate::math::{binomial, is_prime, KSubset};

/// `Π_{u ≠ s mod q} (u − w) mod q` for every weight residue `w`.
fn evaluation_table(q: u64, s: u64) -> Vec<u64> {
    let excluded = s % q;
    (0..q).map(|w| (0..q).filter(|&u| u != excluded).fold(1u64, |acc, u| acc * ((u + q - w) % q) % q)).collect()
}

/// `f_A(c_B) mod q` for vertices `(A, channel_a)` and `(B, channel_b)`.
pub fn fw_evaluate(a: &KSubset, channel_a: u32, b: &KSubset, channel_b: u32, q: u64, s: u64) -> u64 {
    let w = if channel_a == channel_b { a.intersection_size(b) as u64 % q } else { 0 };
    let excluded = s % q;
    (0..q).filter(|&u| u != excluded).fold(1u64, |acc, u| acc * ((u + q - w) % q) % q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelTable {
    pub id: u32,
    pub vertex_subsets: Vec<Vec<u32>>,
}

/// Everything needed to evaluate `f_A` at `c_B` for all vertex pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationCertificate {
    pub q: u64,
    pub r: u32,
    pub s: u32,
    pub channels: Vec<ChannelTable>,
}

impl RepresentationCertificate {
    /// Certificate over `Z_q` for a graph labeled with `s`-subsets of `[r]`.
    /// Vertices of one channel must be contiguous.
    pub fn from_graph(g: &Graph, q: u64) -> Result<Self> {
        let labels = g.labels().ok_or_else(|| Error::LabelMismatch("graph has no labels".into()))?;
        let first = labels.first().ok_or_else(|| Error::invalid("graph has no vertices"))?;
        let (r, s) = (first.subset.ground_size(), first.subset.len() as u32);
        let mut channels: Vec<ChannelTable> = Vec::new();
        for l in labels {
            match channels.last_mut() {
                Some(c) if c.id == l.channel => c.vertex_subsets.push(l.subset.elements().to_vec()),
                _ => {
                    if channels.iter().any(|c| c.id == l.channel) {
                        return Err(Error::LabelMismatch(format!("channel {} is not contiguous", l.channel)));
                    }
                    channels.push(ChannelTable { id: l.channel, vertex_subsets: vec![l.subset.elements().to_vec()] });
                }
            }
        }
        let cert = RepresentationCertificate { q, r, s, channels };
        cert.check()?;
        Ok(cert)
    }

    pub fn excluded_residue(&self) -> u64 {
        self.s as u64 % self.q
    }

    pub fn copies(&self) -> usize {
        self.channels.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.channels.iter().map(|c| c.vertex_subsets.len()).sum()
    }

    /// Structural invariants: `q` prime, `q ∤ s`, every vertex an `s`-subset of `[r]`.
    pub fn check(&self) -> Result<()> {
        if !is_prime(self.q) {
            return Err(Error::Validation(format!("modulus {} is not prime", self.q)));
        }
        if (self.s as u64).is_multiple_of(self.q) {
            return Err(Error::Validation(format!("modulus {} divides s = {}", self.q, self.s)));
        }
        for c in &self.channels {
            for sub in &c.vertex_subsets {
                let ks = KSubset::new(self.r, sub.clone())
                    .map_err(|e| Error::Validation(format!("channel {}: {e}", c.id)))?;
                if ks.len() != self.s as usize {
                    return Err(Error::Validation(format!(
                        "channel {}: subset of size {} where s = {}",
                        c.id,
                        ks.len(),
                        self.s
                    )));
                }
            }
        }
        Ok(())
    }

    fn labels(&self) -> Result<Vec<VertexLabel>> {
        let mut out = Vec::with_capacity(self.vertex_count());
        for c in &self.channels {
            for sub in &c.vertex_subsets {
                out.push(VertexLabel { channel: c.id, subset: KSubset::new(self.r, sub.clone())? });
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `f_v(c_v) = 0`.
    Diagonal,
    /// Non-adjacent `u ≠ v` with `f_u(c_v) ≠ 0`.
    NonEdge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub kind: ViolationKind,
    pub value: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub valid: bool,
    pub q: u64,
    pub vertices: usize,
    pub non_edges_checked: u64,
    pub violation_count: u64,
    /// The first violations in `(u, v)` order, at most [`MAX_LISTED_VIOLATIONS`].
    pub violations: Vec<Violation>,
}

pub const MAX_LISTED_VIOLATIONS: usize = 1000;

/// Full scan of the representation conditions over all vertices and all
/// non-adjacent pairs.
pub fn verify_certificate(g: &Graph, cert: &RepresentationCertificate) -> Result<CertificateReport> {
    cert.check()?;
    let labels = g.labels().ok_or_else(|| Error::LabelMismatch("graph has no labels".into()))?;
    let expected = cert.labels()?;
    if labels.len() != expected.len() {
        return Err(Error::LabelMismatch(format!(
            "graph has {} vertices, certificate {}",
            labels.len(),
            expected.len()
        )));
    }
    if let Some(v) = (0..labels.len()).find(|&v| labels[v] != expected[v]) {
        return Err(Error::LabelMismatch(format!("vertex {v} differs from the certificate")));
    }

    let (q, n) = (cert.q, g.n());
    let table = evaluation_table(q, cert.s as u64);
    let stride = (cert.r as usize).div_ceil(64);
    let mut masks = vec![0u64; n * stride];
    for (v, l) in labels.iter().enumerate() {
        masks[v * stride..(v + 1) * stride].copy_from_slice(&l.subset.to_words());
    }
    let channel: Vec<u32> = labels.iter().map(|l| l.channel).collect();
    let words = g.words_per_row();

    let per_row: Vec<(u64, u64, Vec<Violation>)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut checked = 0u64;
            let mut count = 0u64;
            let mut listed = Vec::new();
            let mut record = |v: usize, kind, value| {
                count += 1;
                if listed.len() < MAX_LISTED_VIOLATIONS {
                    listed.push(Violation { u, v, kind, value });
                }
            };
            let mu = &masks[u * stride..(u + 1) * stride];
            let weight = |v: usize| -> usize {
                if channel[u] != channel[v] {
                    return 0;
                }
                let mv = &masks[v * stride..(v + 1) * stride];
                mu.iter().zip(mv).map(|(a, b)| (a & b).count_ones() as usize).sum()
            };
            let own = table[weight(u) % q as usize];
            if own == 0 {
                record(u, ViolationKind::Diagonal, own);
            }
            let row = g.row(u);
            let first_word = (u + 1) / 64;
            for (wi, &bits) in row.iter().enumerate().take(words).skip(first_word) {
                let mut free = !bits;
                if wi == first_word {
                    free &= !0u64 << ((u + 1) % 64);
                }
                if wi == words - 1 && n % 64 != 0 {
                    free &= (1u64 << (n % 64)) - 1;
                }
                while free != 0 {
                    let v = wi * 64 + free.trailing_zeros() as usize;
                    free &= free - 1;
                    checked += 1;
                    let value = table[weight(v) % q as usize];
                    if value != 0 {
                        record(v, ViolationKind::NonEdge, value);
                    }
                }
            }
            (checked, count, listed)
        })
        .collect();

    let mut report = CertificateReport {
        valid: true,
        q,
        vertices: n,
        non_edges_checked: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    for (checked, count, listed) in per_row {
        report.non_edges_checked += checked;
        report.violation_count += count;
        let room = MAX_LISTED_VIOLATIONS - report.violations.len();
        report.violations.extend(listed.into_iter().take(room));
    }
    report.valid = report.violation_count == 0;
    Ok(report)
}

fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(v) {
        Ok(x) => s.serialize_u64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

/// `copies · Σ_{i<q} C(r, i)`, the dimension of the space holding the
/// representing polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionBound {
    pub copies: u64,
    pub q: u64,
    pub r: u64,
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
    /// The coarser `copies · C(r, q)`.
    #[serde(serialize_with = "ser_big")]
    pub relaxed: BigUint,
    /// Whether `value ≤ relaxed` for these parameters.
    pub relaxation_holds: bool,
}

impl DimensionBound {
    pub fn as_f64(&self) -> f64 {
        self.value.to_string().parse().unwrap_or(f64::INFINITY)
    }

    pub fn as_u64(&self) -> Option<u64> {
        u64::try_from(&self.value).ok()
    }
}

pub fn dimension_bound(copies: u64, q: u64, r: u64) -> DimensionBound {
    let per_copy: BigUint = (0..q).map(|i| binomial(r, i)).sum();
    let value = per_copy * copies;
    let relaxed = binomial(r, q) * copies;
    DimensionBound { copies, q, r, relaxation_holds: value <= relaxed, value, relaxed }
}
