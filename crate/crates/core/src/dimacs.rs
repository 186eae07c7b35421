//! DIMACS-style edge files (`p edge <n> <m>`, `e <u> <v>`, 1-based) with an
//! optional JSON sidecar carrying vertex labels.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, SizeCap, VertexLabel};
use crate::math::KSubset;

pub const SIDECAR_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct SidecarVertex {
    channel: u32,
    ground_size: u32,
    subset: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    format_version: u32,
    vertices: Vec<SidecarVertex>,
}

pub fn write_dimacs<W: Write>(g: &Graph, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "p edge {} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_dimacs<R: Read>(input: R, cap: SizeCap) -> Result<Graph> {
    let reader = BufReader::new(input);
    let mut graph: Option<Graph> = None;
    let mut declared_edges = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let mut parts = line.split_ascii_whitespace();
        let bad = |what: &str| Error::parse(format!("line {}: {what}", lineno + 1));
        match parts.next() {
            None | Some("c") => continue,
            Some("p") => {
                if graph.is_some() {
                    return Err(bad("duplicate problem line"));
                }
                if parts.next() != Some("edge") {
                    return Err(bad("expected `p edge <n> <m>`"));
                }
                let n: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| bad("bad vertex count"))?;
                declared_edges = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| bad("bad edge count"))?;
                cap.check(n as u64)?;
                graph = Some(Graph::edgeless(n));
            }
            Some("e") => {
                let g = graph.as_mut().ok_or_else(|| bad("edge before problem line"))?;
                let mut endpoint = || -> Result<usize> {
                    let v: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| bad("bad endpoint"))?;
                    if v == 0 || v > g.n() {
                        return Err(bad("endpoint out of range"));
                    }
                    Ok(v - 1)
                };
                let (u, v) = (endpoint()?, endpoint()?);
                if u == v {
                    return Err(bad("self-loop"));
                }
                g.add_edge(u, v);
            }
            Some(other) => return Err(bad(&format!("unknown record `{other}`"))),
        }
    }
    let g = graph.ok_or_else(|| Error::parse("missing problem line"))?;
    if g.edge_count() != declared_edges {
        return Err(Error::parse(format!("header declares {declared_edges} edges, found {} distinct", g.edge_count())));
    }
    Ok(g)
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".labels.json");
    PathBuf::from(s)
}

/// Writes the edge file and, for labeled graphs, its `.labels.json` sidecar.
pub fn save_graph(path: &Path, g: &Graph) -> Result<()> {
    write_dimacs(g, File::create(path)?)?;
    if let Some(labels) = g.labels() {
        let sidecar = Sidecar {
            format_version: SIDECAR_FORMAT_VERSION,
            vertices: labels
                .iter()
                .map(|l| SidecarVertex {
                    channel: l.channel,
                    ground_size: l.subset.ground_size(),
                    subset: l.subset.elements().to_vec(),
                })
                .collect(),
        };
        let f = BufWriter::new(File::create(sidecar_path(path))?);
        serde_json::to_writer(f, &sidecar)?;
    }
    Ok(())
}

/// Reads an edge file, attaching labels when a sidecar exists next to it.
pub fn load_graph(path: &Path, cap: SizeCap) -> Result<Graph> {
    let g = read_dimacs(File::open(path)?, cap)?;
    let side = sidecar_path(path);
    if !side.exists() {
        return Ok(g);
    }
    let sidecar: Sidecar = serde_json::from_reader(BufReader::new(File::open(side)?))?;
    if sidecar.format_version != SIDECAR_FORMAT_VERSION {
        return Err(Error::parse(format!("unsupported sidecar version {}", sidecar.format_version)));
    }
    let labels = sidecar
        .vertices
        .into_iter()
        .map(|v| Ok(VertexLabel { channel: v.channel, subset: KSubset::new(v.ground_size, v.subset)? }))
        .collect::<Result<Vec<_>>>()?;
    g.with_labels(labels)
}
