// A polynomial-representation certificate: it verifies on the graph it
// was made for and pinpoints the pair when an edge goes missing.
//
//     cargo run --example certificate_check

use privcap::independence::max_independent_set;
use privcap::polyrep::{dimension_bound, verify_certificate, RepresentationCertificate};
use privcap::privileged::build_graph;
use privcap::{Budget, Result, SizeCap};

pub fn run() -> Result<()> {
    // 4-subsets of [8], adjacent when they share exactly one element (1 ≡ 4 mod 3)
    let mut g = build_graph(8, 4, &[3], 1, SizeCap::default())?;
    let cert = RepresentationCertificate::from_graph(&g, 3)?;
    let report = verify_certificate(&g, &cert)?;
    let bound = dimension_bound(1, 3, 8);
    println!("{} vertices, {} non-edges checked, valid: {}", report.vertices, report.non_edges_checked, report.valid);
    let alpha = max_independent_set(&g, Budget::default());
    println!("alpha = {} (exact: {}) <= dimension bound {}", alpha.size, alpha.exact, bound.value);

    let (u, v) = g.edges().next().expect("graph has edges");
    g.remove_edge(u, v);
    let broken = verify_certificate(&g, &cert)?;
    println!(
        "after deleting edge {{{u}, {v}}}: valid {}, first violation {:?}",
        broken.valid,
        broken.violations.first()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
