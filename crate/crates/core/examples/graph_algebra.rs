// Disjoint unions, strong products and powers, and the DIMACS format.
//
//     cargo run --example graph_algebra

use privcap::dimacs::{read_dimacs, write_dimacs};
use privcap::graph::{complement, disjoint_union, strong_product};
use privcap::independence::max_independent_set;
use privcap::{Budget, Graph, Result, SizeCap};

fn alpha(g: &Graph) -> usize {
    max_independent_set(g, Budget::default()).size
}

pub fn run() -> Result<()> {
    let cap = SizeCap::default();
    let c5 = Graph::cycle(5);
    let p4 = Graph::path(4);

    // senders use either channel: independence numbers add
    let sum = disjoint_union(&[&c5, &p4], cap)?;
    println!("alpha(C5 + P4) = {} = {} + {}", alpha(&sum), alpha(&c5), alpha(&p4));

    // both channels at once: the product is at least the product
    let prod = strong_product(&c5, &p4, cap)?;
    println!("alpha(C5 x P4) = {} >= {}", alpha(&prod), alpha(&c5) * alpha(&p4));

    // C5 is self-complementary
    let co = complement(&c5);
    println!("C5 complement has {} edges, alpha {}", co.edge_count(), alpha(&co));

    let mut text = Vec::new();
    write_dimacs(&sum, &mut text)?;
    print!("{}", String::from_utf8_lossy(&text));
    assert_eq!(read_dimacs(&text[..], cap)?, sum);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
