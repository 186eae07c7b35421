// The pentagon: α(C5) = 2 but α(C5 ⊠ C5) = 5, so two uses of the channel
// carry more than twice what one use does.
//
//     cargo run --example pentagon_capacity

use privcap::graph::power;
use privcap::independence::{capacity_bracket, clique_cover_upper, is_independent_in_power, max_independent_set};
use privcap::{Budget, Graph, Result, SizeCap};

pub fn run() -> Result<()> {
    let c5 = Graph::cycle(5);
    let one = max_independent_set(&c5, Budget::default());
    println!("alpha(C5)      = {} (exact: {})", one.size, one.exact);

    let sq = power(&c5, 2, SizeCap::default())?;
    let two = max_independent_set(&sq, Budget::default());
    println!("alpha(C5^2)    = {} (exact: {})", two.size, two.exact);

    // Shannon's code: (i, 2i mod 5)
    let code: Vec<Vec<usize>> = (0..5).map(|i| vec![i, 2 * i % 5]).collect();
    println!("code {:?} independent: {}", code, is_independent_in_power(&c5, 2, &code)?);

    let b = capacity_bracket(&c5, 2, Some(clique_cover_upper(&c5)), Budget::default(), SizeCap::default())?;
    println!("capacity in [{:.6}, {}]  ({})", b.lower, b.upper_value(), b.upper_certificate.unwrap_or_default());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
