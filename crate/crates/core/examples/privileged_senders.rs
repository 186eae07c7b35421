// Three senders; any two together are privileged. Builds the channel
// graphs and prints a certified bound for every coalition.
//
//     cargo run --release --example privileged_senders [r s]
//
// The default `8 4` runs in a blink; `16 8` builds 12870-vertex graphs.

use privcap::privileged::{bound_report, PrimeSource, PrivilegedSystem, SubsetFamily};
use privcap::{PrimeList, Result, SizeCap};

pub fn run_with(r: u32, s: u32) -> Result<()> {
    let cap = SizeCap::default();
    let family = SubsetFamily::threshold(3, 2)?;
    let sys = PrivilegedSystem::build(family, r, s, PrimeSource::Pool(PrimeList::new(vec![3, 5, 7])?), cap)?;
    println!("n = {} vertices per graph, A = {:?}", sys.n(), sys.assignment.a_sets());
    for w in &sys.params.warnings {
        println!("note: {}", w.message);
    }
    for x in 1u32..8 {
        let b = bound_report(&sys, x, cap)?;
        let upper = b.upper.as_ref().map_or("-".to_string(), |u| u.value.to_string());
        println!(
            "X = {:<10} {:<10?} lower {:>9.3}  upper {:>5}  ({})",
            format!("{:?}", b.coalition),
            b.verdict,
            b.lower.value,
            upper,
            b.lower.witness
        );
    }
    Ok(())
}

pub fn run() -> Result<()> {
    run_with(8, 4)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    match args[..] {
        [r, s] => run_with(r, s),
        _ => run(),
    }
}
