// An explicit colouring of K_n where every large enough vertex set sees
// every colour.
//
//     cargo run --release --example rainbow_coloring [r s]
//
// Defaults to `12 5` with primes 2, 3; try `16 8` (with primes 3, 5, 7 chosen
// automatically) for the 12870-vertex instance.

use privcap::ramsey::{audit_rules, build_coloring, check_well_defined, verify_rainbow, FallbackRule, RainbowMode};
use privcap::{Budget, PrimeList, Result, SizeCap};

pub fn run_with(r: u32, s: u32, primes: Vec<u64>, sample: usize) -> Result<()> {
    let cap = SizeCap::default();
    let coloring = build_coloring(r, s, &PrimeList::new(primes)?, FallbackRule::RankSumModT, cap)?;
    let wd = check_well_defined(&coloring);
    println!("n = {}, {} colours, well defined: {}", coloring.n(), coloring.t(), wd.well_defined);
    for class in &wd.residue_classes {
        println!("  {class:?}");
    }
    println!("stored colours match the rules: {}", audit_rules(&coloring).mismatch_count == 0);

    let exact = verify_rainbow(&coloring, RainbowMode::Exact, Budget::nodes(100_000), cap)?;
    for c in &exact.colors {
        println!(
            "colour {} (prime {}): certificate valid {:?}, any {:?} vertices see it",
            c.color,
            c.prime,
            c.certificate.as_ref().map(|r| r.valid),
            c.threshold
        );
    }
    let mode = RainbowMode::Sampled { size: sample, trials: 200, seed: 7 };
    let sampled = verify_rainbow(&coloring, mode, Budget::default(), cap)?;
    let out = sampled.sampling.expect("sampled mode");
    println!("{}/{} random {sample}-sets are rainbow", out.rainbow_trials, out.trials);
    Ok(())
}

pub fn run() -> Result<()> {
    run_with(12, 5, vec![2, 3], 80)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    match args[..] {
        [16, 8] => run_with(16, 8, vec![3, 5, 7], 138),
        [r, s] => run_with(r, s, vec![2, 3], 80),
        _ => run(),
    }
}
