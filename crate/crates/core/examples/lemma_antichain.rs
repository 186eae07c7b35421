// From a family of privileged sender sets to the prime sets `A_i`.
// A coalition's sets share a prime exactly when it contains no privileged set.
//
//     cargo run --example lemma_antichain

use privcap::math::next_primes;
use privcap::privileged::{build_assignment, coalition_status, ids_from_mask, SubsetFamily};
use privcap::Result;

pub fn run() -> Result<()> {
    let family = SubsetFamily::from_lists(4, &[vec![1, 2], vec![3, 4], vec![2, 3, 4]])?;
    let pool = next_primes(2, 8)?;
    let a = build_assignment(&family, &pool)?;
    a.check(&family)?;

    for y in a.assigned() {
        println!("maximal free set {:?} -> prime {}", y.y, y.prime);
    }
    for i in 1..=4 {
        println!("A_{i} = {:?}", a.a_set(i));
    }
    println!();
    for x in 1u32..1 << 4 {
        let st = coalition_status(&family, &a, x)?;
        let verdict = if st.contains_f { "privileged" } else { "restricted" };
        println!("{:<14} {:<11} common primes {:?}", format!("{:?}", ids_from_mask(x)), verdict, st.free_intersection);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
