//! Privileged-subset channel graphs, rainbow Ramsey colourings, and
//! certified brackets for their Shannon capacities.
//!
//! * [`math`]: primes, binomials, colex ranking of k-subsets, CRT.
//! * [`graph`]: dense bit-matrix graphs with union, strong product, powers.
//! * [`independence`]: exact branch-and-bound α, power-independence checks,
//!   capacity brackets.
//! * [`polyrep`]: polynomial-representation certificates and dimension bounds.
//! * [`privileged`]: the antichain/prime assignment and per-coalition bounds.
//! * [`ramsey`]: explicit colourings of `K_n` and rainbow verification.
//! * [`cli`]: the `privcap` command-line front end.

pub mod cli;
pub mod dimacs;
pub mod error;
pub mod graph;
pub mod independence;
pub mod math;
pub mod polyrep;
pub mod privileged;
pub mod ramsey;

pub use error::{Error, Result};
pub use graph::{Graph, SizeCap, VertexLabel, VertexSet};
pub use independence::{AlphaResult, Budget, CapacityBracket};
pub use math::{KSubset, PrimeList};

/// Runs `f` on a dedicated pool of `workers` threads. Every parallel kernel
/// in this crate produces identical output for any worker count.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool").install(f)
}
