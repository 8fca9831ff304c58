//! Worst-case query envelopes: the published bound next to the envelope
//! this implementation enforces, across a range of sizes.
//!
//! Run with: cargo run --example query_bounds

use permind::{bounds, GameConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>5} {:>5} {:>12} {:>12}", "n", "k", "paper", "impl");
    for n in [2usize, 4, 8, 16, 17, 32, 64, 128, 1000] {
        let b = bounds(GameConfig::new(n, n)?);
        println!("{n:>5} {n:>5} {:>12} {:>12}", b.paper, b.implementation);
    }
    println!();
    for (n, k) in [(4, 6), (4, 8), (8, 16), (16, 64), (100, 1000)] {
        let b = bounds(GameConfig::new(n, k)?);
        println!("{n:>5} {k:>5} {:>12} {:>12}", b.paper, b.implementation);
    }
    println!(
        "\nThe envelopes differ only where the first-position search can cost\n\
         2*ceil(log2 n) instead of n/2 + 1 guesses (small n; in 16..=64 only\n\
         n = 17), and for k > n where the pivot-less fallback search may\n\
         replace the cheaper pivot search."
    );
    Ok(())
}
