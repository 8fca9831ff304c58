//! The search-space-reduction experiment: how much can the first one or two
//! answers be forced to shrink the set of consistent secrets?
//!
//! The depth-1 worst case approaches e from below. At depth 2 the factor
//! crosses e^2 exactly once in 2..=9 — at n = 6, where every choice of
//! second guess leaves some 96-permutation answer class (720/96 = 7.5).
//!
//! Run with: cargo run --release --example reduction_experiment

use permind::analysis::{reduction_factor, SecondQueryMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cap = 10_000_000;
    let e = std::f64::consts::E;

    println!("depth 1 (first query fixed to the identity):");
    println!("{:>3} {:>12} {:>10} {:>9}", "n", "factor", "survivors", "<= e?");
    for n in 2..=9 {
        let r = reduction_factor(n, 1, SecondQueryMode::Adaptive, cap)?;
        println!(
            "{n:>3} {:>7}/{:<4} {:>10} {:>9}",
            r.factor_numerator,
            r.factor_denominator,
            r.worst_survivors,
            r.factor <= e
        );
    }

    println!("\ndepth 2, three choices for the second query (e^2 = {:.6}):", e * e);
    println!(
        "{:>3} {:>10} {:>10} {:>10}",
        "n", "adaptive", "committed", "opening"
    );
    for n in 2..=7 {
        let factors: Vec<f64> = [
            SecondQueryMode::Adaptive,
            SecondQueryMode::Committed,
            SecondQueryMode::Opening,
        ]
        .iter()
        .map(|&m| reduction_factor(n, 2, m, cap).map(|r| r.factor))
        .collect::<Result<_, _>>()?;
        println!(
            "{n:>3} {:>10.6} {:>10.6} {:>10.6}",
            factors[0], factors[1], factors[2]
        );
    }

    let witness = reduction_factor(6, 2, SecondQueryMode::Adaptive, cap)?;
    println!(
        "\nn=6 witness: answers {:?} against second guess '{}' keep {} of {} secrets",
        witness.witness_answers,
        witness.witness_second_guess.unwrap(),
        witness.worst_survivors,
        witness.total
    );
    Ok(())
}
