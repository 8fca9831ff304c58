//! Feedback fundamentals: black/white counts, the cyclic shift family and
//! the answer-sum identity that powers the solver's opening.
//!
//! Run with: cargo run --example feedback_basics

use permind::{black, enumerate_secrets, shift_family, white, GameConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = GameConfig::new(4, 4)?;
    let guess = config.validate_code(&[4, 1, 2, 3])?;
    let secret = config.validate_code(&[2, 1, 4, 3])?;
    println!("guess  : {guess}");
    println!("secret : {secret}");
    println!("black  : {}", black(&guess, &secret)?);
    println!("white  : {}", white(&guess, &secret)?);

    // The k initial codes: right-circular shifts of the identity, truncated
    // to n positions. Every color appears exactly once per position.
    let config = GameConfig::new(3, 5)?;
    let family = shift_family(config);
    println!("\nshift family for n=3, k=5:");
    for (j, code) in family.codes().enumerate() {
        println!("  code {}: {code}", j + 1);
    }

    // Consequence: for any secret, the black answers across the whole
    // family sum to exactly n. The solver buys its last answer for free
    // with this identity.
    println!("\nanswer sums over all 60 secrets (always n=3):");
    let codes: Vec<_> = family.codes().collect();
    let mut sums = std::collections::BTreeSet::new();
    for secret in enumerate_secrets(config, 1_000)? {
        let total: u32 = codes.iter().map(|c| black(c, &secret).unwrap()).sum();
        sums.insert(total);
    }
    println!("  distinct sums seen: {sums:?}");
    Ok(())
}
