//! Large games: seeded random secrets at n = k = 1000, with per-game
//! timing and the CSV statistics row.
//!
//! Run with: cargo run --release --example large_scale_benchmark

use std::time::Instant;

use permind::analysis::{verify_sampled, STATS_CSV_HEADER};
use permind::{bounds, random_code, solve_with, GameConfig, SolveOptions, StaticCodemaker};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = GameConfig::new(1000, 1000)?;
    let envelope = bounds(config);
    println!(
        "n=k=1000: paper bound {}, implementation bound {}",
        envelope.paper, envelope.implementation
    );

    for seed in 0..5u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let secret = random_code(config, &mut rng);
        let mut maker = StaticCodemaker::new(config, secret)?;
        let start = Instant::now();
        let run = solve_with(
            &mut maker,
            SolveOptions {
                record_transcript: false,
                trace: None,
                observer: None,
            },
        );
        println!(
            "seed {seed}: solved={} queries={} in {:.0} ms",
            run.solved,
            run.queries,
            start.elapsed().as_secs_f64() * 1000.0
        );
    }

    println!("\n{STATS_CSV_HEADER}");
    let report = verify_sampled(config, 20, 12345, None);
    println!("{}", report.csv_row());
    Ok(())
}
