//! Implementing the Codemaker trait yourself, plus the guard wrapper:
//! guess validation, query budgets and memoized repeats.
//!
//! Run with: cargo run --example custom_codemaker

use permind::{
    black, solve, Code, Codemaker, Feedback, GameConfig, Guarded, OracleError, QueryBudget,
};

/// A codemaker that answers honestly but keeps its own tally of how often
/// each position was probed with the correct color.
struct TalliedCodemaker {
    config: GameConfig,
    secret: Code,
    hits_per_position: Vec<u32>,
}

impl Codemaker for TalliedCodemaker {
    fn config(&self) -> GameConfig {
        self.config
    }

    fn answer(&mut self, guess: &Code) -> Result<Feedback, OracleError> {
        for (i, (g, s)) in guess.iter().zip(self.secret.iter()).enumerate() {
            if g == s {
                self.hits_per_position[i] += 1;
            }
        }
        Ok(Feedback {
            black: black(guess, &self.secret)?,
        })
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = GameConfig::new(6, 6)?;
    let secret = config.validate_code(&[4, 6, 2, 5, 1, 3])?;
    let maker = TalliedCodemaker {
        config,
        secret: secret.clone(),
        hits_per_position: vec![0; config.n],
    };

    // The guard validates every guess, enforces a budget and records the
    // answered queries. Memoization answers repeated guesses from the
    // record; the solver deliberately re-issues a code now and then.
    let mut guarded = Guarded::new(maker, QueryBudget::limited(50), true);
    let transcript = solve(&mut guarded)?;
    println!("solved: {} in {} guesses", transcript.solved, transcript.queries);
    println!("answered by the codemaker (memoized repeats excluded): {}", guarded.used());

    let tally = &guarded.into_inner().hits_per_position;
    println!("times each position was probed correctly: {tally:?}");
    Ok(())
}
