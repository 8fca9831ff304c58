//! Codemaker side of the game: answering black-peg queries about a fixed
//! secret, guess validation, query budgets and transcripts.
//!
//! An honest codemaker fixes its secret before the first query and answers
//! every guess with `black(guess, secret)`. The solver only ever detects
//! dishonesty indirectly, as inconsistent feedback.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{black, Code, CodeError, Feedback, GameConfig};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("query budget of {limit} exhausted")]
    BudgetExceeded { limit: u64 },
    #[error("no parseable answer after {attempts} attempts")]
    MalformedAnswer { attempts: u32 },
    #[error("answer {answer} is outside 0..={max}")]
    AnswerOutOfRange { answer: i64, max: u32 },
    #[error("answer stream closed")]
    StreamClosed,
    #[error("answer stream error: {0}")]
    Io(#[from] io::Error),
}

/// A codemaker: fixes a secret (behind the interface) and answers black-peg
/// queries about it. One instance serves one game session at a time.
pub trait Codemaker {
    fn config(&self) -> GameConfig;
    fn answer(&mut self, guess: &Code) -> Result<Feedback, OracleError>;
}

/// Codemaker holding an in-memory secret.
#[derive(Debug, Clone)]
pub struct StaticCodemaker {
    config: GameConfig,
    secret: Code,
}

impl StaticCodemaker {
    pub fn new(config: GameConfig, secret: Code) -> Result<Self, CodeError> {
        let secret = config.validate_code(secret.as_slice())?;
        Ok(StaticCodemaker { config, secret })
    }

    pub fn secret(&self) -> &Code {
        &self.secret
    }
}

impl Codemaker for StaticCodemaker {
    fn config(&self) -> GameConfig {
        self.config
    }

    fn answer(&mut self, guess: &Code) -> Result<Feedback, OracleError> {
        let b = black(guess, &self.secret)?;
        Ok(Feedback { black: b })
    }
}

/// How many reads of the answer stream are attempted before a malformed
/// reply becomes an error.
const ANSWER_ATTEMPTS: u32 = 3;

/// Codemaker backed by a human (or script) on a line-oriented stream pair.
///
/// Each query writes `GUESS <seq>: c1 c2 ... cn` and reads one integer line
/// in `0..=n` as the black answer. A line that fails to parse re-prompts, up
/// to three reads in total; an integer out of range fails immediately.
pub struct InteractiveCodemaker<'a> {
    config: GameConfig,
    input: &'a mut dyn BufRead,
    output: &'a mut dyn Write,
    seq: u64,
}

impl<'a> InteractiveCodemaker<'a> {
    pub fn new(
        config: GameConfig,
        input: &'a mut dyn BufRead,
        output: &'a mut dyn Write,
    ) -> Self {
        InteractiveCodemaker {
            config,
            input,
            output,
            seq: 0,
        }
    }

    fn read_line(&mut self) -> Result<String, OracleError> {
        let mut line = String::new();
        let read = self.input.read_line(&mut line)?;
        if read == 0 {
            return Err(OracleError::StreamClosed);
        }
        Ok(line)
    }
}

impl Codemaker for InteractiveCodemaker<'_> {
    fn config(&self) -> GameConfig {
        self.config
    }

    fn answer(&mut self, guess: &Code) -> Result<Feedback, OracleError> {
        self.seq += 1;
        let max = self.config.n as u32;
        for _ in 0..ANSWER_ATTEMPTS {
            writeln!(self.output, "GUESS {}: {}", self.seq, guess)?;
            self.output.flush()?;
            let line = self.read_line()?;
            match line.trim().parse::<i64>() {
                Ok(answer) if (0..=max as i64).contains(&answer) => {
                    return Ok(Feedback {
                        black: answer as u32,
                    });
                }
                Ok(answer) => return Err(OracleError::AnswerOutOfRange { answer, max }),
                Err(_) => continue,
            }
        }
        Err(OracleError::MalformedAnswer {
            attempts: ANSWER_ATTEMPTS,
        })
    }
}

/// A cap on answered queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryBudget {
    limit: Option<u64>,
    used: u64,
}

impl QueryBudget {
    pub fn unlimited() -> Self {
        QueryBudget {
            limit: None,
            used: 0,
        }
    }

    pub fn limited(limit: u64) -> Self {
        QueryBudget {
            limit: Some(limit),
            used: 0,
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    fn charge(&mut self) -> Result<(), OracleError> {
        if let Some(limit) = self.limit {
            if self.used >= limit {
                return Err(OracleError::BudgetExceeded { limit });
            }
        }
        self.used += 1;
        Ok(())
    }
}

/// Wraps a codemaker with guess validation, budget accounting and a
/// transcript of answered queries.
///
/// With `memoize` enabled a repeated guess is answered from the record
/// without consuming budget or re-querying the inner codemaker. It defaults
/// to off so query counts reflect every guess actually issued.
pub struct Guarded<O: Codemaker> {
    inner: O,
    budget: QueryBudget,
    memoize: bool,
    memo: HashMap<Code, u32>,
    entries: Vec<TranscriptEntry>,
}

impl<O: Codemaker> Guarded<O> {
    pub fn new(inner: O, budget: QueryBudget, memoize: bool) -> Self {
        Guarded {
            inner,
            budget,
            memoize,
            memo: HashMap::new(),
            entries: Vec::new(),
        }
    }

    pub fn budget(&self) -> &QueryBudget {
        &self.budget
    }

    /// Queries that reached the inner codemaker.
    pub fn used(&self) -> u64 {
        self.budget.used()
    }

    /// Answered (non-memoized) queries in order.
    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: Codemaker> Codemaker for Guarded<O> {
    fn config(&self) -> GameConfig {
        self.inner.config()
    }

    fn answer(&mut self, guess: &Code) -> Result<Feedback, OracleError> {
        let config = self.inner.config();
        let guess = config.validate_code(guess.as_slice())?;
        if self.memoize {
            if let Some(&b) = self.memo.get(&guess) {
                return Ok(Feedback { black: b });
            }
        }
        self.budget.charge()?;
        let fb = self.inner.answer(&guess)?;
        if fb.black > config.n as u32 {
            return Err(OracleError::AnswerOutOfRange {
                answer: fb.black as i64,
                max: config.n as u32,
            });
        }
        self.entries.push(TranscriptEntry {
            seq: self.entries.len() as u64 + 1,
            guess: guess.clone(),
            black: fb.black,
        });
        if self.memoize {
            self.memo.insert(guess, fb.black);
        }
        Ok(fb)
    }
}

/// One answered query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub seq: u64,
    pub guess: Code,
    pub black: u32,
}

/// A full game record: ordered guess/answer pairs plus the outcome.
///
/// The JSON form is
/// `{"version":1,"n":..,"k":..,"entries":[{"seq":1,"guess":[..],"black":..},..],
///   "solved":..,"secret":[..]|null,"queries":..}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub version: u32,
    pub n: usize,
    pub k: usize,
    pub entries: Vec<TranscriptEntry>,
    pub solved: bool,
    pub secret: Option<Code>,
    pub queries: u64,
}

pub const TRANSCRIPT_VERSION: u32 = 1;

impl Transcript {
    pub fn config(&self) -> Result<GameConfig, CodeError> {
        GameConfig::new(self.n, self.k)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let t: Transcript = serde_json::from_str(text)?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn cfg(n: usize, k: usize) -> GameConfig {
        GameConfig::new(n, k).unwrap()
    }

    fn code(c: GameConfig, raw: &[u32]) -> Code {
        c.validate_code(raw).unwrap()
    }

    fn static_maker(n: usize, k: usize, secret: &[u32]) -> StaticCodemaker {
        let c = cfg(n, k);
        StaticCodemaker::new(c, code(c, secret)).unwrap()
    }

    #[test]
    fn static_codemaker_answers_black_counts() {
        let mut maker = static_maker(2, 2, &[2, 1]);
        let c = cfg(2, 2);
        assert_eq!(maker.answer(&code(c, &[1, 2])).unwrap().black, 0);
        assert_eq!(maker.answer(&code(c, &[2, 1])).unwrap().black, 2);

        let mut maker = static_maker(4, 4, &[2, 1, 4, 3]);
        let c = cfg(4, 4);
        assert_eq!(maker.answer(&code(c, &[4, 1, 2, 3])).unwrap().black, 2);
    }

    #[test]
    fn guarded_budget_blocks_second_query() {
        let mut g = Guarded::new(static_maker(2, 2, &[2, 1]), QueryBudget::limited(1), false);
        let c = cfg(2, 2);
        g.answer(&code(c, &[1, 2])).unwrap();
        match g.answer(&code(c, &[2, 1])) {
            Err(OracleError::BudgetExceeded { limit: 1 }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
        assert_eq!(g.used(), 1);
    }

    #[test]
    fn guarded_memoize_skips_repeat_charges() {
        let c = cfg(2, 2);
        let mut g = Guarded::new(static_maker(2, 2, &[2, 1]), QueryBudget::unlimited(), true);
        g.answer(&code(c, &[1, 2])).unwrap();
        g.answer(&code(c, &[1, 2])).unwrap();
        assert_eq!(g.used(), 1);
        assert_eq!(g.entries().len(), 1);

        let mut g = Guarded::new(static_maker(2, 2, &[2, 1]), QueryBudget::unlimited(), false);
        g.answer(&code(c, &[1, 2])).unwrap();
        g.answer(&code(c, &[1, 2])).unwrap();
        assert_eq!(g.used(), 2);
    }

    #[test]
    fn guarded_rejects_invalid_guesses() {
        let mut g = Guarded::new(static_maker(2, 2, &[2, 1]), QueryBudget::unlimited(), false);
        // Deserialization is the one door through which an unvalidated code
        // can enter; the guard must still catch it.
        let bad: Code = serde_json::from_str("[1,1]").unwrap();
        match g.answer(&bad) {
            Err(OracleError::Code(CodeError::RepeatedColor { .. })) => {}
            other => panic!("expected validation error, got {other:?}"),
        }
        let long: Code = serde_json::from_str("[1,2,3]").unwrap();
        match g.answer(&long) {
            Err(OracleError::Code(CodeError::LengthMismatch { .. })) => {}
            other => panic!("expected validation error, got {other:?}"),
        }
        assert_eq!(g.used(), 0, "rejected guesses must not consume budget");
    }

    fn interactive_session(replies: &str, n: usize, k: usize) -> (Result<u32, OracleError>, String) {
        let c = cfg(n, k);
        let mut input = Cursor::new(replies.as_bytes().to_vec());
        let mut output = Vec::new();
        let result = {
            let mut maker = InteractiveCodemaker::new(c, &mut input, &mut output);
            let guess = c.validate_code(&(1..=n as u32).collect::<Vec<_>>()).unwrap();
            maker.answer(&guess).map(|fb| fb.black)
        };
        (result, String::from_utf8(output).unwrap())
    }

    #[test]
    fn interactive_prompt_and_answer() {
        let (result, out) = interactive_session("0\n", 3, 3);
        assert_eq!(result.unwrap(), 0);
        assert_eq!(out, "GUESS 1: 1 2 3\n");
    }

    #[test]
    fn interactive_rejects_out_of_range_answer() {
        let (result, _) = interactive_session("7\n", 3, 3);
        match result {
            Err(OracleError::AnswerOutOfRange { answer: 7, max: 3 }) => {}
            other => panic!("expected out-of-range error, got {other:?}"),
        }
    }

    #[test]
    fn interactive_reprompts_then_fails_on_malformed() {
        let (result, out) = interactive_session("x\nx\nx\n", 3, 3);
        match result {
            Err(OracleError::MalformedAnswer { attempts: 3 }) => {}
            other => panic!("expected malformed error, got {other:?}"),
        }
        assert_eq!(out.matches("GUESS 1:").count(), 3, "re-prompts repeat the guess line");

        // A malformed line followed by a good one recovers.
        let (result, _) = interactive_session("oops\n2\n", 3, 3);
        assert_eq!(result.unwrap(), 2);
    }

    #[test]
    fn interactive_detects_closed_stream() {
        let (result, _) = interactive_session("", 3, 3);
        match result {
            Err(OracleError::StreamClosed) => {}
            other => panic!("expected stream-closed error, got {other:?}"),
        }
    }

    #[test]
    fn transcript_json_round_trips_byte_exactly() {
        let c = cfg(3, 4);
        let t = Transcript {
            version: TRANSCRIPT_VERSION,
            n: 3,
            k: 4,
            entries: vec![
                TranscriptEntry {
                    seq: 1,
                    guess: code(c, &[1, 2, 3]),
                    black: 0,
                },
                TranscriptEntry {
                    seq: 2,
                    guess: code(c, &[4, 1, 2]),
                    black: 3,
                },
            ],
            solved: true,
            secret: Some(code(c, &[4, 1, 2])),
            queries: 2,
        };
        let json = t.to_json();
        let back = Transcript::from_json(&json).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), json);
        // Field order and shape are part of the format.
        let compact = serde_json::to_string(&t).unwrap();
        assert!(compact.starts_with("{\"version\":1,\"n\":3,\"k\":4,\"entries\":[{\"seq\":1,"));
        assert!(compact.contains("\"solved\":true,\"secret\":[4,1,2],\"queries\":2"));
    }
}
