//! Symbol-error channel and the Monte Carlo decoding experiment.
//!
//! Each trial plants a fresh random message, corrupts exactly t positions,
//! decodes, and records whether the decoder returned the planted message.
//! Every trial draws from its own RNG stream derived from (seed, t, trial
//! index), so results are identical no matter how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{CodeInstance, Codeword, CoefficientVector};
use crate::decoder::{decode, Outcome, Strategy};
use crate::error::{Error, Result};

/// Replaces exactly t distinct positions with uniformly chosen *different*
/// values, so the planted error weight is exactly t. Returns the corrupted
/// word and the sorted error support.
pub fn corrupt<R: Rng + ?Sized>(
    word: &Codeword,
    t: usize,
    rng: &mut R,
) -> Result<(Codeword, Vec<usize>)> {
    if t > word.len() {
        return Err(Error::Parameter(format!(
            "error weight t = {t} exceeds the word length {}",
            word.len()
        )));
    }
    let mut entries = word.entries().to_vec();
    let spec = entries.first().ok_or_else(|| Error::Shape("empty word".into()))?.spec();
    let mut support = rand::seq::index::sample(rng, entries.len(), t).into_vec();
    support.sort_unstable();
    for &pos in &support {
        // old + u with u uniform in [1, q−1]: uniform over the q−1 values
        // different from the original.
        let offset = spec.element(rng.random_range(1..spec.order()))?;
        entries[pos] = entries[pos].add(offset)?;
    }
    Ok((Codeword::new(entries)?, support))
}

/// One decoding trial: what was planted, what happened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub t: usize,
    pub trial: u32,
    pub error_support: Vec<usize>,
    pub outcome: Outcome,
    /// True only when the outcome is decoded and the candidate equals the
    /// planted coefficient vector.
    pub correct: bool,
    pub sets_examined: u64,
}

/// Aggregated counts for one error weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRow {
    pub t: usize,
    pub trials: u32,
    pub decoded: u32,
    pub ambiguous: u32,
    pub failed: u32,
    /// Decoded, but to something other than the planted message.
    pub wrong: u32,
    /// (decoded − wrong) / trials.
    pub success_rate: f64,
}

/// A full experiment: per-weight aggregate rows plus every trial record.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub rows: Vec<SimulationRow>,
    pub records: Vec<TrialRecord>,
}

impl Simulation {
    /// The CSV table, one row per error weight.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,trials,decoded,ambiguous,failed,wrong,success_rate\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{:.4}\n",
                row.t, row.trials, row.decoded, row.ambiguous, row.failed, row.wrong,
                row.success_rate
            ));
        }
        out
    }
}

/// Runs `trials` decoding trials for every error weight in `ts`. Trial
/// (t, i) seeds its RNG stream as t·2³² + i; a sampled strategy draws a
/// fresh per-trial seed from that stream so different trials examine
/// independent effective sets.
pub fn simulate(
    code: &CodeInstance,
    ts: &[usize],
    trials: u32,
    strategy: Strategy,
    seed: u64,
) -> Result<Simulation> {
    if trials == 0 {
        return Err(Error::Parameter("need at least one trial".into()));
    }
    let spec = code.spec();
    let mut rows = Vec::with_capacity(ts.len());
    let mut records = Vec::with_capacity(ts.len() * trials as usize);
    for &t in ts {
        let (mut decoded, mut ambiguous, mut failed, mut wrong) = (0u32, 0u32, 0u32, 0u32);
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((t as u64) << 32) | trial as u64);
            let message = CoefficientVector::random(spec, code.dimension(), &mut rng);
            let codeword = code.encode(&message)?;
            let (received, error_support) = corrupt(&codeword, t, &mut rng)?;
            let trial_strategy = match strategy {
                Strategy::Exhaustive => Strategy::Exhaustive,
                Strategy::Sampled { k, .. } => Strategy::Sampled { k, seed: rng.random() },
            };
            let report = decode(code, &received, trial_strategy)?;
            let correct = report.outcome == Outcome::Decoded
                && report.candidate.as_ref() == Some(&message);
            match report.outcome {
                Outcome::Decoded => {
                    decoded += 1;
                    if !correct {
                        wrong += 1;
                    }
                }
                Outcome::Ambiguous => ambiguous += 1,
                Outcome::Failed => failed += 1,
            }
            records.push(TrialRecord {
                t,
                trial,
                error_support,
                outcome: report.outcome,
                correct,
                sets_examined: report.sets_examined,
            });
        }
        rows.push(SimulationRow {
            t,
            trials,
            decoded,
            ambiguous,
            failed,
            wrong,
            success_rate: f64::from(decoded - wrong) / f64::from(trials),
        });
    }
    Ok(Simulation { rows, records })
}
