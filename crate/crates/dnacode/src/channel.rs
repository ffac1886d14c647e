//! Single-edit channel and campaign runner: encode, corrupt, decode, tally.
//!
//! Campaigns are deterministic. Random mode derives an independent seed per
//! trial so every recorded failure replays standalone; exhaustive mode walks
//! every (codeword, event) pair and uses the codeword index as the seed
//! field of a failure record.

use crate::alphabet::{DnaSeq, Nucleotide};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum EditKind {
    Substitution,
    Insertion,
    Deletion,
}

/// One channel corruption. Positions are 1-based; insertion at position p
/// places the symbol before the current p-th symbol, so p = n+1 appends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct EditEvent {
    pub kind: EditKind,
    pub position: usize,
    pub symbol: Option<Nucleotide>,
}

impl EditEvent {
    pub fn substitution(position: usize, symbol: Nucleotide) -> EditEvent {
        EditEvent {
            kind: EditKind::Substitution,
            position,
            symbol: Some(symbol),
        }
    }

    pub fn insertion(position: usize, symbol: Nucleotide) -> EditEvent {
        EditEvent {
            kind: EditKind::Insertion,
            position,
            symbol: Some(symbol),
        }
    }

    pub fn deletion(position: usize) -> EditEvent {
        EditEvent {
            kind: EditKind::Deletion,
            position,
            symbol: None,
        }
    }
}

pub fn apply_edit(x: &DnaSeq, e: &EditEvent) -> Result<DnaSeq> {
    let n = x.len();
    let bad_pos = |limit: usize| {
        Error::InvalidParams(format!(
            "position {} outside 1..={} for {:?}",
            e.position, limit, e.kind
        ))
    };
    match e.kind {
        EditKind::Substitution => {
            if e.position < 1 || e.position > n {
                return Err(bad_pos(n));
            }
            let sym = e
                .symbol
                .ok_or_else(|| Error::InvalidParams("substitution needs a symbol".into()))?;
            if x.get(e.position - 1) == sym {
                return Err(Error::InvalidParams(
                    "substitution must change the symbol".into(),
                ));
            }
            let mut out = DnaSeq::new();
            for (i, s) in x.iter().enumerate() {
                out.push(if i == e.position - 1 { sym } else { s });
            }
            Ok(out)
        }
        EditKind::Insertion => {
            if e.position < 1 || e.position > n + 1 {
                return Err(bad_pos(n + 1));
            }
            let sym = e
                .symbol
                .ok_or_else(|| Error::InvalidParams("insertion needs a symbol".into()))?;
            let mut out = DnaSeq::new();
            for (i, s) in x.iter().enumerate() {
                if i == e.position - 1 {
                    out.push(sym);
                }
                out.push(s);
            }
            if e.position == n + 1 {
                out.push(sym);
            }
            Ok(out)
        }
        EditKind::Deletion => {
            if e.position < 1 || e.position > n {
                return Err(bad_pos(n));
            }
            if e.symbol.is_some() {
                return Err(Error::InvalidParams("deletion carries no symbol".into()));
            }
            let mut out = DnaSeq::new();
            for (i, s) in x.iter().enumerate() {
                if i != e.position - 1 {
                    out.push(s);
                }
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ErrorMode {
    None,
    Substitution,
    Edit,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FailureRecord {
    pub seed: u64,
    pub event: Option<EditEvent>,
    pub diagnosis: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialReport {
    pub trials: u64,
    pub successes: u64,
    pub failures: Vec<FailureRecord>,
}

impl TrialReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty() && self.successes == self.trials
    }
}

/// Per-trial seed: a splitmix-style spread keeps trial streams independent
/// while letting any failure replay from its recorded seed alone.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    (base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)).wrapping_add(0x632B_E593_86D1_B093)
}

/// Draw one channel event for a word of this length, or None in clean mode.
pub fn draw_random_event(rng: &mut ChaCha12Rng, word: &DnaSeq, mode: ErrorMode) -> Option<EditEvent> {
    let n = word.len();
    let kind = match mode {
        ErrorMode::None => return None,
        ErrorMode::Substitution => EditKind::Substitution,
        ErrorMode::Edit => [
            EditKind::Substitution,
            EditKind::Insertion,
            EditKind::Deletion,
        ][rng.random_range(0..3usize)],
    };
    Some(match kind {
        EditKind::Substitution => {
            let pos = rng.random_range(1..=n);
            let old = word.get(pos - 1).to_z4();
            let sym = Nucleotide::from_z4((old + rng.random_range(1..4u8)) % 4).unwrap();
            EditEvent::substitution(pos, sym)
        }
        EditKind::Insertion => {
            let pos = rng.random_range(1..=n + 1);
            let sym = Nucleotide::from_z4(rng.random_range(0..4u8)).unwrap();
            EditEvent::insertion(pos, sym)
        }
        EditKind::Deletion => EditEvent::deletion(rng.random_range(1..=n)),
    })
}

/// Run one seeded trial; None means success.
pub fn run_single_trial<M, S, D>(
    trial_seed: u64,
    mode: ErrorMode,
    sample: &mut S,
    decode: &mut D,
) -> Option<FailureRecord>
where
    M: PartialEq,
    S: FnMut(&mut ChaCha12Rng) -> (DnaSeq, M),
    D: FnMut(&DnaSeq) -> Result<M>,
{
    let mut rng = ChaCha12Rng::seed_from_u64(trial_seed);
    let (codeword, expected) = sample(&mut rng);
    let event = draw_random_event(&mut rng, &codeword, mode);
    let word = match &event {
        Some(e) => apply_edit(&codeword, e).expect("drawn events are valid"),
        None => codeword,
    };
    let diagnosis = match decode(&word) {
        Ok(got) if got == expected => return None,
        Ok(_) => "decoded to a different message".to_string(),
        Err(e) => e.to_string(),
    };
    Some(FailureRecord {
        seed: trial_seed,
        event,
        diagnosis,
    })
}

/// Random campaign: `trials` independent seeded trials.
pub fn run_random_campaign<M, S, D>(
    trials: u64,
    seed: u64,
    mode: ErrorMode,
    mut sample: S,
    mut decode: D,
) -> TrialReport
where
    M: PartialEq,
    S: FnMut(&mut ChaCha12Rng) -> (DnaSeq, M),
    D: FnMut(&DnaSeq) -> Result<M>,
{
    let mut failures = Vec::new();
    for i in 0..trials {
        let trial_seed = derive_seed(seed, i);
        if let Some(f) = run_single_trial(trial_seed, mode, &mut sample, &mut decode) {
            failures.push(f);
        }
    }
    failures.sort();
    TrialReport {
        trials,
        successes: trials - failures.len() as u64,
        failures,
    }
}

fn events_for(word: &DnaSeq, mode: ErrorMode) -> Vec<Option<EditEvent>> {
    let n = word.len();
    let mut events: Vec<Option<EditEvent>> = Vec::new();
    match mode {
        ErrorMode::None => events.push(None),
        ErrorMode::Substitution | ErrorMode::Edit => {
            for pos in 1..=n {
                let old = word.get(pos - 1);
                for sym in Nucleotide::ALL {
                    if sym != old {
                        events.push(Some(EditEvent::substitution(pos, sym)));
                    }
                }
            }
            if mode == ErrorMode::Edit {
                for pos in 1..=n + 1 {
                    for sym in Nucleotide::ALL {
                        events.push(Some(EditEvent::insertion(pos, sym)));
                    }
                }
                for pos in 1..=n {
                    events.push(Some(EditEvent::deletion(pos)));
                }
            }
        }
    }
    events
}

/// Exhaustive campaign over every (codeword, event) pair. The seed field of
/// a failure is the index into `words`.
pub fn run_exhaustive_campaign<M, D>(
    words: &[(DnaSeq, M)],
    mode: ErrorMode,
    cap: u64,
    mut decode: D,
) -> Result<TrialReport>
where
    M: PartialEq,
    D: FnMut(&DnaSeq) -> Result<M>,
{
    let total: u64 = words
        .iter()
        .map(|(w, _)| events_for(w, mode).len() as u64)
        .sum();
    if total > cap {
        return Err(Error::CapExceeded {
            needed: total.into(),
            cap,
        });
    }
    let mut failures = Vec::new();
    for (idx, (codeword, expected)) in words.iter().enumerate() {
        for event in events_for(codeword, mode) {
            let word = match &event {
                Some(e) => apply_edit(codeword, e)?,
                None => codeword.clone(),
            };
            let diagnosis = match decode(&word) {
                Ok(got) if got == *expected => continue,
                Ok(_) => "decoded to a different message".to_string(),
                Err(e) => e.to_string(),
            };
            failures.push(FailureRecord {
                seed: idx as u64,
                event,
                diagnosis,
            });
        }
    }
    failures.sort();
    Ok(TrialReport {
        trials: total,
        successes: total - failures.len() as u64,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dna_ecc::{find_vt_class, C2Code, C2Params, CLEpsParams};
    use num_bigint::BigUint;

    #[test]
    fn edit_examples() {
        let x: DnaSeq = "ACGT".parse().unwrap();
        assert_eq!(
            apply_edit(&x, &EditEvent::deletion(2)).unwrap().to_string(),
            "AGT"
        );
        assert_eq!(
            apply_edit(&x, &EditEvent::insertion(1, Nucleotide::T))
                .unwrap()
                .to_string(),
            "TACGT"
        );
        assert_eq!(
            apply_edit(&x, &EditEvent::substitution(4, Nucleotide::A))
                .unwrap()
                .to_string(),
            "ACGA"
        );
        assert_eq!(
            apply_edit(&x, &EditEvent::insertion(5, Nucleotide::G))
                .unwrap()
                .to_string(),
            "ACGTG"
        );
    }

    #[test]
    fn invalid_edits_rejected() {
        let x: DnaSeq = "ACGT".parse().unwrap();
        assert!(apply_edit(&x, &EditEvent::deletion(0)).is_err());
        assert!(apply_edit(&x, &EditEvent::deletion(5)).is_err());
        assert!(apply_edit(&x, &EditEvent::insertion(6, Nucleotide::A)).is_err());
        // identity substitution
        assert!(apply_edit(&x, &EditEvent::substitution(1, Nucleotide::A)).is_err());
        let mut e = EditEvent::deletion(1);
        e.symbol = Some(Nucleotide::A);
        assert!(apply_edit(&x, &e).is_err());
    }

    fn micro_code() -> C2Code {
        let cl = CLEpsParams::new(3, "1/5".parse().unwrap(), 5).unwrap();
        C2Code::new(C2Params { cl, q: 2, r: 2 }).unwrap()
    }

    fn micro_words(code: &C2Code) -> Vec<(DnaSeq, Vec<u64>)> {
        code.enumerate_codewords(100)
            .unwrap()
            .into_iter()
            .map(|w| {
                let m = code.decode(&w).unwrap();
                (w, m)
            })
            .collect()
    }

    #[test]
    fn clean_channel_is_identity() {
        let code = micro_code();
        let words = micro_words(&code);
        let report =
            run_exhaustive_campaign(&words, ErrorMode::None, 100, |w| code.decode(w)).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.trials, 2);
    }

    #[test]
    fn exhaustive_substitutions_all_corrected() {
        let code = micro_code();
        let words = micro_words(&code);
        let report =
            run_exhaustive_campaign(&words, ErrorMode::Substitution, 1000, |w| code.decode(w))
                .unwrap();
        assert!(report.is_clean(), "failures: {:?}", report.failures);
        assert_eq!(report.trials, 2 * 27 * 3);
    }

    #[test]
    fn exhaustive_edits_on_vt_subcode_all_corrected() {
        let code = micro_code();
        let all = micro_words(&code);
        let dna_words: Vec<DnaSeq> = all.iter().map(|(w, _)| w.clone()).collect();
        let (cls, members) = find_vt_class(&dna_words).unwrap();
        let sub: Vec<(DnaSeq, Vec<u64>)> = members
            .iter()
            .map(|&i| all[i].clone())
            .collect();
        let report = run_exhaustive_campaign(&sub, ErrorMode::Edit, 10_000, |w| {
            crate::dna_ecc::c3_decode_edit(w, &cls, &code)
        })
        .unwrap();
        assert!(report.is_clean(), "failures: {:?}", report.failures);
    }

    #[test]
    fn campaign_cap_enforced() {
        let code = micro_code();
        let words = micro_words(&code);
        assert!(matches!(
            run_exhaustive_campaign(&words, ErrorMode::Substitution, 10, |w| code.decode(w)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn random_campaign_deterministic_and_reproducible() {
        let code = micro_code();
        let sample = |rng: &mut ChaCha12Rng| {
            let m = vec![rng.random_range(0..2u64)];
            (code.encode(&m).unwrap(), m)
        };
        // a decoder blind to insdels: fails on any length change
        let run = || {
            run_random_campaign(200, 99, ErrorMode::Edit, sample, |w| code.decode(w))
        };
        let a = run();
        let b = run();
        assert_eq!(a, b);
        assert_eq!(a.successes + a.failures.len() as u64, a.trials);
        assert!(!a.failures.is_empty());
        // every failure replays standalone from its recorded seed
        for f in &a.failures {
            let mut s = sample;
            let replay = run_single_trial(f.seed, ErrorMode::Edit, &mut s, &mut |w| code.decode(w));
            assert_eq!(replay.as_ref(), Some(f));
        }
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn random_substitution_campaign_clean() {
        let code = micro_code();
        let report = run_random_campaign(
            300,
            5,
            ErrorMode::Substitution,
            |rng| {
                let m = vec![rng.random_range(0..2u64)];
                (code.encode(&m).unwrap(), m)
            },
            |w| code.decode(w),
        );
        assert!(report.is_clean());
    }

    #[test]
    fn seeds_spread() {
        let a = derive_seed(7, 0);
        let b = derive_seed(7, 1);
        let c = derive_seed(8, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        let _ = BigUint::from(a);
    }
}
