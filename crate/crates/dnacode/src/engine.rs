//! Enumerative codec for sliding-window constrained sequence families.
//!
//! One automaton realizes every constrained set the constructions need:
//! zero-dominant sets, run-length-limited sets, their intersections (with an
//! optional first-symbol restriction), and weight-windowed (balanced) sets.
//! Counting is exact big-integer arithmetic throughout; rank and unrank are
//! lexicographic with 0 < 1.

use crate::alphabet::BitSeq;
use crate::error::{Error, Result};
use crate::oracles::Eps;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashMap;

const NO_RUN: u8 = u8::MAX;

/// Final-weight restriction: either a fixed inclusive window, or the
/// balanced window derived from a tolerance at the target length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CounterRange {
    Fixed { lo: usize, hi: usize },
    Balanced(Eps),
}

impl CounterRange {
    fn resolve(&self, n: usize) -> (usize, usize) {
        match *self {
            CounterRange::Fixed { lo, hi } => (lo, hi),
            CounterRange::Balanced(eps) => eps.weight_bounds(n),
        }
    }
}

/// Description of a constrained family over a binary or quaternary alphabet.
///
/// For the quaternary alphabet, symbols are Z4 digits and the dominant class
/// is {1,2} (T and C) while the counter weighs {2,3} (C and G), matching the
/// DNA correspondence A=0, T=1, C=2, G=3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintSpec {
    alphabet: u8,
    dominant: Option<usize>,
    max_run: Option<usize>,
    counter: Option<CounterRange>,
    first_symbol_one: bool,
}

impl ConstraintSpec {
    fn validate(self) -> Result<Self> {
        if self.alphabet != 2 && self.alphabet != 4 {
            return Err(Error::InvalidParams(format!(
                "alphabet size {} not supported",
                self.alphabet
            )));
        }
        if let Some(m) = self.dominant {
            if m % 2 == 0 || !(3..=11).contains(&m) {
                return Err(Error::InvalidParams(format!(
                    "dominance window m = {} must be odd and within 3..=11",
                    m
                )));
            }
        }
        if let Some(l) = self.max_run {
            if l < 3 {
                return Err(Error::InvalidParams(format!(
                    "run-length limit {} must be at least 3",
                    l
                )));
            }
        }
        Ok(self)
    }

    fn plain(alphabet: u8) -> Self {
        ConstraintSpec {
            alphabet,
            dominant: None,
            max_run: None,
            counter: None,
            first_symbol_one: false,
        }
    }

    /// Binary sequences whose every m-window is majority zeros.
    pub fn zero_dominant(m: usize) -> Result<Self> {
        ConstraintSpec {
            dominant: Some(m),
            ..Self::plain(2)
        }
        .validate()
    }

    /// Binary sequences with no run longer than `ell`.
    pub fn rll(ell: usize) -> Result<Self> {
        ConstraintSpec {
            max_run: Some(ell),
            ..Self::plain(2)
        }
        .validate()
    }

    /// Zero-3-dominant and ell-run-length-limited: the family f(ell, n).
    pub fn f_set(ell: usize) -> Result<Self> {
        ConstraintSpec {
            dominant: Some(3),
            max_run: Some(ell),
            ..Self::plain(2)
        }
        .validate()
    }

    /// The subset of f(ell, n) whose first run has zero zeros, i.e. first
    /// symbol 1: the family f0(ell, n).
    pub fn f0_set(ell: usize) -> Result<Self> {
        ConstraintSpec {
            first_symbol_one: true,
            ..Self::f_set(ell)?
        }
        .validate()
    }

    /// Binary sequences whose weight stays within the balanced window for
    /// the target length.
    pub fn balanced(eps: Eps) -> Self {
        ConstraintSpec {
            counter: Some(CounterRange::Balanced(eps)),
            ..Self::plain(2)
        }
    }

    /// Binary sequences with an explicit final-weight window.
    pub fn weight_window(lo: usize, hi: usize) -> Self {
        ConstraintSpec {
            counter: Some(CounterRange::Fixed { lo, hi }),
            ..Self::plain(2)
        }
    }

    /// Quaternary sequences whose every m-window is majority {T,C}.
    pub fn tc_dominant(m: usize) -> Result<Self> {
        ConstraintSpec {
            dominant: Some(m),
            ..Self::plain(4)
        }
        .validate()
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet
    }

    fn in_dominant_class(&self, sym: u8) -> bool {
        match self.alphabet {
            2 => sym == 0,
            _ => sym == 1 || sym == 2,
        }
    }

    fn symbol_weight(&self, sym: u8) -> usize {
        match self.alphabet {
            2 => (sym == 1) as usize,
            _ => (sym == 2 || sym == 3) as usize,
        }
    }
}

/// Automaton state: dominance profile of the last m-1 symbols (class bits,
/// oldest in the high bit), current run, accumulated weight.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct State {
    profile: u16,
    profile_len: u8,
    run_sym: u8,
    run_len: u8,
    weight: u32,
    at_start: bool,
}

impl State {
    fn start() -> Self {
        State {
            profile: 0,
            profile_len: 0,
            run_sym: NO_RUN,
            run_len: 0,
            weight: 0,
            at_start: true,
        }
    }
}

/// A compiled constrained family at a fixed length: transition graph plus the
/// exact completion-count table N[state][remaining].
pub struct Codec {
    spec: ConstraintSpec,
    n: usize,
    states: Vec<State>,
    trans: Vec<[Option<u32>; 4]>,
    table: Vec<Vec<BigUint>>,
}

impl Codec {
    pub fn new(spec: &ConstraintSpec, n: usize) -> Result<Codec> {
        let spec = spec.clone().validate()?;
        let weight_cap = spec.counter.map(|c| c.resolve(n).1);

        // Forward closure from the start state. Weight is monotone, so any
        // state past the final window's upper bound is dead and pruned.
        let mut index: HashMap<State, u32> = HashMap::new();
        let mut states = vec![State::start()];
        index.insert(states[0], 0);
        let mut trans: Vec<[Option<u32>; 4]> = Vec::new();
        let mut head = 0usize;
        while head < states.len() {
            let s = states[head];
            let mut row = [None; 4];
            for sym in 0..spec.alphabet {
                if let Some(t) = step(&spec, &s, sym) {
                    if weight_cap.is_some_and(|cap| t.weight as usize > cap) {
                        continue;
                    }
                    let id = *index.entry(t).or_insert_with(|| {
                        states.push(t);
                        (states.len() - 1) as u32
                    });
                    row[sym as usize] = Some(id);
                }
            }
            trans.push(row);
            head += 1;
        }

        // N[s][k]: completions of length k from s that end accepted.
        let (lo, hi) = spec
            .counter
            .map(|c| c.resolve(n))
            .unwrap_or((0, usize::MAX));
        let mut table = vec![vec![BigUint::zero(); n + 1]; states.len()];
        for (id, s) in states.iter().enumerate() {
            // the empty sequence has no first symbol to restrict
            if s.at_start && spec.first_symbol_one {
                continue;
            }
            let w = s.weight as usize;
            if spec.counter.is_none() || (w >= lo && w <= hi) {
                table[id][0] = BigUint::one();
            }
        }
        for k in 1..=n {
            for id in 0..states.len() {
                let mut acc = BigUint::zero();
                for sym in 0..spec.alphabet as usize {
                    if let Some(t) = trans[id][sym] {
                        acc += &table[t as usize][k - 1];
                    }
                }
                table[id][k] = acc;
            }
        }

        Ok(Codec {
            spec,
            n,
            states,
            trans,
            table,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> &ConstraintSpec {
        &self.spec
    }

    /// Exact number of members at length n.
    pub fn count(&self) -> &BigUint {
        &self.table[0][self.n]
    }

    /// Lexicographic index of a member. Rejects non-members, naming the first
    /// violating position.
    pub fn rank(&self, x: &[u8]) -> Result<BigUint> {
        if x.len() != self.n {
            return Err(Error::InvalidParams(format!(
                "sequence length {} differs from codec length {}",
                x.len(),
                self.n
            )));
        }
        let mut state = 0u32;
        let mut r = BigUint::zero();
        for (i, &sym) in x.iter().enumerate() {
            if sym >= self.spec.alphabet {
                return Err(Error::BadSymbol {
                    pos: i,
                    ch: (b'0' + sym.min(9)) as char,
                });
            }
            for lower in 0..sym {
                if let Some(t) = self.trans[state as usize][lower as usize] {
                    r += &self.table[t as usize][self.n - 1 - i];
                }
            }
            state = self.trans[state as usize][sym as usize].ok_or(Error::NotMember {
                pos: i,
                reason: "window constraint violated".into(),
            })?;
        }
        if self.table[state as usize][0].is_zero() {
            return Err(Error::NotMember {
                pos: self.n,
                reason: "final weight outside the accepted window".into(),
            });
        }
        Ok(r)
    }

    /// The member with lexicographic index `r`. Inverse of `rank`.
    pub fn unrank(&self, r: &BigUint) -> Result<Vec<u8>> {
        if r >= self.count() {
            return Err(Error::InvalidParams(format!(
                "rank {} out of range, family has {} members",
                r,
                self.count()
            )));
        }
        let mut rem = r.clone();
        let mut state = 0u32;
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut chosen = None;
            for sym in 0..self.spec.alphabet {
                if let Some(t) = self.trans[state as usize][sym as usize] {
                    let block = &self.table[t as usize][self.n - 1 - i];
                    if &rem < block {
                        chosen = Some((sym, t));
                        break;
                    }
                    rem -= block;
                }
            }
            let (sym, t) = chosen.expect("rank bound guarantees a branch");
            out.push(sym);
            state = t;
        }
        Ok(out)
    }

    /// All members in lexicographic order. Rejects families larger than `cap`.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<Vec<u8>>> {
        if self.count() > &BigUint::from(cap) {
            return Err(Error::CapExceeded {
                needed: self.count().clone(),
                cap,
            });
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.n);
        self.walk(0, &mut prefix, &mut out);
        Ok(out)
    }

    fn walk(&self, state: u32, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let rem = self.n - prefix.len();
        if self.table[state as usize][rem].is_zero() {
            return;
        }
        if rem == 0 {
            out.push(prefix.clone());
            return;
        }
        for sym in 0..self.spec.alphabet {
            if let Some(t) = self.trans[state as usize][sym as usize] {
                prefix.push(sym);
                self.walk(t, prefix, out);
                prefix.pop();
            }
        }
    }

    /// Members as bit sequences; binary specs only.
    pub fn enumerate_bits(&self, cap: u64) -> Result<Vec<BitSeq>> {
        debug_assert_eq!(self.spec.alphabet, 2);
        Ok(self
            .enumerate(cap)?
            .into_iter()
            .map(|v| BitSeq::from_bits(&v).unwrap())
            .collect())
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }
}

fn step(spec: &ConstraintSpec, s: &State, sym: u8) -> Option<State> {
    if s.at_start && spec.first_symbol_one && sym != 1 {
        return None;
    }
    let mut next = State {
        at_start: false,
        ..*s
    };
    if let Some(m) = spec.dominant {
        let bit = spec.in_dominant_class(sym) as u16;
        let keep = (m - 1) as u8;
        if s.profile_len == keep {
            let window = (s.profile << 1) | bit;
            if 2 * window.count_ones() as usize <= m {
                return None;
            }
            next.profile = window & ((1 << keep) - 1);
        } else {
            next.profile = (s.profile << 1) | bit;
            next.profile_len = s.profile_len + 1;
        }
    }
    if let Some(l) = spec.max_run {
        if s.run_sym == sym {
            if s.run_len as usize + 1 > l {
                return None;
            }
            next.run_len = s.run_len + 1;
        } else {
            next.run_sym = sym;
            next.run_len = 1;
        }
    }
    if spec.counter.is_some() {
        next.weight = s.weight + spec.symbol_weight(sym) as u32;
    }
    Some(next)
}

/// Exact member count at a single length.
pub fn count(spec: &ConstraintSpec, n: usize) -> Result<BigUint> {
    Ok(Codec::new(spec, n)?.count().clone())
}

/// Exact member counts for every length 0..=n_max in one forward pass.
/// Balanced windows are re-resolved per length.
pub fn counts_upto(spec: &ConstraintSpec, n_max: usize) -> Result<Vec<BigUint>> {
    let spec = spec.clone().validate()?;
    let weight_cap = spec.counter.map(|c| match c {
        CounterRange::Fixed { hi, .. } => hi,
        // largest upper bound over all lengths up to n_max
        CounterRange::Balanced(eps) => eps.weight_bounds(n_max).1,
    });

    let mut index: HashMap<State, usize> = HashMap::new();
    let mut states = vec![State::start()];
    index.insert(states[0], 0);
    let mut reached: Vec<(usize, BigUint)> = vec![(0, BigUint::one())];
    let mut counts = Vec::with_capacity(n_max + 1);

    let accept_sum = |spec: &ConstraintSpec, states: &[State], reached: &[(usize, BigUint)], n: usize| {
        let window = spec.counter.map(|c| c.resolve(n));
        reached
            .iter()
            .filter(|(id, _)| {
                let s = states[*id];
                if s.at_start && spec.first_symbol_one {
                    return false;
                }
                match window {
                    None => true,
                    Some((lo, hi)) => {
                        let w = s.weight as usize;
                        w >= lo && w <= hi
                    }
                }
            })
            .fold(BigUint::zero(), |acc, (_, c)| acc + c)
    };

    counts.push(accept_sum(&spec, &states, &reached, 0));
    for n in 1..=n_max {
        let mut next: HashMap<usize, BigUint> = HashMap::new();
        for (id, cnt) in &reached {
            let s = states[*id];
            for sym in 0..spec.alphabet {
                if let Some(t) = step(&spec, &s, sym) {
                    if weight_cap.is_some_and(|cap| t.weight as usize > cap) {
                        continue;
                    }
                    let tid = *index.entry(t).or_insert_with(|| {
                        states.push(t);
                        states.len() - 1
                    });
                    *next.entry(tid).or_default() += cnt;
                }
            }
        }
        reached = next.into_iter().collect();
        reached.sort_by_key(|(id, _)| *id);
        counts.push(accept_sum(&spec, &states, &reached, n));
    }
    Ok(counts)
}

/// Dominant-eigenvalue estimate count(n_hi)/count(n_hi - 1), computed from
/// exact counts. `n_lo` is the smallest length at which the caller considers
/// the ratio meaningful; ratios are checked to exist from there on.
pub fn growth_rate(spec: &ConstraintSpec, n_lo: usize, n_hi: usize) -> Result<f64> {
    if n_hi <= n_lo || n_lo == 0 {
        return Err(Error::InvalidParams(format!(
            "growth window {}..{} is empty",
            n_lo, n_hi
        )));
    }
    let counts = counts_upto(spec, n_hi)?;
    if counts[n_lo..=n_hi].iter().any(|c| c.is_zero()) {
        return Err(Error::InvalidParams(
            "family has empty lengths in the growth window".into(),
        ));
    }
    Ok(big_ratio(&counts[n_hi], &counts[n_hi - 1]))
}

/// a/b as f64 via a 64-bit scale, safe for operands beyond f64 range.
pub fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let scaled = (a << 64u32) / b;
    scaled.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(64)
}

/// Base-2 logarithm of an exact count.
pub fn log2_big(a: &BigUint) -> f64 {
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = a.bits();
    if bits <= 53 {
        return (a.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 53;
    let top = (a >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

/// Largest real root of x^(ell+1) - sum_{i=0}^{ell-2} x^i, by bisection in
/// (1, 2) to 1e-9. This is the growth rate of the f0 recursion.
pub fn polynomial_root(ell: usize) -> Result<f64> {
    if ell < 3 {
        return Err(Error::InvalidParams(format!(
            "run-length limit {} must be at least 3",
            ell
        )));
    }
    let f = |x: f64| {
        let mut acc = x.powi(ell as i32 + 1);
        let mut pow = 1.0;
        for _ in 0..=(ell - 2) {
            acc -= pow;
            pow *= x;
        }
        acc
    };
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while hi - lo > 1e-12 {
        let mid = (lo + hi) / 2.0;
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) / 2.0)
}
