//! Brute-force constraint checkers. Deliberately the simplest correct
//! implementations; every encoder in the crate is tested against these.

use crate::alphabet::{BitSeq, DnaSeq};
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Balance tolerance as an exact nonnegative rational < 1/2.
///
/// Stored exactly so that weight-window boundaries never depend on float
/// rounding: eps = 1/10 at n = 20 must give the bound 8, not 9.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Eps {
    num: u64,
    den: u64,
}

impl Eps {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || 2 * num >= den {
            return Err(Error::InvalidParams(format!(
                "balance tolerance {}/{} outside [0, 1/2)",
                num, den
            )));
        }
        let g = gcd(num.max(1), den);
        Ok(Eps {
            num: num / g,
            den: den / g,
        })
    }

    pub fn zero() -> Self {
        Eps { num: 0, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// |w/n - 1/2| <= eps, decided in exact integer arithmetic.
    pub fn weight_within(&self, weight: usize, n: usize) -> bool {
        let dev = (2 * weight as i128 - n as i128).unsigned_abs();
        dev * self.den as u128 <= 2 * n as u128 * self.num as u128
    }

    /// Inclusive weight window [lo, hi] equivalent to `weight_within` at
    /// length n. May be empty (lo > hi) for tiny n.
    pub fn weight_bounds(&self, n: usize) -> (usize, usize) {
        let n = n as u128;
        let (num, den) = (self.num as u128, self.den as u128);
        let lo = (n * (den - 2 * num)).div_ceil(2 * den);
        let hi = (n * (den + 2 * num)) / (2 * den);
        (lo as usize, hi as usize)
    }

    /// The local-balance tolerance obtained from window relaxation:
    /// (s0-1)(1-2*eps)/s + eps, exact.
    pub fn local_delta(&self, s0: usize, s: usize) -> Result<Eps> {
        let num = (s0 as u64 - 1) * (self.den - 2 * self.num) + s as u64 * self.num;
        let den = s as u64 * self.den;
        Eps::new(num, den)
    }
}

impl FromStr for Eps {
    type Err = Error;

    /// Parses a decimal like "0.15" or a fraction like "3/20", exactly.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |t: &str| Error::InvalidParams(format!("cannot parse balance tolerance '{}'", t));
        if let Some((a, b)) = text.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| bad(text))?;
            let den: u64 = b.trim().parse().map_err(|_| bad(text))?;
            return Eps::new(num, den);
        }
        match text.split_once('.') {
            None => {
                let whole: u64 = text.trim().parse().map_err(|_| bad(text))?;
                Eps::new(whole, 1)
            }
            Some((whole, frac)) => {
                if frac.len() > 18 || frac.chars().any(|c| !c.is_ascii_digit()) {
                    return Err(bad(text));
                }
                let w: u64 = if whole.is_empty() {
                    0
                } else {
                    whole.trim().parse().map_err(|_| bad(text))?
                };
                let scale = 10u64.pow(frac.len() as u32);
                let f: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad(text))? };
                Eps::new(w * scale + f, scale)
            }
        }
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Which GC-balance requirement to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BalanceKind {
    /// |wt_GC/n - 1/2| <= eps for the whole sequence.
    Global { eps: Eps },
    /// Every aligned segment of length s is globally balanced; requires s | n.
    Partition { s: usize, eps: Eps },
    /// Every sliding window of length s is globally balanced; requires s <= n.
    Local { s: usize, eps: Eps },
}

/// True iff no two index-disjoint length-m windows of `x` are reverse
/// complements of each other. Checking windows of length exactly m suffices:
/// a reverse-complement match of length > m contains one of length m.
/// Disjoint means index-disjoint; adjacent windows are allowed, overlapping
/// matches are permitted per the definition.
pub fn is_m_ssa(x: &DnaSeq, m: usize) -> bool {
    assert!(m >= 1);
    let n = x.len();
    if n < 2 * m {
        return true;
    }
    for i in 0..=(n - 2 * m) {
        for j in (i + m)..=(n - m) {
            // window at j == RC(window at i)?
            let mut matched = true;
            for k in 0..m {
                if x.get(j + k) != x.get(i + m - 1 - k).complement() {
                    matched = false;
                    break;
                }
            }
            if matched {
                return false;
            }
        }
    }
    true
}

/// Longest run of equal symbols.
pub fn max_run_length(x: &DnaSeq) -> usize {
    x.max_run_length()
}

/// Every length-m window has strictly more than m/2 symbols in {T, C};
/// vacuously true when |x| < m. Rejects even m.
pub fn is_tc_dominant(x: &DnaSeq, m: usize) -> Result<bool> {
    check_odd(m)?;
    let classes: Vec<bool> = x.iter().map(|s| s.is_tc()).collect();
    Ok(windows_dominated(&classes, m))
}

/// Binary analog: every length-m window has strictly more than m/2 zeros.
pub fn is_zero_dominant(x: &BitSeq, m: usize) -> Result<bool> {
    check_odd(m)?;
    let classes: Vec<bool> = x.iter().map(|b| b == 0).collect();
    Ok(windows_dominated(&classes, m))
}

fn check_odd(m: usize) -> Result<()> {
    if m.is_multiple_of(2) || m == 0 {
        return Err(Error::InvalidParams(format!(
            "window length m = {} must be odd",
            m
        )));
    }
    Ok(())
}

fn windows_dominated(classes: &[bool], m: usize) -> bool {
    if classes.len() < m {
        return true;
    }
    classes
        .windows(m)
        .all(|w| 2 * w.iter().filter(|&&c| c).count() > m)
}

/// Checks the selected GC-balance requirement.
pub fn is_balanced(x: &DnaSeq, kind: &BalanceKind) -> Result<bool> {
    let n = x.len();
    match *kind {
        BalanceKind::Global { eps } => Ok(eps.weight_within(x.gc_weight(), n)),
        BalanceKind::Partition { s, eps } => {
            if s == 0 || !n.is_multiple_of(s) {
                return Err(Error::InvalidParams(format!(
                    "partition window {} does not divide length {}",
                    s, n
                )));
            }
            Ok((0..n / s).all(|i| {
                let w = (i * s..(i + 1) * s).filter(|&j| x.get(j).is_gc()).count();
                eps.weight_within(w, s)
            }))
        }
        BalanceKind::Local { s, eps } => {
            if s == 0 || s > n {
                return Err(Error::InvalidParams(format!(
                    "local window {} exceeds length {}",
                    s, n
                )));
            }
            // Sliding GC count over every window of length s.
            let mut w = (0..s).filter(|&j| x.get(j).is_gc()).count();
            if !eps.weight_within(w, s) {
                return Ok(false);
            }
            for i in 1..=(n - s) {
                w -= x.get(i - 1).is_gc() as usize;
                w += x.get(i + s - 1).is_gc() as usize;
                if !eps.weight_within(w, s) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
