//! Locally balanced assembly: concatenating blocks of a globally balanced
//! substitution-correcting code yields local GC balance in every window
//! wider than two blocks, and a VT restriction recovers edit correction.

use super::concat::C2Code;
use crate::alphabet::DnaSeq;
use crate::ecc::{vt_decode_insdel, VtClass};
use crate::error::{Error, Result};
use crate::oracles::Eps;
use num_bigint::BigUint;

/// t copies of an inner substitution-correcting code of length s0, viewed
/// through sliding windows of width s.
pub struct C4Code {
    inner: C2Code,
    t: usize,
    s: usize,
    delta: Eps,
}

impl C4Code {
    pub fn new(inner: C2Code, t: usize, s: usize) -> Result<C4Code> {
        let s0 = inner.word_length();
        if t < 2 {
            return Err(Error::InvalidParams(format!(
                "t = {} leaves nothing to concatenate",
                t
            )));
        }
        if s <= 2 * s0 || s > t * s0 {
            return Err(Error::InvalidParams(format!(
                "window s = {} must satisfy 2*{} < s <= {}",
                s,
                s0,
                t * s0
            )));
        }
        let delta = inner.eps_effective().local_delta(s0, s)?;
        Ok(C4Code {
            inner,
            t,
            s,
            delta,
        })
    }

    pub fn inner(&self) -> &C2Code {
        &self.inner
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn word_length(&self) -> usize {
        self.t * self.inner.word_length()
    }

    /// Local balance tolerance (s0-1)(1-2*eps)/s + eps for the inner
    /// tolerance eps, exact.
    pub fn delta(&self) -> Eps {
        self.delta
    }

    /// |inner|^t.
    pub fn cardinality(&self) -> BigUint {
        self.inner.cardinality().pow(self.t as u32)
    }

    pub fn encode(&self, msgs: &[Vec<u64>]) -> Result<DnaSeq> {
        if msgs.len() != self.t {
            return Err(Error::InvalidParams(format!(
                "{} block messages given, expected {}",
                msgs.len(),
                self.t
            )));
        }
        let mut out = DnaSeq::new();
        for m in msgs {
            out = out.concat(&self.inner.encode(m)?);
        }
        Ok(out)
    }

    /// Correct up to one substitution (it lands in exactly one block) and
    /// return the per-block messages.
    pub fn decode(&self, received: &DnaSeq) -> Result<Vec<Vec<u64>>> {
        let s0 = self.inner.word_length();
        if received.len() != self.word_length() {
            return Err(Error::InvalidParams(format!(
                "received length {} differs from codeword length {}",
                received.len(),
                self.word_length()
            )));
        }
        (0..self.t)
            .map(|i| self.inner.decode(&received.subseq(i * s0, s0)))
            .collect()
    }

    /// Single-edit decoder once a VT class over the full length is fixed:
    /// insdel correction first when the length is off by one, then
    /// per-block substitution decoding.
    pub fn decode_edit(&self, received: &DnaSeq, cls: &VtClass) -> Result<Vec<Vec<u64>>> {
        let n = self.word_length();
        if cls.n() != n {
            return Err(Error::InvalidParams(format!(
                "class length {} differs from code length {}",
                cls.n(),
                n
            )));
        }
        if received.len() == n {
            return self.decode(received);
        }
        if received.len() + 1 == n || received.len() == n + 1 {
            let digits = vt_decode_insdel(received.to_z4().as_slice(), cls)?;
            let word = crate::alphabet::QuatSeq::from_digits(&digits)
                .unwrap()
                .to_dna();
            return self.decode(&word);
        }
        Err(Error::InvalidParams(format!(
            "received length {} is more than one edit from {}",
            received.len(),
            n
        )))
    }

    pub fn enumerate_codewords(&self, cap: u64) -> Result<Vec<DnaSeq>> {
        if self.cardinality() > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                needed: self.cardinality(),
                cap,
            });
        }
        let blocks = self.inner.enumerate_codewords(cap)?;
        let mut words = vec![DnaSeq::new()];
        for _ in 0..self.t {
            words = words
                .iter()
                .flat_map(|w| blocks.iter().map(|b| w.concat(b)))
                .collect();
        }
        Ok(words)
    }
}
