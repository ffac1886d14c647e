//! Encoder for secondary-structure-avoiding, run-length-limited DNA codes.
//!
//! A codeword is assembled from two binary streams: the first-bit stream is a
//! zero-m-dominant sequence (making the DNA word TC-m-dominant, hence m-SSA),
//! the second-bit stream is a concatenation of guarded run-length-limited
//! blocks carrying the data payload. Both streams are addressed through the
//! enumerative codec, so the encoder maps plain integers and bits to DNA and
//! back with no search.

use crate::alphabet::{tau_decode, tau_encode, BitSeq, DnaSeq};
use crate::engine::{Codec, ConstraintSpec};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct C1Params {
    pub m: usize,
    pub ell: usize,
    pub n: usize,
    pub t: usize,
}

impl C1Params {
    pub fn new(m: usize, ell: usize, n: usize, t: usize) -> Result<C1Params> {
        if m.is_multiple_of(2) || !(3..=11).contains(&m) {
            return Err(Error::InvalidParams(format!(
                "m = {} must be odd and within 3..=11",
                m
            )));
        }
        if ell < 3 {
            return Err(Error::InvalidParams(format!("ell = {} must be >= 3", ell)));
        }
        if t == 0 {
            return Err(Error::InvalidParams("t must be >= 1".into()));
        }
        let within_bound = ell >= 64 || n < (1usize << (ell - 1)) + ell;
        if n < 2 || !within_bound {
            return Err(Error::InvalidParams(format!(
                "n = {} must satisfy 2 <= n <= 2^(ell-1) + ell - 1",
                n
            )));
        }
        Ok(C1Params { m, ell, n, t })
    }

    pub fn word_length(&self) -> usize {
        (self.n + 2) * self.t
    }

    pub fn y_len(&self) -> usize {
        (self.n - 1) * self.t
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C1Message {
    pub x_index: BigUint,
    pub y_bits: BitSeq,
}

/// Compiled encoder/decoder for one parameter set.
pub struct C1Code {
    params: C1Params,
    x_codec: Codec,
    rll_codec: Codec,
}

impl C1Code {
    pub fn new(params: C1Params) -> Result<C1Code> {
        let x_codec = Codec::new(
            &ConstraintSpec::zero_dominant(params.m)?,
            params.word_length(),
        )?;
        let rll_codec = Codec::new(&ConstraintSpec::rll(params.ell)?, params.n)?;
        // n <= 2^(ell-1) + ell - 1 guarantees this, but the count is exact
        // and cheap, so check the thing we actually rely on.
        let needed = BigUint::one() << (params.n - 1);
        if rll_codec.count() < &needed {
            return Err(Error::InvalidParams(format!(
                "only {} run-length-limited words of length {}, need {}",
                rll_codec.count(),
                params.n,
                needed
            )));
        }
        Ok(C1Code {
            params,
            x_codec,
            rll_codec,
        })
    }

    pub fn params(&self) -> &C1Params {
        &self.params
    }

    /// Number of admissible x_index values.
    pub fn x_count(&self) -> &BigUint {
        self.x_codec.count()
    }

    /// Exact code size: 2^((n-1)t) * |S0(m, (n+2)t)|.
    pub fn cardinality(&self) -> BigUint {
        (BigUint::one() << self.params.y_len()) * self.x_count()
    }

    /// Data bits addressable through x_index when framing binary payloads.
    pub fn x_data_bits(&self) -> u64 {
        self.x_count().bits() - 1
    }

    pub fn encode(&self, msg: &C1Message) -> Result<DnaSeq> {
        let p = &self.params;
        if &msg.x_index >= self.x_count() {
            return Err(Error::InvalidParams(format!(
                "x_index {} out of range, {} dominant sequences available",
                msg.x_index,
                self.x_count()
            )));
        }
        if msg.y_bits.len() != p.y_len() {
            return Err(Error::InvalidParams(format!(
                "y payload is {} bits, expected {}",
                msg.y_bits.len(),
                p.y_len()
            )));
        }
        let x = BitSeq::from_bits(&self.x_codec.unrank(&msg.x_index)?).unwrap();
        let mut second = BitSeq::zeros(0);
        let y = msg.y_bits.as_slice();
        for i in 0..p.t {
            let block = &y[i * (p.n - 1)..(i + 1) * (p.n - 1)];
            let encoded = self.rll_block_encode(&BitSeq::from_bits(block).unwrap())?;
            second = second.concat(&add_guards(&encoded));
        }
        tau_decode(&x, &second)
    }

    pub fn decode(&self, c: &DnaSeq) -> Result<C1Message> {
        let p = &self.params;
        if c.len() != p.word_length() {
            return Err(Error::NotCodeword(format!(
                "length {} differs from codeword length {}",
                c.len(),
                p.word_length()
            )));
        }
        let (first, second) = tau_encode(c);
        let x_index = self.x_codec.rank(first.as_slice()).map_err(|e| {
            Error::NotCodeword(format!("first-bit stream is not zero-dominant: {}", e))
        })?;
        let mut y_bits = BitSeq::zeros(0);
        let sec = second.as_slice();
        for i in 0..p.t {
            let block = &sec[i * (p.n + 2)..(i + 1) * (p.n + 2)];
            let inner = strip_guards(block, i)?;
            y_bits = y_bits.concat(&self.rll_block_decode(&inner, i)?);
        }
        Ok(C1Message { x_index, y_bits })
    }

    /// One redundant bit per block: the n-1 payload bits select a member of
    /// the run-length-limited set of length n by index.
    pub fn rll_block_encode(&self, y: &BitSeq) -> Result<BitSeq> {
        if y.len() != self.params.n - 1 {
            return Err(Error::InvalidParams(format!(
                "block is {} bits, expected {}",
                y.len(),
                self.params.n - 1
            )));
        }
        let bits = self.rll_codec.unrank(&y.to_uint())?;
        Ok(BitSeq::from_bits(&bits).unwrap())
    }

    fn rll_block_decode(&self, block: &BitSeq, i: usize) -> Result<BitSeq> {
        let idx = self.rll_codec.rank(block.as_slice()).map_err(|e| {
            Error::NotCodeword(format!("block {} is not run-length limited: {}", i, e))
        })?;
        if idx >= (BigUint::one() << (self.params.n - 1)) {
            return Err(Error::NotCodeword(format!(
                "block {} ranks above the payload range",
                i
            )));
        }
        Ok(BitSeq::from_uint(&idx, self.params.n - 1).unwrap())
    }
}

/// Prepend the complement of the first bit and append the complement of the
/// last. Guarded blocks never extend a run across a block boundary.
pub fn add_guards(y: &BitSeq) -> BitSeq {
    debug_assert!(!y.is_empty());
    let mut out = BitSeq::zeros(0);
    out.push(1 - y.get(0));
    for b in y.iter() {
        out.push(b);
    }
    out.push(1 - y.get(y.len() - 1));
    out
}

fn strip_guards(block: &[u8], i: usize) -> Result<BitSeq> {
    let n = block.len() - 2;
    if block[0] == block[1] || block[n + 1] == block[n] {
        return Err(Error::NotCodeword(format!(
            "block {} guard bits do not complement the payload edges",
            i
        )));
    }
    Ok(BitSeq::from_bits(&block[1..=n]).unwrap())
}

/// Rate limit as t grows: (n-1)/(n+2) + log2(growth of the zero-m-dominant
/// family).
pub fn asymptotic_rate(m: usize, n: usize) -> Result<f64> {
    let g = crate::engine::growth_rate(&ConstraintSpec::zero_dominant(m)?, 10, 400)?;
    Ok((n as f64 - 1.0) / (n as f64 + 2.0) + g.log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_bits(len: usize, rng: &mut ChaCha12Rng) -> BitSeq {
        let v: Vec<u8> = (0..len).map(|_| rng.random_range(0..2u8)).collect();
        BitSeq::from_bits(&v).unwrap()
    }

    fn random_message(code: &C1Code, rng: &mut ChaCha12Rng) -> C1Message {
        C1Message {
            x_index: BigUint::from(rng.random::<u64>()) % code.x_count(),
            y_bits: random_bits(code.params().y_len(), rng),
        }
    }

    #[test]
    fn block_encode_exhaustive_ell4_n11() {
        let code = C1Code::new(C1Params::new(3, 4, 11, 1).unwrap()).unwrap();
        let mut seen = std::collections::HashSet::new();
        for v in 0..1024u32 {
            let y = BitSeq::from_uint(&BigUint::from(v), 10).unwrap();
            let w = code.rll_block_encode(&y).unwrap();
            assert_eq!(w.len(), 11);
            assert!(w.max_run_length() <= 4);
            assert!(seen.insert(w.to_string()));
            assert_eq!(code.rll_block_decode(&w, 0).unwrap(), y);
        }
    }

    #[test]
    fn rll_count_at_boundary_length() {
        // n = 2^(ell-1) + ell - 1 with ell = 3
        let code = C1Code::new(C1Params::new(3, 3, 6, 1).unwrap()).unwrap();
        assert!(code.rll_codec.count() >= &BigUint::from(32u32));
        assert!(C1Params::new(3, 3, 7, 1).is_err());
    }

    #[test]
    fn guards_complement_edges() {
        let y = BitSeq::from_bits(&[0, 1, 0, 1]).unwrap();
        assert_eq!(add_guards(&y).to_string(), "101010");
        let y = BitSeq::from_bits(&[0, 0, 1]).unwrap();
        assert_eq!(add_guards(&y).to_string(), "10010");
    }

    #[test]
    fn guarded_concatenations_stay_rll() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let code = C1Code::new(C1Params::new(3, 3, 6, 1).unwrap()).unwrap();
        for _ in 0..500 {
            let a = random_bits(5, &mut rng);
            let b = random_bits(5, &mut rng);
            let ga = add_guards(&code.rll_block_encode(&a).unwrap());
            let gb = add_guards(&code.rll_block_encode(&b).unwrap());
            assert!(ga.concat(&gb).max_run_length() <= 3);
        }
    }

    #[test]
    fn random_codewords_satisfy_all_constraints() {
        let code = C1Code::new(C1Params::new(3, 4, 11, 3).unwrap()).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let msg = random_message(&code, &mut rng);
            let c = code.encode(&msg).unwrap();
            assert_eq!(c.len(), 39);
            assert!(oracles::is_tc_dominant(&c, 3).unwrap());
            assert!(oracles::is_m_ssa(&c, 3));
            assert!(c.max_run_length() <= 4);
            assert_eq!(code.decode(&c).unwrap(), msg);
        }
    }

    #[test]
    fn cardinality_matches_brute_force_decode_count() {
        // tiny instance: every length-8 DNA word, count decode successes
        let code = C1Code::new(C1Params::new(3, 4, 6, 1).unwrap()).unwrap();
        let expected = code.cardinality().to_u64().unwrap();
        assert_eq!(expected, 32 * 28);
        let mut ok = 0u64;
        for v in 0..(1u64 << 16) {
            let c = DnaSeq::from_code(v, 8);
            if let Ok(msg) = code.decode(&c) {
                ok += 1;
                assert_eq!(code.encode(&msg).unwrap(), c);
            }
        }
        assert_eq!(ok, expected);
    }

    #[test]
    fn asymptotic_rate_matches_reference_value() {
        let r = asymptotic_rate(3, 11).unwrap();
        assert!((r - 1.3206).abs() < 2e-3, "rate {}", r);
    }

    #[test]
    fn decode_rejects_malformed_words() {
        let code = C1Code::new(C1Params::new(3, 4, 6, 1).unwrap()).unwrap();
        let msg = C1Message {
            x_index: BigUint::from(5u32),
            y_bits: BitSeq::from_bits(&[1, 0, 1, 1, 0]).unwrap(),
        };
        let c = code.encode(&msg).unwrap();
        // wrong length
        assert!(matches!(
            code.decode(&c.subseq(0, 7)),
            Err(Error::NotCodeword(_))
        ));
        // break dominance: A has first bit 1
        let mut broken: Vec<_> = c.iter().collect();
        for s in broken.iter_mut().take(3) {
            *s = crate::alphabet::Nucleotide::A;
        }
        let bad: DnaSeq = broken.into_iter().collect();
        assert!(matches!(code.decode(&bad), Err(Error::NotCodeword(_))));
    }

    #[test]
    fn encode_rejects_out_of_range_messages() {
        let code = C1Code::new(C1Params::new(3, 4, 6, 1).unwrap()).unwrap();
        let msg = C1Message {
            x_index: code.x_count().clone(),
            y_bits: BitSeq::zeros(5),
        };
        assert!(matches!(code.encode(&msg), Err(Error::InvalidParams(_))));
        let msg = C1Message {
            x_index: BigUint::from(0u32),
            y_bits: BitSeq::zeros(4),
        };
        assert!(matches!(code.encode(&msg), Err(Error::InvalidParams(_))));
    }
}
