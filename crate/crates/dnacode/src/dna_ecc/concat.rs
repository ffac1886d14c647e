//! Hamming concatenation over the extended inner code, and the VT-class
//! intersection that upgrades substitution correction to single-edit
//! correction.

use super::cl_eps::{extend, unextend, CLEpsParams, ClEpsCode};
use crate::alphabet::{BitSeq, DnaSeq, QuatSeq};
use crate::ecc::{vt_decode_insdel, vt_syndromes, HammingCode, VtClass};
use crate::error::{Error, Result};
use crate::oracles::Eps;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct C2Params {
    pub cl: CLEpsParams,
    pub q: u64,
    pub r: usize,
}

/// Concatenated code: each Hamming symbol over F_q is carried by one
/// extended inner block of n+4 DNA symbols.
pub struct C2Code {
    params: C2Params,
    inner: ClEpsCode,
    ham: HammingCode,
}

impl C2Code {
    pub fn new(params: C2Params) -> Result<C2Code> {
        let inner = ClEpsCode::new(params.cl)?;
        if BigUint::from(params.q) > inner.cardinality() {
            return Err(Error::InvalidParams(format!(
                "q = {} exceeds the inner code size {}",
                params.q,
                inner.cardinality()
            )));
        }
        let ham = HammingCode::new(params.q, params.r)?;
        Ok(C2Code { params, inner, ham })
    }

    pub fn params(&self) -> &C2Params {
        &self.params
    }

    pub fn inner(&self) -> &ClEpsCode {
        &self.inner
    }

    /// Number of blocks t = (q^r - 1)/(q - 1).
    pub fn t(&self) -> usize {
        self.ham.t()
    }

    /// Message length in field symbols.
    pub fn k(&self) -> usize {
        self.ham.k()
    }

    pub fn block_length(&self) -> usize {
        self.params.cl.n + 4
    }

    /// Codeword length N = (n+4) t.
    pub fn word_length(&self) -> usize {
        self.block_length() * self.t()
    }

    /// q^k codewords.
    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.params.q).pow(self.k() as u32)
    }

    /// (t/N)(1 - r/t) log2 q.
    pub fn rate(&self) -> f64 {
        self.k() as f64 * (self.params.q as f64).log2() / self.word_length() as f64
    }

    /// Tight global balance tolerance of the code: the inner window shifted
    /// by one guaranteed GC per bracket pair, +2 GC in +4 symbols per block.
    pub fn eps_effective(&self) -> Eps {
        let n = self.params.cl.n;
        let (lo, hi) = self.params.cl.eps.weight_bounds(n);
        let dev = (n as u64 - 2 * lo as u64).max(2 * hi as u64 - n as u64);
        Eps::new(dev, 2 * (n as u64 + 4)).expect("block deviation below half")
    }

    /// Injective map F_q -> extended inner blocks: the symbol splits into
    /// (c_index, data) by mixed radix with 2^(n-1) as the low base.
    fn pi(&self, sym: u64) -> DnaSeq {
        let base = BigUint::one() << (self.params.cl.n - 1);
        let sym = BigUint::from(sym);
        let data = BitSeq::from_uint(&(&sym % &base), self.params.cl.n - 1).unwrap();
        let y = self.inner.encode(&(sym / base), &data).unwrap();
        extend(&y)
    }

    /// Inverse of `pi`; any deviation from the exact image is an error.
    fn pi_inv(&self, block: &DnaSeq) -> Result<u64> {
        let y = unextend(block)?;
        let (c_index, data) = self.inner.decode(&y)?;
        let sym = (c_index << (self.params.cl.n - 1)) + data.to_uint();
        sym.to_u64()
            .filter(|&s| s < self.params.q)
            .ok_or_else(|| Error::NotCodeword("block ranks above the field".into()))
    }

    pub fn encode(&self, msg: &[u64]) -> Result<DnaSeq> {
        let symbols = self.ham.encode(msg)?;
        let mut out = DnaSeq::from_nucleotides(&[]);
        for &s in &symbols {
            out = out.concat(&self.pi(s));
        }
        Ok(out)
    }

    /// Correct up to one DNA substitution and return the message. A block
    /// that fails to invert is treated as an erasure; two failing blocks
    /// exceed the guarantee and are a declared failure.
    pub fn decode(&self, received: &DnaSeq) -> Result<Vec<u64>> {
        let bl = self.block_length();
        if received.len() != self.word_length() {
            return Err(Error::InvalidParams(format!(
                "received length {} differs from codeword length {}",
                received.len(),
                self.word_length()
            )));
        }
        let mut symbols = vec![0u64; self.t()];
        let mut flagged = Vec::new();
        for i in 0..self.t() {
            match self.pi_inv(&received.subseq(i * bl, bl)) {
                Ok(s) => symbols[i] = s,
                Err(_) => flagged.push(i),
            }
        }
        if flagged.len() > 1 {
            return Err(Error::DecodeFailure(format!(
                "{} blocks unreadable, at most one substitution is correctable",
                flagged.len()
            )));
        }
        self.ham.decode(&symbols, &flagged)
    }

    /// All codewords in message order. Rejects codes larger than `cap`.
    pub fn enumerate_codewords(&self, cap: u64) -> Result<Vec<DnaSeq>> {
        if self.cardinality() > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                needed: self.cardinality(),
                cap,
            });
        }
        let q = self.params.q;
        let mut msg = vec![0u64; self.k()];
        let mut out = Vec::new();
        loop {
            out.push(self.encode(&msg)?);
            let mut i = self.k();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                msg[i] += 1;
                if msg[i] < q {
                    break;
                }
                msg[i] = 0;
            }
        }
    }
}

/// Bucket codewords by VT syndromes and return the fullest class with the
/// indices of its members. Ties break toward the smallest (a, b).
pub fn find_vt_class(words: &[DnaSeq]) -> Result<(VtClass, Vec<usize>)> {
    let Some(first) = words.first() else {
        return Err(Error::InvalidParams("empty code".into()));
    };
    let n = first.len();
    if words.iter().any(|w| w.len() != n) {
        return Err(Error::InvalidParams("codeword lengths differ".into()));
    }
    let mut buckets: HashMap<(u64, u8), Vec<usize>> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        buckets.entry(vt_syndromes(w.to_z4().as_slice())).or_default().push(i);
    }
    let ((a, b), members) = buckets
        .into_iter()
        .max_by_key(|((a, b), v)| (v.len(), std::cmp::Reverse((*a, *b))))
        .unwrap();
    Ok((VtClass::new(n, a, b)?, members))
}

/// Sampling fallback for codes too large to enumerate: draws uniform
/// messages and reports the empirically fullest class with its hit count.
pub fn find_vt_class_sampled(
    code: &C2Code,
    samples: u64,
    seed: u64,
) -> Result<(VtClass, u64)> {
    if samples == 0 {
        return Err(Error::InvalidParams("need at least one sample".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut buckets: HashMap<(u64, u8), u64> = HashMap::new();
    for _ in 0..samples {
        let msg: Vec<u64> = (0..code.k())
            .map(|_| rng.random_range(0..code.params().q))
            .collect();
        let w = code.encode(&msg)?;
        *buckets.entry(vt_syndromes(w.to_z4().as_slice())).or_default() += 1;
    }
    let ((a, b), hits) = buckets
        .into_iter()
        .max_by_key(|(k, v)| (*v, std::cmp::Reverse(*k)))
        .unwrap();
    Ok((VtClass::new(code.word_length(), a, b)?, hits))
}

/// Single-edit decoder for the VT-restricted code: length N goes through
/// substitution decoding, length N +- 1 through insdel correction first.
pub fn c3_decode_edit(received: &DnaSeq, cls: &VtClass, code: &C2Code) -> Result<Vec<u64>> {
    let n = code.word_length();
    if cls.n() != n {
        return Err(Error::InvalidParams(format!(
            "class length {} differs from code length {}",
            cls.n(),
            n
        )));
    }
    if received.len() == n {
        return code.decode(received);
    }
    if received.len() + 1 == n || received.len() == n + 1 {
        let digits = vt_decode_insdel(received.to_z4().as_slice(), cls)?;
        let word = QuatSeq::from_digits(&digits).unwrap().to_dna();
        return code.decode(&word);
    }
    Err(Error::InvalidParams(format!(
        "received length {} is more than one edit from {}",
        received.len(),
        n
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{self, BalanceKind};

    fn tiny_code() -> C2Code {
        let cl = CLEpsParams::new(4, "1/5".parse().unwrap(), 7).unwrap();
        C2Code::new(C2Params { cl, q: 5, r: 2 }).unwrap()
    }

    #[test]
    fn tiny_instance_shape() {
        let code = tiny_code();
        assert_eq!(code.t(), 6);
        assert_eq!(code.k(), 4);
        assert_eq!(code.word_length(), 66);
        assert_eq!(code.cardinality(), BigUint::from(625u32));
        assert_eq!(code.eps_effective(), Eps::new(1, 22).unwrap());
        let expect = 4.0 * 5f64.log2() / 66.0;
        assert!((code.rate() - expect).abs() < 1e-12);
    }

    #[test]
    fn all_codewords_pass_constraint_oracles() {
        let code = tiny_code();
        let global = BalanceKind::Global {
            eps: code.eps_effective(),
        };
        for w in code.enumerate_codewords(1000).unwrap() {
            assert_eq!(w.len(), 66);
            assert!(oracles::is_m_ssa(&w, 3));
            assert!(w.max_run_length() <= 4);
            assert!(oracles::is_balanced(&w, &global).unwrap());
        }
    }

    #[test]
    fn pairwise_distance_at_least_three() {
        let words = tiny_code().enumerate_codewords(1000).unwrap();
        let mut min = usize::MAX;
        for i in 0..words.len() {
            for j in (i + 1)..words.len() {
                let d = words[i]
                    .iter()
                    .zip(words[j].iter())
                    .filter(|(a, b)| a != b)
                    .count();
                min = min.min(d);
            }
        }
        assert!(min >= 3, "minimum distance {}", min);
    }

    #[test]
    fn every_single_substitution_corrected() {
        let code = tiny_code();
        let q = code.params().q;
        let mut msg = vec![0u64; 4];
        for v in 0..625u64 {
            for (i, m) in msg.iter_mut().enumerate() {
                *m = v / q.pow(3 - i as u32) % q;
            }
            let w = code.encode(&msg).unwrap();
            assert_eq!(code.decode(&w).unwrap(), msg);
            for pos in 0..w.len() {
                for delta in 1..4u8 {
                    let mut sym: Vec<_> = w.iter().collect();
                    sym[pos] =
                        crate::alphabet::Nucleotide::from_z4((sym[pos].to_z4() + delta) % 4)
                            .unwrap();
                    let corrupted: DnaSeq = sym.into_iter().collect();
                    assert_eq!(code.decode(&corrupted).unwrap(), msg, "pos {}", pos);
                }
            }
        }
    }

    #[test]
    fn double_substitution_never_returns_the_original() {
        let code = tiny_code();
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let mut failures = 0;
        for _ in 0..300 {
            let msg: Vec<u64> = (0..4).map(|_| rng.random_range(0..5u64)).collect();
            let w = code.encode(&msg).unwrap();
            // two substitutions in different blocks
            let b1 = rng.random_range(0..3usize);
            let b2 = rng.random_range(3..6usize);
            let mut sym: Vec<_> = w.iter().map(|x| x.to_z4()).collect();
            for b in [b1, b2] {
                let pos = b * 11 + rng.random_range(0..11usize);
                sym[pos] = (sym[pos] + rng.random_range(1..4u8)) % 4;
            }
            let corrupted: DnaSeq = sym
                .into_iter()
                .map(|d| crate::alphabet::Nucleotide::from_z4(d).unwrap())
                .collect();
            match code.decode(&corrupted) {
                Err(_) => failures += 1,
                Ok(got) => assert_ne!(got, msg, "double corruption silently accepted"),
            }
        }
        // the flagged-block path must actually fire in this sample
        assert!(failures > 0);
    }

    #[test]
    fn vt_class_bound_holds_exhaustively() {
        let code = tiny_code();
        let words = code.enumerate_codewords(1000).unwrap();
        let (cls, members) = find_vt_class(&words).unwrap();
        let bound = words.len().div_ceil(4 * 66);
        assert!(members.len() >= bound, "{} < {}", members.len(), bound);
        for &i in &members {
            assert!(cls.contains(words[i].to_z4().as_slice()));
        }
        // rate loss against the full code is at most (2 + log2 N) / N
        let loss = (words.len() as f64).log2() - (members.len() as f64).log2();
        assert!(loss <= 2.0 + (66f64).log2());
    }

    #[test]
    fn subcode_corrects_every_single_edit() {
        let code = tiny_code();
        let words = code.enumerate_codewords(1000).unwrap();
        let (cls, members) = find_vt_class(&words).unwrap();
        let in_subcode: std::collections::HashSet<String> = members
            .iter()
            .map(|&i| words[i].to_string())
            .collect();
        for &i in &members {
            let w = &words[i];
            let msg = code.decode(w).unwrap();
            assert_eq!(c3_decode_edit(w, &cls, &code).unwrap(), msg);
            let digits = w.to_z4().as_slice().to_vec();
            for p in 0..digits.len() {
                let mut del = digits.clone();
                del.remove(p);
                let got = c3_decode_edit(&dna(&del), &cls, &code).unwrap();
                assert_eq!(got, msg, "deletion at {}", p);
            }
            for p in 0..=digits.len() {
                for v in 0..4u8 {
                    let mut ins = digits.clone();
                    ins.insert(p, v);
                    let got = c3_decode_edit(&dna(&ins), &cls, &code).unwrap();
                    assert_eq!(got, msg, "insertion at {}", p);
                }
            }
            for p in 0..digits.len() {
                for d in 1..4u8 {
                    let mut sub = digits.clone();
                    sub[p] = (sub[p] + d) % 4;
                    // distance 3 keeps any substitution outside the subcode
                    assert!(!in_subcode.contains(&dna(&sub).to_string()));
                    let got = c3_decode_edit(&dna(&sub), &cls, &code).unwrap();
                    assert_eq!(got, msg, "substitution at {}", p);
                }
            }
        }
    }

    fn dna(digits: &[u8]) -> DnaSeq {
        QuatSeq::from_digits(digits).unwrap().to_dna()
    }

    #[test]
    fn edit_decoder_rejects_larger_deviations() {
        let code = tiny_code();
        let words = code.enumerate_codewords(1000).unwrap();
        let (cls, members) = find_vt_class(&words).unwrap();
        let w = &words[members[0]];
        assert!(c3_decode_edit(&w.subseq(0, 64), &cls, &code).is_err());
    }

    #[test]
    fn sampled_class_search_runs() {
        let code = tiny_code();
        let (cls, hits) = find_vt_class_sampled(&code, 400, 23).unwrap();
        assert!(hits >= 1);
        assert_eq!(cls.n(), 66);
    }

    #[test]
    fn q_larger_than_inner_code_rejected() {
        let cl = CLEpsParams::new(4, "1/5".parse().unwrap(), 7).unwrap();
        // |S| = 2^6 * |f(4,7)| = 64 * 13 = 832
        assert!(C2Code::new(C2Params { cl, q: 839, r: 2 }).is_err());
        assert!(C2Code::new(C2Params { cl, q: 829, r: 2 }).is_ok());
    }
}
