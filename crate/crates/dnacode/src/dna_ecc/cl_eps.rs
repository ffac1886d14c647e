//! The constrained inner code: 3-SSA, run-length-limited, GC-balanced DNA
//! words addressed by a pair of enumerative indices, plus the guarded
//! extension that makes blocks safe to concatenate.

use crate::alphabet::{tau_decode, tau_encode, BitSeq, DnaSeq, Nucleotide};
use crate::engine::{log2_big, Codec, ConstraintSpec};
use crate::error::{Error, Result};
use crate::oracles::Eps;
use num_bigint::BigUint;
use num_traits::One;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CLEpsParams {
    pub ell: usize,
    pub eps: Eps,
    pub n: usize,
}

impl CLEpsParams {
    pub fn new(ell: usize, eps: Eps, n: usize) -> Result<CLEpsParams> {
        if ell < 3 {
            return Err(Error::InvalidParams(format!("ell = {} must be >= 3", ell)));
        }
        if eps.num() == 0 {
            return Err(Error::InvalidParams(
                "balance tolerance must be positive here".into(),
            ));
        }
        if n < 2 {
            return Err(Error::InvalidParams(format!("n = {} must be >= 2", n)));
        }
        Ok(CLEpsParams { ell, eps, n })
    }

    /// The sufficient condition n > ln(n)/eps^2 under which the balanced
    /// family is large enough asymptotically. Informational only: the
    /// construction paths check the exact count instead.
    pub fn asymptotic_condition_holds(&self) -> bool {
        let n = self.n as f64;
        let e = self.eps.as_f64();
        n > n.ln() / (e * e)
    }
}

/// Compiled inner code. A codeword is tau^{-1}(c || y) with c in the
/// zero-3-dominant run-length-limited family (first-bit stream) and y in the
/// eps-balanced set (second-bit stream), each chosen by index.
pub struct ClEpsCode {
    params: CLEpsParams,
    f_codec: Codec,
    bal_codec: Codec,
}

impl ClEpsCode {
    pub fn new(params: CLEpsParams) -> Result<ClEpsCode> {
        let f_codec = Codec::new(&ConstraintSpec::f_set(params.ell)?, params.n)?;
        let bal_codec = Codec::new(&ConstraintSpec::balanced(params.eps), params.n)?;
        let needed = BigUint::one() << (params.n - 1);
        if bal_codec.count() < &needed {
            return Err(Error::InvalidParams(format!(
                "only {} balanced words of length {} at tolerance {}, need {}",
                bal_codec.count(),
                params.n,
                params.eps,
                needed
            )));
        }
        Ok(ClEpsCode {
            params,
            f_codec,
            bal_codec,
        })
    }

    pub fn params(&self) -> &CLEpsParams {
        &self.params
    }

    /// Number of admissible c_index values.
    pub fn c_count(&self) -> &BigUint {
        self.f_codec.count()
    }

    /// |S| = 2^(n-1) * |f(ell, n)|.
    pub fn cardinality(&self) -> BigUint {
        (BigUint::one() << (self.params.n - 1)) * self.c_count()
    }

    /// (n - 1 + log2 |f(ell, n)|) / n; tends to 1 + log2 of the family's
    /// growth rate.
    pub fn rate(&self) -> f64 {
        (self.params.n as f64 - 1.0 + log2_big(self.c_count())) / self.params.n as f64
    }

    pub fn encode(&self, c_index: &BigUint, data: &BitSeq) -> Result<DnaSeq> {
        if c_index >= self.c_count() {
            return Err(Error::InvalidParams(format!(
                "c_index {} out of range, {} constrained words available",
                c_index,
                self.c_count()
            )));
        }
        if data.len() != self.params.n - 1 {
            return Err(Error::InvalidParams(format!(
                "data is {} bits, expected {}",
                data.len(),
                self.params.n - 1
            )));
        }
        let first = self.f_codec.unrank(c_index)?;
        let second = self.bal_codec.unrank(&data.to_uint())?;
        tau_decode(
            &BitSeq::from_bits(&first).unwrap(),
            &BitSeq::from_bits(&second).unwrap(),
        )
    }

    pub fn decode(&self, y: &DnaSeq) -> Result<(BigUint, BitSeq)> {
        if y.len() != self.params.n {
            return Err(Error::NotCodeword(format!(
                "length {} differs from inner length {}",
                y.len(),
                self.params.n
            )));
        }
        let (first, second) = tau_encode(y);
        let c_index = self.f_codec.rank(first.as_slice()).map_err(|e| {
            Error::NotCodeword(format!("first-bit stream outside the family: {}", e))
        })?;
        let data_index = self.bal_codec.rank(second.as_slice()).map_err(|e| {
            Error::NotCodeword(format!("second-bit stream not balanced: {}", e))
        })?;
        if data_index >= (BigUint::one() << (self.params.n - 1)) {
            return Err(Error::NotCodeword(
                "balanced word ranks above the payload range".into(),
            ));
        }
        Ok((
            c_index,
            BitSeq::from_uint(&data_index, self.params.n - 1).unwrap(),
        ))
    }
}

/// Bracket a word with TC/CT pairs chosen against its boundary symbols:
/// prefix TC unless the word starts with C, suffix TC unless it ends with T.
/// Each pair contributes exactly one GC symbol, keeps every 3-window
/// majority-TC, and caps junction runs at 2.
pub fn extend(y: &DnaSeq) -> DnaSeq {
    debug_assert!(!y.is_empty());
    let tc = [Nucleotide::T, Nucleotide::C];
    let ct = [Nucleotide::C, Nucleotide::T];
    let z1 = if y.get(0) != Nucleotide::C { tc } else { ct };
    let z2 = if y.get(y.len() - 1) != Nucleotide::T {
        tc
    } else {
        ct
    };
    let mut out: DnaSeq = z1.into_iter().collect();
    out = out.concat(y);
    out.push(z2[0]);
    out.push(z2[1]);
    out
}

/// Inverse of `extend`: strips the brackets after checking they match the
/// rule for the inner word's boundary symbols.
pub fn unextend(block: &DnaSeq) -> Result<DnaSeq> {
    if block.len() < 5 {
        return Err(Error::NotCodeword(format!(
            "block length {} too short to carry brackets",
            block.len()
        )));
    }
    let inner = block.subseq(2, block.len() - 4);
    let again = extend(&inner);
    if again != *block {
        return Err(Error::NotCodeword(
            "bracket symbols do not match the boundary rule".into(),
        ));
    }
    Ok(inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{self, BalanceKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn code_20() -> ClEpsCode {
        let params = CLEpsParams::new(4, "0.1".parse().unwrap(), 20).unwrap();
        ClEpsCode::new(params).unwrap()
    }

    fn random_word(code: &ClEpsCode, rng: &mut ChaCha12Rng) -> DnaSeq {
        let c_index = BigUint::from(rng.random::<u64>()) % code.c_count();
        let bits: Vec<u8> = (0..code.params().n - 1)
            .map(|_| rng.random_range(0..2u8))
            .collect();
        code.encode(&c_index, &BitSeq::from_bits(&bits).unwrap())
            .unwrap()
    }

    #[test]
    fn codewords_satisfy_all_three_constraints() {
        let code = code_20();
        let global = BalanceKind::Global {
            eps: code.params().eps,
        };
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let w = random_word(&code, &mut rng);
            assert!(oracles::is_m_ssa(&w, 3));
            assert!(w.max_run_length() <= 4);
            assert!(oracles::is_balanced(&w, &global).unwrap());
        }
    }

    #[test]
    fn round_trip() {
        let code = code_20();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..200 {
            let c_index = BigUint::from(rng.random::<u64>()) % code.c_count();
            let bits: Vec<u8> = (0..19).map(|_| rng.random_range(0..2u8)).collect();
            let data = BitSeq::from_bits(&bits).unwrap();
            let w = code.encode(&c_index, &data).unwrap();
            assert_eq!(code.decode(&w).unwrap(), (c_index, data));
        }
    }

    #[test]
    fn rate_approaches_limit() {
        let params = CLEpsParams::new(4, "0.05".parse().unwrap(), 200).unwrap();
        let code = ClEpsCode::new(params).unwrap();
        assert!((code.rate() - 1.4057).abs() < 2e-3, "rate {}", code.rate());
    }

    #[test]
    fn cardinality_condition_enforced() {
        // at n = 4, eps = 1/5 the balanced set has 6 < 2^3 members
        let params = CLEpsParams::new(3, "1/5".parse().unwrap(), 4).unwrap();
        assert!(ClEpsCode::new(params).is_err());
    }

    #[test]
    fn asymptotic_condition_reporting() {
        assert!(!CLEpsParams::new(4, "0.1".parse().unwrap(), 20)
            .unwrap()
            .asymptotic_condition_holds());
        assert!(CLEpsParams::new(4, "0.45".parse().unwrap(), 50)
            .unwrap()
            .asymptotic_condition_holds());
    }

    #[test]
    fn extend_rules() {
        let y: DnaSeq = "CATT".parse().unwrap();
        assert_eq!(extend(&y).to_string(), "CTCATTCT");
        let y: DnaSeq = "ATTG".parse().unwrap();
        assert_eq!(extend(&y).to_string(), "TCATTGTC");
        let y: DnaSeq = "GCCT".parse().unwrap();
        assert_eq!(extend(&y).to_string(), "TCGCCTCT");
    }

    #[test]
    fn unextend_inverts_and_validates() {
        let y: DnaSeq = "ATTG".parse().unwrap();
        assert_eq!(unextend(&extend(&y)).unwrap(), y);
        // flip a bracket symbol: TC -> AC prefix
        let bad: DnaSeq = "ACATTGTC".parse().unwrap();
        assert!(unextend(&bad).is_err());
    }

    #[test]
    fn junction_windows_safe_for_all_boundary_symbols() {
        // last symbol of one extended block, its suffix pair, the next
        // block's prefix pair, and its first symbol: every 3-window in that
        // span must be majority-TC with no run over 3
        for last in "ATCG".chars() {
            for first in "ATCG".chars() {
                let left: DnaSeq = format!("TC{}", last).parse().unwrap();
                let right: DnaSeq = format!("{}TC", first).parse().unwrap();
                let span = extend(&left)
                    .subseq(2, 5)
                    .concat(&extend(&right).subseq(0, 3));
                assert!(
                    oracles::is_tc_dominant(&span, 3).unwrap(),
                    "span {}",
                    span
                );
                assert!(span.max_run_length() <= 2, "span {}", span);
            }
        }
    }

    #[test]
    fn extended_concatenations_keep_constraints() {
        let code = code_20();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..300 {
            let u = extend(&random_word(&code, &mut rng));
            let v = extend(&random_word(&code, &mut rng));
            let w = u.concat(&v);
            assert!(oracles::is_tc_dominant(&w, 3).unwrap());
            assert!(w.max_run_length() <= 4);
        }
    }

    #[test]
    fn decode_rejects_out_of_family_words() {
        let code = code_20();
        assert!(code.decode(&"AAAAAAAAAAAAAAAAAAAA".parse().unwrap()).is_err());
        assert!(code.decode(&"TC".parse().unwrap()).is_err());
    }
}
