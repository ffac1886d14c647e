//! Sequence types over {A,T,C,G}, {0,1} and Z4, and the maps between them.
//!
//! The bit-pair map sends T->00, C->01, A->10, G->11 and a DNA sequence to the
//! pair of its first-bit and second-bit streams. Two facts carried by this
//! encoding are used throughout: a symbol is T or C exactly when its first bit
//! is 0, and a symbol is G or C exactly when its second bit is 1.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// One nucleotide. The discriminant is the Z4 value of the symbol
/// (A=0, T=1, C=2, G=3), so complementation is `value ^ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Nucleotide {
    A = 0,
    T = 1,
    C = 2,
    G = 3,
}

impl serde::Serialize for Nucleotide {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.to_char())
    }
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::T, Nucleotide::C, Nucleotide::G];

    pub fn from_z4(d: u8) -> Option<Self> {
        match d {
            0 => Some(Nucleotide::A),
            1 => Some(Nucleotide::T),
            2 => Some(Nucleotide::C),
            3 => Some(Nucleotide::G),
            _ => None,
        }
    }

    pub fn to_z4(self) -> u8 {
        self as u8
    }

    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'A' | 'a' => Some(Nucleotide::A),
            'T' | 't' => Some(Nucleotide::T),
            'C' | 'c' => Some(Nucleotide::C),
            'G' | 'g' => Some(Nucleotide::G),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::T => 'T',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
        }
    }

    /// Watson-Crick complement: A<->T, C<->G.
    pub fn complement(self) -> Self {
        Nucleotide::from_z4(self as u8 ^ 1).unwrap()
    }

    /// First bit of the pair image: 0 for T/C, 1 for A/G.
    pub fn tau_first(self) -> u8 {
        match self {
            Nucleotide::T | Nucleotide::C => 0,
            Nucleotide::A | Nucleotide::G => 1,
        }
    }

    /// Second bit of the pair image: 1 for C/G, 0 for T/A.
    pub fn tau_second(self) -> u8 {
        match self {
            Nucleotide::C | Nucleotide::G => 1,
            Nucleotide::T | Nucleotide::A => 0,
        }
    }

    pub fn from_tau_bits(first: u8, second: u8) -> Self {
        match (first, second) {
            (0, 0) => Nucleotide::T,
            (0, 1) => Nucleotide::C,
            (1, 0) => Nucleotide::A,
            _ => Nucleotide::G,
        }
    }

    pub fn is_tc(self) -> bool {
        matches!(self, Nucleotide::T | Nucleotide::C)
    }

    pub fn is_gc(self) -> bool {
        matches!(self, Nucleotide::G | Nucleotide::C)
    }
}

/// Immutable DNA sequence, packed two bits per symbol.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DnaSeq {
    packed: Vec<u8>,
    len: usize,
}

impl DnaSeq {
    pub fn new() -> Self {
        DnaSeq::default()
    }

    pub fn from_nucleotides(symbols: &[Nucleotide]) -> Self {
        let mut s = DnaSeq::new();
        for &sym in symbols {
            s.push(sym);
        }
        s
    }

    /// Builds the sequence whose symbol i is bits 2i..2i+2 of `code` as a Z4
    /// digit. Cheap constructor for exhaustive sweeps over 4^len spaces.
    pub fn from_code(code: u64, len: usize) -> Self {
        assert!(len <= 32, "from_code supports len <= 32");
        let mut s = DnaSeq::new();
        for i in 0..len {
            s.push(Nucleotide::from_z4(((code >> (2 * i)) & 3) as u8).unwrap());
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, sym: Nucleotide) {
        let (byte, shift) = (self.len / 4, 2 * (self.len % 4));
        if shift == 0 {
            self.packed.push(sym as u8);
        } else {
            self.packed[byte] |= (sym as u8) << shift;
        }
        self.len += 1;
    }

    /// Symbol at position `i` (0-based). Panics when out of bounds.
    pub fn get(&self, i: usize) -> Nucleotide {
        assert!(i < self.len, "index {} out of bounds for length {}", i, self.len);
        Nucleotide::from_z4((self.packed[i / 4] >> (2 * (i % 4))) & 3).unwrap()
    }

    pub fn iter(&self) -> impl Iterator<Item = Nucleotide> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn complement(&self) -> DnaSeq {
        self.iter().map(Nucleotide::complement).collect()
    }

    /// Complement of the reversal.
    pub fn reverse_complement(&self) -> DnaSeq {
        (0..self.len)
            .rev()
            .map(|i| self.get(i).complement())
            .collect()
    }

    /// Number of G/C symbols; equals the weight of the second-bit stream.
    pub fn gc_weight(&self) -> usize {
        self.iter().filter(|s| s.is_gc()).count()
    }

    /// Length of the longest run of equal symbols; 0 for the empty sequence.
    pub fn max_run_length(&self) -> usize {
        max_run(self.iter())
    }

    pub fn subseq(&self, start: usize, len: usize) -> DnaSeq {
        assert!(start + len <= self.len);
        (start..start + len).map(|i| self.get(i)).collect()
    }

    pub fn concat(&self, other: &DnaSeq) -> DnaSeq {
        let mut out = self.clone();
        for sym in other.iter() {
            out.push(sym);
        }
        out
    }

    pub fn to_z4(&self) -> QuatSeq {
        QuatSeq {
            digits: self.iter().map(Nucleotide::to_z4).collect(),
        }
    }
}

impl FromIterator<Nucleotide> for DnaSeq {
    fn from_iter<I: IntoIterator<Item = Nucleotide>>(iter: I) -> Self {
        let mut s = DnaSeq::new();
        for sym in iter {
            s.push(sym);
        }
        s
    }
}

impl FromStr for DnaSeq {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut s = DnaSeq::new();
        for (pos, ch) in text.chars().enumerate() {
            match Nucleotide::from_char(ch) {
                Some(sym) => s.push(sym),
                None => return Err(Error::BadSymbol { pos, ch }),
            }
        }
        Ok(s)
    }
}

impl fmt::Display for DnaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for sym in self.iter() {
            write!(f, "{}", sym.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for DnaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DnaSeq(\"{}\")", self)
    }
}

/// Immutable bit sequence. Stored one bit per byte; packing to the wire form
/// lives in the io module.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSeq {
    bits: Vec<u8>,
}

impl BitSeq {
    pub fn new() -> Self {
        BitSeq::default()
    }

    pub fn zeros(len: usize) -> Self {
        BitSeq { bits: vec![0; len] }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        for (pos, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::BadSymbol {
                    pos,
                    ch: (b'0' + b.min(9)) as char,
                });
            }
        }
        Ok(BitSeq { bits: bits.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1);
        self.bits.push(bit);
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }

    pub fn concat(&self, other: &BitSeq) -> BitSeq {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitSeq { bits }
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn max_run_length(&self) -> usize {
        max_run(self.iter())
    }

    /// Big-endian integer value of the bits (first bit most significant).
    pub fn to_uint(&self) -> num_bigint::BigUint {
        num_bigint::BigUint::from_radix_be(&self.bits, 2).unwrap_or_default()
    }

    /// The `width`-bit big-endian representation of `value`.
    /// Rejects values that do not fit.
    pub fn from_uint(value: &num_bigint::BigUint, width: usize) -> Result<Self> {
        if value.bits() as usize > width {
            return Err(Error::InvalidParams(format!(
                "value needs {} bits, field is {} wide",
                value.bits(),
                width
            )));
        }
        let digits = value.to_radix_be(2);
        let mut bits = vec![0u8; width - digits.len()];
        bits.extend_from_slice(&digits);
        Ok(BitSeq { bits })
    }
}

impl FromStr for BitSeq {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for (pos, ch) in text.chars().enumerate() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return Err(Error::BadSymbol { pos, ch }),
            }
        }
        Ok(BitSeq { bits })
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSeq({})", self)
    }
}

/// Immutable sequence of Z4 digits; the alphabet the insertion/deletion layer
/// works over.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuatSeq {
    digits: Vec<u8>,
}

impl QuatSeq {
    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        for (pos, &d) in digits.iter().enumerate() {
            if d > 3 {
                return Err(Error::BadSymbol {
                    pos,
                    ch: (b'0' + d.min(9)) as char,
                });
            }
        }
        Ok(QuatSeq {
            digits: digits.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.digits[i]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.digits
    }

    pub fn to_dna(&self) -> DnaSeq {
        self.digits
            .iter()
            .map(|&d| Nucleotide::from_z4(d).unwrap())
            .collect()
    }
}

impl fmt::Display for QuatSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{}", d)?;
        }
        Ok(())
    }
}

impl fmt::Debug for QuatSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuatSeq({})", self)
    }
}

/// Splits a DNA sequence into its first-bit and second-bit streams.
pub fn tau_encode(x: &DnaSeq) -> (BitSeq, BitSeq) {
    let mut first = BitSeq::new();
    let mut second = BitSeq::new();
    for sym in x.iter() {
        first.push(sym.tau_first());
        second.push(sym.tau_second());
    }
    (first, second)
}

/// Rebuilds the DNA sequence whose bit-pair streams are (`first`, `second`).
/// The {T,C} positions of the output are exactly the 0-positions of `first`,
/// and the G/C positions are exactly the 1-positions of `second`.
pub fn tau_decode(first: &BitSeq, second: &BitSeq) -> Result<DnaSeq> {
    if first.len() != second.len() {
        return Err(Error::InvalidParams(format!(
            "stream lengths differ: {} vs {}",
            first.len(),
            second.len()
        )));
    }
    Ok((0..first.len())
        .map(|i| Nucleotide::from_tau_bits(first.get(i), second.get(i)))
        .collect())
}

/// Interleaved single-stream form (x1 y1 x2 y2 ...), for serialization.
pub fn tau_interleave(first: &BitSeq, second: &BitSeq) -> Result<BitSeq> {
    if first.len() != second.len() {
        return Err(Error::InvalidParams(format!(
            "stream lengths differ: {} vs {}",
            first.len(),
            second.len()
        )));
    }
    let mut out = BitSeq::new();
    for i in 0..first.len() {
        out.push(first.get(i));
        out.push(second.get(i));
    }
    Ok(out)
}

pub(crate) fn max_run<T: PartialEq>(items: impl Iterator<Item = T>) -> usize {
    let mut best = 0usize;
    let mut cur = 0usize;
    let mut prev: Option<T> = None;
    for item in items {
        cur = match &prev {
            Some(p) if *p == item => cur + 1,
            _ => 1,
        };
        best = best.max(cur);
        prev = Some(item);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_single_symbols() {
        assert_eq!(Nucleotide::T.tau_first(), 0);
        assert_eq!(Nucleotide::T.tau_second(), 0);
        assert_eq!(Nucleotide::C.tau_first(), 0);
        assert_eq!(Nucleotide::C.tau_second(), 1);
        assert_eq!(Nucleotide::A.tau_first(), 1);
        assert_eq!(Nucleotide::A.tau_second(), 0);
        assert_eq!(Nucleotide::G.tau_first(), 1);
        assert_eq!(Nucleotide::G.tau_second(), 1);
    }

    #[test]
    fn tau_encode_tcag() {
        let x: DnaSeq = "TCAG".parse().unwrap();
        let (first, second) = tau_encode(&x);
        assert_eq!(first.to_string(), "0011");
        assert_eq!(second.to_string(), "0101");
    }

    #[test]
    fn tau_decode_pairs() {
        let x = BitSeq::from_str("01").unwrap();
        let y = BitSeq::from_str("11").unwrap();
        assert_eq!(tau_decode(&x, &y).unwrap().to_string(), "CG");
        let t = tau_decode(&BitSeq::from_str("0").unwrap(), &BitSeq::from_str("0").unwrap());
        assert_eq!(t.unwrap().to_string(), "T");
        assert!(tau_decode(&x, &BitSeq::from_str("1").unwrap()).is_err());
    }

    #[test]
    fn tau_round_trip_exhaustive_len_le_6() {
        for len in 0..=6usize {
            for code in 0..(1u64 << (2 * len)) {
                let w = DnaSeq::from_code(code, len);
                let (f, s) = tau_encode(&w);
                assert_eq!(tau_decode(&f, &s).unwrap(), w);
            }
        }
    }

    #[test]
    fn reverse_complement_examples() {
        let x: DnaSeq = "TTC".parse().unwrap();
        assert_eq!(x.reverse_complement().to_string(), "GAA");
        let a: DnaSeq = "A".parse().unwrap();
        assert_eq!(a.reverse_complement().to_string(), "T");
    }

    #[test]
    fn reverse_complement_involution() {
        for code in 0..(1u64 << 10) {
            let w = DnaSeq::from_code(code, 5);
            assert_eq!(w.reverse_complement().reverse_complement(), w);
        }
    }

    #[test]
    fn gc_weight_matches_second_stream() {
        assert_eq!("ACGT".parse::<DnaSeq>().unwrap().gc_weight(), 2);
        assert_eq!("AAAA".parse::<DnaSeq>().unwrap().gc_weight(), 0);
        for len in 0..=5usize {
            for code in 0..(1u64 << (2 * len)) {
                let w = DnaSeq::from_code(code, len);
                let (first, second) = tau_encode(&w);
                assert_eq!(w.gc_weight(), second.weight());
                let tc = w.iter().filter(|s| s.is_tc()).count();
                assert_eq!(tc, first.len() - first.weight());
            }
        }
    }

    #[test]
    fn z4_correspondence() {
        let x: DnaSeq = "ATCG".parse().unwrap();
        assert_eq!(x.to_z4().as_slice(), &[0, 1, 2, 3]);
        let q = QuatSeq::from_digits(&[3, 3]).unwrap();
        assert_eq!(q.to_dna().to_string(), "GG");
        for code in 0..(1u64 << 10) {
            let w = DnaSeq::from_code(code, 5);
            assert_eq!(w.to_z4().to_dna(), w);
        }
    }

    #[test]
    fn packed_get_push_agree() {
        let text = "ATCGGCTAATCGG";
        let w: DnaSeq = text.parse().unwrap();
        assert_eq!(w.len(), text.len());
        assert_eq!(w.to_string(), text);
        let syms: Vec<Nucleotide> = w.iter().collect();
        assert_eq!(DnaSeq::from_nucleotides(&syms), w);
    }

    #[test]
    fn bitseq_uint_round_trip() {
        use num_bigint::BigUint;
        let b = BitSeq::from_str("01011").unwrap();
        assert_eq!(b.to_uint(), BigUint::from(11u32));
        assert_eq!(BitSeq::from_uint(&BigUint::from(11u32), 5).unwrap(), b);
        assert!(BitSeq::from_uint(&BigUint::from(32u32), 5).is_err());
        assert_eq!(
            BitSeq::from_uint(&BigUint::from(0u32), 3).unwrap().to_string(),
            "000"
        );
    }

    #[test]
    fn max_run_examples() {
        assert_eq!("AATTT".parse::<DnaSeq>().unwrap().max_run_length(), 3);
        assert_eq!("ACGT".parse::<DnaSeq>().unwrap().max_run_length(), 1);
        assert_eq!(BitSeq::from_bits(&[0, 0, 0, 1, 0, 0]).unwrap().max_run_length(), 3);
        assert_eq!(DnaSeq::new().max_run_length(), 0);
    }

    #[test]
    fn bad_symbols_rejected() {
        assert!("ACGU".parse::<DnaSeq>().is_err());
        assert!("012".parse::<BitSeq>().is_err());
        assert!(QuatSeq::from_digits(&[0, 4]).is_err());
    }
}
