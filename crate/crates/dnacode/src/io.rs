//! FASTA records and the bit-level payload framing used by the CLI.

use crate::alphabet::{BitSeq, DnaSeq};
use crate::error::{Error, Result};
use std::io::{BufRead, Write};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastaRecord {
    pub id: String,
    pub desc: String,
    pub seq: DnaSeq,
}

impl FastaRecord {
    pub fn new(id: impl Into<String>, desc: impl Into<String>, seq: DnaSeq) -> FastaRecord {
        FastaRecord {
            id: id.into(),
            desc: desc.into(),
            seq,
        }
    }
}

pub fn write_fasta(w: &mut impl Write, records: &[FastaRecord]) -> std::io::Result<()> {
    for rec in records {
        if rec.desc.is_empty() {
            writeln!(w, ">{}", rec.id)?;
        } else {
            writeln!(w, ">{} {}", rec.id, rec.desc)?;
        }
        let text = rec.seq.to_string();
        for chunk in text.as_bytes().chunks(70) {
            w.write_all(chunk)?;
            writeln!(w)?;
        }
        if text.is_empty() {
            writeln!(w)?;
        }
    }
    Ok(())
}

pub fn read_fasta(r: impl BufRead) -> Result<Vec<FastaRecord>> {
    let mut records: Vec<FastaRecord> = Vec::new();
    let mut open = false;
    for (idx, line) in r.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            let mut parts = header.splitn(2, char::is_whitespace);
            let id = parts.next().unwrap_or("").to_string();
            if id.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "record header has no id".into(),
                });
            }
            let desc = parts.next().unwrap_or("").trim().to_string();
            records.push(FastaRecord::new(id, desc, DnaSeq::new()));
            open = true;
            continue;
        }
        if !open {
            return Err(Error::Parse {
                line: line_no,
                msg: "sequence data before any '>' header".into(),
            });
        }
        let rec = records.last_mut().unwrap();
        for ch in line.chars() {
            let sym = crate::alphabet::Nucleotide::from_char(ch).ok_or(Error::Parse {
                line: line_no,
                msg: format!("invalid symbol '{}'", ch),
            })?;
            rec.seq.push(sym);
        }
    }
    Ok(records)
}

/// Bytes to bits, most significant bit first.
pub fn bytes_to_bits(bytes: &[u8]) -> BitSeq {
    let mut bits = BitSeq::zeros(0);
    for &b in bytes {
        for i in (0..8).rev() {
            bits.push((b >> i) & 1);
        }
    }
    bits
}

/// Bits to bytes, MSB first, zero-padded to a whole byte.
pub fn bits_to_bytes(bits: &BitSeq) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, b) in bits.iter().enumerate() {
        if b == 1 {
            out[i / 8] |= 1 << (7 - i % 8);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fasta_round_trip() {
        let records = vec![
            FastaRecord::new("b0", "bytes=12", "ACGTACGTACGTACGT".parse().unwrap()),
            FastaRecord::new("b1", "", "TTTT".parse().unwrap()),
        ];
        let mut buf = Vec::new();
        write_fasta(&mut buf, &records).unwrap();
        let back = read_fasta(buf.as_slice()).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn fasta_wraps_long_sequences() {
        let long: DnaSeq = "A".repeat(200).parse().unwrap();
        let records = vec![FastaRecord::new("x", "", long)];
        let mut buf = Vec::new();
        write_fasta(&mut buf, &records).unwrap();
        assert!(buf.split(|&b| b == b'\n').all(|l| l.len() <= 70));
        assert_eq!(read_fasta(buf.as_slice()).unwrap(), records);
    }

    #[test]
    fn fasta_errors_carry_line_numbers() {
        let bad = ">r1\nACGT\nACXT\n";
        match read_fasta(bad.as_bytes()).unwrap_err() {
            Error::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains('X'));
            }
            other => panic!("unexpected: {:?}", other),
        }
        let headerless = "ACGT\n";
        assert!(matches!(
            read_fasta(headerless.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        let anonymous = "> desc only\nACGT\n";
        assert!(matches!(
            read_fasta(anonymous.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn bit_packing_round_trip() {
        let bytes = [0xA5u8, 0x01, 0xFF, 0x00];
        let bits = bytes_to_bits(&bytes);
        assert_eq!(bits.len(), 32);
        assert_eq!(bits_to_bytes(&bits), bytes);
        // non-whole-byte lengths pad with zeros
        let bits: BitSeq = "10110".parse().unwrap();
        assert_eq!(bits_to_bytes(&bits), vec![0b1011_0000]);
    }
}
