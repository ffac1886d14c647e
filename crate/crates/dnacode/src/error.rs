use num_bigint::BigUint;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid symbol '{ch}' at position {pos}")]
    BadSymbol { pos: usize, ch: char },
    #[error("not in the constraint family at position {pos}: {reason}")]
    NotMember { pos: usize, reason: String },
    #[error("not a codeword: {0}")]
    NotCodeword(String),
    #[error("decoding failure: {0}")]
    DecodeFailure(String),
    #[error("enumeration needs {needed} items, cap is {cap}")]
    CapExceeded { needed: BigUint, cap: u64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
