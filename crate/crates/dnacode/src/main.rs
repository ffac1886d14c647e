//! Command-line front end: family tables and counting, the four code
//! constructions over files, constraint verification, channel simulation,
//! and VT-class search. Every JSON output embeds a manifest sufficient to
//! reproduce it.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dnacode::alphabet::{BitSeq, DnaSeq, QuatSeq};
use dnacode::channel::{
    self, run_exhaustive_campaign, run_random_campaign, ErrorMode, TrialReport,
};
use dnacode::construction1::{C1Code, C1Message, C1Params};
use dnacode::dna_ecc::{
    c3_decode_edit, find_vt_class, find_vt_class_sampled, C2Code, C2Params, C4Code, CLEpsParams,
};
use dnacode::engine::{self, log2_big, Codec, ConstraintSpec};
use dnacode::error::{Error, Result};
use dnacode::io::{bits_to_bytes, bytes_to_bits, read_fasta, write_fasta, FastaRecord};
use dnacode::oracles::{self, BalanceKind, Eps};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::{json, Value};
use std::fs;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "dnacode",
    version,
    about = "Constrained and error-correcting DNA code toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reproduce the reference growth-rate and family tables
    Tables,
    /// Exact member count of a constrained family at one length
    Count {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
    },
    /// List every member of a constrained family
    Enumerate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        /// refuse to list families larger than this
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Growth-rate estimate count(n)/count(n-1) at the high end of a window
    Growth {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        n_lo: usize,
        #[arg(long, default_value_t = 400)]
        n_hi: usize,
    },
    /// Structure-avoiding run-length-limited construction
    C1 {
        #[command(subcommand)]
        op: C1Op,
    },
    /// Substitution-correcting concatenated construction
    C2 {
        #[command(subcommand)]
        op: C2Op,
    },
    /// Single-edit-correcting VT-restricted construction
    C3 {
        #[command(subcommand)]
        op: C3Op,
    },
    /// Locally balanced concatenation with single-edit correction
    C4 {
        #[command(subcommand)]
        op: C4Op,
    },
    /// Check DNA sequences against the constraint oracles
    Verify(VerifyArgs),
    /// Channel campaigns, or one-shot corruption of a FASTA file
    Simulate(SimArgs),
    /// Locate the fullest VT class of a code
    SearchVt(SearchVtArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    ZeroDominant,
    Rll,
    F,
    F0,
    Balanced,
    TcDominant,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// dominance window, odd, 3..=11
    #[arg(long)]
    m: Option<usize>,
    /// run-length limit, >= 3
    #[arg(long)]
    ell: Option<usize>,
    /// balance tolerance, decimal or fraction
    #[arg(long)]
    eps: Option<String>,
}

impl FamilyArgs {
    fn resolve(&self) -> Result<ConstraintSpec> {
        let need = |opt: Option<usize>, what: &str| {
            opt.ok_or_else(|| Error::InvalidParams(format!("--{} required for this family", what)))
        };
        match self.family {
            Family::ZeroDominant => ConstraintSpec::zero_dominant(need(self.m, "m")?),
            Family::Rll => ConstraintSpec::rll(need(self.ell, "ell")?),
            Family::F => ConstraintSpec::f_set(need(self.ell, "ell")?),
            Family::F0 => ConstraintSpec::f0_set(need(self.ell, "ell")?),
            Family::Balanced => {
                let text = self.eps.as_deref().ok_or_else(|| {
                    Error::InvalidParams("--eps required for this family".into())
                })?;
                Ok(ConstraintSpec::balanced(text.parse()?))
            }
            Family::TcDominant => ConstraintSpec::tc_dominant(need(self.m, "m")?),
        }
    }

    fn describe(&self) -> Value {
        json!({
            "family": match self.family {
                Family::ZeroDominant => "zero-dominant",
                Family::Rll => "rll",
                Family::F => "f",
                Family::F0 => "f0",
                Family::Balanced => "balanced",
                Family::TcDominant => "tc-dominant",
            },
            "m": self.m,
            "ell": self.ell,
            "eps": self.eps,
        })
    }
}

#[derive(Subcommand)]
enum C1Op {
    Encode {
        #[command(flatten)]
        params: C1Args,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    Decode {
        #[command(flatten)]
        params: C1Args,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Args, Clone)]
struct C1Args {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
}

#[derive(Args, Clone)]
struct ClArgs {
    #[arg(long)]
    ell: usize,
    /// balance tolerance, decimal or fraction
    #[arg(long)]
    eps: String,
    #[arg(long)]
    n: usize,
    /// prime field size
    #[arg(long)]
    q: u64,
    /// parity symbols
    #[arg(long)]
    r: usize,
}

impl ClArgs {
    fn build(&self) -> Result<C2Code> {
        let cl = CLEpsParams::new(self.ell, self.eps.parse()?, self.n)?;
        C2Code::new(C2Params {
            cl,
            q: self.q,
            r: self.r,
        })
    }

    fn describe(&self) -> Value {
        json!({"ell": self.ell, "eps": self.eps, "n": self.n, "q": self.q, "r": self.r})
    }
}

#[derive(Subcommand)]
enum C2Op {
    Encode {
        #[command(flatten)]
        params: ClArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    Decode {
        #[command(flatten)]
        params: ClArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Report derived shape: t, N, rate, effective balance
    Build {
        #[command(flatten)]
        params: ClArgs,
    },
}

#[derive(Subcommand)]
enum C3Op {
    /// Find the VT class and report the subcode
    Build {
        #[command(flatten)]
        params: ClArgs,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        /// also write the subcode words here
        #[arg(long)]
        fasta: Option<PathBuf>,
    },
    Encode {
        #[command(flatten)]
        params: ClArgs,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    Decode {
        #[command(flatten)]
        params: ClArgs,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long)]
        a0: u64,
        #[arg(long)]
        b0: u8,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Args, Clone)]
struct C4Args {
    #[command(flatten)]
    inner: ClArgs,
    /// number of concatenated blocks
    #[arg(long)]
    t: usize,
    /// local balance window
    #[arg(long)]
    s: usize,
}

impl C4Args {
    fn build(&self) -> Result<C4Code> {
        C4Code::new(self.inner.build()?, self.t, self.s)
    }

    fn describe(&self) -> Value {
        let mut v = self.inner.describe();
        v["t"] = json!(self.t);
        v["s"] = json!(self.s);
        v
    }
}

#[derive(Subcommand)]
enum C4Op {
    Build {
        #[command(flatten)]
        params: C4Args,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long)]
        fasta: Option<PathBuf>,
    },
    Encode {
        #[command(flatten)]
        params: C4Args,
        /// restrict to the fullest VT class; costs rate, allows edit decoding
        #[arg(long)]
        subcode: bool,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    Decode {
        #[command(flatten)]
        params: C4Args,
        /// VT class residues select subcode framing and enable edit decoding
        #[arg(long)]
        a0: Option<u64>,
        #[arg(long)]
        b0: Option<u8>,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// structure-avoidance window m
    #[arg(long)]
    ssa: Option<usize>,
    /// run-length limit
    #[arg(long)]
    rll: Option<usize>,
    /// global balance tolerance
    #[arg(long)]
    gc_global: Option<String>,
    /// partition balance as "s,eps"
    #[arg(long)]
    gc_partition: Option<String>,
    /// local balance as "s,eps"
    #[arg(long)]
    gc_local: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SimMode {
    None,
    Sub,
    Edit,
    Exhaustive,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Construction {
    C1,
    C2,
    C3,
    C4,
}

#[derive(Args)]
struct SimArgs {
    /// corrupt a FASTA file instead of running a campaign
    #[arg(long, conflicts_with = "construction")]
    inject: bool,
    #[arg(long, value_enum)]
    construction: Option<Construction>,
    #[arg(long, value_enum, default_value_t = SimMode::None)]
    mode: SimMode,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    // construction parameters; which ones apply depends on --construction
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// FASTA to corrupt (inject mode)
    #[arg(long)]
    input: Option<PathBuf>,
    /// corrupted FASTA destination (inject mode)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SearchMode {
    Exhaustive,
    Sample,
}

#[derive(Args)]
struct SearchVtArgs {
    #[command(flatten)]
    params: ClArgs,
    #[arg(long, value_enum, default_value_t = SearchMode::Exhaustive)]
    mode: SearchMode,
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            let kind = match e {
                Error::NotMember { .. } | Error::NotCodeword(_) | Error::DecodeFailure(_) => {
                    "decode"
                }
                _ => "validation",
            };
            eprintln!("{}", json!({"error": {"kind": kind, "message": e.to_string()}}));
            std::process::exit(if kind == "decode" { 3 } else { 2 });
        }
    }
}

fn manifest(subcommand: &str, params: Value, seed: Option<u64>) -> Value {
    let mut m = json!({
        "subcommand": subcommand,
        "version": env!("CARGO_PKG_VERSION"),
        "params": params,
    });
    if let Some(s) = seed {
        m["seed"] = json!(s);
        m["rng"] = json!("chacha12");
    }
    m
}

fn emit(v: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("serializable");
    // a closed pipe (e.g. `| head`) ends the program, it is not an error
    if writeln!(std::io::stdout(), "{text}").is_err() {
        std::process::exit(0);
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Tables => cmd_tables(),
        Cmd::Count { family, n } => cmd_count(family, n),
        Cmd::Enumerate { family, n, cap } => cmd_enumerate(family, n, cap),
        Cmd::Growth { family, n_lo, n_hi } => cmd_growth(family, n_lo, n_hi),
        Cmd::C1 { op } => cmd_c1(op),
        Cmd::C2 { op } => cmd_c2(op),
        Cmd::C3 { op } => cmd_c3(op),
        Cmd::C4 { op } => cmd_c4(op),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::SearchVt(args) => cmd_search_vt(args),
    }
}

/// Reference growth values as printed alongside the families they describe.
const PRINTED_RATES: [(usize, f64); 5] = [
    (3, 1.5515),
    (5, 1.6980),
    (7, 1.7698),
    (9, 1.8131),
    (11, 1.8423),
];

fn cmd_tables() -> Result<i32> {
    let mut growth = Vec::new();
    for (m, printed) in PRINTED_RATES {
        let g = engine::growth_rate(&ConstraintSpec::zero_dominant(m)?, 10, 400)?;
        growth.push(json!({
            "m": m,
            "growth_rate": g,
            "one_plus_log2": 1.0 + g.log2(),
            "printed": printed,
        }));
    }

    let mut f0_sets = serde_json::Map::new();
    for n in 4..=7usize {
        let codec = Codec::new(&ConstraintSpec::f0_set(4)?, n)?;
        let members: Vec<String> = codec
            .enumerate_bits(1000)?
            .iter()
            .map(|b| b.to_string())
            .collect();
        f0_sets.insert(n.to_string(), json!(members));
    }

    let mut f_sets = Vec::new();
    for n in [7usize, 8] {
        let codec = Codec::new(&ConstraintSpec::f_set(4)?, n)?;
        let members: Vec<String> = codec
            .enumerate_bits(1000)?
            .iter()
            .map(|b| b.to_string())
            .collect();
        f_sets.push(json!({
            "n": n,
            "count": codec.count().to_string(),
            "members": members,
        }));
    }

    let root = engine::polynomial_root(4)?;
    let out = json!({
        "manifest": manifest("tables", json!({}), None),
        "dominant_growth": growth,
        "f0_ell4": f0_sets,
        "f_ell4": f_sets,
        "ell4_example": {
            "root": root,
            "inner_rate_limit": 1.0 + root.log2(),
        },
    });
    emit(&out);
    Ok(0)
}

fn cmd_count(family: FamilyArgs, n: usize) -> Result<i32> {
    let spec = family.resolve()?;
    let count = engine::count(&spec, n)?;
    emit(&json!({
        "manifest": manifest("count", family.describe(), None),
        "spec": spec,
        "n": n,
        "count": count.to_string(),
        "log2_count": log2_big(&count),
    }));
    Ok(0)
}

fn cmd_enumerate(family: FamilyArgs, n: usize, cap: u64) -> Result<i32> {
    let spec = family.resolve()?;
    let codec = Codec::new(&spec, n)?;
    let members: Vec<String> = codec
        .enumerate(cap)?
        .iter()
        .map(|syms| {
            if spec.alphabet_size() == 2 {
                syms.iter().map(|b| (b'0' + b) as char).collect()
            } else {
                QuatSeq::from_digits(syms).unwrap().to_dna().to_string()
            }
        })
        .collect();
    emit(&json!({
        "manifest": manifest("enumerate", family.describe(), None),
        "spec": spec,
        "n": n,
        "count": codec.count().to_string(),
        "members": members,
    }));
    Ok(0)
}

fn cmd_growth(family: FamilyArgs, n_lo: usize, n_hi: usize) -> Result<i32> {
    let spec = family.resolve()?;
    let g = engine::growth_rate(&spec, n_lo, n_hi)?;
    let count = engine::count(&spec, n_hi)?;
    emit(&json!({
        "manifest": manifest("growth", family.describe(), None),
        "spec": spec,
        "n_lo": n_lo,
        "n_hi": n_hi,
        "growth_rate": g,
        "log2_growth": g.log2(),
        "count_at_n_hi": count.to_string(),
        "log2_count": log2_big(&count),
    }));
    Ok(0)
}

/// Split a byte payload into per-codeword frames of `width` bits, the last
/// frame zero-padded.
fn frames(data: &[u8], width: usize) -> Vec<BitSeq> {
    let bits = bytes_to_bits(data);
    let mut out = Vec::new();
    let mut frame = BitSeq::zeros(0);
    for b in bits.iter() {
        frame.push(b);
        if frame.len() == width {
            out.push(std::mem::replace(&mut frame, BitSeq::zeros(0)));
        }
    }
    if !frame.is_empty() || out.is_empty() {
        while frame.len() < width {
            frame.push(0);
        }
        out.push(frame);
    }
    out
}

fn bits_field(frame: &BitSeq, start: usize, width: usize) -> BitSeq {
    let slice = &frame.as_slice()[start..start + width];
    BitSeq::from_bits(slice).unwrap()
}

/// Recorded on the first FASTA record so decoding can strip frame padding.
fn bytes_annotation(len: usize) -> String {
    format!("bytes={}", len)
}

fn parse_bytes_annotation(records: &[FastaRecord]) -> Result<usize> {
    let first = records.first().ok_or_else(|| Error::Parse {
        line: 1,
        msg: "no records in input".into(),
    })?;
    first
        .desc
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix("bytes="))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: "first record lacks a bytes= annotation".into(),
        })
}

fn assemble_output(chunks: Vec<BitSeq>, total_bytes: usize) -> Result<Vec<u8>> {
    let mut bits = BitSeq::zeros(0);
    for c in chunks {
        bits = bits.concat(&c);
    }
    if bits.len() < total_bytes * 8 {
        return Err(Error::Parse {
            line: 1,
            msg: format!(
                "records carry {} bits, fewer than the annotated {} bytes",
                bits.len(),
                total_bytes * 8
            ),
        });
    }
    let mut bytes = bits_to_bytes(&bits);
    bytes.truncate(total_bytes);
    Ok(bytes)
}

fn cmd_c1(op: C1Op) -> Result<i32> {
    match op {
        C1Op::Encode {
            params,
            input,
            output,
        } => {
            let code = C1Code::new(C1Params::new(params.m, params.ell, params.n, params.t)?)?;
            let x_bits = code.x_data_bits() as usize;
            let y_bits = code.params().y_len();
            let data = fs::read(&input)?;
            let mut records = Vec::new();
            for (i, frame) in frames(&data, x_bits + y_bits).iter().enumerate() {
                let msg = C1Message {
                    x_index: bits_field(frame, 0, x_bits).to_uint(),
                    y_bits: bits_field(frame, x_bits, y_bits),
                };
                let desc = if i == 0 {
                    bytes_annotation(data.len())
                } else {
                    String::new()
                };
                records.push(FastaRecord::new(format!("b{}", i), desc, code.encode(&msg)?));
            }
            let mut out = fs::File::create(&output)?;
            write_fasta(&mut out, &records)?;
            Ok(0)
        }
        C1Op::Decode {
            params,
            input,
            output,
        } => {
            let code = C1Code::new(C1Params::new(params.m, params.ell, params.n, params.t)?)?;
            let x_bits = code.x_data_bits() as usize;
            let records = read_fasta(BufReader::new(fs::File::open(&input)?))?;
            let total = parse_bytes_annotation(&records)?;
            let mut chunks = Vec::new();
            for rec in &records {
                let msg = code.decode(&rec.seq)?;
                let x = BitSeq::from_uint(&msg.x_index, x_bits).map_err(|_| {
                    Error::NotCodeword("first-stream index exceeds the payload frame".into())
                })?;
                chunks.push(x.concat(&msg.y_bits));
            }
            fs::write(&output, assemble_output(chunks, total)?)?;
            Ok(0)
        }
    }
}

/// Payload bits carried per codeword of a code with `count` words: the
/// largest b with 2^b <= count.
fn payload_bits(count: &BigUint) -> usize {
    (count.bits() - 1) as usize
}

/// Frame value -> base-q message symbols, most significant first.
fn value_to_symbols(value: &BigUint, q: u64, k: usize) -> Vec<u64> {
    let mut digits = vec![0u64; k];
    let mut v = value.clone();
    let q_big = BigUint::from(q);
    for d in digits.iter_mut().rev() {
        *d = (&v % &q_big).to_u64().unwrap();
        v /= &q_big;
    }
    digits
}

fn symbols_to_value(symbols: &[u64], q: u64) -> BigUint {
    let mut v = BigUint::zero();
    for &s in symbols {
        v = v * q + s;
    }
    v
}

fn cmd_c2(op: C2Op) -> Result<i32> {
    match op {
        C2Op::Build { params } => {
            let code = params.build()?;
            emit(&json!({
                "manifest": manifest("c2-build", params.describe(), None),
                "t": code.t(),
                "k": code.k(),
                "word_length": code.word_length(),
                "cardinality": code.cardinality().to_string(),
                "rate": code.rate(),
                "eps_effective": code.eps_effective(),
                "inner_cardinality": code.inner().cardinality().to_string(),
                "asymptotic_condition_holds": code.params().cl.asymptotic_condition_holds(),
            }));
            Ok(0)
        }
        C2Op::Encode {
            params,
            input,
            output,
        } => {
            let code = params.build()?;
            let b = payload_bits(&code.cardinality());
            let data = fs::read(&input)?;
            let mut records = Vec::new();
            for (i, frame) in frames(&data, b).iter().enumerate() {
                let msg = value_to_symbols(&frame.to_uint(), code.params().q, code.k());
                let desc = if i == 0 {
                    bytes_annotation(data.len())
                } else {
                    String::new()
                };
                records.push(FastaRecord::new(format!("b{}", i), desc, code.encode(&msg)?));
            }
            let mut out = fs::File::create(&output)?;
            write_fasta(&mut out, &records)?;
            Ok(0)
        }
        C2Op::Decode {
            params,
            input,
            output,
        } => {
            let code = params.build()?;
            let b = payload_bits(&code.cardinality());
            let records = read_fasta(BufReader::new(fs::File::open(&input)?))?;
            let total = parse_bytes_annotation(&records)?;
            let mut chunks = Vec::new();
            for rec in &records {
                let msg = code.decode(&rec.seq)?;
                let v = symbols_to_value(&msg, code.params().q);
                let bits = BitSeq::from_uint(&v, b).map_err(|_| {
                    Error::NotCodeword("message exceeds the payload frame".into())
                })?;
                chunks.push(bits);
            }
            fs::write(&output, assemble_output(chunks, total)?)?;
            Ok(0)
        }
    }
}

/// The deterministic subcode listing shared by c3 encode and decode.
fn c3_subcode(code: &C2Code, cap: u64) -> Result<(dnacode::ecc::VtClass, Vec<DnaSeq>)> {
    let words = code.enumerate_codewords(cap)?;
    let (cls, members) = find_vt_class(&words)?;
    Ok((cls, members.into_iter().map(|i| words[i].clone()).collect()))
}

fn cmd_c3(op: C3Op) -> Result<i32> {
    match op {
        C3Op::Build { params, cap, fasta } => {
            let code = params.build()?;
            let total = code.cardinality();
            let (cls, sub) = c3_subcode(&code, cap)?;
            let n = code.word_length();
            if let Some(path) = fasta {
                let records: Vec<FastaRecord> = sub
                    .iter()
                    .enumerate()
                    .map(|(i, w)| FastaRecord::new(format!("w{}", i), String::new(), w.clone()))
                    .collect();
                write_fasta(&mut fs::File::create(&path)?, &records)?;
            }
            emit(&json!({
                "manifest": manifest("c3-build", params.describe(), None),
                "a0": cls.a(),
                "b0": cls.b(),
                "word_length": n,
                "code_size": total.to_string(),
                "subcode_size": sub.len(),
                "pigeonhole_bound": total.to_usize().map(|c| c.div_ceil(4 * n)),
            }));
            Ok(0)
        }
        C3Op::Encode {
            params,
            cap,
            input,
            output,
        } => {
            let code = params.build()?;
            let (_, sub) = c3_subcode(&code, cap)?;
            let b = payload_bits(&BigUint::from(sub.len()));
            let data = fs::read(&input)?;
            let mut records = Vec::new();
            for (i, frame) in frames(&data, b).iter().enumerate() {
                let index = frame.to_uint().to_usize().unwrap();
                let desc = if i == 0 {
                    bytes_annotation(data.len())
                } else {
                    String::new()
                };
                records.push(FastaRecord::new(
                    format!("b{}", i),
                    desc,
                    sub[index].clone(),
                ));
            }
            write_fasta(&mut fs::File::create(&output)?, &records)?;
            Ok(0)
        }
        C3Op::Decode {
            params,
            cap,
            a0,
            b0,
            input,
            output,
        } => {
            let code = params.build()?;
            let (cls, sub) = c3_subcode(&code, cap)?;
            if (cls.a(), cls.b()) != (a0, b0) {
                return Err(Error::InvalidParams(format!(
                    "class ({}, {}) does not match the code's fullest class ({}, {})",
                    a0,
                    b0,
                    cls.a(),
                    cls.b()
                )));
            }
            let index_of: std::collections::HashMap<String, usize> = sub
                .iter()
                .enumerate()
                .map(|(i, w)| (w.to_string(), i))
                .collect();
            let b = payload_bits(&BigUint::from(sub.len()));
            let records = read_fasta(BufReader::new(fs::File::open(&input)?))?;
            let total = parse_bytes_annotation(&records)?;
            let mut chunks = Vec::new();
            for rec in &records {
                let msg = c3_decode_edit(&rec.seq, &cls, &code)?;
                let word = code.encode(&msg)?;
                let index = *index_of.get(&word.to_string()).ok_or_else(|| {
                    Error::DecodeFailure("corrected word is outside the subcode".into())
                })?;
                chunks.push(BitSeq::from_uint(&BigUint::from(index), b).unwrap());
            }
            fs::write(&output, assemble_output(chunks, total)?)?;
            Ok(0)
        }
    }
}

fn cmd_c4(op: C4Op) -> Result<i32> {
    match op {
        C4Op::Build { params, cap, fasta } => {
            let code = params.build()?;
            let words = code.enumerate_codewords(cap)?;
            let (cls, members) = find_vt_class(&words)?;
            if let Some(path) = fasta {
                let records: Vec<FastaRecord> = members
                    .iter()
                    .map(|&i| FastaRecord::new(format!("w{}", i), String::new(), words[i].clone()))
                    .collect();
                write_fasta(&mut fs::File::create(&path)?, &records)?;
            }
            emit(&json!({
                "manifest": manifest("c4-build", params.describe(), None),
                "s0": code.inner().word_length(),
                "word_length": code.word_length(),
                "delta": code.delta(),
                "cardinality": code.cardinality().to_string(),
                "a0": cls.a(),
                "b0": cls.b(),
                "subcode_size": members.len(),
            }));
            Ok(0)
        }
        C4Op::Encode {
            params,
            subcode,
            cap,
            input,
            output,
        } => {
            let code = params.build()?;
            let data = fs::read(&input)?;
            let mut records = Vec::new();
            if subcode {
                let (_, sub) = c4_subcode(&code, cap)?;
                let b = payload_bits(&BigUint::from(sub.len()));
                for (i, frame) in frames(&data, b).iter().enumerate() {
                    let index = frame.to_uint().to_usize().unwrap();
                    let desc = if i == 0 {
                        bytes_annotation(data.len())
                    } else {
                        String::new()
                    };
                    records.push(FastaRecord::new(
                        format!("b{}", i),
                        desc,
                        sub[index].clone(),
                    ));
                }
            } else {
                let inner_bits = payload_bits(&code.inner().cardinality());
                let width = inner_bits * code.t();
                let q = code.inner().params().q;
                let k = code.inner().k();
                for (i, frame) in frames(&data, width).iter().enumerate() {
                    let msgs: Vec<Vec<u64>> = (0..code.t())
                        .map(|j| {
                            let field = bits_field(frame, j * inner_bits, inner_bits);
                            value_to_symbols(&field.to_uint(), q, k)
                        })
                        .collect();
                    let desc = if i == 0 {
                        bytes_annotation(data.len())
                    } else {
                        String::new()
                    };
                    records.push(FastaRecord::new(format!("b{}", i), desc, code.encode(&msgs)?));
                }
            }
            write_fasta(&mut fs::File::create(&output)?, &records)?;
            Ok(0)
        }
        C4Op::Decode {
            params,
            a0,
            b0,
            cap,
            input,
            output,
        } => {
            let code = params.build()?;
            let records = read_fasta(BufReader::new(fs::File::open(&input)?))?;
            let total = parse_bytes_annotation(&records)?;
            let mut chunks = Vec::new();
            match (a0, b0) {
                (Some(a), Some(b)) => {
                    let (cls, sub) = c4_subcode(&code, cap)?;
                    if (cls.a(), cls.b()) != (a, b) {
                        return Err(Error::InvalidParams(format!(
                            "class ({}, {}) does not match the code's fullest class ({}, {})",
                            a,
                            b,
                            cls.a(),
                            cls.b()
                        )));
                    }
                    let index_of: std::collections::HashMap<String, usize> = sub
                        .iter()
                        .enumerate()
                        .map(|(i, w)| (w.to_string(), i))
                        .collect();
                    let bw = payload_bits(&BigUint::from(sub.len()));
                    for rec in &records {
                        let msgs = code.decode_edit(&rec.seq, &cls)?;
                        let word = code.encode(&msgs)?;
                        let index = *index_of.get(&word.to_string()).ok_or_else(|| {
                            Error::DecodeFailure("corrected word is outside the subcode".into())
                        })?;
                        chunks.push(BitSeq::from_uint(&BigUint::from(index), bw).unwrap());
                    }
                }
                (None, None) => {
                    let inner_bits = payload_bits(&code.inner().cardinality());
                    let q = code.inner().params().q;
                    for rec in &records {
                        for m in &code.decode(&rec.seq)? {
                            let bits = BitSeq::from_uint(&symbols_to_value(m, q), inner_bits)
                                .map_err(|_| {
                                    Error::NotCodeword(
                                        "message exceeds the payload frame".into(),
                                    )
                                })?;
                            chunks.push(bits);
                        }
                    }
                }
                _ => {
                    return Err(Error::InvalidParams(
                        "--a0 and --b0 must be given together".into(),
                    ))
                }
            }
            fs::write(&output, assemble_output(chunks, total)?)?;
            Ok(0)
        }
    }
}

/// Deterministic VT subcode of the locally balanced code, words by value.
fn c4_subcode(code: &C4Code, cap: u64) -> Result<(dnacode::ecc::VtClass, Vec<DnaSeq>)> {
    let words = code.enumerate_codewords(cap)?;
    let (cls, members) = find_vt_class(&words)?;
    Ok((cls, members.into_iter().map(|i| words[i].clone()).collect()))
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let parse_pair = |text: &str, what: &str| -> Result<(usize, Eps)> {
        let (s, e) = text.split_once(',').ok_or_else(|| {
            Error::InvalidParams(format!("--{} wants \"s,eps\"", what))
        })?;
        let s = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad window in --{}", what)))?;
        Ok((s, Eps::from_str(e.trim())?))
    };
    let global = args.gc_global.as_deref().map(Eps::from_str).transpose()?;
    let partition = args
        .gc_partition
        .as_deref()
        .map(|t| parse_pair(t, "gc-partition"))
        .transpose()?;
    let local = args
        .gc_local
        .as_deref()
        .map(|t| parse_pair(t, "gc-local"))
        .transpose()?;

    let records = read_fasta(BufReader::new(fs::File::open(&args.input)?))?;
    let mut all_pass = true;
    let mut rows = Vec::new();
    for rec in &records {
        let mut row = serde_json::Map::new();
        row.insert("id".into(), json!(rec.id));
        let mut note = |name: &str, ok: bool, row: &mut serde_json::Map<String, Value>| {
            row.insert(name.into(), json!(ok));
            all_pass &= ok;
        };
        if let Some(m) = args.ssa {
            note("ssa", oracles::is_m_ssa(&rec.seq, m), &mut row);
        }
        if let Some(l) = args.rll {
            note("rll", rec.seq.max_run_length() <= l, &mut row);
        }
        if let Some(eps) = global {
            let ok = oracles::is_balanced(&rec.seq, &BalanceKind::Global { eps })?;
            note("gc_global", ok, &mut row);
        }
        if let Some((s, eps)) = partition {
            let ok = oracles::is_balanced(&rec.seq, &BalanceKind::Partition { s, eps })?;
            note("gc_partition", ok, &mut row);
        }
        if let Some((s, eps)) = local {
            let ok = oracles::is_balanced(&rec.seq, &BalanceKind::Local { s, eps })?;
            note("gc_local", ok, &mut row);
        }
        rows.push(Value::Object(row));
    }
    emit(&json!({
        "manifest": manifest("verify", json!({
            "input": args.input,
            "ssa": args.ssa,
            "rll": args.rll,
            "gc_global": args.gc_global,
            "gc_partition": args.gc_partition,
            "gc_local": args.gc_local,
        }), None),
        "records": rows,
        "all_pass": all_pass,
    }));
    Ok(if all_pass { 0 } else { 4 })
}

fn sim_mode_to_error_mode(mode: SimMode) -> ErrorMode {
    match mode {
        SimMode::None => ErrorMode::None,
        SimMode::Sub => ErrorMode::Substitution,
        SimMode::Edit | SimMode::Exhaustive => ErrorMode::Edit,
    }
}

fn cmd_simulate(args: SimArgs) -> Result<i32> {
    if args.inject {
        return cmd_inject(args);
    }
    let Some(construction) = args.construction else {
        return Err(Error::InvalidParams(
            "--construction required unless --inject".into(),
        ));
    };
    let need_usize = |v: Option<usize>, what: &str| {
        v.ok_or_else(|| Error::InvalidParams(format!("--{} required", what)))
    };
    let report = match construction {
        Construction::C1 => {
            if args.mode != SimMode::None {
                return Err(Error::InvalidParams(
                    "this construction corrects nothing; only --mode none applies".into(),
                ));
            }
            let p = C1Params::new(
                need_usize(args.m, "m")?,
                need_usize(args.ell, "ell")?,
                need_usize(args.n, "n")?,
                need_usize(args.t, "t")?,
            )?;
            let code = C1Code::new(p)?;
            run_random_campaign(
                args.trials,
                args.seed,
                ErrorMode::None,
                |rng| {
                    let msg = C1Message {
                        x_index: BigUint::from(rng.random::<u64>()) % code.x_count(),
                        y_bits: random_bits(code.params().y_len(), rng),
                    };
                    (code.encode(&msg).unwrap(), msg)
                },
                |w| code.decode(w),
            )
        }
        Construction::C2 => {
            let code = sim_cl_args(&args)?.build()?;
            match args.mode {
                SimMode::Edit => {
                    return Err(Error::InvalidParams(
                        "this construction corrects substitutions only".into(),
                    ))
                }
                SimMode::Exhaustive => {
                    let words = decode_annotated(&code, args.cap)?;
                    run_exhaustive_campaign(&words, ErrorMode::Substitution, args.cap, |w| {
                        code.decode(w)
                    })?
                }
                mode => run_random_campaign(
                    args.trials,
                    args.seed,
                    sim_mode_to_error_mode(mode),
                    |rng| {
                        let msg: Vec<u64> = (0..code.k())
                            .map(|_| rng.random_range(0..code.params().q))
                            .collect();
                        (code.encode(&msg).unwrap(), msg)
                    },
                    |w| code.decode(w),
                ),
            }
        }
        Construction::C3 => {
            let code = sim_cl_args(&args)?.build()?;
            let (cls, sub) = c3_subcode(&code, args.cap)?;
            let annotated: Vec<(DnaSeq, Vec<u64>)> = sub
                .iter()
                .map(|w| (w.clone(), code.decode(w).unwrap()))
                .collect();
            match args.mode {
                SimMode::Exhaustive => {
                    run_exhaustive_campaign(&annotated, ErrorMode::Edit, args.cap, |w| {
                        c3_decode_edit(w, &cls, &code)
                    })?
                }
                mode => run_random_campaign(
                    args.trials,
                    args.seed,
                    sim_mode_to_error_mode(mode),
                    |rng| annotated[rng.random_range(0..annotated.len())].clone(),
                    |w| c3_decode_edit(w, &cls, &code),
                ),
            }
        }
        Construction::C4 => {
            let code = C4Code::new(
                sim_cl_args(&args)?.build()?,
                need_usize(args.t, "t")?,
                need_usize(args.s, "s")?,
            )?;
            let words = code.enumerate_codewords(args.cap)?;
            let (cls, members) = find_vt_class(&words)?;
            let annotated: Vec<(DnaSeq, Vec<Vec<u64>>)> = members
                .iter()
                .map(|&i| (words[i].clone(), code.decode(&words[i]).unwrap()))
                .collect();
            match args.mode {
                SimMode::Exhaustive => {
                    run_exhaustive_campaign(&annotated, ErrorMode::Edit, args.cap, |w| {
                        code.decode_edit(w, &cls)
                    })?
                }
                mode => run_random_campaign(
                    args.trials,
                    args.seed,
                    sim_mode_to_error_mode(mode),
                    |rng| annotated[rng.random_range(0..annotated.len())].clone(),
                    |w| code.decode_edit(w, &cls),
                ),
            }
        }
    };
    let clean = report.is_clean();
    emit_report(&args, construction, &report);
    Ok(if clean { 0 } else { 3 })
}

fn emit_report(args: &SimArgs, construction: Construction, report: &TrialReport) {
    let params = json!({
        "construction": match construction {
            Construction::C1 => "c1",
            Construction::C2 => "c2",
            Construction::C3 => "c3",
            Construction::C4 => "c4",
        },
        "mode": match args.mode {
            SimMode::None => "none",
            SimMode::Sub => "sub",
            SimMode::Edit => "edit",
            SimMode::Exhaustive => "exhaustive",
        },
        "trials": args.trials,
        "cap": args.cap,
        "m": args.m, "ell": args.ell, "eps": args.eps, "n": args.n,
        "t": args.t, "q": args.q, "r": args.r, "s": args.s,
    });
    emit(&json!({
        "manifest": manifest("simulate", params, Some(args.seed)),
        "report": report,
    }));
}

fn sim_cl_args(args: &SimArgs) -> Result<ClArgs> {
    let need = |what: &str| Error::InvalidParams(format!("--{} required", what));
    Ok(ClArgs {
        ell: args.ell.ok_or_else(|| need("ell"))?,
        eps: args.eps.clone().ok_or_else(|| need("eps"))?,
        n: args.n.ok_or_else(|| need("n"))?,
        q: args.q.ok_or_else(|| need("q"))?,
        r: args.r.ok_or_else(|| need("r"))?,
    })
}

fn decode_annotated(code: &C2Code, cap: u64) -> Result<Vec<(DnaSeq, Vec<u64>)>> {
    Ok(code
        .enumerate_codewords(cap)?
        .into_iter()
        .map(|w| {
            let m = code.decode(&w).unwrap();
            (w, m)
        })
        .collect())
}

fn random_bits(len: usize, rng: &mut ChaCha12Rng) -> BitSeq {
    let v: Vec<u8> = (0..len).map(|_| rng.random_range(0..2u8)).collect();
    BitSeq::from_bits(&v).unwrap()
}

fn cmd_inject(args: SimArgs) -> Result<i32> {
    let input = args
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("--input required with --inject".into()))?;
    let output = args
        .output
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("--output required with --inject".into()))?;
    let mode = sim_mode_to_error_mode(args.mode);
    let mut records = read_fasta(BufReader::new(fs::File::open(input)?))?;
    for (i, rec) in records.iter_mut().enumerate() {
        let mut rng = ChaCha12Rng::seed_from_u64(channel::derive_seed(args.seed, i as u64));
        if let Some(event) = channel::draw_random_event(&mut rng, &rec.seq, mode) {
            rec.seq = channel::apply_edit(&rec.seq, &event)?;
            let tag = format!(
                "edited={:?}@{}{}",
                event.kind,
                event.position,
                event
                    .symbol
                    .map(|s| format!("->{}", s.to_char()))
                    .unwrap_or_default()
            );
            if rec.desc.is_empty() {
                rec.desc = tag;
            } else {
                rec.desc = format!("{} {}", rec.desc, tag);
            }
        }
    }
    write_fasta(&mut fs::File::create(output)?, &records)?;
    Ok(0)
}

fn cmd_search_vt(args: SearchVtArgs) -> Result<i32> {
    let code = args.params.build()?;
    let n = code.word_length();
    let out = match args.mode {
        SearchMode::Exhaustive => {
            let words = code.enumerate_codewords(args.cap)?;
            let (cls, members) = find_vt_class(&words)?;
            let bound = words.len().div_ceil(4 * n);
            json!({
                "manifest": manifest("search-vt", args.params.describe(), None),
                "mode": "exhaustive",
                "a0": cls.a(),
                "b0": cls.b(),
                "scanned": words.len(),
                "bucket": members.len(),
                "pigeonhole_bound": bound,
                "bound_met": members.len() >= bound,
            })
        }
        SearchMode::Sample => {
            let (cls, hits) = find_vt_class_sampled(&code, args.samples, args.seed)?;
            json!({
                "manifest": manifest("search-vt", args.params.describe(), Some(args.seed)),
                "mode": "sample",
                "a0": cls.a(),
                "b0": cls.b(),
                "scanned": args.samples,
                "bucket": hits,
                "note": "empirical counts only; the pigeonhole bound needs exhaustive mode",
            })
        }
    };
    emit(&out);
    Ok(0)
}
