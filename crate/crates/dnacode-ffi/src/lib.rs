//! C ABI over the constrained-code library. Handles are opaque, every entry
//! point returns a status code, and panics are caught at the boundary.
//!
//! Strings returned through `char **` out-params are owned by the library;
//! release them with `dc_string_free`. The per-thread message from
//! `dc_last_error_message` is valid until the next failing call on that
//! thread.
//!
//! Safety contract, shared by every entry point: pointer arguments must be
//! null or valid for the stated direction, strings must be NUL-terminated,
//! and handles must come from the matching `_new` and not be used after
//! `_free`. Null pointers are reported as `DcNullArgument`, never dereferenced.

// The per-function `# Safety` sections would each restate the crate-level
// contract above.
#![allow(clippy::missing_safety_doc)]

use dnacode::alphabet::{BitSeq, DnaSeq};
use dnacode::construction1::{C1Code, C1Message, C1Params};
use dnacode::dna_ecc::{c3_decode_edit, find_vt_class, C2Code, C2Params, CLEpsParams};
use dnacode::ecc::VtClass;
use dnacode::error::Error;
use dnacode::oracles::Eps;
use libc::{c_char, size_t};
use num_bigint::BigUint;
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

/// Status returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DcStatus {
    DcOk = 0,
    /// a parameter is out of range or inconsistent
    DcInvalidParams = 1,
    /// a sequence contains a symbol outside the alphabet
    DcBadSymbol = 2,
    /// a word is not a member of the constrained family
    DcNotMember = 3,
    /// a word is not in the code
    DcNotCodeword = 4,
    /// correction failed or was ambiguous
    DcDecodeFailure = 5,
    /// an enumeration would exceed the configured cap
    DcCapExceeded = 6,
    /// a required pointer argument was null
    DcNullArgument = 7,
    /// an internal panic was caught at the boundary
    DcPanic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(sanitized).unwrap());
}

fn status_of(e: &Error) -> DcStatus {
    match e {
        Error::InvalidParams(_) => DcStatus::DcInvalidParams,
        Error::BadSymbol { .. } => DcStatus::DcBadSymbol,
        Error::NotMember { .. } => DcStatus::DcNotMember,
        Error::NotCodeword(_) => DcStatus::DcNotCodeword,
        Error::DecodeFailure(_) => DcStatus::DcDecodeFailure,
        Error::CapExceeded { .. } => DcStatus::DcCapExceeded,
        Error::Parse { .. } | Error::Io(_) => DcStatus::DcInvalidParams,
    }
}

fn guard(body: impl FnOnce() -> DcStatus) -> DcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".into());
            set_error(&msg);
            DcStatus::DcPanic
        }
    }
}

fn fail(e: &Error) -> DcStatus {
    set_error(&e.to_string());
    status_of(e)
}

/// Reads a required C string argument; null or invalid UTF-8 fails.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, DcStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(DcStatus::DcNullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        DcStatus::DcInvalidParams
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> DcStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            DcStatus::DcOk
        }
        Err(_) => {
            set_error("output contained an interior NUL");
            DcStatus::DcPanic
        }
    }
}

/// Message for the most recent failure on this thread. Never null; empty
/// before any failure. Do not free.
#[no_mangle]
pub extern "C" fn dc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned through a `char **` out-param. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn dc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Structure-avoiding run-length-limited code (no error correction).
pub struct DcC1 {
    code: C1Code,
}

/// Concatenated substitution-correcting code.
pub struct DcC2 {
    code: C2Code,
}

/// Single-edit-correcting subcode: a C2 code restricted to its fullest VT
/// class, messages addressed by subcode index.
pub struct DcC3 {
    code: C2Code,
    class: VtClass,
    words: Vec<DnaSeq>,
}

macro_rules! take_handle {
    ($ptr:expr) => {{
        if $ptr.is_null() {
            set_error("null handle");
            return DcStatus::DcNullArgument;
        }
        &*$ptr
    }};
}

/// Creates a structure-avoiding RLL encoder. `word_length_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn dc_c1_new(
    m: size_t,
    ell: size_t,
    n: size_t,
    t: size_t,
    word_length_out: *mut size_t,
    handle_out: *mut *mut DcC1,
) -> DcStatus {
    guard(|| {
        if handle_out.is_null() {
            set_error("null handle_out");
            return DcStatus::DcNullArgument;
        }
        let params = match C1Params::new(m, ell, n, t) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        match C1Code::new(params) {
            Ok(code) => {
                if !word_length_out.is_null() {
                    *word_length_out = code.params().word_length();
                }
                *handle_out = Box::into_raw(Box::new(DcC1 { code }));
                DcStatus::DcOk
            }
            Err(e) => fail(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn dc_c1_free(handle: *mut DcC1) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Payload shape: `x_bits_out` bits address the first stream, `y_bits_out`
/// bits ride the second stream verbatim.
#[no_mangle]
pub unsafe extern "C" fn dc_c1_payload_bits(
    handle: *const DcC1,
    x_bits_out: *mut size_t,
    y_bits_out: *mut size_t,
) -> DcStatus {
    guard(|| {
        let h = take_handle!(handle);
        if x_bits_out.is_null() || y_bits_out.is_null() {
            set_error("null out-param");
            return DcStatus::DcNullArgument;
        }
        *x_bits_out = h.code.x_data_bits() as size_t;
        *y_bits_out = h.code.params().y_len();
        DcStatus::DcOk
    })
}

/// Encodes a message into a DNA word. `x_index` is a decimal integer,
/// `y_bits` a string over {'0','1'} of exactly the advertised length.
#[no_mangle]
pub unsafe extern "C" fn dc_c1_encode(
    handle: *const DcC1,
    x_index: *const c_char,
    y_bits: *const c_char,
    dna_out: *mut *mut c_char,
) -> DcStatus {
    guard(|| {
        let h = take_handle!(handle);
        if dna_out.is_null() {
            set_error("null dna_out");
            return DcStatus::DcNullArgument;
        }
        let (x_text, y_text) = match (read_str(x_index), read_str(y_bits)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let x = match BigUint::from_str(x_text) {
            Ok(v) => v,
            Err(_) => {
                set_error("x_index is not a decimal integer");
                return DcStatus::DcInvalidParams;
            }
        };
        let y = match parse_bits(y_text) {
            Ok(b) => b,
            Err(s) => return s,
        };
        let msg = C1Message {
            x_index: x,
            y_bits: y,
        };
        match h.code.encode(&msg) {
            Ok(word) => give_string(word.to_string(), dna_out),
            Err(e) => fail(&e),
        }
    })
}

/// Decodes a DNA word back into its message parts.
#[no_mangle]
pub unsafe extern "C" fn dc_c1_decode(
    handle: *const DcC1,
    dna: *const c_char,
    x_index_out: *mut *mut c_char,
    y_bits_out: *mut *mut c_char,
) -> DcStatus {
    guard(|| {
        let h = take_handle!(handle);
        if x_index_out.is_null() || y_bits_out.is_null() {
            set_error("null out-param");
            return DcStatus::DcNullArgument;
        }
        let word = match parse_dna(dna) {
            Ok(w) => w,
            Err(s) => return s,
        };
        match h.code.decode(&word) {
            Ok(msg) => {
                let status = give_string(msg.x_index.to_string(), x_index_out);
                if status != DcStatus::DcOk {
                    return status;
                }
                let status = give_string(msg.y_bits.to_string(), y_bits_out);
                if status != DcStatus::DcOk {
                    dc_string_free(*x_index_out);
                    *x_index_out = std::ptr::null_mut();
                }
                status
            }
            Err(e) => fail(&e),
        }
    })
}

/// Creates a substitution-correcting code. Balance tolerance is the fraction
/// `eps_num / eps_den`. `k_out` and `word_length_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn dc_c2_new(
    ell: size_t,
    eps_num: u64,
    eps_den: u64,
    n: size_t,
    q: u64,
    r: size_t,
    k_out: *mut size_t,
    word_length_out: *mut size_t,
    handle_out: *mut *mut DcC2,
) -> DcStatus {
    guard(|| {
        if handle_out.is_null() {
            set_error("null handle_out");
            return DcStatus::DcNullArgument;
        }
        match build_c2(ell, eps_num, eps_den, n, q, r) {
            Ok(code) => {
                if !k_out.is_null() {
                    *k_out = code.k();
                }
                if !word_length_out.is_null() {
                    *word_length_out = code.word_length();
                }
                *handle_out = Box::into_raw(Box::new(DcC2 { code }));
                DcStatus::DcOk
            }
            Err(e) => fail(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn dc_c2_free(handle: *mut DcC2) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Encodes `k` field symbols (each below q) into a DNA word.
#[no_mangle]
pub unsafe extern "C" fn dc_c2_encode(
    handle: *const DcC2,
    message: *const u64,
    message_len: size_t,
    dna_out: *mut *mut c_char,
) -> DcStatus {
    guard(|| {
        let h = take_handle!(handle);
        if message.is_null() || dna_out.is_null() {
            set_error("null argument");
            return DcStatus::DcNullArgument;
        }
        let msg = std::slice::from_raw_parts(message, message_len);
        match h.code.encode(msg) {
            Ok(word) => give_string(word.to_string(), dna_out),
            Err(e) => fail(&e),
        }
    })
}

/// Decodes a DNA word, correcting up to one substitution. `message_out`
/// must hold `k` symbols.
#[no_mangle]
pub unsafe extern "C" fn dc_c2_decode(
    handle: *const DcC2,
    dna: *const c_char,
    message_out: *mut u64,
    message_len: size_t,
) -> DcStatus {
    guard(|| {
        let h = take_handle!(handle);
        if message_out.is_null() {
            set_error("null message_out");
            return DcStatus::DcNullArgument;
        }
        if message_len != h.code.k() {
            set_error("message_out length does not match k");
            return DcStatus::DcInvalidParams;
        }
        let word = match parse_dna(dna) {
            Ok(w) => w,
            Err(s) => return s,
        };
        match h.code.decode(&word) {
            Ok(msg) => {
                std::slice::from_raw_parts_mut(message_out, message_len).copy_from_slice(&msg);
                DcStatus::DcOk
            }
            Err(e) => fail(&e),
        }
    })
}

/// Builds the single-edit-correcting subcode of a substitution-correcting
/// code: enumerates at most `cap` codewords and keeps the fullest VT class.
/// The outputs may be null.
#[no_mangle]
pub unsafe extern "C" fn dc_c3_new(
    ell: size_t,
    eps_num: u64,
    eps_den: u64,
    n: size_t,
    q: u64,
    r: size_t,
    cap: u64,
    subcode_size_out: *mut size_t,
    word_length_out: *mut size_t,
    handle_out: *mut *mut DcC3,
) -> DcStatus {
    guard(|| {
        if handle_out.is_null() {
            set_error("null handle_out");
            return DcStatus::DcNullArgument;
        }
        let code = match build_c2(ell, eps_num, eps_den, n, q, r) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        let words = match code.enumerate_codewords(cap) {
            Ok(w) => w,
            Err(e) => return fail(&e),
        };
        let (class, members) = match find_vt_class(&words) {
            Ok(v) => v,
            Err(e) => return fail(&e),
        };
        let words: Vec<DnaSeq> = members.into_iter().map(|i| words[i].clone()).collect();
        if !subcode_size_out.is_null() {
            *subcode_size_out = words.len();
        }
        if !word_length_out.is_null() {
            *word_length_out = code.word_length();
        }
        *handle_out = Box::into_raw(Box::new(DcC3 { code, class, words }));
        DcStatus::DcOk
    })
}

#[no_mangle]
pub unsafe extern "C" fn dc_c3_free(handle: *mut DcC3) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// VT class residues of the subcode.
#[no_mangle]
pub unsafe extern "C" fn dc_c3_class(
    handle: *const DcC3,
    a_out: *mut u64,
    b_out: *mut u8,
) -> DcStatus {
    guard(|| {
        let h = take_handle!(handle);
        if a_out.is_null() || b_out.is_null() {
            set_error("null out-param");
            return DcStatus::DcNullArgument;
        }
        *a_out = h.class.a();
        *b_out = h.class.b();
        DcStatus::DcOk
    })
}

/// Encodes a subcode index into a DNA word.
#[no_mangle]
pub unsafe extern "C" fn dc_c3_encode(
    handle: *const DcC3,
    index: u64,
    dna_out: *mut *mut c_char,
) -> DcStatus {
    guard(|| {
        let h = take_handle!(handle);
        if dna_out.is_null() {
            set_error("null dna_out");
            return DcStatus::DcNullArgument;
        }
        match h.words.get(index as usize) {
            Some(w) => give_string(w.to_string(), dna_out),
            None => {
                set_error("index is outside the subcode");
                DcStatus::DcInvalidParams
            }
        }
    })
}

/// Decodes a received word whose length may be off by one, correcting a
/// single edit, and returns the subcode index it encodes.
#[no_mangle]
pub unsafe extern "C" fn dc_c3_decode(
    handle: *const DcC3,
    dna: *const c_char,
    index_out: *mut u64,
) -> DcStatus {
    guard(|| {
        let h = take_handle!(handle);
        if index_out.is_null() {
            set_error("null index_out");
            return DcStatus::DcNullArgument;
        }
        let word = match parse_dna(dna) {
            Ok(w) => w,
            Err(s) => return s,
        };
        let msg = match c3_decode_edit(&word, &h.class, &h.code) {
            Ok(m) => m,
            Err(e) => return fail(&e),
        };
        let corrected = match h.code.encode(&msg) {
            Ok(w) => w,
            Err(e) => return fail(&e),
        };
        match h.words.iter().position(|w| *w == corrected) {
            Some(i) => {
                *index_out = i as u64;
                DcStatus::DcOk
            }
            None => {
                set_error("corrected word is outside the subcode");
                DcStatus::DcDecodeFailure
            }
        }
    })
}

/// Exact member count of the zero-dominant / RLL family intersection, as a
/// decimal string. Either window may be zero to disable that constraint.
#[no_mangle]
pub unsafe extern "C" fn dc_count_constrained(
    dominance_window: size_t,
    run_limit: size_t,
    n: size_t,
    count_out: *mut *mut c_char,
) -> DcStatus {
    guard(|| {
        if count_out.is_null() {
            set_error("null count_out");
            return DcStatus::DcNullArgument;
        }
        let spec = match (dominance_window, run_limit) {
            (0, 0) => {
                set_error("at least one constraint is required");
                return DcStatus::DcInvalidParams;
            }
            (m, 0) => dnacode::engine::ConstraintSpec::zero_dominant(m),
            (0, l) => dnacode::engine::ConstraintSpec::rll(l),
            (3, l) => dnacode::engine::ConstraintSpec::f_set(l),
            (m, _) => Err(Error::InvalidParams(format!(
                "joint dominance window {} with a run limit is not supported; only 3 is",
                m
            ))),
        };
        let spec = match spec {
            Ok(s) => s,
            Err(e) => return fail(&e),
        };
        match dnacode::engine::count(&spec, n) {
            Ok(c) => give_string(c.to_string(), count_out),
            Err(e) => fail(&e),
        }
    })
}

fn build_c2(
    ell: size_t,
    eps_num: u64,
    eps_den: u64,
    n: size_t,
    q: u64,
    r: size_t,
) -> dnacode::error::Result<C2Code> {
    let eps = Eps::new(eps_num, eps_den)?;
    let cl = CLEpsParams::new(ell, eps, n)?;
    C2Code::new(C2Params { cl, q, r })
}

fn parse_bits(text: &str) -> Result<BitSeq, DcStatus> {
    let mut bits = Vec::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '0' => bits.push(0),
            '1' => bits.push(1),
            _ => {
                set_error("y_bits must be over {'0','1'}");
                return Err(DcStatus::DcInvalidParams);
            }
        }
    }
    Ok(BitSeq::from_bits(&bits).unwrap())
}

unsafe fn parse_dna(ptr: *const c_char) -> Result<DnaSeq, DcStatus> {
    let text = read_str(ptr)?;
    let mut seq = DnaSeq::new();
    for (i, ch) in text.chars().enumerate() {
        match dnacode::alphabet::Nucleotide::from_char(ch) {
            Some(nt) => seq.push(nt),
            None => {
                set_error(&format!("invalid symbol '{}' at position {}", ch, i + 1));
                return Err(DcStatus::DcBadSymbol);
            }
        }
    }
    Ok(seq)
}
