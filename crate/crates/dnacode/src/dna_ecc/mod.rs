//! Error-correcting DNA code constructions built on the constrained inner
//! code: Hamming concatenation for single-substitution correction, VT-class
//! intersection for single-edit correction, and block concatenation for
//! local GC balance.

mod cl_eps;
mod concat;
mod local;

pub use cl_eps::{extend, unextend, CLEpsParams, ClEpsCode};
pub use concat::{c3_decode_edit, find_vt_class, find_vt_class_sampled, C2Code, C2Params};
pub use local::C4Code;
