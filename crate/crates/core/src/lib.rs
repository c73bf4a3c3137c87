//! Point counts, s-degrees, order sequences and point-count bounds for
//! curves over finite fields.
//!
//! Everything is exact: field arithmetic is table driven over GF(p^e) with
//! q ≤ 2^16, and bound evaluation uses arbitrary-precision rationals.

pub mod arcs;
pub mod bounds;
pub mod curves;
pub mod gf;
pub mod linalg;
pub mod orderseq;
pub mod poly;
pub mod projspace;
pub mod scan;
pub mod suite;
