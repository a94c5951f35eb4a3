//! Exact link-invariant computations: Kauffman bracket state sums, Jones
//! polynomials of framed links and their cables, integral Khovanov homology,
//! colored Jones polynomials, and a contraction bicomplex whose graded Euler
//! characteristic recovers the colored Jones polynomial.
//!
//! Everything is computed with exact arithmetic: Laurent polynomials over
//! arbitrary-precision integers and integer matrices brought to Smith normal
//! form. There is no floating point anywhere in this crate.

pub mod algebra;
pub mod bicomplex;
pub mod colored;
pub mod diagram;
pub mod kauffman;
pub mod khovanov;
pub mod nanoword;

pub use algebra::laurent::LaurentPoly;

/// Arbitrary-precision integer, the default scalar for every computation.
pub type Int = num_bigint::BigInt;

/// Laurent polynomial in the variable `q` with [`Int`] coefficients.
pub type Laurent = LaurentPoly<Int>;

/// Default ceiling on the number of smoothings enumerated per diagram
/// (`2^20`). Callers can raise it explicitly through the `*_with_cap`
/// entry points or the CLI `--cap` flag.
pub const DEFAULT_CAP: u64 = 1 << 20;

/// Crate-wide error type. The CLI maps the variants onto distinct exit
/// codes, so keep the classification stable: bad input text or malformed
/// structures are `Parse`, resource ceilings are `Cap`, and a differential
/// or identity failing to hold is `Law`.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("enumeration cap exceeded: {0}")]
    Cap(String),
    #[error("law violation: {0}")]
    Law(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI uses for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Cap(_) => 3,
            Error::Law(_) => 4,
        }
    }
}
