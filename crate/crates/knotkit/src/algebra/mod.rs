//! Exact linear and polynomial algebra: Laurent polynomials, dense integer
//! matrices with Smith normal form, sparse chain complexes with unit-entry
//! reduction, and homology of finitely generated abelian groups.
//!
//! The scalar type is generic: anything satisfying [`Coeff`] works, and the
//! crate-level aliases instantiate everything with arbitrary-precision
//! integers. Floating-point scalars are deliberately not supported — every
//! result here is an exact integer statement.

pub mod homology;
pub mod laurent;
pub mod matrix;
pub mod reduce;
pub mod snf;

pub use homology::{homology_ranks, lattice_quotient, subquotient_homology, Homology};
pub use laurent::{laurent_add, laurent_mul, quantum_integer, LaurentPoly};
pub use matrix::IntMatrix;
pub use reduce::{ChainComplex, SpMat};
pub use snf::{kernel_basis, smith_normal_form, SnfResult};

use std::fmt::{Debug, Display};

/// Exact integral scalar: ordinary integer arithmetic plus sign handling.
/// Implemented by `num_bigint::BigInt`, `i64`, `i128`, … via the blanket
/// impl below.
pub trait Coeff:
    num_integer::Integer
    + num_traits::Signed
    + Clone
    + Debug
    + Display
    + From<i64>
    + Send
    + Sync
    + 'static
{
}

impl<T> Coeff for T where
    T: num_integer::Integer
        + num_traits::Signed
        + Clone
        + Debug
        + Display
        + From<i64>
        + Send
        + Sync
        + 'static
{
}

/// Binomial coefficient `C(n, k)` as an exact `u64`; panics on overflow,
/// which the crossing caps keep far out of reach.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for t in 0..k {
        // Multiply before dividing; the intermediate is a binomial times a
        // cofactor, so the division is exact.
        acc = acc
            .checked_mul(n - t)
            .expect("binomial coefficient overflows u64")
            / (t + 1);
    }
    acc
}
