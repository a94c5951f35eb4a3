//! Laurent polynomials in one variable `q` over an exact integral scalar.
//!
//! Representation invariant: the coefficient map never stores a zero, so
//! structural equality is mathematical equality and the zero polynomial is
//! the empty map.

use super::Coeff;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly<C: Coeff> {
    coeffs: BTreeMap<i64, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, C::one())
    }

    /// `c * q^e`, dropped if `c` is zero.
    pub fn monomial(e: i64, c: C) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        LaurentPoly { coeffs }
    }

    /// `q + q^{-1}`, the value of a closed loop in the bracket state sum.
    pub fn loop_value() -> Self {
        let mut p = Self::monomial(1, C::one());
        p.add_term(-1, C::one());
        p
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, C)>>(pairs: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> C {
        self.coeffs.get(&e).cloned().unwrap_or_else(C::zero)
    }

    /// Sorted `(exponent, coefficient)` view; this is also the canonical
    /// serialization order.
    pub fn pairs(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn add_term(&mut self, e: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Multiply by `q^e`.
    pub fn shifted(&self, e: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (d + e, c.clone())).collect(),
        }
    }

    pub fn scaled(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, a)| (*e, a.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// Substitute `q -> q^{-1}` (negate every exponent). Mirror images of
    /// links transform their polynomials this way.
    pub fn inverted_variable(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }
}

/// Sum of two Laurent polynomials.
pub fn laurent_add<C: Coeff>(a: &LaurentPoly<C>, b: &LaurentPoly<C>) -> LaurentPoly<C> {
    let mut out = a.clone();
    for (e, c) in b.pairs() {
        out.add_term(e, c.clone());
    }
    out
}

/// Product of two Laurent polynomials.
pub fn laurent_mul<C: Coeff>(a: &LaurentPoly<C>, b: &LaurentPoly<C>) -> LaurentPoly<C> {
    let mut out = LaurentPoly::zero();
    for (ea, ca) in a.pairs() {
        for (eb, cb) in b.pairs() {
            out.add_term(ea + eb, ca.clone() * cb.clone());
        }
    }
    out
}

/// Quantum integer `[n] = q^{n-1} + q^{n-3} + … + q^{1-n}`, with `[0] = 0`.
pub fn quantum_integer<C: Coeff>(n: u64) -> LaurentPoly<C> {
    let mut p = LaurentPoly::zero();
    let n = n as i64;
    let mut e = 1 - n;
    while e <= n - 1 {
        p.add_term(e, C::one());
        e += 2;
    }
    p
}

impl<C: Coeff> Add for LaurentPoly<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        laurent_add(&self, &rhs)
    }
}

impl<C: Coeff> Sub for LaurentPoly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        laurent_add(&self, &-rhs)
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<C: Coeff> Mul for LaurentPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        laurent_mul(&self, &rhs)
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.pairs() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || e == 0;
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            if e != 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if e == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Laurent;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q() -> Laurent {
        Laurent::monomial(1, BigInt::from(1))
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut p = Laurent::monomial(3, BigInt::from(5));
        p.add_term(3, BigInt::from(-5));
        assert!(p.is_zero());
        assert_eq!(Laurent::monomial(0, BigInt::from(0)), Laurent::zero());
    }

    #[test]
    fn loop_value_squares() {
        let l = Laurent::loop_value();
        let sq = laurent_mul(&l, &l);
        // (q + q^-1)^2 = q^2 + 2 + q^-2
        assert_eq!(
            sq,
            Laurent::from_pairs(vec![
                (-2, BigInt::from(1)),
                (0, BigInt::from(2)),
                (2, BigInt::from(1)),
            ])
        );
    }

    #[test]
    fn quantum_integers_small() {
        assert!(quantum_integer::<BigInt>(0).is_zero());
        assert_eq!(quantum_integer::<BigInt>(1), Laurent::one());
        assert_eq!(quantum_integer::<BigInt>(2), Laurent::loop_value());
        assert_eq!(
            quantum_integer::<BigInt>(3),
            Laurent::from_pairs(vec![
                (-2, BigInt::from(1)),
                (0, BigInt::from(1)),
                (2, BigInt::from(1)),
            ])
        );
    }

    #[test]
    fn quantum_integer_recurrence() {
        // [n+1] = (q+q^-1)[n] - [n-1]
        for n in 1..=12u64 {
            let lhs = quantum_integer::<BigInt>(n + 1);
            let rhs = laurent_mul(&Laurent::loop_value(), &quantum_integer(n))
                - quantum_integer(n - 1);
            assert_eq!(lhs, rhs, "recurrence fails at n={}", n);
        }
    }

    #[test]
    fn display_reads_naturally() {
        let p = q() + Laurent::monomial(-1, BigInt::from(1));
        assert_eq!(format!("{}", p), "q^-1 + q");
        let m = Laurent::monomial(9, BigInt::from(-1));
        assert_eq!(format!("{}", m), "-q^9");
    }

    fn arb_poly() -> impl Strategy<Value = Laurent> {
        proptest::collection::vec(((-6i64..=6), (-4i64..=4)), 0..6).prop_map(|terms| {
            Laurent::from_pairs(terms.into_iter().map(|(e, c)| (e, BigInt::from(c))))
        })
    }

    proptest! {
        #[test]
        fn add_commutes(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(laurent_add(&a, &b), laurent_add(&b, &a));
        }

        #[test]
        fn mul_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let lhs = laurent_mul(&a, &laurent_add(&b, &c));
            let rhs = laurent_add(&laurent_mul(&a, &b), &laurent_mul(&a, &c));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mul_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let lhs = laurent_mul(&laurent_mul(&a, &b), &c);
            let rhs = laurent_mul(&a, &laurent_mul(&b, &c));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
