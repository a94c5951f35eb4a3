//! The bracket state sum and the graded polynomial it normalizes to.
//!
//! A state (resolution) picks one smoothing per crossing: the 0-smoothing
//! joins the S-E and N-W port pairs, the 1-smoothing the S-W and E-N
//! pairs. Each state contributes `(-q)^{weight} (q + q^{-1})^{circles}`
//! where the weight counts 1-smoothings; normalizing the sum by
//! `(-1)^{n_minus} q^{n_plus - 2 n_minus}` gives the graded polynomial
//! whose evaluation at a crossing-free unknot is `q + q^{-1}`.

use rayon::prelude::*;

use crate::algebra::laurent::laurent_add;
use crate::diagram::{Dsu, LinkDiagram};
use crate::{Error, Int, Laurent, Result};

/// Arc-to-circle index map of one resolution, plus the total circle count.
/// Circles are numbered by their least arc in ascending order; crossing-free
/// loops follow all arc circles, in stored order.
pub fn circle_map(d: &LinkDiagram, resolution: u64) -> (Vec<usize>, usize) {
    let mut dsu = Dsu::new(d.n_arcs());
    for (i, c) in d.crossings().iter().enumerate() {
        let [a, b, cc, dd] = c.ports;
        if resolution >> i & 1 == 0 {
            dsu.union(a, b);
            dsu.union(cc, dd);
        } else {
            dsu.union(a, dd);
            dsu.union(b, cc);
        }
    }
    let mut index = vec![usize::MAX; d.n_arcs()];
    let mut count = 0usize;
    // Representatives are class minima, so each class is numbered when its
    // least arc comes up.
    for a in 0..d.n_arcs() {
        let r = dsu.find(a);
        if r == a {
            index[a] = count;
            count += 1;
        } else {
            index[a] = index[r];
        }
    }
    (index, count + d.free_loops().len())
}

/// Number of circles in one resolution.
pub fn circle_count(d: &LinkDiagram, resolution: u64) -> usize {
    circle_map(d, resolution).1
}

/// Checks the state space fits under the cap and returns its size.
pub fn state_count(d: &LinkDiagram, cap: u64) -> Result<u64> {
    let n = d.crossings().len() as u32;
    1u64.checked_shl(n)
        .filter(|&s| s <= cap)
        .ok_or_else(|| {
            Error::Cap(format!(
                "{} crossings need 2^{} states, over the cap of {}",
                n, n, cap
            ))
        })
}

/// The bracket state sum of a diagram, enumerating all `2^n` resolutions.
pub fn bracket(d: &LinkDiagram, cap: u64) -> Result<Laurent> {
    let states = state_count(d, cap)?;
    // Loop-value powers up to the largest possible circle count.
    let max_circles = d.n_arcs().max(1) + d.free_loops().len();
    let mut powers = Vec::with_capacity(max_circles + 1);
    powers.push(Laurent::one());
    for k in 1..=max_circles {
        powers.push(powers[k - 1].clone() * Laurent::loop_value());
    }
    let sum = (0..states)
        .into_par_iter()
        .fold(Laurent::zero, |acc, r| {
            let c = circle_count(d, r);
            let w = r.count_ones() as i64;
            let mut term = powers[c].shifted(w);
            if w % 2 != 0 {
                term = -term;
            }
            acc + term
        })
        .reduce(Laurent::zero, |a, b| laurent_add(&a, &b));
    Ok(sum)
}

/// The graded polynomial: the bracket normalized by
/// `(-1)^{n_minus} q^{n_plus - 2 n_minus}`. Invariant under the framed
/// moves (kink pairs, R2, R3); a lone kink shifts the framing and hence
/// the cable, not this value.
pub fn jones_framed(d: &LinkDiagram, cap: u64) -> Result<Laurent> {
    let b = bracket(d, cap)?;
    let shift = d.n_plus() as i64 - 2 * d.n_minus() as i64;
    let sign = if d.n_minus() % 2 == 0 { 1 } else { -1 };
    Ok(b.shifted(shift).scaled(&Int::from(sign)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::corpus;
    use crate::DEFAULT_CAP;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn jones(d: &LinkDiagram) -> Laurent {
        jones_framed(d, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn empty_diagram_brackets_to_one() {
        let d = crate::diagram::parse_pd("").unwrap();
        assert_eq!(bracket(&d, DEFAULT_CAP).unwrap(), Laurent::one());
        assert_eq!(jones(&d), Laurent::one());
    }

    #[test]
    fn unknot_value() {
        assert_eq!(jones(&corpus::unknot()), Laurent::loop_value());
    }

    #[test]
    fn kinks_normalize_to_the_unknot_value() {
        assert_eq!(jones(&corpus::kink_positive()), Laurent::loop_value());
        assert_eq!(jones(&corpus::kink_negative()), Laurent::loop_value());
    }

    #[test]
    fn hopf_value() {
        let expect = Laurent::from_pairs(
            [(0, 1), (2, 1), (4, 1), (6, 1)].map(|(e, c)| (e, BigInt::from(c))),
        );
        assert_eq!(jones(&corpus::hopf_positive()), expect);
    }

    #[test]
    fn trefoil_values() {
        let right = Laurent::from_pairs(
            [(1, 1), (3, 1), (5, 1), (9, -1)].map(|(e, c)| (e, BigInt::from(c))),
        );
        assert_eq!(jones(&corpus::trefoil_right()), right);
        assert_eq!(jones(&corpus::trefoil_left()), right.inverted_variable());
    }

    #[test]
    fn figure_eight_value_is_self_conjugate() {
        let f = jones(&corpus::figure_eight());
        assert_eq!(f, f.inverted_variable());
        let expect =
            Laurent::from_pairs([(-5, 1), (5, 1)].map(|(e, c)| (e, BigInt::from(c))));
        assert_eq!(f, expect);
    }

    #[test]
    fn mirror_inverts_the_variable() {
        for (name, d) in corpus::all() {
            let m = jones(&d.mirror());
            assert_eq!(m, jones(&d).inverted_variable(), "{name}");
        }
    }

    #[test]
    fn disjoint_union_multiplies() {
        let a = corpus::trefoil_right();
        let b = corpus::hopf_positive();
        let u = a.disjoint_union(&b);
        assert_eq!(
            bracket(&u, DEFAULT_CAP).unwrap(),
            bracket(&a, DEFAULT_CAP).unwrap() * bracket(&b, DEFAULT_CAP).unwrap()
        );
        assert_eq!(jones(&u), jones(&a) * jones(&b));
    }

    #[test]
    fn cap_is_enforced() {
        let err = bracket(&corpus::trefoil_right(), 4).unwrap_err();
        assert!(matches!(err, Error::Cap(_)), "{err}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn framed_moves_preserve_the_value() {
        for (name, d) in corpus::all() {
            if d.crossings().len() > 3 {
                continue;
            }
            let v = jones(&d);
            for arc in 0..d.n_arcs() {
                let moved = d.apply_framed_r1(arc).unwrap();
                assert_eq!(jones(&moved), v, "{name} kink pair on arc {arc}");
            }
            for site in d.r2_sites() {
                let moved = d.apply_r2(site).unwrap();
                assert_eq!(jones(&moved), v, "{name} R2 at {site:?}");
            }
            for site in d.r3_sites() {
                let moved = d.apply_r3(&site).unwrap();
                assert_eq!(jones(&moved), v, "{name} R3 at {site:?}");
            }
        }
    }

    proptest! {
        // Toggling one smoothing performs a surgery on the state's circles:
        // it either merges two or splits one, so the count moves by exactly
        // one.
        #[test]
        fn single_smoothing_toggle_moves_circle_count_by_one(
            pick in 0usize..7,
            r in proptest::num::u64::ANY,
            bit in 0usize..4,
        ) {
            let (_, d) = corpus::all().into_iter().nth(pick).unwrap();
            let n = d.crossings().len();
            prop_assume!(n > 0);
            let r = r & ((1 << n) - 1);
            let bit = bit % n;
            let a = circle_count(&d, r) as i64;
            let b = circle_count(&d, r ^ (1 << bit)) as i64;
            prop_assert_eq!((a - b).abs(), 1);
        }
    }
}
