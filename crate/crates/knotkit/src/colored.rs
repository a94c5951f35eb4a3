//! Colored polynomial invariants by cabling: an alternating sum of graded
//! bracket polynomials of parallel cables, weighted by binomials.
//!
//! For a color vector `n` with one entry per component, the value is
//!
//! ```text
//! sum over k, 0 <= k_i <= floor(n_i / 2), of
//!     (-1)^{|k|} * prod_i C(n_i - k_i, k_i) * jones_framed(cable(n - 2k))
//! ```
//!
//! where a width-0 entry deletes its component and the empty diagram
//! contributes 1. On a 0-framed crossing-free unknot this telescopes to the
//! quantum integer `[n+1]`, the Chebyshev-recursion value of a single
//! (n+1)-dimensional color.

use crate::algebra::binomial;
use crate::diagram::LinkDiagram;
use crate::kauffman::jones_framed;
use crate::{Error, Int, Laurent, Result};

/// One cabling width (or contraction count) per link component.
pub type MultiIndex = Vec<u32>;

/// `prod_i C(n_i - k_i, k_i)`, defined when `0 <= k_i <= floor(n_i / 2)`
/// entrywise.
pub fn multi_binomial(n: &[u32], k: &[u32]) -> Result<u64> {
    if n.len() != k.len() {
        return Err(Error::Parse(format!(
            "multi-index lengths differ: {} vs {}",
            n.len(),
            k.len()
        )));
    }
    let mut acc = 1u64;
    for (&ni, &ki) in n.iter().zip(k) {
        if 2 * ki > ni {
            return Err(Error::Parse(format!(
                "contraction count {} too large for width {}",
                ki, ni
            )));
        }
        acc = acc
            .checked_mul(binomial((ni - ki) as u64, ki as u64))
            .ok_or_else(|| Error::Cap("binomial product overflows u64".into()))?;
    }
    Ok(acc)
}

/// All contraction multi-indices `k` with `0 <= k_i <= floor(n_i / 2)`, in
/// lexicographic order.
fn contraction_indices(n: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &ni in n {
        let mut next = Vec::new();
        for prefix in &out {
            for ki in 0..=ni / 2 {
                let mut k = prefix.clone();
                k.push(ki);
                next.push(k);
            }
        }
        out = next;
    }
    out
}

/// The colored polynomial of a diagram at color vector `n` (one entry per
/// component), under the blackboard framing of the diagram.
pub fn colored_jones(d: &LinkDiagram, n: &[u32], cap: u64) -> Result<Laurent> {
    if n.len() != d.component_count() {
        return Err(Error::Parse(format!(
            "color vector has {} entries for {} components",
            n.len(),
            d.component_count()
        )));
    }
    let mut total = Laurent::zero();
    for k in contraction_indices(n) {
        let widths: Vec<usize> = n
            .iter()
            .zip(&k)
            .map(|(&ni, &ki)| (ni - 2 * ki) as usize)
            .collect();
        let cabled = d.cable(&widths)?;
        let weight = Int::from(multi_binomial(n, &k)?);
        let parity = k.iter().map(|&x| x as u64).sum::<u64>() % 2;
        let signed = if parity == 0 { weight } else { -weight };
        total = total + jones_framed(&cabled, cap)?.scaled(&signed);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quantum_integer;
    use crate::diagram::corpus;
    use crate::DEFAULT_CAP;

    #[test]
    fn multi_binomial_products() {
        assert_eq!(multi_binomial(&[3], &[1]).unwrap(), 2);
        assert_eq!(multi_binomial(&[2, 2], &[1, 0]).unwrap(), 1);
        assert_eq!(multi_binomial(&[5, 4, 3], &[0, 0, 0]).unwrap(), 1);
        assert!(multi_binomial(&[2], &[2]).is_err());
        assert!(multi_binomial(&[2, 2], &[1]).is_err());
    }

    #[test]
    fn width_one_colors_give_the_graded_bracket() {
        for (name, d) in corpus::all() {
            let n = vec![1u32; d.component_count()];
            assert_eq!(
                colored_jones(&d, &n, DEFAULT_CAP).unwrap(),
                jones_framed(&d, DEFAULT_CAP).unwrap(),
                "width-1 mismatch on {}",
                name
            );
        }
    }

    #[test]
    fn width_zero_colors_give_one() {
        for (name, d) in corpus::all() {
            let n = vec![0u32; d.component_count()];
            assert_eq!(
                colored_jones(&d, &n, DEFAULT_CAP).unwrap(),
                Laurent::one(),
                "width-0 mismatch on {}",
                name
            );
        }
    }

    #[test]
    fn unknot_colors_are_quantum_integers() {
        let d = corpus::unknot();
        for n in 0..=6u32 {
            assert_eq!(
                colored_jones(&d, &[n], DEFAULT_CAP).unwrap(),
                quantum_integer(n as u64 + 1),
                "mismatch at color {}",
                n
            );
        }
    }

    #[test]
    fn disjoint_unions_multiply() {
        let a = corpus::kink_positive();
        let b = corpus::hopf_positive();
        let both = a.disjoint_union(&b);
        assert_eq!(
            colored_jones(&both, &[2, 2, 1], DEFAULT_CAP).unwrap(),
            colored_jones(&a, &[2], DEFAULT_CAP).unwrap()
                * colored_jones(&b, &[2, 1], DEFAULT_CAP).unwrap()
        );
    }

    #[test]
    fn slide_moves_preserve_the_value() {
        let d = corpus::trefoil_right();
        let reference = colored_jones(&d, &[2], DEFAULT_CAP).unwrap();
        for site in d.r2_sites().into_iter().take(3) {
            let slid = d.apply_r2(site).unwrap();
            assert_eq!(colored_jones(&slid, &[2], DEFAULT_CAP).unwrap(), reference);
        }
    }
}
