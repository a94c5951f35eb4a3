//! The bigraded homology whose graded Euler characteristic is the graded
//! bracket polynomial.
//!
//! An enhanced state is a resolution together with a `+`/`-` label on each
//! of its circles. A state with resolution `r` and `k` minus labels sits in
//! homological degree `i = |r| - n_minus` and quantum degree
//! `j = (circles - 2k) + |r| + n_plus - 2 n_minus`, where `|r|` counts
//! 1-smoothings. The differential raises `i` by one and keeps `j`: flipping
//! one 0-smoothing either merges two circles (`++ -> +`, `+- -> -`,
//! `-- -> 0`) or splits one (`+ -> +- and -+`, `- -> --`), with the usual
//! alternating sign on crossings below the flipped one.
//!
//! Because the differential preserves `j`, the complex is assembled and
//! reduced one `j`-slice at a time; only one slice is ever held in memory.
//! Slices use machine-word coefficients (every raw entry is `±1`, and
//! overflow checks stay on in every build profile), and the small dense
//! remnant left after cancellation is promoted to big integers for the
//! exact Smith-form step.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::homology::homology_ranks;
use crate::algebra::matrix::IntMatrix;
use crate::algebra::reduce::{ChainComplex, SpMat};
use crate::algebra::Homology;
use crate::diagram::LinkDiagram;
use crate::kauffman::{circle_map, state_count};
use crate::{Error, Int, Laurent, Result};

/// One enhanced state: the resolution bitmask and the label bitmask over
/// its circles in [`circle_map`] order, with bit 1 meaning the minus label.
pub type EnhState = (u64, u64);

/// Homology groups keyed by `(homological degree, quantum degree)`;
/// trivial groups are omitted.
pub type KhTable = BTreeMap<(i64, i64), Homology<Int>>;

/// The quantum-degree shift `n_plus - 2 n_minus` common to every state.
fn degree_shift(d: &LinkDiagram) -> i64 {
    d.n_plus() as i64 - 2 * d.n_minus() as i64
}

/// Appends `(r, s)` for every label mask `s` with `k` minus labels over `c`
/// circles, in ascending numeric order of `s`.
fn push_label_masks(dst: &mut Vec<EnhState>, r: u64, c: u32, k: u32) {
    if k > c {
        return;
    }
    if k == 0 {
        dst.push((r, 0));
        return;
    }
    let top = 1u64 << c;
    let mut s = (1u64 << k) - 1;
    // Gosper's hack walks the masks of fixed population in ascending order.
    while s < top {
        dst.push((r, s));
        let u = s & s.wrapping_neg();
        let v = s + u;
        s = v | (((s ^ v) / u) >> 2);
    }
}

/// Guards the label masks fitting in a machine word.
fn check_circle_width(c: usize) -> Result<()> {
    if c > 60 {
        return Err(Error::Cap(format!(
            "a resolution has {} circles; label masks support at most 60",
            c
        )));
    }
    Ok(())
}

/// The ordered enhanced-state basis of one quantum degree, keyed by
/// homological degree. Within a degree, states are sorted by resolution and
/// then by label mask, so positions can be recovered by binary search.
pub fn basis_for_j(d: &LinkDiagram, j: i64) -> BTreeMap<i64, Vec<EnhState>> {
    let n = d.crossings().len() as u32;
    let n_minus = d.n_minus() as i64;
    let shift = degree_shift(d);
    let mut bases: BTreeMap<i64, Vec<EnhState>> = BTreeMap::new();
    for r in 0..1u64 << n {
        let c = circle_map(d, r).1 as i64;
        let w = r.count_ones() as i64;
        // j = (c - 2k) + w + shift determines the minus-label count k.
        let num = c + w + shift - j;
        if num < 0 || num % 2 != 0 || num / 2 > c {
            continue;
        }
        push_label_masks(
            bases.entry(w - n_minus).or_default(),
            r,
            c as u32,
            (num / 2) as u32,
        );
    }
    bases
}

fn locate(states: &[EnhState], target: EnhState) -> usize {
    states.binary_search(&target).unwrap_or_else(|_| {
        panic!(
            "differential left the graded basis: no state ({:#b}, {:#b})",
            target.0, target.1
        )
    })
}

/// The matrix of the differential from the states `from` to the states
/// `to`, both taken from [`basis_for_j`] of the same quantum degree at
/// consecutive homological degrees.
pub fn differential(d: &LinkDiagram, from: &[EnhState], to: &[EnhState]) -> SpMat<i64> {
    let n = d.crossings().len();
    let loops = d.free_loops().len();
    let mut m = SpMat::new(to.len(), from.len());
    let mut lo = 0usize;
    while lo < from.len() {
        let r = from[lo].0;
        let mut hi = lo;
        while hi < from.len() && from[hi].0 == r {
            hi += 1;
        }
        let (map, c) = circle_map(d, r);
        for t in 0..n {
            if r >> t & 1 == 1 {
                continue;
            }
            let r2 = r | 1 << t;
            let (map2, c2) = circle_map(d, r2);
            let ports = d.crossings()[t].ports;
            // The 0-smoothing at t groups ports (0,1) and (2,3); after the
            // flip the groups are (0,3) and (1,2).
            let x = map[ports[0]];
            let y = map[ports[2]];
            let coeff: i64 = if (r & ((1 << t) - 1)).count_ones() % 2 == 0 {
                1
            } else {
                -1
            };
            // Circles not touching crossing t keep their arcs, which pins
            // the label transport; free loops stay at the same offset past
            // the arc circles.
            let mut corr = vec![usize::MAX; c2];
            for a in 0..d.n_arcs() {
                let src = map[a];
                if src != x && src != y {
                    corr[map2[a]] = src;
                }
            }
            for l in 0..loops {
                corr[c2 - loops + l] = c - loops + l;
            }
            if x != y {
                // Two circles merge into one.
                let merged = map2[ports[0]];
                for (col, &(_, s)) in from.iter().enumerate().take(hi).skip(lo) {
                    let sx = s >> x & 1;
                    let sy = s >> y & 1;
                    if sx & sy == 1 {
                        continue;
                    }
                    let mut s2 = (sx | sy) << merged;
                    for (z2, &src) in corr.iter().enumerate() {
                        if z2 != merged {
                            s2 |= (s >> src & 1) << z2;
                        }
                    }
                    m.add_to(locate(to, (r2, s2)), col, coeff);
                }
            } else {
                // One circle splits in two.
                let x2 = map2[ports[0]];
                let y2 = map2[ports[1]];
                for (col, &(_, s)) in from.iter().enumerate().take(hi).skip(lo) {
                    let mut base = 0u64;
                    for (z2, &src) in corr.iter().enumerate() {
                        if z2 != x2 && z2 != y2 {
                            base |= (s >> src & 1) << z2;
                        }
                    }
                    if s >> x & 1 == 0 {
                        m.add_to(locate(to, (r2, base | 1 << x2)), col, coeff);
                        m.add_to(locate(to, (r2, base | 1 << y2)), col, coeff);
                    } else {
                        m.add_to(locate(to, (r2, base | 1 << x2 | 1 << y2)), col, coeff);
                    }
                }
            }
        }
        lo = hi;
    }
    m
}

/// Dimensions of the chain groups keyed by `(homological, quantum)` degree,
/// counted by binomials without enumerating enhanced states.
pub fn chain_dims(d: &LinkDiagram, cap: u64) -> Result<BTreeMap<(i64, i64), u64>> {
    let states = state_count(d, cap)?;
    let n_minus = d.n_minus() as i64;
    let shift = degree_shift(d);
    let mut dims: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    for r in 0..states {
        let c = circle_map(d, r).1;
        check_circle_width(c)?;
        let w = r.count_ones() as i64;
        for k in 0..=c as u64 {
            let e = dims
                .entry((w - n_minus, c as i64 - 2 * k as i64 + w + shift))
                .or_insert(0);
            *e = e
                .checked_add(crate::algebra::binomial(c as u64, k))
                .ok_or_else(|| Error::Cap("chain group dimension overflows u64".into()))?;
        }
    }
    Ok(dims)
}

/// The graded Euler characteristic read off the chain groups.
pub fn graded_euler_chain(d: &LinkDiagram, cap: u64) -> Result<Laurent> {
    let dims = chain_dims(d, cap)?;
    Ok(Laurent::from_pairs(dims.into_iter().map(|((i, j), dim)| {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        (j, Int::from(dim) * Int::from(sign))
    })))
}

/// The graded Euler characteristic read off a homology table: torsion has
/// rank zero, so only free ranks contribute.
pub fn graded_euler_homology(table: &KhTable) -> Laurent {
    Laurent::from_pairs(table.iter().map(|(&(i, j), h)| {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        (j, Int::from(h.free_rank as i64) * Int::from(sign))
    }))
}

/// The full homology table of a diagram, computed one quantum degree at a
/// time: build the slice, check the complex laws, cancel unit entries, and
/// finish with exact Smith-form homology on the dense remnant.
pub fn homology(d: &LinkDiagram, cap: u64) -> Result<KhTable> {
    let states = state_count(d, cap)?;
    let shift = degree_shift(d);
    let mut j_min = i64::MAX;
    let mut j_max = i64::MIN;
    for r in 0..states {
        let c = circle_map(d, r).1;
        check_circle_width(c)?;
        let w = r.count_ones() as i64;
        j_min = j_min.min(-(c as i64) + w + shift);
        j_max = j_max.max(c as i64 + w + shift);
    }
    // All states share the parity of j. Slices are independent, so they
    // run in parallel; collecting in j order before folding keeps results
    // and error choice identical at every thread count.
    let degrees: Vec<i64> = (j_min..=j_max).step_by(2).collect();
    let slices: Vec<Result<Vec<(i64, Homology<Int>)>>> =
        degrees.par_iter().map(|&j| homology_slice(d, j)).collect();
    let mut table = KhTable::new();
    for (j, slice) in degrees.into_iter().zip(slices) {
        for (i, h) in slice? {
            table.insert((i, j), h);
        }
    }
    Ok(table)
}

/// Nontrivial homology groups of one quantum degree, as `(degree, group)`
/// pairs.
pub(crate) fn homology_slice(d: &LinkDiagram, j: i64) -> Result<Vec<(i64, Homology<Int>)>> {
    let bases = basis_for_j(d, j);
    let Some((&i_lo, _)) = bases.first_key_value() else {
        return Ok(Vec::new());
    };
    let (&i_hi, _) = bases.last_key_value().unwrap();
    let empty = Vec::new();
    let at = |i: i64| bases.get(&i).unwrap_or(&empty);
    let degrees: Vec<i64> = (i_lo..=i_hi).collect();
    let mut cx = ChainComplex::new(degrees.iter().map(|&i| at(i).len()).collect());
    for t in 0..degrees.len().saturating_sub(1) {
        *cx.diff_mut(t) = differential(d, at(degrees[t]), at(degrees[t] + 1));
    }
    cx.verify_laws()?;
    cx.reduce();
    let mut out = Vec::new();
    for (t, &i) in degrees.iter().enumerate() {
        let d_in = if t == 0 {
            IntMatrix::zero(cx.alive_dim(0), 0)
        } else {
            promote(&cx.dense_diff(t - 1))
        };
        let d_out = if t + 1 == degrees.len() {
            IntMatrix::zero(0, cx.alive_dim(t))
        } else {
            promote(&cx.dense_diff(t))
        };
        let h = homology_ranks(&d_in, &d_out)?;
        if !h.is_trivial() {
            out.push((i, h));
        }
    }
    Ok(out)
}

/// Widens a machine-word matrix to big integers for the Smith-form step.
pub(crate) fn promote(m: &IntMatrix<i64>) -> IntMatrix<Int> {
    let mut out = IntMatrix::zero(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(i, j)] = Int::from(m[(i, j)]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::corpus;
    use crate::kauffman::jones_framed;
    use crate::DEFAULT_CAP;

    fn z() -> Homology<Int> {
        Homology { free_rank: 1, torsion: vec![] }
    }

    fn z_mod(n: i64) -> Homology<Int> {
        Homology { free_rank: 0, torsion: vec![Int::from(n)] }
    }

    fn table(entries: &[((i64, i64), Homology<Int>)]) -> KhTable {
        entries.iter().cloned().collect()
    }

    #[test]
    fn empty_diagram_has_a_single_generator() {
        let d = LinkDiagram::empty();
        assert_eq!(homology(&d, DEFAULT_CAP).unwrap(), table(&[((0, 0), z())]));
    }

    #[test]
    fn unknot_table() {
        let d = corpus::unknot();
        let t = homology(&d, DEFAULT_CAP).unwrap();
        assert_eq!(t, table(&[((0, -1), z()), ((0, 1), z())]));
    }

    #[test]
    fn kinked_unknots_match_the_unknot() {
        let plain = homology(&corpus::unknot(), DEFAULT_CAP).unwrap();
        for d in [corpus::kink_positive(), corpus::kink_negative()] {
            assert_eq!(homology(&d, DEFAULT_CAP).unwrap(), plain);
        }
    }

    #[test]
    fn two_unknots_tensor_as_expected() {
        let d = crate::diagram::parse_pd("U(2)").unwrap();
        let t = homology(&d, DEFAULT_CAP).unwrap();
        assert_eq!(
            t,
            table(&[
                ((0, -2), z()),
                ((0, 0), Homology { free_rank: 2, torsion: vec![] }),
                ((0, 2), z()),
            ])
        );
    }

    #[test]
    fn positive_hopf_link_table() {
        let t = homology(&corpus::hopf_positive(), DEFAULT_CAP).unwrap();
        assert_eq!(
            t,
            table(&[((0, 0), z()), ((0, 2), z()), ((2, 4), z()), ((2, 6), z())])
        );
    }

    #[test]
    fn right_trefoil_table() {
        let t = homology(&corpus::trefoil_right(), DEFAULT_CAP).unwrap();
        assert_eq!(
            t,
            table(&[
                ((0, 1), z()),
                ((0, 3), z()),
                ((2, 5), z()),
                ((3, 7), z_mod(2)),
                ((3, 9), z()),
            ])
        );
    }

    #[test]
    fn left_trefoil_table() {
        let t = homology(&corpus::trefoil_left(), DEFAULT_CAP).unwrap();
        assert_eq!(
            t,
            table(&[
                ((-3, -9), z()),
                ((-2, -7), z_mod(2)),
                ((-2, -5), z()),
                ((0, -3), z()),
                ((0, -1), z()),
            ])
        );
    }

    #[test]
    fn figure_eight_is_its_own_mirror() {
        let d = corpus::figure_eight();
        let t = homology(&d, DEFAULT_CAP).unwrap();
        assert_eq!(t, homology(&d.mirror(), DEFAULT_CAP).unwrap());
        // Free ranks must be symmetric under negating both degrees.
        for (&(i, j), h) in &t {
            let mirrored = t.get(&(-i, -j)).map_or(0, |m| m.free_rank);
            assert_eq!(h.free_rank, mirrored, "rank asymmetry at ({}, {})", i, j);
        }
    }

    #[test]
    fn chain_euler_matches_the_graded_bracket() {
        for (name, d) in corpus::all() {
            assert_eq!(
                graded_euler_chain(&d, DEFAULT_CAP).unwrap(),
                jones_framed(&d, DEFAULT_CAP).unwrap(),
                "chain-level mismatch on {}",
                name
            );
        }
    }

    #[test]
    fn homology_euler_matches_the_graded_bracket() {
        for (name, d) in corpus::all() {
            let t = homology(&d, DEFAULT_CAP).unwrap();
            assert_eq!(
                graded_euler_homology(&t),
                jones_framed(&d, DEFAULT_CAP).unwrap(),
                "homology-level mismatch on {}",
                name
            );
        }
    }

    #[test]
    fn chain_dims_agree_with_direct_enumeration() {
        for (_, d) in corpus::all() {
            let dims = chain_dims(&d, DEFAULT_CAP).unwrap();
            let mut counted: BTreeMap<(i64, i64), u64> = BTreeMap::new();
            let mut j = *dims.keys().map(|(_, j)| j).min().unwrap();
            let j_top = *dims.keys().map(|(_, j)| j).max().unwrap();
            while j <= j_top {
                for (i, states) in basis_for_j(&d, j) {
                    *counted.entry((i, j)).or_insert(0) += states.len() as u64;
                }
                j += 2;
            }
            assert_eq!(dims, counted);
        }
    }

    #[test]
    fn slide_moves_preserve_the_table() {
        let d = corpus::hopf_positive();
        let reference = homology(&d, DEFAULT_CAP).unwrap();
        let sites = d.r2_sites();
        assert!(!sites.is_empty());
        let slid = d.apply_r2(sites[0]).unwrap();
        assert_eq!(homology(&slid, DEFAULT_CAP).unwrap(), reference);
    }
}
