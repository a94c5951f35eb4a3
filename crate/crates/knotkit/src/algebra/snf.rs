//! Smith normal form over the integers with full transform tracking.
//!
//! `U * A * V = D` with `U`, `V` unimodular and `D` diagonal, the diagonal
//! entries nonnegative and each dividing the next. Pivots are chosen by
//! minimal absolute value, which keeps intermediate entries small without
//! needing anything smarter at the sizes we feed it.

use super::matrix::IntMatrix;
use super::Coeff;

#[derive(Clone, Debug)]
pub struct SnfResult<C: Coeff> {
    /// Diagonal of `D`, trimmed to `min(rows, cols)` entries.
    pub diagonal: Vec<C>,
    pub rank: usize,
    pub u: IntMatrix<C>,
    pub u_inv: IntMatrix<C>,
    pub v: IntMatrix<C>,
    pub v_inv: IntMatrix<C>,
}

impl<C: Coeff> SnfResult<C> {
    /// Invariant factors strictly greater than 1, in increasing order.
    pub fn torsion(&self) -> Vec<C> {
        self.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }
}

/// Find the position of a nonzero entry of minimal absolute value in the
/// submatrix starting at `(t, t)`.
fn min_abs_pivot<C: Coeff>(a: &IntMatrix<C>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), C)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            match &best {
                Some((_, m)) if *m <= mag => {}
                _ => best = Some(((i, j), mag)),
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form of `a`. Returns diagonal, rank and the four transforms
/// with `u * a * v = diag` and `u_inv`, `v_inv` their exact inverses.
pub fn smith_normal_form<C: Coeff>(a: &IntMatrix<C>) -> SnfResult<C> {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Row op on m mirrors onto u; the inverse op lands on u_inv (columns).
    // Likewise column ops go to v, inverses to v_inv (rows).
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_pivot(&m, t) else { break };
        m.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        m.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        // Clear row and column t; restart whenever a remainder forces a
        // smaller pivot back into play.
        loop {
            let mut dirty = false;
            for i in (t + 1)..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let f = -(m[(i, t)].clone() / m[(t, t)].clone());
                m.add_row_multiple(i, t, &f);
                u.add_row_multiple(i, t, &f);
                u_inv.add_col_multiple(t, i, &(-f.clone()));
                if !m[(i, t)].is_zero() {
                    // Remainder left behind; promote it to pivot.
                    m.swap_rows(t, i);
                    u.swap_rows(t, i);
                    u_inv.swap_cols(t, i);
                    dirty = true;
                }
            }
            for j in (t + 1)..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let f = -(m[(t, j)].clone() / m[(t, t)].clone());
                m.add_col_multiple(j, t, &f);
                v.add_col_multiple(j, t, &f);
                v_inv.add_row_multiple(t, j, &(-f.clone()));
                if !m[(t, j)].is_zero() {
                    m.swap_cols(t, j);
                    v.swap_cols(t, j);
                    v_inv.swap_rows(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility: the pivot must divide every remaining entry. If it
        // does not, fold the offending row in and redo this corner.
        let mut redo = false;
        'scan: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if !(m[(i, j)].clone() % m[(t, t)].clone()).is_zero() {
                    let one = C::one();
                    m.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    u_inv.add_col_multiple(i, t, &(-one.clone()));
                    redo = true;
                    break 'scan;
                }
            }
        }
        if redo {
            continue;
        }

        if m[(t, t)].is_negative() {
            m.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }

    let diagonal: Vec<C> = (0..rows.min(cols)).map(|i| m[(i, i)].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    SnfResult { diagonal, rank, u, u_inv, v, v_inv }
}

/// Saturated basis of the integer kernel of `a`: the columns of `v` beyond
/// the rank position. Every integer solution of `a·x = 0` is an integer
/// combination of these columns.
pub fn kernel_basis<C: Coeff>(a: &IntMatrix<C>) -> IntMatrix<C> {
    let snf = smith_normal_form(a);
    let cols: Vec<usize> = (snf.rank..a.cols).collect();
    snf.v.select_columns(&cols)
}

/// Integer column-space basis of `a`: `u_inv` applied to the nonzero part
/// of the diagonal. The columns are independent and span the same lattice
/// as the columns of `a`.
pub fn column_lattice_basis<C: Coeff>(a: &IntMatrix<C>) -> IntMatrix<C> {
    let snf = smith_normal_form(a);
    let mut out = IntMatrix::zero(a.rows, snf.rank);
    for k in 0..snf.rank {
        for i in 0..a.rows {
            out[(i, k)] = snf.u_inv[(i, k)].clone() * snf.diagonal[k].clone();
        }
    }
    out
}

/// Solve `basis · y = t` exactly over the integers, where the columns of
/// `basis` are independent. Returns `None` when `t` is outside the lattice
/// spanned by the columns.
pub fn solve_in_lattice<C: Coeff>(basis: &IntMatrix<C>, t: &[C]) -> Option<Vec<C>> {
    let snf = smith_normal_form(basis);
    debug_assert_eq!(snf.rank, basis.cols, "basis columns must be independent");
    let ut = snf.u.apply(t);
    let mut y0 = vec![C::zero(); basis.cols];
    for i in 0..basis.cols {
        let d = &snf.diagonal[i];
        if d.is_zero() {
            if !ut[i].is_zero() {
                return None;
            }
        } else {
            if !(ut[i].clone() % d.clone()).is_zero() {
                return None;
            }
            y0[i] = ut[i].clone() / d.clone();
        }
    }
    for x in ut.iter().skip(basis.cols) {
        if !x.is_zero() {
            return None;
        }
    }
    Some(snf.v.apply(&y0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    type M = IntMatrix<BigInt>;

    fn check_transforms(a: &M) {
        let snf = smith_normal_form(a);
        // U·A·V must reproduce the diagonal.
        let d = snf.u.mul(a).mul(&snf.v);
        for i in 0..d.rows {
            for j in 0..d.cols {
                let expect = if i == j && i < snf.diagonal.len() {
                    snf.diagonal[i].clone()
                } else {
                    BigInt::from(0)
                };
                assert_eq!(d[(i, j)], expect, "D mismatch at ({},{})", i, j);
            }
        }
        // Divisibility chain, nonnegative entries.
        for w in snf.diagonal.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero(), "zero before nonzero on diagonal");
                assert!((w[1].clone() % w[0].clone()).is_zero(), "divisibility broken");
            }
        }
        // Tracked inverses really are inverses.
        assert_eq!(snf.u.mul(&snf.u_inv), M::identity(a.rows));
        assert_eq!(snf.v.mul(&snf.v_inv), M::identity(a.cols));
    }

    #[test]
    fn diag_2_3_gives_1_6() {
        let a = M::from_i64(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(snf.rank, 2);
        check_transforms(&a);
    }

    #[test]
    fn rank_one_projector() {
        let a = M::from_i64(&[&[1, 0], &[0, 0]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal, vec![BigInt::from(1), BigInt::from(0)]);
        assert_eq!(snf.rank, 1);
    }

    #[test]
    fn kernel_of_projection() {
        let a = M::from_i64(&[&[1, 0, 0], &[0, 2, 0]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols, 1);
        // Kernel is the third axis, up to sign.
        assert_eq!(k[(0, 0)], BigInt::from(0));
        assert_eq!(k[(1, 0)], BigInt::from(0));
        assert_eq!(k[(2, 0)].clone().abs(), BigInt::from(1));
    }

    #[test]
    fn solve_roundtrip() {
        let b = M::from_i64(&[&[2, 1], &[0, 3], &[4, 0]]);
        let t = b.apply(&[BigInt::from(-3), BigInt::from(5)]);
        let y = solve_in_lattice(&b, &t).expect("solvable");
        assert_eq!(b.apply(&y), t);
        // And something outside the lattice fails: column lattice of [[2]]
        let b2 = M::from_i64(&[&[2]]);
        assert!(solve_in_lattice(&b2, &[BigInt::from(1)]).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = M> {
        ((1usize..=5), (1usize..=5)).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..=6, r * c).prop_map(move |data| {
                M::from_rows(
                    data.chunks(c).map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect(),
                )
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn snf_transform_identity(a in arb_matrix()) {
            check_transforms(&a);
        }

        #[test]
        fn kernel_columns_annihilate(a in arb_matrix()) {
            let k = kernel_basis(&a);
            for j in 0..k.cols {
                let col = k.column(j);
                let img = a.apply(&col);
                prop_assert!(img.iter().all(|x| x.is_zero()));
            }
        }
    }
}
