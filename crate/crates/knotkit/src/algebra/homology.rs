//! Homology of finitely generated abelian groups presented by integer
//! matrices: two-step complexes, lattice quotients, and homology of maps
//! induced on subquotients (needed for the second pass of the iterated
//! homology of a bicomplex).

use super::matrix::IntMatrix;
use super::snf::{column_lattice_basis, kernel_basis, smith_normal_form, solve_in_lattice};
use super::Coeff;
use crate::{Error, Result};

/// A finitely generated abelian group `Z^free ⊕ Z/t_1 ⊕ … ⊕ Z/t_k` with the
/// torsion orders in increasing order, each dividing the next.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Homology<C: Coeff> {
    pub free_rank: usize,
    pub torsion: Vec<C>,
}

impl<C: Coeff> Homology<C> {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Homology `ker(d_out) / im(d_in)` of the two-step complex
/// `C_prev --d_in--> C --d_out--> C_next`.
///
/// Fails with a law violation unless `d_out ∘ d_in = 0`. The free rank is
/// `null(d_out) − rank(d_in)`; the torsion orders are the nontrivial
/// invariant factors of `d_in` (valid because `C/ker(d_out)` embeds in a
/// free group, so the quotient sequence splits off the torsion of
/// `C/im(d_in)` unchanged).
pub fn homology_ranks<C: Coeff>(
    d_in: &IntMatrix<C>,
    d_out: &IntMatrix<C>,
) -> Result<Homology<C>> {
    if d_in.rows != d_out.cols {
        return Err(Error::Parse(format!(
            "chain group dimension mismatch: d_in lands in rank {}, d_out leaves rank {}",
            d_in.rows, d_out.cols
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::Law("d_out o d_in != 0: not a chain complex".into()));
    }
    let snf_out = smith_normal_form(d_out);
    let snf_in = smith_normal_form(d_in);
    let nullity = d_out.cols - snf_out.rank;
    Ok(Homology { free_rank: nullity - snf_in.rank, torsion: snf_in.torsion() })
}

/// Quotient `L1 / L2` of integer lattices given by generating columns,
/// with `L2 ⊆ L1` inside a common ambient `Z^n`. Panics if an `L2`
/// generator falls outside `L1`; callers are expected to pass honest
/// sublattices.
pub fn lattice_quotient<C: Coeff>(
    l1_gens: &IntMatrix<C>,
    l2_gens: &IntMatrix<C>,
) -> Homology<C> {
    let basis = column_lattice_basis(l1_gens);
    if basis.cols == 0 {
        return Homology { free_rank: 0, torsion: Vec::new() };
    }
    // Express every L2 generator in L1 coordinates.
    let mut coords = IntMatrix::zero(basis.cols, l2_gens.cols);
    for j in 0..l2_gens.cols {
        let t = l2_gens.column(j);
        let y = solve_in_lattice(&basis, &t)
            .expect("quotient by a set that is not inside the subgroup");
        for i in 0..basis.cols {
            coords[(i, j)] = y[i].clone();
        }
    }
    let snf = smith_normal_form(&coords);
    Homology { free_rank: basis.cols - snf.rank, torsion: snf.torsion() }
}

/// Homology of a two-step complex of subquotients.
///
/// The ambient picture is `C_prev --f--> C_mid --g--> C_next`; inside each
/// chain group sits a subgroup with a distinguished subgroup of relations,
/// and `f`, `g` induce maps on the quotients. Writing `K_*` for the columns
/// of the subgroup bases and `B_*` for relation generators, this computes
///
/// ```text
///   ker( K_mid/B_mid --g--> K_next/B_next ) / im( K_prev/B_prev --f--> )
/// ```
///
/// exactly, torsion included. Requirements (not re-checked here beyond
/// solvability panics): `f(K_prev) ⊆ K_mid`, `g(K_mid) ⊆ K_next`,
/// `f(B_prev) ⊆ B_mid`, `g(B_mid) ⊆ B_next`.
#[allow(clippy::too_many_arguments)]
pub fn subquotient_homology<C: Coeff>(
    f: &IntMatrix<C>,
    g: &IntMatrix<C>,
    k_prev: &IntMatrix<C>,
    k_mid: &IntMatrix<C>,
    b_mid: &IntMatrix<C>,
    b_next: &IntMatrix<C>,
) -> Homology<C> {
    // Numerator lattice: x = K_mid·u with g·x inside the B_next lattice.
    // Solve [g·K_mid | -B_next]·(u; v) = 0 and project the kernel onto u.
    let g_k = g.mul(k_mid);
    let mut neg_b = b_next.clone();
    for j in 0..neg_b.cols {
        for i in 0..neg_b.rows {
            let x = neg_b[(i, j)].clone();
            neg_b[(i, j)] = -x;
        }
    }
    let system = g_k.hcat(&neg_b);
    let ker = kernel_basis(&system);
    let u_part = {
        let mut m = IntMatrix::zero(k_mid.cols, ker.cols);
        for j in 0..ker.cols {
            for i in 0..k_mid.cols {
                m[(i, j)] = ker[(i, j)].clone();
            }
        }
        m
    };
    let l1 = k_mid.mul(&u_part);
    // Denominator lattice: B_mid together with f applied to K_prev.
    let l2 = b_mid.hcat(&f.mul(k_prev));
    lattice_quotient(&l1, &l2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    type M = IntMatrix<BigInt>;

    fn h(free: usize, torsion: &[i64]) -> Homology<BigInt> {
        Homology { free_rank: free, torsion: torsion.iter().map(|&t| BigInt::from(t)).collect() }
    }

    #[test]
    fn rejects_non_complex() {
        let d_in = M::from_i64(&[&[1], &[0]]);
        let d_out = M::from_i64(&[&[1, 0]]);
        assert!(homology_ranks(&d_in, &d_out).is_err());
    }

    #[test]
    fn circle_homology() {
        // Simplicial circle: 3 vertices, 3 edges. H0 = Z, H1 = Z.
        // boundary: edges -> vertices
        let d1 = M::from_i64(&[&[-1, 0, 1], &[1, -1, 0], &[0, 1, -1]]);
        let zero_in = M::zero(3, 0);
        let zero_out = M::zero(0, 3);
        let h0 = homology_ranks(&d1, &zero_out).unwrap();
        assert_eq!(h0, h(1, &[]));
        let h1 = homology_ranks(&zero_in, &d1).unwrap();
        assert_eq!(h1, h(1, &[]));
    }

    #[test]
    fn torsion_appears() {
        // Z --2--> Z gives coker Z/2.
        let two = M::from_i64(&[&[2]]);
        let zero_out = M::zero(0, 1);
        assert_eq!(homology_ranks(&two, &zero_out).unwrap(), h(0, &[2]));
    }

    #[test]
    fn quotient_of_index_two_sublattice() {
        let l1 = M::from_i64(&[&[1, 0], &[0, 1]]);
        let l2 = M::from_i64(&[&[2, 0], &[0, 1]]);
        assert_eq!(lattice_quotient(&l1, &l2), h(0, &[2]));
        let l2b = M::from_i64(&[&[1], &[0]]);
        assert_eq!(lattice_quotient(&l1, &l2b), h(1, &[]));
    }

    #[test]
    fn subquotient_identity_map_collapses() {
        // Ambient Z --id--> Z --0--> 0 with full subgroups and no relations:
        // homology of Z --id--> Z at the target is 0.
        let f = M::from_i64(&[&[1]]);
        let g = M::zero(0, 1);
        let k = M::from_i64(&[&[1]]);
        let b = M::zero(1, 0);
        let b_next = M::zero(0, 0);
        let hm = subquotient_homology(&f, &g, &k, &k, &b, &b_next);
        assert_eq!(hm, h(0, &[]));
    }

    /// Brute force over small dimensions: enumerate the quotient group of a
    /// two-step complex directly and compare orders/ranks.
    fn brute_force_order(d_in: &M, d_out: &M, modulus: i64) -> usize {
        // count |ker(d_out) mod m| / |im(d_in) mod m| over Z/m for prime m:
        // equals m^{dim ker - rank(d_in over Z/m)}; we only use it to spot
        // rank errors, torsion is checked separately by fixtures.
        let m = modulus;
        let reduce = |x: &BigInt| ((x % m + m) % m).clone();
        // Gaussian elimination over Z/m (m prime) to get ranks.
        let rank_mod = |mat: &M| {
            let mut a: Vec<Vec<i64>> = (0..mat.rows)
                .map(|i| {
                    (0..mat.cols)
                        .map(|j| {
                            use num_traits::ToPrimitive;
                            reduce(&mat[(i, j)]).to_i64().unwrap()
                        })
                        .collect()
                })
                .collect();
            let mut rank = 0usize;
            let mut row = 0usize;
            for col in 0..mat.cols {
                let Some(p) = (row..mat.rows).find(|&r| a[r][col] % m != 0) else { continue };
                a.swap(row, p);
                let inv = (1..m).find(|&x| (x * a[row][col]) % m == 1).unwrap();
                for r in 0..mat.rows {
                    if r != row && a[r][col] % m != 0 {
                        let f = (a[r][col] * inv) % m;
                        for c in 0..mat.cols {
                            a[r][c] = ((a[r][c] - f * a[row][c]) % m + m * m) % m;
                        }
                    }
                }
                rank += 1;
                row += 1;
                if row == mat.rows {
                    break;
                }
            }
            rank
        };
        let null = d_out.cols - rank_mod(d_out);
        null - rank_mod(d_in)
    }

    fn arb_complex() -> impl Strategy<Value = (M, M)> {
        // Build a guaranteed complex: d_out arbitrary, d_in a combination of
        // kernel columns of d_out.
        ((1usize..=4), (1usize..=4), (1usize..=3)).prop_flat_map(|(mid, next, prev)| {
            proptest::collection::vec(-3i64..=3, next * mid).prop_flat_map(move |out_data| {
                let d_out = M::from_rows(
                    out_data.chunks(mid).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
                );
                let ker = kernel_basis(&d_out);
                let kc = ker.cols;
                proptest::collection::vec(-2i64..=2, kc * prev).prop_map(move |mix| {
                    let mixm = if kc == 0 {
                        M::zero(0, prev)
                    } else {
                        M::from_rows(
                            mix.chunks(prev).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
                        )
                    };
                    let d_in = ker.mul(&mixm);
                    (d_in, d_out.clone())
                })
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn free_rank_matches_brute_force_mod_p((d_in, d_out) in arb_complex()) {
            let hm = homology_ranks(&d_in, &d_out).unwrap();
            // Over Z/p for a large prime not dividing any torsion order the
            // dimension equals free rank + number of torsion factors p does
            // not kill; picking p = 101 avoids all torsion our ±2 entries
            // can produce only if it does not divide the factors — verify
            // both p = 101 and p = 103 agree to rule out coincidences.
            for p in [101i64, 103] {
                let dim = brute_force_order(&d_in, &d_out, p);
                let expected = hm.free_rank
                    + hm.torsion.iter().filter(|t| (*t % p).is_zero()).count();
                prop_assert_eq!(dim, expected, "mod {} dimension mismatch", p);
            }
        }
    }
}
