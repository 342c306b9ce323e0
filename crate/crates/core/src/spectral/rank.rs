//! Exact rank of integer matrices by fraction-free sparse elimination.
//!
//! Rows are combined as `p * r - r_c * pivot` and then divided by the gcd of
//! their entries, so no fractions appear and entries stay small on incidence
//! matrices. Arithmetic is done in `i128` with overflow checks; on overflow the
//! elimination restarts over big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};

use crate::sparse::SparseMatrix;

pub fn exact_rank(m: &SparseMatrix) -> usize {
    let rows: Vec<Vec<(usize, i128)>> = m
        .clone()
        .into_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|(j, v)| (j, v as i128)).collect())
        .collect();
    if let Some(r) = rank_generic(rows, m.ncols()) {
        return r;
    }
    let rows: Vec<Vec<(usize, BigInt)>> = m
        .clone()
        .into_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|(j, v)| (j, BigInt::from(v))).collect())
        .collect();
    rank_generic(rows, m.ncols()).expect("big integers do not overflow")
}

/// Returns `None` if an intermediate value overflows `T`.
fn rank_generic<T>(rows: Vec<Vec<(usize, T)>>, ncols: usize) -> Option<usize>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    // bucket rows by leading column
    let mut buckets: Vec<Vec<Vec<(usize, T)>>> = vec![Vec::new(); ncols];
    for r in rows.into_iter().filter(|r| !r.is_empty()) {
        buckets[r[0].0].push(r);
    }
    let mut rank = 0;
    for col in 0..ncols {
        let mut cands = std::mem::take(&mut buckets[col]);
        if cands.is_empty() {
            continue;
        }
        let best = (0..cands.len())
            .min_by(|&a, &b| {
                cands[a][0]
                    .1
                    .abs()
                    .cmp(&cands[b][0].1.abs())
                    .then(cands[a].len().cmp(&cands[b].len()))
            })
            .unwrap();
        let pivot = cands.swap_remove(best);
        rank += 1;
        for r in cands {
            let reduced = eliminate(&pivot, &r)?;
            if let Some(&(lead, _)) = reduced.first() {
                buckets[lead].push(reduced);
            }
        }
    }
    Some(rank)
}

/// `p * r - r_c * pivot`, leading column cancelled, content removed.
fn eliminate<T>(pivot: &[(usize, T)], r: &[(usize, T)]) -> Option<Vec<(usize, T)>>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    let p = &pivot[0].1;
    let c = &r[0].1;
    let g = p.gcd(c);
    let (a, b) = (p.div_floor(&g), c.div_floor(&g));
    let mut out: Vec<(usize, T)> = Vec::with_capacity(pivot.len() + r.len());
    let (mut i, mut j) = (1, 1);
    while i < r.len() || j < pivot.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, a.checked_mul(&r[i - 1].1)?)
        } else if cj < ci {
            j += 1;
            (cj, T::zero().checked_sub(&b.checked_mul(&pivot[j - 1].1)?)?)
        } else {
            i += 1;
            j += 1;
            let x = a.checked_mul(&r[i - 1].1)?;
            let y = b.checked_mul(&pivot[j - 1].1)?;
            (ci, x.checked_sub(&y)?)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    let content = out.iter().fold(T::zero(), |acc, e| acc.gcd(&e.1));
    if !content.is_zero() && content != T::one() {
        for e in &mut out {
            e.1 = e.1.div_floor(&content);
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, data: &[i64]) -> SparseMatrix {
        SparseMatrix::from_triplets(
            rows,
            cols,
            data.iter()
                .enumerate()
                .map(|(k, &v)| (k / cols, k % cols, v)),
        )
    }

    #[test]
    fn small_ranks() {
        assert_eq!(exact_rank(&m(2, 2, &[1, 2, 2, 4])), 1);
        assert_eq!(exact_rank(&m(2, 2, &[2, 3, 4, 5])), 2);
        assert_eq!(exact_rank(&m(3, 3, &[0; 9])), 0);
        assert_eq!(exact_rank(&m(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9])), 2);
        assert_eq!(exact_rank(&SparseMatrix::zeros(0, 4)), 0);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX / 3;
        let (r1, r2) = ([big, big - 1, 7], [big - 5, big, 11]);
        let sum: Vec<i64> = (0..3).map(|i| r1[i] + r2[i]).collect();
        let dependent = [&r1[..], &r2[..], &sum[..]].concat();
        assert_eq!(exact_rank(&m(3, 3, &dependent)), 2);
        let mut bumped = sum.clone();
        bumped[2] += 1;
        let independent = [&r1[..], &r2[..], &bumped[..]].concat();
        assert_eq!(exact_rank(&m(3, 3, &independent)), 3);
    }

    proptest::proptest! {
        #[test]
        fn agrees_with_float_rank_on_small_entries(
            data in proptest::collection::vec(-3i64..=3, 20),
        ) {
            let a = m(4, 5, &data);
            proptest::prop_assert_eq!(exact_rank(&a), a.to_dense().rank(1e-9));
            proptest::prop_assert_eq!(exact_rank(&a), exact_rank(&a.transpose()));
        }
    }
}
