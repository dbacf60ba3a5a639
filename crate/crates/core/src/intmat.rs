//! Integer matrix normal forms: row Hermite form (canonical lattice bases),
//! Smith form with unimodular transforms (adapted bases, kernels).
//!
//! Everything here is dense `Vec<Vec<BigInt>>`; the dimensions in play are
//! tiny (n <= 4) but entries are arbitrary precision.

use num::bigint::BigInt;
use num::Integer;
use num::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mul(a: &IMat, b: &IMat) -> IMat {
    let m = a.len();
    let k = if m > 0 { a[0].len() } else { 0 };
    let n = if b.is_empty() { 0 } else { b[0].len() };
    debug_assert_eq!(k, b.len());
    let mut out = vec![vec![BigInt::zero(); n]; m];
    for i in 0..m {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &a[i][l] * &b[l][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn transpose(a: &IMat) -> IMat {
    let m = a.len();
    let n = if m > 0 { a[0].len() } else { 0 };
    (0..n).map(|j| (0..m).map(|i| a[i][j].clone()).collect()).collect()
}

fn row_sub(a: &mut IMat, i: usize, t: usize, q: &BigInt) {
    for k in 0..a[i].len() {
        let d = &a[t][k] * q;
        a[i][k] -= d;
    }
}

fn neg_row(a: &mut IMat, i: usize) {
    for x in a[i].iter_mut() {
        *x = -std::mem::take(x);
    }
}

fn swap_cols(a: &mut IMat, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn col_sub(a: &mut IMat, j: usize, t: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let d = &row[t] * q;
        row[j] -= d;
    }
}

/// Row Hermite normal form.  Returns the reduced matrix (same shape, zero rows
/// sunk to the bottom) and its rank.  Pivots are positive, entries below a
/// pivot are zero, entries above are reduced into `[0, pivot)`; this makes the
/// form unique, so it doubles as a canonical representative of the row span.
pub fn hnf(mut a: IMat) -> (IMat, usize) {
    let m = a.len();
    let n = if m > 0 { a[0].len() } else { 0 };
    let mut row = 0;
    for col in 0..n {
        if row >= m {
            break;
        }
        loop {
            // Smallest-magnitude nonzero entry of this column at or below `row`.
            let mut piv: Option<usize> = None;
            for i in row..m {
                if !a[i][col].is_zero()
                    && piv.is_none_or(|p| a[i][col].magnitude() < a[p][col].magnitude())
                {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            a.swap(row, p);
            let mut clean = true;
            for i in row + 1..m {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[row][col]);
                if !q.is_zero() {
                    row_sub(&mut a, i, row, &q);
                }
                if !a[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                if a[row][col].is_negative() {
                    neg_row(&mut a, row);
                }
                for i in 0..row {
                    let q = a[i][col].div_floor(&a[row][col]);
                    if !q.is_zero() {
                        row_sub(&mut a, i, row, &q);
                    }
                }
                row += 1;
                break;
            }
        }
    }
    (a, row)
}

/// Smith normal form `u * a * v = d` with `u`, `v` unimodular and `d` diagonal
/// with positive entries `d_1 | d_2 | ...` followed by zeros.
pub struct Snf {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
    pub rank: usize,
}

pub fn snf(a: &IMat) -> Snf {
    let m = a.len();
    let n = if m > 0 { a[0].len() } else { 0 };
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| d[i][j].magnitude() < d[bi][bj].magnitude())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap(t, bi);
        u.swap(t, bi);
        swap_cols(&mut d, t, bj);
        swap_cols(&mut v, t, bj);

        let mut clean = true;
        for i in t + 1..m {
            if d[i][t].is_zero() {
                continue;
            }
            let q = d[i][t].div_floor(&d[t][t]);
            if !q.is_zero() {
                row_sub(&mut d, i, t, &q);
                row_sub(&mut u, i, t, &q);
            }
            if !d[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..n {
            if d[t][j].is_zero() {
                continue;
            }
            let q = d[t][j].div_floor(&d[t][t]);
            if !q.is_zero() {
                col_sub(&mut d, j, t, &q);
                col_sub(&mut v, j, t, &q);
            }
            if !d[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Divisibility sweep: fold in any entry the pivot does not divide yet.
        let mut restart = false;
        'sweep: for i in t + 1..m {
            for j in t + 1..n {
                if !(&d[i][j] % &d[t][t]).is_zero() {
                    for k in 0..n {
                        let x = d[i][k].clone();
                        d[t][k] += x;
                    }
                    for k in 0..m {
                        let x = u[i][k].clone();
                        u[t][k] += x;
                    }
                    restart = true;
                    break 'sweep;
                }
            }
        }
        if restart {
            continue;
        }
        if d[t][t].is_negative() {
            neg_row(&mut d, t);
            neg_row(&mut u, t);
        }
        t += 1;
    }
    Snf { u, d, v, rank: t }
}

/// Basis of the left kernel `{ x : x * a = 0 }` as rows.
pub fn left_kernel(a: &IMat) -> IMat {
    let s = snf(a);
    s.u[s.rank..].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_of_known_matrix() {
        // Hand-derived: r1 -= 2 r0 gives (0,-2,-8); negate; reduce row 0 by it.
        let (h, rank) = hnf(im(&[&[2, 3, 6], &[4, 4, 4]]));
        assert_eq!(rank, 2);
        assert_eq!(h, im(&[&[2, 1, -2], &[0, 2, 8]]));
    }

    #[test]
    fn hnf_is_canonical_under_row_shuffles() {
        let a = im(&[&[6, 0], &[0, 4], &[2, 2]]);
        let b = im(&[&[2, 2], &[6, 0], &[-6, 4]]); // same row span over Z
        let (ha, ra) = hnf(a);
        let (hb, rb) = hnf(b);
        assert_eq!(ra, 2);
        assert_eq!(rb, 2);
        assert_eq!(ha[..2], hb[..2]);
    }

    #[test]
    fn snf_reconstructs_and_divides() {
        let a = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = snf(&a);
        assert_eq!(mul(&mul(&s.u, &a), &s.v), s.d);
        assert_eq!(s.rank, 3);
        let diag: Vec<_> = (0..3).map(|i| s.d[i][i].clone()).collect();
        for i in 0..2 {
            assert!(!diag[i].is_zero());
            assert!((&diag[i + 1] % &diag[i]).is_zero(), "divisibility chain broken");
        }
        // Transforms stay unimodular: their Hermite form is the identity.
        for m in [&s.u, &s.v] {
            let (h, r) = hnf(m.clone());
            assert_eq!(r, 3);
            assert_eq!(h, identity(3));
        }
    }

    #[test]
    fn snf_handles_rank_deficiency() {
        let a = im(&[&[2, 4], &[1, 2]]);
        let s = snf(&a);
        assert_eq!(s.rank, 1);
        assert_eq!(mul(&mul(&s.u, &a), &s.v), s.d);
        let ker = left_kernel(&a);
        assert_eq!(ker.len(), 1);
        // x * a = 0 for the kernel row.
        assert!(mul(&ker, &a).iter().flatten().all(|x| x.is_zero()));
    }

    #[test]
    fn kernel_of_full_rank_matrix_is_empty() {
        let a = im(&[&[3, 1], &[0, 2]]);
        assert!(left_kernel(&a).is_empty());
    }
}
