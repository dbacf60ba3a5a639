//! Dense rational matrices (exact Gaussian elimination, small dimensions).

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: Vec<Vec<Rat>>,
}

impl QMat {
    pub fn new(rows: Vec<Vec<Rat>>) -> Self {
        if let Some(first) = rows.first() {
            let n = first.len();
            assert!(rows.iter().all(|r| r.len() == n), "ragged matrix");
        }
        QMat { rows }
    }

    pub fn identity(n: usize) -> Self {
        QMat::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
                .collect(),
        )
    }

    pub fn zero(m: usize, n: usize) -> Self {
        QMat::new(vec![vec![Rat::zero(); n]; m])
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> QMat {
        let (m, n) = (self.nrows(), self.ncols());
        QMat::new((0..n).map(|j| (0..m).map(|i| self.rows[i][j].clone()).collect()).collect())
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        let (m, k, n) = (self.nrows(), self.ncols(), other.ncols());
        assert_eq!(k, other.nrows(), "dimension mismatch in matrix product");
        let mut out = vec![vec![Rat::zero(); n]; m];
        for i in 0..m {
            for l in 0..k {
                if self.rows[i][l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = &self.rows[i][l] * &other.rows[l][j];
                    out[i][j] += t;
                }
            }
        }
        QMat::new(out)
    }

    /// Row vector times matrix.
    pub fn act_row(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.nrows());
        let n = self.ncols();
        let mut out = vec![Rat::zero(); n];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..n {
                let t = vi * &self.rows[i][j];
                out[j] += t;
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> QMat {
        QMat::new(self.rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect())
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.nrows(), self.ncols()), (other.nrows(), other.ncols()));
        QMat::new(
            self.rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        )
    }

    pub fn neg(&self) -> QMat {
        QMat::new(self.rows.iter().map(|r| r.iter().map(|x| -x).collect()).collect())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.nrows();
        self.ncols() == n
            && (0..n).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_zero())
    }

    pub fn det(&self) -> Rat {
        let n = self.nrows();
        assert_eq!(n, self.ncols(), "determinant of non-square matrix");
        let mut a = self.rows.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
                return Rat::zero();
            };
            if p != col {
                a.swap(col, p);
                det = -det;
            }
            det *= &a[col][col];
            let pivot = a[col][col].clone();
            for i in col + 1..n {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = &a[i][col] / &pivot;
                for j in col..n {
                    let t = &f * &a[col][j];
                    a[i][j] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<QMat> {
        let n = self.nrows();
        assert_eq!(n, self.ncols(), "inverse of non-square matrix");
        let mut a = self.rows.clone();
        let mut inv = QMat::identity(n).rows;
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
                return Err(Error::Singular);
            };
            a.swap(col, p);
            inv.swap(col, p);
            let pivot = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &pivot;
                inv[col][j] /= &pivot;
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[i][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[i][j] -= t;
                }
            }
        }
        Ok(QMat::new(inv))
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.denom().is_one())
    }

    /// Assemble a 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &QMat, b: &QMat, c: &QMat, d: &QMat) -> QMat {
        let n = a.nrows();
        assert!(
            [a, b, c, d].iter().all(|m| m.nrows() == n && m.ncols() == n),
            "blocks must be square of equal size"
        );
        let mut rows = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut r = a.rows[i].clone();
            r.extend(b.rows[i].iter().cloned());
            rows.push(r);
        }
        for i in 0..n {
            let mut r = c.rows[i].clone();
            r.extend(d.rows[i].iter().cloned());
            rows.push(r);
        }
        QMat::new(rows)
    }

    /// Extract block `(bi, bj)` of a 2x2 block structure with blocks of size `n`.
    pub fn block(&self, bi: usize, bj: usize, n: usize) -> QMat {
        QMat::new(
            (0..n)
                .map(|i| (0..n).map(|j| self.rows[bi * n + i][bj * n + j].clone()).collect())
                .collect(),
        )
    }

    pub fn abs_det(&self) -> Rat {
        self.det().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn qm(rows: &[&[(i64, i64)]]) -> QMat {
        QMat::new(rows.iter().map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect()).collect())
    }

    #[test]
    fn inverse_round_trips() {
        let a = qm(&[&[(2, 1), (1, 3)], &[(0, 1), (1, 2)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMat::identity(2));
        assert_eq!(inv.mul(&a), QMat::identity(2));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let a = qm(&[&[(1, 2), (3, 1)], &[(5, 1), (7, 3)]]);
        // (1/2)(7/3) - (3)(5) = 7/6 - 15 = -83/6
        assert_eq!(a.det(), rat(-83, 6));
        assert!(qm(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]).det().is_zero());
    }

    #[test]
    fn singular_inverse_is_an_error() {
        assert!(qm(&[&[(1, 1), (2, 1)], &[(2, 1), (4, 1)]]).inverse().is_err());
    }

    #[test]
    fn blocks_round_trip() {
        let a = QMat::identity(2);
        let b = qm(&[&[(0, 1), (1, 1)], &[(2, 1), (0, 1)]]);
        let g = QMat::from_blocks(&a, &b, &b, &a);
        assert_eq!(g.block(0, 0, 2), a);
        assert_eq!(g.block(0, 1, 2), b);
        assert_eq!(g.block(1, 0, 2), b);
        assert_eq!(g.block(1, 1, 2), a);
    }
}
