//! Seeded random generators for lattices, coset functions, Heisenberg
//! elements and symplectic matrices.  Every sampler draws from a ChaCha
//! stream, so a fixed seed reproduces the same objects on any platform.

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::bruhat::MElement;
use crate::cyclo::CycloScalar;
use crate::heisenberg::HeisElement;
use crate::lattice::{LatticePair, QLattice};
use crate::normfactor::NormFactor;
use crate::qmat::QMat;
use crate::rational::{rat, Rat};
use crate::weil::SpMatrix;

pub struct Sampler {
    rng: ChaCha12Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha12Rng::seed_from_u64(seed) }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    /// Rational with numerator in `−max_num..=max_num`, denominator in
    /// `1..=max_den`.
    pub fn rat(&mut self, max_num: i64, max_den: i64) -> Rat {
        rat(self.int(-max_num, max_num), self.int(1, max_den))
    }

    pub fn nonzero_rat(&mut self, max_num: i64, max_den: i64) -> Rat {
        loop {
            let r = self.rat(max_num, max_den);
            if !r.is_zero() {
                return r;
            }
        }
    }

    pub fn vector(&mut self, n: usize, max_num: i64, max_den: i64) -> Vec<Rat> {
        (0..n).map(|_| self.rat(max_num, max_den)).collect()
    }

    fn int_matrix(&mut self, n: usize, max_entry: i64) -> QMat {
        QMat::new(
            (0..n)
                .map(|_| (0..n).map(|_| rat(self.int(-max_entry, max_entry), 1)).collect())
                .collect(),
        )
    }

    fn invertible_int_matrix(&mut self, n: usize, max_entry: i64) -> QMat {
        loop {
            let m = self.int_matrix(n, max_entry);
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    /// Full-rank lattice with denominators bounded by `max_den`.
    pub fn lattice(&mut self, n: usize, max_den: i64) -> QLattice {
        let m = self.invertible_int_matrix(n, 2);
        let rows: Vec<Vec<Rat>> = m
            .rows
            .iter()
            .map(|row| {
                let d = rat(1, self.int(1, max_den));
                row.iter().map(|x| x * &d).collect()
            })
            .collect();
        QLattice::from_basis(rows).expect("rows stay independent under scaling")
    }

    /// Nested pair `K ⊆ L` with index at most `max_index`.
    pub fn lattice_pair(&mut self, n: usize, max_den: i64, max_index: i64) -> LatticePair {
        let sup = self.lattice(n, max_den);
        loop {
            let t = self.invertible_int_matrix(n, 2);
            let idx = t.abs_det();
            if idx.denom() == &1.into() && idx.numer() <= &max_index.into() {
                let sub = QLattice::from_basis(t.mul(&sup.basis()).rows)
                    .expect("integral image of a basis");
                return LatticePair::new(sup, sub).expect("construction keeps containment");
            }
        }
    }

    /// Root of unity of order dividing `max_order`, scaled by a small nonzero
    /// rational.
    pub fn cyclo(&mut self, max_order: i64) -> CycloScalar {
        let den = self.int(1, max_order);
        let num = self.int(0, den - 1);
        CycloScalar::unit(&rat(num, den)).scale(&self.nonzero_rat(3, 2))
    }

    /// Nonzero coset function: an invariance lattice plus up to `max_terms`
    /// support cosets with cyclotomic values.
    pub fn melement(&mut self, n: usize, max_den: i64, max_terms: usize) -> MElement {
        loop {
            let invariance = self.lattice(n, max_den);
            let terms: Vec<(Vec<Rat>, CycloScalar)> = (0..self.int(1, max_terms as i64))
                .map(|_| (self.vector(n, 2, max_den), self.cyclo(6)))
                .collect();
            let f = MElement::assemble(invariance, &NormFactor::one(), terms);
            if !f.is_zero() {
                return f;
            }
        }
    }

    pub fn heis(&mut self, n: usize, max_num: i64, max_den: i64) -> HeisElement {
        HeisElement::new(
            self.vector(n, max_num, max_den),
            self.vector(n, max_num, max_den),
            self.rat(max_num, max_den),
        )
    }

    pub fn symmetric(&mut self, n: usize, max_num: i64, max_den: i64) -> QMat {
        let m = QMat::new(
            (0..n)
                .map(|_| (0..n).map(|_| self.rat(max_num, max_den)).collect())
                .collect(),
        );
        m.add(&m.transpose()).scale(&rat(1, 2))
    }

    /// Product of elementary row operations: determinant `±1`, integer
    /// entries.
    pub fn unimodular(&mut self, n: usize, steps: usize) -> QMat {
        let mut m = QMat::identity(n);
        for _ in 0..steps {
            let i = self.int(0, n as i64 - 1) as usize;
            let mut j = i;
            if n > 1 {
                while j == i {
                    j = self.int(0, n as i64 - 1) as usize;
                }
            }
            match self.int(0, 2) {
                0 if n > 1 => {
                    let k = rat(self.int(-2, 2), 1);
                    let row: Vec<Rat> =
                        m.rows[j].iter().map(|x| x * &k).collect();
                    for (a, b) in m.rows[i].iter_mut().zip(row) {
                        *a += b;
                    }
                }
                1 if n > 1 => m.rows.swap(i, j),
                _ => {
                    for a in m.rows[i].iter_mut() {
                        *a = -a.clone();
                    }
                }
            }
        }
        m
    }

    /// Rational symplectic matrix built from a short product of dilations,
    /// quadratic shears and the Fourier atom, with every entry denominator
    /// bounded by `max_den`.
    pub fn symplectic(&mut self, n: usize, max_den: i64) -> SpMatrix {
        loop {
            let mut g = SpMatrix::identity(n);
            for _ in 0..self.int(1, 3) {
                let atom = match self.int(0, 2) {
                    0 => {
                        let mut a = self.unimodular(n, 3);
                        if self.int(0, 1) == 1 {
                            let d = rat(1, 2);
                            a = a.scale(&d);
                        }
                        SpMatrix::from_blocks(
                            &a.inverse().expect("unimodular scaled is invertible").transpose(),
                            &QMat::zero(n, n),
                            &QMat::zero(n, n),
                            &a,
                        )
                        .expect("dilation block matrix is symplectic")
                    }
                    1 => SpMatrix::from_blocks(
                        &QMat::identity(n),
                        &self.symmetric(n, 2, 2),
                        &QMat::zero(n, n),
                        &QMat::identity(n),
                    )
                    .expect("quadratic shear is symplectic"),
                    _ => SpMatrix::j(n),
                };
                g = g.mul(&atom);
            }
            let den_ok = g
                .matrix()
                .rows
                .iter()
                .flatten()
                .all(|x| x.denom() <= &max_den.into());
            if den_ok && !g.is_identity() {
                return g;
            }
        }
    }
}
