//! Full-rank lattices in `Q^n`.
//!
//! A lattice is stored as `rows / den` where `rows` is an `n x n` integer
//! matrix in row Hermite normal form and `gcd(content(rows), den) = 1`; this
//! representation is unique, so structural equality is lattice equality.
//! Row vectors are used throughout: the lattice is `{ x * B : x in Z^n }`
//! for the basis matrix `B`.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::{self, IMat};
use crate::qmat::QMat;
use crate::rational::{common_denominator, frac, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QLattice {
    dim: usize,
    den: BigInt,
    rows: IMat,
}

impl QLattice {
    /// The standard lattice `Z^n`.
    pub fn standard(dim: usize) -> Self {
        assert!(dim > 0, "lattice dimension must be positive");
        QLattice { dim, den: BigInt::one(), rows: intmat::identity(dim) }
    }

    /// Lattice generated by the given vectors (any number of them); they must
    /// span all of `Q^n`.
    pub fn from_generators(dim: usize, gens: &[Vec<Rat>]) -> Result<Self> {
        assert!(dim > 0, "lattice dimension must be positive");
        for g in gens {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
        }
        let all: Vec<Rat> = gens.iter().flatten().cloned().collect();
        let den = common_denominator(&all);
        let int_rows: IMat = gens
            .iter()
            .map(|g| {
                g.iter()
                    .map(|x| {
                        let scaled = x * Rat::from(den.clone());
                        debug_assert!(scaled.denom().is_one());
                        scaled.numer().clone()
                    })
                    .collect()
            })
            .collect();
        let (h, rank) = intmat::hnf(int_rows);
        if rank < dim {
            return Err(Error::RankDeficient { rank, dim });
        }
        Ok(Self::canonical(dim, den, h[..dim].to_vec()))
    }

    pub fn from_basis(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let dim = rows.len();
        let lat = Self::from_generators(dim, &rows)?;
        Ok(lat)
    }

    fn canonical(dim: usize, den: BigInt, rows: IMat) -> Self {
        debug_assert!(den.is_positive());
        let mut g = den.clone();
        for row in &rows {
            for x in row {
                g = g.gcd(x);
            }
        }
        if g.is_one() {
            return QLattice { dim, den, rows };
        }
        let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x / &g).collect()).collect();
        QLattice { dim, den: den / g, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn int_rows(&self) -> &IMat {
        &self.rows
    }

    /// Basis matrix `B` with the lattice equal to the integer row span of `B`.
    pub fn basis(&self) -> QMat {
        let d = Rat::from(self.den.clone());
        QMat::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|x| Rat::from(x.clone()) / &d).collect())
                .collect(),
        )
    }

    /// `|det B|`: the covolume relative to `Z^n`.
    pub fn covolume(&self) -> Rat {
        self.basis().abs_det()
    }

    /// Normalized volume `mu(L) = 1 / [Z^n : L]` (generalized index), i.e. the
    /// reciprocal covolume.
    pub fn mu(&self) -> Rat {
        self.covolume().recip()
    }

    /// Dual lattice `{ y : x . y in Z for all x in L }`.
    pub fn dual(&self) -> QLattice {
        let binv_t = self.basis().inverse().expect("lattice basis is invertible").transpose();
        QLattice::from_basis(binv_t.rows).expect("dual basis is full rank")
    }

    pub fn sum(&self, other: &QLattice) -> Result<QLattice> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut gens = self.basis().rows;
        gens.extend(other.basis().rows);
        QLattice::from_generators(self.dim, &gens)
    }

    pub fn intersect(&self, other: &QLattice) -> Result<QLattice> {
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    /// Image lattice `L * m` for invertible `m` (basis rows multiplied by `m`).
    pub fn transform(&self, m: &QMat) -> Result<QLattice> {
        QLattice::from_basis(self.basis().mul(m).rows)
    }

    /// Scaled lattice `c * L`.
    pub fn scale(&self, c: &Rat) -> QLattice {
        assert!(!c.is_zero());
        QLattice::from_basis(self.basis().scale(c).rows).expect("scaling preserves rank")
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        CosetReducer::new(self).coords(x).iter().all(|c| c.denom().is_one())
    }

    pub fn is_sublattice_of(&self, other: &QLattice) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let red = CosetReducer::new(other);
        self.basis().rows.iter().all(|r| red.coords(r).iter().all(|c| c.denom().is_one()))
    }

    /// Generalized index `[L : K] := [L : L cap K] / [K : L cap K]`, which for
    /// row bases reduces to `|det B_K| / |det B_L|`.
    pub fn generalized_index(l: &QLattice, k: &QLattice) -> Rat {
        k.covolume() / l.covolume()
    }

    /// Smallest positive integer `N` with `N * Z^n` contained in this lattice.
    pub fn scale_level(&self) -> BigInt {
        let inv = self.basis().inverse().expect("lattice basis is invertible");
        let mut level = BigInt::one();
        for row in &inv.rows {
            for x in row {
                level = level.lcm(x.denom());
            }
        }
        level
    }
}

/// Reduces vectors to a canonical residue modulo a lattice: coordinates in the
/// lattice basis are shifted into `[0, 1)^n`.  Built once per bulk operation
/// so the basis inverse is computed a single time.
pub struct CosetReducer {
    basis: QMat,
    inv: QMat,
}

impl CosetReducer {
    pub fn new(lattice: &QLattice) -> Self {
        let basis = lattice.basis();
        let inv = basis.inverse().expect("lattice basis is invertible");
        CosetReducer { basis, inv }
    }

    /// Coordinates of `x` in the lattice basis.
    pub fn coords(&self, x: &[Rat]) -> Vec<Rat> {
        self.inv.act_row(x)
    }

    /// Canonical representative of `x + L`.
    pub fn reduce(&self, x: &[Rat]) -> Vec<Rat> {
        let c: Vec<Rat> = self.coords(x).iter().map(frac).collect();
        self.basis.act_row(&c)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.coords(x).iter().all(|c| c.denom().is_one())
    }
}

/// A nested pair of lattices `K` inside `L`, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePair {
    sup: QLattice,
    sub: QLattice,
}

/// Basis `f_1 .. f_n` of `L` together with divisors `d_1 | d_2 | ... | d_n`
/// such that `d_1 f_1, ..., d_n f_n` is a basis of `K`.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub vectors: Vec<Vec<Rat>>,
    pub divisors: Vec<BigInt>,
}

impl LatticePair {
    pub fn new(sup: QLattice, sub: QLattice) -> Result<Self> {
        if sup.dim() != sub.dim() {
            return Err(Error::DimensionMismatch { expected: sup.dim(), got: sub.dim() });
        }
        if !sub.is_sublattice_of(&sup) {
            return Err(Error::NotSublattice(format!("{sub:?}"), format!("{sup:?}")));
        }
        Ok(LatticePair { sup, sub })
    }

    pub fn sup(&self) -> &QLattice {
        &self.sup
    }

    pub fn sub(&self) -> &QLattice {
        &self.sub
    }

    /// The index `[L : K]`, a positive integer.
    pub fn index(&self) -> BigInt {
        let q = QLattice::generalized_index(&self.sup, &self.sub);
        debug_assert!(q.denom().is_one());
        q.numer().abs()
    }

    /// Change of basis adapted to the pair, from the Smith form of the
    /// integral coordinate matrix of `K` in the basis of `L`.
    pub fn adapted_basis(&self) -> AdaptedBasis {
        let bl = self.sup.basis();
        let blinv = bl.inverse().expect("lattice basis is invertible");
        let c = self.sub.basis().mul(&blinv);
        debug_assert!(c.is_integral(), "sublattice coordinates must be integral");
        let ci: IMat = c
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.numer().clone()).collect())
            .collect();
        let s = intmat::snf(&ci);
        let n = self.sup.dim();
        debug_assert_eq!(s.rank, n);
        let v = QMat::new(
            s.v.iter()
                .map(|r| r.iter().map(|x| Rat::from(x.clone())).collect())
                .collect(),
        );
        let vinv = v.inverse().expect("unimodular transform is invertible");
        let f = vinv.mul(&bl);
        let divisors: Vec<BigInt> = (0..n).map(|i| s.d[i][i].clone()).collect();
        if cfg!(debug_assertions) {
            let red = CosetReducer::new(&self.sub);
            for (fi, di) in f.rows.iter().zip(&divisors) {
                let scaled: Vec<Rat> = fi.iter().map(|x| x * Rat::from(di.clone())).collect();
                debug_assert!(red.contains(&scaled), "divisor multiple must land in K");
            }
        }
        AdaptedBasis { vectors: f.rows, divisors }
    }

    /// All coset representatives of `L / K`, enumerated in mixed-radix order
    /// over the adapted basis.  Errors out above the cap instead of allocating
    /// unboundedly.
    pub fn coset_reps(&self, cap: u64) -> Result<Vec<Vec<Rat>>> {
        let index = self.index();
        if index > BigInt::from(cap) {
            let approx = u64::try_from(&index).unwrap_or(u64::MAX);
            return Err(Error::IndexOverflow { index: approx, cap });
        }
        let ab = self.adapted_basis();
        let n = self.sup.dim();
        let radices: Vec<u64> = ab
            .divisors
            .iter()
            .map(|d| u64::try_from(d).expect("divisor fits in u64 under the cap"))
            .collect();
        let total = u64::try_from(&index).expect("index fits in u64 under the cap");
        let mut reps = Vec::with_capacity(total as usize);
        let mut counter = vec![0u64; n];
        loop {
            let mut rep = vec![Rat::zero(); n];
            for (j, &c) in counter.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let cj = Rat::from(BigInt::from(c));
                for (x, f) in rep.iter_mut().zip(&ab.vectors[j]) {
                    *x += &cj * f;
                }
            }
            reps.push(rep);
            let mut j = 0;
            loop {
                if j == n {
                    debug_assert_eq!(reps.len() as u64, total);
                    return Ok(reps);
                }
                counter[j] += 1;
                if counter[j] < radices[j] {
                    break;
                }
                counter[j] = 0;
                j += 1;
            }
        }
    }
}

/// Integer row vectors `y` with `y * c` integral: the kernel of
/// `Z^n -> (Q / Z)^k`, as rows of a full-rank `n x n` integer matrix.
pub(crate) fn integrality_kernel(c: &QMat) -> IMat {
    let n = c.nrows();
    let k = c.ncols();
    let all: Vec<Rat> = c.rows.iter().flatten().cloned().collect();
    let d = common_denominator(&all);
    if d.is_one() {
        return intmat::identity(n);
    }
    // Solve y * A + t * (d I) = 0 over Z and project to y.
    let mut stacked: IMat = Vec::with_capacity(n + k);
    for row in &c.rows {
        stacked.push(
            row.iter()
                .map(|x| {
                    let s = x * Rat::from(d.clone());
                    debug_assert!(s.denom().is_one());
                    s.numer().clone()
                })
                .collect(),
        );
    }
    for i in 0..k {
        stacked.push((0..k).map(|j| if i == j { d.clone() } else { BigInt::zero() }).collect());
    }
    let kernel = intmat::left_kernel(&stacked);
    let projected: IMat = kernel.into_iter().map(|row| row[..n].to_vec()).collect();
    let (h, rank) = intmat::hnf(projected);
    debug_assert_eq!(rank, n, "integrality kernel must have full rank");
    h[..n].to_vec()
}

/// Largest sublattice of `l` whose basis coordinates `c` satisfy
/// `c * cond ∈ Z^m`; `cond` has one row per basis vector of `l`.  Always
/// full rank (the condition is trivial on a scaled copy of `l`).
pub(crate) fn integral_condition_sublattice(l: &QLattice, cond: &QMat) -> QLattice {
    let basis = l.basis();
    assert_eq!(cond.nrows(), l.dim(), "one condition row per basis vector");
    let coeffs = integrality_kernel(cond);
    let rows: Vec<Vec<Rat>> = coeffs
        .iter()
        .map(|y| {
            let yq: Vec<Rat> = y.iter().map(|c| Rat::from(c.clone())).collect();
            basis.act_row(&yq)
        })
        .collect();
    QLattice::from_generators(l.dim(), &rows).expect("integral condition keeps full rank")
}
