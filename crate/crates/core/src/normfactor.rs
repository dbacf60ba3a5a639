//! Positive magnitudes of the form `q * sqrt(r)` and full scalars
//! `norm * cyclotomic`.
//!
//! Weil-operator prefactors stay in this restricted shape (`q`, `r` positive
//! rationals, `r` squarefree) instead of being expanded into cyclotomic
//! square-root expressions; multiplication extracts square parts so the form
//! is canonical and comparisons stay structural.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use num_complex::Complex64;

use crate::cyclo::CycloScalar;
use crate::error::{Error, Result};
use crate::rational::{rat_to_f64, Rat};

/// Split a positive integer as `s^2 * f` with `f` squarefree.
fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    let mut rem = n.clone();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rem {
        let p2 = &p * &p;
        while (&rem % &p2).is_zero() {
            rem /= &p2;
            s *= &p;
        }
        p += 1;
    }
    (s, rem)
}

/// A positive real of the form `q * sqrt(r)`, with `q` a positive rational and
/// `r` a squarefree positive integer (denominators are rationalized away, so
/// the form is unique).  Closed under multiplication and division, so operator
/// prefactors never leave the form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormFactor {
    q: Rat,
    r: Rat,
}

impl NormFactor {
    pub fn new(q: Rat, r: Rat) -> Self {
        assert!(q.is_positive() && r.is_positive(), "norm factors are positive");
        // q sqrt(a/b) = (q/b) sqrt(ab), then extract the square part of ab.
        let m = r.numer() * r.denom();
        let (s, f) = squarefree_split(&m);
        NormFactor { q: q * Rat::new(s, r.denom().clone()), r: Rat::from(f) }
    }

    pub fn one() -> Self {
        NormFactor { q: Rat::one(), r: Rat::one() }
    }

    /// `sqrt(x)` for positive rational `x`, in canonical form.
    pub fn sqrt(x: &Rat) -> Self {
        NormFactor::new(Rat::one(), x.clone())
    }

    pub fn from_rat(q: Rat) -> Self {
        NormFactor::new(q, Rat::one())
    }

    pub fn q(&self) -> &Rat {
        &self.q
    }

    pub fn r(&self) -> &Rat {
        &self.r
    }

    pub fn mul(&self, other: &Self) -> Self {
        NormFactor::new(&self.q * &other.q, &self.r * &other.r)
    }

    pub fn div(&self, other: &Self) -> Self {
        NormFactor::new(&self.q / &other.q, &self.r / &other.r)
    }

    pub fn is_one(&self) -> bool {
        self.q.is_one() && self.r.is_one()
    }

    /// The square `q^2 * r`, always an exact rational.
    pub fn square(&self) -> Rat {
        &self.q * &self.q * &self.r
    }

    /// `Some(q)` when the value is rational (`r == 1`).
    pub fn as_rational(&self) -> Option<Rat> {
        self.r.is_one().then(|| self.q.clone())
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.q) * rat_to_f64(&self.r).sqrt()
    }
}

/// A full scalar value `sqrt(radicand) * cyclo`.  The rational part of the
/// magnitude is folded into the cyclotomic factor, so two scalars built with
/// the same square-root channel compare structurally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    radicand: Rat,
    cyclo: CycloScalar,
}

impl Scalar {
    pub fn new(norm: &NormFactor, cyclo: CycloScalar) -> Self {
        if cyclo.is_zero() {
            return Scalar::zero();
        }
        Scalar { radicand: norm.r().clone(), cyclo: cyclo.scale(norm.q()) }
    }

    pub fn from_cyclo(cyclo: CycloScalar) -> Self {
        Scalar::new(&NormFactor::one(), cyclo)
    }

    pub fn from_rat(c: Rat) -> Self {
        Scalar::from_cyclo(CycloScalar::from_rat(c))
    }

    pub fn zero() -> Self {
        Scalar { radicand: Rat::one(), cyclo: CycloScalar::zero() }
    }

    pub fn one() -> Self {
        Scalar { radicand: Rat::one(), cyclo: CycloScalar::one() }
    }

    pub fn radicand(&self) -> &Rat {
        &self.radicand
    }

    pub fn cyclo(&self) -> &CycloScalar {
        &self.cyclo
    }

    pub fn norm_part(&self) -> NormFactor {
        NormFactor::sqrt(&self.radicand)
    }

    pub fn is_zero(&self) -> bool {
        self.cyclo.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.radicand.is_one() && self.cyclo.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Scalar::new(
            &NormFactor::sqrt(&self.radicand).mul(&NormFactor::sqrt(&other.radicand)),
            self.cyclo.mul(&other.cyclo),
        )
    }

    pub fn conj(&self) -> Self {
        Scalar { radicand: self.radicand.clone(), cyclo: self.cyclo.conj() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = NormFactor::one().div(&NormFactor::sqrt(&self.radicand));
        Ok(Scalar::new(&norm, self.cyclo.inv()?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.radicand != other.radicand {
            return Err(Error::MixedNormFactor(
                self.radicand.to_string(),
                other.radicand.to_string(),
            ));
        }
        Ok(Scalar { radicand: self.radicand.clone(), cyclo: self.cyclo.add(&other.cyclo) })
    }

    pub fn to_complex(&self) -> Complex64 {
        self.cyclo.to_complex() * rat_to_f64(&self.radicand).sqrt()
    }
}
