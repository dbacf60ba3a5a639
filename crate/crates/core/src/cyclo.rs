//! Exact cyclotomic scalars.
//!
//! A [`CycloScalar`] is a rational linear combination of roots of unity,
//! stored as `sum_k c_k zeta_N^k` over a canonical basis of `Q(zeta_N)`.
//! For every prime power `p^a || N` the relation
//! `sum_{j mod p} zeta_N^{k + j N/p} = 0` eliminates one residue class of
//! exponents; what remains is a Q-basis, so zero-testing and equality are
//! plain coefficient comparisons.  The order is minimized after every
//! operation (an element of `Q(zeta_6)` that happens to lie in `Q(zeta_3)`
//! comes back with order 3, a rational with order 1).

use std::collections::BTreeMap;

use num::{One, Zero};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::QMat;
use crate::rational::{frac, Rat};

/// Hard ceiling on cyclotomic orders; hitting it means an operation escaped
/// the intended desk scale, and panicking beats silently grinding forever.
const MAX_ORDER: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloScalar {
    order: u64,
    coeffs: BTreeMap<u64, Rat>,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    // Extended Euclid; callers guarantee gcd(a, m) = 1.
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "mod_inverse of non-unit");
    t0.rem_euclid(m as i128) as u64
}

/// Exponent classes allowed in the canonical basis at this prime power:
/// the top base-p digit of the local exponent must not be `p - 1`.
fn allowed(k: u64, order: u64, p: u64, a: u32) -> bool {
    let ppow = p.pow(a);
    let u = mod_inverse(order / ppow, ppow);
    let local = (k % ppow) as u128 * u as u128 % ppow as u128;
    (local as u64) < (p - 1) * p.pow(a - 1)
}

impl CycloScalar {
    pub fn zero() -> Self {
        CycloScalar { order: 1, coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        CycloScalar::from_rat(Rat::one())
    }

    pub fn from_rat(c: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        CycloScalar { order: 1, coeffs }
    }

    /// `zeta_order^k`, canonicalized.
    pub fn root_of_unity(order: u64, k: i64) -> Self {
        assert!(order > 0, "order must be positive");
        let k = k.rem_euclid(order as i64) as u64;
        Self::from_terms(order, [(k, Rat::one())])
    }

    /// `exp(2 pi i r)` as an exact root of unity.
    pub fn unit(r: &Rat) -> Self {
        let f = frac(r);
        let q: u64 = f.denom().try_into().expect("phase denominator exceeds u64");
        let p: u64 = f.numer().try_into().expect("phase numerator exceeds u64");
        Self::root_of_unity(q, p as i64)
    }

    /// Build from arbitrary `(exponent, coefficient)` terms at the given order.
    pub fn from_terms(order: u64, terms: impl IntoIterator<Item = (u64, Rat)>) -> Self {
        assert!(order > 0 && order <= MAX_ORDER, "cyclotomic order out of range");
        let mut coeffs: BTreeMap<u64, Rat> = BTreeMap::new();
        for (k, c) in terms {
            if c.is_zero() {
                continue;
            }
            let e = coeffs.entry(k % order).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                coeffs.remove(&(k % order));
            }
        }
        let mut x = CycloScalar { order, coeffs };
        x.reduce();
        x
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the scalar lies in `Q`.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.order != 1 {
            return None;
        }
        Some(self.coeffs.get(&0).cloned().unwrap_or_else(Rat::zero))
    }

    /// Rewrite every forbidden exponent class away, then minimize the order.
    fn reduce(&mut self) {
        for (p, a) in factorize(self.order) {
            let step = self.order / p;
            let mut next: BTreeMap<u64, Rat> = BTreeMap::new();
            let mut push = |k: u64, c: Rat| {
                if c.is_zero() {
                    return;
                }
                let e = next.entry(k).or_insert_with(Rat::zero);
                *e += c;
                if e.is_zero() {
                    next.remove(&k);
                }
            };
            for (k, c) in std::mem::take(&mut self.coeffs) {
                if allowed(k, self.order, p, a) {
                    push(k, c);
                } else {
                    for j in 1..p {
                        push((k + j * step) % self.order, -c.clone());
                    }
                }
            }
            self.coeffs = next;
        }
        if self.coeffs.is_empty() {
            self.order = 1;
            return;
        }
        let mut g = self.order;
        for k in self.coeffs.keys() {
            g = num::integer::gcd(g, *k);
        }
        if g > 1 {
            self.order /= g;
            self.coeffs = std::mem::take(&mut self.coeffs)
                .into_iter()
                .map(|(k, c)| (k / g, c))
                .collect();
        }
    }

    fn lift(&self, order: u64) -> BTreeMap<u64, Rat> {
        debug_assert_eq!(order % self.order, 0);
        let s = order / self.order;
        self.coeffs.iter().map(|(k, c)| (k * s, c.clone())).collect()
    }

    fn common_order(&self, other: &Self) -> u64 {
        let l = num::integer::lcm(self.order as u128, other.order as u128);
        assert!(l <= MAX_ORDER as u128, "cyclotomic order out of range");
        l as u64
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.common_order(other);
        let mut terms: Vec<(u64, Rat)> = self.lift(order).into_iter().collect();
        terms.extend(other.lift(order));
        Self::from_terms(order, terms)
    }

    pub fn neg(&self) -> Self {
        CycloScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.common_order(other);
        let a = self.lift(order);
        let b = other.lift(order);
        let mut terms = Vec::with_capacity(a.len() * b.len());
        for (k1, c1) in &a {
            for (k2, c2) in &b {
                terms.push(((k1 + k2) % order, c1 * c2));
            }
        }
        Self::from_terms(order, terms)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        CycloScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Galois substitution `zeta -> zeta^t` for `t` coprime to the order.
    pub fn galois(&self, t: u64) -> Self {
        assert_eq!(num::integer::gcd(t, self.order), 1, "galois exponent not coprime to order");
        Self::from_terms(
            self.order,
            self.coeffs.iter().map(|(k, c)| ((k * (t % self.order)) % self.order, c.clone())),
        )
    }

    /// Complex conjugation (`zeta -> zeta^{-1}`).
    pub fn conj(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        self.galois(self.order - 1)
    }

    /// Exponents of the canonical basis of `Q(zeta_order)`.
    fn basis_exponents(order: u64) -> Vec<u64> {
        let facts = factorize(order);
        (0..order).filter(|&k| facts.iter().all(|&(p, a)| allowed(k, order, p, a))).collect()
    }

    fn coords(&self, basis: &[u64], order: u64) -> Vec<Rat> {
        let lifted = self.lift(order);
        basis.iter().map(|k| lifted.get(k).cloned().unwrap_or_else(Rat::zero)).collect()
    }

    /// Exact inverse, via the multiplication-by-`self` matrix on the canonical
    /// basis of its cyclotomic field.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = self.as_rational() {
            return Ok(Self::from_rat(c.recip()));
        }
        let order = self.order;
        let basis = Self::basis_exponents(order);
        let dim = basis.len();
        // Column j holds self * zeta^{basis[j]} in basis coordinates.
        let mut cols = Vec::with_capacity(dim);
        for &e in &basis {
            let shifted = Self::from_terms(
                order,
                self.coeffs.iter().map(|(k, c)| ((k + e) % order, c.clone())),
            );
            cols.push(shifted.coords(&basis, order));
        }
        let m = QMat::new((0..dim).map(|i| (0..dim).map(|j| cols[j][i].clone()).collect()).collect());
        let minv = m.inverse().expect("multiplication by a nonzero field element is invertible");
        // inverse = minv applied to the coordinates of 1.
        let one_coords = Self::one().coords(&basis, order);
        let mut result = vec![Rat::zero(); dim];
        for (i, row) in minv.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() && !one_coords[j].is_zero() {
                    result[i] += v * &one_coords[j];
                }
            }
        }
        Ok(Self::from_terms(order, basis.into_iter().zip(result)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in &self.coeffs {
            let arg = 2.0 * std::f64::consts::PI * (*k as f64) / (self.order as f64);
            let c64 = crate::rational::rat_to_f64(c);
            z += Complex64::new(arg.cos() * c64, arg.sin() * c64);
        }
        z
    }
}
