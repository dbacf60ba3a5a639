//! Finitely supported functions on `Q^n` modulo a lattice.
//!
//! An [`MElement`] is determined by an invariance lattice `K`, a finite set of
//! coset representatives with nonzero cyclotomic values, and one positive
//! prefactor `sqrt(r)` (the rational part of any prefactor is folded into the
//! values, the radicand `r` is a squarefree integer).  The function it
//! denotes is `f(x) = sqrt(r) * value(rep)` when `x` is congruent to `rep`
//! mod `K` and `0` otherwise.
//!
//! Elements are kept *reduced* (canonical residues, no zero values) at all
//! times; [`MElement::canonicalize`] additionally coarsens the invariance
//! lattice to the full stabilizer of the function, which makes structural
//! equality decide equality of functions along a common prefactor channel.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::One;

use crate::cyclo::CycloScalar;
use crate::error::{Error, Result};
use crate::lattice::{CosetReducer, LatticePair, QLattice};
use crate::normfactor::{NormFactor, Scalar};
use crate::rational::{add_vec, sub_vec, zero_vec, Rat};

pub type Support = BTreeMap<Vec<Rat>, CycloScalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MElement {
    dim: usize,
    invariance: QLattice,
    radicand: Rat,
    support: Support,
}

impl MElement {
    /// The zero function (canonical form: standard invariance, empty support).
    pub fn zero(dim: usize) -> Self {
        MElement {
            dim,
            invariance: QLattice::standard(dim),
            radicand: Rat::one(),
            support: Support::new(),
        }
    }

    /// Indicator function of the coset `a + L`.
    pub fn indicator(lattice: &QLattice, a: &[Rat]) -> Self {
        assert_eq!(lattice.dim(), a.len(), "offset dimension mismatch");
        Self::assemble(
            lattice.clone(),
            &NormFactor::one(),
            [(a.to_vec(), CycloScalar::one())],
        )
    }

    /// The standard vacuum vector: indicator of `Z^n`.
    pub fn standard_indicator(dim: usize) -> Self {
        Self::indicator(&QLattice::standard(dim), &zero_vec(dim))
    }

    /// Build an element from raw parts, enforcing the cheap invariants:
    /// representatives are reduced mod `K`, duplicates merged, zeros pruned,
    /// and the rational part of the prefactor folded into the values.
    pub fn assemble(
        invariance: QLattice,
        prefactor: &NormFactor,
        terms: impl IntoIterator<Item = (Vec<Rat>, CycloScalar)>,
    ) -> Self {
        let dim = invariance.dim();
        let red = CosetReducer::new(&invariance);
        let mut support = Support::new();
        for (rep, val) in terms {
            assert_eq!(rep.len(), dim, "support vector dimension mismatch");
            let val = val.scale(prefactor.q());
            if val.is_zero() {
                continue;
            }
            let key = red.reduce(&rep);
            match support.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(val);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(&val);
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
            }
        }
        if support.is_empty() {
            return Self::zero(dim);
        }
        let radicand = NormFactor::new(Rat::one(), prefactor.r().clone()).r().clone();
        MElement { dim, invariance, radicand, support }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn invariance(&self) -> &QLattice {
        &self.invariance
    }

    /// The prefactor `sqrt(r)` shared by all values.
    pub fn prefactor(&self) -> NormFactor {
        NormFactor::sqrt(&self.radicand)
    }

    pub fn radicand(&self) -> &Rat {
        &self.radicand
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Lattice generated by the invariance lattice and the support reps; the
    /// whole support sits inside it.
    pub fn ambient(&self) -> QLattice {
        if self.support.is_empty() {
            return self.invariance.clone();
        }
        let mut gens = self.invariance.basis().rows;
        gens.extend(self.support.keys().cloned());
        QLattice::from_generators(self.dim, &gens).expect("ambient contains a full-rank lattice")
    }

    pub fn evaluate(&self, x: &[Rat]) -> Scalar {
        assert_eq!(x.len(), self.dim, "evaluation point dimension mismatch");
        let red = CosetReducer::new(&self.invariance);
        match self.support.get(&red.reduce(x)) {
            Some(v) => Scalar::new(&self.prefactor(), v.clone()),
            None => Scalar::zero(),
        }
    }

    /// Split every supported coset along the sublattice `finer`; the result
    /// is the same function with invariance lattice exactly `finer`.
    pub fn refine(&self, finer: &QLattice, cap: u64) -> Result<MElement> {
        let parts = self.refined_parts(finer, cap)?;
        Ok(MElement {
            dim: self.dim,
            invariance: finer.clone(),
            radicand: self.radicand.clone(),
            support: parts,
        })
    }

    /// Support of the refinement of `self` to `finer`, as reduced residues.
    fn refined_parts(&self, finer: &QLattice, cap: u64) -> Result<Support> {
        if finer == &self.invariance {
            return Ok(self.support.clone());
        }
        let pair = LatticePair::new(self.invariance.clone(), finer.clone())?;
        let index = pair.index();
        let total = BigInt::from(self.support.len()) * &index;
        if total > BigInt::from(cap) {
            return Err(Error::IndexOverflow {
                index: u64::try_from(&total).unwrap_or(u64::MAX),
                cap,
            });
        }
        let shifts = pair.coset_reps(cap)?;
        let red = CosetReducer::new(finer);
        let mut out = Support::new();
        for (rep, val) in &self.support {
            for s in &shifts {
                let key = red.reduce(&add_vec(rep, s));
                let prev = out.insert(key, val.clone());
                debug_assert!(prev.is_none(), "refinement produced a coset collision");
            }
        }
        Ok(out)
    }

    /// Pointwise sum.  Both elements are refined to the intersection of their
    /// invariance lattices; prefactors must agree up to a rational factor.
    pub fn add(&self, other: &MElement, cap: u64) -> Result<MElement> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
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
        let common = self.invariance.intersect(&other.invariance)?;
        let mut support = self.refined_parts(&common, cap)?;
        for (rep, val) in other.refined_parts(&common, cap)? {
            match support.entry(rep) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(val);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(&val);
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
            }
        }
        if support.is_empty() {
            return Ok(Self::zero(self.dim));
        }
        Ok(MElement {
            dim: self.dim,
            invariance: common,
            radicand: self.radicand.clone(),
            support,
        })
    }

    /// Scalar multiple; the scalar's square-root part joins the prefactor.
    pub fn scale(&self, s: &Scalar) -> MElement {
        if s.is_zero() || self.is_zero() {
            return Self::zero(self.dim);
        }
        let pre = self.prefactor().mul(&s.norm_part());
        Self::assemble(
            self.invariance.clone(),
            &pre,
            self.support.iter().map(|(r, v)| (r.clone(), v.mul(s.cyclo()))),
        )
    }

    pub fn neg(&self) -> MElement {
        self.scale(&Scalar::from_rat(-Rat::one()))
    }

    pub fn sub(&self, other: &MElement, cap: u64) -> Result<MElement> {
        self.add(&other.neg(), cap)
    }

    /// Hermitian pairing `mu(K) * sum f * conj(g)` over a common refinement.
    pub fn pairing(&self, other: &MElement, cap: u64) -> Result<Scalar> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Scalar::zero());
        }
        let common = self.invariance.intersect(&other.invariance)?;
        let a = self.refined_parts(&common, cap)?;
        let b = other.refined_parts(&common, cap)?;
        let mut acc = CycloScalar::zero();
        let (small, large, flip) =
            if a.len() <= b.len() { (&a, &b, false) } else { (&b, &a, true) };
        for (rep, v) in small {
            if let Some(w) = large.get(rep) {
                let term = if flip { w.mul(&v.conj()) } else { v.mul(&w.conj()) };
                acc = acc.add(&term);
            }
        }
        let norm = self
            .prefactor()
            .mul(&other.prefactor())
            .mul(&NormFactor::from_rat(common.mu()));
        Ok(Scalar::new(&norm, acc))
    }

    /// Full canonical form: coarsen the invariance lattice to the stabilizer
    /// of the function, merging cosets that carry equal values.
    pub fn canonicalize(&self) -> MElement {
        let mut current = self.clone();
        if current.is_zero() {
            return Self::zero(self.dim);
        }
        'outer: loop {
            let (r0, v0) = current.support.iter().next().expect("nonzero element");
            let candidates: Vec<Vec<Rat>> = current
                .support
                .iter()
                .filter(|(r, v)| *r != r0 && *v == v0)
                .map(|(r, _)| sub_vec(r, r0))
                .collect();
            let red = CosetReducer::new(&current.invariance);
            for d in candidates {
                let shifts_match = current.support.iter().all(|(r, v)| {
                    current.support.get(&red.reduce(&add_vec(r, &d))) == Some(v)
                });
                if !shifts_match {
                    continue;
                }
                // d stabilizes the function: absorb it into the invariance.
                let mut gens = current.invariance.basis().rows;
                gens.push(d);
                let coarser = QLattice::from_generators(current.dim, &gens)
                    .expect("coarsening keeps full rank");
                let red2 = CosetReducer::new(&coarser);
                let mut merged = Support::new();
                for (r, v) in &current.support {
                    let key = red2.reduce(r);
                    if let Some(prev) = merged.insert(key, v.clone()) {
                        debug_assert_eq!(&prev, v, "coarsening merged unequal values");
                    }
                }
                current = MElement {
                    dim: current.dim,
                    invariance: coarser,
                    radicand: current.radicand.clone(),
                    support: merged,
                };
                continue 'outer;
            }
            return current;
        }
    }

    /// Equality as functions (structural equality of canonical forms).
    pub fn equal_fn(&self, other: &MElement) -> bool {
        self.canonicalize() == other.canonicalize()
    }

    /// If `self = lambda * other` for a scalar, return `lambda`.
    /// Zero equals zero with `lambda = 1`; a zero/nonzero mix has no ray.
    pub fn projective_equal(&self, other: &MElement) -> Option<Scalar> {
        if self.dim != other.dim {
            return None;
        }
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Some(Scalar::one()),
            (true, false) | (false, true) => return None,
            _ => {}
        }
        let a = self.canonicalize();
        let b = other.canonicalize();
        if a.invariance != b.invariance || a.support.len() != b.support.len() {
            return None;
        }
        if !a.support.keys().eq(b.support.keys()) {
            return None;
        }
        let (r0, va) = a.support.iter().next().expect("nonzero");
        let vb = b.support.get(r0).expect("same support keys");
        let lambda = va.div(vb).expect("support values are nonzero");
        for (rep, v) in &a.support {
            if &lambda.mul(b.support.get(rep).expect("same support keys")) != v {
                return None;
            }
        }
        let norm = NormFactor::sqrt(&a.radicand).div(&NormFactor::sqrt(&b.radicand));
        Some(Scalar::new(&norm, lambda))
    }
}
