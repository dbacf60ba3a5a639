//! The rational Heisenberg group and its action on coset functions.
//!
//! Elements are triples `(v₊, v₋, α)` with the product law
//! `(v₊,v₋,α)(w₊,w₋,β) = (v₊+w₊, v₋+w₋, α+β+½(v₊w₋ᵗ − w₊v₋ᵗ))`.
//! The action on an [`MElement`] is
//! `T(v₊,v₋,α)f(x) = f(x+v₊)·e(x·v₋ᵗ + α + ½v₊v₋ᵗ)` with `e(t) = exp(2πit)`;
//! this is an honest (non-projective) unitary representation.
//!
//! The finite quotient acting on functions supported in `L` and invariant
//! under `K ⊆ L` is generated by translations over `L/K` and characters over
//! `K^◊/L^◊`; [`commutant_dimension`] verifies by brute-force linear algebra
//! that it acts irreducibly.

use std::collections::BTreeMap;

use num::Zero;

use crate::bruhat::MElement;
use crate::cyclo::CycloScalar;
use crate::error::{Error, Result};
use crate::lattice::{integral_condition_sublattice, CosetReducer, LatticePair, QLattice};
use crate::qmat::QMat;
use crate::rational::{dot, neg_vec, rat, sub_vec, zero_vec, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisElement {
    pub vplus: Vec<Rat>,
    pub vminus: Vec<Rat>,
    pub alpha: Rat,
}

impl HeisElement {
    pub fn new(vplus: Vec<Rat>, vminus: Vec<Rat>, alpha: Rat) -> Self {
        assert_eq!(vplus.len(), vminus.len(), "mismatched Heisenberg components");
        HeisElement { vplus, vminus, alpha }
    }

    pub fn identity(dim: usize) -> Self {
        HeisElement::new(zero_vec(dim), zero_vec(dim), Rat::zero())
    }

    pub fn dim(&self) -> usize {
        self.vplus.len()
    }

    pub fn translation(v: Vec<Rat>) -> Self {
        let n = v.len();
        HeisElement::new(v, zero_vec(n), Rat::zero())
    }

    pub fn character(w: Vec<Rat>) -> Self {
        let n = w.len();
        HeisElement::new(zero_vec(n), w, Rat::zero())
    }

    pub fn central(dim: usize, alpha: Rat) -> Self {
        HeisElement::new(zero_vec(dim), zero_vec(dim), alpha)
    }
}

pub fn heis_mul(a: &HeisElement, b: &HeisElement) -> HeisElement {
    assert_eq!(a.dim(), b.dim(), "mismatched Heisenberg dimensions");
    let cross = dot(&a.vplus, &b.vminus) - dot(&b.vplus, &a.vminus);
    HeisElement::new(
        crate::rational::add_vec(&a.vplus, &b.vplus),
        crate::rational::add_vec(&a.vminus, &b.vminus),
        &a.alpha + &b.alpha + rat(1, 2) * cross,
    )
}

pub fn heis_inv(h: &HeisElement) -> HeisElement {
    HeisElement::new(neg_vec(&h.vplus), neg_vec(&h.vminus), -h.alpha.clone())
}

/// Largest sublattice of `k` on which the character `x ↦ e(x·wᵗ)` is trivial.
fn character_kernel(k: &QLattice, w: &[Rat]) -> QLattice {
    if w.iter().all(|c| c.is_zero()) {
        return k.clone();
    }
    let cond = QMat::new(k.basis().rows.iter().map(|row| vec![dot(row, w)]).collect());
    integral_condition_sublattice(k, &cond)
}

/// Apply `T(v₊,v₋,α)` to `f`.  The invariance lattice shrinks to the
/// character kernel so the phase is single-valued on each coset.
pub fn heis_act(h: &HeisElement, f: &MElement, cap: u64) -> Result<MElement> {
    if h.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: h.dim() });
    }
    if f.is_zero() {
        return Ok(MElement::zero(f.dim()));
    }
    let kernel = character_kernel(f.invariance(), &h.vminus);
    let refined = f.refine(&kernel, cap)?;
    let offset = &h.alpha + rat(1, 2) * dot(&h.vplus, &h.vminus);
    let pre = f.prefactor();
    let terms: Vec<(Vec<Rat>, CycloScalar)> = refined
        .support()
        .iter()
        .map(|(r, v)| {
            let rep = sub_vec(r, &h.vplus);
            let phase = dot(&rep, &h.vminus) + &offset;
            (rep, v.mul(&CycloScalar::unit(&phase)))
        })
        .collect();
    Ok(MElement::assemble(kernel, &pre, terms))
}

/// `T_v f(x) = f(x+v)`.
pub fn translation_op(v: &[Rat], f: &MElement, cap: u64) -> Result<MElement> {
    heis_act(&HeisElement::translation(v.to_vec()), f, cap)
}

/// `S_w f(x) = f(x)·e(x·wᵗ)`.
pub fn character_op(w: &[Rat], f: &MElement, cap: u64) -> Result<MElement> {
    heis_act(&HeisElement::character(w.to_vec()), f, cap)
}

/// Is `f` fixed pointwise by the group attached to the pair `(L|K)` —
/// translations by `K` and characters by `L^◊`?  Checked on generating sets.
pub fn fixed_space_check(pair: &LatticePair, f: &MElement, cap: u64) -> Result<bool> {
    for v in &pair.sub().basis().rows {
        if !translation_op(v, f, cap)?.equal_fn(f) {
            return Ok(false);
        }
    }
    for w in &pair.sup().dual().basis().rows {
        if !character_op(w, f, cap)?.equal_fn(f) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generators of the finite Heisenberg group attached to a pair `(L|K)`:
/// translation representatives for `L/K` and character representatives for
/// `K^◊/L^◊`.  Both lists have `[L:K]` entries.
#[derive(Clone, Debug)]
pub struct FiniteHeisDescriptor {
    pub pair: LatticePair,
    pub translations: Vec<Vec<Rat>>,
    pub characters: Vec<Vec<Rat>>,
}

impl FiniteHeisDescriptor {
    pub fn new(pair: LatticePair, cap: u64) -> Result<Self> {
        let translations = pair.coset_reps(cap)?;
        let dual_pair = LatticePair::new(pair.sub().dual(), pair.sup().dual())?;
        let characters = dual_pair.coset_reps(cap)?;
        debug_assert_eq!(translations.len(), characters.len());
        Ok(FiniteHeisDescriptor { pair, translations, characters })
    }
}

/// Sparse exact Gaussian elimination; returns the rank of the row system.
fn sparse_rank(rows: Vec<BTreeMap<usize, CycloScalar>>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, CycloScalar>> = BTreeMap::new();
    for mut row in rows {
        loop {
            let Some((&col, coeff)) = row.iter().next() else { break };
            let coeff = coeff.clone();
            match pivots.get(&col) {
                Some(pivot) => {
                    // row -= coeff * pivot (pivot is normalized, leading 1)
                    for (&c, p) in pivot {
                        let delta = coeff.mul(p);
                        let entry = row.remove(&c).unwrap_or_else(CycloScalar::zero);
                        let next = entry.sub(&delta);
                        if !next.is_zero() {
                            row.insert(c, next);
                        }
                    }
                }
                None => {
                    let inv = coeff.inv().expect("leading coefficient is nonzero");
                    let normalized: BTreeMap<usize, CycloScalar> =
                        row.iter().map(|(&c, v)| (c, v.mul(&inv))).collect();
                    pivots.insert(col, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn push_term(row: &mut BTreeMap<usize, CycloScalar>, col: usize, val: CycloScalar) {
    let entry = row.remove(&col).unwrap_or_else(CycloScalar::zero);
    let next = entry.add(&val);
    if !next.is_zero() {
        row.insert(col, next);
    }
}

/// Dimension of the algebra of `[L:K]×[L:K]` matrices commuting with every
/// translation and character generator, by exact elimination over the
/// cyclotomic field.  Equals 1 exactly when the finite group acts
/// irreducibly.
pub fn commutant_dimension(pair: &LatticePair, cap: u64) -> Result<u64> {
    let desc = FiniteHeisDescriptor::new(pair.clone(), cap)?;
    let m = desc.translations.len();
    let red = CosetReducer::new(pair.sub());
    let index_of: BTreeMap<Vec<Rat>, usize> = desc
        .translations
        .iter()
        .enumerate()
        .map(|(i, r)| (red.reduce(r), i))
        .collect();
    assert_eq!(index_of.len(), m, "translation representatives must be distinct");
    let col = |i: usize, j: usize| i * m + j;

    let mut rows: Vec<BTreeMap<usize, CycloScalar>> = Vec::new();
    // Translations permute the coset basis: T_v e_j = e_{π(j)} with
    // π(j) the class of r_j − v.  Commutation forces X[π(i)][π(j)] = X[i][j].
    for v in &desc.translations {
        let perm: Vec<usize> = desc
            .translations
            .iter()
            .map(|r| index_of[&red.reduce(&sub_vec(r, v))])
            .collect();
        for i in 0..m {
            for j in 0..m {
                let mut row = BTreeMap::new();
                push_term(&mut row, col(perm[i], perm[j]), CycloScalar::one());
                push_term(&mut row, col(i, j), CycloScalar::one().neg());
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    // Characters are diagonal: S_w e_i = e(r_i·wᵗ)·e_i, so commutation
    // forces (s_j − s_i)·X[i][j] = 0.
    for w in &desc.characters {
        let diag: Vec<CycloScalar> = desc
            .translations
            .iter()
            .map(|r| CycloScalar::unit(&dot(r, w)))
            .collect();
        for i in 0..m {
            for j in 0..m {
                if diag[i] != diag[j] {
                    let mut row = BTreeMap::new();
                    push_term(&mut row, col(i, j), CycloScalar::one());
                    rows.push(row);
                }
            }
        }
    }
    let rank = sparse_rank(rows);
    Ok((m * m - rank) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normfactor::Scalar;
    use num::BigInt;
    use crate::rational::rat_int;
    use crate::DEFAULT_INDEX_CAP as CAP;
    use proptest::prelude::*;

    fn h1(vp: Rat, vm: Rat, a: Rat) -> HeisElement {
        HeisElement::new(vec![vp], vec![vm], a)
    }

    fn zlat(c: Rat) -> QLattice {
        QLattice::from_basis(vec![vec![c]]).unwrap()
    }

    #[test]
    fn identity_is_two_sided() {
        let e = HeisElement::identity(2);
        let h = HeisElement::new(
            vec![rat(1, 2), rat_int(3)],
            vec![rat(2, 5), rat(-1, 3)],
            rat(7, 4),
        );
        assert_eq!(heis_mul(&e, &h), h);
        assert_eq!(heis_mul(&h, &e), h);
    }

    #[test]
    fn translation_times_character_gains_half_cross_term() {
        let v = vec![rat(1, 2), rat_int(1)];
        let w = vec![rat(1, 3), rat(1, 5)];
        let prod = heis_mul(
            &HeisElement::translation(v.clone()),
            &HeisElement::character(w.clone()),
        );
        let expected = HeisElement::new(v.clone(), w.clone(), rat(1, 2) * dot(&v, &w));
        assert_eq!(prod, expected);
    }

    #[test]
    fn inverses() {
        let e = HeisElement::identity(1);
        assert_eq!(heis_inv(&e), e);
        let t = HeisElement::translation(vec![rat(2, 7)]);
        assert_eq!(heis_inv(&t), HeisElement::translation(vec![rat(-2, 7)]));
        let h = h1(rat(1, 2), rat(3, 4), rat(-5, 6));
        assert_eq!(heis_mul(&h, &heis_inv(&h)), HeisElement::identity(1));
        assert_eq!(heis_inv(&heis_inv(&h)), h);
    }

    #[test]
    fn identity_acts_trivially() {
        let f = MElement::indicator(&zlat(rat(1, 3)), &[rat(1, 2)]);
        let g = heis_act(&HeisElement::identity(1), &f, CAP).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn central_elements_act_by_unit_scalars() {
        let f = MElement::standard_indicator(1);
        let g = heis_act(&HeisElement::central(1, rat(1, 3)), &f, CAP).unwrap();
        let expected = f.scale(&Scalar::from_cyclo(CycloScalar::unit(&rat(1, 3))));
        assert_eq!(g, expected);
    }

    #[test]
    fn translation_shifts_indicator_offsets() {
        let f = MElement::indicator(&zlat(rat_int(2)), &[rat(1, 3)]);
        let g = translation_op(&[rat(1, 6)], &f, CAP).unwrap();
        let expected = MElement::indicator(&zlat(rat_int(2)), &[rat(1, 3) - rat(1, 6)]);
        assert_eq!(g, expected);
    }

    #[test]
    fn character_fixes_indicator_iff_dual_vector() {
        let l = zlat(rat_int(2));
        let f = MElement::indicator(&l, &[rat_int(1)]);
        // w = 1/2 lies in (2Z)^dual: fixed up to the unit e(r·w).
        let fixed = character_op(&[rat(1, 2)], &f, CAP).unwrap();
        assert!(fixed.projective_equal(&f).is_some());
        // w = 1/3 does not: the invariance lattice genuinely shrinks.
        let moved = character_op(&[rat(1, 3)], &f, CAP).unwrap();
        assert!(moved.projective_equal(&f).is_none());
        // w = 0 is the identity.
        assert_eq!(character_op(&[rat_int(0)], &f, CAP).unwrap(), f);
    }

    #[test]
    fn action_is_a_representation_on_a_fixed_example() {
        let f = MElement::indicator(&zlat(rat(1, 2)), &[rat(1, 3)]);
        let a = h1(rat(1, 2), rat(1, 3), rat(1, 5));
        let b = h1(rat(-1, 3), rat(3, 4), rat_int(2));
        let lhs = heis_act(&a, &heis_act(&b, &f, CAP).unwrap(), CAP).unwrap();
        let rhs = heis_act(&heis_mul(&a, &b), &f, CAP).unwrap();
        assert!(lhs.equal_fn(&rhs));
    }

    #[test]
    fn action_preserves_the_pairing() {
        let f = MElement::indicator(&zlat(rat(1, 2)), &[rat(1, 3)]);
        let g = MElement::indicator(&zlat(rat(1, 3)), &[rat(1, 4)]);
        let h = h1(rat(2, 3), rat(1, 6), rat(3, 7));
        let tf = heis_act(&h, &f, CAP).unwrap();
        let tg = heis_act(&h, &g, CAP).unwrap();
        assert_eq!(
            tf.pairing(&tg, CAP).unwrap(),
            f.pairing(&g, CAP).unwrap()
        );
    }

    #[test]
    fn fixed_space_examples() {
        let z = QLattice::standard(1);
        let f = MElement::standard_indicator(1);
        let trivial = LatticePair::new(z.clone(), z.clone()).unwrap();
        assert!(fixed_space_check(&trivial, &f, CAP).unwrap());

        // K generated by 1/2 moves indicator(Z,0).
        let half = zlat(rat(1, 2));
        let pair = LatticePair::new(half.clone(), half).unwrap();
        assert!(!fixed_space_check(&pair, &f, CAP).unwrap());

        // Indicators of K-cosets inside L span the fixed space.
        let pair = LatticePair::new(z, zlat(rat_int(3))).unwrap();
        let g = MElement::indicator(&zlat(rat_int(3)), &[rat_int(1)]);
        let h = MElement::indicator(&zlat(rat_int(3)), &[rat_int(2)]);
        let combo = g.add(&h, CAP).unwrap();
        assert!(fixed_space_check(&pair, &combo, CAP).unwrap());
        // ...but an indicator with a non-L offset is not fixed.
        let off = MElement::indicator(&zlat(rat_int(3)), &[rat(1, 2)]);
        assert!(!fixed_space_check(&pair, &off, CAP).unwrap());
    }

    #[test]
    fn commutant_is_trivial_for_small_pairs() {
        let z = QLattice::standard(1);
        let trivial = LatticePair::new(z.clone(), z.clone()).unwrap();
        assert_eq!(commutant_dimension(&trivial, CAP).unwrap(), 1);

        let two = LatticePair::new(z.clone(), zlat(rat_int(2))).unwrap();
        assert_eq!(commutant_dimension(&two, CAP).unwrap(), 1);

        let four = LatticePair::new(zlat(rat(1, 2)), zlat(rat_int(2))).unwrap();
        assert_eq!(four.index(), BigInt::from(4));
        assert_eq!(commutant_dimension(&four, CAP).unwrap(), 1);
    }

    #[test]
    fn commutant_is_trivial_in_two_dimensions() {
        let sup = QLattice::standard(2);
        let sub = QLattice::from_basis(vec![
            vec![rat_int(2), rat_int(0)],
            vec![rat_int(1), rat_int(3)],
        ])
        .unwrap();
        let pair = LatticePair::new(sup, sub).unwrap();
        assert_eq!(pair.index(), BigInt::from(6));
        assert_eq!(commutant_dimension(&pair, CAP).unwrap(), 1);
    }

    #[test]
    fn finite_descriptor_counts_match() {
        let pair =
            LatticePair::new(zlat(rat(1, 2)), zlat(rat_int(3))).unwrap();
        let desc = FiniteHeisDescriptor::new(pair, CAP).unwrap();
        assert_eq!(desc.translations.len(), 6);
        assert_eq!(desc.characters.len(), 6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn product_law_is_associative(
            av in -6i64..6, bv in -6i64..6, cv in -6i64..6,
            aw in -6i64..6, bw in -6i64..6, cw in -6i64..6,
        ) {
            let a = h1(rat(av, 2), rat(aw, 3), rat(1, 2));
            let b = h1(rat(bv, 3), rat(bw, 2), rat(-1, 3));
            let c = h1(rat(cv, 2), rat(cw, 5), rat(2, 7));
            prop_assert_eq!(
                heis_mul(&heis_mul(&a, &b), &c),
                heis_mul(&a, &heis_mul(&b, &c))
            );
        }

        #[test]
        fn representation_property_on_random_pairs(
            av in -4i64..4, aw in -4i64..4,
            bv in -4i64..4, bw in -4i64..4,
        ) {
            let f = MElement::standard_indicator(1);
            let a = h1(rat(av, 2), rat(aw, 3), rat(1, 7));
            let b = h1(rat(bv, 3), rat(bw, 2), rat(-2, 5));
            let lhs = heis_act(&a, &heis_act(&b, &f, CAP).unwrap(), CAP).unwrap();
            let rhs = heis_act(&heis_mul(&a, &b), &f, CAP).unwrap();
            prop_assert!(lhs.equal_fn(&rhs));
        }
    }
}
