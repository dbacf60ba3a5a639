//! The Weil representation of `Sp(2n, Q)` on coset functions.
//!
//! Three families of operators generate the representation:
//!
//! * dilation   `We(A): f ↦ √|det A| · f(x·A^{-t})`,
//! * Fourier    `We(J): f ↦ μ(K)·Σ f(r)·e(r·yᵗ)` on the dual support,
//! * quadratic  `We(B): f ↦ e(½·x·B·xᵗ)·f(x)`.
//!
//! Row vectors `(v₊ ⊕ v₋)` carry the symplectic form with matrix
//! `J = [[0, I], [−I, 0]]`.  With the conventions above each operator `We`
//! satisfies the exact covariance `T(h)·We = We·T(σ h)` where `σ` is right
//! multiplication of `(v₊ ⊕ v₋)` by the operator's symplectic matrix:
//! dilation by `A` pairs with `[[A^{-t}, 0], [0, A]]`, the Fourier transform
//! with `J`, and the quadratic phase with `[[I, B], [0, I]]`.
//!
//! [`sp_factor`] writes an arbitrary rational symplectic matrix as a word in
//! the three generators (verified by re-multiplication), and
//! [`weil_apply`] pushes a function through such a word.  The operator
//! attached to a matrix is well defined up to one scalar; all projective
//! statements are tested through `MElement::projective_equal`.

use num::{BigInt, Integer, One, Signed, Zero};
use std::collections::BTreeMap;

use crate::bruhat::MElement;
use crate::cyclo::CycloScalar;
use crate::error::{Error, Result};
use crate::heisenberg::HeisElement;
use crate::lattice::{integral_condition_sublattice, LatticePair};
use crate::normfactor::NormFactor;
use crate::qmat::QMat;
use crate::rational::{dot, neg_vec, rat, Rat};

/// A rational symplectic matrix acting on row vectors `(v₊ ⊕ v₋)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpMatrix {
    n: usize,
    mat: QMat,
}

/// `J = [[0, I], [−I, 0]]`, the matrix of the symplectic form.
fn form_matrix(n: usize) -> QMat {
    let zero = QMat::zero(n, n);
    let id = QMat::identity(n);
    QMat::from_blocks(&zero, &id, &id.neg(), &zero)
}

impl SpMatrix {
    pub fn new(mat: QMat) -> Result<Self> {
        let size = mat.nrows();
        if size != mat.ncols() || size % 2 != 0 || size == 0 {
            return Err(Error::NotSymplectic);
        }
        let n = size / 2;
        let j = form_matrix(n);
        if mat.mul(&j).mul(&mat.transpose()) != j {
            return Err(Error::NotSymplectic);
        }
        Ok(SpMatrix { n, mat })
    }

    pub fn from_blocks(a: &QMat, b: &QMat, c: &QMat, d: &QMat) -> Result<Self> {
        Self::new(QMat::from_blocks(a, b, c, d))
    }

    pub fn identity(n: usize) -> Self {
        SpMatrix { n, mat: QMat::identity(2 * n) }
    }

    pub fn j(n: usize) -> Self {
        SpMatrix { n, mat: form_matrix(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &QMat {
        &self.mat
    }

    /// Quadrants `(A, B, C, D)` of `[[A, B], [C, D]]`.
    pub fn blocks(&self) -> (QMat, QMat, QMat, QMat) {
        let n = self.n;
        (self.mat.block(0, 0, n), self.mat.block(0, 1, n), self.mat.block(1, 0, n), self.mat.block(1, 1, n))
    }

    pub fn mul(&self, other: &SpMatrix) -> SpMatrix {
        assert_eq!(self.n, other.n, "mismatched symplectic sizes");
        SpMatrix { n: self.n, mat: self.mat.mul(&other.mat) }
    }

    /// Exact inverse `g^{-1} = −J·gᵗ·J` (no elimination needed).
    pub fn inverse(&self) -> SpMatrix {
        let j = form_matrix(self.n);
        SpMatrix {
            n: self.n,
            mat: j.mul(&self.mat.transpose()).mul(&j).neg(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mat == QMat::identity(2 * self.n)
    }
}

/// `σ(g)` acts on the Heisenberg group by `(v₊ ⊕ v₋) ↦ (v₊ ⊕ v₋)·g`,
/// leaving the central coordinate alone.  An automorphism because `g`
/// preserves the form defining the product cocycle.
pub fn sigma_act(g: &SpMatrix, h: &HeisElement) -> HeisElement {
    assert_eq!(g.n(), h.dim(), "mismatched symplectic and Heisenberg sizes");
    let mut row = h.vplus.clone();
    row.extend_from_slice(&h.vminus);
    let image = g.matrix().act_row(&row);
    HeisElement::new(image[..g.n()].to_vec(), image[g.n()..].to_vec(), h.alpha.clone())
}

/// One generator of the representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorAtom {
    /// `f ↦ √|det A| · f(x·A^{-t})`.
    Dilate(QMat),
    /// The adelic Fourier transform.
    FourierJ,
    /// `f ↦ e(½·x·B·xᵗ)·f(x)`, `B` symmetric.
    Quad(QMat),
}

impl GeneratorAtom {
    pub fn dilate(a: QMat) -> Result<Self> {
        if a.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(GeneratorAtom::Dilate(a))
    }

    pub fn quad(b: QMat) -> Result<Self> {
        if !b.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(GeneratorAtom::Quad(b))
    }

    /// The symplectic matrix this operator is covariant with.
    pub fn matrix(&self, n: usize) -> SpMatrix {
        match self {
            GeneratorAtom::Dilate(a) => {
                assert_eq!(a.nrows(), n);
                let inv_t = a.inverse().expect("dilation matrix is invertible").transpose();
                SpMatrix {
                    n,
                    mat: QMat::from_blocks(&inv_t, &QMat::zero(n, n), &QMat::zero(n, n), a),
                }
            }
            GeneratorAtom::FourierJ => SpMatrix::j(n),
            GeneratorAtom::Quad(b) => {
                assert_eq!(b.nrows(), n);
                SpMatrix {
                    n,
                    mat: QMat::from_blocks(
                        &QMat::identity(n),
                        b,
                        &QMat::zero(n, n),
                        &QMat::identity(n),
                    ),
                }
            }
        }
    }

    pub fn apply(&self, f: &MElement, cap: u64) -> Result<MElement> {
        match self {
            GeneratorAtom::Dilate(a) => weil_dilate(a, f),
            GeneratorAtom::FourierJ => weil_fourier(f, cap),
            GeneratorAtom::Quad(b) => weil_quad(b, f, cap),
        }
    }
}

/// A sequence of generator atoms whose symplectic matrices multiply (in list
/// order) to `target`; the verification happens at construction.  The
/// associated operator applies the atoms right to left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorWord {
    atoms: Vec<GeneratorAtom>,
    target: SpMatrix,
}

impl GeneratorWord {
    pub fn new(atoms: Vec<GeneratorAtom>, target: SpMatrix) -> Result<Self> {
        let n = target.n();
        let mut product = SpMatrix::identity(n);
        for atom in &atoms {
            product = product.mul(&atom.matrix(n));
        }
        if product != target {
            return Err(Error::Usage(
                "generator word does not multiply to its target".into(),
            ));
        }
        Ok(GeneratorWord { atoms, target })
    }

    pub fn atoms(&self) -> &[GeneratorAtom] {
        &self.atoms
    }

    pub fn target(&self) -> &SpMatrix {
        &self.target
    }

    pub fn apply(&self, f: &MElement, cap: u64) -> Result<MElement> {
        let mut out = f.clone();
        for atom in self.atoms.iter().rev() {
            out = atom.apply(&out, cap)?.canonicalize();
        }
        Ok(out)
    }
}

/// Dilation: `√|det A| · f(x·A^{-t})`.  Representatives and the invariance
/// lattice transform by `Aᵗ`; the prefactor absorbs `√|det A|` (the inverse
/// square root of the finite-adelic determinant norm).
pub fn weil_dilate(a: &QMat, f: &MElement) -> Result<MElement> {
    let n = f.dim();
    assert_eq!(a.nrows(), n, "dilation matrix size mismatch");
    let det = a.det();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    if f.is_zero() {
        return Ok(MElement::zero(n));
    }
    let at = a.transpose();
    let invariance = f.invariance().transform(&at)?;
    let pre = f.prefactor().mul(&NormFactor::sqrt(&det.abs()));
    let terms: Vec<(Vec<Rat>, CycloScalar)> = f
        .support()
        .iter()
        .map(|(r, v)| (at.act_row(r), v.clone()))
        .collect();
    Ok(MElement::assemble(invariance, &pre, terms))
}

/// Fourier transform: `Ff(y) = μ(K)·Σ_r f(r)·e(r·yᵗ)`, supported on `K^◊`
/// and invariant under the dual of the support-plus-invariance lattice.
pub fn weil_fourier(f: &MElement, cap: u64) -> Result<MElement> {
    let n = f.dim();
    if f.is_zero() {
        return Ok(MElement::zero(n));
    }
    let k = f.invariance();
    let ambient = f.ambient();
    // `ambient/K ≅ ⊕ Z/dᵢ` through an adapted basis `eᵢ` (so `K = ⊕ Z·dᵢeᵢ`);
    // in these coordinates the transform is a product of cyclic DFTs, one
    // axis at a time: cost `m·Σdᵢ` instead of `m²` for index `m`.
    let pair = LatticePair::new(ambient.clone(), k.clone())?;
    let index = pair.index();
    if index > BigInt::from(cap) {
        let approx = u64::try_from(&index).unwrap_or(u64::MAX);
        return Err(Error::IndexOverflow { index: approx, cap });
    }
    let ab = pair.adapted_basis();
    let divisors: Vec<u64> = ab
        .divisors
        .iter()
        .map(|d| u64::try_from(d).expect("divisor fits in u64 under the cap"))
        .collect();
    let e = QMat::new(ab.vectors);
    let e_inv = e.inverse()?;
    let e_inv_t = e_inv.transpose();

    let mut values: BTreeMap<Vec<u64>, CycloScalar> = BTreeMap::new();
    for (r, v) in f.support() {
        let coords = e_inv.act_row(r);
        let key: Vec<u64> = coords
            .iter()
            .zip(&divisors)
            .map(|(c, d)| {
                debug_assert!(c.denom().is_one(), "support must sit in the ambient lattice");
                u64::try_from(c.numer().mod_floor(&BigInt::from(*d)))
                    .expect("residue below its divisor")
            })
            .collect();
        values
            .entry(key)
            .and_modify(|x| *x = x.add(v))
            .or_insert_with(|| v.clone());
    }

    for axis in 0..n {
        let d = divisors[axis];
        if d == 1 {
            continue;
        }
        let roots: Vec<CycloScalar> = (0..d)
            .map(|t| CycloScalar::unit(&Rat::new(BigInt::from(t), BigInt::from(d))))
            .collect();
        let mut next: BTreeMap<Vec<u64>, CycloScalar> = BTreeMap::new();
        for (coords, v) in &values {
            let a = coords[axis];
            for b in 0..d {
                let contrib = v.mul(&roots[((a * b) % d) as usize]);
                let mut out = coords.clone();
                out[axis] = b;
                next.entry(out)
                    .and_modify(|x| *x = x.add(&contrib))
                    .or_insert(contrib);
            }
        }
        next.retain(|_, v| !v.is_zero());
        values = next;
    }

    // output coset for digits `b`: `Σ (bⱼ/dⱼ)·fⱼ` with `fⱼ` the basis of the
    // ambient dual paired to `eᵢ` by `eᵢ·fⱼᵗ = δᵢⱼ`, so that the phase
    // `e(r·yᵗ)` is exactly the product DFT kernel.
    let out_invariance = ambient.dual();
    let mu = k.mu();
    let pre = f.prefactor().mul(&NormFactor::from_rat(mu));
    let terms: Vec<(Vec<Rat>, CycloScalar)> = values
        .into_iter()
        .map(|(b, v)| {
            let frac: Vec<Rat> = b
                .iter()
                .zip(&divisors)
                .map(|(bi, di)| Rat::new(BigInt::from(*bi), BigInt::from(*di)))
                .collect();
            (e_inv_t.act_row(&frac), v)
        })
        .collect();
    Ok(MElement::assemble(out_invariance, &pre, terms))
}

/// Quadratic phase: `f ↦ e(½·x·B·xᵗ)·f(x)`.  The invariance lattice shrinks
/// first to `M = {k ∈ K : L·B·kᵗ ⊆ Z}` (`L` the ambient support lattice) and
/// then to the kernel of the homomorphism `k ↦ ½·k·B·kᵗ mod Z` on `M`.
pub fn weil_quad(b: &QMat, f: &MElement, cap: u64) -> Result<MElement> {
    let n = f.dim();
    assert_eq!(b.nrows(), n, "quadratic form size mismatch");
    if !b.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if f.is_zero() {
        return Ok(MElement::zero(n));
    }
    let half = rat(1, 2);
    let quad_value = |x: &[Rat]| -> Rat { &half * dot(&b.act_row(x), x) };

    let k = f.invariance();
    let ambient = f.ambient();
    // Linear step: cross terms L·B·kᵗ integral.
    let cond = QMat::new(
        k.basis()
            .rows
            .iter()
            .map(|bk| ambient.basis().rows.iter().map(|l| dot(&b.act_row(l), bk)).collect())
            .collect(),
    );
    let m = integral_condition_sublattice(k, &cond);
    // Quadratic step: kernel of k ↦ ½·k·B·kᵗ mod Z, determined on a basis.
    let diag = QMat::new(m.basis().rows.iter().map(|mk| vec![quad_value(mk)]).collect());
    let kernel = integral_condition_sublattice(&m, &diag);

    let refined = f.refine(&kernel, cap)?;
    let pre = f.prefactor();
    let terms: Vec<(Vec<Rat>, CycloScalar)> = refined
        .support()
        .iter()
        .map(|(r, v)| (r.clone(), v.mul(&CycloScalar::unit(&quad_value(r)))))
        .collect();
    Ok(MElement::assemble(kernel, &pre, terms))
}

/// Reflection `f(x) ↦ f(−x)`.
pub fn parity(f: &MElement) -> MElement {
    MElement::assemble(
        f.invariance().clone(),
        &f.prefactor(),
        f.support().iter().map(|(r, v)| (neg_vec(r), v.clone())),
    )
}

/// Deterministic search for a symmetric integer matrix `S` with
/// `det(A + S·C) ≠ 0`.  For a symplectic column pair `(A, C)` the
/// determinant is a nonzero polynomial of total degree ≤ n in the entries
/// of `S`, so the grid `{0, …, n}` on the n(n+1)/2 free entries contains a
/// witness; scalar multiples of the identity are tried first.
fn find_symmetric_shift(a: &QMat, c: &QMat) -> Option<QMat> {
    let n = a.nrows();
    let check = |s: &QMat| -> bool { !a.add(&s.mul(c)).det().is_zero() };
    for t in 0..=n as i64 {
        let s = QMat::identity(n).scale(&rat(t, 1));
        if check(&s) {
            return Some(s);
        }
    }
    let free = n * (n + 1) / 2;
    let base = n as u64 + 1;
    let mut counter = vec![0u64; free];
    loop {
        let mut s = QMat::zero(n, n);
        let mut idx = 0;
        for i in 0..n {
            for j in i..n {
                let v = rat(counter[idx] as i64, 1);
                s.rows[i][j] = v.clone();
                s.rows[j][i] = v;
                idx += 1;
            }
        }
        if check(&s) {
            return Some(s);
        }
        let mut pos = 0;
        loop {
            if pos == free {
                return None;
            }
            counter[pos] += 1;
            if counter[pos] < base {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
    }
}

fn push_dilate(atoms: &mut Vec<GeneratorAtom>, a: QMat) {
    if a != QMat::identity(a.nrows()) {
        atoms.push(GeneratorAtom::Dilate(a));
    }
}

fn push_quad(atoms: &mut Vec<GeneratorAtom>, b: QMat) {
    if !b.is_zero() {
        atoms.push(GeneratorAtom::Quad(b));
    }
}

/// Factor a matrix with invertible `C` block as
/// `Quad(A·C^{-1}) · J · Dilate(−C^{-t}) · Quad(C^{-1}·D)`.
fn factor_invertible_c(g: &SpMatrix) -> Vec<GeneratorAtom> {
    let (a, _b, c, d) = g.blocks();
    let c_inv = c.inverse().expect("C block is invertible here");
    let mut atoms = Vec::new();
    push_quad(&mut atoms, a.mul(&c_inv));
    atoms.push(GeneratorAtom::FourierJ);
    push_dilate(&mut atoms, c_inv.transpose().neg());
    push_quad(&mut atoms, c_inv.mul(&d));
    atoms
}

/// Write `g` as a word in the three generators, exactly.  Block elimination:
/// an upper-triangular matrix splits as `Dilate·Quad`; an invertible `C`
/// block splits through one Fourier generator; otherwise a symmetric integer
/// shift makes `A + S·C` invertible and one extra Fourier conjugation
/// reduces to the previous case.  The resulting word is re-multiplied and
/// compared with `g` before it is returned.
pub fn sp_factor(g: &SpMatrix) -> Result<GeneratorWord> {
    let n = g.n();
    if g.is_identity() {
        return GeneratorWord::new(Vec::new(), g.clone());
    }
    if g == &SpMatrix::j(n) {
        return GeneratorWord::new(vec![GeneratorAtom::FourierJ], g.clone());
    }
    let (a, b, c, _d) = g.blocks();
    let atoms = if c.is_zero() {
        // g = [[A, B], [0, A^{-t}]] = Dilate(A^{-t}) · Quad(A^{-1}·B)
        let a_inv = a.inverse().expect("triangular symplectic has invertible A");
        let mut atoms = Vec::new();
        push_dilate(&mut atoms, a_inv.transpose());
        push_quad(&mut atoms, a_inv.mul(&b));
        atoms
    } else if !c.det().is_zero() {
        factor_invertible_c(g)
    } else {
        // Shift: J·Quad(S)·g has C block −(A + S·C), invertible by choice
        // of S; then g = Quad(−S)·(−J)·(J·Quad(S)·g).
        let s = find_symmetric_shift(&a, &c).ok_or(Error::NotSymplectic)?;
        let shifted = SpMatrix::j(n)
            .mul(&GeneratorAtom::Quad(s.clone()).matrix(n))
            .mul(g);
        let mut atoms = Vec::new();
        push_quad(&mut atoms, s.neg());
        atoms.push(GeneratorAtom::Dilate(QMat::identity(n).neg()));
        atoms.push(GeneratorAtom::FourierJ);
        atoms.extend(factor_invertible_c(&shifted));
        atoms
    };
    GeneratorWord::new(atoms, g.clone())
}

/// An alternative factorization (used to exercise word independence):
/// `g = (−J)·(J·g)` with the right factor factored recursively.
pub fn sp_factor_alt(g: &SpMatrix) -> Result<GeneratorWord> {
    let n = g.n();
    let inner = sp_factor(&SpMatrix::j(n).mul(g))?;
    let mut atoms = vec![
        GeneratorAtom::Dilate(QMat::identity(n).neg()),
        GeneratorAtom::FourierJ,
    ];
    atoms.extend_from_slice(inner.atoms());
    GeneratorWord::new(atoms, g.clone())
}

/// Apply the Weil operator of `g` along its canonical factorization word.
pub fn weil_apply(g: &SpMatrix, f: &MElement, cap: u64) -> Result<MElement> {
    sp_factor(g)?.apply(f, cap)
}

/// Exact covariance along a fixed word: `T(h)·We_w(g)·f = We_w(g)·T(σ(g)h)·f`.
pub fn covariance_check(g: &SpMatrix, h: &HeisElement, f: &MElement, cap: u64) -> Result<bool> {
    let word = sp_factor(g)?;
    let lhs = crate::heisenberg::heis_act(h, &word.apply(f, cap)?, cap)?;
    let rhs = word.apply(&crate::heisenberg::heis_act(&sigma_act(g, h), f, cap)?, cap)?;
    Ok(lhs.equal_fn(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::heis_mul;
    use crate::lattice::QLattice;
    use crate::normfactor::Scalar;
    use crate::rational::rat_int;
    use crate::DEFAULT_INDEX_CAP as CAP;

    fn zlat(c: Rat) -> QLattice {
        QLattice::from_basis(vec![vec![c]]).unwrap()
    }

    fn qm(rows: Vec<Vec<i64>>) -> QMat {
        QMat::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_int).collect())
                .collect(),
        )
    }

    /// dilate ∘ quad ∘ J words give plenty of test matrices.
    fn word_matrix(atoms: &[GeneratorAtom], n: usize) -> SpMatrix {
        atoms
            .iter()
            .fold(SpMatrix::identity(n), |acc, a| acc.mul(&a.matrix(n)))
    }

    #[test]
    fn symplectic_check_rejects_non_symplectic() {
        assert!(SpMatrix::new(qm(vec![vec![1, 1], vec![0, 2]])).is_err());
        assert!(SpMatrix::new(qm(vec![vec![1, 0], vec![0, 1]])).is_ok());
        // odd size
        assert!(SpMatrix::new(QMat::identity(3)).is_err());
    }

    #[test]
    fn inverse_is_exact() {
        let g = SpMatrix::new(qm(vec![vec![2, 1], vec![1, 1]])).unwrap();
        assert!(g.mul(&g.inverse()).is_identity());
        let j = SpMatrix::j(2);
        assert!(j.mul(&j.inverse()).is_identity());
    }

    #[test]
    fn sigma_is_an_automorphism() {
        let h = HeisElement::new(vec![rat(1, 2)], vec![rat(1, 3)], rat(1, 5));
        let e = SpMatrix::identity(1);
        assert_eq!(sigma_act(&e, &h), h);

        let j = SpMatrix::j(1);
        let jh = sigma_act(&j, &h);
        assert_eq!(jh.vplus, vec![rat(-1, 3)]);
        assert_eq!(jh.vminus, vec![rat(1, 2)]);
        assert_eq!(jh.alpha, rat(1, 5));

        let g = SpMatrix::new(qm(vec![vec![2, 1], vec![1, 1]])).unwrap();
        let a = HeisElement::new(vec![rat(1, 2)], vec![rat(2, 3)], rat(1, 7));
        let b = HeisElement::new(vec![rat(-1, 3)], vec![rat(1, 4)], rat(2, 5));
        assert_eq!(
            sigma_act(&g, &heis_mul(&a, &b)),
            heis_mul(&sigma_act(&g, &a), &sigma_act(&g, &b))
        );
    }

    #[test]
    fn dilation_examples() {
        let f = MElement::standard_indicator(1);
        assert_eq!(weil_dilate(&QMat::identity(1), &f).unwrap(), f);

        let g = weil_dilate(&qm(vec![vec![2]]), &f).unwrap();
        let expected = MElement::indicator(&zlat(rat_int(2)), &[rat_int(0)])
            .scale(&Scalar::new(&NormFactor::sqrt(&rat_int(2)), CycloScalar::one()));
        assert_eq!(g, expected);
        // unitarity of the normalization
        assert_eq!(g.pairing(&g, CAP).unwrap(), Scalar::one());

        assert!(matches!(
            weil_dilate(&qm(vec![vec![0]]), &f),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn dilation_composes() {
        let f = MElement::indicator(&zlat(rat(1, 2)), &[rat(1, 3)]);
        let a1 = QMat::new(vec![vec![rat(2, 3)]]);
        let a2 = QMat::new(vec![vec![rat(-5, 2)]]);
        let lhs = weil_dilate(&a1, &weil_dilate(&a2, &f).unwrap()).unwrap();
        let rhs = weil_dilate(&a1.mul(&a2), &f).unwrap();
        assert_eq!(lhs, rhs);

        let two = QMat::new(vec![
            vec![rat_int(1), rat(1, 2)],
            vec![rat_int(1), rat_int(1)],
        ]);
        let g2 = MElement::standard_indicator(2);
        let lhs = weil_dilate(&two, &weil_dilate(&two, &g2).unwrap()).unwrap();
        let rhs = weil_dilate(&two.mul(&two), &g2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn fourier_fixes_the_self_dual_indicator() {
        for n in [1usize, 2] {
            let f = MElement::standard_indicator(n);
            assert_eq!(weil_fourier(&f, CAP).unwrap(), f);
        }
    }

    #[test]
    fn fourier_of_a_sublattice_indicator() {
        let f = MElement::indicator(&zlat(rat_int(2)), &[rat_int(0)]);
        let out = weil_fourier(&f, CAP).unwrap();
        let expected = MElement::indicator(&zlat(rat(1, 2)), &[rat_int(0)])
            .scale(&Scalar::from_rat(rat(1, 2)));
        assert_eq!(out, expected);
    }

    #[test]
    fn poisson_identity_for_random_lattices() {
        let cases = [
            QLattice::from_basis(vec![vec![rat(2, 3)]]).unwrap(),
            QLattice::from_basis(vec![vec![rat(5, 2)]]).unwrap(),
            QLattice::from_basis(vec![
                vec![rat_int(1), rat(1, 2)],
                vec![rat_int(0), rat(3, 2)],
            ])
            .unwrap(),
        ];
        for l in cases {
            let f = MElement::indicator(&l, &vec![rat_int(0); l.dim()]);
            let out = weil_fourier(&f, CAP).unwrap();
            let expected = MElement::indicator(&l.dual(), &vec![rat_int(0); l.dim()])
                .scale(&Scalar::from_rat(l.mu()));
            assert_eq!(out, expected, "Poisson identity fails for {:?}", l);
        }
    }

    #[test]
    fn double_fourier_is_parity() {
        let examples = vec![
            MElement::indicator(&zlat(rat_int(2)), &[rat_int(1)]),
            MElement::indicator(&zlat(rat(1, 3)), &[rat(1, 2)]),
            MElement::indicator(&zlat(rat(2, 3)), &[rat(1, 4)])
                .scale(&Scalar::from_cyclo(CycloScalar::unit(&rat(1, 5)))),
        ];
        for f in examples {
            let ff = weil_fourier(&weil_fourier(&f, CAP).unwrap(), CAP).unwrap();
            assert!(ff.equal_fn(&parity(&f)), "F² ≠ parity for {:?}", f);
        }
    }

    #[test]
    fn quadratic_phase_examples() {
        let f = MElement::standard_indicator(1);
        assert_eq!(weil_quad(&QMat::zero(1, 1), &f, CAP).unwrap(), f);

        // B = 1: e^{πik²} = (−1)^k splits Z into even and odd cosets.
        let out = weil_quad(&qm(vec![vec![1]]), &f, CAP).unwrap();
        let even = MElement::indicator(&zlat(rat_int(2)), &[rat_int(0)]);
        let odd = MElement::indicator(&zlat(rat_int(2)), &[rat_int(1)]);
        let expected = even.sub(&odd, CAP).unwrap();
        assert_eq!(out.invariance(), &zlat(rat_int(2)));
        assert!(out.equal_fn(&expected));

        // B = 2: e^{2πik²} = 1 on Z.
        assert_eq!(weil_quad(&qm(vec![vec![2]]), &f, CAP).unwrap(), f);

        assert!(matches!(
            weil_quad(&qm(vec![vec![0, 1], vec![0, 0]]), &MElement::standard_indicator(2), CAP),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn factoring_identity_and_j() {
        assert!(sp_factor(&SpMatrix::identity(2)).unwrap().atoms().is_empty());
        let w = sp_factor(&SpMatrix::j(2)).unwrap();
        assert_eq!(w.atoms(), &[GeneratorAtom::FourierJ]);
    }

    #[test]
    fn factoring_reproduces_assorted_matrices() {
        // n = 1: all of SL(2, Q) with small denominators.
        let ones = [
            qm(vec![vec![1, 1], vec![0, 1]]),
            qm(vec![vec![1, 0], vec![1, 1]]),
            qm(vec![vec![2, 1], vec![1, 1]]),
            QMat::new(vec![
                vec![rat_int(0), rat_int(2)],
                vec![rat(-1, 2), rat_int(1)],
            ]),
            QMat::new(vec![
                vec![rat(1, 2), rat(1, 3)],
                vec![rat(-3, 2), rat_int(1)],
            ]),
        ];
        for m in ones {
            let g = SpMatrix::new(m).unwrap();
            // construction of the word already verifies the product
            let w = sp_factor(&g).unwrap();
            assert_eq!(w.target(), &g);
        }

        // n = 2: words of atoms give symplectic targets with C singular but
        // nonzero, C invertible, and C zero.
        let words: Vec<Vec<GeneratorAtom>> = vec![
            vec![
                GeneratorAtom::Quad(qm(vec![vec![1, 1], vec![1, 0]])),
                GeneratorAtom::FourierJ,
                GeneratorAtom::Dilate(qm(vec![vec![1, 2], vec![0, 1]])),
            ],
            vec![
                GeneratorAtom::FourierJ,
                GeneratorAtom::Quad(qm(vec![vec![0, 0], vec![0, 1]])),
                GeneratorAtom::FourierJ,
            ],
            vec![
                GeneratorAtom::Dilate(QMat::new(vec![
                    vec![rat(1, 2), rat_int(0)],
                    vec![rat(1, 3), rat_int(1)],
                ])),
                GeneratorAtom::Quad(qm(vec![vec![2, 1], vec![1, -2]])),
            ],
            vec![
                GeneratorAtom::Quad(qm(vec![vec![1, 0], vec![0, 0]])),
                GeneratorAtom::FourierJ,
                GeneratorAtom::Quad(qm(vec![vec![0, 0], vec![0, 2]])),
                GeneratorAtom::FourierJ,
            ],
        ];
        for atoms in words {
            let g = word_matrix(&atoms, 2);
            let w = sp_factor(&g).unwrap();
            assert_eq!(w.target(), &g);
            let alt = sp_factor_alt(&g).unwrap();
            assert_eq!(alt.target(), &g);
        }
    }

    #[test]
    fn weil_apply_fixes_the_vacuum_under_j() {
        for n in [1usize, 2] {
            let f = MElement::standard_indicator(n);
            let out = weil_apply(&SpMatrix::j(n), &f, CAP).unwrap();
            assert_eq!(out, f);
        }
    }

    #[test]
    fn integral_even_diagonal_matrices_fix_the_vacuum_ray() {
        let f = MElement::standard_indicator(1);
        // generators of the even-diagonal integral subgroup at n = 1
        let gens = [
            qm(vec![vec![1, 2], vec![0, 1]]),
            qm(vec![vec![1, 0], vec![2, 1]]),
            qm(vec![vec![0, 1], vec![-1, 0]]),
            qm(vec![vec![3, 2], vec![4, 3]]),
        ];
        for m in gens {
            let g = SpMatrix::new(m).unwrap();
            let out = weil_apply(&g, &f, CAP).unwrap();
            let lambda = out.projective_equal(&f);
            assert!(lambda.is_some(), "vacuum ray moved by {:?}", g);
        }
    }

    #[test]
    fn covariance_for_single_atoms_and_words() {
        let f = MElement::indicator(&zlat(rat(1, 2)), &[rat(1, 3)]);
        let spanning = [
            HeisElement::translation(vec![rat(1, 2)]),
            HeisElement::character(vec![rat(1, 3)]),
            HeisElement::central(1, rat(1, 5)),
            HeisElement::new(vec![rat(2, 3)], vec![rat(1, 2)], rat(1, 7)),
        ];
        let gs = [
            SpMatrix::identity(1),
            SpMatrix::j(1),
            SpMatrix::new(qm(vec![vec![1, 1], vec![0, 1]])).unwrap(),
            SpMatrix::new(QMat::new(vec![
                vec![rat_int(2), rat_int(0)],
                vec![rat_int(0), rat(1, 2)],
            ]))
            .unwrap(),
            SpMatrix::new(qm(vec![vec![2, 1], vec![1, 1]])).unwrap(),
        ];
        for g in &gs {
            for h in &spanning {
                assert!(
                    covariance_check(g, h, &f, CAP).unwrap(),
                    "covariance fails for g={:?}, h={:?}",
                    g,
                    h
                );
            }
        }
    }

    #[test]
    fn covariance_in_two_dimensions() {
        let f = MElement::standard_indicator(2);
        let g = word_matrix(
            &[
                GeneratorAtom::Quad(qm(vec![vec![1, 1], vec![1, 0]])),
                GeneratorAtom::FourierJ,
                GeneratorAtom::Dilate(qm(vec![vec![1, 2], vec![0, 1]])),
            ],
            2,
        );
        let h = HeisElement::new(
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(1, 4), rat_int(1)],
            rat(1, 6),
        );
        assert!(covariance_check(&g, &h, &f, CAP).unwrap());
    }

    #[test]
    fn word_independence_up_to_a_constant_scalar() {
        let g = SpMatrix::new(qm(vec![vec![2, 1], vec![1, 1]])).unwrap();
        let w1 = sp_factor(&g).unwrap();
        let w2 = sp_factor_alt(&g).unwrap();
        assert_ne!(w1.atoms(), w2.atoms());
        let fs = [
            MElement::standard_indicator(1),
            MElement::indicator(&zlat(rat_int(2)), &[rat_int(1)]),
            MElement::indicator(&zlat(rat(1, 3)), &[rat(1, 2)]),
        ];
        let mut lambda = None;
        for f in &fs {
            let a = w1.apply(f, CAP).unwrap();
            let b = w2.apply(f, CAP).unwrap();
            let l = a.projective_equal(&b).expect("words agree projectively");
            match &lambda {
                None => lambda = Some(l),
                Some(prev) => assert_eq!(prev, &l, "scalar depends on the vector"),
            }
        }
    }

    #[test]
    fn projective_homomorphism_property() {
        let g1 = SpMatrix::new(qm(vec![vec![1, 1], vec![0, 1]])).unwrap();
        let g2 = SpMatrix::new(qm(vec![vec![1, 0], vec![1, 1]])).unwrap();
        let prod = g1.mul(&g2);
        let fs = [
            MElement::standard_indicator(1),
            MElement::indicator(&zlat(rat(1, 2)), &[rat(1, 3)]),
        ];
        let mut c = None;
        for f in &fs {
            let lhs = weil_apply(&g1, &weil_apply(&g2, f, CAP).unwrap(), CAP).unwrap();
            let rhs = weil_apply(&prod, f, CAP).unwrap();
            let l = lhs.projective_equal(&rhs).expect("cocycle scalar exists");
            match &c {
                None => c = Some(l),
                Some(prev) => assert_eq!(prev, &l, "cocycle depends on the vector"),
            }
        }
    }

    #[test]
    fn atoms_preserve_the_pairing() {
        let f = MElement::indicator(&zlat(rat(1, 2)), &[rat(1, 3)]);
        let g = MElement::indicator(&zlat(rat(1, 3)), &[rat(1, 4)]);
        let p = f.pairing(&g, CAP).unwrap();
        let atoms = [
            GeneratorAtom::Dilate(QMat::new(vec![vec![rat(2, 3)]])),
            GeneratorAtom::FourierJ,
            GeneratorAtom::Quad(qm(vec![vec![1]])),
        ];
        for atom in atoms {
            let af = atom.apply(&f, CAP).unwrap();
            let ag = atom.apply(&g, CAP).unwrap();
            assert_eq!(af.pairing(&ag, CAP).unwrap(), p, "pairing moved by {:?}", atom);
        }
    }
}
