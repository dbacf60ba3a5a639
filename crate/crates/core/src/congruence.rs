//! Integral symplectic congruence subgroups.
//!
//! Three kinds are supported: the principal congruence subgroup `Γ_N`
//! (`g ≡ 1 mod N`), the theta group `Γ_{1,2}` (diagonals of `AᵗC` and `BᵗD`
//! even), and the subgroups `U_l` given by generator families (dilations by
//! unimodular matrices `≡ 1 mod l` and symmetric shears divisible by `l`).
//! `U_l` membership is not decidable here; the sampler produces random
//! generators instead, which is all the stabilizer evidence needs.
//!
//! [`delta_normalized_apply`] rescales the projective action of `Γ_{1,2}` so
//! that the standard vacuum `Δ = indicator(Zⁿ, 0)` is fixed exactly; the
//! normalized action is then an honest representation, which
//! [`stabilizer_level`] uses to exhibit a congruence subgroup fixing any
//! given element pointwise.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::bruhat::MElement;
use crate::error::{Error, Result};
use crate::normfactor::Scalar;
use crate::qmat::QMat;
use crate::rational::Rat;
use crate::weil::{sp_factor, SpMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CongruenceKind {
    PrincipalGamma(BigInt),
    Gamma12,
    U(BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceSpec {
    pub kind: CongruenceKind,
    pub n: usize,
}

impl CongruenceSpec {
    pub fn principal(n: usize, modulus: impl Into<BigInt>) -> Self {
        let m = modulus.into();
        assert!(m.is_positive(), "modulus must be positive");
        CongruenceSpec { kind: CongruenceKind::PrincipalGamma(m), n }
    }

    pub fn gamma12(n: usize) -> Self {
        CongruenceSpec { kind: CongruenceKind::Gamma12, n }
    }

    pub fn u(n: usize, level: impl Into<BigInt>) -> Self {
        let l = level.into();
        assert!(l.is_positive(), "level must be positive");
        CongruenceSpec { kind: CongruenceKind::U(l), n }
    }
}

/// Entry-wise `g ≡ 1 mod m` for an integral matrix.
fn congruent_to_identity(g: &SpMatrix, m: &BigInt) -> bool {
    let size = 2 * g.n();
    let rows = &g.matrix().rows;
    (0..size).all(|i| {
        (0..size).all(|j| {
            let expected = if i == j { Rat::one() } else { Rat::zero() };
            let diff = &rows[i][j] - expected;
            diff.numer().is_multiple_of(m)
        })
    })
}

fn has_even_diagonal(m: &QMat) -> bool {
    let two = BigInt::from(2);
    (0..m.nrows()).all(|i| m.rows[i][i].numer().is_multiple_of(&two))
}

/// Exact membership test.  `U_l` is defined by generators only, so deciding
/// membership would solve a word problem; that case reports an error.
pub fn membership(g: &SpMatrix, spec: &CongruenceSpec) -> Result<bool> {
    if g.n() != spec.n {
        return Err(Error::DimensionMismatch { expected: spec.n, got: g.n() });
    }
    if !g.matrix().is_integral() {
        return Err(Error::NotIntegral);
    }
    match &spec.kind {
        CongruenceKind::PrincipalGamma(m) => Ok(congruent_to_identity(g, m)),
        CongruenceKind::Gamma12 => {
            let (a, b, c, d) = g.blocks();
            Ok(has_even_diagonal(&a.transpose().mul(&c))
                && has_even_diagonal(&b.transpose().mul(&d)))
        }
        CongruenceKind::U(_) => Err(Error::UndecidableMembership),
    }
}

fn int_entry(rng: &mut ChaCha12Rng, size: i64) -> Rat {
    Rat::from(BigInt::from(rng.random_range(-size..=size)))
}

fn random_symmetric(n: usize, size: i64, rng: &mut ChaCha12Rng) -> QMat {
    let mut m = QMat::zero(n, n);
    for i in 0..n {
        for j in i..n {
            let v = int_entry(rng, size);
            m.rows[i][j] = v.clone();
            m.rows[j][i] = v;
        }
    }
    m
}

/// Unimodular matrix `≡ 1 mod l` built from elementary shears `1 + l·c·E_ij`.
fn random_unimodular_mod(n: usize, l: &BigInt, size: i64, rng: &mut ChaCha12Rng) -> QMat {
    let mut m = QMat::identity(n);
    if n == 1 {
        // The only unimodular 1×1 matrices are ±1; −1 qualifies when l | 2.
        if *l <= BigInt::from(2) && rng.random_bool(0.5) {
            m.rows[0][0] = -Rat::one();
        }
        return m;
    }
    let steps = rng.random_range(1..=3);
    for _ in 0..steps {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let mut shear = QMat::identity(n);
        shear.rows[i][j] = Rat::from(l.clone()) * int_entry(rng, size);
        m = m.mul(&shear);
    }
    m
}

fn upper_shear(b: QMat) -> SpMatrix {
    let n = b.nrows();
    SpMatrix::from_blocks(&QMat::identity(n), &b, &QMat::zero(n, n), &QMat::identity(n))
        .expect("symmetric upper shear is symplectic")
}

fn lower_shear(c: QMat) -> SpMatrix {
    let n = c.nrows();
    SpMatrix::from_blocks(&QMat::identity(n), &QMat::zero(n, n), &c, &QMat::identity(n))
        .expect("symmetric lower shear is symplectic")
}

fn block_dilate(a: QMat) -> SpMatrix {
    let n = a.nrows();
    let inv_t = a.inverse().expect("unimodular matrix inverts").transpose();
    SpMatrix::from_blocks(&a, &QMat::zero(n, n), &QMat::zero(n, n), &inv_t)
        .expect("block dilation is symplectic")
}

fn sample_mod_l(n: usize, l: &BigInt, size: i64, rng: &mut ChaCha12Rng) -> SpMatrix {
    let lq = Rat::from(l.clone());
    match rng.random_range(0..3) {
        0 => upper_shear(random_symmetric(n, size, rng).scale(&lq)),
        1 => lower_shear(random_symmetric(n, size, rng).scale(&lq)),
        _ => block_dilate(random_unimodular_mod(n, l, size, rng)),
    }
}

fn sample_gamma12(n: usize, size: i64, rng: &mut ChaCha12Rng) -> SpMatrix {
    let even_symmetric = |rng: &mut ChaCha12Rng| {
        let mut b = random_symmetric(n, size, rng);
        for i in 0..n {
            let doubled = &b.rows[i][i] * Rat::from(BigInt::from(2));
            b.rows[i][i] = doubled;
        }
        b
    };
    let factors = rng.random_range(1..=3);
    let mut g = SpMatrix::identity(n);
    for _ in 0..factors {
        let next = match rng.random_range(0..4) {
            0 => upper_shear(even_symmetric(rng)),
            1 => lower_shear(even_symmetric(rng)),
            2 => block_dilate(random_unimodular_mod(n, &BigInt::one(), size, rng)),
            _ => SpMatrix::j(n),
        };
        g = g.mul(&next);
    }
    g
}

/// Random generators of the requested subgroup, entries bounded by `size`.
/// Every sample is verified: symplectic by construction, `≡ 1 mod l` for the
/// modular kinds, and a full membership check for `Γ_{1,2}`.
pub fn sample_generators(
    spec: &CongruenceSpec,
    count: usize,
    size: i64,
    seed: u64,
) -> Result<Vec<SpMatrix>> {
    assert!(size >= 1, "size bound must be at least 1");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let g = match &spec.kind {
            CongruenceKind::PrincipalGamma(m) => {
                let g = sample_mod_l(spec.n, m, size, &mut rng);
                debug_assert!(membership(&g, spec)?);
                g
            }
            CongruenceKind::U(l) => {
                let g = sample_mod_l(spec.n, l, size, &mut rng);
                debug_assert!(congruent_to_identity(&g, l));
                g
            }
            CongruenceKind::Gamma12 => {
                let g = sample_gamma12(spec.n, size, &mut rng);
                if !membership(&g, spec)? {
                    return Err(Error::Usage(
                        "sampled matrix escaped the theta group".into(),
                    ));
                }
                g
            }
        };
        out.push(g);
    }
    Ok(out)
}

/// Apply the Weil operator of `g ∈ Γ_{1,2}` normalized so the standard
/// vacuum is fixed exactly.  One factorization word serves both the vacuum
/// and `f`, so the normalization is coherent and the result is independent
/// of the word: the normalized action is an honest representation.
pub fn delta_normalized_apply(g: &SpMatrix, f: &MElement, cap: u64) -> Result<MElement> {
    let spec = CongruenceSpec::gamma12(g.n());
    if !membership(g, &spec)? {
        return Err(Error::NotInGamma12);
    }
    let word = sp_factor(g)?;
    let delta = MElement::standard_indicator(g.n());
    let moved = word.apply(&delta, cap)?;
    let lambda = moved.projective_equal(&delta).ok_or(Error::DeltaNotEigen)?;
    let out = word.apply(f, cap)?;
    Ok(out.scale(&lambda.inv()?))
}

#[derive(Clone, Debug)]
pub struct StabilizerTrial {
    pub generator: SpMatrix,
    pub fixed: bool,
    pub scalar: Option<Scalar>,
}

#[derive(Clone, Debug)]
pub struct StabilizerReport {
    /// Minimal `N` with support inside `N^{-1}Zⁿ` and `NZⁿ` inside the
    /// invariance lattice.
    pub level: BigInt,
    /// The sampled subgroup's modulus `2N²`.
    pub modulus: BigInt,
    pub trials: Vec<StabilizerTrial>,
    pub all_fixed: bool,
}

/// Level of `f` together with sampled evidence that `U_{2N²}` fixes `f`
/// exactly under the normalized action.
pub fn stabilizer_level(
    f: &MElement,
    trials: usize,
    size: i64,
    seed: u64,
    cap: u64,
) -> Result<StabilizerReport> {
    let n = f.dim();
    let level = f.ambient().den().lcm(&f.invariance().scale_level());
    let modulus = BigInt::from(2) * &level * &level;
    let spec = CongruenceSpec::u(n, modulus.clone());
    let gens = sample_generators(&spec, trials, size, seed)?;
    let mut report_trials = Vec::with_capacity(trials);
    let mut all_fixed = true;
    for g in gens {
        // Every U_{2N²} generator of these families lies in the theta group.
        let out = delta_normalized_apply(&g, f, cap)?;
        let scalar = out.projective_equal(f);
        let fixed = out.equal_fn(f);
        all_fixed &= fixed;
        report_trials.push(StabilizerTrial { generator: g, fixed, scalar });
    }
    Ok(StabilizerReport { level, modulus, trials: report_trials, all_fixed })
}
