//! The real side: numeric pairings and theta series.
//!
//! A coset function `f` is reinterpreted as the tempered distribution
//! `Σ_ξ f(ξ)·δ(x − √(2π)ξ)`.  This module pairs it with Gaussians, sums the
//! theta series `θ(f, z) = Σ_ξ f(ξ)·exp(πi·ξ·z·ξᵗ)` on the Siegel half-plane,
//! and checks the weight-1/2 modular transformation numerically.  It is the
//! only module that uses floating point; every truncation carries an explicit
//! tail bound.
//!
//! Conventions fixed here:
//! * real Fourier transform `F φ(y) = (2π)^{-n/2} ∫ φ(x)·e^{i x·yᵗ} dx`,
//!   the unique normalization under which the distribution attached to the
//!   exact Fourier transform of `f` is the distributional transform of the
//!   one attached to `f`;
//! * automorphy factor `det(A + zC)^{-1/2}` with the principal branch.  The
//!   raw branch is off from the theta-invariant normalization by an 8th root
//!   of unity, which [`modularity_check`] calibrates against the vacuum and
//!   reports — never resolves silently.

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bruhat::MElement;
use crate::error::{Error, Result};
use crate::normfactor::Scalar;
use crate::qmat::QMat;
use crate::rational::{rat_to_f64, Rat};
use crate::weil::SpMatrix;

pub const DEFAULT_SUM_TOL: f64 = 1e-9;
pub const DEFAULT_RATIO_TOL: f64 = 1e-8;

/// Guard for the lattice-point enumeration boxes.
const MAX_ENUM_POINTS: f64 = 2e7;

pub fn qmat_to_f64(m: &QMat) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| rat_to_f64(&m.rows[i][j]))
}

fn vec_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn min_symmetric_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}

/// A coset function viewed as the distribution `Σ f(ξ)·δ(x − √(2π)ξ)`.
#[derive(Clone, Debug)]
pub struct PoissonDistribution {
    data: MElement,
}

impl PoissonDistribution {
    pub fn new(data: MElement) -> Self {
        PoissonDistribution { data }
    }

    pub fn data(&self) -> &MElement {
        &self.data
    }
}

/// `φ(x) = exp(−x·a·xᵗ + b·xᵗ)` with `a` real symmetric positive-definite.
#[derive(Clone, Debug)]
pub struct GaussianSpec {
    quadratic: DMatrix<f64>,
    linear: Vec<Complex64>,
}

impl GaussianSpec {
    pub fn new(quadratic: DMatrix<f64>, linear: Vec<Complex64>) -> Result<Self> {
        let n = quadratic.nrows();
        if quadratic.ncols() != n || linear.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: linear.len() });
        }
        let sym_defect = (&quadratic - quadratic.transpose()).norm();
        if sym_defect > 1e-12 * (1.0 + quadratic.norm()) {
            return Err(Error::NotPositiveDefinite);
        }
        if Cholesky::new(quadratic.clone()).is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(GaussianSpec { quadratic, linear })
    }

    pub fn standard(n: usize) -> Self {
        GaussianSpec::new(DMatrix::identity(n, n), vec![Complex64::ZERO; n])
            .expect("identity quadratic part is positive-definite")
    }

    pub fn dim(&self) -> usize {
        self.quadratic.nrows()
    }

    pub fn quadratic(&self) -> &DMatrix<f64> {
        &self.quadratic
    }

    pub fn linear(&self) -> &[Complex64] {
        &self.linear
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let n = self.dim();
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += x[i] * self.quadratic[(i, j)] * x[j];
            }
        }
        let mut lin = Complex64::ZERO;
        for i in 0..n {
            lin += self.linear[i] * x[i];
        }
        (Complex64::new(-quad, 0.0) + lin).exp()
    }
}

/// Closed-form Fourier transform of a Gaussian under
/// `F φ(y) = (2π)^{-n/2} ∫ φ(x)·e^{i x·yᵗ} dx`:
/// returns `(ψ, c)` with `F φ = c·ψ`, where
/// `ψ(y) = exp(−¼·y·a^{-1}·yᵗ + (i/2)·b·a^{-1}·yᵗ)` and
/// `c = 2^{-n/2}·det(a)^{-1/2}·exp(¼·b·a^{-1}·bᵗ)`.
pub fn gaussian_fourier(phi: &GaussianSpec) -> Result<(GaussianSpec, Complex64)> {
    let n = phi.dim();
    let a_inv = phi
        .quadratic
        .clone()
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite)?;
    let quadratic = &a_inv * 0.25;
    let b = &phi.linear;
    let mut b_ainv = vec![Complex64::ZERO; n];
    for j in 0..n {
        for i in 0..n {
            b_ainv[j] += b[i] * a_inv[(i, j)];
        }
    }
    let linear: Vec<Complex64> = b_ainv.iter().map(|v| v * Complex64::new(0.0, 0.5)).collect();
    let mut b_ainv_b = Complex64::ZERO;
    for i in 0..n {
        b_ainv_b += b_ainv[i] * b[i];
    }
    let det_a = phi.quadratic.determinant();
    let scale = (b_ainv_b * 0.25).exp() / (2f64.powi(n as i32) * det_a).sqrt();
    Ok((GaussianSpec::new(quadratic, linear)?, scale))
}

/// A point of the Siegel upper half-plane: complex symmetric with
/// positive-definite imaginary part.
#[derive(Clone, Debug)]
pub struct SiegelPoint {
    z: DMatrix<Complex64>,
}

impl SiegelPoint {
    pub fn new(z: DMatrix<Complex64>) -> Result<Self> {
        let n = z.nrows();
        if z.ncols() != n || n == 0 {
            return Err(Error::NotInSiegelDomain);
        }
        let sym_defect = (&z - z.transpose()).norm();
        if sym_defect > 1e-9 * (1.0 + z.norm()) {
            return Err(Error::NotInSiegelDomain);
        }
        let im = z.map(|c| c.im);
        let im_sym = (&im + im.transpose()) * 0.5;
        if min_symmetric_eigenvalue(&im_sym) <= 0.0 {
            return Err(Error::NotInSiegelDomain);
        }
        Ok(SiegelPoint { z })
    }

    pub fn scalar(c: Complex64) -> Result<Self> {
        Self::new(DMatrix::from_element(1, 1, c))
    }

    pub fn diagonal(n: usize, c: Complex64) -> Result<Self> {
        Self::new(DMatrix::from_diagonal_element(n, n, c))
    }

    pub fn n(&self) -> usize {
        self.z.nrows()
    }

    pub fn z(&self) -> &DMatrix<Complex64> {
        &self.z
    }

    pub fn im(&self) -> DMatrix<f64> {
        let im = self.z.map(|c| c.im);
        (&im + im.transpose()) * 0.5
    }
}

/// Integer coefficient boxes covering all points of `rep + c·B` with
/// `‖rep + c·B‖ ≤ radius`, derived from the smallest Gram eigenvalue.
struct LatticeBox {
    basis: Vec<Vec<f64>>,
    sqrt_lambda_min: f64,
}

impl LatticeBox {
    fn new(basis: Vec<Vec<f64>>) -> Self {
        let n = basis.len();
        let gram = DMatrix::from_fn(n, n, |i, j| {
            basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum()
        });
        let lambda = min_symmetric_eigenvalue(&gram);
        assert!(lambda > 0.0, "lattice basis is numerically degenerate");
        LatticeBox { basis, sqrt_lambda_min: lambda.sqrt() }
    }

    /// Upper bound for the number of coset points within norm `t`.
    fn count_bound(&self, rep_norm: f64, t: f64) -> f64 {
        let n = self.basis.len();
        let per_coord = ((t + rep_norm) / self.sqrt_lambda_min).floor() + 1.0;
        (2.0 * per_coord + 1.0).powi(n as i32)
    }

    fn points_within(&self, rep: &[f64], radius: f64) -> Result<Vec<Vec<f64>>> {
        let n = self.basis.len();
        let rep_norm = norm2(rep);
        let bound = ((radius + rep_norm) / self.sqrt_lambda_min).floor() as i64;
        let total = (2.0 * bound as f64 + 1.0).powi(n as i32);
        if total > MAX_ENUM_POINTS {
            return Err(Error::Usage(format!(
                "lattice enumeration box of ~{total:.1e} points exceeds the internal limit"
            )));
        }
        let mut out = Vec::new();
        let mut counter = vec![-bound; n];
        'outer: loop {
            let mut p = rep.to_vec();
            for (ci, row) in counter.iter().zip(&self.basis) {
                for (pj, bj) in p.iter_mut().zip(row) {
                    *pj += *ci as f64 * bj;
                }
            }
            if norm2(&p) <= radius {
                out.push(p);
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    break 'outer;
                }
                counter[pos] += 1;
                if counter[pos] <= bound {
                    break;
                }
                counter[pos] = -bound;
                pos += 1;
            }
        }
        Ok(out)
    }
}

struct SupportSum {
    lattice_box: LatticeBox,
    /// `(rep as f64, value·prefactor as complex, rep norm)`
    cosets: Vec<(Vec<f64>, Complex64, f64)>,
    max_amp: f64,
}

fn support_sum(f: &MElement) -> SupportSum {
    let pre = f.prefactor().to_f64();
    let basis: Vec<Vec<f64>> = f
        .invariance()
        .basis()
        .rows
        .iter()
        .map(|r| vec_to_f64(r))
        .collect();
    let mut cosets = Vec::with_capacity(f.support().len());
    let mut max_amp: f64 = 0.0;
    for (rep, val) in f.support() {
        let r = vec_to_f64(rep);
        let v = val.to_complex() * pre;
        max_amp = max_amp.max(v.norm());
        let nr = norm2(&r);
        cosets.push((r, v, nr));
    }
    SupportSum { lattice_box: LatticeBox::new(basis), cosets, max_amp }
}

pub const SQRT_TWO_PI: f64 = 2.5066282746310002;

#[derive(Clone, Copy, Debug)]
pub struct PairingValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Pair the distribution with a Gaussian: sum of `f(ξ)·φ(√(2π)ξ)` over all
/// support points with `‖√(2π)ξ‖ ≤ radius`, plus a tail bound.  The bound
/// uses `|φ(x)| ≤ exp(−λ‖x‖² + β‖x‖)` with `λ` the smallest eigenvalue of
/// the quadratic part and shell-wise lattice point counts.
pub fn pair_poisson_gaussian(
    f: &PoissonDistribution,
    phi: &GaussianSpec,
    radius: f64,
    tol: f64,
) -> Result<PairingValue> {
    let data = f.data();
    assert_eq!(data.dim(), phi.dim(), "dimension mismatch in pairing");
    if data.is_zero() {
        return Ok(PairingValue { value: Complex64::ZERO, tail_bound: 0.0 });
    }
    let sums = support_sum(data);
    let lambda = min_symmetric_eigenvalue(phi.quadratic());
    let beta = norm2(&phi.linear().iter().map(|c| c.re).collect::<Vec<_>>());
    // |φ| must already be decaying at the cut radius.
    if radius <= beta / lambda {
        return Err(Error::RadiusTooSmall { radius, tail: f64::INFINITY, tol });
    }
    let mut tail = 0.0;
    for m in 0.. {
        let t = radius + m as f64;
        let exponent = -lambda * t * t + beta * t;
        let count: f64 = sums
            .cosets
            .iter()
            .map(|(_, _, nr)| sums.lattice_box.count_bound(*nr, (t + 1.0) / SQRT_TWO_PI))
            .sum();
        let term = sums.max_amp * count * exponent.exp();
        tail += term;
        if term < tol * 1e-9 && m >= 4 {
            break;
        }
        if m > 4000 {
            return Err(Error::RadiusTooSmall { radius, tail: f64::INFINITY, tol });
        }
    }
    if !(tail < tol) {
        return Err(Error::RadiusTooSmall { radius, tail, tol });
    }
    let mut value = Complex64::ZERO;
    for (rep, v, _) in &sums.cosets {
        for xi in sums.lattice_box.points_within(rep, radius / SQRT_TWO_PI)? {
            let x: Vec<f64> = xi.iter().map(|c| c * SQRT_TWO_PI).collect();
            value += v * phi.eval(&x);
        }
    }
    Ok(PairingValue { value, tail_bound: tail })
}

/// Theta series `θ(f, z) = Σ_ξ f(ξ)·exp(πi·ξ·z·ξᵗ)`, truncated once the
/// positive-definite imaginary part pushes the tail below `tol`.
pub fn theta_with_tail(f: &MElement, z: &SiegelPoint, tol: f64) -> Result<(Complex64, f64)> {
    assert_eq!(f.dim(), z.n(), "dimension mismatch in theta series");
    assert!(tol > 0.0, "tolerance must be positive");
    if f.is_zero() {
        return Ok((Complex64::ZERO, 0.0));
    }
    let sums = support_sum(f);
    let lambda_y = min_symmetric_eigenvalue(&z.im());
    debug_assert!(lambda_y > 0.0, "Siegel point invariant");

    let max_rep_norm = sums
        .cosets
        .iter()
        .map(|(_, _, nr)| *nr)
        .fold(0.0f64, f64::max);
    let mut radius =
        max_rep_norm + 1.0 + ((sums.max_amp / tol).max(1.0).ln() / (PI * lambda_y)).sqrt();
    let tail_at = |r: f64| -> f64 {
        let mut tail = 0.0;
        for m in 0..4000 {
            let t = r + m as f64;
            let count: f64 = sums
                .cosets
                .iter()
                .map(|(_, _, nr)| sums.lattice_box.count_bound(*nr, t + 1.0))
                .sum();
            let term = sums.max_amp * count * (-PI * lambda_y * t * t).exp();
            tail += term;
            if term < tol * 1e-9 && m >= 4 {
                break;
            }
        }
        tail
    };
    let mut tail = tail_at(radius);
    let mut grow = 0;
    while tail >= tol {
        radius += 1.0;
        tail = tail_at(radius);
        grow += 1;
        if grow > 300 {
            return Err(Error::Usage("theta truncation failed to converge".into()));
        }
    }

    let zc = z.z();
    let n = f.dim();
    let mut value = Complex64::ZERO;
    for (rep, v, _) in &sums.cosets {
        for xi in sums.lattice_box.points_within(rep, radius)? {
            let mut s = Complex64::ZERO;
            for i in 0..n {
                for j in 0..n {
                    s += zc[(i, j)] * (xi[i] * xi[j]);
                }
            }
            value += v * (Complex64::new(0.0, PI) * s).exp();
        }
    }
    Ok((value, tail))
}

pub fn theta(f: &MElement, z: &SiegelPoint, tol: f64) -> Result<Complex64> {
    theta_with_tail(f, z, tol).map(|(v, _)| v)
}

/// Weight-1/2 transform of a Siegel point: `z ↦ (A + zC)^{-1}(B + zD)` with
/// automorphy factor `det(A + zC)^{-1/2}` (principal branch).  A right
/// action: transforming by `g` then `h` lands at the transform of `g·h`.
pub fn t_half_transform(g: &SpMatrix, z: &SiegelPoint) -> Result<(SiegelPoint, Complex64)> {
    assert_eq!(g.n(), z.n(), "dimension mismatch in Siegel transform");
    let (a, b, c, d) = g.blocks();
    let to_c = |m: &QMat| qmat_to_f64(m).map(|x| Complex64::new(x, 0.0));
    let (a, b, c, d) = (to_c(&a), to_c(&b), to_c(&c), to_c(&d));
    let m = &a + z.z() * &c;
    let det = m.determinant();
    if det.norm() < 1e-12 {
        return Err(Error::SingularAutomorphyFactor);
    }
    let rhs = &b + z.z() * &d;
    let solved = m
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularAutomorphyFactor)?;
    let symmetrized = (&solved + solved.transpose()) * Complex64::new(0.5, 0.0);
    let image = SiegelPoint::new(symmetrized)?;
    let factor = det.sqrt().inv();
    Ok((image, factor))
}

#[derive(Clone, Debug)]
pub struct ModularityReport {
    /// Per-sample `θ(f,z) / (det(A+zC)^{-1/2}·θ(f, g·z))`.
    pub raw_ratios: Vec<Complex64>,
    /// The raw ratio is the same at every sample.
    pub constant: bool,
    /// The common ratio is an 8th root of unity.
    pub eighth_root: bool,
    /// All raw ratios are 1 (the branch happens to be exact).
    pub raw_is_one: bool,
    /// Vacuum-calibrated 8th root: the raw ratio of `indicator(Zⁿ,0)` at a
    /// reference point, snapped to the nearest 8th root of unity.
    pub lambda: Complex64,
    /// Distance from the vacuum ratio to the snapped root.
    pub lambda_snap_error: f64,
    /// `raw_ratio / lambda` per sample; 1 exactly when `f` is fixed by the
    /// vacuum-normalized action.
    pub normalized_ratios: Vec<Complex64>,
    pub normalized_is_one: bool,
    /// Projective modularity: constant ratio lying on the 8th roots.
    pub pass: bool,
}

/// Compare `θ(f, z)` against `factor(g,z)·θ(f, g·z)` across sample points.
pub fn modularity_check(
    f: &MElement,
    g: &SpMatrix,
    samples: &[SiegelPoint],
    tol: f64,
) -> Result<ModularityReport> {
    if !g.matrix().is_integral() {
        return Err(Error::NotIntegral);
    }
    if samples.is_empty() {
        return Err(Error::Usage("modularity check requires at least one sample".into()));
    }
    let inner_tol = (tol * 1e-3).max(1e-14);
    let ratio_at = |h: &MElement, z: &SiegelPoint| -> Result<Complex64> {
        let (image, factor) = t_half_transform(g, z)?;
        let lhs = theta(h, z, inner_tol)?;
        let rhs = factor * theta(h, &image, inner_tol)?;
        if rhs.norm() < 1e-13 {
            return Err(Error::Usage("theta series vanishes at a sample point".into()));
        }
        Ok(lhs / rhs)
    };

    let mut raw_ratios = Vec::with_capacity(samples.len());
    for z in samples {
        raw_ratios.push(ratio_at(f, z)?);
    }
    let r0 = raw_ratios[0];
    let constant = raw_ratios
        .iter()
        .all(|r| (r - r0).norm() <= tol * (1.0 + r0.norm()));
    let eighth_root = (r0.powi(8) - 1.0).norm() <= 16.0 * tol;
    let raw_is_one = raw_ratios.iter().all(|r| (r - 1.0).norm() <= tol);

    // Calibrate the branch against the vacuum at an independent point.
    let n = g.n();
    let vacuum = MElement::standard_indicator(n);
    let z_ref = SiegelPoint::diagonal(n, Complex64::new(0.0, 1.37))?;
    let vacuum_ratio = ratio_at(&vacuum, &z_ref)?;
    let (lambda, lambda_snap_error) = (0..8)
        .map(|k| Complex64::from_polar(1.0, PI * k as f64 / 4.0))
        .map(|root| (root, (vacuum_ratio - root).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("eight candidate roots");

    let normalized_ratios: Vec<Complex64> = raw_ratios.iter().map(|r| r / lambda).collect();
    let normalized_is_one = normalized_ratios
        .iter()
        .all(|r| (r - 1.0).norm() <= tol);
    Ok(ModularityReport {
        raw_ratios,
        constant,
        eighth_root,
        raw_is_one,
        lambda,
        lambda_snap_error,
        normalized_ratios,
        normalized_is_one,
        pass: constant && eighth_root,
    })
}

/// Scalar wrapper so exact values can be compared with numeric ones.
pub fn scalar_to_complex(s: &Scalar) -> Complex64 {
    s.to_complex()
}
