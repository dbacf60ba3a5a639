//! Named verification suites: each runs a batch of randomized trials of one
//! identity and reports per-trial failures.  The same configuration always
//! produces the same report, byte for byte.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::bridge::{
    modularity_check, pair_poisson_gaussian, theta, GaussianSpec, PoissonDistribution,
    SiegelPoint,
};
use crate::bruhat::MElement;
use crate::congruence::{delta_normalized_apply, sample_generators, stabilizer_level, CongruenceSpec};
use crate::cyclo::CycloScalar;
use crate::error::{Error, Result};
use crate::heisenberg::{commutant_dimension, heis_act, heis_mul};
use crate::lattice::QLattice;
use crate::normfactor::{NormFactor, Scalar};
use crate::rational::{rat, Rat};
use crate::sample::Sampler;
use crate::weil::{covariance_check, parity, sp_factor, sp_factor_alt, weil_apply, SpMatrix};

/// One suite run.  `max_den` bounds the denominators of sampled matrices,
/// lattices and twists; sampled test vectors keep their invariance
/// denominators at ≤ 2 regardless, because the cyclotomic order (and with it
/// the cost of every exact operation) grows quadratically in that bound.
/// `tol` only matters for the numeric suites (`theta`, `bridge`).
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub suite: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_den: i64,
    pub index_cap: u64,
    pub tol: f64,
}

impl VerifyConfig {
    pub fn new(suite: &str) -> Self {
        VerifyConfig {
            suite: suite.into(),
            n: 1,
            trials: 8,
            seed: 0,
            max_den: 4,
            index_cap: crate::DEFAULT_INDEX_CAP,
            tol: 1e-7,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.trials == 0 || self.max_den < 1 || self.index_cap == 0 {
            return Err(Error::Usage(
                "dimension, trial count, denominator bound and index cap must be positive".into(),
            ));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Usage("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct TrialFailure {
    pub trial: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<TrialFailure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "trials": self.trials,
            "passes": self.passes,
            "failures": self.failures.iter().map(|f| {
                json!({ "trial": f.trial, "message": f.message })
            }).collect::<Vec<_>>(),
        })
    }
}

pub const SUITES: &[&str] = &[
    "poisson",
    "covariance",
    "words",
    "commutant",
    "heisenberg",
    "gamma12",
    "stabilizer",
    "theta",
    "fourier",
    "bridge",
];

type Trial = fn(&mut Sampler, usize, &VerifyConfig) -> std::result::Result<(), String>;

fn suite_fn(name: &str) -> Option<Trial> {
    Some(match name {
        "poisson" => trial_poisson,
        "covariance" => trial_covariance,
        "words" => trial_words,
        "commutant" => trial_commutant,
        "heisenberg" => trial_heisenberg,
        "gamma12" => trial_gamma12,
        "stabilizer" => trial_stabilizer,
        "theta" => trial_theta,
        "fourier" => trial_fourier,
        "bridge" => trial_bridge,
        _ => return None,
    })
}

pub fn run_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let trial = suite_fn(&cfg.suite)
        .ok_or_else(|| Error::Usage(format!("unknown suite `{}`; known: {SUITES:?}", cfg.suite)))?;
    let mut sampler = Sampler::new(cfg.seed);
    let mut failures = Vec::new();
    for i in 0..cfg.trials {
        if let Err(message) = trial(&mut sampler, i, cfg) {
            failures.push(TrialFailure { trial: i, message });
        }
    }
    Ok(SuiteReport {
        suite: cfg.suite.clone(),
        trials: cfg.trials,
        passes: cfg.trials - failures.len(),
        failures,
    })
}

fn scalar_rat(q: Rat) -> Scalar {
    Scalar::new(&NormFactor::one(), CycloScalar::from_rat(q))
}

/// `F(indicator of L) = μ(L)·(indicator of the dual)`, exactly.
fn trial_poisson(s: &mut Sampler, _i: usize, cfg: &VerifyConfig) -> std::result::Result<(), String> {
    let n = cfg.n;
    let l = s.lattice(n, cfg.max_den);
    let f = MElement::indicator(&l, &vec![rat(0, 1); n]);
    let got = weil_apply(&SpMatrix::j(n), &f, cfg.index_cap).map_err(|e| e.to_string())?;
    let dual = l.dual();
    let expected =
        MElement::indicator(&dual, &vec![rat(0, 1); n]).scale(&scalar_rat(l.mu()));
    if got.equal_fn(&expected) {
        Ok(())
    } else {
        Err(format!("Fourier of an indicator missed the dual indicator (lattice {:?})", l))
    }
}

/// `T(h)·We(g) = We(g)·T(σ(g)h)` exactly.
fn trial_covariance(s: &mut Sampler, _i: usize, cfg: &VerifyConfig) -> std::result::Result<(), String> {
    let n = cfg.n;
    let g = s.symplectic(n, cfg.max_den);
    let h = s.heis(n, 2, cfg.max_den);
    let f = s.melement(n, 2, 2);
    match covariance_check(&g, &h, &f, cfg.index_cap) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("covariance identity failed for {:?}", g)),
        Err(e) => Err(e.to_string()),
    }
}

/// Two different factorizations of `g` act by the same operator up to one
/// scalar that does not depend on the argument.
fn trial_words(s: &mut Sampler, _i: usize, cfg: &VerifyConfig) -> std::result::Result<(), String> {
    let n = cfg.n;
    let g = s.symplectic(n, if n == 1 { cfg.max_den } else { cfg.max_den.min(4) });
    let w1 = sp_factor(&g).map_err(|e| e.to_string())?;
    let w2 = sp_factor_alt(&g).map_err(|e| e.to_string())?;
    let mut lambda: Option<Scalar> = None;
    for _ in 0..3 {
        let f = s.melement(n, 2, 2);
        let a = w1.apply(&f, cfg.index_cap).map_err(|e| e.to_string())?;
        let b = w2.apply(&f, cfg.index_cap).map_err(|e| e.to_string())?;
        let l = a
            .projective_equal(&b)
            .ok_or_else(|| format!("factorizations of {:?} differ beyond a scalar", g))?;
        match &lambda {
            None => lambda = Some(l),
            Some(prev) => {
                if *prev != l {
                    return Err(format!("scalar between factorizations of {:?} varies", g));
                }
            }
        }
    }
    Ok(())
}

/// The commutant of the finite Heisenberg system attached to a nested pair
/// is one-dimensional.
fn trial_commutant(s: &mut Sampler, _i: usize, cfg: &VerifyConfig) -> std::result::Result<(), String> {
    let pair = s.lattice_pair(cfg.n, cfg.max_den, 16);
    match commutant_dimension(&pair, cfg.index_cap) {
        Ok(1) => Ok(()),
        Ok(d) => Err(format!("commutant dimension {d} for index {}", pair.index())),
        Err(e) => Err(e.to_string()),
    }
}

/// `T(h₁)T(h₂) = T(h₁h₂)` on random arguments, exactly.
fn trial_heisenberg(s: &mut Sampler, _i: usize, cfg: &VerifyConfig) -> std::result::Result<(), String> {
    let n = cfg.n;
    let h1 = s.heis(n, 2, cfg.max_den);
    let h2 = s.heis(n, 2, cfg.max_den);
    let f = s.melement(n, 2, 2);
    let lhs = heis_act(&h1, &heis_act(&h2, &f, cfg.index_cap).map_err(|e| e.to_string())?, cfg.index_cap)
        .map_err(|e| e.to_string())?;
    let rhs = heis_act(&heis_mul(&h1, &h2), &f, cfg.index_cap).map_err(|e| e.to_string())?;
    if lhs.equal_fn(&rhs) {
        Ok(())
    } else {
        Err("Heisenberg action is not multiplicative on a sample".into())
    }
}

/// The delta-normalized operators compose multiplicatively and fix the
/// vacuum.  A draw whose coset enumeration overflows the index cap is not a
/// falsification; it is rejected and redrawn a bounded number of times.
fn trial_gamma12(s: &mut Sampler, _i: usize, cfg: &VerifyConfig) -> std::result::Result<(), String> {
    let n = cfg.n;
    // Keep single applications at desk scale even when the configured cap is
    // generous: the cost of one exact operator application grows with the
    // enumeration size times the cyclotomic order.
    let cap = cfg.index_cap.min(2_500);
    for _ in 0..8 {
        let gens = sample_generators(&CongruenceSpec::gamma12(n), 2, 1, s.int(0, i64::MAX) as u64)
            .map_err(|e| e.to_string())?;
        let (g1, g2) = (&gens[0], &gens[1]);
        let delta = MElement::standard_indicator(n);
        let f = s.melement(n, 2, 2);
        let steps = || -> Result<(MElement, MElement, MElement)> {
            let fixed = delta_normalized_apply(g1, &delta, cap)?;
            let one_shot = delta_normalized_apply(&g1.mul(g2), &f, cap)?;
            let two_step = delta_normalized_apply(g1, &delta_normalized_apply(g2, &f, cap)?, cap)?;
            Ok((fixed, one_shot, two_step))
        };
        let (fixed, one_shot, two_step) = match steps() {
            Ok(v) => v,
            Err(Error::IndexOverflow { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        };
        if !fixed.equal_fn(&delta) {
            return Err(format!("normalized operator moved the vacuum for {:?}", g1));
        }
        return if one_shot.equal_fn(&two_step) {
            Ok(())
        } else {
            Err("normalized operators fail to compose multiplicatively".into())
        };
    }
    Err("every sampled pair exceeded the index cap".into())
}

/// Sampled generators of the level group fix a shifted indicator exactly.
fn trial_stabilizer(s: &mut Sampler, i: usize, cfg: &VerifyConfig) -> std::result::Result<(), String> {
    let den = 2 + (i % 2) as i64;
    let mut shift = vec![rat(0, 1); cfg.n];
    shift[0] = rat(1, den);
    let f = MElement::indicator(&QLattice::standard(cfg.n), &shift);
    let report = stabilizer_level(&f, 5, 1, s.int(0, i64::MAX) as u64, cfg.index_cap)
        .map_err(|e| e.to_string())?;
    if report.all_fixed {
        Ok(())
    } else {
        Err(format!("a sampled level-{} generator moved the element", report.modulus))
    }
}

/// Theta modularity for the Fourier generator: constant ratio on the 8th
/// roots of unity, equal to 1 after vacuum normalization; plus the classical
/// value at `z = i`.
fn trial_theta(s: &mut Sampler, i: usize, cfg: &VerifyConfig) -> std::result::Result<(), String> {
    // The vacuum is checked against the Fourier generator; the shifted
    // indicator is checked against a sampled element of its own stabilizer
    // level group (the Fourier generator moves it to a different element).
    let n = cfg.n;
    let (f, g) = if i % 2 == 0 {
        (MElement::standard_indicator(n), SpMatrix::j(n))
    } else {
        let mut shift = vec![rat(0, 1); n];
        shift[0] = rat(1, 2);
        let f = MElement::indicator(&QLattice::standard(n), &shift);
        let gens =
            sample_generators(&CongruenceSpec::u(n, 8), 1, 1, s.int(0, i64::MAX) as u64)
                .map_err(|e| e.to_string())?;
        (f, gens[0].clone())
    };
    let ts = [0.5 + 0.25 * s.int(0, 3) as f64, 1.0, 2.0];
    let samples: Vec<SiegelPoint> = ts
        .iter()
        .map(|&t| SiegelPoint::diagonal(n, Complex64::new(0.0, t)).expect("upper half-plane"))
        .collect();
    let report = modularity_check(&f, &g, &samples, cfg.tol).map_err(|e| e.to_string())?;
    if !report.pass || !report.normalized_is_one {
        return Err("theta modularity ratio is not a constant 8th root of unity".into());
    }
    let vacuum = MElement::standard_indicator(1);
    let z = SiegelPoint::scalar(Complex64::new(0.0, 1.0)).expect("z = i");
    let v = theta(&vacuum, &z, 1e-12).map_err(|e| e.to_string())?;
    let oracle = 1.0864348112133080145;
    if (v - oracle).norm() > 1e-10 {
        return Err(format!("theta value at i is {v}, expected {oracle}"));
    }
    Ok(())
}

/// The Fourier atom squares to parity and preserves the pairing.
fn trial_fourier(s: &mut Sampler, _i: usize, cfg: &VerifyConfig) -> std::result::Result<(), String> {
    let n = cfg.n;
    let f = s.melement(n, 2, 2);
    let g = s.melement(n, 2, 2);
    let j = SpMatrix::j(n);
    let ff = weil_apply(&j, &f, cfg.index_cap).map_err(|e| e.to_string())?;
    let fff = weil_apply(&j, &ff, cfg.index_cap).map_err(|e| e.to_string())?;
    if !fff.equal_fn(&parity(&f)) {
        return Err("Fourier atom squared is not the parity operator".into());
    }
    let fg = weil_apply(&j, &g, cfg.index_cap).map_err(|e| e.to_string())?;
    let before = f.pairing(&g, cfg.index_cap).map_err(|e| e.to_string())?;
    let after = ff.pairing(&fg, cfg.index_cap).map_err(|e| e.to_string())?;
    if before == after {
        Ok(())
    } else {
        Err("Fourier atom does not preserve the pairing".into())
    }
}

/// The numeric side: the Gaussian pairing matches the theta kernel, and the
/// Fourier transposition identity holds within the configured tolerance.
fn trial_bridge(s: &mut Sampler, _i: usize, cfg: &VerifyConfig) -> std::result::Result<(), String> {
    let n = cfg.n;
    let inner = (cfg.tol * 1e-2).max(1e-13);
    let mut basis = vec![vec![rat(0, 1); n]; n];
    let mut shift = vec![rat(0, 1); n];
    for j in 0..n {
        let den = s.int(1, 3);
        basis[j][j] = rat(den, 1);
        shift[j] = rat(s.int(0, den - 1), 1);
    }
    let f = MElement::indicator(&QLattice::from_basis(basis).expect("basis"), &shift);
    let t = 0.5 + 0.5 * s.int(0, 3) as f64;
    let z = SiegelPoint::diagonal(n, Complex64::new(0.0, t)).expect("upper half-plane");
    let lhs = theta(&f, &z, inner).map_err(|e| e.to_string())?;
    let phi = GaussianSpec::new(
        nalgebra::DMatrix::from_diagonal_element(n, n, t / 2.0),
        vec![Complex64::ZERO; n],
    )
    .map_err(|e| e.to_string())?;
    let rhs = pair_poisson_gaussian(&PoissonDistribution::new(f.clone()), &phi, 40.0, inner)
        .map_err(|e| e.to_string())?
        .value;
    if (lhs - rhs).norm() > cfg.tol {
        return Err(format!("theta kernel and Gaussian pairing disagree: {lhs} vs {rhs}"));
    }

    let (phi_hat, scale) = crate::bridge::gaussian_fourier(&phi).map_err(|e| e.to_string())?;
    let ff = weil_apply(&SpMatrix::j(n), &f, cfg.index_cap).map_err(|e| e.to_string())?;
    let lhs2 = pair_poisson_gaussian(&PoissonDistribution::new(ff), &phi, 40.0, inner)
        .map_err(|e| e.to_string())?
        .value;
    let rhs2 = scale
        * pair_poisson_gaussian(&PoissonDistribution::new(f), &phi_hat, 40.0, inner)
            .map_err(|e| e.to_string())?
            .value;
    if (lhs2 - rhs2).norm() > cfg.tol {
        return Err(format!("Fourier transposition identity off: {lhs2} vs {rhs2}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::to_json_string;

    fn cfg(suite: &str, n: usize, trials: usize) -> VerifyConfig {
        VerifyConfig {
            suite: suite.into(),
            n,
            trials,
            seed: 5,
            max_den: 4,
            index_cap: crate::DEFAULT_INDEX_CAP,
            tol: 1e-7,
        }
    }

    #[test]
    fn every_suite_passes_a_short_run() {
        for name in SUITES {
            for n in [1usize, 2] {
                let report = run_suite(&cfg(name, n, 2)).unwrap();
                assert!(
                    report.passed(),
                    "suite {name} at n = {n} failed: {:?}",
                    report.failures
                );
                assert_eq!(report.passes, 2);
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(&cfg("covariance", 1, 3)).unwrap();
        let b = run_suite(&cfg("covariance", 1, 3)).unwrap();
        assert_eq!(to_json_string(&a.to_json()), to_json_string(&b.to_json()));
    }

    #[test]
    fn unknown_suites_are_usage_errors() {
        assert!(matches!(
            run_suite(&cfg("nonsense", 1, 1)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn bad_bounds_are_usage_errors() {
        let mut c = cfg("poisson", 1, 1);
        c.n = 0;
        assert!(matches!(run_suite(&c), Err(Error::Usage(_))));
        let mut c = cfg("theta", 1, 1);
        c.tol = 0.0;
        assert!(matches!(run_suite(&c), Err(Error::Usage(_))));
    }
}
