//! End-to-end acceptance gate: ten numbered checks, each printing one line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use nalgebra::DMatrix;
use num::BigInt;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use qfock::bridge::{
    gaussian_fourier, modularity_check, pair_poisson_gaussian, theta, GaussianSpec,
    PoissonDistribution, SiegelPoint,
};
use qfock::congruence::{
    delta_normalized_apply, sample_generators, stabilizer_level, CongruenceSpec,
};
use qfock::heisenberg::{commutant_dimension, heis_act, heis_mul};
use qfock::lattice::{LatticePair, QLattice};
use qfock::rational::{rat, rat_int};
use qfock::weil::{covariance_check, parity, sp_factor, sp_factor_alt, weil_apply};
use qfock::{Error, MElement, NormFactor, Sampler, Scalar, SpMatrix};

const CAP: u64 = 10_000;

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn check(
        &mut self,
        number: usize,
        label: &str,
        budget: Duration,
        body: impl FnOnce() -> Result<(), String>,
    ) {
        let started = Instant::now();
        let outcome = body();
        let elapsed = started.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= budget {
                Ok(())
            } else {
                Err(format!("exceeded the {budget:?} budget (took {elapsed:?})"))
            }
        });
        match outcome {
            Ok(()) => println!("✓ criterion {number:2}: {label} PASS ({elapsed:.2?})"),
            Err(why) => {
                println!("✗ criterion {number:2}: {label} FAIL ({elapsed:.2?}): {why}");
                self.failures.push(format!("criterion {number}: {why}"));
            }
        }
    }
}

fn scalar_rat(q: qfock::Rat) -> Scalar {
    Scalar::new(&NormFactor::one(), qfock::CycloScalar::from_rat(q))
}

fn zeros(n: usize) -> Vec<qfock::Rat> {
    vec![rat_int(0); n]
}

/// Fourier of a lattice indicator is the measure times the dual indicator.
fn poisson_summation() -> Result<(), String> {
    let mut s = Sampler::new(101);
    for i in 0..20 {
        let n = 1 + i % 3;
        let l = s.lattice(n, 6);
        let got = weil_apply(&SpMatrix::j(n), &MElement::indicator(&l, &zeros(n)), CAP)
            .map_err(|e| format!("trial {i}: {e}"))?;
        let expected = MElement::indicator(&l.dual(), &zeros(n)).scale(&scalar_rat(l.mu()));
        if !got.equal_fn(&expected) {
            return Err(format!("trial {i}: transform of an indicator missed μ(L)·I(L°)"));
        }
    }
    Ok(())
}

/// Heisenberg covariance of the metaplectic action, exactly.
fn weil_covariance() -> Result<(), String> {
    let mut s = Sampler::new(102);
    for i in 0..75 {
        let n = if i < 50 { 1 } else { 2 };
        let g = s.symplectic(n, 6);
        let h = s.heis(n, 2, 4);
        let f = s.melement(n, 2, 2);
        match covariance_check(&g, &h, &f, CAP) {
            Ok(true) => {}
            Ok(false) => return Err(format!("trial {i}: covariance identity failed")),
            Err(e) => return Err(format!("trial {i}: {e}")),
        }
    }
    Ok(())
}

/// Different factorizations of the same matrix differ by one scalar that is
/// independent of the argument.
fn word_independence() -> Result<(), String> {
    let mut s = Sampler::new(103);
    for i in 0..20 {
        let n = 1 + i % 2;
        let g = s.symplectic(n, if n == 1 { 6 } else { 4 });
        let w1 = sp_factor(&g).map_err(|e| format!("trial {i}: {e}"))?;
        let w2 = sp_factor_alt(&g).map_err(|e| format!("trial {i}: {e}"))?;
        let mut lambda = None;
        for k in 0..3 {
            let f = s.melement(n, 2, 2);
            let a = w1.apply(&f, CAP).map_err(|e| format!("trial {i}.{k}: {e}"))?;
            let b = w2.apply(&f, CAP).map_err(|e| format!("trial {i}.{k}: {e}"))?;
            let l = a
                .projective_equal(&b)
                .ok_or_else(|| format!("trial {i}.{k}: factorizations differ"))?;
            match &lambda {
                None => lambda = Some(l),
                Some(prev) if *prev == l => {}
                Some(_) => return Err(format!("trial {i}.{k}: scalar depends on the argument")),
            }
        }
    }
    Ok(())
}

/// One-dimensional commutant (irreducibility) for every small pair.
fn commutant_is_scalar() -> Result<(), String> {
    for m in 1..=16i64 {
        let sup = QLattice::standard(1);
        let sub = QLattice::from_basis(vec![vec![rat_int(m)]]).expect("basis");
        let pair = LatticePair::new(sup, sub).expect("nested");
        match commutant_dimension(&pair, CAP) {
            Ok(1) => {}
            Ok(d) => return Err(format!("index {m}: commutant dimension {d}")),
            Err(e) => return Err(format!("index {m}: {e}")),
        }
        let scaled_sup = QLattice::from_basis(vec![vec![rat(2, 3)]]).expect("basis");
        let scaled_sub = QLattice::from_basis(vec![vec![rat(2 * m, 3)]]).expect("basis");
        let pair = LatticePair::new(scaled_sup, scaled_sub).expect("nested");
        match commutant_dimension(&pair, CAP) {
            Ok(1) => {}
            Ok(d) => return Err(format!("scaled index {m}: commutant dimension {d}")),
            Err(e) => return Err(format!("scaled index {m}: {e}")),
        }
    }
    let mut s = Sampler::new(104);
    for i in 0..10 {
        let pair = s.lattice_pair(2, 3, 16);
        match commutant_dimension(&pair, CAP) {
            Ok(1) => {}
            Ok(d) => {
                return Err(format!("random pair {i} (index {}): dimension {d}", pair.index()))
            }
            Err(e) => return Err(format!("random pair {i}: {e}")),
        }
    }
    Ok(())
}

/// The twisted translation action is an honest representation.
fn heisenberg_representation() -> Result<(), String> {
    let mut s = Sampler::new(105);
    for i in 0..100 {
        let n = 1 + i % 3;
        let h1 = s.heis(n, 2, 4);
        let h2 = s.heis(n, 2, 4);
        let f = s.melement(n, 2, 2);
        let lhs = heis_act(&h1, &heis_act(&h2, &f, CAP).map_err(|e| e.to_string())?, CAP)
            .map_err(|e| e.to_string())?;
        let rhs = heis_act(&heis_mul(&h1, &h2), &f, CAP).map_err(|e| e.to_string())?;
        if !lhs.equal_fn(&rhs) {
            return Err(format!("trial {i}: action is not multiplicative"));
        }
    }
    Ok(())
}

/// Vacuum-normalized operators form an honest (non-projective) action on
/// the even congruence subgroup, and fix the vacuum.  Draws whose coset
/// enumerations would exceed the per-dimension cap are rejected and redrawn
/// (deterministically); everything that runs is exact.
fn normalized_action() -> Result<(), String> {
    let mut s = Sampler::new(106);
    let mut done = 0usize;
    let mut attempt = 0u64;
    while done < 25 {
        if attempt > 150 {
            return Err("too many index-cap rejections while sampling pairs".into());
        }
        let n = 1 + done % 2;
        let cap = if n == 1 { CAP } else { 2_500 };
        let gens = sample_generators(&CongruenceSpec::gamma12(n), 2, 1, 9_000 + attempt)
            .map_err(|e| format!("pair {done}: {e}"))?;
        attempt += 1;
        let f = s.melement(n, 2, 2);
        let one_shot = match delta_normalized_apply(&gens[0].mul(&gens[1]), &f, cap) {
            Ok(v) => v,
            Err(Error::IndexOverflow { .. }) => continue,
            Err(e) => return Err(format!("pair {done}: {e}")),
        };
        let inner = match delta_normalized_apply(&gens[1], &f, cap) {
            Ok(v) => v,
            Err(Error::IndexOverflow { .. }) => continue,
            Err(e) => return Err(format!("pair {done}: {e}")),
        };
        let two_step = match delta_normalized_apply(&gens[0], &inner, cap) {
            Ok(v) => v,
            Err(Error::IndexOverflow { .. }) => continue,
            Err(e) => return Err(format!("pair {done}: {e}")),
        };
        if !one_shot.equal_fn(&two_step) {
            return Err(format!("pair {done}: normalized operators are not multiplicative"));
        }
        done += 1;
    }
    let mut done = 0usize;
    let mut attempt = 0u64;
    while done < 20 {
        if attempt > 100 {
            return Err("too many index-cap rejections while sampling elements".into());
        }
        let n = 1 + done % 2;
        let cap = if n == 1 { CAP } else { 2_500 };
        let g = &sample_generators(&CongruenceSpec::gamma12(n), 1, 1, 19_000 + attempt)
            .map_err(|e| format!("vacuum trial {done}: {e}"))?[0];
        attempt += 1;
        let delta = MElement::standard_indicator(n);
        match delta_normalized_apply(g, &delta, cap) {
            Ok(moved) if moved.equal_fn(&delta) => done += 1,
            Ok(_) => return Err(format!("vacuum trial {done}: the vacuum moved")),
            Err(Error::IndexOverflow { .. }) => continue,
            Err(e) => return Err(format!("vacuum trial {done}: {e}")),
        }
    }
    Ok(())
}

/// Level-group generators fix shifted indicators exactly (scalar one).
fn stabilizer_levels() -> Result<(), String> {
    for (den, expected_level, expected_modulus) in [(2i64, 2i64, 8i64), (3, 3, 18)] {
        let f = MElement::indicator(&QLattice::standard(1), &[rat(1, den)]);
        let report =
            stabilizer_level(&f, 100, 1, 7000 + den as u64, CAP).map_err(|e| e.to_string())?;
        if report.level != BigInt::from(expected_level) {
            return Err(format!("1/{den}: level {} instead of {expected_level}", report.level));
        }
        if report.modulus != BigInt::from(expected_modulus) {
            return Err(format!(
                "1/{den}: modulus {} instead of {expected_modulus}",
                report.modulus
            ));
        }
        if !report.all_fixed {
            let bad = report.trials.iter().filter(|t| !t.fixed).count();
            return Err(format!("1/{den}: {bad} sampled generators moved the element"));
        }
    }
    Ok(())
}

/// Weight-1/2 modularity of the vacuum theta series under the Fourier
/// generator, with the classical value at `z = i`.
fn theta_modularity() -> Result<(), String> {
    let f = MElement::standard_indicator(1);
    let samples: Vec<SiegelPoint> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&t| SiegelPoint::scalar(Complex64::new(0.0, t)).expect("upper half-plane"))
        .collect();
    let report =
        modularity_check(&f, &SpMatrix::j(1), &samples, 1e-8).map_err(|e| e.to_string())?;
    if !report.constant {
        return Err("automorphy ratio varies across the sample points".into());
    }
    if !report.eighth_root {
        return Err(format!("ratio {} is not an 8th root of unity", report.raw_ratios[0]));
    }
    if !report.normalized_is_one {
        return Err("normalized ratio differs from 1 beyond 1e-8".into());
    }
    let z = SiegelPoint::scalar(Complex64::new(0.0, 1.0)).expect("z = i");
    let v = theta(&f, &z, 1e-12).map_err(|e| e.to_string())?;
    let oracle = 1.0864348112133080145;
    if (v - oracle).norm() > 1e-10 {
        return Err(format!("theta at i is {v}, expected {oracle:.19}"));
    }
    Ok(())
}

/// The Fourier generator squares to parity and preserves the pairing.
fn fourier_square_and_pairing() -> Result<(), String> {
    let mut s = Sampler::new(109);
    for i in 0..30 {
        let n = 1 + i % 2;
        let j = SpMatrix::j(n);
        let f = s.melement(n, 2, 2);
        let g = s.melement(n, 2, 2);
        let ff = weil_apply(&j, &f, CAP).map_err(|e| e.to_string())?;
        let fff = weil_apply(&j, &ff, CAP).map_err(|e| e.to_string())?;
        if !fff.equal_fn(&parity(&f)) {
            return Err(format!("trial {i}: double transform is not the parity map"));
        }
        let fg = weil_apply(&j, &g, CAP).map_err(|e| e.to_string())?;
        let before = f.pairing(&g, CAP).map_err(|e| e.to_string())?;
        let after = ff.pairing(&fg, CAP).map_err(|e| e.to_string())?;
        if before != after {
            return Err(format!("trial {i}: pairing not preserved"));
        }
    }
    Ok(())
}

/// The lattice-sum pairing agrees with an independent brute-force double
/// loop to 1e-10.
fn gaussian_pairing_oracle() -> Result<(), String> {
    let mut s = Sampler::new(110);
    for i in 0..10 {
        let n = 1 + i % 2;
        let f = s.melement(n, 2, 2);
        // positive-definite quadratic part with a complex linear part
        let mut a = DMatrix::<f64>::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                a[(r, c)] = if r == c {
                    0.4 + 0.1 * s.int(0, 6) as f64
                } else {
                    0.05 * s.int(-2, 2) as f64
                };
            }
        }
        let a = (a.clone() + a.transpose()) * 0.5;
        let b: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(0.1 * s.int(-3, 3) as f64, 0.1 * s.int(-3, 3) as f64))
            .collect();
        let phi = GaussianSpec::new(a, b).map_err(|e| e.to_string())?;

        let got = pair_poisson_gaussian(&PoissonDistribution::new(f.clone()), &phi, 45.0, 1e-12)
            .map_err(|e| format!("trial {i}: {e}"))?
            .value;

        // Brute force: every support point rep + c·basis with |c_j| <= box,
        // summed directly from the definition.
        let box_radius: i64 = if n == 1 { 60 } else { 24 };
        let basis: Vec<Vec<f64>> = f
            .invariance()
            .basis()
            .rows
            .iter()
            .map(|row| row.iter().map(qfock::rational::rat_to_f64).collect())
            .collect();
        let pre = f.prefactor().to_f64();
        let mut oracle = Complex64::new(0.0, 0.0);
        for (rep, val) in f.support() {
            let rep_f: Vec<f64> = rep.iter().map(qfock::rational::rat_to_f64).collect();
            let v = val.to_complex() * pre;
            let mut counter = vec![-box_radius; n];
            'points: loop {
                let mut xi = rep_f.clone();
                for (c, row) in counter.iter().zip(&basis) {
                    for (x, e) in xi.iter_mut().zip(row) {
                        *x += *c as f64 * e;
                    }
                }
                let x: Vec<f64> = xi.iter().map(|t| t * (2.0 * PI).sqrt()).collect();
                oracle += v * phi.eval(&x);
                let mut pos = 0;
                loop {
                    if pos == n {
                        break 'points;
                    }
                    counter[pos] += 1;
                    if counter[pos] <= box_radius {
                        break;
                    }
                    counter[pos] = -box_radius;
                    pos += 1;
                }
            }
        }
        if (got - oracle).norm() > 1e-10 {
            return Err(format!("trial {i}: pairing {got} vs brute force {oracle}"));
        }

        // Cross-check the closed-form Gaussian transform on the same data.
        let (phi_hat, scale) = gaussian_fourier(&phi).map_err(|e| e.to_string())?;
        let ff = weil_apply(&SpMatrix::j(n), &f, CAP).map_err(|e| e.to_string())?;
        let lhs = pair_poisson_gaussian(&PoissonDistribution::new(ff), &phi, 45.0, 1e-11)
            .map_err(|e| format!("trial {i}: {e}"))?
            .value;
        let rhs = scale
            * pair_poisson_gaussian(&PoissonDistribution::new(f), &phi_hat, 45.0, 1e-11)
                .map_err(|e| format!("trial {i}: {e}"))?
                .value;
        if (lhs - rhs).norm() > 1e-9 {
            return Err(format!("trial {i}: transform identity {lhs} vs {rhs}"));
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let mut gate = Gate { failures: Vec::new() };
    gate.check(1, "lattice summation formula", Duration::from_secs(10), poisson_summation);
    gate.check(2, "Heisenberg covariance    ", Duration::from_secs(60), weil_covariance);
    gate.check(3, "factorization words      ", Duration::from_secs(60), word_independence);
    gate.check(4, "scalar commutant         ", Duration::from_secs(120), commutant_is_scalar);
    gate.check(5, "Heisenberg representation", Duration::from_secs(10), heisenberg_representation);
    gate.check(6, "normalized group action  ", Duration::from_secs(60), normalized_action);
    gate.check(7, "stabilizer levels        ", Duration::from_secs(60), stabilizer_levels);
    gate.check(8, "theta modularity         ", Duration::from_secs(5), theta_modularity);
    gate.check(9, "transform square, pairing", Duration::from_secs(10), fourier_square_and_pairing);
    gate.check(10, "Gaussian pairing oracle  ", Duration::from_secs(10), gaussian_pairing_oracle);
    assert!(gate.failures.is_empty(), "failed: {:#?}", gate.failures);
}
