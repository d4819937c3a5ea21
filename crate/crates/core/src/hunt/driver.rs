//! Seeded, parallel random search with exact re-verification of anything
//! that looks like a counterexample.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    chord_zero_check, chord_zero_check_with, hawaii_check, hawaii_recount, qp_critical_count, qp_critical_count_numeric,
    qp_numerator, HuntError, DEFAULT_CHORD_TOL,
};
use crate::garden::TraceOptions;
use crate::poly::{isolate_real_roots, rat, rat_to_f64, RealPoly, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Hawaii,
    Chords,
    Qp,
}

impl FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hawaii" => Ok(Target::Hawaii),
            "chords" => Ok(Target::Chords),
            "qp" => Ok(Target::Qp),
            _ => Err(format!("unknown target `{s}` (expected hawaii, chords or qp)")),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Hawaii => "hawaii",
            Target::Chords => "chords",
            Target::Qp => "qp",
        })
    }
}

/// How random coefficients are drawn from `[−B, B]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    /// Integers.
    Uniform,
    /// Dyadic rationals `k/2^e` with `e ≤ 3`.
    Dyadic,
}

impl FromStr for Distribution {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "dyadic" => Ok(Distribution::Dyadic),
            _ => Err(format!("unknown distribution `{s}` (expected uniform or dyadic)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialConfig {
    /// Largest degree, or largest `n` for QP.
    pub max_degree: usize,
    pub distribution: Distribution,
    pub bound: i64,
    pub trials: usize,
    pub seed: u64,
    /// Exponents tried for QP; integers take the exact path.
    pub alphas: Vec<f64>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            max_degree: 6,
            distribution: Distribution::Uniform,
            bound: 10,
            trials: 100,
            seed: 0,
            alphas: vec![-1.0],
        }
    }
}

/// A verified counterexample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub input: String,
    pub exact_counts: BTreeMap<String, usize>,
    /// False when the counts come from sampling or tracing.
    pub exact: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Stats {
    pub max: BTreeMap<String, usize>,
    pub histograms: BTreeMap<String, BTreeMap<usize, usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub target: Target,
    pub config: TrialConfig,
    pub trials: usize,
    pub completed: usize,
    /// Inputs outside the conjecture's hypotheses.
    pub skipped: usize,
    pub errors: usize,
    /// The first few error messages.
    pub error_samples: Vec<String>,
    /// Completed trials whose counts are not exact.
    pub inexact: usize,
    pub violations: Vec<Certificate>,
    pub stats: Stats,
}

impl ConjectureReport {
    /// Whether the findings should fail a run: only a Hawaii violation in
    /// degree at most 6 does, everything else is reported as a finding.
    pub fn fails_policy(&self) -> bool {
        self.target == Target::Hawaii
            && self.violations.iter().any(|c| c.exact_counts.get("degree").is_some_and(|&d| d <= 6))
    }
}

enum Outcome {
    Done { counts: BTreeMap<String, usize>, violation: Option<Certificate>, exact: bool },
    Skipped,
    Failed(String),
}

fn counts(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn sample_coeff(rng: &mut ChaCha8Rng, dist: Distribution, bound: i64) -> Rational {
    match dist {
        Distribution::Uniform => rat(rng.gen_range(-bound..=bound)),
        Distribution::Dyadic => {
            let den = 1i64 << rng.gen_range(0..=3u32);
            Rational::new(BigInt::from(rng.gen_range(-bound * den..=bound * den)), BigInt::from(den))
        }
    }
}

fn sample_nonzero(rng: &mut ChaCha8Rng, dist: Distribution, bound: i64) -> Rational {
    loop {
        let c = sample_coeff(rng, dist, bound);
        if !c.is_zero() {
            return c;
        }
    }
}

fn sample_poly(rng: &mut ChaCha8Rng, degree: usize, dist: Distribution, bound: i64) -> RealPoly {
    let mut c: Vec<Rational> = (0..degree).map(|_| sample_coeff(rng, dist, bound)).collect();
    c.push(sample_nonzero(rng, dist, bound));
    RealPoly::new(c)
}

fn hawaii_trial(p: &RealPoly) -> Outcome {
    let d = p.degree().unwrap_or(0);
    match hawaii_check(p) {
        Err(e) => Outcome::Failed(e.to_string()),
        Ok(r) => {
            let violation = if r.pass {
                None
            } else {
                match hawaii_recount(p) {
                    Ok(v) if v == r => Some(Certificate {
                        input: format!("P = {p}"),
                        exact_counts: counts(&[("degree", d), ("two_s", r.two_s), ("w_real", r.w_real)]),
                        exact: true,
                    }),
                    Ok(v) => return Outcome::Failed(format!("P = {p}: recount disagrees ({r:?} vs {v:?})")),
                    Err(e) => return Outcome::Failed(e.to_string()),
                }
            };
            Outcome::Done {
                counts: counts(&[
                    ("degree", d),
                    ("two_s", r.two_s),
                    ("w_real", r.w_real),
                    ("slack", r.two_s.saturating_sub(r.w_real)),
                ]),
                violation,
                exact: true,
            }
        }
    }
}

fn chords_trial(p: &RealPoly) -> Outcome {
    let d = p.degree().unwrap_or(0);
    match chord_zero_check(p, DEFAULT_CHORD_TOL) {
        Err(HuntError::NotGeneric(_)) => Outcome::Skipped,
        Err(e) => Outcome::Failed(format!("P = {p}: {e}")),
        Ok(r) => {
            let hits = r.chords.iter().filter(|c| c.hit).count();
            let violation = if r.pass {
                None
            } else {
                // retrace finer before believing it
                let fine = TraceOptions { step: 2.5e-4, corrector_tol: 1e-12, ..TraceOptions::default() };
                match chord_zero_check_with(p, DEFAULT_CHORD_TOL, &fine) {
                    Ok(f) if !f.pass => Some(Certificate {
                        input: format!("P = {p}"),
                        exact_counts: counts(&[
                            ("degree", d),
                            ("chords", f.chords.len()),
                            ("hits", f.chords.iter().filter(|c| c.hit).count()),
                        ]),
                        exact: false,
                    }),
                    Ok(_) => None,
                    Err(e) => return Outcome::Failed(format!("P = {p}: {e}")),
                }
            };
            Outcome::Done {
                counts: counts(&[("degree", d), ("chords", r.chords.len()), ("hits", hits)]),
                violation,
                exact: false,
            }
        }
    }
}

fn qp_trial(rng: &mut ChaCha8Rng, cfg: &TrialConfig) -> Outcome {
    let n = rng.gen_range(1..=cfg.max_degree.max(1));
    let alpha = if cfg.alphas.is_empty() { -1.0 } else { cfg.alphas[rng.gen_range(0..cfg.alphas.len())] };
    let mut quads = Vec::with_capacity(n);
    for _ in 0..n {
        let b = sample_coeff(rng, cfg.distribution, cfg.bound);
        let gap = sample_nonzero(rng, cfg.distribution, cfg.bound.max(1));
        let c0 = &b * &b / rat(4) + num_traits::Signed::abs(&gap);
        quads.push(RealPoly::new(vec![c0, b, rat(1)]));
    }
    let c: Vec<Rational> = (0..n).map(|_| sample_nonzero(rng, cfg.distribution, cfg.bound)).collect();
    let input = format!(
        "c = [{}]; quads = [{}]; alpha = {alpha}",
        c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "),
        quads.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")
    );
    let exact = alpha.fract() == 0.0;
    let result = if exact {
        qp_critical_count(&c, &quads, alpha as i64)
    } else {
        let cf: Vec<f64> = c.iter().map(rat_to_f64).collect();
        qp_critical_count_numeric(&cf, &quads, alpha, 100_000)
    };
    match result {
        Err(HuntError::Degenerate) => Outcome::Skipped,
        Err(e) => Outcome::Failed(format!("{input}: {e}")),
        Ok(r) => {
            let violation = if r.pass {
                None
            } else if exact {
                let recount = qp_numerator(&c, &quads, alpha as i64)
                    .map_err(|e| e.to_string())
                    .and_then(|num| isolate_real_roots(&num).map_err(|e| e.to_string()))
                    .map(|ivs| ivs.iter().map(|iv| iv.multiplicity).sum::<usize>());
                match recount {
                    Ok(k) if k == r.count => Some(Certificate {
                        input: input.clone(),
                        exact_counts: counts(&[("n", n), ("critical", r.count), ("bound", r.bound)]),
                        exact: true,
                    }),
                    Ok(k) => return Outcome::Failed(format!("{input}: recount disagrees ({} vs {k})", r.count)),
                    Err(e) => return Outcome::Failed(e),
                }
            } else {
                Some(Certificate {
                    input: input.clone(),
                    exact_counts: counts(&[("n", n), ("critical", r.count), ("bound", r.bound)]),
                    exact: false,
                })
            };
            Outcome::Done { counts: counts(&[("n", n), ("critical", r.count)]), violation, exact }
        }
    }
}

fn trial(target: Target, cfg: &TrialConfig, index: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    match target {
        Target::Hawaii => {
            let d = rng.gen_range(1..=cfg.max_degree.max(1));
            hawaii_trial(&sample_poly(&mut rng, d, cfg.distribution, cfg.bound))
        }
        Target::Chords => {
            if cfg.max_degree < 2 {
                return Outcome::Skipped;
            }
            let d = rng.gen_range(2..=cfg.max_degree);
            chords_trial(&sample_poly(&mut rng, d, cfg.distribution, cfg.bound))
        }
        Target::Qp => qp_trial(&mut rng, cfg),
    }
}

fn collect(target: Target, config: TrialConfig, outcomes: Vec<Outcome>) -> ConjectureReport {
    let mut report = ConjectureReport {
        target,
        trials: outcomes.len(),
        config,
        completed: 0,
        skipped: 0,
        errors: 0,
        error_samples: Vec::new(),
        inexact: 0,
        violations: Vec::new(),
        stats: Stats::default(),
    };
    for o in outcomes {
        match o {
            Outcome::Skipped => report.skipped += 1,
            Outcome::Failed(msg) => {
                report.errors += 1;
                if report.error_samples.len() < 10 {
                    report.error_samples.push(msg);
                }
            }
            Outcome::Done { counts, violation, exact } => {
                report.completed += 1;
                if !exact {
                    report.inexact += 1;
                }
                for (k, v) in counts {
                    let m = report.stats.max.entry(k.clone()).or_insert(0);
                    *m = (*m).max(v);
                    *report.stats.histograms.entry(k).or_default().entry(v).or_insert(0) += 1;
                }
                report.violations.extend(violation);
            }
        }
    }
    report
}

/// Runs `cfg.trials` seeded trials in parallel on the current rayon pool.
/// Trial `i` draws from its own ChaCha stream, so the report depends only
/// on the configuration.
pub fn hunt_driver(target: Target, cfg: &TrialConfig) -> ConjectureReport {
    let outcomes: Vec<Outcome> = (0..cfg.trials).into_par_iter().map(|i| trial(target, cfg, i)).collect();
    collect(target, cfg.clone(), outcomes)
}

/// Every integer polynomial of exact degree `degree` with coefficients in
/// `[−bound, bound]`.
pub fn hawaii_exhaustive(degree: usize, bound: i64) -> ConjectureReport {
    let width = (2 * bound + 1) as usize;
    let total = width.pow(degree as u32) * (2 * bound) as usize;
    let outcomes: Vec<Outcome> = (0..total)
        .into_par_iter()
        .map(|mut k| {
            let mut c = Vec::with_capacity(degree + 1);
            for _ in 0..degree {
                c.push(rat((k % width) as i64 - bound));
                k /= width;
            }
            // leading coefficient skips zero
            let lead = k as i64 - bound;
            c.push(rat(if lead >= 0 { lead + 1 } else { lead }));
            hawaii_trial(&RealPoly::new(c))
        })
        .collect();
    let config = TrialConfig {
        max_degree: degree,
        distribution: Distribution::Uniform,
        bound,
        trials: total,
        seed: 0,
        alphas: Vec::new(),
    };
    collect(Target::Hawaii, config, outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_across_pools() {
        let cfg = TrialConfig { trials: 40, seed: 7, ..TrialConfig::default() };
        let a = hunt_driver(Target::Hawaii, &cfg);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| hunt_driver(Target::Hawaii, &cfg));
        assert_eq!(a, b);
        assert_eq!(a.completed, 40);
        assert!(a.violations.is_empty());
    }

    #[test]
    fn qp_hunt_runs() {
        let cfg = TrialConfig { trials: 30, max_degree: 3, bound: 5, alphas: vec![-1.0, -2.0, -1.5], ..TrialConfig::default() };
        let r = hunt_driver(Target::Qp, &cfg);
        assert_eq!(r.completed + r.skipped + r.errors, 30);
        assert_eq!(r.errors, 0, "{:?}", r.error_samples);
        assert!(r.inexact > 0);
    }

    #[test]
    fn exhaustive_counts_every_polynomial() {
        let r = hawaii_exhaustive(2, 1);
        assert_eq!(r.trials, 3 * 3 * 2);
        assert_eq!(r.completed, r.trials);
        assert!(!r.fails_policy());
    }

    #[test]
    fn parsing_targets() {
        assert_eq!("qp".parse::<Target>(), Ok(Target::Qp));
        assert!("nope".parse::<Target>().is_err());
        assert_eq!("dyadic".parse::<Distribution>(), Ok(Distribution::Dyadic));
    }
}
