mod common;

use common::*;
use garden_core::hunt::{
    hawaii_check, hawaii_exhaustive, hawaii_reduced, hawaii_wronskian, hunt_driver, qp_critical_count,
    qp_critical_count_numeric, qp_numerator, Distribution, Target, TrialConfig,
};
use garden_core::poly::{isolate_real_roots, rat_to_f64, real_root_count_with_multiplicity, refine_square_free, RealPoly, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};

fn nonzero(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    loop {
        let v = rng.gen_range(lo..=hi);
        if v != 0 {
            return v;
        }
    }
}

/// Monic quadratics `x² + bx + c` with `b² < 4c`.
fn random_quads(rng: &mut ChaCha8Rng, n: usize) -> Vec<RealPoly> {
    (0..n)
        .map(|_| {
            let b = rng.gen_range(-4..=4i64);
            let c = b * b / 4 + rng.gen_range(1..=5);
            rp(&[c, b, 1])
        })
        .collect()
}

/// Sign changes of `f′` for `f = Σ cᵢ Pᵢ^α`, written out independently in
/// `f64`, over `x = tan θ` on a uniform grid.
fn sampled_sign_changes(c: &[f64], quads: &[RealPoly], alpha: f64, samples: usize) -> usize {
    let fq: Vec<Vec<f64>> = quads.iter().map(|q| q.coeffs().iter().map(rat_to_f64).collect()).collect();
    let df = |x: f64| -> f64 {
        let mut s = 0.0;
        for (ci, q) in c.iter().zip(&fq) {
            let p = q[0] + x * (q[1] + x);
            s += ci * alpha * (2.0 * x + q[1]) * p.powf(alpha - 1.0);
        }
        s
    };
    let mut out = 0;
    let mut prev = 0.0f64;
    for k in 1..samples {
        let v = df((-FRAC_PI_2 + PI * k as f64 / samples as f64).tan());
        if v != 0.0 && prev != 0.0 && v.signum() != prev.signum() {
            out += 1;
        }
        if v != 0.0 {
            prev = v;
        }
    }
    out
}

/// Real roots of a square-free polynomial as angles `atan x`.
fn root_angles(p: &RealPoly) -> Vec<f64> {
    let width = Rational::new(1.into(), (1u64 << 50).into());
    isolate_real_roots(p)
        .unwrap()
        .iter()
        .map(|iv| rat_to_f64(&refine_square_free(p, iv, &width).midpoint()).atan())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hawaii_counts_ignore_affine_changes(seed in any::<u64>(), d in 1usize..=8, c in -5i64..=5, num in 1i64..=5, den in 1i64..=4, neg in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, d, 6);
        let base = hawaii_check(&p).unwrap();
        let lambda = r(if neg { -num } else { num }, den);
        prop_assert_eq!(hawaii_check(&p.shift(&r(c, 1))).unwrap(), base);
        prop_assert_eq!(hawaii_check(&p.compose_affine(&lambda, &r(0, 1))).unwrap(), base);
        prop_assert_eq!(hawaii_check(&p.compose_affine(&lambda, &r(c, 3))).unwrap(), base);
        prop_assert_eq!(hawaii_check(&p.scale(&lambda)).unwrap(), base);
    }

    #[test]
    fn hawaii_parities(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, d, 6);
        let h = hawaii_check(&p).unwrap();
        prop_assert_eq!(h.two_s % 2, 0);
        let w = hawaii_reduced(&p);
        let deg = w.degree().unwrap();
        // nonreal zeros pair off
        prop_assert_eq!(h.w_real % 2, deg % 2);
        let isolated: usize = if w.is_constant() { 0 } else { isolate_real_roots(&w).unwrap().iter().map(|iv| iv.multiplicity).sum() };
        prop_assert_eq!(h.w_real, isolated);
        // the removed factor gcd(P, P′)² holds exactly the real zeros W shares with P
        let full = hawaii_wronskian(&p);
        let g = p.gcd(&p.derivative());
        let shared = if g.is_constant() { 0 } else { 2 * real_root_count_with_multiplicity(&g).unwrap() };
        let total = if full.is_constant() { 0 } else { real_root_count_with_multiplicity(&full).unwrap() };
        prop_assert_eq!(total, h.w_real + shared);
    }

    #[test]
    fn qp_matches_sampled_derivative(seed in any::<u64>(), n in 1usize..=3, alpha in prop::sample::select(vec![-1i64, -2, -3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let quads = random_quads(&mut rng, n);
        let c: Vec<i64> = (0..n).map(|_| nonzero(&mut rng, -5, 5)).collect();
        let cr: Vec<Rational> = c.iter().map(|&v| r(v, 1)).collect();
        let num = qp_numerator(&cr, &quads, alpha).unwrap();
        prop_assume!(!num.is_zero() && !num.is_constant());
        // the grid only sees well separated simple roots
        prop_assume!(num.gcd(&num.derivative()).is_constant());
        let samples = 40_000;
        let step = PI / samples as f64;
        let mut t = root_angles(&num);
        t.sort_by(f64::total_cmp);
        prop_assume!(t.windows(2).all(|w| w[1] - w[0] > 20.0 * step));
        prop_assume!(t.iter().all(|a| FRAC_PI_2 - a.abs() > 20.0 * step));
        let exact = qp_critical_count(&cr, &quads, alpha).unwrap();
        let cf: Vec<f64> = c.iter().map(|&v| v as f64).collect();
        prop_assert_eq!(exact.count, sampled_sign_changes(&cf, &quads, alpha as f64, samples));
        prop_assert_eq!(exact.count, qp_critical_count_numeric(&cf, &quads, alpha as f64, samples).unwrap().count);
        prop_assert_eq!(exact.bound, 2 * n - 1);
    }

    #[test]
    fn qp_same_sign_count_is_odd(seed in any::<u64>(), n in 1usize..=4, neg in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let quads = random_quads(&mut rng, n);
        let s = if neg { -1 } else { 1 };
        let c: Vec<Rational> = (0..n).map(|_| r(s * rng.gen_range(1..=6), rng.gen_range(1..=3))).collect();
        prop_assert_eq!(qp_critical_count(&c, &quads, -1).unwrap().count % 2, 1);
    }
}

#[test]
fn hunt_reports_are_reproducible() {
    for (target, max_degree) in [(Target::Hawaii, 8), (Target::Qp, 3), (Target::Chords, 4)] {
        let cfg = TrialConfig {
            max_degree,
            trials: if target == Target::Chords { 20 } else { 200 },
            seed: 0xfeed,
            alphas: vec![-1.0, -2.0, -1.5],
            ..TrialConfig::default()
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = serde_json::to_string(&one.install(|| hunt_driver(target, &cfg))).unwrap();
        let b = serde_json::to_string(&four.install(|| hunt_driver(target, &cfg))).unwrap();
        let c = serde_json::to_string(&hunt_driver(target, &cfg)).unwrap();
        assert_eq!(a, b, "{target}");
        assert_eq!(a, c, "{target}");
        let other = serde_json::to_string(&hunt_driver(target, &TrialConfig { seed: 0xbeef, ..cfg.clone() })).unwrap();
        assert_ne!(a, other, "{target}");
    }
}

#[test]
fn hawaii_runs_find_nothing() {
    for d in 1..=3 {
        let r = hawaii_exhaustive(d, 3);
        assert_eq!(r.trials, 7usize.pow(d as u32) * 6);
        assert_eq!(r.errors, 0);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }
    let cfg = TrialConfig { max_degree: 8, trials: 2000, seed: 11, distribution: Distribution::Dyadic, ..TrialConfig::default() };
    let r = hunt_driver(Target::Hawaii, &cfg);
    assert_eq!((r.completed, r.errors), (2000, 0));
    assert!(r.violations.is_empty());
    assert!(!r.fails_policy());
}
