mod common;

use std::collections::BTreeSet;

use common::*;
use garden_core::hb::{
    canonical_reduction, has_real_zero_mu, reduce_with, reduction_count_t, winding_number, zero_distribution, Color,
    ColoredArrangement, HbError,
};
use garden_core::poly::{RealPoly, Rational};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn color_word() -> impl Strategy<Value = Vec<Color>> {
    prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { Color::Black } else { Color::White }), 0..=20)
}

/// An instance with a zero-free neighbourhood of the axis, so the float
/// count is unambiguous.
fn callable_instance(rng: &mut ChaCha8Rng, n: usize) -> (RealPoly, RealPoly, garden_core::hb::Mu, usize) {
    loop {
        let (p, q) = random_hb_pair(rng, n, 5);
        let mu = random_mu(rng);
        if let Some(k) = upper_count_oracle(&p, &q, &mu) {
            return (p, q, mu, k);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_confluent(colors in color_word(), seed in any::<u64>()) {
        let expect = canonical_reduction(&ColoredArrangement::from_colors(colors.clone())).colors;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            prop_assert_eq!(&reduce_with(&colors, |k| rng.gen_range(0..k)), &expect);
        }
    }

    #[test]
    fn reduction_alternates(colors in color_word()) {
        let out = canonical_reduction(&ColoredArrangement::from_colors(colors.clone())).colors;
        prop_assert!(out.windows(2).all(|w| w[0] != w[1]));
        prop_assert_eq!(colors.len() % 2, out.len() % 2);
    }

    #[test]
    fn reduction_ignores_positions(colors in color_word(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = 0i64;
        let positions = |rng: &mut ChaCha8Rng, x: &mut i64| -> Vec<Rational> {
            colors.iter().map(|_| { *x += rng.gen_range(1..100); r(*x, 7) }).collect()
        };
        let a = ColoredArrangement { colors: colors.clone(), positions: Some(positions(&mut rng, &mut x)) };
        let b = ColoredArrangement { colors: colors.clone(), positions: Some(positions(&mut rng, &mut x)) };
        let (ra, rb) = (canonical_reduction(&a), canonical_reduction(&b));
        prop_assert_eq!(&ra.colors, &rb.colors);
        prop_assert_eq!(&ra.colors, &canonical_reduction(&ColoredArrangement::from_colors(colors.clone())).colors);
        // survivors keep their own positions
        let pa = ra.positions.unwrap();
        prop_assert!(pa.iter().all(|p| a.positions.as_ref().unwrap().contains(p)));
        prop_assert!(pa.windows(2).all(|w| w[0] < w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn winding_matches_float_roots(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q, mu, expect) = callable_instance(&mut rng, n);
        prop_assert_eq!(winding_number(&p, &q, &mu).unwrap(), expect);
        let d = zero_distribution(&p, &q, &mu).unwrap();
        prop_assert_eq!(d.sharp_plus + d.sharp_minus + d.real_count, n);
        prop_assert!(d.conjugate_flips);
        prop_assert_eq!(winding_number(&p, &q, &mu.conj()).unwrap(), n - expect);
    }

    #[test]
    fn magnitude_law(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = loop {
            let (p, q) = random_hb_pair(&mut rng, n, 5);
            // leading coefficient of Q positive, deg Q = n − 1
            if q.degree() == Some(n - 1) {
                let q = if *q.leading_coeff().unwrap() < r(0, 1) { q.scale(&r(-1, 1)) } else { q };
                break (p, q);
            }
        };
        let mu = random_mu(&mut rng);
        let d = zero_distribution(&p, &q, &mu).unwrap();
        let t = reduction_count_t(&p, &q).unwrap();
        prop_assert_eq!(d.t, Some(t));
        prop_assert_eq!((d.sharp_plus as i64 - d.sharp_minus as i64).unsigned_abs() as usize, t);
        prop_assert_eq!(d.magnitude_law, Some(true));
        let c = zero_distribution(&p, &q, &mu.conj()).unwrap();
        prop_assert_eq!(c.sharp_plus as i64 - c.sharp_minus as i64, d.sharp_minus as i64 - d.sharp_plus as i64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn real_zero_iff_common_real_zero(seed in any::<u64>(), n in 1usize..=6, shared in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = random_mu(&mut rng);
        if shared {
            let a = r(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            let lin = RealPoly::from_roots(&[a.clone()]);
            let p = &lin * &random_poly(&mut rng, n, 5);
            let dq = rng.gen_range(0..=n);
            let q = &lin * &random_poly(&mut rng, dq, 5);
            prop_assert!(has_real_zero_mu(&p, &q, &mu).unwrap());
            // S_μ(a) = 0 exactly, and the float scan sees a real zero
            prop_assert!(p.eval(&a) == r(0, 1) && q.eval(&a) == r(0, 1));
            let roots = s_mu_roots(&p, &q, &mu);
            prop_assume!(roots.is_some());
            let roots = roots.unwrap();
            prop_assert!(roots.iter().any(|z| z.im.abs() <= 1e-6 * (1.0 + z.norm())));
            prop_assert_eq!(winding_number(&p, &q, &mu), Err(HbError::CommonRealZero));
        } else {
            let (p, q, mu, _) = callable_instance(&mut rng, n);
            prop_assert!(!has_real_zero_mu(&p, &q, &mu).unwrap());
        }
    }
}

#[test]
fn upper_counts_fill_every_component() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=4 {
        let mut seen = BTreeSet::new();
        for i in 0..3000 {
            // every other draw is real-rooted with an interlacing Q, which
            // reaches the two extreme components
            let (p, q) = if i % 2 == 0 {
                random_hb_pair(&mut rng, n, 5)
            } else {
                let mut roots: Vec<i64> = (-9..=9).collect();
                roots.shuffle(&mut rng);
                let p = RealPoly::from_roots(&roots[..n].iter().map(|&a| r(a, 1)).collect::<Vec<_>>());
                let q = p.derivative().scale(&r(rng.gen_range(-3..=3i64).max(1) * if rng.gen() { 1 } else { -1 }, 1));
                (p, q)
            };
            seen.insert(winding_number(&p, &q, &random_mu(&mut rng)).unwrap());
        }
        assert_eq!(seen, (0..=n).collect(), "n = {n}");
    }
}
