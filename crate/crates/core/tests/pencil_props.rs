mod common;

use common::{random_basis_change, random_generic_pencil, random_poly, r};
use garden_core::pencil::{
    has_constant_real_count, is_generic, is_hurwitz_generic, real_count_profile, zeros_interlace, Pencil,
    DEFAULT_HURWITZ_TOL,
};
use garden_core::poly::{isolate_real_roots, RealPoly, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn from_roots(roots: &[Rational]) -> RealPoly {
    RealPoly::from_roots(roots)
}

/// Strictly alternating rational zeros `r₀ < s₀ < r₁ < …`.
fn interlacing_pair() -> impl Strategy<Value = (RealPoly, RealPoly, usize)> {
    (1usize..=8, any::<bool>(), prop::collection::vec(1i64..=6, 16)).prop_map(|(n, full, gaps)| {
        let mut pts = Vec::new();
        let mut x = -20i64;
        for g in gaps.iter().take(2 * n) {
            x += g;
            pts.push(r(x, 3));
        }
        let rs: Vec<Rational> = pts.iter().step_by(2).cloned().collect();
        let ss: Vec<Rational> = pts.iter().skip(1).step_by(2).take(if full { n } else { n - 1 }).cloned().collect();
        (from_roots(&rs), from_roots(&ss), n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariants_survive_basis_change(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_generic_pencil(&mut rng, n, 6);
        let (a, b, c, d) = random_basis_change(&mut rng);
        let m = l.change_basis(&a, &b, &c, &d).unwrap();
        prop_assert_eq!(is_generic(&l).unwrap().status, is_generic(&m).unwrap().status);
        prop_assert_eq!(has_constant_real_count(&l).unwrap(), has_constant_real_count(&m).unwrap());
        let mut pl = real_count_profile(&l).unwrap().counts;
        let mut pm = real_count_profile(&m).unwrap().counts;
        pl.sort_unstable();
        pm.sort_unstable();
        prop_assert_eq!(pl, pm);
        prop_assert_eq!(
            is_hurwitz_generic(&l, DEFAULT_HURWITZ_TOL).unwrap().generic,
            is_hurwitz_generic(&m, DEFAULT_HURWITZ_TOL).unwrap().generic
        );
    }

    #[test]
    fn nongeneric_status_survives_basis_change(
        roots in prop::collection::vec(-4i64..=4, 1..3),
        seed in any::<u64>(),
    ) {
        // a shared real zero puts the pencil on the discriminant
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let common = RealPoly::from_ints(&[-roots[0], 1]);
        let p = &common * &random_poly(&mut rng, 2, 5);
        let q = &common * &random_poly(&mut rng, 1, 5);
        let l = Pencil::new(p, q, 3).unwrap();
        let (a, b, c, d) = random_basis_change(&mut rng);
        let m = l.change_basis(&a, &b, &c, &d).unwrap();
        prop_assert_eq!(is_generic(&l).unwrap().status, is_generic(&m).unwrap().status);
    }

    #[test]
    fn profile_steps_by_two(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_generic_pencil(&mut rng, n, 8);
        let prof = real_count_profile(&l).unwrap();
        let w = l.wronskian();
        let tangencies = isolate_real_roots(&w).unwrap().len() + l.wronskian_drop();
        // distinct tangencies with distinct critical values
        prop_assume!(prof.critical.len() == tangencies);
        let k = prof.counts.len();
        if k > 1 {
            for i in 0..k {
                let (a, b) = (prof.counts[i] as i64, prof.counts[(i + 1) % k] as i64);
                prop_assert_eq!((a - b).abs(), 2, "{:?}", prof.counts);
            }
        }
        let (constant, _) = has_constant_real_count(&l).unwrap();
        prop_assert_eq!(constant, prof.critical.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interlacing_gives_constant_count((p, q, n) in interlacing_pair()) {
        prop_assert!(zeros_interlace(&p, &q).unwrap());
        let l = Pencil::new(p, q, n).unwrap();
        prop_assert_eq!(has_constant_real_count(&l).unwrap(), (true, Some(n)));
        prop_assert!(real_count_profile(&l).unwrap().critical.is_empty());
    }
}
