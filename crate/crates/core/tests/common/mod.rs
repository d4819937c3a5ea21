#![allow(dead_code)]

use garden_core::hb::Mu;
use garden_core::pencil::{is_generic, GenericityStatus, Pencil};
use garden_core::poly::{rat_to_f64, real_root_count, RealPoly, Rational};
use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rp(c: &[i64]) -> RealPoly {
    RealPoly::from_ints(c)
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Roots of a real polynomial as eigenvalues of its companion matrix;
/// `None` when the eigenvalue iteration does not settle.
pub fn companion_roots(p: &RealPoly) -> Option<Vec<Complex<f64>>> {
    let c: Vec<f64> = p.coeffs().iter().map(rat_to_f64).collect();
    companion_roots_complex(&c.iter().map(|&x| Complex::new(x, 0.0)).collect::<Vec<_>>())
}

/// Roots of a polynomial with complex coefficients, constant term first.
pub fn companion_roots_complex(c: &[Complex<f64>]) -> Option<Vec<Complex<f64>>> {
    let d = c.len() - 1;
    if d == 0 {
        return Some(Vec::new());
    }
    let lead = c[d];
    let mut m = DMatrix::<Complex<f64>>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    // plain `schur()` can cycle forever on some companion matrices
    let schur = m.try_schur(f64::EPSILON, 100_000)?;
    Some(schur.eigenvalues().expect("complex Schur form is triangular").iter().cloned().collect())
}

/// Real roots among numeric roots, with a relative imaginary threshold.
pub fn real_parts(roots: &[Complex<f64>], tol: f64) -> Vec<f64> {
    let mut v: Vec<f64> = roots.iter().filter(|z| z.im.abs() <= tol * (1.0 + z.norm())).map(|z| z.re).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn random_poly(rng: &mut ChaCha8Rng, degree: usize, bound: i64) -> RealPoly {
    let mut c: Vec<i64> = (0..degree).map(|_| rng.gen_range(-bound..=bound)).collect();
    let mut lead = 0;
    while lead == 0 {
        lead = rng.gen_range(-bound..=bound);
    }
    c.push(lead);
    rp(&c)
}

/// A random generic pencil of degree `n`, with `deg Q` anywhere from 0 to `n`.
pub fn random_generic_pencil(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Pencil {
    loop {
        let p = random_poly(rng, n, bound);
        let dq = rng.gen_range(0..=n);
        let q = random_poly(rng, dq, bound);
        let Ok(l) = Pencil::new(p, q, n) else { continue };
        if is_generic(&l).map(|r| r.status == GenericityStatus::Generic).unwrap_or(false) {
            return l;
        }
    }
}

/// A random invertible integer matrix `(a, b, c, d)`.
pub fn random_basis_change(rng: &mut ChaCha8Rng) -> (Rational, Rational, Rational, Rational) {
    loop {
        let v: Vec<i64> = (0..4).map(|_| rng.gen_range(-4..=4)).collect();
        if v[0] * v[3] - v[1] * v[2] != 0 {
            return (r(v[0], 1), r(v[1], 1), r(v[2], 1), r(v[3], 1));
        }
    }
}

pub fn random_mu(rng: &mut ChaCha8Rng) -> Mu {
    let re = r(rng.gen_range(-6..=6), rng.gen_range(1..=3));
    let mut im = 0;
    while im == 0 {
        im = rng.gen_range(-6..=6);
    }
    Mu::new(re, r(im, rng.gen_range(1..=3)))
}

/// `(P, Q)` with `deg P = n` and `deg Q < n`, no common real zero.
pub fn random_hb_pair(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> (RealPoly, RealPoly) {
    loop {
        let p = random_poly(rng, n, bound);
        let dq = rng.gen_range(0..n);
        let q = random_poly(rng, dq, bound);
        let g = p.gcd(&q);
        if g.is_constant() || real_root_count(&g).unwrap() == 0 {
            return (p, q);
        }
    }
}

/// Roots of `P + μQ` from the companion matrix.
pub fn s_mu_roots(p: &RealPoly, q: &RealPoly, mu: &Mu) -> Option<Vec<Complex<f64>>> {
    let (re, im) = (rat_to_f64(&mu.re), rat_to_f64(&mu.im));
    let len = p.coeffs().len().max(q.coeffs().len());
    let at = |f: &RealPoly, k: usize| f.coeffs().get(k).map_or(0.0, rat_to_f64);
    let c: Vec<Complex<f64>> = (0..len).map(|k| Complex::new(at(p, k) + re * at(q, k), im * at(q, k))).collect();
    companion_roots_complex(&c)
}

/// Upper half-plane zero count of `P + μQ` by the float oracle; `None` when
/// some zero sits too close to the real axis to call.
pub fn upper_count_oracle(p: &RealPoly, q: &RealPoly, mu: &Mu) -> Option<usize> {
    let roots = s_mu_roots(p, q, mu)?;
    if roots.iter().any(|z| z.im.abs() <= 1e-7 * (1.0 + z.norm())) {
        return None;
    }
    Some(roots.iter().filter(|z| z.im > 0.0).count())
}
