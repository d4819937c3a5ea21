//! Floating-point complex roots by simultaneous Aberth iteration.

use num_complex::Complex64;

const MAX_ITERS: usize = 800;

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All complex roots of the polynomial with coefficients `c` (lowest degree
/// first), repeated by multiplicity. Trailing zero coefficients are ignored.
pub fn complex_roots(c: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = c.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let mut roots = Vec::new();
    let lead_zeros = c.iter().take_while(|&&v| v == 0.0).count();
    roots.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(lead_zeros));
    let c: Vec<f64> = c[lead_zeros..].to_vec();
    if c.len() <= 1 {
        return roots;
    }
    let n = c.len() - 1;
    let lc = c[n];
    let c: Vec<f64> = c.iter().map(|v| v / lc).collect();

    // Fujiwara bound on root moduli
    let bound = (1..=n)
        .map(|k| {
            let a = c[n - k].abs();
            if k == n {
                (a / 2.0).powf(1.0 / k as f64)
            } else {
                a.powf(1.0 / k as f64)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let lower = {
        let a0 = c[0].abs();
        let s: f64 = c[1..].iter().map(|v| v.abs()).fold(0.0, f64::max);
        a0 / (a0 + s)
    };
    let r = ((bound.max(1e-300) * lower.max(1e-300)).sqrt()).clamp(lower.max(1e-12), bound.max(1e-12));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(r, t)
        })
        .collect();

    let mut done = vec![false; n];
    for _ in 0..MAX_ITERS {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner(&c, z[i]);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let step = if denom.norm() == 0.0 || !denom.is_finite() {
                ratio
            } else {
                ratio / denom
            };
            if !step.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    roots.extend(z);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &mut Vec<Complex64>, mut b: Vec<Complex64>, tol: f64) {
        let key = |z: &Complex64| (z.re * 1e6).round() as i64 * 1_000_000 + (z.im * 1e6).round() as i64;
        a.sort_by_key(key);
        b.sort_by_key(key);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < tol, "{x} vs {y}");
        }
        assert_eq!(a.len(), b.len());
    }

    #[test]
    fn simple_roots() {
        let mut r = complex_roots(&[1.0, 0.0, 1.0]);
        close(&mut r, vec![Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0)], 1e-12);
        let mut r = complex_roots(&[-6.0, 11.0, -6.0, 1.0]);
        close(&mut r, (1..=3).map(|k| Complex64::new(k as f64, 0.0)).collect(), 1e-10);
    }

    #[test]
    fn zero_roots_and_trailing_zeros() {
        let mut r = complex_roots(&[0.0, 0.0, -1.0, 1.0, 0.0]);
        close(
            &mut r,
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            1e-12,
        );
        assert!(complex_roots(&[3.0]).is_empty());
    }

    #[test]
    fn double_root_is_approximate() {
        let r = complex_roots(&[1.0, -2.0, 1.0]);
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z - 1.0).norm() < 1e-6);
        }
    }
}
