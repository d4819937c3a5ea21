//! Numeric check that critical points and critical values are distinct.

use num_complex::Complex64;
use serde::Serialize;

use super::{classify_nongeneric, Component, Pencil, PencilError, WitnessPoint};
use crate::poly::{rat_to_f64, real_root_count};

pub const DEFAULT_HURWITZ_TOL: f64 = 1e-9;

/// Where a violation happens, on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SpherePoint {
    Finite { re: f64, im: f64 },
    Infinity,
}

impl SpherePoint {
    fn finite(z: Complex64) -> Self {
        SpherePoint::Finite { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ViolationKind {
    /// Multiple real critical point where `P` and `Q` share a zero.
    U,
    /// Multiple real critical point where a member vanishes to order ≥ 3.
    V,
    /// Two real critical points with the same value.
    W,
    /// A conjugate pair of critical points with the same real value.
    Z,
    /// Multiple nonreal critical point.
    ComplexMultiple,
    /// Any other coincidence, including numerically close critical points.
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub points: Vec<SpherePoint>,
    /// Chordal distance between the coinciding points or values; zero for
    /// coincidences detected exactly.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HurwitzReport {
    pub generic: bool,
    pub violations: Vec<Violation>,
}

fn chordal(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> f64 {
    let num = (a.0 * b.1 - a.1 * b.0).norm();
    let den = (a.0.norm_sqr() + a.1.norm_sqr()).sqrt() * (b.0.norm_sqr() + b.1.norm_sqr()).sqrt();
    2.0 * num / den
}

/// Checks that the `2n − 2` critical points of `P/Q`, infinity included,
/// are distinct and have distinct critical values, within `tol` in the
/// chordal metric.
///
/// Multiple critical points are found exactly; the comparison of critical
/// values is numeric and advisory.
pub fn is_hurwitz_generic(l: &Pencil, tol: f64) -> Result<HurwitzReport, PencilError> {
    if !(tol > 0.0) {
        return Err(PencilError::BadTolerance);
    }
    let w = l.wronskian();
    let mut violations = Vec::new();

    // multiple critical points, exactly
    if let Ok(witnesses) = classify_nongeneric(l) {
        for wit in witnesses {
            let point = match &wit.point {
                WitnessPoint::Finite(iv) => SpherePoint::Finite { re: iv.approx(), im: 0.0 },
                WitnessPoint::Infinity => SpherePoint::Infinity,
            };
            let kind = match wit.component {
                Component::U => ViolationKind::U,
                Component::V => ViolationKind::V,
            };
            violations.push(Violation { kind, points: vec![point], distance: 0.0 });
        }
    }
    for (f, m) in w.square_free_decomposition() {
        if m < 2 || f.is_constant() {
            continue;
        }
        let real = real_root_count(&f)?;
        let mut roots = f.complex_roots();
        roots.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
        for z in roots.into_iter().skip(real).filter(|z| z.im > 0.0) {
            violations.push(Violation {
                kind: ViolationKind::ComplexMultiple,
                points: vec![SpherePoint::finite(z), SpherePoint::finite(z.conj())],
                distance: 0.0,
            });
        }
    }

    // distinct critical points and their values
    let sf = w.square_free_part()?;
    let real = real_root_count(&sf)?;
    let mut roots = sf.complex_roots();
    roots.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    for z in roots.iter_mut().take(real) {
        z.im = 0.0;
    }
    let value = |z: Complex64| (l.p().eval_complex(z), l.q().eval_complex(z));
    let mut pts: Vec<(SpherePoint, (Complex64, Complex64), (Complex64, Complex64), bool)> = roots
        .iter()
        .map(|&z| (SpherePoint::finite(z), (z, Complex64::new(1.0, 0.0)), value(z), z.im == 0.0))
        .collect();
    if l.wronskian_drop() == 1 {
        let inf = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let v = (
            Complex64::new(rat_to_f64(&l.p().coeff(l.n())), 0.0),
            Complex64::new(rat_to_f64(&l.q().coeff(l.n())), 0.0),
        );
        pts.push((SpherePoint::Infinity, inf, v, true));
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (pi, zi, vi, ri) = &pts[i];
            let (pj, zj, vj, rj) = &pts[j];
            let dz = chordal(*zi, *zj);
            if dz < tol {
                violations.push(Violation { kind: ViolationKind::Other, points: vec![*pi, *pj], distance: dz });
                continue;
            }
            let dv = chordal(*vi, *vj);
            if dv < tol {
                let conjugate = !ri && !rj && chordal(*zi, (zj.0.conj(), zj.1)) < tol.max(1e-12);
                let kind = if *ri && *rj {
                    ViolationKind::W
                } else if conjugate {
                    ViolationKind::Z
                } else {
                    ViolationKind::Other
                };
                violations.push(Violation { kind, points: vec![*pi, *pj], distance: dv });
            }
        }
    }
    Ok(HurwitzReport { generic: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RealPoly;

    fn pencil(p: &[i64], q: &[i64], n: usize) -> Pencil {
        Pencil::new(RealPoly::from_ints(p), RealPoly::from_ints(q), n).unwrap()
    }

    #[test]
    fn circle_pencil_is_hurwitz_generic() {
        let r = is_hurwitz_generic(&pencil(&[1, 0, 1], &[0, 1], 2), DEFAULT_HURWITZ_TOL).unwrap();
        assert!(r.generic, "{r:?}");
    }

    #[test]
    fn conjugate_pair_with_shared_value() {
        let r = is_hurwitz_generic(&pencil(&[1, 0, 2, 0, 1], &[1], 4), DEFAULT_HURWITZ_TOL).unwrap();
        assert!(!r.generic);
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::Z));
    }

    #[test]
    fn real_pair_with_shared_value() {
        // an even pencil: the two nonzero real critical points are mirror images
        let r = is_hurwitz_generic(&pencil(&[0, 0, -2, 0, 1], &[1, 0, 0, 0, 1], 4), DEFAULT_HURWITZ_TOL).unwrap();
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::W), "{r:?}");
    }

    #[test]
    fn infinity_counts_as_a_critical_point() {
        // x³ − 3x is a cubic polynomial map: infinity is a double critical point
        let r = is_hurwitz_generic(&pencil(&[0, -3, 0, 1], &[1], 3), DEFAULT_HURWITZ_TOL).unwrap();
        assert!(!r.generic);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::V);
        assert_eq!(r.violations[0].points, vec![SpherePoint::Infinity]);
        // in degree 2n − 2 form the same critical points are fine
        let r = is_hurwitz_generic(&pencil(&[0, -3, 0, 1], &[1, 0, 0, 1], 3), DEFAULT_HURWITZ_TOL).unwrap();
        assert!(r.generic, "{r:?}");
    }

    #[test]
    fn multiple_nonreal_critical_point() {
        // P' = 15(x² + 1)²
        let r = is_hurwitz_generic(&pencil(&[0, 15, 0, 10, 0, 3], &[1], 5), DEFAULT_HURWITZ_TOL).unwrap();
        assert!(!r.generic);
        let cm: Vec<_> = r.violations.iter().filter(|v| v.kind == ViolationKind::ComplexMultiple).collect();
        assert_eq!(cm.len(), 1);
        match cm[0].points[0] {
            SpherePoint::Finite { re, im } => assert!(re.abs() < 1e-6 && (im - 1.0).abs() < 1e-6),
            SpherePoint::Infinity => panic!("expected a finite point"),
        }
    }

    #[test]
    fn rejects_bad_tolerance() {
        let l = pencil(&[1, 0, 1], &[0, 1], 2);
        assert_eq!(is_hurwitz_generic(&l, 0.0), Err(PencilError::BadTolerance));
        assert_eq!(is_hurwitz_generic(&l, f64::NAN), Err(PencilError::BadTolerance));
    }
}
