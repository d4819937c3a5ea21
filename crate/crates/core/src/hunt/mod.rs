//! Search harnesses for three open conjectures about real polynomials and
//! their gardens.
//!
//! * Hawaii: a degree-`d` polynomial with `2s` nonreal zeros has at most
//!   `2s` real zeros of `PP″ − P′²`.
//! * Chords: every chord of the garden of `P′/P` passes through a nonreal
//!   zero of `P`.
//! * QP: `Σ cᵢ Pᵢ^α` with `n` positive monic quadratics `Pᵢ` has at most
//!   `2n − 1` real critical points.

mod driver;

use std::f64::consts::FRAC_PI_2;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::garden::{trace_garden, GardenError, TraceOptions, TracedGarden};
use crate::pencil::{is_generic, GenericityStatus, Pencil, PencilError};
use crate::poly::{isolate_real_roots, rat_to_f64, real_root_count_with_multiplicity, PolyError, RealPoly, Rational};

pub use driver::{
    hawaii_exhaustive, hunt_driver, Certificate, ConjectureReport, Distribution, Stats, Target, TrialConfig,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HuntError {
    #[error("polynomial must have degree at least {0}")]
    Degree(usize),
    #[error("outside QP_n: {0}")]
    OutsideQp(String),
    #[error("α must be at most −1, got {0}")]
    BadAlpha(f64),
    #[error("the derivative vanishes identically")]
    Degenerate,
    #[error("pencil (P′, P) is not generic ({0:?})")]
    NotGeneric(GenericityStatus),
    #[error(transparent)]
    Garden(#[from] GardenError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `PP″ − P′²`.
pub fn hawaii_wronskian(p: &RealPoly) -> RealPoly {
    let d1 = p.derivative();
    &(p * &d1.derivative()) - &(&d1 * &d1)
}

/// `W(P, P′)` with the zeros it shares with `P` removed, i.e. divided by
/// `gcd(P, P′)²`. A zero of `P` of order `m` is a zero of `W` of order
/// exactly `2m − 2`, so what remains is the numerator of `(P′/P)′` over
/// `(P/gcd)²` and has no zero in common with `P`.
pub fn hawaii_reduced(p: &RealPoly) -> RealPoly {
    let g = p.gcd(&p.derivative());
    hawaii_wronskian(p).exact_div(&(&g * &g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HawaiiResult {
    /// Number of nonreal zeros, with multiplicity.
    pub two_s: usize,
    /// Real zeros of `PP″ − P′²` off the zeros of `P`, with multiplicity.
    pub w_real: usize,
    pub pass: bool,
}

pub fn hawaii_check(p: &RealPoly) -> Result<HawaiiResult, HuntError> {
    let d = p.degree().filter(|&d| d >= 1).ok_or(HuntError::Degree(1))?;
    let two_s = d - real_root_count_with_multiplicity(p)?;
    let w = hawaii_reduced(p);
    // linear P gives the nonzero constant −P′²
    let w_real = if w.is_constant() { 0 } else { real_root_count_with_multiplicity(&w)? };
    Ok(HawaiiResult { two_s, w_real, pass: w_real <= two_s })
}

/// The same counts by Descartes isolation instead of Sturm chains.
pub(crate) fn hawaii_recount(p: &RealPoly) -> Result<HawaiiResult, HuntError> {
    let count = |f: &RealPoly| -> Result<usize, HuntError> {
        if f.is_constant() {
            return Ok(0);
        }
        Ok(isolate_real_roots(f)?.iter().map(|iv| iv.multiplicity).sum())
    };
    let d = p.degree().filter(|&d| d >= 1).ok_or(HuntError::Degree(1))?;
    let two_s = d - count(p)?;
    let w_real = count(&hawaii_reduced(p))?;
    Ok(HawaiiResult { two_s, w_real, pass: w_real <= two_s })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChordHit {
    /// Vertices joined by the chord, `None` standing for infinity.
    pub ends: (Option<f64>, Option<f64>),
    pub hit: bool,
    /// Distance from the chord polyline to the nearest nonreal zero.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChordReport {
    pub chords: Vec<ChordHit>,
    pub pass: bool,
}

/// Default tube radius around a traced chord, relative to the picture.
pub const DEFAULT_CHORD_TOL: f64 = 1e-9;

fn seg_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let l2 = dx * dx + dy * dy;
    let t = if l2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / l2).clamp(0.0, 1.0) };
    ((a.0 + t * dx - p.0).hypot(a.1 + t * dy - p.1), l2.sqrt())
}

/// Distance from `z` to a polyline, and whether `z` sits in its tube: within
/// `tol·scale` plus a twentieth of the local segment, which covers the
/// sagitta of a traced arc.
fn tube(z: (f64, f64), pts: &[(f64, f64)], tol: f64, scale: f64) -> (f64, bool) {
    pts.windows(2).fold((f64::INFINITY, false), |(best, inside), w| {
        let (d, len) = seg_dist(z, w[0], w[1]);
        (best.min(d), inside || d <= 0.05 * len + tol * scale)
    })
}

fn chord_hits(t: &TracedGarden, p: &RealPoly, tol: f64) -> Vec<ChordHit> {
    // nonreal zeros of P in the working chart
    let zeros: Vec<(f64, f64)> = p
        .complex_roots()
        .into_iter()
        .filter(|z| z.im > 1e-9 * (1.0 + z.re.abs()))
        .map(|z| match t.chart {
            None => (z.re, z.im),
            Some(xs) => {
                let w = num_complex::Complex64::new(1.0, 0.0) / (num_complex::Complex64::new(xs, 0.0) - z);
                (w.re, w.im)
            }
        })
        .collect();
    let ov = t.original_vertices();
    t.chords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut distance = f64::INFINITY;
            let mut hit = false;
            for &z in &zeros {
                let (d, inside) = tube(z, &c.points, tol, t.scale);
                distance = distance.min(d);
                // the zero must not be closer to another element
                let other = t
                    .chords
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, o)| &o.points)
                    .chain(t.ovals.iter().map(|o| &o.points))
                    .any(|pts| tube(z, pts, tol, t.scale).0 < d);
                hit |= inside && !other;
            }
            ChordHit { ends: (ov[c.from], ov[c.to]), hit, distance }
        })
        .collect()
}

/// Checks that every chord of the garden of `P′/P` passes through a
/// nonreal zero of `P`, within a tube of radius `tol` (relative to the
/// picture) around the traced chord.
pub fn chord_zero_check(p: &RealPoly, tol: f64) -> Result<ChordReport, HuntError> {
    chord_zero_check_with(p, tol, &TraceOptions::default())
}

pub fn chord_zero_check_with(p: &RealPoly, tol: f64, opts: &TraceOptions) -> Result<ChordReport, HuntError> {
    let n = p.degree().filter(|&d| d >= 1).ok_or(HuntError::Degree(1))?;
    let l = Pencil::new(p.derivative(), p.clone(), n)?;
    let status = is_generic(&l)?.status;
    if status != GenericityStatus::Generic {
        return Err(HuntError::NotGeneric(status));
    }
    let t = trace_garden(&l, opts)?;
    let chords = chord_hits(&t, p, tol);
    let pass = chords.iter().all(|c| c.hit);
    Ok(ChordReport { chords, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QpResult {
    /// Real critical points, with multiplicity.
    pub count: usize,
    /// `2n − 1`.
    pub bound: usize,
    pub pass: bool,
    /// False for the sampled count used with non-integer α.
    pub exact: bool,
}

fn check_quads(quads: &[RealPoly]) -> Result<(), HuntError> {
    if quads.is_empty() {
        return Err(HuntError::OutsideQp("no quadratics".into()));
    }
    for q in quads {
        if q.degree() != Some(2) || !q.coeff(2).is_one() {
            return Err(HuntError::OutsideQp(format!("{q} is not a monic quadratic")));
        }
        // b² < 4c
        let disc = q.coeff(1) * q.coeff(1) - Rational::from_integer(4.into()) * q.coeff(0);
        if !disc.is_negative() {
            return Err(HuntError::OutsideQp(format!("{q} has a real zero")));
        }
    }
    Ok(())
}

/// Numerator of `f′` for `f = Σ cᵢ Pᵢ^α` after clearing `Π Pⱼ^(1−α)`:
/// `α·Σ cᵢ Pᵢ′ Π_{j≠i} Pⱼ^(1−α)`, up to the constant `α`.
pub fn qp_numerator(c: &[Rational], quads: &[RealPoly], alpha: i64) -> Result<RealPoly, HuntError> {
    if alpha > -1 {
        return Err(HuntError::BadAlpha(alpha as f64));
    }
    if c.len() != quads.len() {
        return Err(HuntError::OutsideQp("coefficient and quadratic counts differ".into()));
    }
    check_quads(quads)?;
    let e = (1 - alpha) as u32;
    let powers: Vec<RealPoly> = quads.iter().map(|q| q.pow(e)).collect();
    let mut n = RealPoly::zero();
    for (i, (ci, qi)) in c.iter().zip(quads).enumerate() {
        if ci.is_zero() {
            continue;
        }
        let mut term = qi.derivative().scale(ci);
        for (j, pj) in powers.iter().enumerate() {
            if j != i {
                term = &term * pj;
            }
        }
        n = &n + &term;
    }
    Ok(n)
}

/// Exact count of real critical points of `Σ cᵢ Pᵢ^α` for integer α ≤ −1.
pub fn qp_critical_count(c: &[Rational], quads: &[RealPoly], alpha: i64) -> Result<QpResult, HuntError> {
    let n = qp_numerator(c, quads, alpha)?;
    if n.is_zero() {
        return Err(HuntError::Degenerate);
    }
    let count = if n.is_constant() { 0 } else { real_root_count_with_multiplicity(&n)? };
    let bound = 2 * quads.len() - 1;
    Ok(QpResult { count, bound, pass: count <= bound, exact: true })
}

/// Sampled count of sign changes of `f′` for real α ≤ −1, over `x = tan θ`
/// with `θ` on a uniform grid. Misses close pairs; flagged as inexact.
pub fn qp_critical_count_numeric(c: &[f64], quads: &[RealPoly], alpha: f64, samples: usize) -> Result<QpResult, HuntError> {
    if !(alpha <= -1.0) {
        return Err(HuntError::BadAlpha(alpha));
    }
    if c.len() != quads.len() {
        return Err(HuntError::OutsideQp("coefficient and quadratic counts differ".into()));
    }
    check_quads(quads)?;
    let fq: Vec<(f64, f64)> = quads.iter().map(|q| (rat_to_f64(&q.coeff(0)), rat_to_f64(&q.coeff(1)))).collect();
    let deriv = |x: f64| -> f64 {
        c.iter()
            .zip(&fq)
            .map(|(ci, (c0, b))| {
                let p = x * x + b * x + c0;
                ci * alpha * p.powf(alpha - 1.0) * (2.0 * x + b)
            })
            .sum()
    };
    let mut count = 0;
    let mut last = 0.0f64;
    for k in 1..samples {
        let theta = -FRAC_PI_2 + std::f64::consts::PI * k as f64 / samples as f64;
        let v = deriv(theta.tan());
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
    }
    let bound = 2 * quads.len() - 1;
    Ok(QpResult { count, bound, pass: count <= bound, exact: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn f(c: &[i64]) -> RealPoly {
        RealPoly::from_ints(c)
    }

    #[test]
    fn hawaii_examples() {
        assert_eq!(hawaii_check(&f(&[1, 0, 1])).unwrap(), HawaiiResult { two_s: 2, w_real: 2, pass: true });
        assert_eq!(hawaii_check(&f(&[-1, 0, 1])).unwrap(), HawaiiResult { two_s: 0, w_real: 0, pass: true });
        let r = hawaii_check(&f(&[-4, -5, 1, 0, 1])).unwrap();
        assert_eq!(r.w_real, 0);
        assert!(r.pass);
        assert_eq!(hawaii_check(&f(&[3, 2])).unwrap(), HawaiiResult { two_s: 0, w_real: 0, pass: true });
        assert_eq!(hawaii_check(&f(&[5])), Err(HuntError::Degree(1)));
        // the double zero of W = −2x² sits on the double zero of P
        assert_eq!(hawaii_check(&f(&[0, 0, 1])).unwrap(), HawaiiResult { two_s: 0, w_real: 0, pass: true });
    }

    #[test]
    fn hawaii_wronskian_by_hand() {
        assert_eq!(hawaii_wronskian(&f(&[1, 0, 1])), f(&[2, 0, -2]));
        assert_eq!(hawaii_wronskian(&f(&[-1, 0, 1])), f(&[-2, 0, -2]));
        // P = x²(x − 1): W = −x²(3x² − 4x + 2), gcd = x
        assert_eq!(hawaii_reduced(&f(&[0, 0, -1, 1])), f(&[-2, 4, -3]));
    }

    #[test]
    fn circle_chord_passes_through_i() {
        let r = chord_zero_check(&f(&[1, 0, 1]), DEFAULT_CHORD_TOL).unwrap();
        assert_eq!(r.chords.len(), 1);
        assert!(r.pass, "{r:?}");
        assert!(r.chords[0].distance < 1e-3);
    }

    #[test]
    fn quartic_has_no_chords() {
        let r = chord_zero_check(&f(&[-4, -5, 1, 0, 1]), DEFAULT_CHORD_TOL).unwrap();
        assert!(r.chords.is_empty());
        assert!(r.pass);
    }

    #[test]
    fn qp_single_term() {
        let r = qp_critical_count(&[rat(3)], &[f(&[2, 2, 1])], -1).unwrap();
        assert_eq!(r, QpResult { count: 1, bound: 1, pass: true, exact: true });
        let r = qp_critical_count(&[rat(1)], &[f(&[1, 0, 1])], -3).unwrap();
        assert_eq!(r.count, 1);
    }

    #[test]
    fn qp_two_terms_against_sampling() {
        let quads = [f(&[1, 0, 1]), f(&[2, 2, 1])];
        let exact = qp_critical_count(&[rat(1), rat(1)], &quads, -1).unwrap();
        let sampled = qp_critical_count_numeric(&[1.0, 1.0], &quads, -1.0, 200_000).unwrap();
        assert_eq!(exact.count, sampled.count);
        assert!(exact.pass);
        // pinned: the two bumps at 0 and −1 merge into one maximum
        assert_eq!(exact.count, 1);
    }

    #[test]
    fn qp_rejects_real_zero_and_bad_alpha() {
        assert!(matches!(qp_critical_count(&[rat(1)], &[f(&[-1, 0, 1])], -1), Err(HuntError::OutsideQp(_))));
        assert!(matches!(qp_critical_count(&[rat(1)], &[f(&[1, 0, 2])], -1), Err(HuntError::OutsideQp(_))));
        assert_eq!(qp_critical_count(&[rat(1)], &[f(&[1, 0, 1])], 0), Err(HuntError::BadAlpha(0.0)));
        assert!(matches!(
            qp_critical_count(&[ratio(1, 2), ratio(-1, 2)], &[f(&[1, 0, 1]), f(&[1, 0, 1])], -2),
            Err(HuntError::Degenerate)
        ));
    }
}
