//! Pencils `{αP + βQ}` of real polynomials of degree at most `n`.
//!
//! Counts of real zeros are projective throughout: a member of degree `d`
//! has `n − d` zeros at infinity.

mod hurwitz;
mod profile;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::poly::{
    count_real_roots_in, interleave_real_roots, isolate_real_roots, real_root_count,
    real_root_count_with_multiplicity, wronskian, Bound, IsolatingInterval, PolyError, RealPoly, Rational,
};

pub use hurwitz::{is_hurwitz_generic, HurwitzReport, Violation, ViolationKind, DEFAULT_HURWITZ_TOL};
pub use profile::{real_count_profile, CriticalValue, RealZeroProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PencilError {
    #[error("invalid pencil: {0}")]
    Invalid(String),
    #[error("pencil is generic: nothing to classify")]
    AlreadyGeneric,
    #[error("profile undefined at tangency: the Wronskian has a multiple real zero")]
    ProfileUndefined,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("n must be at least 1")]
    BadDegree,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The line spanned by `p` and `q` in the space of polynomials of degree at
/// most `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pencil {
    p: RealPoly,
    q: RealPoly,
    n: usize,
}

impl Pencil {
    pub fn new(p: RealPoly, q: RealPoly, n: usize) -> Result<Self, PencilError> {
        if n == 0 {
            return Err(PencilError::BadDegree);
        }
        for (name, f) in [("P", &p), ("Q", &q)] {
            if f.degree().is_some_and(|d| d > n) {
                return Err(PencilError::Invalid(format!("deg {name} exceeds n = {n}")));
            }
        }
        if p.is_zero() || q.is_zero() || wronskian(&p, &q).is_zero() {
            return Err(PencilError::Invalid("P and Q are linearly dependent".into()));
        }
        Ok(Pencil { p, q, n })
    }

    pub fn p(&self) -> &RealPoly {
        &self.p
    }

    pub fn q(&self) -> &RealPoly {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn wronskian(&self) -> RealPoly {
        wronskian(&self.p, &self.q)
    }

    /// The same pencil in the basis `(aP + bQ, cP + dQ)`.
    pub fn change_basis(&self, a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Result<Self, PencilError> {
        if (a * d - b * c).is_zero() {
            return Err(PencilError::Invalid("singular basis change".into()));
        }
        Pencil::new(
            &self.p.scale(a) + &self.q.scale(b),
            &self.p.scale(c) + &self.q.scale(d),
            self.n,
        )
    }

    /// Member `P − tQ`, or `Q` for `t = ∞` (`None`).
    pub fn member(&self, t: Option<&Rational>) -> RealPoly {
        match t {
            Some(t) => &self.p - &self.q.scale(t),
            None => self.q.clone(),
        }
    }

    /// Multiplicity of infinity as a zero of the Wronskian read as a form of
    /// degree `2n − 2`.
    pub fn wronskian_drop(&self) -> usize {
        let w = self.wronskian();
        2 * self.n - 2 - w.degree().expect("independent basis")
    }
}

/// Number of real zeros of `f` counted with multiplicity, plus `n − deg f`
/// at infinity.
pub fn projective_real_count(f: &RealPoly, n: usize) -> Result<usize, PencilError> {
    let d = f.degree().ok_or(PolyError::Indeterminate)?;
    Ok(real_root_count_with_multiplicity(f)? + (n - d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GenericityStatus {
    Generic,
    Degenerate,
    NongenericU,
    NongenericV,
    NongenericMixed,
}

/// Component of the discriminant met at a multiple Wronskian zero: `U` when
/// `P` and `Q` share the zero, `V` when some member vanishes to order three
/// or more there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Component {
    U,
    V,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessPoint {
    Finite(IsolatingInterval),
    Infinity,
}

impl WitnessPoint {
    pub fn approx(&self) -> f64 {
        match self {
            WitnessPoint::Finite(iv) => iv.approx(),
            WitnessPoint::Infinity => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub point: WitnessPoint,
    pub multiplicity: usize,
    pub component: Component,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub status: GenericityStatus,
    pub witnesses: Vec<Witness>,
    pub wronskian: RealPoly,
}

fn witnesses(l: &Pencil) -> Result<(Vec<Witness>, usize), PencilError> {
    let w = l.wronskian();
    let g = l.p.gcd(&l.q);
    let mut out = Vec::new();
    for iv in isolate_real_roots(&w)? {
        if iv.multiplicity < 2 {
            continue;
        }
        // roots of gcd(P, Q) are Wronskian roots, so the endpoints are not
        let common = if g.is_constant() {
            false
        } else if iv.is_exact() {
            g.eval(&iv.lo).is_zero()
        } else {
            count_real_roots_in(&g, &Bound::Finite(iv.lo.clone()), &Bound::Finite(iv.hi.clone()))? > 0
        };
        let multiplicity = iv.multiplicity;
        out.push(Witness {
            point: WitnessPoint::Finite(iv),
            multiplicity,
            component: if common { Component::U } else { Component::V },
        });
    }
    let drop = l.wronskian_drop();
    if drop >= 2 {
        let common = l.p.degree() < Some(l.n) && l.q.degree() < Some(l.n);
        out.push(Witness {
            point: WitnessPoint::Infinity,
            multiplicity: drop,
            component: if common { Component::U } else { Component::V },
        });
    }
    Ok((out, drop))
}

/// Decides whether the Wronskian has a multiple real zero, counting the
/// zero at infinity.
///
/// A degree drop of two or more with no finite multiple zero is reported
/// as `Degenerate`; otherwise every multiple zero, infinity included, is
/// listed with its component.
pub fn is_generic(l: &Pencil) -> Result<GenericityReport, PencilError> {
    let (witnesses, drop) = witnesses(l)?;
    let finite = witnesses.iter().any(|w| w.point != WitnessPoint::Infinity);
    let status = if witnesses.is_empty() {
        GenericityStatus::Generic
    } else if !finite && drop >= 2 {
        GenericityStatus::Degenerate
    } else {
        let u = witnesses.iter().any(|w| w.component == Component::U);
        let v = witnesses.iter().any(|w| w.component == Component::V);
        match (u, v) {
            (true, false) => GenericityStatus::NongenericU,
            (false, true) => GenericityStatus::NongenericV,
            _ => GenericityStatus::NongenericMixed,
        }
    };
    Ok(GenericityReport { status, witnesses, wronskian: l.wronskian() })
}

/// The multiple Wronskian zeros of a nongeneric pencil with their
/// components.
pub fn classify_nongeneric(l: &Pencil) -> Result<Vec<Witness>, PencilError> {
    let (w, _) = witnesses(l)?;
    if w.is_empty() {
        return Err(PencilError::AlreadyGeneric);
    }
    Ok(w)
}

/// Whether every member has the same number of real zeros, and that number.
pub fn has_constant_real_count(l: &Pencil) -> Result<(bool, Option<usize>), PencilError> {
    let w = l.wronskian();
    if l.wronskian_drop() > 0 || real_root_count(&w)? > 0 {
        return Ok((false, None));
    }
    Ok((true, Some(projective_real_count(&l.p, l.n)?)))
}

/// True iff `p` and `q` have only real simple zeros that strictly alternate.
pub fn zeros_interlace(p: &RealPoly, q: &RealPoly) -> Result<bool, PencilError> {
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroInput.into());
    }
    let simple_real = |f: &RealPoly| -> Result<bool, PencilError> {
        let roots = isolate_real_roots(f)?;
        Ok(Some(roots.len()) == f.degree() && roots.iter().all(|r| r.multiplicity == 1))
    };
    if !simple_real(p)? || !simple_real(q)? {
        return Ok(false);
    }
    let merged = match interleave_real_roots(&[p, q]) {
        Ok(m) => m,
        Err(PolyError::SharedRoot) => return Ok(false),
        Err(e) => return Err(e.into()),
    };
    Ok(merged.windows(2).all(|w| w[0].0 != w[1].0))
}

/// Degree of the Wronski map, `(1/n)·C(2n − 2, n − 1)`.
pub fn catalan_degree(n: usize) -> Result<BigUint, PencilError> {
    if n == 0 {
        return Err(PencilError::BadDegree);
    }
    let mut c = BigUint::one();
    // C(2n−2, n−1) built incrementally stays integral
    for i in 0..(n - 1) {
        c = c * BigUint::from(2 * n - 2 - i) / BigUint::from(i + 1);
    }
    Ok(c / BigUint::from(n))
}
