//! Real-zero counts of the members `P − tQ` as `t` runs over the real
//! projective line.

use num_traits::{One, Signed, Zero};

use super::{is_generic, projective_real_count, GenericityStatus, Pencil, PencilError};
use crate::poly::{isolate_real_roots, rat, rat_to_f64, refine_square_free, IsolatingInterval, RealPoly, Rational};

/// A critical parameter `t = P(x)/Q(x)` at a real Wronskian zero `x`, as a
/// rational enclosure, or infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriticalValue {
    Finite { lo: Rational, hi: Rational },
    Infinity,
}

impl CriticalValue {
    pub fn approx(&self) -> f64 {
        match self {
            CriticalValue::Finite { lo, hi } => rat_to_f64(&((lo + hi) / rat(2))),
            CriticalValue::Infinity => f64::INFINITY,
        }
    }

    pub fn contains(&self, t: &Rational) -> bool {
        match self {
            CriticalValue::Finite { lo, hi } => lo <= t && t <= hi,
            CriticalValue::Infinity => false,
        }
    }
}

/// Critical parameters in increasing order (infinity last) and the count on
/// each open arc between consecutive ones. `counts[i]` belongs to the arc
/// leaving `critical[i]` in the increasing direction; the last arc passes
/// through infinity unless infinity is itself critical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealZeroProfile {
    pub critical: Vec<CriticalValue>,
    pub counts: Vec<usize>,
    /// A parameter inside each arc, `None` standing for `t = ∞`.
    pub samples: Vec<Option<Rational>>,
}

impl RealZeroProfile {
    pub fn is_constant(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }

    pub fn distinct_counts(&self) -> Vec<usize> {
        let mut c = self.counts.clone();
        c.sort_unstable();
        c.dedup();
        c
    }
}

#[derive(Clone, Debug)]
struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        Interval {
            lo: c.iter().min().unwrap().clone(),
            hi: c.iter().max().unwrap().clone(),
        }
    }

    fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }
}

fn eval_interval(p: &RealPoly, x: &Interval) -> Interval {
    let mut acc = Interval::point(Rational::zero());
    for c in p.coeffs().iter().rev() {
        let m = acc.mul(x);
        acc = Interval { lo: m.lo + c, hi: m.hi + c };
    }
    acc
}

/// Enclosure of `P/Q` over `iv`, or `None` when `Q` may vanish there.
fn ratio_enclosure(l: &Pencil, iv: &IsolatingInterval) -> Option<(Rational, Rational)> {
    if iv.is_exact() {
        let q = l.q().eval(&iv.lo);
        if q.is_zero() {
            return None;
        }
        let t = l.p().eval(&iv.lo) / q;
        return Some((t.clone(), t));
    }
    let x = Interval { lo: iv.lo.clone(), hi: iv.hi.clone() };
    let pv = eval_interval(l.p(), &x);
    let qv = eval_interval(l.q(), &x);
    if qv.contains_zero() {
        return None;
    }
    let inv = Interval { lo: qv.hi.recip(), hi: qv.lo.recip() };
    let r = pv.mul(&inv);
    Some((r.lo, r.hi))
}

/// A real Wronskian zero and the enclosure of its critical value.
struct Tracked {
    iv: IsolatingInterval,
    pole: bool,
    value: Option<(Rational, Rational)>,
}

impl Tracked {
    fn new(l: &Pencil, w: &RealPoly, iv: IsolatingInterval) -> Self {
        // Q vanishes at the point iff the point is a root of gcd(W, Q)
        let g = w.gcd(l.q());
        let pole = !g.is_constant()
            && if iv.is_exact() {
                g.eval(&iv.lo).is_zero()
            } else {
                g.sign_at(&iv.lo) * g.sign_at(&iv.hi) < 0
            };
        Tracked { iv, pole, value: None }
    }

    /// Shrinks the enclosure of a finite value to width at most `width`.
    fn refine(&mut self, l: &Pencil, sf: &RealPoly, width: &Rational) {
        if self.pole || self.value.as_ref().is_some_and(|(lo, hi)| &(hi - lo) <= width) {
            return;
        }
        loop {
            if let Some((lo, hi)) = ratio_enclosure(l, &self.iv) {
                if &(&hi - &lo) <= width {
                    self.value = Some((lo, hi));
                    return;
                }
            }
            let target = self.iv.width() / rat(4);
            self.iv = refine_square_free(sf, &self.iv, &target);
        }
    }

    fn value(&self) -> CriticalValue {
        match &self.value {
            Some((lo, hi)) if !self.pole => CriticalValue::Finite { lo: lo.clone(), hi: hi.clone() },
            _ => CriticalValue::Infinity,
        }
    }
}

fn overlaps(a: &CriticalValue, b: &CriticalValue) -> bool {
    match (a, b) {
        (CriticalValue::Finite { lo: a0, hi: a1 }, CriticalValue::Finite { lo: b0, hi: b1 }) => a0 <= b1 && b0 <= a1,
        (CriticalValue::Infinity, CriticalValue::Infinity) => true,
        _ => false,
    }
}

/// The critical parameters of a generic pencil and the constant projective
/// real-zero count on each arc between them.
///
/// Enclosures that still overlap at width `2^-100` are treated as one
/// critical value.
pub fn real_count_profile(l: &Pencil) -> Result<RealZeroProfile, PencilError> {
    let report = is_generic(l)?;
    if report.status != GenericityStatus::Generic {
        return Err(PencilError::ProfileUndefined);
    }
    let w = report.wronskian;
    let sf = w.square_free_part()?;
    let mut tracked: Vec<Tracked> = isolate_real_roots(&w)?.into_iter().map(|iv| Tracked::new(l, &w, iv)).collect();
    let mut width = Rational::new(1.into(), 1024.into());
    let floor = Rational::new(1.into(), num_bigint::BigInt::one() << 100usize);
    let at_infinity = (l.wronskian_drop() == 1).then(|| value_at_infinity(l));
    let mut critical: Vec<CriticalValue>;
    loop {
        for t in tracked.iter_mut() {
            t.refine(l, &sf, &width);
        }
        critical = tracked.iter().map(Tracked::value).chain(at_infinity.clone()).collect();
        let clash = (0..critical.len()).any(|i| (i + 1..critical.len()).any(|j| overlaps(&critical[i], &critical[j])));
        if !clash || width < floor {
            break;
        }
        width /= rat(1 << 16);
    }
    // merge enclosures that never separated
    critical.sort_by(|a, b| match (a, b) {
        (CriticalValue::Finite { lo: a, .. }, CriticalValue::Finite { lo: b, .. }) => a.cmp(b),
        (CriticalValue::Infinity, CriticalValue::Infinity) => std::cmp::Ordering::Equal,
        (CriticalValue::Infinity, _) => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Less,
    });
    let mut merged: Vec<CriticalValue> = Vec::new();
    for c in critical {
        match merged.last_mut() {
            Some(last) if overlaps(last, &c) => {
                if let (CriticalValue::Finite { hi, .. }, CriticalValue::Finite { hi: h2, .. }) = (last, &c) {
                    if h2 > hi {
                        *hi = h2.clone();
                    }
                }
            }
            _ => merged.push(c),
        }
    }
    let critical = merged;

    let samples = arc_samples(&critical);
    let counts = samples
        .iter()
        .map(|t| projective_real_count(&l.member(t.as_ref()), l.n()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RealZeroProfile { critical, counts, samples })
}

fn value_at_infinity(l: &Pencil) -> CriticalValue {
    let qn = l.q().coeff(l.n());
    if qn.is_zero() {
        CriticalValue::Infinity
    } else {
        let t = l.p().coeff(l.n()) / qn;
        CriticalValue::Finite { lo: t.clone(), hi: t }
    }
}

fn arc_samples(critical: &[CriticalValue]) -> Vec<Option<Rational>> {
    let finite: Vec<(&Rational, &Rational)> = critical
        .iter()
        .filter_map(|c| match c {
            CriticalValue::Finite { lo, hi } => Some((lo, hi)),
            CriticalValue::Infinity => None,
        })
        .collect();
    let has_inf = critical.len() > finite.len();
    if finite.is_empty() {
        return vec![Some(Rational::zero())];
    }
    let mut out: Vec<Option<Rational>> = finite
        .windows(2)
        .map(|w| Some((w[0].1 + w[1].0) / rat(2)))
        .collect();
    let last = finite.last().unwrap().1;
    let first = finite[0].0;
    if has_inf {
        out.push(Some(last + rat(1)));
        out.push(Some(first - rat(1)));
    } else {
        out.push(None);
    }
    out
}
