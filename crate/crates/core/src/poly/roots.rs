//! Real root counting (Sturm) and isolation (Descartes bisection).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{rat, rat_to_f64, PolyError, RealPoly, Rational};

/// An endpoint of a counting interval on the extended real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl From<Rational> for Bound {
    fn from(r: Rational) -> Self {
        Bound::Finite(r)
    }
}

/// Closed interval `[lo, hi]` holding exactly one distinct real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
}

impl IsolatingInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat(2)
    }

    pub fn approx(&self) -> f64 {
        rat_to_f64(&self.midpoint())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Sturm chain `p, p', −rem, …` with each member content-stripped
/// (scaled by a positive rational so coefficients stay primitive integers).
#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<RealPoly>,
}

impl SturmChain {
    pub fn new(p: &RealPoly) -> Self {
        let mut seq = Vec::new();
        if p.is_zero() {
            return SturmChain { seq };
        }
        seq.push(p.content_stripped());
        let d = p.derivative();
        if d.is_zero() {
            return SturmChain { seq };
        }
        seq.push(d.content_stripped());
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push((-r).content_stripped());
        }
        SturmChain { seq }
    }

    /// Generalized chain `a, b, −rem(a, b), …` used for Cauchy indices.
    pub fn generalized(a: &RealPoly, b: &RealPoly) -> Self {
        let mut seq = Vec::new();
        if a.is_zero() {
            return SturmChain { seq };
        }
        seq.push(a.content_stripped());
        if b.is_zero() {
            return SturmChain { seq };
        }
        seq.push(b.content_stripped());
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push((-r).content_stripped());
        }
        SturmChain { seq }
    }

    pub fn members(&self) -> &[RealPoly] {
        &self.seq
    }

    /// Sign variations at a point, zeros skipped.
    pub fn variations(&self, at: &Bound) -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &self.seq {
            let s = match at {
                Bound::NegInf => p.sign_at_infinity(false),
                Bound::PosInf => p.sign_at_infinity(true),
                Bound::Finite(x) => p.sign_at(x),
            };
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Distinct roots of the chain head in the half-open interval `(lo, hi]`.
    pub fn count_half_open(&self, lo: &Bound, hi: &Bound) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

fn check_endpoint(p: &RealPoly, b: &Bound) -> Result<(), PolyError> {
    if let Bound::Finite(x) = b {
        if p.eval(x).is_zero() {
            return Err(PolyError::EndpointRoot(x.to_string()));
        }
    }
    Ok(())
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
/// Finite endpoints must not be roots.
pub fn count_real_roots_in(p: &RealPoly, lo: &Bound, hi: &Bound) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::Indeterminate);
    }
    check_endpoint(p, lo)?;
    check_endpoint(p, hi)?;
    if p.is_constant() {
        return Ok(0);
    }
    let chain = SturmChain::new(&p.square_free_part()?);
    Ok(chain.count_half_open(lo, hi))
}

/// Like [`count_real_roots_in`] but counting multiplicities.
pub fn count_real_roots_in_with_multiplicity(
    p: &RealPoly,
    lo: &Bound,
    hi: &Bound,
) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::Indeterminate);
    }
    check_endpoint(p, lo)?;
    check_endpoint(p, hi)?;
    Ok(p
        .square_free_decomposition()
        .iter()
        .map(|(f, m)| m * SturmChain::new(f).count_half_open(lo, hi))
        .sum())
}

pub fn real_root_count(p: &RealPoly) -> Result<usize, PolyError> {
    count_real_roots_in(p, &Bound::NegInf, &Bound::PosInf)
}

pub fn real_root_count_with_multiplicity(p: &RealPoly) -> Result<usize, PolyError> {
    count_real_roots_in_with_multiplicity(p, &Bound::NegInf, &Bound::PosInf)
}

/// True iff `gcd(p, p')` has a real root.
pub fn has_multiple_real_root(p: &RealPoly) -> Result<bool, PolyError> {
    if p.is_zero() {
        return Err(PolyError::Indeterminate);
    }
    let g = p.gcd(&p.derivative());
    if g.is_constant() {
        return Ok(false);
    }
    Ok(real_root_count(&g)? > 0)
}

/// One interval per distinct real root of `p`, sorted, pairwise disjoint,
/// carrying exact multiplicities.
pub fn isolate_real_roots(p: &RealPoly) -> Result<Vec<IsolatingInterval>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::Indeterminate);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let factors = p.square_free_decomposition();
    // the product of the factors is the square-free part, up to a constant
    let sf = factors
        .iter()
        .fold(RealPoly::one(), |acc, (f, _)| &acc * f)
        .content_stripped();
    let mut raw = descartes_isolate(&sf);
    raw.sort_by(|a, b| a.lo.cmp(&b.lo));

    // endpoints must not be roots of sf, so sign tests are valid
    for iv in raw.iter_mut() {
        if iv.lo == iv.hi {
            continue;
        }
        tighten_off_roots(&sf, iv);
    }
    // closed intervals must be disjoint
    for i in 1..raw.len() {
        let (left, right) = raw.split_at_mut(i);
        let a = left.last_mut().unwrap();
        let b = &mut right[0];
        while a.hi >= b.lo {
            if !a.is_exact() {
                bisect_once(&sf, a);
            }
            if a.hi >= b.lo && !b.is_exact() {
                bisect_once(&sf, b);
            }
        }
    }
    for iv in raw.iter_mut() {
        iv.multiplicity = factors
            .iter()
            .find(|(f, _)| {
                if iv.is_exact() {
                    f.eval(&iv.lo).is_zero()
                } else {
                    f.sign_at(&iv.lo) * f.sign_at(&iv.hi) < 0
                }
            })
            .map(|(_, m)| *m)
            .expect("every isolated root belongs to one square-free factor");
    }
    Ok(raw)
}

/// Bisect until `hi − lo ≤ width` (or the root turns out rational).
/// `iv` must isolate a root of `p`.
pub fn refine_interval(p: &RealPoly, iv: &IsolatingInterval, width: &Rational) -> IsolatingInterval {
    let sf = p.square_free_part().expect("refine_interval on zero polynomial");
    refine_square_free(&sf, iv, width)
}

/// [`refine_interval`] for a polynomial already known to be square-free.
pub fn refine_square_free(sf: &RealPoly, iv: &IsolatingInterval, width: &Rational) -> IsolatingInterval {
    let sf = &sf.content_stripped();
    let mut iv = iv.clone();
    tighten_off_roots(sf, &mut iv);
    while !iv.is_exact() && &iv.width() > width {
        bisect_once(sf, &mut iv);
    }
    iv
}

/// Make both endpoints non-roots of the square-free `sf` while keeping
/// exactly one root inside. The open interval must hold exactly one root.
fn tighten_off_roots(sf: &RealPoly, iv: &mut IsolatingInterval) {
    if iv.is_exact() {
        return;
    }
    let mut chain: Option<SturmChain> = None;
    while !iv.is_exact() && (sf.eval(&iv.lo).is_zero() || sf.eval(&iv.hi).is_zero()) {
        let chain = chain.get_or_insert_with(|| SturmChain::new(sf));
        let m = iv.midpoint();
        if sf.eval(&m).is_zero() {
            // an interior root is the unique one
            iv.lo = m.clone();
            iv.hi = m;
            return;
        }
        // V(lo) − V(m) counts roots in (lo, m], and m is not a root
        let left = chain.count_half_open(&Bound::Finite(iv.lo.clone()), &Bound::Finite(m.clone()));
        if left >= 1 {
            iv.hi = m;
        } else {
            iv.lo = m;
        }
    }
}

/// One bisection step for an interval with non-root endpoints.
fn bisect_once(sf: &RealPoly, iv: &mut IsolatingInterval) {
    let m = iv.midpoint();
    let sm = sf.sign_at(&m);
    if sm == 0 {
        iv.lo = m.clone();
        iv.hi = m;
        return;
    }
    if sf.sign_at(&iv.lo) * sm < 0 {
        iv.hi = m;
    } else {
        iv.lo = m;
    }
}

// ---------------------------------------------------------------------------
// Descartes / Vincent–Collins–Akritas bisection on integer polynomials.

fn descartes_isolate(sf: &RealPoly) -> Vec<IsolatingInterval> {
    let mut out = Vec::new();
    let mut ints = sf.primitive_integer_coeffs();
    // root at zero
    if ints[0].is_zero() {
        out.push(IsolatingInterval {
            lo: Rational::zero(),
            hi: Rational::zero(),
            multiplicity: 1,
        });
        ints.remove(0);
    }
    if ints.len() <= 1 {
        return out;
    }
    let k = cauchy_bound_log2(&ints);
    let scale = Rational::from_integer(BigInt::one() << k);
    for negative in [false, true] {
        let mut q = ints.clone();
        if negative {
            for (i, c) in q.iter_mut().enumerate() {
                if i % 2 == 1 {
                    *c = -&*c;
                }
            }
        }
        // q(2^k x): roots now in (0, 1)
        for (i, c) in q.iter_mut().enumerate() {
            *c = &*c << (k * i);
        }
        for (num, level, exact) in isolate_unit(q) {
            let den = Rational::from_integer(BigInt::one() << level);
            let a = Rational::from_integer(num.clone()) / &den * &scale;
            let b = if exact {
                a.clone()
            } else {
                Rational::from_integer(num + 1) / &den * &scale
            };
            let (lo, hi) = if negative { (-b, -a) } else { (a, b) };
            out.push(IsolatingInterval {
                lo,
                hi,
                multiplicity: 1,
            });
        }
    }
    out
}

/// Smallest `k` with `2^k` strictly above every root modulus.
fn cauchy_bound_log2(c: &[BigInt]) -> usize {
    let lead = c.last().unwrap().abs();
    let max = c[..c.len() - 1]
        .iter()
        .map(|a| a.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    // 1 + max/lead < 2^k
    let ratio = Rational::new(max, lead) + Rational::one();
    let mut k = 0usize;
    let mut p = Rational::one();
    while p <= ratio {
        p *= rat(2);
        k += 1;
    }
    k
}

fn sign_variations(c: &[BigInt]) -> usize {
    let mut last = 0;
    let mut v = 0;
    for a in c {
        let s = if a.is_zero() {
            0
        } else if a.is_positive() {
            1
        } else {
            -1
        };
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn taylor_shift_one(c: &mut [BigInt]) {
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
}

/// Descartes bound for roots in (0,1): variations of `(x+1)^d q(1/(x+1))`.
fn unit_variations(q: &[BigInt]) -> usize {
    let mut r: Vec<BigInt> = q.iter().rev().cloned().collect();
    taylor_shift_one(&mut r);
    sign_variations(&r)
}

/// Roots of a square-free integer polynomial inside (0,1), as
/// `(c, level, exact)`: interval `(c/2^level, (c+1)/2^level)` or the exact
/// point `c/2^level`.
fn isolate_unit(q: Vec<BigInt>) -> Vec<(BigInt, usize, bool)> {
    let mut out = Vec::new();
    let mut stack = vec![(q, BigInt::zero(), 0usize)];
    while let Some((q, c, level)) = stack.pop() {
        if q.len() <= 1 {
            continue;
        }
        let v = unit_variations(&q);
        if v == 0 {
            continue;
        }
        if v == 1 {
            out.push((c, level, false));
            continue;
        }
        let d = q.len() - 1;
        // left half: 2^d q(x/2)
        let mut left: Vec<BigInt> = q
            .iter()
            .enumerate()
            .map(|(i, a)| a << (d - i))
            .collect();
        let mid_val: BigInt = left.iter().sum();
        let mut right = left.clone();
        taylor_shift_one(&mut right);
        let c2: BigInt = &c << 1usize;
        if mid_val.is_zero() {
            out.push((&c2 + 1, level + 1, true));
            // deflate: left has root at x = 1, right has root at x = 0
            left = divide_by_x_minus_one(&left);
            right.remove(0);
        }
        stack.push((left, c2.clone(), level + 1));
        stack.push((right, c2 + 1, level + 1));
    }
    out
}

fn divide_by_x_minus_one(c: &[BigInt]) -> Vec<BigInt> {
    // synthetic division by (x − 1), highest degree first
    let n = c.len();
    let mut q = vec![BigInt::zero(); n - 1];
    let mut acc = BigInt::zero();
    for i in (1..n).rev() {
        acc += &c[i];
        q[i - 1] = acc.clone();
    }
    debug_assert!((acc + &c[0]).is_zero());
    q
}

impl PartialOrd for IsolatingInterval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.lo.cmp(&other.lo).then_with(|| self.hi.cmp(&other.hi)))
    }
}

/// Real roots of several polynomials in one increasing sequence, tagged by
/// the index of their polynomial. The polynomials must not share a real
/// root; the returned intervals are pairwise disjoint.
pub fn interleave_real_roots(polys: &[&RealPoly]) -> Result<Vec<(usize, IsolatingInterval)>, PolyError> {
    for (i, p) in polys.iter().enumerate() {
        for q in &polys[i + 1..] {
            let g = p.gcd(q);
            if !g.is_constant() && real_root_count(&g)? > 0 {
                return Err(PolyError::SharedRoot);
            }
        }
    }
    let mut all: Vec<(usize, IsolatingInterval)> = Vec::new();
    let mut sfs = Vec::new();
    for (k, p) in polys.iter().enumerate() {
        sfs.push(p.square_free_part()?);
        all.extend(isolate_real_roots(p)?.into_iter().map(|iv| (k, iv)));
    }
    loop {
        all.sort_by(|a, b| a.1.lo.cmp(&b.1.lo).then(a.1.hi.cmp(&b.1.hi)));
        let clash: Vec<usize> = (1..all.len()).filter(|&i| all[i - 1].1.hi >= all[i].1.lo).collect();
        if clash.is_empty() {
            return Ok(all);
        }
        for i in clash {
            for j in [i - 1, i] {
                let (k, iv) = &all[j];
                if iv.is_exact() {
                    continue;
                }
                let target = iv.width() / rat(4);
                all[j].1 = refine_square_free(&sfs[*k], iv, &target);
            }
        }
    }
}
