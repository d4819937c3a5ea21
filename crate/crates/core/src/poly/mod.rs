//! Exact univariate polynomials over the rationals.
//!
//! Everything in this module is closed over [`Rational`]; floating point only
//! appears in the explicit `eval_f64` / `eval_complex` helpers and in
//! [`numeric`], which the tracer and the oracles use.

mod bivar;
pub mod numeric;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use bivar::{resultant_eliminate, BivarPoly, Var};
pub use roots::{
    count_real_roots_in, count_real_roots_in_with_multiplicity, has_multiple_real_root,
    interleave_real_roots, isolate_real_roots, real_root_count, real_root_count_with_multiplicity, refine_interval, refine_square_free,
    Bound, IsolatingInterval, SturmChain,
};

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("indeterminate: the zero polynomial has no isolated roots")]
    Indeterminate,
    #[error("endpoint root: {0} is a root of the polynomial")]
    EndpointRoot(String),
    #[error("resultant undefined: both inputs have degree 0 in the eliminated variable")]
    DegenerateResultant,
    #[error("zero polynomial passed where a nonzero one is required")]
    ZeroInput,
    #[error("the polynomials share a real root")]
    SharedRoot,
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion used by the numeric layers.
pub fn rat_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge numerator/denominator: shift both down before dividing
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift = (nb.max(db) - 1000).max(0) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                if n.is_sign_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

/// Exact rational closest to `x` among dyadics with 52 fractional bits.
pub fn f64_to_rat(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Dense univariate polynomial with exact rational coefficients, lowest
/// degree first. Trailing zeros are never stored, so the zero polynomial is
/// the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RealPoly {
    coeffs: Vec<Rational>,
}

impl RealPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RealPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        RealPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k];
        v.push(c);
        Self::new(v)
    }

    /// `Π (x − r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), Rational::one()])
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        if self.coeffs.iter().all(|c| c.denom().is_one()) {
            let d = self.coeffs.len().saturating_sub(1);
            return Rational::new(self.eval_scaled(x), x.denom().pow(d as u32));
        }
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `p(n/d)·d^deg` for integer coefficients.
    fn eval_scaled(&self, x: &Rational) -> BigInt {
        let (n, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c.numer() * &dpow;
            dpow *= d;
        }
        acc
    }

    /// Sign of `p(x)` as −1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        if self.coeffs.iter().all(|c| c.denom().is_one()) {
            let v = self.eval_scaled(x);
            return if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
        }
        sign_of(&self.eval(x))
    }

    /// Sign of `p` at `+∞` (`positive = true`) or `−∞`.
    pub fn sign_at_infinity(&self, positive: bool) -> i32 {
        match (self.leading_coeff(), self.degree()) {
            (None, _) => 0,
            (Some(lc), Some(d)) => {
                let s = sign_of(lc);
                if positive || d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rat_to_f64).collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rat_to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + rat_to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor, like integer division.
    pub fn div_rem(&self, d: &RealPoly) -> (RealPoly, RealPoly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lc = d.leading_coeff().unwrap().clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (RealPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (RealPoly::new(q), RealPoly::new(r))
    }

    /// Exact quotient; callers guarantee divisibility.
    pub fn exact_div(&self, d: &RealPoly) -> RealPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "exact_div with nonzero remainder");
        q
    }

    pub fn rem(&self, d: &RealPoly) -> RealPoly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> RealPoly {
        match self.leading_coeff() {
            None => RealPoly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Integer coefficients with unit content and positive leading
    /// coefficient.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let neg = ints.last().unwrap().is_negative();
        for c in ints.iter_mut() {
            *c = &*c / &g;
            if neg {
                *c = -&*c;
            }
        }
        ints
    }

    /// Same polynomial up to a positive constant, with primitive integer
    /// coefficients. Keeps the sign pattern, so Sturm chains stay valid.
    pub fn content_stripped(&self) -> RealPoly {
        if self.is_zero() {
            return RealPoly::zero();
        }
        let neg = self.leading_coeff().unwrap().is_negative();
        let ints = self.primitive_integer_coeffs();
        let p = RealPoly::new(ints.into_iter().map(Rational::from_integer).collect());
        if neg {
            -p
        } else {
            p
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RealPoly) -> RealPoly {
        // primitive remainder sequence over the integers
        let mut a = self.primitive_integer_coeffs();
        let mut b = other.primitive_integer_coeffs();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive(pseudo_rem(&a, &b));
            a = b;
            b = r;
        }
        RealPoly::new(a.into_iter().map(Rational::from_integer).collect()).monic()
    }

    /// Yun's square-free factorization: nonconstant, pairwise coprime,
    /// square-free `(factor, multiplicity)` pairs whose product with
    /// multiplicities equals `self` up to a constant.
    pub fn square_free_decomposition(&self) -> Vec<(RealPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let mut c = df.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// `p / gcd(p, p')`, made monic.
    pub fn square_free_part(&self) -> Result<RealPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        if self.is_constant() {
            return Ok(RealPoly::one());
        }
        let g = self.gcd(&self.derivative());
        Ok(self.exact_div(&g).monic())
    }

    /// `p(a·x + b)`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> RealPoly {
        let lin = RealPoly::new(vec![b.clone(), a.clone()]);
        let mut acc = RealPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &RealPoly::constant(c.clone());
        }
        acc
    }

    pub fn shift(&self, c: &Rational) -> RealPoly {
        self.compose_affine(&Rational::one(), c)
    }

    pub fn reflect(&self) -> RealPoly {
        RealPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `x^n · p(1/x)`, the same form read in the chart at infinity.
    pub fn reverse(&self, n: usize) -> RealPoly {
        assert!(self.degree().map_or(true, |d| d <= n), "reverse below degree");
        let mut v = vec![Rational::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[n - i] = c.clone();
        }
        RealPoly::new(v)
    }

    /// Homogenized evaluation `Σ a_i X^i Y^(n−i)` in floating point.
    pub fn eval_homogeneous_f64(&self, n: usize, x: f64, y: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| rat_to_f64(c) * x.powi(i as i32) * y.powi((n - i) as i32))
            .sum()
    }

    /// Numeric complex roots, see [`numeric::complex_roots`].
    pub fn complex_roots(&self) -> Vec<Complex64> {
        numeric::complex_roots(&self.to_f64_coeffs())
    }
}

pub(crate) fn sign_of(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// `W(p, q) = p·q' − q·p'`.
/// `lc(b)^k·a mod b` over the integers, trimmed.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &lr * c;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Divides out the content; empty stays empty.
fn primitive(mut c: Vec<BigInt>) -> Vec<BigInt> {
    let g = c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in c.iter_mut() {
            *x = &*x / &g;
        }
    }
    c
}

pub fn wronskian(p: &RealPoly, q: &RealPoly) -> RealPoly {
    &(p * &q.derivative()) - &(q * &p.derivative())
}

fn add_coeffs(a: &[Rational], b: &[Rational], negate_b: bool) -> RealPoly {
    let n = a.len().max(b.len());
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
        v.push(if negate_b { x - y } else { x + y });
    }
    RealPoly::new(v)
}

impl<'a> Add<&'a RealPoly> for &'a RealPoly {
    type Output = RealPoly;
    fn add(self, rhs: &RealPoly) -> RealPoly {
        add_coeffs(&self.coeffs, &rhs.coeffs, false)
    }
}

impl<'a> Sub<&'a RealPoly> for &'a RealPoly {
    type Output = RealPoly;
    fn sub(self, rhs: &RealPoly) -> RealPoly {
        add_coeffs(&self.coeffs, &rhs.coeffs, true)
    }
}

impl<'a> Mul<&'a RealPoly> for &'a RealPoly {
    type Output = RealPoly;
    fn mul(self, rhs: &RealPoly) -> RealPoly {
        if self.is_zero() || rhs.is_zero() {
            return RealPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RealPoly::new(v)
    }
}

impl Add for RealPoly {
    type Output = RealPoly;
    fn add(self, rhs: RealPoly) -> RealPoly {
        &self + &rhs
    }
}

impl Sub for RealPoly {
    type Output = RealPoly;
    fn sub(self, rhs: RealPoly) -> RealPoly {
        &self - &rhs
    }
}

impl Mul for RealPoly {
    type Output = RealPoly;
    fn mul(self, rhs: RealPoly) -> RealPoly {
        &self * &rhs
    }
}

impl Neg for &RealPoly {
    type Output = RealPoly;
    fn neg(self) -> RealPoly {
        RealPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for RealPoly {
    type Output = RealPoly;
    fn neg(self) -> RealPoly {
        -&self
    }
}

/// Prints in the expression grammar accepted by the CLI parser, e.g.
/// `x^4 + x^2 - 5*x - 4` or `-3/4*x^2 + 1/2`.
impl fmt::Display for RealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !unit {
                        write!(f, "{}*", mag)?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}
