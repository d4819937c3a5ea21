//! Bivariate polynomials and resultant elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{rat, rat_to_f64, PolyError, RealPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Polynomial in `x, y` with exact coefficients; `c[i][j]` multiplies
/// `x^i y^j`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivarPoly {
    c: Vec<Vec<Rational>>,
}

impl BivarPoly {
    pub fn new(mut c: Vec<Vec<Rational>>) -> Self {
        for row in c.iter_mut() {
            while row.last().is_some_and(|v| v.is_zero()) {
                row.pop();
            }
        }
        while c.last().is_some_and(|r| r.is_empty()) {
            c.pop();
        }
        BivarPoly { c }
    }

    pub fn zero() -> Self {
        BivarPoly { c: Vec::new() }
    }

    pub fn from_terms(terms: &[(usize, usize, Rational)]) -> Self {
        let mut c: Vec<Vec<Rational>> = Vec::new();
        for (i, j, v) in terms {
            if c.len() <= *i {
                c.resize(i + 1, Vec::new());
            }
            if c[*i].len() <= *j {
                c[*i].resize(j + 1, Rational::zero());
            }
            c[*i][*j] += v;
        }
        Self::new(c)
    }

    /// Embeds a univariate polynomial in the chosen variable.
    pub fn from_univariate(p: &RealPoly, var: Var) -> Self {
        let terms: Vec<_> = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, v)| match var {
                Var::X => (k, 0, v.clone()),
                Var::Y => (0, k, v.clone()),
            })
            .collect();
        Self::from_terms(&terms)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.c
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms as `(i, j, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.c.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(j, v)| (i, j, v))
        })
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.c.iter().filter_map(|r| r.len().checked_sub(1)).max()
    }

    pub fn degree_in(&self, var: Var) -> Option<usize> {
        match var {
            Var::X => self.deg_x(),
            Var::Y => self.deg_y(),
        }
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms().map(|(i, j, _)| i + j).max()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(
            self.c
                .iter()
                .map(|r| r.iter().map(|v| v * k).collect())
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms: Vec<_> = self.terms().map(|(i, j, v)| (i, j, v.clone())).collect();
        terms.extend(other.terms().map(|(i, j, v)| (i, j, v.clone())));
        Self::from_terms(&terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (i, j, a) in self.terms() {
            for (k, l, b) in other.terms() {
                terms.push((i + k, j + l, a * b));
            }
        }
        Self::from_terms(&terms)
    }

    pub fn partial(&self, var: Var) -> Self {
        let terms: Vec<_> = self
            .terms()
            .filter_map(|(i, j, v)| match var {
                Var::X if i > 0 => Some((i - 1, j, v * rat(i as i64))),
                Var::Y if j > 0 => Some((i, j - 1, v * rat(j as i64))),
                _ => None,
            })
            .collect();
        Self::from_terms(&terms)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for row in self.c.iter().rev() {
            let mut inner = Rational::zero();
            for v in row.iter().rev() {
                inner = inner * y + v;
            }
            acc = acc * x + inner;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.c.iter().rev() {
            let inner = row.iter().rev().fold(0.0, |s, v| s * y + rat_to_f64(v));
            acc = acc * x + inner;
        }
        acc
    }

    /// Restriction to a line `var = value`, as a polynomial in the other
    /// variable.
    pub fn specialize(&self, var: Var, value: &Rational) -> RealPoly {
        let parts = self.coeffs_in(match var {
            Var::X => Var::Y,
            Var::Y => Var::X,
        });
        RealPoly::new(parts.iter().map(|p| p.eval(value)).collect())
    }

    /// Coefficients of `self` viewed as a polynomial in `var`, each a
    /// polynomial in the other variable.
    pub fn coeffs_in(&self, var: Var) -> Vec<RealPoly> {
        match var {
            Var::X => self.c.iter().map(|r| RealPoly::new(r.clone())).collect(),
            Var::Y => {
                let dy = match self.deg_y() {
                    Some(d) => d,
                    None => return Vec::new(),
                };
                (0..=dy)
                    .map(|j| RealPoly::new((0..self.c.len()).map(|i| self.coeff(i, j)).collect()))
                    .collect()
            }
        }
    }

    /// `self / y` when `y` divides exactly.
    pub fn divide_by_y(&self) -> Option<Self> {
        if self.c.iter().any(|r| r.first().is_some_and(|v| !v.is_zero())) {
            return None;
        }
        Some(Self::new(
            self.c
                .iter()
                .map(|r| r.iter().skip(1).cloned().collect())
                .collect(),
        ))
    }

    /// Substitute `y → −y`.
    pub fn reflect_y(&self) -> Self {
        let terms: Vec<_> = self
            .terms()
            .map(|(i, j, v)| (i, j, if j % 2 == 1 { -v } else { v.clone() }))
            .collect();
        Self::from_terms(&terms)
    }

    /// Integer multiple with coprime integer coefficients, and the factor
    /// used.
    fn integer_scaled(&self) -> (Vec<Vec<BigInt>>, Rational) {
        let lcm = self
            .terms()
            .fold(BigInt::one(), |acc, (_, _, v)| acc.lcm(v.denom()));
        let k = Rational::from_integer(lcm);
        let grid = self
            .c
            .iter()
            .map(|r| r.iter().map(|v| (v * &k).to_integer()).collect())
            .collect();
        (grid, k)
    }
}

/// Exact resultant of `f` and `g` with respect to `var`, as a polynomial in
/// the remaining variable. Computed by evaluation at integer nodes,
/// fraction-free Sylvester determinants, and Newton interpolation.
pub fn resultant_eliminate(f: &BivarPoly, g: &BivarPoly, var: Var) -> Result<RealPoly, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let l = f.degree_in(var).unwrap();
    let m = g.degree_in(var).unwrap();
    if l == 0 && m == 0 {
        return Err(PolyError::DegenerateResultant);
    }
    let other = match var {
        Var::X => Var::Y,
        Var::Y => Var::X,
    };
    let (fi, kf) = f.integer_scaled();
    let (gi, kg) = g.integer_scaled();
    let fi = BivarPoly::new(
        fi.into_iter()
            .map(|r| r.into_iter().map(Rational::from_integer).collect())
            .collect(),
    );
    let gi = BivarPoly::new(
        gi.into_iter()
            .map(|r| r.into_iter().map(Rational::from_integer).collect())
            .collect(),
    );
    let fc = fi.coeffs_in(var);
    let gc = gi.coeffs_in(var);
    let dt_f = f.degree_in(other).unwrap_or(0);
    let dt_g = g.degree_in(other).unwrap_or(0);
    let bound = m * dt_f + l * dt_g;

    let nodes: Vec<BigInt> = (0..=bound as i64).map(BigInt::from).collect();
    let values: Vec<BigInt> = nodes
        .iter()
        .map(|t| {
            let tr = Rational::from_integer(t.clone());
            let a: Vec<BigInt> = fc.iter().map(|p| p.eval(&tr).to_integer()).collect();
            let b: Vec<BigInt> = gc.iter().map(|p| p.eval(&tr).to_integer()).collect();
            sylvester_det(&a, &b)
        })
        .collect();
    let res = newton_interpolate(&nodes, &values);
    // Res(kf·f, kg·g) = kf^m kg^l Res(f, g)
    let factor = kf.pow(m as i32) * kg.pow(l as i32);
    Ok(res.scale(&factor.recip()))
}

/// Sylvester determinant of `a` (degree `a.len()−1`) and `b`, coefficients
/// lowest first, with formal leading coefficients kept even when zero.
fn sylvester_det(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let l = a.len() - 1;
    let m = b.len() - 1;
    let size = l + m;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for r in 0..m {
        for (k, c) in a.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..l {
        for (k, c) in b.iter().rev().enumerate() {
            mat[m + r][r + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn newton_interpolate(nodes: &[BigInt], values: &[BigInt]) -> RealPoly {
    let n = nodes.len();
    let xs: Vec<Rational> = nodes.iter().cloned().map(Rational::from_integer).collect();
    let mut dd: Vec<Rational> = values.iter().cloned().map(Rational::from_integer).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = RealPoly::zero();
    for i in (0..n).rev() {
        let lin = RealPoly::new(vec![-xs[i].clone(), Rational::one()]);
        acc = &(&acc * &lin) + &RealPoly::constant(dd[i].clone());
    }
    acc
}
