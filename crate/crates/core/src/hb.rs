//! Zeros of `S_μ = P + μQ` in the two half-planes, by exact winding numbers,
//! and the canonical reduction of black/white root words.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{
    interleave_real_roots, real_root_count, Bound, PolyError, RealPoly, Rational, SturmChain,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HbError {
    #[error("μ must have nonzero imaginary part")]
    RealMu,
    #[error("on the Whitney umbrella: P and Q share a real zero")]
    CommonRealZero,
    #[error("degree hypothesis violated: {0}")]
    Degree(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A complex parameter with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mu {
    pub re: Rational,
    pub im: Rational,
}

impl Mu {
    pub fn new(re: Rational, im: Rational) -> Self {
        Mu { re, im }
    }

    pub fn conj(&self) -> Self {
        Mu { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Sign of the imaginary part.
    pub fn kappa(&self) -> i32 {
        if self.im.is_positive() {
            1
        } else if self.im.is_negative() {
            -1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    /// A zero of `P`.
    Black,
    /// A zero of `Q`.
    White,
}

/// Colors of points on the line in increasing order, with optional exact
/// positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColoredArrangement {
    pub colors: Vec<Color>,
    pub positions: Option<Vec<Rational>>,
}

impl ColoredArrangement {
    pub fn from_colors(colors: Vec<Color>) -> Self {
        ColoredArrangement { colors, positions: None }
    }

    pub fn black_count(&self) -> usize {
        self.colors.iter().filter(|&&c| c == Color::Black).count()
    }

    /// Parses a word over `B` and `W`.
    pub fn parse(word: &str) -> Option<Self> {
        word.chars()
            .map(|c| match c {
                'B' | 'b' => Some(Color::Black),
                'W' | 'w' => Some(Color::White),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Self::from_colors)
    }

    pub fn word(&self) -> String {
        self.colors
            .iter()
            .map(|c| match c {
                Color::Black => 'B',
                Color::White => 'W',
            })
            .collect()
    }
}

/// Deletes neighbouring same-color pairs until the colors alternate.
/// Surviving points keep their positions.
pub fn canonical_reduction(a: &ColoredArrangement) -> ColoredArrangement {
    let mut stack: Vec<usize> = Vec::new();
    for (i, c) in a.colors.iter().enumerate() {
        if stack.last().is_some_and(|&j| a.colors[j] == *c) {
            stack.pop();
        } else {
            stack.push(i);
        }
    }
    ColoredArrangement {
        colors: stack.iter().map(|&i| a.colors[i]).collect(),
        positions: a.positions.as_ref().map(|p| stack.iter().map(|&i| p[i].clone()).collect()),
    }
}

/// Reduction by explicit deletions: while some neighbours share a color,
/// `choose(k)` picks which of the `k` such pairs to delete.
pub fn reduce_with(colors: &[Color], mut choose: impl FnMut(usize) -> usize) -> Vec<Color> {
    let mut w = colors.to_vec();
    loop {
        let pairs: Vec<usize> = (1..w.len()).filter(|&i| w[i - 1] == w[i]).collect();
        if pairs.is_empty() {
            return w;
        }
        let i = pairs[choose(pairs.len()) % pairs.len()];
        w.drain(i - 1..=i);
    }
}

fn has_common_real_zero(p: &RealPoly, q: &RealPoly) -> Result<bool, PolyError> {
    if p.is_zero() && q.is_zero() {
        return Ok(true);
    }
    let g = p.gcd(q);
    if g.is_zero() || g.is_constant() {
        return Ok(false);
    }
    Ok(real_root_count(&g)? > 0)
}

/// The black/white word of the real zeros of `p` and `q`. A zero of even
/// multiplicity cancels itself and is left out.
pub fn arrangement(p: &RealPoly, q: &RealPoly) -> Result<ColoredArrangement, HbError> {
    if has_common_real_zero(p, q)? {
        return Err(HbError::CommonRealZero);
    }
    let mut polys: Vec<&RealPoly> = Vec::new();
    let mut tags = Vec::new();
    for (f, c) in [(p, Color::Black), (q, Color::White)] {
        if !f.is_zero() && !f.is_constant() {
            polys.push(f);
            tags.push(c);
        }
    }
    let merged = interleave_real_roots(&polys)?;
    let (colors, positions) = merged
        .into_iter()
        .filter(|(_, iv)| iv.multiplicity % 2 == 1)
        .map(|(k, iv)| (tags[k], iv.midpoint()))
        .unzip();
    Ok(ColoredArrangement { colors, positions: Some(positions) })
}

/// Number of black points left after reducing the word of `p` and `q`.
pub fn reduction_count_t(p: &RealPoly, q: &RealPoly) -> Result<usize, HbError> {
    Ok(canonical_reduction(&arrangement(p, q)?).black_count())
}

fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of zeros of `P + μQ` in the open upper half-plane, as the winding
/// number of `x ↦ (P + Re μ·Q)(x) + i·(Im μ·Q)(x)` over the projective line.
pub fn winding_number(p: &RealPoly, q: &RealPoly, mu: &Mu) -> Result<usize, HbError> {
    if mu.im.is_zero() {
        return Err(HbError::RealMu);
    }
    if has_common_real_zero(p, q)? {
        return Err(HbError::CommonRealZero);
    }
    let a = p + &q.scale(&mu.re);
    let b = q.scale(&mu.im);
    let d = p.degree().max(q.degree()).unwrap_or(0) as i64;
    if a.is_zero() {
        // S = i·B with B real and free of real zeros: conjugate pairs only
        return Ok((d / 2) as usize);
    }
    // Δarg S / π = Δarctan(B/A)/π − Ind(B/A)
    let da = a.degree().unwrap();
    let db = b.degree().unwrap();
    let end_term = if db > da && (db - da) % 2 == 1 {
        (sign(b.leading_coeff().unwrap()) * sign(a.leading_coeff().unwrap())) as i64
    } else {
        0
    };
    let chain = SturmChain::generalized(&a, &b);
    let index = chain.variations(&Bound::NegInf) as i64 - chain.variations(&Bound::PosInf) as i64;
    let turns = end_term - index;
    let plus = d + turns;
    debug_assert!(plus >= 0 && plus % 2 == 0 && plus / 2 <= d);
    Ok((plus / 2) as usize)
}

/// Where the zeros of `S_μ` lie, with the checks tied to the reduction
/// count `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroDistribution {
    pub sharp_plus: usize,
    pub sharp_minus: usize,
    pub real_count: usize,
    pub n: usize,
    pub kappa: i32,
    /// Black count of the reduced word, when `deg Q = n − 1` and its leading
    /// coefficient is positive.
    pub t: Option<usize>,
    /// `|#₊ − #₋| = T`, when `T` is defined.
    pub magnitude_law: Option<bool>,
    /// `#₊ − #₋` changes sign when `μ` is conjugated.
    pub conjugate_flips: bool,
    /// Label of the complement component of the real-zero discriminant,
    /// one of `0..=n`.
    pub component: usize,
}

/// Zero distribution of `P + μQ` for `deg P = n ≥ 1`, `deg Q ≤ n − 1`.
pub fn zero_distribution(p: &RealPoly, q: &RealPoly, mu: &Mu) -> Result<ZeroDistribution, HbError> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(HbError::Degree("deg P must be at least 1".into())),
    };
    if q.degree().is_some_and(|d| d >= n) {
        return Err(HbError::Degree("deg Q must be below deg P".into()));
    }
    let plus = winding_number(p, q, mu)?;
    let minus = n - plus;
    let conj_plus = winding_number(p, q, &mu.conj())?;
    let t = if q.degree() == Some(n - 1) && q.leading_coeff().is_some_and(|c| c.is_positive()) {
        Some(reduction_count_t(p, q)?)
    } else {
        None
    };
    let diff = plus as i64 - minus as i64;
    Ok(ZeroDistribution {
        sharp_plus: plus,
        sharp_minus: minus,
        real_count: 0,
        n,
        kappa: mu.kappa(),
        t,
        magnitude_law: t.map(|t| diff.unsigned_abs() as usize == t),
        conjugate_flips: conj_plus as i64 - (n - conj_plus) as i64 == -diff,
        component: plus,
    })
}

/// Whether `P + μQ` has a real zero, which happens exactly when `P` and `Q`
/// share one.
pub fn has_real_zero_mu(p: &RealPoly, q: &RealPoly, mu: &Mu) -> Result<bool, HbError> {
    if mu.im.is_zero() {
        return Err(HbError::RealMu);
    }
    Ok(has_common_real_zero(p, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn word(s: &str) -> ColoredArrangement {
        ColoredArrangement::parse(s).unwrap()
    }

    fn i() -> Mu {
        Mu::new(rat(0), rat(1))
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(canonical_reduction(&word("BWBW")).word(), "BWBW");
        assert_eq!(canonical_reduction(&word("BBWW")).word(), "");
        assert_eq!(canonical_reduction(&word("BWWBBW")).word(), "BW");
        assert_eq!(reduce_with(&word("BWWBBW").colors, |_| 0), word("BW").colors);
    }

    #[test]
    fn t_examples() {
        let f = RealPoly::from_ints;
        assert_eq!(arrangement(&f(&[-1, 0, 1]), &f(&[0, 1])).unwrap().word(), "BWB");
        assert_eq!(reduction_count_t(&f(&[-1, 0, 1]), &f(&[0, 1])).unwrap(), 2);
        assert_eq!(arrangement(&f(&[1, 0, 1]), &f(&[0, 1])).unwrap().word(), "W");
        assert_eq!(reduction_count_t(&f(&[1, 0, 1]), &f(&[0, 1])).unwrap(), 0);
        assert_eq!(arrangement(&f(&[2, -3, 1]), &f(&[0, 1])).unwrap().word(), "WBB");
        assert_eq!(reduction_count_t(&f(&[2, -3, 1]), &f(&[0, 1])).unwrap(), 0);
        assert_eq!(
            reduction_count_t(&f(&[-1, 0, 1]), &f(&[-1, 1])),
            Err(HbError::CommonRealZero)
        );
        // a double root drops out
        assert_eq!(arrangement(&f(&[1, -2, 1]), &f(&[0, 1])).unwrap().word(), "W");
    }

    #[test]
    fn winding_examples() {
        let f = RealPoly::from_ints;
        assert_eq!(winding_number(&f(&[0, 1]), &f(&[1]), &i()).unwrap(), 0);
        assert_eq!(winding_number(&f(&[-1, 0, 1]), &f(&[0, 1]), &i()).unwrap(), 0);
        assert_eq!(winding_number(&f(&[-1, 0, 1]), &f(&[0, 1]), &i().conj()).unwrap(), 2);
        assert_eq!(winding_number(&f(&[0, 1]), &f(&[1]), &Mu::new(rat(0), rat(0))), Err(HbError::RealMu));
        // a common nonreal factor does not disturb the count: (x²+1)(x+i)
        assert_eq!(winding_number(&f(&[0, 1, 0, 1]), &f(&[1, 0, 1]), &i()).unwrap(), 1);
    }

    #[test]
    fn distribution_examples() {
        let f = RealPoly::from_ints;
        let d = zero_distribution(&f(&[1, 0, 1]), &f(&[0, 1]), &i()).unwrap();
        assert_eq!((d.sharp_plus, d.sharp_minus, d.t), (1, 1, Some(0)));
        let d = zero_distribution(&f(&[-1, 0, 1]), &f(&[0, 1]), &i()).unwrap();
        assert_eq!((d.sharp_plus, d.sharp_minus, d.t, d.magnitude_law), (0, 2, Some(2), Some(true)));
        assert!(d.conjugate_flips);
        let d = zero_distribution(&f(&[2, -3, 1]), &f(&[0, 1]), &i()).unwrap();
        assert_eq!((d.sharp_plus, d.sharp_minus, d.t), (1, 1, Some(0)));
        // p = x, q = 1, μ = i: #₊ − #₋ = −1 while T = 1 and κ = +1
        let d = zero_distribution(&f(&[0, 1]), &f(&[1]), &i()).unwrap();
        assert_eq!((d.sharp_plus, d.sharp_minus, d.t, d.kappa), (0, 1, Some(1), 1));
        assert!(zero_distribution(&f(&[1]), &f(&[1]), &i()).is_err());
    }

    #[test]
    fn real_zero_examples() {
        let f = RealPoly::from_ints;
        assert!(has_real_zero_mu(&f(&[-1, 0, 1]), &f(&[-1, 1]), &i()).unwrap());
        assert!(!has_real_zero_mu(&f(&[-1, 0, 1]), &f(&[0, 1]), &i()).unwrap());
        assert!(!has_real_zero_mu(&f(&[1, 0, 1]), &f(&[1, 0, 1]), &i()).unwrap());
    }
}
