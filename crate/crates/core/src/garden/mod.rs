//! The garden of a pencil: the points where `f = P/Q` is real.
//!
//! Off the real axis the garden is `{g = 0}` with `g = Im(P(z)·Q(z̄))/y`.
//! Since `Im f = y·g/|Q|²`, the sign of `g` is the sign of `Im f` in the
//! upper half-plane, and `g(x, 0) = −W(x)`.

mod trace;
mod weights;

use num_traits::Zero;
use thiserror::Error;

use crate::pencil::{GenericityStatus, Pencil, PencilError};
use crate::poly::{
    isolate_real_roots, rat_to_f64, refine_interval, BivarPoly, IsolatingInterval, PolyError, RealPoly, Rational,
};

pub use trace::{trace_garden, TraceOptions};
pub use weights::{boundary_sums, edge_weights, face_signs, to_boundary_weighted, EdgeWeightedGardenData};

/// Default rounding tolerance of the λ projection.
pub const DEFAULT_LAMBDA_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GardenError {
    #[error("dependent basis: Im(P·conj Q) vanishes identically")]
    Dependent,
    #[error("nonsingular garden required: {0}")]
    Singular(String),
    #[error("pencil is not generic ({0:?})")]
    NotGeneric(GenericityStatus),
    #[error("tracing failed: {0}")]
    TracingFailed(String),
    #[error("quadrature did not converge on {0}")]
    Quadrature(String),
    #[error("λ projection failed: {0}")]
    Lambda(String),
    #[error("face sampling failed: {0}")]
    FaceSample(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

/// Real and imaginary parts of `p(x + iy)`.
fn complex_parts(p: &RealPoly) -> (BivarPoly, BivarPoly) {
    // (x + iy)^k = Σ C(k, j) x^(k−j) (iy)^j
    let mut re = Vec::new();
    let mut im = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut binom = Rational::from_integer(1.into());
        for j in 0..=k {
            let term = c * &binom;
            let signed = if (j / 2) % 2 == 0 { term } else { -term };
            if j % 2 == 0 {
                re.push((k - j, j, signed));
            } else {
                im.push((k - j, j, signed));
            }
            binom = binom * Rational::from_integer(((k - j) as i64).into())
                / Rational::from_integer(((j + 1) as i64).into());
        }
    }
    (BivarPoly::from_terms(&re), BivarPoly::from_terms(&im))
}

/// Exact defining polynomial of the off-axis garden, `Im(P(z)·Q(z̄))/y`.
pub fn defining_polynomial(p: &RealPoly, q: &RealPoly) -> Result<BivarPoly, GardenError> {
    let (pr, pi) = complex_parts(p);
    let (qr, qi) = complex_parts(q);
    // Q(z̄) = qr − i·qi
    let h = pi.mul(&qr).sub(&pr.mul(&qi));
    if h.is_zero() {
        return Err(GardenError::Dependent);
    }
    Ok(h.divide_by_y().expect("Im(P(z)Q(z̄)) vanishes on the real axis"))
}

/// The defining polynomial of a pencil's garden with its vertices.
#[derive(Debug, Clone)]
pub struct GardenCurve {
    pub g: BivarPoly,
    /// Isolated real Wronskian zeros, increasing.
    pub wronskian_roots: Vec<IsolatingInterval>,
    /// Whether infinity is also a vertex.
    pub vertex_at_infinity: bool,
    pub pencil: Pencil,
}

impl GardenCurve {
    /// Vertices refined to double precision.
    pub fn vertices(&self) -> Vec<f64> {
        let w = self.pencil.wronskian();
        self.wronskian_roots
            .iter()
            .map(|iv| rat_to_f64(&refine_interval(&w, iv, &tiny()).midpoint()))
            .collect()
    }
}

pub fn garden_polynomial(l: &Pencil) -> Result<GardenCurve, GardenError> {
    let g = defining_polynomial(l.p(), l.q())?;
    Ok(GardenCurve {
        g,
        wronskian_roots: isolate_real_roots(&l.wronskian())?,
        vertex_at_infinity: l.wronskian_drop() == 1,
        pencil: l.clone(),
    })
}

pub(crate) fn tiny() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 60))
}

/// Dense `f64` copy of a bivariate polynomial with its gradient.
#[derive(Debug, Clone)]
pub(crate) struct FloatBivar {
    c: Vec<Vec<f64>>,
}

impl FloatBivar {
    pub(crate) fn new(p: &BivarPoly) -> Self {
        let dx = p.deg_x().map_or(0, |d| d + 1);
        let dy = p.deg_y().map_or(0, |d| d + 1);
        let mut c = vec![vec![0.0; dy]; dx];
        for (i, j, v) in p.terms() {
            c[i][j] = rat_to_f64(v);
        }
        FloatBivar { c }
    }

    pub(crate) fn eval(&self, x: f64, y: f64) -> f64 {
        self.c
            .iter()
            .rev()
            .fold(0.0, |acc, row| acc * x + row.iter().rev().fold(0.0, |s, v| s * y + v))
    }

    /// Value and gradient.
    pub(crate) fn eval_grad(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let (mut g, mut gx, mut gy) = (0.0, 0.0, 0.0);
        for row in self.c.iter().rev() {
            let (mut r, mut ry) = (0.0, 0.0);
            for v in row.iter().rev() {
                ry = ry * y + r;
                r = r * y + v;
            }
            gx = gx * x + g;
            g = g * x + r;
            gy = gy * x + ry;
        }
        (g, gx, gy)
    }

    /// The polynomial with absolute coefficients at `(|x|, |y|)`; times a
    /// few ulps this bounds the rounding error of [`FloatBivar::eval`].
    pub(crate) fn eval_abs(&self, x: f64, y: f64) -> f64 {
        let (x, y) = (x.abs(), y.abs());
        self.c
            .iter()
            .rev()
            .fold(0.0, |acc, row| acc * x + row.iter().rev().fold(0.0, |s, v| s * y + v.abs()))
    }

    /// Rounding bound for [`FloatBivar::eval`] at `(x, y)`.
    pub(crate) fn noise(&self, x: f64, y: f64) -> f64 {
        let terms = (self.c.len() + self.c.first().map_or(0, Vec::len)) as f64;
        4.0 * terms * f64::EPSILON * self.eval_abs(x, y)
    }
}

/// One traced chord, joining vertices `from` and `to` through the upper
/// half-plane.
#[derive(Debug, Clone)]
pub struct TracedChord {
    pub from: usize,
    pub to: usize,
    pub points: Vec<(f64, f64)>,
}

/// A closed traced curve in the open upper half-plane; the last point
/// repeats the first.
#[derive(Debug, Clone)]
pub struct TracedOval {
    pub points: Vec<(f64, f64)>,
    /// Index of the innermost oval containing this one.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    /// The part of a chord-part face touching the real axis along `arc`.
    ChordPart { arc: usize },
    /// The region just inside an oval.
    OvalInterior { oval: usize },
}

#[derive(Debug, Clone)]
pub struct TracedFace {
    pub kind: FaceKind,
    pub sample: (f64, f64),
    /// Sign of `Im f` at the sample; zero until [`face_signs`] runs.
    pub sign: i32,
}

/// A traced upper half of a garden. Coordinates are in the working chart:
/// when infinity is a vertex the pencil is first moved by
/// `z = x* − 1/w`, which keeps the upper half-plane and the cyclic order of
/// the real line.
#[derive(Debug, Clone)]
pub struct TracedGarden {
    pub n: usize,
    /// `x*` of the chart change, if one was used.
    pub chart: Option<f64>,
    pub p: RealPoly,
    pub q: RealPoly,
    pub g: BivarPoly,
    /// Vertices in the working chart, increasing.
    pub vertices: Vec<f64>,
    pub chords: Vec<TracedChord>,
    pub ovals: Vec<TracedOval>,
    pub faces: Vec<TracedFace>,
    /// Scale of the picture, used for tolerances.
    pub scale: f64,
}

impl TracedGarden {
    /// Maps a working-chart point back to the pencil's own coordinates;
    /// `None` is the point at infinity.
    pub fn to_original(&self, (x, y): (f64, f64)) -> Option<(f64, f64)> {
        match self.chart {
            None => Some((x, y)),
            Some(xs) => {
                let d = x * x + y * y;
                if d == 0.0 {
                    return None;
                }
                // z = x* − 1/w with 1/w = (x − iy)/|w|²
                Some((xs - x / d, y / d))
            }
        }
    }

    /// Vertices in the pencil's own coordinates, `None` for infinity.
    pub fn original_vertices(&self) -> Vec<Option<f64>> {
        self.vertices.iter().map(|&v| self.to_original((v, 0.0)).map(|p| p.0)).collect()
    }

    /// Partner of each vertex along the chords.
    pub fn partner(&self) -> Vec<usize> {
        let mut p = vec![0; self.vertices.len()];
        for c in &self.chords {
            p[c.from] = c.to;
            p[c.to] = c.from;
        }
        p
    }

    /// Sign of `Im f` at a point of the upper half-plane.
    pub fn sign_at(&self, (x, y): (f64, f64)) -> i32 {
        let v = FloatBivar::new(&self.g).eval(x, y);
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    }
}
