//! Edge weights as image lengths, face signs, and the λ projection.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::trace::{arc_point, diagram, enclosing_chord, inside, refined_roots, Tracer};
use super::{FaceKind, GardenError, TracedGarden, TraceOptions};
use crate::bwg::{BoundaryWeightedGarden, Oval};

/// Weights of the elements of the upper half of a garden, in units where
/// the real projective line has length 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeightedGardenData {
    /// Real edge `i` runs from vertex `i` to vertex `i + 1`; the last one
    /// passes through infinity. A chordless garden has a single edge.
    pub real_edges: Vec<f64>,
    /// Indexed like the traced chords.
    pub chords: Vec<f64>,
    /// Indexed like the traced ovals.
    pub ovals: Vec<f64>,
    /// Real edges plus twice the chords and ovals.
    pub total: f64,
}

/// `arctan(p/q)` up to a multiple of π, defined at poles too.
fn angle(p: f64, q: f64) -> f64 {
    p.atan2(q)
}

/// Step of an angle taken mod π, in `(−π/2, π/2]`.
fn wrap(d: f64) -> f64 {
    let r = d.rem_euclid(PI);
    if r > FRAC_PI_2 {
        r - PI
    } else {
        r
    }
}

const MAX_STEP: f64 = 0.25;
const MAX_DEPTH: u32 = 48;

/// Signed image length of a parametrized element between sorted knots.
///
/// Knots should sit at the zeros and poles of `f`, so that no piece turns
/// by π or more. Pieces are bisected until each turns by less than
/// [`MAX_STEP`] in the direction `dir` (when nonzero).
fn signed_length(
    knots: &[f64],
    theta: &impl Fn(f64) -> Option<f64>,
    dir: f64,
) -> Option<f64> {
    fn rec(
        a: f64,
        b: f64,
        ta: f64,
        tb: f64,
        depth: u32,
        dir: f64,
        budget: &mut usize,
        theta: &impl Fn(f64) -> Option<f64>,
    ) -> Option<f64> {
        let d = wrap(tb - ta);
        // steps against the direction are only rounding noise when tiny
        if d.abs() < MAX_STEP && (d * dir >= 0.0 || d.abs() < 1e-9) {
            return Some(d);
        }
        if depth == 0 || *budget == 0 {
            return None;
        }
        *budget -= 1;
        let m = 0.5 * (a + b);
        let tm = theta(m)?;
        Some(rec(a, m, ta, tm, depth - 1, dir, budget, theta)? + rec(m, b, tm, tb, depth - 1, dir, budget, theta)?)
    }
    let mut budget = 1usize << 20;
    let mut total = 0.0;
    for w in knots.windows(2) {
        if w[1] > w[0] {
            total += rec(w[0], w[1], theta(w[0])?, theta(w[1])?, MAX_DEPTH, dir, &mut budget, theta)?;
        }
    }
    Some(total)
}

/// Unsigned image length, in units of π. Without a known direction a first
/// pass fixes it; `f` is monotone along every element.
fn image_length(
    knots: &[f64],
    theta: &impl Fn(f64) -> Option<f64>,
    dir: Option<f64>,
    what: &str,
) -> Result<f64, GardenError> {
    let err = || GardenError::Quadrature(what.to_string());
    let dir = match dir {
        Some(d) => d,
        None => signed_length(knots, theta, 0.0).ok_or_else(err)?.signum(),
    };
    Ok(signed_length(knots, theta, dir).ok_or_else(err)?.abs() / PI)
}

/// Sorted knots on `[a, b]`: `pieces` even ones plus the interior `extra`.
fn knots(a: f64, b: f64, pieces: usize, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut k: Vec<f64> = (0..=pieces).map(|i| a + (b - a) * i as f64 / pieces as f64).collect();
    k.extend(extra.into_iter().filter(|&u| u > a && u < b));
    k.sort_by(f64::total_cmp);
    k
}

impl TracedGarden {
    fn theta_at(&self, x: f64, y: f64) -> f64 {
        let z = Complex64::new(x, y);
        let p = self.p.eval_complex(z);
        let q = self.q.eval_complex(z);
        // on the garden P·conj(Q) is real
        let r = p * q.conj();
        if q.norm_sqr() == 0.0 {
            return FRAC_PI_2;
        }
        r.re.atan2(q.norm_sqr())
    }

    fn theta_real(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        angle(self.p.eval_homogeneous_f64(self.n, s, c), self.q.eval_homogeneous_f64(self.n, s, c))
    }

    /// Zeros and poles of `f`: real ones as angles `atan x` in `(−π/2, π/2]`,
    /// and those in the upper half-plane.
    fn special_points(&self) -> Result<(Vec<f64>, Vec<(f64, f64)>), GardenError> {
        let mut real = Vec::new();
        let mut upper = Vec::new();
        for f in [&self.p, &self.q] {
            if f.degree().unwrap_or(0) < self.n {
                real.push(FRAC_PI_2);
            }
            if f.is_constant() {
                continue;
            }
            real.extend(refined_roots(f)?.into_iter().map(f64::atan));
            upper.extend(f.complex_roots().into_iter().filter(|z| z.im > 1e-9 * (1.0 + z.re.abs())).map(|z| (z.re, z.im)));
        }
        Ok((real, upper))
    }
}

/// Image length of a traced polyline, refining on the curve where needed.
fn polyline_weight(
    t: &TracedGarden,
    tracer: &Tracer,
    pts: &[(f64, f64)],
    special: &[(f64, f64)],
    what: &str,
) -> Result<f64, GardenError> {
    // parameter u in [0, #segments], linear on each segment
    let point = |u: f64| {
        let i = (u.floor() as usize).min(pts.len() - 2);
        let s = u - i as f64;
        let (a, b) = (pts[i], pts[i + 1]);
        if s == 0.0 {
            Some(a)
        } else if s == 1.0 {
            Some(b)
        } else {
            tracer.correct((a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1)))
        }
    };
    let mut extra = Vec::new();
    for &z in special {
        for (i, w) in pts.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let l2 = dx * dx + dy * dy;
            let s = (((z.0 - a.0) * dx + (z.1 - a.1) * dy) / l2).clamp(0.0, 1.0);
            let d = (a.0 + s * dx - z.0).hypot(a.1 + s * dy - z.1);
            if d <= 0.05 * l2.sqrt() + 1e-9 * t.scale {
                extra.push(i as f64 + s);
            }
        }
    }
    let k = knots(0.0, (pts.len() - 1) as f64, pts.len() - 1, extra);
    image_length(&k, &|u| point(u).map(|p| t.theta_at(p.0, p.1)), None, what)
}

/// Weight of every element: its image length under `arctan f`, over π.
pub fn edge_weights(t: &TracedGarden) -> Result<EdgeWeightedGardenData, GardenError> {
    let tracer = Tracer::new(&t.g, t.scale, TraceOptions::default());
    let (real, upper) = t.special_points()?;
    let theta = |phi: f64| Some(t.theta_real(phi));
    // shifted copies of the real special points, for arcs past π/2
    let real_all: Vec<f64> = real.iter().flat_map(|&a| [a - PI, a, a + PI]).collect();
    let m = t.vertices.len();
    let real_edges = if m == 0 {
        vec![image_length(&knots(-FRAC_PI_2, FRAC_PI_2, 64, real_all.iter().copied()), &theta, None, "the real line")?]
    } else {
        let phis: Vec<f64> = t.vertices.iter().map(|v| v.atan()).collect();
        let w = crate::poly::wronskian(&t.p, &t.q);
        (0..m)
            .map(|i| {
                let (a, b) = if i + 1 < m { (phis[i], phis[i + 1]) } else { (phis[m - 1], phis[0] + PI) };
                // f' = −W/Q², so W fixes the direction along the edge
                let dir = -w.eval_f64(t.arc_point(i)).signum();
                let k = knots(a, b, 16, real_all.iter().copied());
                image_length(&k, &theta, Some(dir), &format!("real edge {i}"))
            })
            .collect::<Result<Vec<_>, GardenError>>()?
    };
    let chords = t
        .chords
        .iter()
        .enumerate()
        .map(|(i, c)| polyline_weight(t, &tracer, &c.points, &upper, &format!("chord {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let ovals = t
        .ovals
        .iter()
        .enumerate()
        .map(|(i, o)| polyline_weight(t, &tracer, &o.points, &upper, &format!("oval {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let total = real_edges.iter().sum::<f64>() + 2.0 * chords.iter().sum::<f64>() + 2.0 * ovals.iter().sum::<f64>();
    Ok(EdgeWeightedGardenData { real_edges, chords, ovals, total })
}

/// The bwg face containing an upper-half-plane point outside all ovals.
fn chord_face_of(t: &TracedGarden, d: &crate::bwg::HalfGardenDiagram, p: (f64, f64)) -> usize {
    if t.vertices.is_empty() {
        return 0;
    }
    let arc = match enclosing_chord(p, &t.chords) {
        Some(c) => t.chords[c].from.min(t.chords[c].to),
        None => t.vertices.len() - 1,
    };
    d.face_of_arc(arc)
}

fn round_weight(x: f64, tol: f64, what: &str) -> Result<u32, GardenError> {
    let r = x.round();
    if r < 1.0 || (x - r).abs() > tol {
        return Err(GardenError::Lambda(format!("{what} has weight {x:.9}, not within {tol:e} of a positive integer")));
    }
    Ok(r as u32)
}

/// Unrounded weight around the boundary of each chord-part face, in the
/// diagram's face order.
pub fn boundary_sums(t: &TracedGarden, w: &EdgeWeightedGardenData) -> Result<Vec<f64>, GardenError> {
    let d = diagram(t)?;
    if t.vertices.is_empty() {
        return Ok(vec![w.real_edges.iter().sum()]);
    }
    Ok((0..d.face_count())
        .map(|f| {
            let arcs: f64 = d.face_arcs(f).iter().map(|&a| w.real_edges[a]).sum();
            let chords: f64 = t
                .chords
                .iter()
                .zip(&w.chords)
                .filter(|(c, _)| {
                    let (a, b) = d.chord_faces(c.from.min(c.to));
                    a == f || b == f
                })
                .map(|(_, x)| x)
                .sum();
            arcs + chords
        })
        .collect())
}

/// Sums the weights around every boundary component and rounds.
pub fn to_boundary_weighted(
    t: &TracedGarden,
    w: &EdgeWeightedGardenData,
    tol: f64,
) -> Result<BoundaryWeightedGarden, GardenError> {
    let d = diagram(t)?;
    let face_weights = boundary_sums(t, w)?
        .into_iter()
        .enumerate()
        .map(|(f, sum)| round_weight(sum, tol, &format!("face {f}")))
        .collect::<Result<Vec<_>, _>>()?;
    let weights = w
        .ovals
        .iter()
        .enumerate()
        .map(|(i, &x)| round_weight(x, tol, &format!("oval {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    fn build(t: &TracedGarden, weights: &[u32], o: usize) -> Oval {
        let children = (0..t.ovals.len())
            .filter(|&c| t.ovals[c].parent == Some(o))
            .map(|c| build(t, weights, c))
            .collect();
        Oval::new(weights[o], children)
    }
    let mut ovals = vec![Vec::new(); d.face_count()];
    for (o, oval) in t.ovals.iter().enumerate() {
        if oval.parent.is_none() {
            ovals[chord_face_of(t, &d, oval.points[0])].push(build(t, &weights, o));
        }
    }
    let g = BoundaryWeightedGarden::new(d, face_weights, ovals)
        .map_err(|e| GardenError::Lambda(format!("inconsistent garden: {e}")))?;
    if g.total_weight() as usize != t.n {
        return Err(GardenError::Lambda(format!("total weight {} differs from n = {}", g.total_weight(), t.n)));
    }
    Ok(g)
}

/// Assigns each face the sign of `Im f` at its sample and checks that the
/// signs alternate across every chord and oval.
pub fn face_signs(t: &TracedGarden) -> Result<TracedGarden, GardenError> {
    let mut t = t.clone();
    for i in 0..t.faces.len() {
        let s = t.sign_at(t.faces[i].sample);
        if s == 0 {
            return Err(GardenError::FaceSample(format!("sample {:?} lies on the garden", t.faces[i].sample)));
        }
        t.faces[i].sign = s;
    }
    let d = diagram(&t)?;
    let chord_sign = |arc: usize| {
        t.faces
            .iter()
            .find(|f| matches!(f.kind, FaceKind::ChordPart { arc: a } if d.face_of_arc(a) == d.face_of_arc(arc)))
            .map(|f| f.sign)
    };
    let bad = |what: String| Err(GardenError::FaceSample(format!("signs do not alternate across {what}")));
    for c in &t.chords {
        let u = c.from.min(c.to);
        let m = t.vertices.len();
        if chord_sign(u) == chord_sign((u + m - 1) % m) {
            return bad(format!("the chord at vertex {u}"));
        }
    }
    for (o, oval) in t.ovals.iter().enumerate() {
        let inner = t.faces.iter().find(|f| f.kind == FaceKind::OvalInterior { oval: o }).map(|f| f.sign);
        let outer = match oval.parent {
            Some(p) => t.faces.iter().find(|f| f.kind == FaceKind::OvalInterior { oval: p }).map(|f| f.sign),
            None if t.vertices.is_empty() => Some(t.faces[0].sign),
            None => {
                let arc = match enclosing_chord(oval.points[0], &t.chords) {
                    Some(c) => t.chords[c].from.min(t.chords[c].to),
                    None => t.vertices.len() - 1,
                };
                chord_sign(arc)
            }
        };
        if inner == outer {
            return bad(format!("oval {o}"));
        }
    }
    Ok(t)
}

impl TracedGarden {
    /// Whether walking chord `i` along its points keeps the positive face on
    /// the left. Needs signed faces.
    pub fn chord_positive_left(&self, i: usize) -> Option<bool> {
        let c = &self.chords[i];
        let d = diagram(self).ok()?;
        let m = self.vertices.len();
        // leaving vertex `from` upwards, the arc before it is on the left
        let left_arc = (c.from + m - 1) % m;
        let f = d.face_of_arc(left_arc);
        let s = self
            .faces
            .iter()
            .find(|x| matches!(x.kind, FaceKind::ChordPart { arc } if d.face_of_arc(arc) == f))?
            .sign;
        (s != 0).then_some(s > 0)
    }

    /// Whether oval `i`, walked along its points, has the positive face on
    /// the left. Needs signed faces.
    pub fn oval_positive_left(&self, i: usize) -> Option<bool> {
        let pts = &self.ovals[i].points;
        let area: f64 = pts.windows(2).map(|w| w[0].0 * w[1].1 - w[1].0 * w[0].1).sum();
        let s = self.faces.iter().find(|f| f.kind == FaceKind::OvalInterior { oval: i })?.sign;
        // counterclockwise walks keep the interior on the left
        (s != 0).then_some((area > 0.0) == (s > 0))
    }

    /// Whether `p` lies inside oval `i`.
    pub fn in_oval(&self, i: usize, p: (f64, f64)) -> bool {
        inside(p, &self.ovals[i].points)
    }

    /// A real point on arc `i`.
    pub fn arc_point(&self, i: usize) -> f64 {
        arc_point(&self.vertices, i)
    }
}
