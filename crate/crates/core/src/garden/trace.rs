//! Predictor–corrector tracing of the upper half of a garden.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::{
    defining_polynomial, tiny, FaceKind, FloatBivar, GardenError, TracedChord, TracedFace, TracedGarden,
    TracedOval,
};
use crate::bwg::HalfGardenDiagram;
use crate::pencil::{is_generic, GenericityStatus, Pencil};
use crate::poly::{
    isolate_real_roots, numeric::complex_roots, rat, rat_to_f64, real_root_count, refine_square_free, resultant_eliminate,
    BivarPoly, RealPoly, Rational, Var,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Initial step, relative to the scale of the picture.
    pub step: f64,
    /// Corrector tolerance, relative to the scale of the picture.
    pub corrector_tol: f64,
    pub max_steps: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { step: 1e-3, corrector_tol: 1e-10, max_steps: 2_000_000 }
    }
}

type Pt = (f64, f64);

fn dist(a: Pt, b: Pt) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn seg_dist(p: Pt, a: Pt, b: Pt) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let l2 = dx * dx + dy * dy;
    if l2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / l2).clamp(0.0, 1.0);
    dist(p, (a.0 + t * dx, a.1 + t * dy))
}

/// Even-odd point in polygon; the polygon closes on itself.
pub(crate) fn inside(p: Pt, poly: &[Pt]) -> bool {
    let mut c = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) && p.0 < a.0 + (p.1 - a.1) * (b.0 - a.0) / (b.1 - a.1) {
            c = !c;
        }
    }
    c
}

pub(crate) struct Tracer {
    pub(crate) g: FloatBivar,
    pub(crate) scale: f64,
    opts: TraceOptions,
}

impl Tracer {
    pub(crate) fn new(g: &BivarPoly, scale: f64, opts: TraceOptions) -> Self {
        Tracer { g: FloatBivar::new(g), scale, opts }
    }

    /// Newton projection onto `g = 0` along the gradient.
    pub(crate) fn correct(&self, mut p: Pt) -> Option<Pt> {
        for _ in 0..16 {
            let (v, gx, gy) = self.g.eval_grad(p.0, p.1);
            let n2 = gx * gx + gy * gy;
            if n2 == 0.0 || !n2.is_finite() {
                return None;
            }
            let s = v / n2;
            p = (p.0 - s * gx, p.1 - s * gy);
            if (s * s * n2).sqrt() <= self.opts.corrector_tol * self.scale {
                return Some(p);
            }
            // badly scaled charts: the value is down in the rounding noise
            if v.abs() <= self.g.noise(p.0, p.1) {
                return Some(p);
            }
        }
        None
    }

    fn tangent(&self, p: Pt) -> Pt {
        let (_, gx, gy) = self.g.eval_grad(p.0, p.1);
        let n = gx.hypot(gy);
        (-gy / n, gx / n)
    }

    /// Follows the curve from `start` along `dir` until `stop` reports an end
    /// point for the step `prev → next`.
    fn march(
        &self,
        start: Pt,
        dir: Pt,
        mut stop: impl FnMut(usize, Pt, Pt) -> Option<Pt>,
    ) -> Result<Vec<Pt>, GardenError> {
        let h_max = 0.05 * self.scale;
        let h_min = 1e-13 * self.scale;
        let cos_max = 0.1f64.cos();
        let mut h = self.opts.step * self.scale;
        let mut pts = vec![start];
        let mut p = start;
        let mut t = dir;
        for step in 0..self.opts.max_steps {
            loop {
                if h < h_min {
                    return Err(GardenError::TracingFailed(format!(
                        "step size underflow near ({:.6e}, {:.6e})",
                        p.0, p.1
                    )));
                }
                let pred = (p.0 + h * t.0, p.1 + h * t.1);
                let Some(q) = self.correct(pred) else {
                    h /= 2.0;
                    continue;
                };
                let mut tq = self.tangent(q);
                if tq.0 * t.0 + tq.1 * t.1 < 0.0 {
                    tq = (-tq.0, -tq.1);
                }
                if dist(q, pred) > 0.25 * h || tq.0 * t.0 + tq.1 * t.1 < cos_max {
                    h /= 2.0;
                    continue;
                }
                if let Some(end) = stop(step, p, q) {
                    pts.push(end);
                    return Ok(pts);
                }
                pts.push(q);
                p = q;
                t = tq;
                h = (h * 1.5).min(h_max);
                break;
            }
        }
        Err(GardenError::TracingFailed(format!("no end after {} steps", self.opts.max_steps)))
    }

    fn chord(&self, from: usize, vertices: &[f64], used: &[bool]) -> Result<TracedChord, GardenError> {
        let v0 = vertices[from];
        let mut to = None;
        let pts = self.march((v0, 0.0), (0.0, 1.0), |_, a, b| {
            if b.1 > 0.0 {
                return None;
            }
            let x = a.0 + (b.0 - a.0) * a.1 / (a.1 - b.1);
            to = Some(x);
            Some((x, 0.0))
        })?;
        let x = to.expect("chord ended");
        let (j, d) = vertices
            .iter()
            .enumerate()
            .map(|(j, v)| (j, (v - x).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("vertices present");
        let gap = vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, v)| (v - vertices[j]).abs())
            .fold(f64::INFINITY, f64::min);
        // near the axis the chord is vertical, so the crossing is only as
        // good as the last step
        let step = dist(pts[pts.len() - 2], (x, 0.0));
        if j == from || used[j] || d > 0.25 * gap || d > step + 1e-6 * self.scale {
            return Err(GardenError::TracingFailed(format!(
                "chord from vertex {from} ({v0:.6}) ended at x = {x:.6}, unmatched"
            )));
        }
        let mut pts = pts;
        *pts.last_mut().unwrap() = (vertices[j], 0.0);
        Ok(TracedChord { from, to: j, points: pts })
    }

    fn oval(&self, seed: Pt) -> Result<TracedOval, GardenError> {
        let (_, gx, gy) = self.g.eval_grad(seed.0, seed.1);
        let n = gx.hypot(gy);
        let dir = (-gy / n, gx / n);
        let pts = self.march(seed, dir, |step, a, b| {
            (step >= 3 && seg_dist(seed, a, b) <= 0.5 * dist(a, b)).then_some(seed)
        })?;
        if pts.iter().any(|p| p.1 <= 0.0) {
            return Err(GardenError::TracingFailed(format!(
                "closed curve through ({:.6}, {:.6}) meets the real axis",
                seed.0, seed.1
            )));
        }
        Ok(TracedOval { points: pts, parent: None })
    }
}

/// `w^n·p(x* − 1/w)`.
fn chart_poly(p: &RealPoly, n: usize, xs: &Rational) -> RealPoly {
    let lin = RealPoly::new(vec![rat(-1), xs.clone()]);
    let mut out = RealPoly::zero();
    for (j, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = &lin.pow(j as u32) * &RealPoly::monomial(c.clone(), n - j);
        out = &out + &term;
    }
    out
}

/// The pencil moved so that infinity is not a vertex, with the `x*` used.
fn working_pencil(l: &Pencil) -> Result<(Pencil, Option<Rational>), GardenError> {
    if l.wronskian_drop() == 0 {
        return Ok((l.clone(), None));
    }
    let w = l.wronskian();
    let top = isolate_real_roots(&w)?
        .iter()
        .map(|iv| iv.hi.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    let mut xs = top.floor() + rat(1);
    loop {
        let wl = Pencil::new(chart_poly(l.p(), l.n(), &xs), chart_poly(l.q(), l.n(), &xs), l.n())?;
        if wl.wronskian_drop() == 0 {
            return Ok((wl, Some(xs)));
        }
        xs += rat(1);
    }
}

/// Upper-half-plane critical points of `f` with a real critical value make
/// the garden singular.
fn check_nonsingular(l: &Pencil) -> Result<(), GardenError> {
    let w = l.wronskian();
    let common = l.p().gcd(l.q());
    if !common.is_constant() {
        return Err(GardenError::Singular("P and Q share a zero".into()));
    }
    let sf = w.square_free_part()?;
    let real = real_root_count(&sf)?;
    let mut roots = sf.complex_roots();
    roots.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    for z in roots.into_iter().skip(real).filter(|z| z.im > 0.0) {
        let (p, q) = (l.p().eval_complex(z), l.q().eval_complex(z));
        let d = (p * q.conj()).im.abs() / (p.norm_sqr() + q.norm_sqr());
        if d < 1e-10 {
            return Err(GardenError::Singular(format!(
                "critical point {:.6}+{:.6}i has a real critical value",
                z.re, z.im
            )));
        }
    }
    Ok(())
}

fn float_poly_in(g: &BivarPoly, var: Var, value: f64) -> Vec<f64> {
    // coefficients of g with `var` fixed, in the other variable
    let mut out = Vec::new();
    for (i, j, c) in g.terms() {
        let (fixed, free) = match var {
            Var::X => (i, j),
            Var::Y => (j, i),
        };
        if out.len() <= free {
            out.resize(free + 1, 0.0);
        }
        out[free] += rat_to_f64(c) * value.powi(fixed as i32);
    }
    out
}

/// Real roots of a float polynomial, in increasing order.
pub(crate) fn float_real_roots(c: &[f64]) -> Vec<f64> {
    let big = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if big == 0.0 {
        return Vec::new();
    }
    let mut out: Vec<f64> = complex_roots(c)
        .into_iter()
        .filter(|z: &Complex64| z.im.abs() <= 1e-7 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    if c[0] == 0.0 {
        out.push(0.0);
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Points of `g = 0` with `∂g/∂x = 0` in the open upper half-plane.
pub(crate) fn oval_seeds(g: &BivarPoly) -> Result<Vec<Pt>, GardenError> {
    if g.deg_x().unwrap_or(0) == 0 {
        return if g.deg_y().unwrap_or(0) == 0 {
            Ok(Vec::new())
        } else {
            Err(GardenError::Singular("garden contains horizontal lines".into()))
        };
    }
    // g is even in y; eliminate x from G(x, s) with s = y²
    let terms: Vec<(usize, usize, Rational)> = g.terms().map(|(i, j, c)| (i, j / 2, c.clone())).collect();
    let big_g = BivarPoly::from_terms(&terms);
    let gx = big_g.partial(Var::X);
    let r = resultant_eliminate(&big_g, &gx, Var::X)?;
    if r.is_zero() {
        return Err(GardenError::Singular("the seeding system is degenerate".into()));
    }
    let fg = FloatBivar::new(g);
    let fgx = FloatBivar::new(&g.partial(Var::X));
    let mut seeds: Vec<Pt> = Vec::new();
    let sf = r.square_free_part()?;
    for iv in isolate_real_roots(&r)? {
        if !iv.hi.is_positive() || (iv.is_exact() && iv.lo.is_zero()) {
            continue;
        }
        // Newton on the full system polishes the rest
        let width = iv.hi.abs().max(iv.lo.abs()) * Rational::new(1.into(), (1u64 << 40).into());
        let s = rat_to_f64(&refine_square_free(&sf, &iv, &width).midpoint());
        if s <= 0.0 {
            continue;
        }
        let y0 = s.sqrt();
        // the line y = y0 is tangent at a seed, so the wanted roots are
        // double and may split off the axis; every root starts a Newton run
        let xs = complex_roots(&float_poly_in(&big_g, Var::Y, s));
        for x0 in xs.into_iter().map(|z| z.re) {
            // Newton on (g, g_x)
            let (mut x, mut y) = (x0, y0);
            let mut last = f64::INFINITY;
            for _ in 0..60 {
                let (a, ax, ay) = fg.eval_grad(x, y);
                let (b, bx, by) = fgx.eval_grad(x, y);
                let det = ax * by - ay * bx;
                if det == 0.0 || !det.is_finite() {
                    break;
                }
                let dx = (a * by - ay * b) / det;
                let dy = (ax * b - a * bx) / det;
                x -= dx;
                y -= dy;
                last = dx.hypot(dy);
                if last <= 1e-15 * (1.0 + x.hypot(y)) {
                    break;
                }
            }
            // rounding stalls the last digits
            let ok = last <= 1e-9 * (1.0 + x.hypot(y));
            if ok && y > 0.0 && !seeds.iter().any(|&p| dist(p, (x, y)) <= 1e-9 * (1.0 + x.hypot(y))) {
                seeds.push((x, y));
            }
        }
    }
    Ok(seeds)
}

/// Real roots in double precision.
pub(crate) fn refined_roots(p: &RealPoly) -> Result<Vec<f64>, GardenError> {
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let sf = p.square_free_part()?;
    Ok(isolate_real_roots(p)?
        .iter()
        .map(|iv| rat_to_f64(&refine_square_free(&sf, iv, &tiny()).midpoint()))
        .collect())
}

/// Innermost chord (by index) enclosing `p`, if any.
pub(crate) fn enclosing_chord(p: Pt, chords: &[TracedChord]) -> Option<usize> {
    chords
        .iter()
        .enumerate()
        .filter(|(_, c)| inside(p, &c.points))
        .min_by(|a, b| {
            let w = |c: &TracedChord| (c.points[0].0 - c.points.last().unwrap().0).abs();
            w(a.1).total_cmp(&w(b.1))
        })
        .map(|(i, _)| i)
}

/// Traces the upper half of the garden of a generic, nonsingular pencil.
pub fn trace_garden(l: &Pencil, opts: &TraceOptions) -> Result<TracedGarden, GardenError> {
    let status = is_generic(l)?.status;
    if status != GenericityStatus::Generic {
        return Err(GardenError::NotGeneric(status));
    }
    check_nonsingular(l)?;
    let (wl, chart) = working_pencil(l)?;
    let g = defining_polynomial(wl.p(), wl.q())?;
    let w = wl.wronskian();
    let vertices = refined_roots(&w)?;
    let seeds = oval_seeds(&g)?;
    let scale = vertices
        .iter()
        .map(|v| v.abs())
        .chain(seeds.iter().map(|p| p.0.abs().max(p.1)))
        .fold(1.0f64, f64::max);
    let tracer = Tracer::new(&g, scale, *opts);

    let mut used = vec![false; vertices.len()];
    let mut chords = Vec::new();
    for v in 0..vertices.len() {
        if used[v] {
            continue;
        }
        let c = tracer.chord(v, &vertices, &used)?;
        used[c.from] = true;
        used[c.to] = true;
        chords.push(c);
    }

    let mut ovals: Vec<TracedOval> = Vec::new();
    for &s in &seeds {
        let covered = chords
            .iter()
            .map(|c| &c.points)
            .chain(ovals.iter().map(|o| &o.points))
            .any(|pts| {
                pts.windows(2)
                    .any(|w| seg_dist(s, w[0], w[1]) <= 0.05 * dist(w[0], w[1]) + 1e-9 * scale)
            });
        if !covered {
            ovals.push(tracer.oval(s)?);
        }
    }
    for i in 0..ovals.len() {
        let p = ovals[i].points[0];
        let containing: Vec<usize> = (0..ovals.len()).filter(|&j| j != i && inside(p, &ovals[j].points)).collect();
        // the innermost container is inside all the others
        ovals[i].parent = containing
            .iter()
            .copied()
            .find(|&j| containing.iter().all(|&o| o == j || inside(ovals[j].points[0], &ovals[o].points)));
    }

    let mut t = TracedGarden {
        n: l.n(),
        chart: chart.as_ref().map(rat_to_f64),
        p: wl.p().clone(),
        q: wl.q().clone(),
        g,
        vertices,
        chords,
        ovals,
        faces: Vec::new(),
        scale,
    };
    t.faces = sample_faces(&t, &tracer)?;
    Ok(t)
}

/// The diagram of the traced chords.
pub(crate) fn diagram(t: &TracedGarden) -> Result<HalfGardenDiagram, GardenError> {
    if t.vertices.is_empty() {
        return Ok(HalfGardenDiagram::chordless());
    }
    HalfGardenDiagram::new(t.partner())
        .map_err(|e| GardenError::TracingFailed(format!("traced chords do not form a garden: {e}")))
}

/// A real point on arc `i`, the last arc passing through infinity.
pub(crate) fn arc_point(vertices: &[f64], i: usize) -> f64 {
    match vertices.len() {
        0 => 0.0,
        m if i + 1 < m => 0.5 * (vertices[i] + vertices[i + 1]),
        m => vertices[m - 1] + 1.0,
    }
}

fn sample_faces(t: &TracedGarden, tracer: &Tracer) -> Result<Vec<TracedFace>, GardenError> {
    let d = diagram(t)?;
    let mut faces = Vec::new();
    for f in 0..d.face_count() {
        let arc = if t.vertices.is_empty() { 0 } else { d.face_arcs(f)[0] };
        let x = arc_point(&t.vertices, arc);
        let ys: Vec<f64> = float_real_roots(&float_poly_in(&t.g, Var::X, x))
            .into_iter()
            .filter(|&y| y > 0.0)
            .collect();
        let y = ys.first().map_or(t.scale, |y| 0.5 * y);
        faces.push(TracedFace { kind: FaceKind::ChordPart { arc }, sample: (x, y), sign: 0 });
    }
    for (o, oval) in t.ovals.iter().enumerate() {
        let (lo, hi) = oval
            .points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
        let children: Vec<&TracedOval> = t.ovals.iter().filter(|c| c.parent == Some(o)).collect();
        let mut best: Option<(f64, Pt)> = None;
        for frac in [0.5, 0.37, 0.63, 0.21, 0.79] {
            let x = lo + frac * (hi - lo);
            let ys: Vec<f64> = float_real_roots(&float_poly_in(&t.g, Var::X, x))
                .into_iter()
                .filter(|&y| y > 0.0)
                .collect();
            for w in ys.windows(2) {
                let p = (x, 0.5 * (w[0] + w[1]));
                if inside(p, &oval.points)
                    && !children.iter().any(|c| inside(p, &c.points))
                    && best.map_or(true, |(gap, _)| w[1] - w[0] > gap)
                {
                    best = Some((w[1] - w[0], p));
                }
            }
        }
        let Some((_, sample)) = best else {
            return Err(GardenError::FaceSample(format!("no sample point inside oval {o}")));
        };
        faces.push(TracedFace { kind: FaceKind::OvalInterior { oval: o }, sample, sign: 0 });
    }
    let _ = tracer;
    Ok(faces)
}
