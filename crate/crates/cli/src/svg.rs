//! Deterministic SVG pictures of traced gardens.
//!
//! By default the upper half-plane is drawn as the unit disc through
//! `z ↦ (z − i)/(z + i)`, so the real projective line is the boundary circle
//! and infinity sits at `1`. Faces are shaded by the sign of `Im f` with one
//! even-odd path: every chord closed up along the circle and every oval
//! flips the parity, exactly as crossing them flips the sign.

use std::fmt::Write;

use garden_core::bwg::BoundaryWeightedGarden;
use garden_core::garden::{EdgeWeightedGardenData, FaceKind, TracedGarden};

const SIZE: f64 = 600.0;
const RADIUS: f64 = 250.0;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SvgOptions {
    /// Plot raw coordinates instead of the disc.
    pub raw: bool,
}

type Pt = (f64, f64);

/// Fixed three-decimal formatting without negative zero.
fn num(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    format!("{:.3}", if r == 0.0 { 0.0 } else { r })
}

struct Frame {
    raw: bool,
    // raw mode window
    x0: f64,
    x1: f64,
}

impl Frame {
    fn new(t: &TracedGarden, raw: bool) -> Self {
        let vs: Vec<f64> = t.original_vertices().into_iter().flatten().collect();
        let lo = vs.iter().cloned().fold(-1.0, f64::min);
        let hi = vs.iter().cloned().fold(1.0, f64::max);
        let pad = 0.5 * (hi - lo);
        Frame { raw, x0: lo - pad, x1: hi + pad }
    }

    /// Screen position of a point of the pencil's own upper half-plane;
    /// `None` is infinity.
    fn place(&self, z: Option<Pt>) -> Option<Pt> {
        if self.raw {
            let (x, y) = z?;
            let s = SIZE / (self.x1 - self.x0);
            let p = ((x - self.x0) * s, SIZE - 20.0 - y * s);
            return (p.0.abs() < 1e6 && p.1.abs() < 1e6).then_some(p);
        }
        // (z − i)/(z + i) = (x² + y² − 1 − 2ix)/(x² + (y + 1)²)
        let (u, v) = match z {
            None => (1.0, 0.0),
            Some((x, y)) => {
                let d = x * x + (y + 1.0) * (y + 1.0);
                ((x * x + y * y - 1.0) / d, -2.0 * x / d)
            }
        };
        Some((SIZE / 2.0 + RADIUS * u, SIZE / 2.0 - RADIUS * v))
    }

    fn angle(&self, p: Pt) -> f64 {
        (SIZE / 2.0 - p.1).atan2(p.0 - SIZE / 2.0)
    }

    fn on_circle(&self, a: f64) -> Pt {
        (SIZE / 2.0 + RADIUS * a.cos(), SIZE / 2.0 - RADIUS * a.sin())
    }
}

fn path_d(pts: &[Pt], close: bool) -> String {
    let mut d = String::new();
    for (k, p) in pts.iter().enumerate() {
        let _ = write!(d, "{}{} {}", if k == 0 { "M" } else { " L" }, num(p.0), num(p.1));
    }
    if close {
        d.push_str(" Z");
    }
    d
}

fn inside(p: Pt, poly: &[Pt]) -> bool {
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

fn screen(f: &Frame, t: &TracedGarden, pts: &[Pt]) -> Vec<Pt> {
    pts.iter().filter_map(|&p| f.place(t.to_original(p))).collect()
}

/// Closed loops whose even-odd union is one sign class of faces.
fn parity_loops(f: &Frame, t: &TracedGarden) -> Vec<Vec<Pt>> {
    let mut loops = Vec::new();
    for c in &t.chords {
        let mut pts = screen(f, t, &c.points);
        if pts.len() < 2 {
            continue;
        }
        // back along the circle, counterclockwise
        let a0 = f.angle(*pts.last().unwrap());
        let mut a1 = f.angle(pts[0]);
        while a1 < a0 {
            a1 += std::f64::consts::TAU;
        }
        let steps = ((a1 - a0) / 0.02).ceil().max(1.0) as usize;
        pts.extend((1..steps).map(|k| f.on_circle(a0 + (a1 - a0) * k as f64 / steps as f64)));
        loops.push(pts);
    }
    for o in &t.ovals {
        loops.push(screen(f, t, &o.points));
    }
    loops
}

/// Whether the even-odd fill of the disc and the loops is the positive
/// class, read off any face sample.
fn filled_is_positive(f: &Frame, t: &TracedGarden, loops: &[Vec<Pt>]) -> bool {
    t.faces
        .iter()
        .filter(|fc| fc.sign != 0)
        .find_map(|face| f.place(t.to_original(face.sample)))
        .zip(t.faces.iter().find(|fc| fc.sign != 0))
        .map_or(true, |(p, face)| filled(p, loops) == (face.sign > 0))
}

/// Whether a screen point is covered by the even-odd parity path, which
/// also contains the whole boundary circle.
fn filled(p: Pt, loops: &[Vec<Pt>]) -> bool {
    loops.iter().filter(|l| inside(p, l)).count() % 2 == 0
}

/// SVG 1.1 picture of a traced garden with its element weights and, when
/// available, the boundary weights of its faces.
pub fn render_garden_svg(
    t: &TracedGarden,
    w: &EdgeWeightedGardenData,
    bwg: Option<&BoundaryWeightedGarden>,
    opts: SvgOptions,
) -> String {
    let f = Frame::new(t, opts.raw);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        SIZE
    );
    let _ = writeln!(
        s,
        "<style>.pos{{fill:#f4d8c4}} .neg{{fill:#c9dcef}} .axis{{fill:none;stroke:#000;stroke-width:2}} \
         .chord,.oval{{fill:none;stroke:#b22;stroke-width:1.5}} .vertex{{fill:#000}} \
         .weight{{font:11px sans-serif}} .face-weight{{font:bold 13px sans-serif}}</style>"
    );

    // faces
    if !opts.raw {
        let loops = parity_loops(&f, t);
        let filled_positive = filled_is_positive(&f, t, &loops);
        let (base, top) = if filled_positive { ("neg", "pos") } else { ("pos", "neg") };
        let _ = writeln!(s, "<g id=\"faces\">");
        let _ = writeln!(
            s,
            r#"<circle id="face-base" class="{base}" cx="{0}" cy="{0}" r="{1}"/>"#,
            num(SIZE / 2.0),
            num(RADIUS)
        );
        // disc minus the loops, under even-odd
        let mut d = path_d(&(0..360).map(|k| f.on_circle(k as f64 * std::f64::consts::TAU / 360.0)).collect::<Vec<_>>(), true);
        for l in &loops {
            d.push(' ');
            d.push_str(&path_d(l, true));
        }
        let _ = writeln!(s, r#"<path id="face-parity" class="{top}" fill-rule="evenodd" d="{d}"/>"#);
        let _ = writeln!(s, "</g>");
    }

    // real axis
    if opts.raw {
        let _ = writeln!(
            s,
            r#"<line id="axis" class="axis" x1="0.000" y1="{0}" x2="{1}" y2="{0}"/>"#,
            num(SIZE - 20.0),
            num(SIZE)
        );
    } else {
        let _ = writeln!(s, r#"<circle id="axis" class="axis" cx="{0}" cy="{0}" r="{1}"/>"#, num(SIZE / 2.0), num(RADIUS));
    }

    let _ = writeln!(s, "<g id=\"chords\">");
    for (i, c) in t.chords.iter().enumerate() {
        let _ = writeln!(s, r#"<path id="chord-{i}" class="chord" d="{}"/>"#, path_d(&screen(&f, t, &c.points), false));
    }
    let _ = writeln!(s, "</g>\n<g id=\"ovals\">");
    for (i, o) in t.ovals.iter().enumerate() {
        let _ = writeln!(s, r#"<path id="oval-{i}" class="oval" d="{}"/>"#, path_d(&screen(&f, t, &o.points), true));
    }
    let _ = writeln!(s, "</g>\n<g id=\"vertices\">");
    for (i, v) in t.vertices.iter().enumerate() {
        if let Some(p) = f.place(t.to_original((*v, 0.0))) {
            let _ = writeln!(s, r#"<circle id="vertex-{i}" class="vertex" cx="{}" cy="{}" r="4"/>"#, num(p.0), num(p.1));
        }
    }

    let _ = writeln!(s, "</g>\n<g id=\"weights\">");
    let label = |s: &mut String, id: String, class: &str, p: Pt, v: String| {
        let _ = writeln!(s, r#"<text id="{id}" class="{class}" x="{}" y="{}">{v}</text>"#, num(p.0), num(p.1));
    };
    for (i, c) in t.chords.iter().enumerate() {
        let pts = screen(&f, t, &c.points);
        if let (Some(p), Some(wt)) = (pts.get(pts.len() / 2), w.chords.get(i)) {
            label(&mut s, format!("weight-chord-{i}"), "weight", *p, format!("{wt:.4}"));
        }
    }
    for (i, o) in t.ovals.iter().enumerate() {
        let pts = screen(&f, t, &o.points);
        if let (Some(p), Some(wt)) = (pts.first(), w.ovals.get(i)) {
            label(&mut s, format!("weight-oval-{i}"), "weight", *p, format!("{wt:.4}"));
        }
    }
    if let Some(b) = bwg {
        let mut seen = Vec::new();
        for face in &t.faces {
            let FaceKind::ChordPart { arc } = face.kind else { continue };
            let k = if t.vertices.is_empty() { 0 } else { b.diagram().face_of_arc(arc) };
            if seen.contains(&k) {
                continue;
            }
            seen.push(k);
            if let (Some(p), Some(fw)) = (f.place(t.to_original(face.sample)), b.face_weights().get(k)) {
                label(&mut s, format!("face-weight-{k}"), "face-weight", p, fw.to_string());
            }
        }
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}
