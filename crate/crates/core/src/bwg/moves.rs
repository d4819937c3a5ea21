//! Morse surgeries on boundary-weighted gardens.

use serde::Serialize;

use super::{normalize_forest, BoundaryWeightedGarden, BwgError, HalfGardenDiagram, Oval};

/// A region of the half-disc: a chord-part face, or the inside of an oval
/// reached by following child indices from that face.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OvalPath {
    pub face: usize,
    pub path: Vec<usize>,
}

/// One admissible surgery together with its weight outcome.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum MorseMove {
    /// Two chords on `face` are reconnected. The face splits into two with
    /// weights `split`; the faces across the chords merge. `to_second[i]`
    /// sends the face's `i`-th top-level oval to the second part, which is
    /// the part not containing the face's smallest arc.
    ChordChord {
        face: usize,
        first: usize,
        second: usize,
        split: (u32, u32),
        to_second: Vec<bool>,
    },
    /// The chord with lower endpoint `chord` absorbs the top-level oval
    /// `oval` of `face`.
    ChordOval { face: usize, chord: usize, oval: usize },
    /// Two ovals directly inside the same region merge.
    OvalOval { region: OvalPath, a: usize, b: usize },
    /// An oval merges with one of its children.
    OvalNested { parent: OvalPath, child: usize },
}

fn region<'a>(ovals: &'a [Vec<Oval>], r: &OvalPath) -> Option<&'a Vec<Oval>> {
    let mut f = ovals.get(r.face)?;
    for &i in &r.path {
        f = &f.get(i)?.children;
    }
    Some(f)
}

fn region_mut<'a>(ovals: &'a mut [Vec<Oval>], r: &OvalPath) -> Option<&'a mut Vec<Oval>> {
    let mut f = ovals.get_mut(r.face)?;
    for &i in &r.path {
        f = &mut f.get_mut(i)?.children;
    }
    Some(f)
}

/// Every region of a garden, faces first, then oval interiors depth-first.
fn regions(g: &BoundaryWeightedGarden) -> Vec<OvalPath> {
    fn walk(f: &[Oval], face: usize, path: &mut Vec<usize>, out: &mut Vec<OvalPath>) {
        for (i, o) in f.iter().enumerate() {
            path.push(i);
            out.push(OvalPath { face, path: path.clone() });
            walk(&o.children, face, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for (face, f) in g.ovals.iter().enumerate() {
        out.push(OvalPath { face, path: Vec::new() });
        let mut path = Vec::new();
        walk(f, face, &mut path, &mut out);
    }
    out
}

/// All admissible Morse moves of `g`, with every weight outcome.
pub fn morse_moves(g: &BoundaryWeightedGarden) -> Vec<MorseMove> {
    let d = &g.diagram;
    let mut moves = Vec::new();
    for face in 0..d.face_count() {
        let chords = d.chords_on_face(face);
        let w = g.face_weights[face];
        let t = g.ovals[face].len();
        for (i, &(c1, _)) in chords.iter().enumerate() {
            for &(c2, _) in &chords[i + 1..] {
                for a in 1..w {
                    for mask in 0..(1u64 << t) {
                        moves.push(MorseMove::ChordChord {
                            face,
                            first: c1,
                            second: c2,
                            split: (a, w - a),
                            to_second: (0..t).map(|b| mask >> b & 1 == 1).collect(),
                        });
                    }
                }
            }
            for oval in 0..t {
                moves.push(MorseMove::ChordOval { face, chord: c1, oval });
            }
        }
    }
    for r in regions(g) {
        let f = region(&g.ovals, &r).unwrap();
        for a in 0..f.len() {
            for b in a + 1..f.len() {
                moves.push(MorseMove::OvalOval { region: r.clone(), a, b });
            }
        }
        if !r.path.is_empty() {
            for child in 0..f.len() {
                moves.push(MorseMove::OvalNested { parent: r.clone(), child });
            }
        }
    }
    moves
}

fn bad(msg: &str) -> BwgError {
    BwgError::InvalidMove(msg.to_string())
}

/// Performs the surgery `m` on `g`.
pub fn apply_move(g: &BoundaryWeightedGarden, m: &MorseMove) -> Result<BoundaryWeightedGarden, BwgError> {
    match m {
        MorseMove::ChordChord { face, first, second, split, to_second } => {
            apply_chord_chord(g, *face, *first, *second, *split, to_second)
        }
        MorseMove::ChordOval { face, chord, oval } => {
            let d = &g.diagram;
            if *face >= d.face_count() || *chord >= d.vertex_count() || d.partner[*chord] < *chord {
                return Err(bad("no such chord"));
            }
            let (a, b) = d.chord_faces(*chord);
            let across = match (a == *face, b == *face) {
                (true, _) => b,
                (_, true) => a,
                _ => return Err(bad("chord is not on the face")),
            };
            if *oval >= g.ovals[*face].len() {
                return Err(bad("no such oval"));
            }
            let mut ovals = g.ovals.clone();
            let o = ovals[*face].remove(*oval);
            let mut weights = g.face_weights.clone();
            weights[*face] += o.weight;
            weights[across] += o.weight;
            ovals[across].extend(o.children);
            BoundaryWeightedGarden::new(d.clone(), weights, ovals)
        }
        MorseMove::OvalOval { region: r, a, b } => {
            let mut ovals = g.ovals.clone();
            let f = region_mut(&mut ovals, r).ok_or_else(|| bad("no such region"))?;
            if a >= b || *b >= f.len() {
                return Err(bad("no such oval pair"));
            }
            let ob = f.remove(*b);
            let oa = &mut f[*a];
            oa.weight += ob.weight;
            oa.children.extend(ob.children);
            BoundaryWeightedGarden::new(g.diagram.clone(), g.face_weights.clone(), ovals)
        }
        MorseMove::OvalNested { parent, child } => {
            let (&last, up) = parent.path.split_last().ok_or_else(|| bad("parent is a face"))?;
            let outer = OvalPath { face: parent.face, path: up.to_vec() };
            let mut ovals = g.ovals.clone();
            let f = region_mut(&mut ovals, &outer).ok_or_else(|| bad("no such region"))?;
            if last >= f.len() || *child >= f[last].children.len() {
                return Err(bad("no such oval"));
            }
            let mut o = f.remove(last);
            let c = o.children.remove(*child);
            f.push(Oval { weight: o.weight + c.weight, children: o.children });
            f.extend(c.children);
            BoundaryWeightedGarden::new(g.diagram.clone(), g.face_weights.clone(), ovals)
        }
    }
}

fn apply_chord_chord(
    g: &BoundaryWeightedGarden,
    face: usize,
    c1: usize,
    c2: usize,
    split: (u32, u32),
    to_second: &[bool],
) -> Result<BoundaryWeightedGarden, BwgError> {
    let d = &g.diagram;
    let n = d.vertex_count();
    if face >= d.face_count() || c1 == c2 || c1 >= n || c2 >= n {
        return Err(bad("no such chords"));
    }
    if split.0 == 0 || split.1 == 0 || split.0 + split.1 != g.face_weights[face] {
        return Err(bad("split must be a positive partition of the face weight"));
    }
    if to_second.len() != g.ovals[face].len() {
        return Err(bad("every top-level oval needs a side"));
    }
    let across = |c: usize| -> Result<usize, BwgError> {
        if d.partner[c] < c {
            return Err(bad("chords are named by their lower endpoint"));
        }
        let (a, b) = d.chord_faces(c);
        match (a == face, b == face) {
            (true, _) => Ok(b),
            (_, true) => Ok(a),
            _ => Err(bad("chord is not on the face")),
        }
    };
    let g1 = across(c1)?;
    let g2 = across(c2)?;

    let mut pts = [c1, d.partner[c1], c2, d.partner[c2]];
    pts.sort_unstable();
    let mut partner = d.partner.clone();
    let (p, q) = if d.partner[pts[0]] == pts[1] {
        ((pts[0], pts[3]), (pts[1], pts[2]))
    } else {
        ((pts[0], pts[1]), (pts[2], pts[3]))
    };
    partner[p.0] = p.1;
    partner[p.1] = p.0;
    partner[q.0] = q.1;
    partner[q.1] = q.0;
    let nd = HalfGardenDiagram::from_partner_unchecked(partner);

    let first_arc = d.face_arcs(face)[0];
    let (mut stay, mut go) = (Vec::new(), Vec::new());
    for (o, &s) in g.ovals[face].iter().zip(to_second) {
        if s { &mut go } else { &mut stay }.push(o.clone());
    }
    let mut weights = vec![0; nd.face_count()];
    let mut ovals = vec![Vec::new(); nd.face_count()];
    for nf in 0..nd.face_count() {
        let arcs = nd.face_arcs(nf);
        let mut old: Vec<usize> = arcs.iter().map(|&a| d.face_of_arc(a)).collect();
        old.sort_unstable();
        old.dedup();
        if old == [face] {
            if arcs.contains(&first_arc) {
                weights[nf] = split.0;
                ovals[nf] = std::mem::take(&mut stay);
            } else {
                weights[nf] = split.1;
                ovals[nf] = std::mem::take(&mut go);
            }
        } else if old.contains(&g1) || old.contains(&g2) {
            let mut want = vec![g1, g2];
            want.sort_unstable();
            if old != want {
                return Err(bad("surgery did not merge the opposite faces"));
            }
            weights[nf] = g.face_weights[g1] + g.face_weights[g2];
            ovals[nf] = g.ovals[g1].iter().chain(&g.ovals[g2]).cloned().collect();
        } else if old.len() == 1 {
            weights[nf] = g.face_weights[old[0]];
            ovals[nf] = g.ovals[old[0]].clone();
        } else {
            return Err(bad("surgery changed an unrelated face"));
        }
    }
    if weights.contains(&0) {
        return Err(bad("surgery did not split the face in two"));
    }
    for f in ovals.iter_mut() {
        normalize_forest(f);
    }
    BoundaryWeightedGarden::new(nd, weights, ovals)
}
