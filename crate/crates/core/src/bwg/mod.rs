//! Boundary-weighted gardens in the upper half-disc model.
//!
//! A garden with `k` chords has `2k` boundary vertices `0..2k` on the real
//! circle. Arc `i` runs from vertex `i` to vertex `i + 1 (mod 2k)`. The
//! chords form a noncrossing perfect matching, and cut the half-disc into
//! `k + 1` faces. Walking a face keeps it on the left: after arc `i` we
//! follow the chord at vertex `i + 1` to its partner `p`, then take arc `p`.
//!
//! Faces are numbered by their smallest arc. Each face carries one integer
//! weight for its outer boundary component and a forest of ovals. An oval
//! stores a single weight shared by the two faces it separates.

mod enumerate;
mod labeling;
mod moves;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

pub use enumerate::{
    chordless_classes, class_representative, enumerate_bwgs, equivalence_classes, equivalence_classes_with_chords,
    noncrossing_matchings, ClassSummary,
};
pub use labeling::{check_proper_labeling, involution, Direction, Labeling};
pub use moves::{apply_move, morse_moves, MorseMove, OvalPath};

use crate::poly::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BwgError {
    #[error("invalid garden: {0}")]
    InvalidGarden(String),
    #[error("inadmissible move: {0}")]
    InvalidMove(String),
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
}

/// A weighted oval with the ovals nested directly inside it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Oval {
    pub weight: u32,
    pub children: Vec<Oval>,
}

impl Oval {
    pub fn leaf(weight: u32) -> Self {
        Oval { weight, children: Vec::new() }
    }

    pub fn new(weight: u32, children: Vec<Oval>) -> Self {
        let mut o = Oval { weight, children };
        o.normalize();
        o
    }

    /// Sum of the weights of this oval and everything inside it.
    pub fn total_weight(&self) -> u32 {
        self.weight + forest_weight(&self.children)
    }

    pub fn count(&self) -> usize {
        1 + self.children.iter().map(Oval::count).sum::<usize>()
    }

    fn normalize(&mut self) {
        normalize_forest(&mut self.children);
    }

    fn write_key(&self, out: &mut String) {
        write!(out, "({}", self.weight).unwrap();
        for c in &self.children {
            c.write_key(out);
        }
        out.push(')');
    }
}

pub(crate) fn normalize_forest(f: &mut [Oval]) {
    for o in f.iter_mut() {
        o.normalize();
    }
    f.sort_by_cached_key(forest_key_of);
}

fn forest_key_of(o: &Oval) -> String {
    let mut s = String::new();
    o.write_key(&mut s);
    s
}

pub(crate) fn forest_weight(f: &[Oval]) -> u32 {
    f.iter().map(Oval::total_weight).sum()
}

pub(crate) fn forest_key(f: &[Oval]) -> String {
    let mut s = String::new();
    for o in f {
        o.write_key(&mut s);
    }
    s
}

/// Chord structure of a half-disc diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HalfGardenDiagram {
    partner: Vec<usize>,
    #[serde(skip)]
    face_of_arc: Vec<usize>,
    #[serde(skip)]
    face_arcs: Vec<Vec<usize>>,
}

impl HalfGardenDiagram {
    /// Builds a diagram from the partner map of a noncrossing perfect
    /// matching.
    pub fn new(partner: Vec<usize>) -> Result<Self, BwgError> {
        let m = partner.len();
        if m % 2 == 1 {
            return Err(BwgError::InvalidGarden("odd number of vertices".into()));
        }
        for (v, &p) in partner.iter().enumerate() {
            if p >= m || p == v || partner[p] != v {
                return Err(BwgError::InvalidGarden(format!("vertex {v} is not matched")));
            }
        }
        let pairs = pairs_of(&partner);
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for &(c, d) in &pairs[i + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return Err(BwgError::InvalidGarden(format!(
                        "chords {a}-{b} and {c}-{d} cross"
                    )));
                }
            }
        }
        Ok(Self::from_partner_unchecked(partner))
    }

    pub(crate) fn from_partner_unchecked(partner: Vec<usize>) -> Self {
        let m = partner.len();
        let mut face_of_arc = vec![usize::MAX; m];
        let mut face_arcs = Vec::new();
        if m == 0 {
            face_arcs.push(Vec::new());
        }
        for start in 0..m {
            if face_of_arc[start] != usize::MAX {
                continue;
            }
            let id = face_arcs.len();
            let mut arcs = Vec::new();
            let mut a = start;
            while face_of_arc[a] == usize::MAX {
                face_of_arc[a] = id;
                arcs.push(a);
                a = partner[(a + 1) % m];
            }
            face_arcs.push(arcs);
        }
        HalfGardenDiagram { partner, face_of_arc, face_arcs }
    }

    pub fn chordless() -> Self {
        Self::from_partner_unchecked(Vec::new())
    }

    pub fn k(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self) -> &[usize] {
        &self.partner
    }

    /// Chords as `(low, high)` vertex pairs in increasing order.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        pairs_of(&self.partner)
    }

    pub fn face_count(&self) -> usize {
        self.face_arcs.len()
    }

    pub fn face_of_arc(&self, arc: usize) -> usize {
        self.face_of_arc[arc]
    }

    /// Arcs of a face in traversal order.
    pub fn face_arcs(&self, face: usize) -> &[usize] {
        &self.face_arcs[face]
    }

    /// The two faces on either side of the chord with lower endpoint `u`.
    pub fn chord_faces(&self, u: usize) -> (usize, usize) {
        let m = self.partner.len();
        (self.face_of_arc[(u + m - 1) % m], self.face_of_arc[u])
    }

    /// Chords (by lower endpoint) on the boundary of `face`.
    pub fn chords_on_face(&self, face: usize) -> Vec<(usize, usize)> {
        self.chords()
            .into_iter()
            .filter(|&(u, _)| {
                let (a, b) = self.chord_faces(u);
                a == face || b == face
            })
            .collect()
    }

    /// Boundary vertices of a face in traversal order: the two ends of each
    /// arc, in turn.
    pub fn face_vertices(&self, face: usize) -> Vec<usize> {
        let m = self.partner.len();
        self.face_arcs[face]
            .iter()
            .flat_map(|&a| [a, (a + 1) % m])
            .collect()
    }
}

fn pairs_of(partner: &[usize]) -> Vec<(usize, usize)> {
    partner
        .iter()
        .enumerate()
        .filter(|&(v, &p)| v < p)
        .map(|(v, &p)| (v, p))
        .collect()
}

/// A half-disc diagram with integer weights on faces and ovals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BoundaryWeightedGarden {
    diagram: HalfGardenDiagram,
    face_weights: Vec<u32>,
    ovals: Vec<Vec<Oval>>,
}

/// Exact weights of every element of a garden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWeights {
    /// Weight of arc `i`, indexed by arc. A chordless garden has the whole
    /// circle as its single arc.
    pub arcs: Vec<Rational>,
    /// Weight of each chord, in the order of [`HalfGardenDiagram::chords`].
    pub chords: Vec<Rational>,
    /// Oval weights per face, flattened depth-first.
    pub ovals: Vec<Vec<u32>>,
}

impl BoundaryWeightedGarden {
    pub fn new(
        diagram: HalfGardenDiagram,
        face_weights: Vec<u32>,
        mut ovals: Vec<Vec<Oval>>,
    ) -> Result<Self, BwgError> {
        let f = diagram.face_count();
        if face_weights.len() != f || ovals.len() != f {
            return Err(BwgError::InvalidGarden(format!(
                "expected {f} faces, got {} weights and {} oval forests",
                face_weights.len(),
                ovals.len()
            )));
        }
        if face_weights.contains(&0) {
            return Err(BwgError::InvalidGarden("zero face weight".into()));
        }
        fn positive(f: &[Oval]) -> bool {
            f.iter().all(|o| o.weight > 0 && positive(&o.children))
        }
        if !ovals.iter().all(|f| positive(f)) {
            return Err(BwgError::InvalidGarden("zero oval weight".into()));
        }
        for forest in ovals.iter_mut() {
            normalize_forest(forest);
        }
        Ok(BoundaryWeightedGarden { diagram, face_weights, ovals })
    }

    /// Garden with no chords.
    pub fn chordless(weight: u32, ovals: Vec<Oval>) -> Result<Self, BwgError> {
        Self::new(HalfGardenDiagram::chordless(), vec![weight], vec![ovals])
    }

    pub fn diagram(&self) -> &HalfGardenDiagram {
        &self.diagram
    }

    pub fn k(&self) -> usize {
        self.diagram.k()
    }

    pub fn face_weights(&self) -> &[u32] {
        &self.face_weights
    }

    pub fn ovals(&self) -> &[Vec<Oval>] {
        &self.ovals
    }

    pub fn oval_count(&self) -> usize {
        self.ovals.iter().flatten().map(Oval::count).sum()
    }

    /// Sum of face weights plus twice the oval weights.
    pub fn total_weight(&self) -> u32 {
        self.face_weights.iter().sum::<u32>()
            + 2 * self.ovals.iter().map(|f| forest_weight(f)).sum::<u32>()
    }

    fn key_unrotated(&self) -> String {
        let mut s = format!("{};", self.k());
        let pairs: Vec<String> = self
            .diagram
            .chords()
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect();
        s.push_str(&pairs.join(","));
        s.push(';');
        let forests: Vec<String> = self.ovals.iter().map(|f| forest_key(f)).collect();
        s.push_str(&forests.join("|"));
        s.push(';');
        let w: Vec<String> = self.face_weights.iter().map(u32::to_string).collect();
        s.push_str(&w.join(","));
        s
    }

    /// Image under the boundary symmetry sending vertex `v` to
    /// `r ± v (mod 2k)`; `reflect` chooses the minus sign.
    pub fn transform(&self, r: usize, reflect: bool) -> Self {
        let m = self.diagram.vertex_count();
        if m == 0 {
            return self.clone();
        }
        let vmap = |v: usize| if reflect { (r + m - v) % m } else { (r + v) % m };
        // arc i joins i and i+1; under reflection it joins r−i and r−i−1
        let amap = |a: usize| if reflect { (r + 2 * m - a - 1) % m } else { (r + a) % m };
        let mut partner = vec![0; m];
        for (v, &p) in self.diagram.partner.iter().enumerate() {
            partner[vmap(v)] = vmap(p);
        }
        let diagram = HalfGardenDiagram::from_partner_unchecked(partner);
        let mut face_weights = vec![0; diagram.face_count()];
        let mut ovals = vec![Vec::new(); diagram.face_count()];
        for f in 0..self.diagram.face_count() {
            let nf = diagram.face_of_arc(amap(self.diagram.face_arcs(f)[0]));
            face_weights[nf] = self.face_weights[f];
            ovals[nf] = self.ovals[f].clone();
        }
        BoundaryWeightedGarden { diagram, face_weights, ovals }
    }

    /// Key that is equal for two gardens exactly when a rotation or
    /// reflection of the boundary carries one onto the other.
    ///
    /// Format: `k;a-b,c-d;forest|forest;w,w` with chords as sorted vertex
    /// pairs, one oval forest per face written as nested `(weight ...)`
    /// groups, and the face weights, faces ordered by their smallest arc.
    pub fn canonical_key(&self) -> String {
        let m = self.diagram.vertex_count();
        if m == 0 {
            return self.key_unrotated();
        }
        (0..m)
            .flat_map(|r| [(r, false), (r, true)])
            .map(|(r, refl)| self.transform(r, refl).key_unrotated())
            .min()
            .unwrap()
    }

    /// Exact element weights: each chord gets `1/(4k+4)` and each face's
    /// arcs split the rest of the face weight equally.
    pub fn solve_edge_weights(&self) -> EdgeWeights {
        let k = self.k() as i64;
        let chord_w = Rational::new(1.into(), (4 * k + 4).into());
        let m = self.diagram.vertex_count();
        let mut arcs = vec![Rational::from_integer(0.into()); m];
        if m == 0 {
            // the whole real circle is one edge
            arcs.push(Rational::from_integer(self.face_weights[0].into()));
        }
        for f in 0..self.diagram.face_count() {
            let on_face = self.diagram.chords_on_face(f).len() as i64;
            let rest = Rational::from_integer(self.face_weights[f].into())
                - &chord_w * Rational::from_integer(on_face.into());
            let fa = self.diagram.face_arcs(f);
            for &a in fa {
                arcs[a] = &rest / Rational::from_integer((fa.len() as i64).into());
            }
        }
        fn flatten(f: &[Oval], out: &mut Vec<u32>) {
            for o in f {
                out.push(o.weight);
                flatten(&o.children, out);
            }
        }
        let ovals = self
            .ovals
            .iter()
            .map(|f| {
                let mut v = Vec::new();
                flatten(f, &mut v);
                v
            })
            .collect();
        EdgeWeights { arcs, chords: vec![chord_w; self.k()], ovals }
    }

    /// Checks the element weights against the face weights exactly.
    pub fn satisfies_weights(&self, w: &EdgeWeights) -> bool {
        let zero = Rational::from_integer(0.into());
        if w.arcs.iter().chain(&w.chords).any(|x| x <= &zero) {
            return false;
        }
        if self.k() == 0 {
            return w.arcs == [Rational::from_integer(self.face_weights[0].into())];
        }
        let chords = self.diagram.chords();
        (0..self.diagram.face_count()).all(|f| {
            let mut s: Rational = self.diagram.face_arcs(f).iter().map(|&a| w.arcs[a].clone()).sum();
            for (i, &(u, _)) in chords.iter().enumerate() {
                let (a, b) = self.diagram.chord_faces(u);
                if a == f || b == f {
                    s += &w.chords[i];
                }
            }
            s == Rational::from_integer(self.face_weights[f].into())
        })
    }
}

impl std::fmt::Display for BoundaryWeightedGarden {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.key_unrotated())
    }
}
