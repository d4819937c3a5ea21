//! Exhaustive enumeration and the move graph.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::{apply_move, morse_moves, BoundaryWeightedGarden, HalfGardenDiagram, Oval};

/// Partner maps of all noncrossing perfect matchings on `2k` points.
pub fn noncrossing_matchings(k: usize) -> Vec<Vec<usize>> {
    fn go(lo: usize, hi: usize, partner: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, rest: &mut Vec<(usize, usize)>) {
        if lo >= hi {
            match rest.pop() {
                Some((a, b)) => {
                    go(a, b, partner, out, rest);
                    rest.push((a, b));
                }
                None => out.push(partner.clone()),
            }
            return;
        }
        let mut j = lo + 1;
        while j < hi {
            partner[lo] = j;
            partner[j] = lo;
            rest.push((j + 1, hi));
            go(lo + 1, j, partner, out, rest);
            rest.pop();
            j += 2;
        }
    }
    let mut out = Vec::new();
    let mut partner = vec![0; 2 * k];
    go(0, 2 * k, &mut partner, &mut out, &mut Vec::new());
    out
}

/// All oval forests whose weights sum to `t`, each in normal form.
fn forests(t: u32, memo: &mut HashMap<u32, Vec<Vec<Oval>>>) -> Vec<Vec<Oval>> {
    if let Some(v) = memo.get(&t) {
        return v.clone();
    }
    let mut out: BTreeMap<String, Vec<Oval>> = BTreeMap::new();
    if t == 0 {
        out.insert(String::new(), Vec::new());
    }
    // first tree has total weight s, the rest of the forest t − s
    for s in 1..=t {
        let trees: Vec<Oval> = (1..=s)
            .flat_map(|r| {
                let inner = forests(s - r, memo);
                inner.into_iter().map(move |c| Oval::new(r, c))
            })
            .collect();
        for rest in forests(t - s, memo) {
            for tree in &trees {
                let mut f = rest.clone();
                f.push(tree.clone());
                super::normalize_forest(&mut f);
                out.insert(super::forest_key(&f), f);
            }
        }
    }
    let v: Vec<Vec<Oval>> = out.into_values().collect();
    memo.insert(t, v.clone());
    v
}

/// Ways to write `total` as an ordered sum of `parts` terms, each at least
/// `min`.
fn compositions(total: u32, parts: usize, min: u32) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut first = min;
    while first <= total {
        for mut rest in compositions(total - first, parts - 1, min) {
            rest.insert(0, first);
            out.push(rest);
        }
        first += 1;
    }
    out
}

fn gardens_on(partner: &[usize], n: u32, memo: &mut HashMap<u32, Vec<Vec<Oval>>>) -> Vec<BoundaryWeightedGarden> {
    let d = HalfGardenDiagram::from_partner_unchecked(partner.to_vec());
    let faces = d.face_count();
    let mut out = Vec::new();
    let spare = n - faces as u32;
    for oval_total in 0..=spare / 2 {
        let face_total = n - 2 * oval_total;
        let weight_choices = compositions(face_total, faces, 1);
        for split in compositions(oval_total, faces, 0) {
            let per_face: Vec<Vec<Vec<Oval>>> = split.iter().map(|&t| forests(t, memo)).collect();
            let mut idx = vec![0usize; faces];
            loop {
                let ovals: Vec<Vec<Oval>> = idx.iter().zip(&per_face).map(|(&i, f)| f[i].clone()).collect();
                for w in &weight_choices {
                    out.push(BoundaryWeightedGarden::new(d.clone(), w.clone(), ovals.clone()).unwrap());
                }
                let mut pos = 0;
                while pos < faces {
                    idx[pos] += 1;
                    if idx[pos] < per_face[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == faces {
                    break;
                }
            }
        }
    }
    out
}

fn enumerate_with_chords(n: u32, k: usize) -> Vec<(String, BoundaryWeightedGarden)> {
    if n == 0 || k as u32 + 1 > n {
        return Vec::new();
    }
    let found: Vec<(String, BoundaryWeightedGarden)> = noncrossing_matchings(k)
        .par_iter()
        .flat_map_iter(|p| {
            let mut memo = HashMap::new();
            gardens_on(p, n, &mut memo)
                .into_iter()
                .map(|g| (g.canonical_key(), g))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut unique: BTreeMap<String, BoundaryWeightedGarden> = BTreeMap::new();
    for (key, g) in found {
        unique.entry(key).or_insert(g);
    }
    unique.into_iter().collect()
}

/// All boundary-weighted gardens of total weight `n`, one per canonical key,
/// sorted by key.
pub fn enumerate_bwgs(n: u32) -> Vec<BoundaryWeightedGarden> {
    (0..n as usize)
        .flat_map(|k| enumerate_with_chords(n, k))
        .map(|(_, g)| g)
        .collect()
}

/// Result of partitioning gardens into classes under Morse moves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    pub count: usize,
    /// Least canonical key of each class, sorted.
    pub representatives: Vec<String>,
    /// Number of chords of each representative, parallel to
    /// `representatives`.
    pub chords: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Classes of gardens of weight `n` with exactly `k` chords. Moves keep the
/// chord count, so the full partition is the union over `k`.
pub fn equivalence_classes_with_chords(n: u32, k: usize) -> ClassSummary {
    let (gardens, mut parent) = move_components(n, k);
    // keys are sorted, so the smallest member index is the least key
    let mut reps: Vec<usize> = (0..gardens.len()).filter(|&i| find(&mut parent, i) == i).collect();
    reps.sort_unstable();
    ClassSummary {
        count: reps.len(),
        representatives: reps.iter().map(|&i| gardens[i].0.clone()).collect(),
        chords: vec![k; reps.len()],
    }
}

/// Gardens with `k` chords and a union-find forest of the move graph,
/// rooted at the least member of each class.
fn move_components(n: u32, k: usize) -> (Vec<(String, BoundaryWeightedGarden)>, Vec<usize>) {
    let gardens = enumerate_with_chords(n, k);
    let index: HashMap<&str, usize> = gardens.iter().enumerate().map(|(i, (key, _))| (key.as_str(), i)).collect();
    let edges: Vec<(usize, usize)> = gardens
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, (_, g))| {
            let mut targets: Vec<usize> = morse_moves(g)
                .iter()
                .map(|m| {
                    let h = apply_move(g, m).expect("generated move applies");
                    *index.get(h.canonical_key().as_str()).expect("move stays in the state space")
                })
                .collect();
            targets.sort_unstable();
            targets.dedup();
            targets.into_iter().map(move |j| (i, j))
        })
        .collect();
    let mut parent: Vec<usize> = (0..gardens.len()).collect();
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    (gardens, parent)
}

/// Classes of all gardens of total weight `n` under Morse moves.
pub fn equivalence_classes(n: u32) -> ClassSummary {
    let mut all = ClassSummary { count: 0, representatives: Vec::new(), chords: Vec::new() };
    for k in 0..n as usize {
        let part = equivalence_classes_with_chords(n, k);
        all.count += part.count;
        all.representatives.extend(part.representatives);
        all.chords.extend(part.chords);
    }
    all
}

/// Least canonical key in the class of `g`. Matches the representative
/// listed by [`equivalence_classes`].
pub fn class_representative(g: &BoundaryWeightedGarden) -> String {
    let key = g.canonical_key();
    let (gardens, mut parent) = move_components(g.total_weight(), g.k());
    let i = gardens.iter().position(|(k, _)| *k == key).expect("every garden is enumerated");
    gardens[find(&mut parent, i)].0.clone()
}

/// Number of classes without chords.
pub fn chordless_classes(n: u32) -> usize {
    equivalence_classes_with_chords(n, 0).count
}
