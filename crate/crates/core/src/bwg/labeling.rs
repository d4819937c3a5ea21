//! Vertex labelings and the descent condition on faces.

use serde::{Deserialize, Serialize};

use super::{BoundaryWeightedGarden, BwgError};

/// Orientation of the boundary components. Under `Forward` a face made of
/// even arcs is walked in arc order and a face of odd arcs against it;
/// `Backward` swaps the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// An orientation together with labels `1..=2k`, indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labeling {
    pub direction: Direction,
    pub labels: Vec<u32>,
}

fn validate(g: &BoundaryWeightedGarden, labels: &[u32]) -> Result<(), BwgError> {
    let m = g.diagram().vertex_count();
    if m == 0 {
        return Err(BwgError::InvalidLabeling("garden has no chords".into()));
    }
    if labels.len() != m {
        return Err(BwgError::InvalidLabeling(format!("expected {m} labels, got {}", labels.len())));
    }
    let mut seen = vec![false; m + 1];
    for &l in labels {
        let l = l as usize;
        if l == 0 || l > m || seen[l] {
            return Err(BwgError::InvalidLabeling(format!("labels must be a permutation of 1..={m}")));
        }
        seen[l] = true;
    }
    Ok(())
}

fn cyclic_descents(seq: &[u32]) -> usize {
    (0..seq.len()).filter(|&i| seq[i] > seq[(i + 1) % seq.len()]).count()
}

/// True when every face, read in the chosen direction, has at most as many
/// cyclic descents in its labels as its weight.
pub fn check_proper_labeling(g: &BoundaryWeightedGarden, labeling: &Labeling) -> Result<bool, BwgError> {
    validate(g, &labeling.labels)?;
    let d = g.diagram();
    Ok((0..d.face_count()).all(|f| {
        let even = d.face_arcs(f)[0] % 2 == 0;
        let mut seq: Vec<u32> = d.face_vertices(f).iter().map(|&v| labeling.labels[v]).collect();
        if even != (labeling.direction == Direction::Forward) {
            seq.reverse();
        }
        cyclic_descents(&seq) <= g.face_weights()[f] as usize
    }))
}

/// Reverses the direction and sends label `i` to `2k − i`, reading labels
/// cyclically so that `2k` stays fixed.
pub fn involution(g: &BoundaryWeightedGarden, labeling: &Labeling) -> Result<Labeling, BwgError> {
    validate(g, &labeling.labels)?;
    let m = labeling.labels.len() as u32;
    Ok(Labeling {
        direction: labeling.direction.reversed(),
        labels: labeling
            .labels
            .iter()
            .map(|&l| match (m - l) % m {
                0 => m,
                x => x,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bwg::HalfGardenDiagram;

    fn one_chord() -> BoundaryWeightedGarden {
        BoundaryWeightedGarden::new(HalfGardenDiagram::new(vec![1, 0]).unwrap(), vec![1, 1], vec![vec![], vec![]])
            .unwrap()
    }

    #[test]
    fn one_chord_is_proper_both_ways() {
        let g = one_chord();
        for labels in [vec![1, 2], vec![2, 1]] {
            for direction in [Direction::Forward, Direction::Backward] {
                assert!(check_proper_labeling(&g, &Labeling { direction, labels: labels.clone() }).unwrap());
            }
        }
    }

    #[test]
    fn involution_example() {
        let g = one_chord();
        let l = Labeling { direction: Direction::Forward, labels: vec![1, 2] };
        let i = involution(&g, &l).unwrap();
        assert_eq!(i, Labeling { direction: Direction::Backward, labels: vec![1, 2] });
        assert_eq!(involution(&g, &i).unwrap(), l);
    }

    #[test]
    fn rejects_non_bijections() {
        let g = one_chord();
        let l = Labeling { direction: Direction::Forward, labels: vec![1, 1] };
        assert!(check_proper_labeling(&g, &l).is_err());
        let l = Labeling { direction: Direction::Forward, labels: vec![1, 3] };
        assert!(involution(&g, &l).is_err());
        let c = BoundaryWeightedGarden::chordless(2, vec![]).unwrap();
        assert!(check_proper_labeling(&c, &Labeling { direction: Direction::Forward, labels: vec![] }).is_err());
    }

    #[test]
    fn descents() {
        assert_eq!(cyclic_descents(&[1, 2]), 1);
        assert_eq!(cyclic_descents(&[3, 1, 4, 2]), 2);
    }
}
