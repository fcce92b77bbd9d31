//! Colorings, frozen node sets and candidate pairs.

use std::fmt;

use thiserror::Error;

/// A color in `1..=r`.
pub type Color = u8;

/// Dense node-to-color map. Entries are in `1..=r`; surjectivity is not part
/// of the type and is checked where it matters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring(Vec<Color>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring has {found} entries, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("node {node} has color {color}, outside 1..={r}")]
    ColorOutOfRange { node: usize, color: usize, r: usize },
}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    /// Every node gets `color`.
    pub fn uniform(n: usize, color: Color) -> Self {
        Coloring(vec![color; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, node: usize) -> Color {
        self.0[node]
    }

    pub fn set(&mut self, node: usize, color: Color) {
        self.0[node] = color;
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Color> {
        self.0
    }

    /// Checks length and color range against an `n`-node, `r`-color setting.
    pub fn validate(&self, n: usize, r: usize) -> Result<(), ColoringError> {
        if self.0.len() != n {
            return Err(ColoringError::Length {
                expected: n,
                found: self.0.len(),
            });
        }
        for (node, &color) in self.0.iter().enumerate() {
            if color == 0 || color as usize > r {
                return Err(ColoringError::ColorOutOfRange {
                    node,
                    color: color as usize,
                    r,
                });
            }
        }
        Ok(())
    }

    /// True iff every color of `1..=r` is used by some node.
    pub fn is_surjective(&self, r: usize) -> bool {
        let mut seen = vec![false; r + 1];
        let mut distinct = 0;
        for &color in &self.0 {
            let color = color as usize;
            if color >= 1 && color <= r && !seen[color] {
                seen[color] = true;
                distinct += 1;
            }
        }
        distinct == r
    }

    /// Applies a color permutation given as `perm[i - 1] = image of color i`.
    pub fn permute_colors(&self, perm: &[Color]) -> Coloring {
        Coloring(self.0.iter().map(|&c| perm[c as usize - 1]).collect())
    }
}

impl From<Vec<Color>> for Coloring {
    fn from(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, color) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{color}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("colorings have different lengths ({left} vs {right})")]
pub struct LengthMismatch {
    pub left: usize,
    pub right: usize,
}

/// Number of nodes on which the two colorings disagree.
pub fn hamming(a: &Coloring, b: &Coloring) -> Result<usize, LengthMismatch> {
    if a.len() != b.len() {
        return Err(LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count())
}

/// Set of frozen nodes, stored as a membership bitmap over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrozenSet {
    member: Vec<bool>,
    len: usize,
}

impl FrozenSet {
    pub fn empty(n: usize) -> Self {
        FrozenSet {
            member: vec![false; n],
            len: 0,
        }
    }

    pub fn from_nodes(n: usize, nodes: impl IntoIterator<Item = usize>) -> Self {
        let mut set = FrozenSet::empty(n);
        for v in nodes {
            set.insert(v);
        }
        set
    }

    pub fn all(n: usize) -> Self {
        FrozenSet {
            member: vec![true; n],
            len: n,
        }
    }

    pub fn contains(&self, node: usize) -> bool {
        self.member[node]
    }

    /// Returns false if the node was already frozen.
    pub fn insert(&mut self, node: usize) -> bool {
        if self.member[node] {
            return false;
        }
        self.member[node] = true;
        self.len += 1;
        true
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Size of the node universe.
    pub fn universe(&self) -> usize {
        self.member.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn as_mask(&self) -> &[bool] {
        &self.member
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CandidateError {
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("frozen set is over {found} nodes, expected {expected}")]
    Universe { expected: usize, found: usize },
    #[error("no frozen node carries color {0}")]
    MissingColor(Color),
}

/// A coloring together with a frozen set that contains a node of every color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidatePair {
    coloring: Coloring,
    frozen: FrozenSet,
}

impl CandidatePair {
    pub fn new(coloring: Coloring, frozen: FrozenSet, r: usize) -> Result<Self, CandidateError> {
        let n = coloring.len();
        coloring.validate(n, r)?;
        if frozen.universe() != n {
            return Err(CandidateError::Universe {
                expected: n,
                found: frozen.universe(),
            });
        }
        let mut witnessed = vec![false; r + 1];
        for v in frozen.iter() {
            witnessed[coloring.get(v) as usize] = true;
        }
        if let Some(color) = (1..=r).find(|&c| !witnessed[c]) {
            return Err(CandidateError::MissingColor(color as Color));
        }
        Ok(CandidatePair { coloring, frozen })
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn frozen(&self) -> &FrozenSet {
        &self.frozen
    }

    pub fn into_parts(self) -> (Coloring, FrozenSet) {
        (self.coloring, self.frozen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hamming_examples() {
        let a = Coloring::new(vec![1, 2, 3]);
        assert_eq!(hamming(&a, &a), Ok(0));
        assert_eq!(hamming(&a, &Coloring::new(vec![1, 3, 3])), Ok(1));
        assert_eq!(
            hamming(&Coloring::uniform(4, 1), &Coloring::uniform(4, 2)),
            Ok(4)
        );
        assert_eq!(
            hamming(&a, &Coloring::uniform(4, 1)),
            Err(LengthMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn candidate_pair_needs_every_color_frozen() {
        let c = Coloring::new(vec![1, 2, 3, 3]);
        let f = FrozenSet::from_nodes(4, [0, 1]);
        assert_eq!(
            CandidatePair::new(c.clone(), f, 3),
            Err(CandidateError::MissingColor(3))
        );
        let f = FrozenSet::from_nodes(4, [0, 1, 3]);
        assert!(CandidatePair::new(c, f, 3).is_ok());
    }

    #[test]
    fn validate_rejects_out_of_range() {
        let c = Coloring::new(vec![1, 0, 2]);
        assert!(matches!(
            c.validate(3, 2),
            Err(ColoringError::ColorOutOfRange { node: 1, .. })
        ));
        assert!(Coloring::new(vec![1, 4]).validate(2, 3).is_err());
    }

    fn triple() -> impl Strategy<Value = (Coloring, Coloring, Coloring)> {
        (1usize..12).prop_flat_map(|n| {
            let col = || proptest::collection::vec(1u8..=4, n).prop_map(Coloring::new);
            (col(), col(), col())
        })
    }

    proptest! {
        #[test]
        fn hamming_is_a_metric((a, b, c) in triple()) {
            let ab = hamming(&a, &b).unwrap();
            prop_assert_eq!(ab, hamming(&b, &a).unwrap());
            prop_assert_eq!(ab == 0, a == b);
            prop_assert!(hamming(&a, &c).unwrap() <= ab + hamming(&b, &c).unwrap());
        }
    }
}
