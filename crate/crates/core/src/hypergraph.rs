//! Immutable r-uniform hypergraphs and the coloring predicates shared by the
//! solvers.
//!
//! The predicates here are the straightforward O(m·r) versions. The search
//! procedures use [`crate::state::SearchState`], which answers the same
//! questions from incrementally maintained per-edge counters.

use thiserror::Error;

use crate::coloring::{Color, Coloring, FrozenSet};

/// Largest supported uniformity; colors are stored as `u8` and edge color
/// sets as 64-bit masks.
pub const MAX_UNIFORMITY: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("uniformity {0} is outside 2..={MAX_UNIFORMITY}")]
    Uniformity(usize),
    #[error("edge {edge} has {found} nodes, expected {expected}")]
    EdgeSize {
        edge: usize,
        expected: usize,
        found: usize,
    },
    #[error("node id out of range: edge {edge} names node {node} but n = {n}")]
    NodeOutOfRange { edge: usize, node: usize, n: usize },
    #[error("edge {edge} repeats node {node}")]
    RepeatedNode { edge: usize, node: usize },
}

/// An r-uniform hypergraph on nodes `0..n`.
///
/// Edges are stored sorted, deduplicated and in ascending lexicographic order,
/// so two hypergraphs with the same edge set compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    members: Vec<usize>,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new<I, E>(n: usize, r: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if !(2..=MAX_UNIFORMITY).contains(&r) {
            return Err(HypergraphError::Uniformity(r));
        }
        let mut sorted = Vec::new();
        for (index, edge) in edges.into_iter().enumerate() {
            let edge = edge.as_ref();
            if edge.len() != r {
                return Err(HypergraphError::EdgeSize {
                    edge: index,
                    expected: r,
                    found: edge.len(),
                });
            }
            if let Some(&node) = edge.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::NodeOutOfRange {
                    edge: index,
                    node,
                    n,
                });
            }
            let mut edge = edge.to_vec();
            edge.sort_unstable();
            if let Some(w) = edge.windows(2).find(|w| w[0] == w[1]) {
                return Err(HypergraphError::RepeatedNode {
                    edge: index,
                    node: w[0],
                });
            }
            sorted.push(edge);
        }
        sorted.sort_unstable();
        sorted.dedup();

        let mut incidence = vec![Vec::new(); n];
        for (i, edge) in sorted.iter().enumerate() {
            for &v in edge {
                incidence[v].push(i);
            }
        }
        Ok(Hypergraph {
            n,
            r,
            members: sorted.into_iter().flatten().collect(),
            incidence,
        })
    }

    /// Hypergraph with no edges.
    pub fn empty(n: usize, r: usize) -> Result<Self, HypergraphError> {
        Hypergraph::new(n, r, std::iter::empty::<Vec<usize>>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of distinct edges.
    pub fn m(&self) -> usize {
        self.members.len() / self.r
    }

    pub fn edge(&self, i: usize) -> &[usize] {
        &self.members[i * self.r..(i + 1) * self.r]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.members.chunks_exact(self.r)
    }

    /// Indices of the edges containing `node`, ascending.
    pub fn incident(&self, node: usize) -> &[usize] {
        &self.incidence[node]
    }

    /// The same hypergraph with node `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Hypergraph {
        Hypergraph::new(
            self.n,
            self.r,
            self.edges()
                .map(|e| e.iter().map(|&v| perm[v]).collect::<Vec<_>>()),
        )
        .expect("relabeling preserves validity")
    }

    fn edge_color_mask(&self, c: &Coloring, i: usize) -> u64 {
        self.edge(i)
            .iter()
            .fold(0u64, |mask, &v| mask | 1 << (c.get(v) - 1))
    }

    /// True iff the nodes of edge `i` carry `r` distinct colors under `c`.
    pub fn is_rainbow_edge(&self, c: &Coloring, i: usize) -> bool {
        self.edge_color_mask(c, i).count_ones() as usize == self.r
    }

    /// Lowest-index rainbow edge, if any.
    pub fn first_rainbow_edge(&self, c: &Coloring) -> Option<usize> {
        (0..self.m()).find(|&i| self.is_rainbow_edge(c, i))
    }

    /// Surjective onto `[r]` and inducing no rainbow edge.
    pub fn is_no_rainbow_coloring(&self, c: &Coloring) -> bool {
        c.len() == self.n && c.is_surjective(self.r) && self.first_rainbow_edge(c).is_none()
    }

    fn frozen_in_edge(&self, frozen: &FrozenSet, i: usize) -> usize {
        self.edge(i).iter().filter(|&&v| frozen.contains(v)).count()
    }

    /// A rainbow edge lying entirely inside the frozen set: no repair is
    /// possible from this candidate pair.
    pub fn has_fully_frozen_rainbow(&self, c: &Coloring, frozen: &FrozenSet) -> bool {
        (0..self.m())
            .any(|i| self.frozen_in_edge(frozen, i) == self.r && self.is_rainbow_edge(c, i))
    }

    /// True iff no edge has exactly `r - 1` frozen nodes, in which case the
    /// frozen colors extend to a no-rainbow coloring by painting every other
    /// node with color 1.
    pub fn lemma2_applies(&self, frozen: &FrozenSet) -> bool {
        (0..self.m()).all(|i| self.frozen_in_edge(frozen, i) != self.r - 1)
    }

    /// Keeps the frozen colors and paints every unfrozen node with color 1.
    ///
    /// The result is checked with [`Hypergraph::is_no_rainbow_coloring`]
    /// before it is returned.
    pub fn background_completion(
        &self,
        c: &Coloring,
        frozen: &FrozenSet,
    ) -> Result<Coloring, CompletionError> {
        let mut witnessed = 0u64;
        for v in frozen.iter() {
            witnessed |= 1 << (c.get(v) - 1);
        }
        if witnessed.count_ones() as usize != self.r {
            return Err(CompletionError::NotCandidatePair);
        }
        if let Some(edge) = (0..self.m()).find(|&i| self.frozen_in_edge(frozen, i) == self.r - 1) {
            return Err(CompletionError::NearlyFrozenEdge { edge });
        }
        if let Some(edge) = (0..self.m())
            .find(|&i| self.frozen_in_edge(frozen, i) == self.r && self.is_rainbow_edge(c, i))
        {
            return Err(CompletionError::FrozenRainbow { edge });
        }
        let completed = Coloring::new(
            (0..self.n)
                .map(|v| if frozen.contains(v) { c.get(v) } else { 1 })
                .collect(),
        );
        if !self.is_no_rainbow_coloring(&completed) {
            return Err(CompletionError::Verification);
        }
        Ok(completed)
    }

    /// Lowest-index rainbow edge with exactly `r - 1` frozen nodes, together
    /// with its single unfrozen node.
    pub fn select_branch_edge(&self, c: &Coloring, frozen: &FrozenSet) -> Option<BranchTarget> {
        (0..self.m()).find_map(|i| {
            if self.frozen_in_edge(frozen, i) != self.r - 1 || !self.is_rainbow_edge(c, i) {
                return None;
            }
            let node = *self.edge(i).iter().find(|&&v| !frozen.contains(v))?;
            Some(BranchTarget {
                edge_index: i,
                node,
            })
        })
    }

    /// Lowest-index rainbow edge maximizing the number of frozen members
    /// among rainbow edges that still have an unfrozen member.
    pub fn select_fallback_edge(&self, c: &Coloring, frozen: &FrozenSet) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for i in 0..self.m() {
            let k = self.frozen_in_edge(frozen, i);
            if k < self.r && self.is_rainbow_edge(c, i) && best.is_none_or(|(_, bk)| k > bk) {
                best = Some((i, k));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Checks that a coloring has length `n` and colors in `1..=r`.
    pub fn check_coloring(&self, c: &Coloring) -> Result<(), crate::coloring::ColoringError> {
        c.validate(self.n, self.r)
    }

    /// Number of distinct colors an edge sees.
    pub fn edge_color_count(&self, c: &Coloring, i: usize) -> usize {
        self.edge_color_mask(c, i).count_ones() as usize
    }
}

/// An edge to branch on and its single unfrozen node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchTarget {
    pub edge_index: usize,
    pub node: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompletionError {
    #[error("frozen nodes do not witness every color")]
    NotCandidatePair,
    #[error("edge {edge} has exactly r - 1 frozen nodes")]
    NearlyFrozenEdge { edge: usize },
    #[error("edge {edge} is a fully frozen rainbow edge")]
    FrozenRainbow { edge: usize },
    #[error("completed coloring is not a no-rainbow coloring")]
    Verification,
}

/// All colors except `color`, ascending.
pub(crate) fn other_colors(r: usize, color: Color) -> impl Iterator<Item = Color> {
    (1..=r as Color).filter(move |&j| j != color)
}
