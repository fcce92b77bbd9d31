//! Incremental search state.
//!
//! Every edge carries a per-color multiplicity table, its number of distinct
//! colors and its number of frozen members. A recolor or a freeze touches only
//! the edges incident to the node, and the aggregate counters below make the
//! rainbow, dead-end and freeze-completion tests O(1).

use crate::coloring::{CandidatePair, Color, Coloring, FrozenSet};
use crate::hypergraph::{BranchTarget, Hypergraph};

#[derive(Debug, Clone)]
pub struct SearchState<'h> {
    h: &'h Hypergraph,
    colors: Vec<Color>,
    frozen: Vec<bool>,
    frozen_len: usize,
    /// `counts[e * r + (color - 1)]`
    counts: Vec<u8>,
    distinct: Vec<u8>,
    frozen_members: Vec<u8>,
    rainbow: usize,
    frozen_rainbow: usize,
    /// Edges with exactly `r - 1` frozen members.
    nearly_frozen: usize,
}

impl<'h> SearchState<'h> {
    pub fn new(h: &'h Hypergraph, pair: &CandidatePair) -> Self {
        SearchState::from_parts(h, pair.coloring(), pair.frozen())
    }

    /// Builds the state without checking the candidate-pair condition.
    pub fn from_parts(h: &'h Hypergraph, coloring: &Coloring, frozen: &FrozenSet) -> Self {
        let mut state = SearchState {
            h,
            colors: Vec::new(),
            frozen: Vec::new(),
            frozen_len: 0,
            counts: Vec::new(),
            distinct: Vec::new(),
            frozen_members: Vec::new(),
            rainbow: 0,
            frozen_rainbow: 0,
            nearly_frozen: 0,
        };
        state.reset(coloring.as_slice(), frozen.as_mask());
        state
    }

    /// Reinitializes from a coloring and a frozen mask, reusing buffers.
    pub fn reset(&mut self, colors: &[Color], frozen: &[bool]) {
        let h = self.h;
        let r = h.r();
        let m = h.m();
        self.colors.clear();
        self.colors.extend_from_slice(colors);
        self.frozen.clear();
        self.frozen.extend_from_slice(frozen);
        self.frozen_len = frozen.iter().filter(|&&f| f).count();
        self.counts.clear();
        self.counts.resize(m * r, 0);
        self.distinct.clear();
        self.distinct.resize(m, 0);
        self.frozen_members.clear();
        self.frozen_members.resize(m, 0);
        self.rainbow = 0;
        self.frozen_rainbow = 0;
        self.nearly_frozen = 0;
        for (i, edge) in h.edges().enumerate() {
            for &v in edge {
                let slot = &mut self.counts[i * r + self.colors[v] as usize - 1];
                if *slot == 0 {
                    self.distinct[i] += 1;
                }
                *slot += 1;
                if self.frozen[v] {
                    self.frozen_members[i] += 1;
                }
            }
            self.admit(i);
        }
    }

    pub fn hypergraph(&self) -> &'h Hypergraph {
        self.h
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn is_frozen(&self, v: usize) -> bool {
        self.frozen[v]
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn frozen_len(&self) -> usize {
        self.frozen_len
    }

    pub fn coloring(&self) -> Coloring {
        Coloring::new(self.colors.clone())
    }

    pub fn frozen_set(&self) -> FrozenSet {
        FrozenSet::from_nodes(
            self.colors.len(),
            (0..self.colors.len()).filter(|&v| self.frozen[v]),
        )
    }

    pub fn is_rainbow(&self, edge: usize) -> bool {
        self.distinct[edge] as usize == self.h.r()
    }

    pub fn frozen_members(&self, edge: usize) -> usize {
        self.frozen_members[edge] as usize
    }

    pub fn rainbow_edge_count(&self) -> usize {
        self.rainbow
    }

    pub fn has_rainbow(&self) -> bool {
        self.rainbow > 0
    }

    pub fn has_fully_frozen_rainbow(&self) -> bool {
        self.frozen_rainbow > 0
    }

    pub fn lemma2_applies(&self) -> bool {
        self.nearly_frozen == 0
    }

    pub fn is_surjective(&self) -> bool {
        let mut mask = 0u64;
        for &c in &self.colors {
            mask |= 1 << (c - 1);
        }
        mask.count_ones() as usize == self.h.r()
    }

    pub fn is_no_rainbow(&self) -> bool {
        !self.has_rainbow() && self.is_surjective()
    }

    /// See [`Hypergraph::select_branch_edge`].
    pub fn select_branch_edge(&self) -> Option<BranchTarget> {
        let r = self.h.r();
        (0..self.h.m()).find_map(|i| {
            if self.frozen_members[i] as usize != r - 1 || !self.is_rainbow(i) {
                return None;
            }
            let node = *self.h.edge(i).iter().find(|&&v| !self.frozen[v])?;
            Some(BranchTarget {
                edge_index: i,
                node,
            })
        })
    }

    /// See [`Hypergraph::select_fallback_edge`].
    pub fn select_fallback_edge(&self) -> Option<usize> {
        let r = self.h.r();
        let mut best: Option<(usize, u8)> = None;
        for i in 0..self.h.m() {
            let k = self.frozen_members[i];
            if (k as usize) < r && self.is_rainbow(i) && best.is_none_or(|(_, bk)| k > bk) {
                best = Some((i, k));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Unfrozen members of an edge, ascending.
    pub fn unfrozen_members(&self, edge: usize) -> impl Iterator<Item = usize> + '_ {
        self.h
            .edge(edge)
            .iter()
            .copied()
            .filter(|&v| !self.frozen[v])
    }

    fn edge_status(&self, i: usize) -> (bool, bool, bool) {
        let r = self.h.r();
        let k = self.frozen_members[i] as usize;
        let rb = self.distinct[i] as usize == r;
        (rb, rb && k == r, k == r - 1)
    }

    fn retire(&mut self, i: usize) {
        let (rb, frb, near) = self.edge_status(i);
        self.rainbow -= rb as usize;
        self.frozen_rainbow -= frb as usize;
        self.nearly_frozen -= near as usize;
    }

    fn admit(&mut self, i: usize) {
        let (rb, frb, near) = self.edge_status(i);
        self.rainbow += rb as usize;
        self.frozen_rainbow += frb as usize;
        self.nearly_frozen += near as usize;
    }

    /// Changes the color of `v`. Returns the previous color.
    pub fn recolor(&mut self, v: usize, color: Color) -> Color {
        let old = self.colors[v];
        if old == color {
            return old;
        }
        let h = self.h;
        let r = h.r();
        for &i in h.incident(v) {
            self.retire(i);
            let from = &mut self.counts[i * r + old as usize - 1];
            *from -= 1;
            if *from == 0 {
                self.distinct[i] -= 1;
            }
            let to = &mut self.counts[i * r + color as usize - 1];
            if *to == 0 {
                self.distinct[i] += 1;
            }
            *to += 1;
            self.admit(i);
        }
        self.colors[v] = color;
        old
    }

    pub fn freeze(&mut self, v: usize) {
        debug_assert!(!self.frozen[v]);
        let h = self.h;
        for &i in h.incident(v) {
            self.retire(i);
            self.frozen_members[i] += 1;
            self.admit(i);
        }
        self.frozen[v] = true;
        self.frozen_len += 1;
    }

    pub fn unfreeze(&mut self, v: usize) {
        debug_assert!(self.frozen[v]);
        let h = self.h;
        for &i in h.incident(v) {
            self.retire(i);
            self.frozen_members[i] -= 1;
            self.admit(i);
        }
        self.frozen[v] = false;
        self.frozen_len -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[derive(Debug, Clone)]
    enum Move {
        Recolor(usize, u8),
        Toggle(usize),
    }

    fn scenario() -> impl Strategy<Value = (Hypergraph, Vec<u8>, Vec<bool>, Vec<Move>)> {
        (2usize..=4, 0usize..6).prop_flat_map(|(r, extra)| {
            let n = r + extra;
            let edge = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), r);
            let mv = prop_oneof![
                (0..n, 1..=r as u8).prop_map(|(v, c)| Move::Recolor(v, c)),
                (0..n).prop_map(Move::Toggle),
            ];
            (
                proptest::collection::vec(edge, 0..14)
                    .prop_map(move |e| Hypergraph::new(n, r, e).unwrap()),
                proptest::collection::vec(1..=r as u8, n),
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(mv, 0..30),
            )
        })
    }

    fn check_against_naive(s: &SearchState, h: &Hypergraph) -> Result<(), TestCaseError> {
        let c = s.coloring();
        let f = s.frozen_set();
        prop_assert_eq!(s.has_rainbow(), h.first_rainbow_edge(&c).is_some());
        prop_assert_eq!(
            s.has_fully_frozen_rainbow(),
            h.has_fully_frozen_rainbow(&c, &f)
        );
        prop_assert_eq!(s.lemma2_applies(), h.lemma2_applies(&f));
        prop_assert_eq!(s.is_no_rainbow(), h.is_no_rainbow_coloring(&c));
        prop_assert_eq!(s.select_branch_edge(), h.select_branch_edge(&c, &f));
        prop_assert_eq!(s.select_fallback_edge(), h.select_fallback_edge(&c, &f));
        let fresh = SearchState::from_parts(h, &c, &f);
        prop_assert_eq!(&fresh.counts, &s.counts);
        prop_assert_eq!(&fresh.distinct, &s.distinct);
        prop_assert_eq!(&fresh.frozen_members, &s.frozen_members);
        Ok(())
    }

    proptest! {
        #[test]
        fn incremental_counters_track_naive_predicates(
            (h, colors, frozen, moves) in scenario()
        ) {
            let n = h.n();
            let c = Coloring::new(colors);
            let f = FrozenSet::from_nodes(n, (0..n).filter(|&v| frozen[v]));
            let mut s = SearchState::from_parts(&h, &c, &f);
            check_against_naive(&s, &h)?;
            for mv in moves {
                match mv {
                    Move::Recolor(v, color) => { s.recolor(v, color); }
                    Move::Toggle(v) => {
                        if s.is_frozen(v) { s.unfreeze(v) } else { s.freeze(v) }
                    }
                }
                check_against_naive(&s, &h)?;
            }
        }
    }
}
