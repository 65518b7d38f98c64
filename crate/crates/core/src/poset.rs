//! Finite graded posets stored as dense cover graphs.
//!
//! Elements are dense integer ids `0..len`. Each poset keeps both directions
//! of the cover relation, the rank function and a bucket of elements per
//! rank. Ranks are always recomputed from the cover relation on construction;
//! a caller-supplied rank vector is checked against it, never trusted.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Dense element identifier inside one [`GradedPoset`].
pub type ElementId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("a chain poset needs at least one element")]
    EmptyChain,
    #[error("cover ({0}, {1}) refers to an element outside the poset")]
    UnknownElement(ElementId, ElementId),
    #[error("cover ({0}, {0}) is a loop")]
    SelfCover(ElementId),
    #[error("cover relation contains a cycle")]
    Cyclic,
    #[error("cover ({lower}, {upper}) does not raise the rank by exactly one")]
    NotGraded { lower: ElementId, upper: ElementId },
    #[error("element {element} was given rank {given} but its covers force rank {computed}")]
    RankMismatch {
        element: ElementId,
        given: usize,
        computed: usize,
    },
    #[error("expected {expected} element names, got {got}")]
    NameCount { expected: usize, got: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct GradedPoset {
    label: String,
    names: Vec<String>,
    rank: Vec<usize>,
    up: Vec<Vec<ElementId>>,
    down: Vec<Vec<ElementId>>,
    by_rank: Vec<Vec<ElementId>>,
}

impl fmt::Debug for GradedPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedPoset")
            .field("label", &self.label)
            .field("len", &self.len())
            .field("rank_sizes", &self.rank_sizes())
            .finish()
    }
}

impl GradedPoset {
    /// Builds a poset from its cover relation, deriving the rank function.
    ///
    /// Minimal elements get rank 0 and every cover must raise the rank by
    /// exactly one; posets where two paths disagree on a rank are rejected.
    pub fn from_covers<I>(
        label: impl Into<String>,
        names: Vec<String>,
        covers: I,
    ) -> Result<Self, PosetError>
    where
        I: IntoIterator<Item = (ElementId, ElementId)>,
    {
        let len = names.len();
        let mut up = vec![Vec::new(); len];
        let mut down = vec![Vec::new(); len];
        for (x, y) in covers {
            if x >= len || y >= len {
                return Err(PosetError::UnknownElement(x, y));
            }
            if x == y {
                return Err(PosetError::SelfCover(x));
            }
            up[x].push(y);
            down[y].push(x);
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }

        // Kahn's algorithm doubles as the acyclicity check.
        let mut indegree: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut rank = vec![usize::MAX; len];
        let mut queue: VecDeque<ElementId> = (0..len).filter(|&x| indegree[x] == 0).collect();
        for &x in &queue {
            rank[x] = 0;
        }
        let mut seen = 0;
        while let Some(x) = queue.pop_front() {
            seen += 1;
            for &y in &up[x] {
                let r = rank[x] + 1;
                if rank[y] == usize::MAX {
                    rank[y] = r;
                } else if rank[y] != r {
                    return Err(PosetError::NotGraded { lower: x, upper: y });
                }
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        if seen != len {
            return Err(PosetError::Cyclic);
        }

        let height = rank.iter().copied().max().map_or(0, |h| h + 1);
        let mut by_rank = vec![Vec::new(); height];
        for (x, &r) in rank.iter().enumerate() {
            by_rank[r].push(x);
        }
        Ok(GradedPoset {
            label: label.into(),
            names,
            rank,
            up,
            down,
            by_rank,
        })
    }

    /// Like [`GradedPoset::from_covers`], additionally checking a claimed
    /// rank function against the derived one.
    pub fn with_ranks<I>(
        label: impl Into<String>,
        names: Vec<String>,
        covers: I,
        ranks: &[usize],
    ) -> Result<Self, PosetError>
    where
        I: IntoIterator<Item = (ElementId, ElementId)>,
    {
        if ranks.len() != names.len() {
            return Err(PosetError::NameCount {
                expected: names.len(),
                got: ranks.len(),
            });
        }
        let poset = Self::from_covers(label, names, covers)?;
        for (x, (&given, &computed)) in ranks.iter().zip(&poset.rank).enumerate() {
            if given != computed {
                return Err(PosetError::RankMismatch {
                    element: x,
                    given,
                    computed,
                });
            }
        }
        Ok(poset)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.len()
    }

    pub fn contains(&self, x: ElementId) -> bool {
        x < self.len()
    }

    pub fn name(&self, x: ElementId) -> &str {
        &self.names[x]
    }

    pub fn find(&self, name: &str) -> Option<ElementId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn rank(&self, x: ElementId) -> usize {
        self.rank[x]
    }

    /// `rk(P)`: the largest rank attained. The empty poset has rank 0.
    pub fn height(&self) -> usize {
        self.by_rank.len().saturating_sub(1)
    }

    pub fn rank_sizes(&self) -> Vec<usize> {
        self.by_rank.iter().map(Vec::len).collect()
    }

    /// Elements of rank `r` in increasing id order.
    pub fn elements_of_rank(&self, r: usize) -> &[ElementId] {
        self.by_rank.get(r).map_or(&[], Vec::as_slice)
    }

    /// Elements covering `x`, sorted by id.
    pub fn upper_covers(&self, x: ElementId) -> &[ElementId] {
        &self.up[x]
    }

    /// Elements covered by `x`, sorted by id.
    pub fn lower_covers(&self, x: ElementId) -> &[ElementId] {
        &self.down[x]
    }

    /// `x ≺ y`.
    pub fn covers(&self, x: ElementId, y: ElementId) -> bool {
        self.up[x].binary_search(&y).is_ok()
    }

    /// All cover pairs `(x, y)` ordered by `x` then `y`.
    pub fn cover_pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.up
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    pub fn unique_min(&self) -> Option<ElementId> {
        match self.elements_of_rank(0) {
            [x] => Some(*x),
            _ => None,
        }
    }

    /// The unique maximal element, if there is exactly one maximal element.
    pub fn unique_max(&self) -> Option<ElementId> {
        let mut maximal = self.elements().filter(|&x| self.up[x].is_empty());
        match (maximal.next(), maximal.next()) {
            (Some(x), None) => Some(x),
            _ => None,
        }
    }

    pub fn is_rank_symmetric(&self) -> bool {
        let sizes = self.rank_sizes();
        sizes.iter().eq(sizes.iter().rev())
    }
}

/// The `s`-element chain `0 ≺ 1 ≺ … ≺ s−1`.
pub fn build_chain_poset(s: usize) -> Result<GradedPoset, PosetError> {
    if s == 0 {
        return Err(PosetError::EmptyChain);
    }
    let names = (0..s).map(|i| i.to_string()).collect();
    GradedPoset::from_covers(format!("chain {s}"), names, (1..s).map(|i| (i - 1, i)))
}

/// Renders the `k` low bits of `bits` as a binary string, most significant
/// bit first. Digit `i` of the string (1-based, from the left) is bit `k - i`.
pub fn bit_string(bits: u64, k: usize) -> String {
    (0..k)
        .map(|i| if bits >> (k - 1 - i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// The Boolean lattice `Q_k` on k-bit vectors. Element ids are the bit
/// vectors read as binary numbers with the leftmost digit most significant.
pub fn build_hypercube(k: usize) -> GradedPoset {
    assert!(k < usize::BITS as usize, "hypercube dimension {k} too large");
    let len = 1usize << k;
    let names = (0..len).map(|x| bit_string(x as u64, k)).collect();
    let covers = (0..len).flat_map(move |x| {
        (0..k)
            .filter(move |b| x >> b & 1 == 0)
            .map(move |b| (x, x | 1 << b))
    });
    GradedPoset::from_covers(format!("Q_{k}"), names, covers)
        .expect("hypercube cover relation is graded")
}

/// Product order `P × Q`. The pair `(p, q)` gets id `p * |Q| + q`.
pub fn product(p: &GradedPoset, q: &GradedPoset) -> GradedPoset {
    let width = q.len();
    let names = p
        .elements()
        .flat_map(|a| q.elements().map(move |b| (a, b)))
        .map(|(a, b)| format!("({},{})", p.name(a), q.name(b)))
        .collect();
    let mut covers = Vec::new();
    for a in p.elements() {
        for b in q.elements() {
            let id = a * width + b;
            covers.extend(p.upper_covers(a).iter().map(|&a2| (id, a2 * width + b)));
            covers.extend(q.upper_covers(b).iter().map(|&b2| (id, a * width + b2)));
        }
    }
    GradedPoset::from_covers(format!("{} x {}", p.label(), q.label()), names, covers)
        .expect("product of graded posets is graded")
}

/// Rank-symmetry of an arbitrary poset.
pub fn is_rank_symmetric(p: &GradedPoset) -> bool {
    p.is_rank_symmetric()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vee() -> GradedPoset {
        // a ≺ b, a ≺ c
        GradedPoset::from_covers("vee", vec!["a".into(), "b".into(), "c".into()], [(0, 1), (0, 2)])
            .unwrap()
    }

    #[test]
    fn chain_posets() {
        assert_eq!(build_chain_poset(0), Err(PosetError::EmptyChain));
        let one = build_chain_poset(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.rank(0), 0);
        assert_eq!(one.cover_pairs().count(), 0);
        let three = build_chain_poset(3).unwrap();
        assert_eq!(three.cover_pairs().count(), 2);
        assert_eq!(three.height(), 2);
        assert_eq!(build_chain_poset(6).unwrap().rank_sizes(), vec![1; 6]);
    }

    #[test]
    fn hypercube_rank_vectors() {
        let q0 = build_hypercube(0);
        assert_eq!(q0.len(), 1);
        assert_eq!(q0.height(), 0);
        assert_eq!(build_hypercube(4).rank_sizes(), vec![1, 4, 6, 4, 1]);
        let q5 = build_hypercube(5);
        assert_eq!(q5.len(), 32);
        assert_eq!(q5.height(), 5);
        // binomial coefficients by direct enumeration of bit patterns
        let mut by_popcount = vec![0; 6];
        for x in 0u32..32 {
            by_popcount[x.count_ones() as usize] += 1;
        }
        assert_eq!(q5.rank_sizes(), by_popcount);
        assert_eq!(by_popcount, vec![1, 5, 10, 10, 5, 1]);
    }

    #[test]
    fn hypercube_bit_order_is_leftmost_most_significant() {
        let q5 = build_hypercube(5);
        assert_eq!(q5.name(0b11010), "11010");
        assert_eq!(q5.find("10000"), Some(16));
        assert!(q5.covers(0b01000, 0b11000));
    }

    #[test]
    fn products() {
        let q5 = build_hypercube(5);
        let p = product(&q5, &build_chain_poset(3).unwrap());
        assert_eq!(p.len(), 96);
        assert_eq!(p.height(), 7);

        let unit = product(&build_chain_poset(1).unwrap(), &q5);
        assert_eq!(unit.rank_sizes(), q5.rank_sizes());

        // enumerate the 8 elements of Q_2 × 2 and bucket by rank
        let mut buckets = vec![0; 4];
        for bits in 0u32..4 {
            for level in 0..2 {
                buckets[bits.count_ones() as usize + level] += 1;
            }
        }
        let q2x2 = product(&build_hypercube(2), &build_chain_poset(2).unwrap());
        assert_eq!(q2x2.rank_sizes(), buckets);
        assert_eq!(buckets, vec![1, 3, 3, 1]);
    }

    #[test]
    fn rank_symmetry() {
        assert!(build_hypercube(5).is_rank_symmetric());
        assert!(build_chain_poset(4).unwrap().is_rank_symmetric());
        let v = vee();
        assert_eq!(v.rank_sizes(), vec![1, 2]);
        assert!(!is_rank_symmetric(&v));
    }

    #[test]
    fn rejects_ungraded_and_cyclic_relations() {
        let names = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        // 0 ≺ 1 ≺ 2 plus 0 ≺ 2 is not a cover relation of a graded poset
        assert!(matches!(
            GradedPoset::from_covers("bad", names(3), [(0, 1), (1, 2), (0, 2)]),
            Err(PosetError::NotGraded { .. })
        ));
        assert_eq!(
            GradedPoset::from_covers("cyc", names(2), [(0, 1), (1, 0)]),
            Err(PosetError::Cyclic)
        );
        assert_eq!(
            GradedPoset::from_covers("loop", names(2), [(1, 1)]),
            Err(PosetError::SelfCover(1))
        );
        assert!(matches!(
            GradedPoset::with_ranks("r", names(2), [(0, 1)], &[0, 2]),
            Err(PosetError::RankMismatch { element: 1, .. })
        ));
    }

    #[test]
    fn extremes() {
        let q3 = build_hypercube(3);
        assert_eq!(q3.unique_min(), Some(0));
        assert_eq!(q3.unique_max(), Some(7));
        assert_eq!(q3.lower_covers(7).len(), 3);
        assert_eq!(vee().unique_max(), None);
    }
}
