//! Moving between SCDs of `P × rk(P)` and `P × (rk(P) + 1)`.
//!
//! `P × (rk(P) + 1)` has a single middle row `M` at rank `rk(P)`; removing it
//! (and lowering everything above it by one level) gives `P × rk(P)`.
//! Going back up, the chains of an SCD crossing the two central rows of
//! `P × rk(P)` project onto a directed graph on `P` that is one path from
//! `min_P` to `max_P` plus loops. Each way of matching its edges to an
//! endpoint, missing one vertex, gives one preimage.

use std::collections::{BTreeMap, BTreeSet};

use crate::cuboid::ChainProduct;
use crate::poset::ElementId;
use crate::scd::{maximal_chain_index, Chain, Scd};

use super::{require_nontaut, require_valid, ConstructionError};

/// Projection of one chain's step from rank `rk(P) − 1` to rank `rk(P)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiddleEdge {
    pub from: ElementId,
    pub to: ElementId,
    /// Index of the chain this edge came from.
    pub chain: usize,
}

impl MiddleEdge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiddleGraph {
    vertex_count: usize,
    edges: Vec<MiddleEdge>,
    path: Vec<ElementId>,
}

impl MiddleGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// One edge per chain, in chain order.
    pub fn edges(&self) -> &[MiddleEdge] {
        &self.edges
    }

    /// Vertices of the maximal path, `min_P` first.
    pub fn path(&self) -> &[ElementId] {
        &self.path
    }

    pub fn loops(&self) -> impl Iterator<Item = &MiddleEdge> {
        self.edges.iter().filter(|e| e.is_loop())
    }
}

/// Assigns each edge of a [`MiddleGraph`] to one of its endpoints, injectively,
/// missing exactly `unmatched`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMatching {
    pub assignment: BTreeMap<(ElementId, ElementId), ElementId>,
    pub unmatched: ElementId,
}

fn require_extremes(host: &ChainProduct) -> Result<(ElementId, ElementId), ConstructionError> {
    let base = host.base();
    if !base.is_rank_symmetric() {
        return Err(ConstructionError::NoUniqueExtremes);
    }
    let extremes = base
        .unique_min()
        .zip(base.unique_max())
        .ok_or(ConstructionError::NoUniqueExtremes)?;
    if base.height() == 0 {
        return Err(ConstructionError::BaseRankZero);
    }
    Ok(extremes)
}

fn require_length(host: &ChainProduct, expected: usize) -> Result<(), ConstructionError> {
    if host.n() != expected {
        return Err(ConstructionError::WrongLength {
            expected,
            got: host.n(),
        });
    }
    Ok(())
}

/// SCD of `P × (rk(P) + 1)` to SCD of `P × rk(P)`: drop the single-element
/// chain in the middle row, cut every other chain's middle-row element and
/// lower its last-block part by one level.
pub fn collapse(host: &ChainProduct, scd: &Scd) -> Result<(ChainProduct, Scd), ConstructionError> {
    require_extremes(host)?;
    let rk = host.base_rank();
    require_length(host, rk + 1)?;
    require_valid(host, scd)?;
    let singletons = scd.chains().iter().filter(|c| c.len() == 1).count();
    if singletons != 1 {
        return Err(ConstructionError::SingletonCount(singletons));
    }
    let target = host.with_length(rk)?;
    let poset = host.poset();
    let chains = scd
        .chains()
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            c.iter()
                .filter_map(|&x| {
                    let (p, level) = host.coords(x);
                    match poset.rank(x).cmp(&rk) {
                        std::cmp::Ordering::Less => Some(target.id(p, level)),
                        std::cmp::Ordering::Equal => None,
                        std::cmp::Ordering::Greater => Some(target.id(p, level - 1)),
                    }
                })
                .collect::<Vec<_>>()
        })
        .map(Chain::new)
        .collect();
    let out = Scd::new(chains).canonical(target.poset());
    require_valid(&target, &out)?;
    Ok((target, out))
}

/// The middle graph of an SCD of `P × rk(P)`.
pub fn middle_graph(host: &ChainProduct, scd: &Scd) -> Result<MiddleGraph, ConstructionError> {
    let (min, max) = require_extremes(host)?;
    let rk = host.base_rank();
    require_length(host, rk)?;
    require_valid(host, scd)?;
    let poset = host.poset();
    let shape = |msg: String| ConstructionError::MiddleGraphShape(msg);

    let mut edges = Vec::with_capacity(scd.len());
    for (i, chain) in scd.chains().iter().enumerate() {
        let j = chain
            .iter()
            .position(|&x| poset.rank(x) == rk - 1)
            .filter(|&j| j + 1 < chain.len())
            .ok_or_else(|| shape(format!("chain {i} does not cross the central rows")))?;
        edges.push(MiddleEdge {
            from: host.p_coord(chain[j]),
            to: host.p_coord(chain[j + 1]),
            chain: i,
        });
    }

    let vertex_count = host.base().len();
    let mut out_edge: Vec<Option<usize>> = vec![None; vertex_count];
    let mut in_degree = vec![0usize; vertex_count];
    for (e, edge) in edges.iter().enumerate() {
        if out_edge[edge.from].replace(e).is_some() {
            return Err(shape(format!("vertex {} has out-degree above 1", host.base().name(edge.from))));
        }
        in_degree[edge.to] += 1;
    }
    for v in 0..vertex_count {
        let (want_in, want_out) = if v == min {
            (0, 1)
        } else if v == max {
            (1, 0)
        } else {
            (1, 1)
        };
        if in_degree[v] != want_in || usize::from(out_edge[v].is_some()) != want_out {
            return Err(shape(format!("vertex {} has the wrong degree", host.base().name(v))));
        }
    }

    let mut path = vec![min];
    let mut v = min;
    while v != max {
        let edge = edges[out_edge[v].expect("degrees checked")];
        if edge.is_loop() {
            return Err(shape(format!("path from the minimum stalls at {}", host.base().name(v))));
        }
        v = edge.to;
        path.push(v);
    }
    let non_loops = edges.iter().filter(|e| !e.is_loop()).count();
    if non_loops + 1 != path.len() {
        return Err(shape("edges off the maximal path that are not loops".into()));
    }
    Ok(MiddleGraph {
        vertex_count,
        edges,
        path,
    })
}

/// The `rk(P) + 1` matchings of `graph`, ordered by the position of the
/// unmatched vertex along the path from `min_P`. Path edges before the
/// unmatched vertex go to their tail, the rest to their head; loops go to
/// their own vertex.
pub fn enumerate_matchings(graph: &MiddleGraph) -> Vec<EdgeMatching> {
    let path = graph.path();
    (0..path.len())
        .map(|j| {
            let mut assignment: BTreeMap<_, _> = graph.loops().map(|e| ((e.from, e.to), e.from)).collect();
            for (i, w) in path.windows(2).enumerate() {
                assignment.insert((w[0], w[1]), if i < j { w[0] } else { w[1] });
            }
            EdgeMatching {
                assignment,
                unmatched: path[j],
            }
        })
        .collect()
}

fn check_matching(graph: &MiddleGraph, f: &EdgeMatching) -> Result<(), ConstructionError> {
    let bad = |msg: String| ConstructionError::BadMatching(msg);
    if f.assignment.len() != graph.edges().len() {
        return Err(bad(format!(
            "{} assignments for {} edges",
            f.assignment.len(),
            graph.edges().len()
        )));
    }
    let mut image = BTreeSet::new();
    for e in graph.edges() {
        let &target = f
            .assignment
            .get(&(e.from, e.to))
            .ok_or_else(|| bad(format!("edge ({}, {}) is not assigned", e.from, e.to)))?;
        if target != e.from && target != e.to {
            return Err(bad(format!("edge ({}, {}) assigned to a non-endpoint", e.from, e.to)));
        }
        if !image.insert(target) {
            return Err(bad(format!("vertex {target} is assigned twice")));
        }
    }
    if f.unmatched >= graph.vertex_count() || image.contains(&f.unmatched) {
        return Err(bad(format!("vertex {} cannot be the unmatched vertex", f.unmatched)));
    }
    Ok(())
}

/// SCD of `P × rk(P)` plus a matching to an SCD of `P × (rk(P) + 1)`:
/// each edge `e = (p, q)` becomes `[p, m−1] ≺ [f(e), m] ≺ [q, m+1]` with
/// `m = rk(P)`, and the unmatched vertex `v` becomes the chain `[v, m]`.
pub fn expand(host: &ChainProduct, scd: &Scd, f: &EdgeMatching) -> Result<(ChainProduct, Scd), ConstructionError> {
    let graph = middle_graph(host, scd)?;
    check_matching(&graph, f)?;
    let rk = host.base_rank();
    let target = host.with_length(rk + 1)?;
    let poset = host.poset();
    let mut chains = Vec::with_capacity(scd.len() + 1);
    for (chain, edge) in scd.chains().iter().zip(graph.edges()) {
        let inserted = f.assignment[&(edge.from, edge.to)];
        // middle_graph guarantees the chain crosses from rank rk-1 to rk
        let split = chain
            .iter()
            .position(|&x| poset.rank(x) >= rk)
            .expect("chain reaches rank rk(P)");
        let lower = chain[..split].iter().map(|&x| {
            let (p, level) = host.coords(x);
            target.id(p, level)
        });
        let middle = target.element_at(inserted, rk).expect("rank rk(P) is in every column window");
        let upper = chain[split..].iter().map(|&x| {
            let (p, level) = host.coords(x);
            target.id(p, level + 1)
        });
        chains.push(Chain::new(lower.chain([middle]).chain(upper).collect()));
    }
    chains.push(Chain::new(vec![target
        .element_at(f.unmatched, rk)
        .expect("rank rk(P) is in every column window")]));
    let out = Scd::new(chains).canonical(target.poset());
    debug_assert!(crate::scd::validate_scd(&target, &out).is_valid());
    Ok((target, out))
}

/// Whether the maximal chain of an SCD of `P × (rk(P) + 1)` contains
/// `(min_P, 0) ≺ … ≺ (min_P, rk(P)−1)` or `(max_P, 1) ≺ … ≺ (max_P, rk(P))`,
/// the two runs that turn into taut chains under [`collapse`].
pub fn has_forbidden_subchain(host: &ChainProduct, scd: &Scd) -> bool {
    let base = host.base();
    let (Some(min), Some(max)) = (base.unique_min(), base.unique_max()) else {
        return false;
    };
    let rk = host.base_rank();
    let Some(i) = maximal_chain_index(host.poset(), scd) else {
        return false;
    };
    let chain = &scd.chains()[i];
    let low_run = (0..rk).all(|l| l < host.n() && chain.contains(&host.id(min, l)));
    let high_run = (1..=rk).all(|l| l < host.n() && chain.contains(&host.id(max, l)));
    low_run || high_run
}

/// Rewires a taut-free SCD of `P × (rk(P) + 1)` so that its collapse is
/// taut-free too.
///
/// When the maximal chain carries a forbidden run, `(min_P, 0)` and
/// `(max_P, rk(P))` are detached from it and attached to the chain ending at
/// the least `(q, rk(P))`, `q ≺ max_P`, that does not contain
/// `(min_P, rk(P)−1)`. Inputs without a forbidden run are returned as is.
pub fn repair(host: &ChainProduct, scd: &Scd) -> Result<Scd, ConstructionError> {
    let (min, max) = require_extremes(host)?;
    let rk = host.base_rank();
    require_length(host, rk + 1)?;
    let below_max = host.base().lower_covers(max);
    if below_max.len() < 2 {
        return Err(ConstructionError::MaxCoversTooFew(below_max.len()));
    }
    require_nontaut(host, scd)?;
    if !has_forbidden_subchain(host, scd) {
        return Ok(scd.clone());
    }

    let bottom = host.id(min, 0);
    let top = host.id(max, rk);
    let maximal = maximal_chain_index(host.poset(), scd).expect("valid SCD has a chain through the minimum");
    let avoid = scd.chain_of(host.id(min, rk - 1));
    let (target, partner) = below_max
        .iter()
        .map(|&q| host.id(q, rk))
        .filter_map(|x| scd.chain_of(x).map(|c| (x, c)))
        .filter(|&(_, c)| Some(c) != avoid && c != maximal)
        .min()
        .ok_or(ConstructionError::NoRepairTarget)?;
    debug_assert_eq!(scd.chains()[partner].top(), Some(target));

    let chains = scd
        .chains()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == maximal {
                Chain::new(c[1..c.len() - 1].to_vec())
            } else if i == partner {
                let mut v = Vec::with_capacity(c.len() + 2);
                v.push(bottom);
                v.extend_from_slice(c);
                v.push(top);
                Chain::new(v)
            } else {
                c.clone()
            }
        })
        .collect();
    let out = Scd::new(chains).canonical(host.poset());
    debug_assert!(crate::scd::validate_scd(host, &out).is_valid_nontaut());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuboid::build_cuboid;
    use crate::data_io::{builtin_table, BuiltinTableId};
    use crate::poset::build_chain_poset;
    use crate::scd::validate_scd;

    #[test]
    fn square_and_segment() {
        // Q_1 × 1: a single chain 0 ≺ 1
        let q1 = build_cuboid(1, 1).unwrap();
        let scd = Scd::new(vec![Chain::new(vec![0, 1])]);
        let g = middle_graph(&q1, &scd).unwrap();
        assert_eq!(g.edges(), &[MiddleEdge { from: 0, to: 1, chain: 0 }]);
        assert_eq!(g.loops().count(), 0);
        assert_eq!(g.path(), &[0, 1]);
        let fs = enumerate_matchings(&g);
        assert_eq!(fs.len(), 2);

        // both SCDs of the square Q_1 × 2, ids (bit, level) -> 2 * bit + level
        let square = build_cuboid(1, 2).unwrap();
        let left = Scd::new(vec![Chain::new(vec![0, 1, 3]), Chain::new(vec![2])]).canonical(square.poset());
        let right = Scd::new(vec![Chain::new(vec![0, 2, 3]), Chain::new(vec![1])]).canonical(square.poset());
        let lifted: Vec<Scd> = fs.iter().map(|f| expand(&q1, &scd, f).unwrap().1).collect();
        assert!(lifted.contains(&left) && lifted.contains(&right));
        for s in [&left, &right] {
            let (h, down) = collapse(&square, s).unwrap();
            assert_eq!(h.n(), 1);
            assert_eq!(down, scd);
        }
    }

    #[test]
    fn table_three_lifts() {
        let id = BuiltinTableId::P55;
        let host = id.host();
        let table = builtin_table(id);
        let g = middle_graph(&host, &table).unwrap();
        assert_eq!(g.path().len(), 6);
        assert_eq!(g.edges().len(), 31);
        let fs = enumerate_matchings(&g);
        assert_eq!(fs.len(), 6);
        let mut outs: Vec<Scd> = Vec::new();
        for f in &fs {
            let (up_host, up) = expand(&host, &table, f).unwrap();
            assert_eq!(up_host.n(), 6);
            assert!(validate_scd(&up_host, &up).is_valid_nontaut());
            let (_, back) = collapse(&up_host, &up).unwrap();
            assert!(back.same_decomposition(&table));
            assert!(!outs.contains(&up));
            outs.push(up);
        }
    }

    #[test]
    fn matching_checks() {
        let q1 = build_cuboid(1, 1).unwrap();
        let scd = Scd::new(vec![Chain::new(vec![0, 1])]);
        let g = middle_graph(&q1, &scd).unwrap();
        let mut f = enumerate_matchings(&g).remove(0);
        f.unmatched = 1;
        assert!(matches!(expand(&q1, &scd, &f), Err(ConstructionError::BadMatching(_))));
        let mut f = enumerate_matchings(&g).remove(0);
        f.assignment.clear();
        assert!(matches!(expand(&q1, &scd, &f), Err(ConstructionError::BadMatching(_))));
    }

    #[test]
    fn hypotheses_are_checked() {
        let chain3 = ChainProduct::new(build_chain_poset(3).unwrap(), 3).unwrap();
        assert_eq!(
            repair(&chain3, &Scd::default()).unwrap_err(),
            ConstructionError::MaxCoversTooFew(1)
        );
        let q2 = build_cuboid(2, 3).unwrap();
        assert!(matches!(
            middle_graph(&q2, &Scd::default()),
            Err(ConstructionError::WrongLength { expected: 2, got: 3 })
        ));
        let vee = crate::poset::GradedPoset::from_covers(
            "vee",
            vec!["a".into(), "b".into(), "c".into()],
            [(0, 1), (0, 2)],
        )
        .unwrap();
        let host = ChainProduct::new(vee, 2).unwrap();
        assert_eq!(collapse(&host, &Scd::default()).unwrap_err(), ConstructionError::NoUniqueExtremes);
    }
}
