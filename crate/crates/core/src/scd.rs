//! Chains, symmetric chain decompositions, tautness and validation.

use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use crate::cuboid::ChainProduct;
use crate::poset::{ElementId, GradedPoset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScdError {
    #[error("chain is empty")]
    EmptyChain,
    #[error("element {0} does not belong to the host poset")]
    ForeignElement(ElementId),
    #[error("host is not rank-symmetric (rank sizes {0:?})")]
    NotRankSymmetric(Vec<usize>),
}

/// A chain stored bottom-up.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain(Vec<ElementId>);

impl Chain {
    pub fn new(elements: Vec<ElementId>) -> Self {
        Chain(elements)
    }

    pub fn bottom(&self) -> Option<ElementId> {
        self.0.first().copied()
    }

    pub fn top(&self) -> Option<ElementId> {
        self.0.last().copied()
    }

    pub fn into_inner(self) -> Vec<ElementId> {
        self.0
    }
}

impl Deref for Chain {
    type Target = [ElementId];

    fn deref(&self) -> &[ElementId] {
        &self.0
    }
}

impl From<Vec<ElementId>> for Chain {
    fn from(v: Vec<ElementId>) -> Self {
        Chain(v)
    }
}

/// A set of chains meant to partition a host poset. Whether it actually does
/// is the business of [`validate_scd`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Scd {
    chains: Vec<Chain>,
}

impl Scd {
    pub fn new(chains: Vec<Chain>) -> Self {
        Scd { chains }
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn into_chains(self) -> Vec<Chain> {
        self.chains
    }

    /// Sorts chains by (rank of bottom element, bottom element id).
    pub fn canonicalize(&mut self, poset: &GradedPoset) {
        self.chains
            .sort_by_key(|c| c.bottom().map(|b| (poset.rank(b), b)));
    }

    pub fn canonical(mut self, poset: &GradedPoset) -> Self {
        self.canonicalize(poset);
        self
    }

    /// Equality as sets of chains.
    pub fn same_decomposition(&self, other: &Scd) -> bool {
        let mut a = self.chains.clone();
        let mut b = other.chains.clone();
        a.sort();
        b.sort();
        a == b
    }

    /// Index of the chain containing `x`.
    pub fn chain_of(&self, x: ElementId) -> Option<usize> {
        self.chains.iter().position(|c| c.contains(&x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainCheck {
    pub is_chain: bool,
    pub is_symmetric: bool,
}

/// Checks that consecutive elements are covers and that the end ranks are
/// symmetric about the middle of `host`.
pub fn validate_chain(host: &GradedPoset, chain: &[ElementId]) -> Result<ChainCheck, ScdError> {
    let (&first, &last) = match (chain.first(), chain.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(ScdError::EmptyChain),
    };
    if let Some(&x) = chain.iter().find(|&&x| !host.contains(x)) {
        return Err(ScdError::ForeignElement(x));
    }
    let is_chain = chain.windows(2).all(|w| host.covers(w[0], w[1]));
    let is_symmetric = host.rank(first) + host.rank(last) == host.height();
    Ok(ChainCheck {
        is_chain,
        is_symmetric,
    })
}

/// Whether the chain contains `(p, 0) ≺ (p, 1) ≺ … ≺ (p, n−1)` for some `p`.
pub fn is_taut(host: &ChainProduct, chain: &[ElementId]) -> bool {
    let n = host.n();
    let mut prev: Option<(ElementId, usize)> = None;
    let mut from_zero = false;
    for &x in chain {
        let (p, level) = host.coords(x);
        let continues = matches!(prev, Some((pp, pl)) if pp == p && pl + 1 == level);
        if !continues {
            from_zero = level == 0;
        }
        if from_zero && level + 1 == n {
            return true;
        }
        prev = Some((p, level));
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub is_partition: bool,
    pub all_symmetric: bool,
    pub taut_chain_indices: Vec<usize>,
    pub chain_count: usize,
    pub messages: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.is_partition && self.all_symmetric
    }

    pub fn taut_count(&self) -> usize {
        self.taut_chain_indices.len()
    }

    pub fn is_valid_nontaut(&self) -> bool {
        self.is_valid() && self.taut_chain_indices.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.messages {
            writeln!(f, "{m}")?;
        }
        write!(
            f,
            "{}: {} chains, {} taut",
            if self.is_valid() { "valid" } else { "INVALID" },
            self.chain_count,
            self.taut_count()
        )
    }
}

/// Partition and symmetry checks only; no tautness.
pub fn validate_decomposition(poset: &GradedPoset, scd: &Scd) -> ValidationReport {
    let mut messages = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; poset.len()];
    let mut is_partition = true;
    let mut all_symmetric = true;
    for (i, chain) in scd.chains().iter().enumerate() {
        match validate_chain(poset, chain) {
            Err(ScdError::EmptyChain) => {
                messages.push(format!("chain {i}: empty"));
                is_partition = false;
                all_symmetric = false;
                continue;
            }
            Err(e) => {
                messages.push(format!("chain {i}: {e}"));
                is_partition = false;
                all_symmetric = false;
                continue;
            }
            Ok(check) => {
                if !check.is_chain {
                    let bad = chain
                        .windows(2)
                        .find(|w| !poset.covers(w[0], w[1]))
                        .expect("some step is not a cover");
                    messages.push(format!(
                        "chain {i}: {} is not covered by {}",
                        poset.name(bad[0]),
                        poset.name(bad[1])
                    ));
                    all_symmetric = false;
                }
                if !check.is_symmetric {
                    messages.push(format!(
                        "chain {i}: ranks {}..{} are not symmetric in a poset of rank {}",
                        poset.rank(chain[0]),
                        poset.rank(chain[chain.len() - 1]),
                        poset.height()
                    ));
                    all_symmetric = false;
                }
            }
        }
        for &x in chain.iter() {
            match owner[x] {
                Some(j) => {
                    messages.push(format!(
                        "element {} appears in chains {j} and {i}",
                        poset.name(x)
                    ));
                    is_partition = false;
                }
                None => owner[x] = Some(i),
            }
        }
    }
    let uncovered: Vec<ElementId> = poset.elements().filter(|&x| owner[x].is_none()).collect();
    if !uncovered.is_empty() {
        is_partition = false;
        let shown: Vec<&str> = uncovered.iter().take(8).map(|&x| poset.name(x)).collect();
        messages.push(format!(
            "{} element(s) not covered by any chain: {}{}",
            uncovered.len(),
            shown.join(" "),
            if uncovered.len() > shown.len() { " ..." } else { "" }
        ));
    }
    ValidationReport {
        is_partition,
        all_symmetric,
        taut_chain_indices: Vec::new(),
        chain_count: scd.len(),
        messages,
    }
}

/// Full validation: partition, symmetry and the list of taut chains.
/// Reports every finding rather than stopping at the first.
pub fn validate_scd(host: &ChainProduct, scd: &Scd) -> ValidationReport {
    let mut report = validate_decomposition(host.poset(), scd);
    report.taut_chain_indices = scd
        .chains()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty() && c.iter().all(|&x| host.poset().contains(x)))
        .filter(|(_, c)| is_taut(host, c))
        .map(|(i, _)| i)
        .collect();
    report
}

/// Number of chains in any SCD of `host`: the size of rank `⌊rk/2⌋`.
pub fn expected_chain_count(host: &GradedPoset) -> Result<usize, ScdError> {
    if !host.is_rank_symmetric() {
        return Err(ScdError::NotRankSymmetric(host.rank_sizes()));
    }
    Ok(host.elements_of_rank(host.height() / 2).len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NecessaryConditions {
    pub rank_symmetric: bool,
    /// Only evaluated when asked about taut-free decompositions.
    pub middle_rank_ok: Option<bool>,
}

impl NecessaryConditions {
    pub fn hold(&self) -> bool {
        self.rank_symmetric && self.middle_rank_ok.unwrap_or(true)
    }
}

/// Necessary conditions on `P` for `P × n` to have an SCD, and with
/// `for_nontaut` one without taut chains.
///
/// Even `rk(P)`: the middle rank may not outnumber all lower ranks together.
/// Odd `rk(P)`: the middle ranks may not outnumber twice the ranks strictly
/// below them.
pub fn necessary_conditions(p: &GradedPoset, for_nontaut: bool) -> NecessaryConditions {
    let sizes = p.rank_sizes();
    let rank_symmetric = p.is_rank_symmetric();
    let middle_rank_ok = for_nontaut.then(|| {
        let rk = p.height();
        if rk.is_multiple_of(2) {
            let mid = rk / 2;
            sizes[mid] <= sizes[..mid].iter().sum()
        } else {
            let lo = (rk - 1) / 2;
            let middle = sizes[lo].max(sizes[lo + 1]);
            middle <= 2 * sizes[..lo].iter().sum::<usize>()
        }
    });
    NecessaryConditions {
        rank_symmetric,
        middle_rank_ok,
    }
}

/// For `n ≥ rk(P) + 1`: does every chain keep one P-coordinate across the
/// middle block (ranks `rk(P) ..= n−1`)? Vacuously true for shorter `n`.
pub fn middle_block_is_vertical(host: &ChainProduct, scd: &Scd) -> bool {
    let lo = host.base_rank();
    let hi = host.n() - 1;
    scd.chains().iter().all(|chain| {
        let mut ps = chain
            .iter()
            .filter(|&&x| (lo..=hi).contains(&host.poset().rank(x)))
            .map(|&x| host.p_coord(x));
        match ps.next() {
            Some(first) => ps.all(|p| p == first),
            None => true,
        }
    })
}

/// Index of the chain through the unique minimum, if there is one.
pub fn maximal_chain_index(host: &GradedPoset, scd: &Scd) -> Option<usize> {
    let min = host.unique_min()?;
    scd.chains().iter().position(|c| c.bottom() == Some(min))
}
