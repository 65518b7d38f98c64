//! Exhaustive enumeration of symmetric chain decompositions of small hosts.
//!
//! The search walks the host rank by rank. After rank `r` every chain is
//! either closed (it reached its required end rank `rk − start`) or open
//! with its top at rank `r`. Moving to rank `r + 1`, every open chain is
//! extended along a cover to a distinct free element, and whatever is left
//! over at rank `r + 1` starts new chains, which is only allowed below the
//! middle. Symmetry of every chain is therefore enforced by construction.
//!
//! With `forbid_taut` a chain is cut as soon as it completes a run
//! `(p, 0) ≺ … ≺ (p, n−1)`.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::constructions::generate;
use crate::cuboid::ChainProduct;
use crate::poset::{build_hypercube, ElementId};
use crate::scd::{necessary_conditions, validate_scd, Chain, Scd};

/// Node cap applied when the caller sets no budget of their own.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Hosts larger than this are refused by [`count_scds`] unless forced.
pub const DEFAULT_COUNT_GUARD: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("symmetry pruning is only sound for existence queries")]
    SymmetryInEnumeration,
    #[error("host has {size} elements, above the exhaustive-count guard of {guard}")]
    TooLarge { size: usize, guard: usize },
    #[error("count is inconclusive: search stopped early ({0:?})")]
    Inconclusive(StopReason),
    #[error(transparent)]
    Poset(#[from] crate::poset::PosetError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub forbid_taut: bool,
    pub limit: Option<usize>,
    pub time_budget: Option<Duration>,
    pub node_budget: Option<u64>,
    /// Prune first-level branches by coordinate permutations of `Q_k`.
    /// Existence queries only.
    pub use_symmetry: bool,
    /// Merge parallel results by branch index so output is repeatable.
    pub deterministic_order: bool,
    /// Worker threads for first-level branches; 1 runs sequentially.
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            forbid_taut: false,
            limit: None,
            time_budget: None,
            node_budget: None,
            use_symmetry: false,
            deterministic_order: true,
            jobs: 1,
        }
    }
}

impl SearchConfig {
    fn effective_node_budget(&self) -> u64 {
        match (self.node_budget, self.time_budget) {
            (Some(n), _) => n,
            (None, Some(_)) => u64::MAX,
            (None, None) => DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Exhausted,
    LimitReached,
    NodeBudget,
    TimeBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Vec<Scd>,
    /// The whole space was explored; only then may absence be concluded.
    pub exhausted: bool,
    pub nodes_visited: u64,
    pub stop: StopReason,
}

impl SearchOutcome {
    fn empty_exhausted() -> Self {
        SearchOutcome {
            found: Vec::new(),
            exhausted: true,
            nodes_visited: 0,
            stop: StopReason::Exhausted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Limit,
    Budget(StopReason),
}

struct Control {
    nodes: AtomicU64,
    node_cap: u64,
    deadline: Option<Instant>,
    cancel: AtomicBool,
    budget_hit: AtomicU64,
}

impl Control {
    fn new(config: &SearchConfig) -> Self {
        Control {
            nodes: AtomicU64::new(0),
            node_cap: config.effective_node_budget(),
            deadline: config.time_budget.map(|d| Instant::now() + d),
            cancel: AtomicBool::new(false),
            budget_hit: AtomicU64::new(0),
        }
    }

    fn tick(&self) -> Flow {
        let visited = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if visited > self.node_cap {
            self.budget_hit.store(1, Ordering::Relaxed);
            return Flow::Budget(StopReason::NodeBudget);
        }
        if visited.is_multiple_of(1024) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.budget_hit.store(2, Ordering::Relaxed);
                    return Flow::Budget(StopReason::TimeBudget);
                }
            }
        }
        if self.cancel.load(Ordering::Relaxed) {
            return Flow::Limit;
        }
        Flow::Continue
    }

    fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed).min(self.node_cap)
    }
}

const FREE: usize = usize::MAX;

#[derive(Clone)]
struct State {
    owner: Vec<usize>,
    chains: Vec<Vec<ElementId>>,
    end: Vec<usize>,
    /// Whether the chain's top closes a vertical run that began at level 0.
    run: Vec<bool>,
    rank: usize,
}

impl State {
    fn to_scd(&self, host: &ChainProduct) -> Scd {
        Scd::new(self.chains.iter().cloned().map(Chain::new).collect()).canonical(host.poset())
    }
}

struct Engine<'a> {
    host: &'a ChainProduct,
    forbid_taut: bool,
    control: &'a Control,
}

impl Engine<'_> {
    fn height(&self) -> usize {
        self.host.height()
    }

    fn root(&self) -> Option<State> {
        let poset = self.host.poset();
        let rk = self.height();
        let mut st = State {
            owner: vec![FREE; poset.len()],
            chains: Vec::new(),
            end: Vec::new(),
            run: Vec::new(),
            rank: 0,
        };
        for &x in poset.elements_of_rank(0) {
            if !self.start(&mut st, x, rk) {
                return None;
            }
        }
        Some(st)
    }

    /// Opens a chain at `x`; false if that chain is already taut.
    fn start(&self, st: &mut State, x: ElementId, end: usize) -> bool {
        let level = self.host.level(x);
        let run = level == 0;
        if self.forbid_taut && run && level + 1 == self.host.n() {
            return false;
        }
        st.owner[x] = st.chains.len();
        st.chains.push(vec![x]);
        st.end.push(end);
        st.run.push(run);
        true
    }

    fn unstart(&self, st: &mut State) {
        let chain = st.chains.pop().expect("chain to drop");
        st.owner[chain[0]] = FREE;
        st.end.pop();
        st.run.pop();
    }

    /// Visits every completion of `st` up to rank `stop_rank`.
    fn descend(&self, st: &mut State, stop_rank: usize, sink: &mut dyn FnMut(&State) -> Flow) -> Flow {
        if st.rank == stop_rank {
            return sink(st);
        }
        let r = st.rank;
        let open: Vec<usize> = (0..st.chains.len()).filter(|&c| st.end[c] > r).collect();
        let next_len = self.host.poset().elements_of_rank(r + 1).len();
        let can_start = 2 * (r + 1) <= self.height();
        if open.len() > next_len || (!can_start && open.len() != next_len) {
            return Flow::Continue;
        }
        self.assign(st, &open, 0, stop_rank, sink)
    }

    fn assign(
        &self,
        st: &mut State,
        open: &[usize],
        i: usize,
        stop_rank: usize,
        sink: &mut dyn FnMut(&State) -> Flow,
    ) -> Flow {
        let flow = self.control.tick();
        if flow != Flow::Continue {
            return flow;
        }
        let poset = self.host.poset();
        let r1 = st.rank + 1;
        if i == open.len() {
            let rk = self.height();
            let starts: Vec<ElementId> = poset
                .elements_of_rank(r1)
                .iter()
                .copied()
                .filter(|&x| st.owner[x] == FREE)
                .collect();
            let mut opened = 0;
            let mut ok = true;
            for &x in &starts {
                if !self.start(st, x, rk - r1) {
                    ok = false;
                    break;
                }
                opened += 1;
            }
            let flow = if ok {
                st.rank = r1;
                let f = self.descend(st, stop_rank, sink);
                st.rank = r1 - 1;
                f
            } else {
                Flow::Continue
            };
            for _ in 0..opened {
                self.unstart(st);
            }
            return flow;
        }

        let c = open[i];
        let top = *st.chains[c].last().expect("open chain is nonempty");
        let (p, level) = self.host.coords(top);
        let saved_run = st.run[c];
        for &y in poset.upper_covers(top) {
            if st.owner[y] != FREE {
                continue;
            }
            let (q, l2) = self.host.coords(y);
            let run = if q == p && l2 == level + 1 { saved_run } else { l2 == 0 };
            if self.forbid_taut && run && l2 + 1 == self.host.n() {
                continue;
            }
            st.owner[y] = c;
            st.chains[c].push(y);
            st.run[c] = run;
            let flow = self.assign(st, open, i + 1, stop_rank, sink);
            st.chains[c].pop();
            st.owner[y] = FREE;
            st.run[c] = saved_run;
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }
}

/// Bit permutations of `Q_k` acting on `Q_k × n`, as id maps.
fn cube_symmetries(host: &ChainProduct) -> Vec<Vec<ElementId>> {
    let Some(k) = host.cube_dim() else {
        return Vec::new();
    };
    if !(2..=7).contains(&k) {
        return Vec::new();
    }
    (0..k)
        .permutations(k)
        .filter(|perm| perm.iter().enumerate().any(|(i, &j)| i != j))
        .map(|perm| {
            host.poset()
                .elements()
                .map(|x| {
                    let (bits, level) = host.coords(x);
                    let moved = perm
                        .iter()
                        .enumerate()
                        .filter(|&(from, _)| bits >> from & 1 == 1)
                        .fold(0usize, |acc, (_, &to)| acc | 1 << to);
                    host.id(moved, level)
                })
                .collect()
        })
        .collect()
}

fn orbit_key(chains: &[Vec<ElementId>], map: Option<&[ElementId]>) -> Vec<Vec<ElementId>> {
    let mut key: Vec<Vec<ElementId>> = chains
        .iter()
        .map(|c| c.iter().map(|&x| map.map_or(x, |m| m[x])).collect())
        .collect();
    key.sort();
    key
}

fn run_search(host: &ChainProduct, config: &SearchConfig) -> SearchOutcome {
    if !host.poset().is_rank_symmetric() {
        return SearchOutcome::empty_exhausted();
    }
    let control = Control::new(config);
    let engine = Engine {
        host,
        forbid_taut: config.forbid_taut,
        control: &control,
    };
    let Some(mut root) = engine.root() else {
        return SearchOutcome::empty_exhausted();
    };
    let rk = host.height();
    let limit = config.limit.unwrap_or(usize::MAX);
    if limit == 0 {
        return SearchOutcome {
            found: Vec::new(),
            exhausted: false,
            nodes_visited: 0,
            stop: StopReason::LimitReached,
        };
    }

    // First branching level: all ways of completing rank 1.
    let mut branches: Vec<State> = Vec::new();
    let first_stop = rk.min(1);
    let first_flow = engine.descend(&mut root, first_stop, &mut |st| {
        branches.push(st.clone());
        Flow::Continue
    });
    if let Flow::Budget(reason) = first_flow {
        return SearchOutcome {
            found: Vec::new(),
            exhausted: false,
            nodes_visited: control.nodes(),
            stop: reason,
        };
    }
    if config.use_symmetry {
        let group = cube_symmetries(host);
        let mut seen = HashSet::new();
        branches.retain(|st| {
            let canon = group
                .iter()
                .map(|g| orbit_key(&st.chains, Some(g)))
                .chain([orbit_key(&st.chains, None)])
                .min()
                .expect("identity is always present");
            seen.insert(canon)
        });
    }

    let explore = |mut st: State, cap: usize| -> (Vec<Scd>, Flow) {
        let mut found = Vec::new();
        let flow = engine.descend(&mut st, rk, &mut |done| {
            found.push(done.to_scd(host));
            if found.len() >= cap {
                Flow::Limit
            } else {
                Flow::Continue
            }
        });
        (found, flow)
    };

    let mut found = Vec::new();
    let mut stop = StopReason::Exhausted;
    if config.jobs <= 1 || branches.len() <= 1 {
        for st in branches {
            let (mut more, flow) = explore(st, limit - found.len());
            found.append(&mut more);
            match flow {
                Flow::Continue => {}
                Flow::Limit => {
                    stop = StopReason::LimitReached;
                    break;
                }
                Flow::Budget(reason) => {
                    stop = reason;
                    break;
                }
            }
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .expect("thread pool");
        let deterministic = config.deterministic_order;
        let total = AtomicU64::new(0);
        let results: Vec<(Vec<Scd>, Flow)> = pool.install(|| {
            branches
                .into_par_iter()
                .map(|st| {
                    let (found, flow) = explore(st, limit);
                    let so_far = total.fetch_add(found.len() as u64, Ordering::Relaxed) + found.len() as u64;
                    if !deterministic && so_far >= limit as u64 {
                        control.cancel.store(true, Ordering::Relaxed);
                    }
                    (found, flow)
                })
                .collect()
        });
        for (mut more, flow) in results {
            if let Flow::Budget(reason) = flow {
                stop = reason;
            }
            if stop == StopReason::Exhausted && flow == Flow::Limit {
                stop = StopReason::LimitReached;
            }
            found.append(&mut more);
        }
        if found.len() >= limit && stop == StopReason::Exhausted {
            stop = StopReason::LimitReached;
        }
        found.truncate(limit);
        match control.budget_hit.load(Ordering::Relaxed) {
            1 => stop = StopReason::NodeBudget,
            2 => stop = StopReason::TimeBudget,
            _ => {}
        }
    }
    SearchOutcome {
        exhausted: stop == StopReason::Exhausted,
        found,
        nodes_visited: control.nodes(),
        stop,
    }
}

/// Every SCD of `host` (taut-free ones only with `forbid_taut`), up to
/// `limit`, in a repeatable order. Hosts that are not rank-symmetric have no
/// SCD and return an empty exhausted outcome at once.
pub fn enumerate_scds(host: &ChainProduct, config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    if config.use_symmetry {
        return Err(SearchError::SymmetryInEnumeration);
    }
    Ok(run_search(host, config))
}

/// Looks for one SCD, optionally pruning by symmetry. The limit defaults
/// to 1 when unset.
pub fn find_scd(host: &ChainProduct, config: &SearchConfig) -> SearchOutcome {
    let mut config = config.clone();
    config.limit.get_or_insert(1);
    run_search(host, &config)
}

/// Exact number of SCDs of a host with at most `guard` elements.
pub fn count_scds_guarded(host: &ChainProduct, guard: usize) -> Result<u64, SearchError> {
    if host.len() > guard {
        return Err(SearchError::TooLarge { size: host.len(), guard });
    }
    if !host.poset().is_rank_symmetric() {
        return Ok(0);
    }
    let control = Control::new(&SearchConfig {
        node_budget: Some(u64::MAX),
        ..SearchConfig::default()
    });
    let engine = Engine {
        host,
        forbid_taut: false,
        control: &control,
    };
    let Some(mut root) = engine.root() else {
        return Ok(0);
    };
    let mut count = 0u64;
    let flow = engine.descend(&mut root, host.height(), &mut |_| {
        count += 1;
        Flow::Continue
    });
    match flow {
        Flow::Continue => Ok(count),
        Flow::Budget(reason) => Err(SearchError::Inconclusive(reason)),
        Flow::Limit => Err(SearchError::Inconclusive(StopReason::LimitReached)),
    }
}

/// [`count_scds_guarded`] with the default guard.
pub fn count_scds(host: &ChainProduct) -> Result<u64, SearchError> {
    count_scds_guarded(host, DEFAULT_COUNT_GUARD)
}

/// Why a taut-free SCD of `P(k, n)` does or does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `n ≤ 2`: a chain of length at most 2 makes the maximal chain taut.
    ShortChain,
    /// `Q_k` fails the middle-rank necessary condition.
    NecessaryConditions,
    /// The search space was explored completely.
    ExhaustiveSearch,
    /// A witness was found by search.
    SearchWitness,
    /// A witness was built by [`generate`].
    Construction,
}

#[derive(Debug, Clone)]
pub struct ExistenceReport {
    /// `None` when the search ran out of budget first.
    pub exists: Option<bool>,
    pub witness: Option<Scd>,
    pub proof_exhaustive: bool,
    pub basis: Option<Basis>,
    pub nodes_visited: u64,
}

impl ExistenceReport {
    fn impossible(basis: Basis, proof_exhaustive: bool, nodes_visited: u64) -> Self {
        ExistenceReport {
            exists: Some(false),
            witness: None,
            proof_exhaustive,
            basis: Some(basis),
            nodes_visited,
        }
    }
}

/// Does `P(k, n)` have an SCD without taut chains?
///
/// `n ≤ 2` is rejected outright. For `k ≥ 3` a failed middle-rank condition
/// rejects without search; `k ≥ 5` with `n ≥ 3` is settled by construction.
/// The remaining cases (`k ≤ 2`) are searched exhaustively under `config`,
/// and a search that runs out of budget is reported as inconclusive.
pub fn exists_nontaut_scd(k: usize, n: usize, config: &SearchConfig) -> Result<ExistenceReport, SearchError> {
    if n <= 2 {
        return Ok(ExistenceReport::impossible(Basis::ShortChain, false, 0));
    }
    if k >= 3 && !necessary_conditions(&build_hypercube(k), true).hold() {
        return Ok(ExistenceReport::impossible(Basis::NecessaryConditions, false, 0));
    }
    let host = ChainProduct::cuboid(k, n)?;
    if k >= 5 {
        let built = generate(k, n).expect("k >= 5 and n >= 3 is inside the constructive region");
        assert!(validate_scd(&built.host, &built.scd).is_valid_nontaut());
        return Ok(ExistenceReport {
            exists: Some(true),
            witness: Some(built.scd),
            proof_exhaustive: false,
            basis: Some(Basis::Construction),
            nodes_visited: 0,
        });
    }
    let config = SearchConfig {
        forbid_taut: true,
        limit: Some(1),
        ..config.clone()
    };
    let outcome = run_search(&host, &config);
    if let Some(witness) = outcome.found.into_iter().next() {
        let report = validate_scd(&host, &witness);
        assert!(report.is_valid_nontaut(), "search produced an invalid witness: {report}");
        return Ok(ExistenceReport {
            exists: Some(true),
            witness: Some(witness),
            proof_exhaustive: false,
            basis: Some(Basis::SearchWitness),
            nodes_visited: outcome.nodes_visited,
        });
    }
    if outcome.exhausted {
        return Ok(ExistenceReport::impossible(Basis::ExhaustiveSearch, true, outcome.nodes_visited));
    }
    Ok(ExistenceReport {
        exists: None,
        witness: None,
        proof_exhaustive: false,
        basis: None,
        nodes_visited: outcome.nodes_visited,
    })
}
