//! Packets and the pictorial representation of `P × n`.
//!
//! The element `(p, c)` is drawn at `(x, y) = (rk(p), rk(p) + c)`: row `y`
//! is a rank of `P × n`, column `x` a rank of `P`, and each point carries
//! the size of its packet.

use std::collections::BTreeMap;

use crate::cuboid::ChainProduct;
use crate::poset::{ElementId, GradedPoset};

/// All elements of `P × n` whose P-coordinate has rank `x` and whose total
/// rank is `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub x: usize,
    pub y: usize,
    pub members: Vec<ElementId>,
}

impl Packet {
    pub fn level(&self) -> usize {
        self.y - self.x
    }
}

/// Which regime a row of the pictorial representation falls in (`n ≥ rk(P)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    First,
    Middle,
    Last,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketGrid {
    counts: BTreeMap<(usize, usize), usize>,
    base_rank: usize,
    n: usize,
}

impl PacketGrid {
    pub fn count(&self, x: usize, y: usize) -> Option<usize> {
        self.counts.get(&(x, y)).copied()
    }

    pub fn counts(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.counts
    }

    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows, `rk(P) + n`.
    pub fn rows(&self) -> usize {
        self.base_rank + self.n
    }

    /// Packet sizes of row `y`, keyed by column.
    pub fn row(&self, y: usize) -> Vec<(usize, usize)> {
        (0..=self.base_rank)
            .filter_map(|x| self.count(x, y).map(|c| (x, c)))
            .collect()
    }

    pub fn row_sum(&self, y: usize) -> usize {
        self.row(y).iter().map(|&(_, c)| c).sum()
    }

    /// Block of row `y`; `None` when `n < rk(P)` or `y` is off the grid.
    pub fn block(&self, y: usize) -> Option<Block> {
        if self.n < self.base_rank || y >= self.rows() {
            return None;
        }
        Some(if y < self.base_rank {
            Block::First
        } else if y < self.n {
            Block::Middle
        } else {
            Block::Last
        })
    }

    /// Column range `x` occupied by row `y`, per block.
    pub fn expected_columns(&self, y: usize) -> Option<std::ops::RangeInclusive<usize>> {
        Some(match self.block(y)? {
            Block::First => 0..=y,
            Block::Middle => 0..=self.base_rank,
            Block::Last => y + 1 - self.n..=self.base_rank,
        })
    }
}

/// `packet_grid(P, n)`: counts only, from the rank vector of `P`.
pub fn packet_grid(p: &GradedPoset, n: usize) -> PacketGrid {
    let mut counts = BTreeMap::new();
    for (x, &size) in p.rank_sizes().iter().enumerate() {
        for y in x..x + n {
            counts.insert((x, y), size);
        }
    }
    PacketGrid {
        counts,
        base_rank: p.height(),
        n,
    }
}

/// Materializes every packet of a concrete `P × n`, ordered by `(y, x)`.
pub fn packets(host: &ChainProduct) -> Vec<Packet> {
    let mut by_key: BTreeMap<(usize, usize), Vec<ElementId>> = BTreeMap::new();
    for id in host.poset().elements() {
        let x = host.base().rank(host.p_coord(id));
        let y = host.poset().rank(id);
        by_key.entry((y, x)).or_default().push(id);
    }
    by_key
        .into_iter()
        .map(|((y, x), members)| Packet { x, y, members })
        .collect()
}
