//! Products `P × n` of a graded poset with a chain, and the cuboids
//! `P(k, n) = Q_k × n`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::poset::{bit_string, build_chain_poset, build_hypercube, product, ElementId, GradedPoset, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("rank {rank} is outside the window [{low}, {high}) of P-coordinate {p}")]
pub struct RankWindowError {
    pub p: ElementId,
    pub rank: usize,
    pub low: usize,
    pub high: usize,
}

/// An element `(a_1, …, a_k, c)` of `Q_k × n`.
///
/// `bits` holds the hypercube coordinate with `a_1` as the most significant
/// of its `k` low bits, so `"110102"` is `bits = 0b11010`, `level = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuboidElement {
    pub k: usize,
    pub bits: u64,
    pub level: usize,
}

impl CuboidElement {
    pub fn rank(&self) -> usize {
        self.bits.count_ones() as usize + self.level
    }

    /// `"110102"`: k binary digits followed by a single decimal level digit.
    /// Only meaningful for `level < 10`.
    pub fn compact(&self) -> String {
        debug_assert!(self.level < 10);
        format!("{}{}", bit_string(self.bits, self.k), self.level)
    }

    /// `"1,1,0,1,0;2"`.
    pub fn general(&self) -> String {
        let digits: Vec<String> = bit_string(self.bits, self.k).chars().map(String::from).collect();
        format!("{};{}", digits.join(","), self.level)
    }
}

impl fmt::Display for CuboidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level < 10 {
            f.write_str(&self.compact())
        } else {
            f.write_str(&self.general())
        }
    }
}

/// The poset `P × n`. Element `(p, level)` has id `p * n + level`.
#[derive(Debug, Clone)]
pub struct ChainProduct {
    base: Arc<GradedPoset>,
    n: usize,
    poset: GradedPoset,
    cube_dim: Option<usize>,
}

impl ChainProduct {
    pub fn new(base: impl Into<Arc<GradedPoset>>, n: usize) -> Result<Self, PosetError> {
        let base = base.into();
        let chain = build_chain_poset(n)?;
        let poset = product(&base, &chain);
        Ok(ChainProduct {
            base,
            n,
            poset,
            cube_dim: None,
        })
    }

    /// `P(k, n) = Q_k × n`, built directly on bitmasks. As a poset this is
    /// identical, id for id, to `ChainProduct::new(build_hypercube(k), n)`.
    pub fn cuboid(k: usize, n: usize) -> Result<Self, PosetError> {
        Self::cuboid_over(Arc::new(build_hypercube(k)), k, n)
    }

    fn cuboid_over(base: Arc<GradedPoset>, k: usize, n: usize) -> Result<Self, PosetError> {
        if n == 0 {
            return Err(PosetError::EmptyChain);
        }
        let cube = 1usize << k;
        let mut names = Vec::with_capacity(cube * n);
        let mut covers = Vec::new();
        for bits in 0..cube {
            for level in 0..n {
                let e = CuboidElement { k, bits: bits as u64, level };
                names.push(if n <= 10 { e.compact() } else { e.general() });
                let id = bits * n + level;
                for b in (0..k).rev().filter(|b| bits >> b & 1 == 0) {
                    covers.push((id, (bits | 1 << b) * n + level));
                }
                if level + 1 < n {
                    covers.push((id, id + 1));
                }
            }
        }
        let poset = GradedPoset::from_covers(format!("P({k},{n})"), names, covers)?;
        Ok(ChainProduct {
            base,
            n,
            poset,
            cube_dim: Some(k),
        })
    }

    /// Same base poset, chain length `m`.
    pub fn with_length(&self, m: usize) -> Result<Self, PosetError> {
        match self.cube_dim {
            Some(k) => Self::cuboid_over(Arc::clone(&self.base), k, m),
            None => Self::new(Arc::clone(&self.base), m),
        }
    }

    pub fn base(&self) -> &GradedPoset {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<GradedPoset> {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poset(&self) -> &GradedPoset {
        &self.poset
    }

    /// `k` when this is a cuboid `P(k, n)`.
    pub fn cube_dim(&self) -> Option<usize> {
        self.cube_dim
    }

    /// `rk(P)` of the base.
    pub fn base_rank(&self) -> usize {
        self.base.height()
    }

    /// `rk(P × n) = rk(P) + n − 1`.
    pub fn height(&self) -> usize {
        self.poset.height()
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn id(&self, p: ElementId, level: usize) -> ElementId {
        debug_assert!(p < self.base.len() && level < self.n);
        p * self.n + level
    }

    /// `(p, level)` of an element.
    pub fn coords(&self, x: ElementId) -> (ElementId, usize) {
        (x / self.n, x % self.n)
    }

    pub fn p_coord(&self, x: ElementId) -> ElementId {
        x / self.n
    }

    pub fn level(&self, x: ElementId) -> usize {
        x % self.n
    }

    /// `[p, r]`: the element with P-coordinate `p` and total rank `r`.
    pub fn element_at(&self, p: ElementId, r: usize) -> Result<ElementId, RankWindowError> {
        let low = self.base.rank(p);
        let high = low + self.n;
        if r < low || r >= high {
            return Err(RankWindowError { p, rank: r, low, high });
        }
        Ok(self.id(p, r - low))
    }

    pub fn cuboid_element(&self, x: ElementId) -> Option<CuboidElement> {
        let k = self.cube_dim?;
        let (p, level) = self.coords(x);
        Some(CuboidElement { k, bits: p as u64, level })
    }

    pub fn cuboid_id(&self, e: &CuboidElement) -> Option<ElementId> {
        match self.cube_dim {
            Some(k) if k == e.k && e.level < self.n && e.bits < 1 << k => {
                Some(self.id(e.bits as usize, e.level))
            }
            _ => None,
        }
    }

    pub fn name(&self, x: ElementId) -> &str {
        self.poset.name(x)
    }
}

/// `build_cuboid(k, n)`.
pub fn build_cuboid(k: usize, n: usize) -> Result<ChainProduct, PosetError> {
    ChainProduct::cuboid(k, n)
}
