use crate::poset::{build_chain_poset, build_hypercube, product, GradedPoset};
use crate::scd::{Chain, Scd};

use super::ConstructionError;

/// Hook decomposition of the grid `a × b` as coordinate pairs.
///
/// For `a ≤ b`, chain `i` climbs column `i` from `(i, 0)` to `(i, b−1−i)`
/// and then runs along row `b−1−i` up to `(a−1, b−1−i)`. For `a > b` the
/// construction is transposed. Chain `i` has `a + b − 1 − 2i` elements.
pub fn grid_chains(a: usize, b: usize) -> Vec<Vec<(usize, usize)>> {
    if a > b {
        return grid_chains(b, a)
            .into_iter()
            .map(|c| c.into_iter().map(|(x, y)| (y, x)).collect())
            .collect();
    }
    (0..a)
        .map(|i| {
            let top = b - 1 - i;
            (0..=top)
                .map(|y| (i, y))
                .chain((i + 1..a).map(|x| (x, top)))
                .collect()
        })
        .collect()
}

/// [`grid_chains`] as an SCD of `chain(a) × chain(b)`, where `(x, y)` has
/// id `x * b + y`.
pub fn grid_scd(a: usize, b: usize) -> Result<(GradedPoset, Scd), ConstructionError> {
    if a == 0 || b == 0 {
        return Err(ConstructionError::EmptyGrid(a, b));
    }
    let host = product(&build_chain_poset(a)?, &build_chain_poset(b)?);
    let chains = grid_chains(a, b)
        .into_iter()
        .map(|c| Chain::new(c.into_iter().map(|(x, y)| x * b + y).collect()))
        .collect();
    Ok((host, Scd::new(chains)))
}

/// SCD of `Q_k` by repeated doubling: each chain of `Q_{j−1}` times the
/// two-element chain is a rectangle, decomposed by [`grid_chains`]. The new
/// coordinate is appended as the least significant bit.
pub fn hypercube_scd(k: usize) -> Scd {
    let mut chains: Vec<Vec<usize>> = vec![vec![0]];
    for _ in 0..k {
        chains = chains
            .iter()
            .flat_map(|c| {
                grid_chains(c.len(), 2)
                    .into_iter()
                    .map(move |g| g.into_iter().map(|(x, y)| c[x] * 2 + y).collect())
            })
            .collect();
    }
    Scd::new(chains.into_iter().map(Chain::new).collect()).canonical(&build_hypercube(k))
}
