use crate::cuboid::ChainProduct;
use crate::poset::{product, GradedPoset};
use crate::scd::{validate_decomposition, Chain, Scd};

use super::grid::{grid_chains, hypercube_scd};
use super::{require_nontaut, ConstructionError};

/// Lifts a taut-free SCD of `P × n` and an SCD of `Q` to a taut-free SCD of
/// `(P × Q) × n`: every product of a chain `C` with a chain `D` is a
/// rectangle decomposed by [`grid_chains`].
///
/// The result lives on `ChainProduct::new(product(P, Q), n)`, so the element
/// `((p, q), c)` has id `(p * |Q| + q) * n + c`.
pub fn product_lift(
    host_pn: &ChainProduct,
    scd_pn: &Scd,
    q: &GradedPoset,
    scd_q: &Scd,
) -> Result<(ChainProduct, Scd), ConstructionError> {
    require_nontaut(host_pn, scd_pn)?;
    let q_report = validate_decomposition(q, scd_q);
    if !q_report.is_valid() {
        return Err(ConstructionError::InvalidInput(q_report.messages.join("; ")));
    }
    let host = ChainProduct::new(product(host_pn.base(), q), host_pn.n())?;
    let scd = lift_chains(host_pn, scd_pn, q.len(), scd_q).canonical(host.poset());
    Ok((host, scd))
}

/// Taut-free SCD of `P(k', n)` from one of `P(k, n)`, lifting with
/// [`hypercube_scd`]`(k' − k)`. The new coordinates are appended on the
/// right, so the old element `a_1…a_k c` becomes `a_1…a_k 0…0 c` at the bottom
/// of its rectangle.
pub fn extend_dimension(
    host: &ChainProduct,
    scd: &Scd,
    k_prime: usize,
) -> Result<(ChainProduct, Scd), ConstructionError> {
    let k = host.cube_dim().ok_or(ConstructionError::NotCuboid)?;
    if k_prime < k {
        return Err(ConstructionError::DimensionShrink { from: k, to: k_prime });
    }
    require_nontaut(host, scd)?;
    let target = ChainProduct::cuboid(k_prime, host.n())?;
    let extra = k_prime - k;
    let lifted = lift_chains(host, scd, 1 << extra, &hypercube_scd(extra)).canonical(target.poset());
    Ok((target, lifted))
}

fn lift_chains(host_pn: &ChainProduct, scd_pn: &Scd, q_len: usize, scd_q: &Scd) -> Scd {
    let n = host_pn.n();
    let mut out = Vec::new();
    for c in scd_pn.chains() {
        for d in scd_q.chains() {
            for rect in grid_chains(c.len(), d.len()) {
                let chain = rect
                    .into_iter()
                    .map(|(x, y)| {
                        let (p, level) = host_pn.coords(c[x]);
                        (p * q_len + d[y]) * n + level
                    })
                    .collect();
                out.push(Chain::new(chain));
            }
        }
    }
    Scd::new(out)
}
