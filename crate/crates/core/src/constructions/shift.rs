use crate::cuboid::ChainProduct;
use crate::scd::{Chain, Scd};

use super::{require_valid, ConstructionError};

/// Moves an SCD of `P × n` to `P × m` for `m, n ≥ rk(P) + 1`.
///
/// Each chain splits by rank into a first-block part (ranks below `rk(P)`),
/// a middle-block part (ranks `rk(P) ..= n−1`, necessarily one column
/// `[p, ·]`) and a last-block part. The first part is kept, the middle part
/// becomes `[p, rk(P)] ≺ … ≺ [p, m−1]` and the last part has its levels raised
/// by `m − n`. Taut chains go to taut chains and `shift(shift(S, m), n) = S`.
pub fn shift(host: &ChainProduct, scd: &Scd, m: usize) -> Result<(ChainProduct, Scd), ConstructionError> {
    let rk_p = host.base_rank();
    let n = host.n();
    for length in [n, m] {
        if length < rk_p + 1 {
            return Err(ConstructionError::ChainTooShort {
                length,
                min: rk_p + 1,
            });
        }
    }
    require_valid(host, scd)?;
    let target = host.with_length(m)?;
    let poset = host.poset();

    let mut chains = Vec::with_capacity(scd.len());
    for (i, chain) in scd.chains().iter().enumerate() {
        let mut first = Vec::new();
        let mut column = None;
        let mut last = Vec::new();
        for &x in chain.iter() {
            let r = poset.rank(x);
            let (p, level) = host.coords(x);
            if r < rk_p {
                first.push(target.id(p, level));
            } else if r < n {
                match column {
                    None => column = Some(p),
                    Some(q) if q == p => {}
                    Some(_) => return Err(ConstructionError::NonVerticalMiddle(i)),
                }
            } else {
                last.push(target.id(p, level + m - n));
            }
        }
        // Every symmetric chain crosses the middle block when n > rk(P).
        let p = column.ok_or(ConstructionError::NonVerticalMiddle(i))?;
        let middle = (rk_p..m).map(|r| target.element_at(p, r).expect("middle rank lies in the column window"));
        let mut out = first;
        out.extend(middle);
        out.extend(last);
        chains.push(Chain::new(out));
    }
    let scd = Scd::new(chains).canonical(target.poset());
    Ok((target, scd))
}
