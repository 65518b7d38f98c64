use crate::cuboid::ChainProduct;
use crate::data_io::{builtin_table, BuiltinTableId};
use crate::poset::bit_string;
use crate::scd::{validate_scd, Scd};

use super::lift::extend_dimension;
use super::middle::{collapse, enumerate_matchings, expand, has_forbidden_subchain, middle_graph, repair};
use super::shift::shift;
use super::ConstructionError;

/// A generated decomposition with a record of how it was obtained.
#[derive(Debug, Clone)]
pub struct Generated {
    pub host: ChainProduct,
    pub scd: Scd,
    pub notes: Vec<String>,
}

/// A taut-free SCD of `P(k, n)` for `k ≥ 5`, `n ≥ 3`.
///
/// `P(5,3)`, `P(5,4)` and `P(5,5)` come from the builtin tables. `P(5,6)` is
/// the first lift of the `P(5,5)` table (trying matchings in order of the
/// unmatched vertex from the minimum up, repaired where needed) that
/// validates without taut chains; larger `n` are shifted from there. For
/// `k > 5` the `k = 5` result is lifted by an SCD of `Q_{k−5}`.
pub fn generate(k: usize, n: usize) -> Result<Generated, ConstructionError> {
    if k < 5 || n < 3 {
        return Err(ConstructionError::OutsideRegion { k, n });
    }
    let mut out = generate_five(n)?;
    if k > 5 {
        let (host, scd) = extend_dimension(&out.host, &out.scd, k)?;
        out.notes.push(format!("lifted from P(5,{n}) by the doubling SCD of Q_{}", k - 5));
        out.host = host;
        out.scd = scd;
    }
    debug_assert!(validate_scd(&out.host, &out.scd).is_valid_nontaut());
    Ok(out)
}

fn generate_five(n: usize) -> Result<Generated, ConstructionError> {
    let table = match n {
        3 => Some(BuiltinTableId::P53),
        4 => Some(BuiltinTableId::P54),
        5 => Some(BuiltinTableId::P55),
        _ => None,
    };
    if let Some(id) = table {
        return Ok(Generated {
            host: id.host(),
            scd: builtin_table(id),
            notes: vec![format!("builtin table {id}")],
        });
    }
    let mut out = lift_to_six()?;
    if n > 6 {
        let (host, scd) = shift(&out.host, &out.scd, n)?;
        out.notes.push(format!("shifted from P(5,6) to P(5,{n})"));
        out.host = host;
        out.scd = scd;
    }
    Ok(out)
}

fn lift_to_six() -> Result<Generated, ConstructionError> {
    let id = BuiltinTableId::P55;
    let host = id.host();
    let table = builtin_table(id);
    let graph = middle_graph(&host, &table)?;
    for (index, f) in enumerate_matchings(&graph).iter().enumerate() {
        let (up_host, mut up) = expand(&host, &table, f)?;
        let mut notes = vec![
            format!("builtin table {id}"),
            format!(
                "lifted to P(5,6) with matching {index} (unmatched vertex {})",
                bit_string(f.unmatched as u64, 5)
            ),
        ];
        if has_forbidden_subchain(&up_host, &up) {
            up = repair(&up_host, &up)?;
            notes.push("repaired the maximal chain".into());
        }
        let collapses_clean = collapse(&up_host, &up)
            .map(|(down_host, down)| validate_scd(&down_host, &down).is_valid_nontaut())
            .unwrap_or(false);
        if collapses_clean && validate_scd(&up_host, &up).is_valid_nontaut() {
            return Ok(Generated {
                host: up_host,
                scd: up,
                notes,
            });
        }
    }
    Err(ConstructionError::InvalidInput(
        "no lift of the P(5,5) table is free of taut chains".into(),
    ))
}
