//! Taut-free SCDs of `P(5,3)`, `P(5,4)` and `P(5,5)`, embedded from the
//! golden files under `data/`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::cuboid::ChainProduct;
use crate::scd::{validate_scd, Scd};

use super::document::ScdDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BuiltinTableId {
    P53,
    P54,
    P55,
}

impl BuiltinTableId {
    pub const ALL: [BuiltinTableId; 3] = [Self::P53, Self::P54, Self::P55];

    pub fn n(self) -> usize {
        match self {
            Self::P53 => 3,
            Self::P54 => 4,
            Self::P55 => 5,
        }
    }

    pub fn k(self) -> usize {
        5
    }

    pub fn host(self) -> ChainProduct {
        ChainProduct::cuboid(self.k(), self.n()).expect("P(5,n) is a valid cuboid")
    }

    /// The golden file contents, byte for byte.
    pub fn source(self) -> &'static str {
        match self {
            Self::P53 => include_str!("../../data/P53.txt"),
            Self::P54 => include_str!("../../data/P54.txt"),
            Self::P55 => include_str!("../../data/P55.txt"),
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BuiltinTableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::P53 => "P53",
            Self::P54 => "P54",
            Self::P55 => "P55",
        })
    }
}

impl FromStr for BuiltinTableId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "P53" => Ok(Self::P53),
            "P54" => Ok(Self::P54),
            "P55" => Ok(Self::P55),
            _ => Err(format!("unknown table `{s}` (expected P53, P54 or P55)")),
        }
    }
}

static TABLES: [OnceLock<(ScdDocument, Scd)>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];

fn load(id: BuiltinTableId) -> &'static (ScdDocument, Scd) {
    TABLES[id.index()].get_or_init(|| {
        let doc = ScdDocument::parse_strict(id.source()).expect("embedded table parses");
        let host = id.host();
        let scd = doc.to_scd(&host).expect("embedded table fits its host");
        let report = validate_scd(&host, &scd);
        assert!(report.is_valid_nontaut(), "embedded table {id} is corrupt: {report}");
        (doc, scd)
    })
}

/// The table as an SCD of `id.host()`, rows in their original order.
pub fn builtin_table(id: BuiltinTableId) -> Scd {
    load(id).1.clone()
}

pub fn builtin_document(id: BuiltinTableId) -> ScdDocument {
    load(id).0.clone()
}
