//! Text format for SCDs of cuboids, the builtin taut-free tables and the
//! pictorial renderer.

mod document;
mod render;
mod tables;

pub use document::{parse_scd, serialize_scd, FormatError, ScdDocument};
pub use render::render_pictorial;
pub use tables::{builtin_document, builtin_table, BuiltinTableId};
