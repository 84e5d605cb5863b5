//! Text formats: knowledge bases, traces, witnesses and DOT.

mod dot;
mod parser;
mod trace;

pub use dot::{dot_edge_count, dot_node_count, export_dot};
pub use parser::{parse_atom, parse_atom_list, parse_kb, parse_term, serialize_kb, serialize_rule, ParsedDocument};
pub use trace::{deserialize_trace, serialize_trace, TraceDocument, TraceStep, TRACE_FORMAT_VERSION};
