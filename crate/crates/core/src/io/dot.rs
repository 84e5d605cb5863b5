use std::collections::BTreeMap;
use std::fmt::Write;

use crate::chase::Derivation;
use crate::logic::Atom;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: one node per atom (labelled with its rank), one edge
/// per direct-ancestor pair, coloured by step, nodes grouped by rank.
pub fn export_dot(d: &Derivation) -> String {
    let levels = d.atoms_by_rank();
    let mut ids: BTreeMap<&Atom, usize> = BTreeMap::new();
    let mut out = String::from("digraph derivation {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
    for (rank, level) in levels.iter().enumerate() {
        let _ = writeln!(out, "  subgraph rank_{rank} {{\n    rank=same;");
        for atom in level {
            let id = ids.len();
            ids.insert(atom, id);
            let _ = writeln!(out, "    n{id} [label=\"{} : {rank}\"];", escape(&atom.to_string()));
        }
        out.push_str("  }\n");
    }
    for (i, step) in d.steps().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let rule = d.rule(&step.trigger.rule).expect("recorded trigger");
        let body = step.trigger.body_image(rule);
        for target in &step.produced {
            for source in &body {
                let _ = writeln!(
                    out,
                    "  n{} -> n{} [color=\"{color}\", label=\"{}\"];",
                    ids[source],
                    ids[target],
                    i + 1
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Number of `->` edges in a DOT text, used by tests.
pub fn dot_edge_count(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains(" -> ")).count()
}

/// Number of atom nodes in a DOT text.
pub fn dot_node_count(dot: &str) -> usize {
    dot.lines()
        .filter(|l| l.trim_start().starts_with('n') && l.contains("[label="))
        .count()
}
