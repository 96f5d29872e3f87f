use std::fmt::Write;

use super::{GlobalCode, Network};
use crate::field::FieldElem;

fn vector_label(v: &[FieldElem]) -> String {
    let parts: Vec<String> = v.iter().map(|a| a.index().to_string()).collect();
    format!("({})", parts.join(","))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering. Source nodes are boxes, receivers list their demands,
/// and edges carry their global coding vector when a code is given.
pub fn to_dot(n: &Network, code: Option<&GlobalCode>) -> String {
    let names = |ms: &[usize]| ms.iter().map(|&m| n.messages()[m].as_str()).collect::<Vec<_>>().join(",");
    let mut out = String::from("digraph network {\n  rankdir=TB;\n");
    for (x, node) in n.nodes().iter().enumerate() {
        let mut label = escape(&node.label);
        if !node.sources.is_empty() {
            let _ = write!(label, "\\nS: {}", escape(&names(&node.sources)));
        }
        if !node.demands.is_empty() {
            let _ = write!(label, "\\nR: {}", escape(&names(&node.demands)));
        }
        let shape = if !node.sources.is_empty() {
            "box"
        } else if !node.demands.is_empty() {
            "doublecircle"
        } else {
            "ellipse"
        };
        let _ = writeln!(out, "  n{x} [label=\"{label}\", shape={shape}];");
    }
    for (id, e) in n.edges().iter().enumerate() {
        let label = match code.and_then(|c| c.edge(id)) {
            Some(v) => format!("e{id} {}", vector_label(v)),
            None => format!("e{id}"),
        };
        let _ = writeln!(out, "  n{} -> n{} [label=\"{label}\"];", e.tail, e.head);
    }
    out.push_str("}\n");
    out
}
