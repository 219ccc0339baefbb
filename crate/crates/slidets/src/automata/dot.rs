use std::fmt::Write;

use super::Automaton;

/// GraphViz text with one line per arc, sinks double-circled and an arrowless
/// source marker.
pub(super) fn render(a: &Automaton) -> String {
    let mut out = String::new();
    out.push_str("digraph automaton {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    out.push_str("  source [shape=none, label=\"\"];\n");
    out.push_str("  source -> 0;\n");
    for q in 0..a.num_states() {
        if a.is_accepting(q) {
            let _ = writeln!(out, "  {q} [shape=doublecircle];");
        } else {
            let _ = writeln!(out, "  {q};");
        }
    }
    for (p, l, q) in a.arcs() {
        let _ = writeln!(out, "  {p} -> {q} [label=\"{l}\"];");
    }
    out.push_str("}\n");
    out
}
