use std::fmt::Write as _;

use super::TransitionSystem;
use crate::model::Model;

/// Graphviz rendering: dashed edges for uncontrollable events, double circles for marked states.
pub fn to_dot(ts: &TransitionSystem, model: &Model) -> String {
    let mut out = String::from("digraph statespace {\n  node [shape=circle, label=\"\"];\n");
    for (i, s) in ts.states.iter().enumerate() {
        let periph = if ts.marked[i] { 2 } else { 1 };
        let _ = writeln!(
            out,
            "  s{i} [peripheries={periph}, tooltip=\"{}\"];",
            model.describe_state(s).replace('"', "'")
        );
    }
    for &i in &ts.initial {
        let _ = writeln!(out, "  init{i} [shape=point, style=invis];\n  init{i} -> s{i};");
    }
    for t in &ts.transitions {
        let ev = &model.events[t.event];
        let style = if ev.controllable { "solid" } else { "dashed" };
        let _ = writeln!(
            out,
            "  s{} -> s{} [label=\"{}\", style={style}];",
            t.source, t.target, ev.name
        );
    }
    out.push_str("}\n");
    out
}
