use std::fmt::Write;

use crate::diagram::{Diagram, Endpoint, GeneratorKind, Role};

/// Fill colour, shape and font colour for a node kind.
fn style(kind: &GeneratorKind) -> (&'static str, &'static str, &'static str) {
    use GeneratorKind::*;
    match kind {
        ZBox { .. } | LabeledBox { .. } => ("#99dd99", "box", "black"),
        GreenSpider { .. } => ("#99dd99", "circle", "black"),
        PinkSpider { .. } | Multiplier { .. } | Dualiser => ("#ee99aa", "circle", "black"),
        WNode | WGeneral { .. } | Triangle | TriangleInverse | VBox => {
            ("black", "triangle", "white")
        }
        Hadamard | HadamardDagger => ("#ffee66", "square", "black"),
        Scalar { .. } => ("white", "plaintext", "black"),
    }
}

fn vertex(e: Endpoint) -> String {
    match e {
        Endpoint::Boundary {
            role: Role::In,
            pos,
        } => format!("in{pos}"),
        Endpoint::Boundary {
            role: Role::Out,
            pos,
        } => format!("out{pos}"),
        Endpoint::Port { node, .. } => node.to_string(),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz text with inputs on the left and outputs on the right. Nodes
/// keep their id order, so a normal form lists its Z boxes in sorted order.
pub fn render_dot(diagram: &Diagram) -> String {
    let mut out = String::from("graph zxw {\n");
    let has_body = !diagram.nodes().is_empty() || diagram.inputs() + diagram.outputs() > 0;
    if has_body {
        out.push_str("  rankdir=LR;\n  node [style=filled];\n");
    }
    let rank = |out: &mut String, names: Vec<String>| {
        if !names.is_empty() {
            let _ = writeln!(out, "  {{ rank=source; {} }}", names.join("; "));
        }
    };
    let inputs: Vec<String> = (0..diagram.inputs()).map(|k| format!("in{k}")).collect();
    for v in &inputs {
        let _ = writeln!(out, "  {v} [shape=point];");
    }
    rank(&mut out, inputs);
    for (id, node) in diagram.nodes() {
        let (fill, shape, font) = style(&node.kind);
        let _ = writeln!(
            out,
            "  {id} [label=\"{}\", shape={shape}, fillcolor=\"{fill}\", fontcolor=\"{font}\"];",
            escape(&node.kind.to_string())
        );
    }
    let outputs: Vec<String> = (0..diagram.outputs()).map(|k| format!("out{k}")).collect();
    for v in &outputs {
        let _ = writeln!(out, "  {v} [shape=point];");
    }
    if !outputs.is_empty() {
        let _ = writeln!(out, "  {{ rank=sink; {} }}", outputs.join("; "));
    }
    for w in diagram.wires() {
        let (a, b) = w.ends();
        let _ = writeln!(out, "  {} -- {};", vertex(a), vertex(b));
    }
    out.push_str("}\n");
    out
}
