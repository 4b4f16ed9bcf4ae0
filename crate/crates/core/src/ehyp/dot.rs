use std::fmt::Write;

use super::{EHypergraph, EdgeId, EdgeKind, Elem};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering. Boxes become clusters: e-boxes dashed with one nested
/// cluster per block, lambda boxes solid and rounded.
pub fn to_dot(g: &EHypergraph) -> String {
    let mut out = String::from("digraph G {\n  rankdir=LR;\n  node [fontsize=10];\n");
    emit_level(g, None, &mut out, 1);
    // incidence, drawn after all nodes are placed in their clusters
    for (e, edge) in &g.edges {
        for (i, v) in edge.sources.iter().enumerate() {
            let _ = writeln!(out, "  {v} -> {e} [taillabel=\"{i}\"];");
        }
        for (i, v) in edge.targets.iter().enumerate() {
            let _ = writeln!(out, "  {e} -> {v} [headlabel=\"{i}\"];");
        }
    }
    out.push_str("}\n");
    out
}

fn emit_node(g: &EHypergraph, x: Elem, out: &mut String, ind: &str) {
    match x {
        Elem::V(v) => {
            let _ = writeln!(
                out,
                "{ind}{v} [shape=point, xlabel=\"{}\"];",
                escape(&g.vertices[&v].to_string())
            );
        }
        Elem::E(e) => {
            let edge = g.edge(e);
            let (shape, label) = match &edge.kind {
                EdgeKind::Plain(op) => ("box", op.name.clone()),
                EdgeKind::EBox => ("diamond", "+".to_string()),
                EdgeKind::LambdaBox => ("Mrecord", "lambda".to_string()),
            };
            let _ = writeln!(
                out,
                "{ind}{e} [shape={shape}, label=\"{}\"];",
                escape(&label)
            );
        }
    }
}

fn emit_level(g: &EHypergraph, parent: Option<EdgeId>, out: &mut String, depth: usize) {
    let ind = "  ".repeat(depth);
    let members: Vec<Elem> = match parent {
        None => g.elems().filter(|x| g.is_top_level(*x)).collect(),
        Some(p) => g.children(p),
    };
    let blocks = parent
        .filter(|p| g.edge(*p).kind == EdgeKind::EBox)
        .map(|p| g.blocks(p));
    match blocks {
        Some(blocks) => {
            for (b, xs) in blocks {
                let _ = writeln!(out, "{ind}subgraph cluster_{}_b{b} {{", parent.unwrap());
                let _ = writeln!(out, "{ind}  label=\"block {b}\"; style=dotted;");
                for x in xs {
                    emit_member(g, x, out, depth + 1);
                }
                let _ = writeln!(out, "{ind}}}");
            }
        }
        None => {
            for x in members {
                emit_member(g, x, out, depth);
            }
        }
    }
}

fn emit_member(g: &EHypergraph, x: Elem, out: &mut String, depth: usize) {
    let ind = "  ".repeat(depth);
    emit_node(g, x, out, &ind);
    if let Elem::E(e) = x {
        let style = match g.edge(e).kind {
            EdgeKind::EBox => "dashed",
            EdgeKind::LambdaBox => "\"rounded,solid\"",
            EdgeKind::Plain(_) => return,
        };
        let _ = writeln!(out, "{ind}subgraph cluster_{e} {{");
        let _ = writeln!(out, "{ind}  label=\"{e}\"; style={style};");
        emit_level(g, Some(e), out, depth + 1);
        let _ = writeln!(out, "{ind}}}");
    }
}
