//! Graphviz DOT rendering. Control edges are solid with T/F labels, data
//! edges dashed with the variable, aux reroutes dotted; aux nodes draw as
//! dashed diamonds. Output is byte-deterministic for a given graph.

use std::fmt::Write;

use super::cfg::{Cfg, CfgNode};
use super::control::PdgSource;
use super::pdg::Pdg;
use crate::lang::{stmt_text, Ast};
use crate::model::{EdgeKind, Node, TransformedPdg};

fn stmt_label(ast: &Ast, id: crate::lang::StmtId) -> String {
    match ast.stmt(id) {
        Some(stmt) => format!("{id}: {}", escape(&stmt_text(stmt))),
        None => id.to_string(),
    }
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Cfg {
    pub fn to_dot(&self, ast: &Ast) -> String {
        let mut out = String::from("digraph cfg {\n");
        out.push_str("  rankdir=TB;\n");
        out.push_str("  ENTRY [shape=oval];\n  EXIT [shape=oval];\n");
        for node in self.nodes() {
            if let CfgNode::Stmt(id) = node {
                writeln!(out, "  n{id} [shape=box, label=\"{}\"];", stmt_label(ast, id)).unwrap();
            }
        }
        for (src, dst, label) in self.edges() {
            let src = cfg_ref(*src);
            let dst = cfg_ref(*dst);
            match label {
                Some(branch) => writeln!(out, "  {src} -> {dst} [label=\"{branch}\"];").unwrap(),
                None => writeln!(out, "  {src} -> {dst};").unwrap(),
            }
        }
        out.push_str("}\n");
        out
    }
}

fn cfg_ref(node: CfgNode) -> String {
    match node {
        CfgNode::Entry => "ENTRY".to_string(),
        CfgNode::Exit => "EXIT".to_string(),
        CfgNode::Stmt(id) => format!("n{id}"),
    }
}

impl Pdg {
    pub fn to_dot(&self, ast: &Ast) -> String {
        let mut out = String::from("digraph pdg {\n");
        out.push_str("  ENTRY [shape=oval];\n");
        for i in 1..=self.stmt_count() {
            let id = crate::lang::StmtId(i);
            writeln!(out, "  n{id} [shape=box, label=\"{}\"];", stmt_label(ast, id)).unwrap();
        }
        for (src, dst, branch) in self.control_edges() {
            let src = match src {
                PdgSource::Entry => "ENTRY".to_string(),
                PdgSource::Stmt(id) => format!("n{id}"),
            };
            writeln!(out, "  {src} -> n{dst} [label=\"{branch}\"];").unwrap();
        }
        for (src, dst, var) in self.data_edges() {
            writeln!(out, "  n{src} -> n{dst} [style=dashed, label=\"{var}\"];").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

impl TransformedPdg {
    pub fn to_dot(&self, ast: &Ast) -> String {
        let mut out = String::from("digraph ppdg {\n");
        out.push_str("  ENTRY [shape=oval];\n");
        for node in self.nodes() {
            match node {
                Node::Entry => {}
                Node::Stmt(id) => {
                    writeln!(out, "  n{id} [shape=box, label=\"{}\"];", stmt_label(ast, id))
                        .unwrap();
                }
                Node::Aux(_) => {
                    let aux = self.aux_source(node).expect("aux node has a source");
                    writeln!(
                        out,
                        "  n{} [shape=diamond, style=dashed, label=\"{}: {} from {}\"];",
                        self.node_number(node),
                        self.node_number(node),
                        aux.var,
                        aux.source,
                    )
                    .unwrap();
                }
            }
        }
        for (src, dst, kind) in self.edges() {
            let src = node_ref(self, *src);
            let dst = node_ref(self, *dst);
            match kind {
                EdgeKind::Control(branch) => {
                    writeln!(out, "  {src} -> {dst} [label=\"{branch}\"];").unwrap();
                }
                EdgeKind::Data(var) => {
                    writeln!(out, "  {src} -> {dst} [style=dashed, label=\"{var}\"];").unwrap();
                }
                EdgeKind::Aux(var) => {
                    writeln!(out, "  {src} -> {dst} [style=dotted, label=\"{var}\"];").unwrap();
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn node_ref(tpdg: &TransformedPdg, node: Node) -> String {
    match node {
        Node::Entry => "ENTRY".to_string(),
        other => format!("n{}", tpdg.node_number(other)),
    }
}

#[cfg(test)]
mod tests {
    use crate::graph::{build_cfg, pdg_for};
    use crate::lang::{parse, SourceProgram};
    use crate::model::transform_pdg;

    #[test]
    fn empty_program_renders_entry_and_exit_only() {
        let ast = parse(&SourceProgram::new("t", "input n;")).unwrap();
        let dot = build_cfg(&ast).to_dot(&ast);
        assert!(dot.contains("ENTRY -> EXIT"));
        assert!(!dot.contains("shape=box"));
    }

    #[test]
    fn output_is_byte_identical_across_calls() {
        let ast = parse(&SourceProgram::new("t", "n = 3; while (n > 0) { n = n - 1; }")).unwrap();
        let pdg = pdg_for(&ast);
        assert_eq!(pdg.to_dot(&ast), pdg.to_dot(&ast));
        let tpdg = transform_pdg(&pdg);
        assert_eq!(tpdg.to_dot(&ast), tpdg.to_dot(&ast));
    }

    #[test]
    fn aux_nodes_are_visually_distinct() {
        let ast = parse(&SourceProgram::new("t", "n = 3; while (n > 0) { n = n - 1; }")).unwrap();
        let dot = transform_pdg(&pdg_for(&ast)).to_dot(&ast);
        assert!(dot.contains("shape=diamond"));
        assert!(dot.contains("style=dotted"));
    }
}
