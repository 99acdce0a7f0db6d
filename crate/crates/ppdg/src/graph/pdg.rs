//! Program dependence graph: control dependence edges plus variable-labeled
//! data dependence edges over ENTRY and the statement nodes. Loops make the
//! PDG cyclic; cycles are only removed later by the model transformation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::cfg::{Branch, Cfg};
use super::control::{ControlDep, PdgSource};
use super::reaching::DefUse;
use crate::lang::Ast;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdg {
    stmt_count: u32,
    control_edges: BTreeSet<ControlDep>,
    data_edges: BTreeSet<DefUse>,
}

impl Pdg {
    pub fn stmt_count(&self) -> u32 {
        self.stmt_count
    }

    pub fn control_edges(&self) -> impl Iterator<Item = &ControlDep> {
        self.control_edges.iter()
    }

    pub fn data_edges(&self) -> impl Iterator<Item = &DefUse> {
        self.data_edges.iter()
    }

    pub fn to_json(&self) -> String {
        let doc = PdgDoc {
            nodes: std::iter::once(0)
                .chain((1..=self.stmt_count).map(|i| i))
                .collect(),
            control_edges: self
                .control_edges
                .iter()
                .map(|(src, dst, label)| PdgControlEdge {
                    src: match src {
                        PdgSource::Entry => 0,
                        PdgSource::Stmt(id) => id.0,
                    },
                    dst: dst.0,
                    label: *label,
                })
                .collect(),
            data_edges: self
                .data_edges
                .iter()
                .map(|(src, dst, var)| PdgDataEdge {
                    src: src.0,
                    dst: dst.0,
                    var: var.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("pdg serialization")
    }
}

/// JSON form: node 0 is ENTRY, nodes 1..=N are statements.
#[derive(Debug, Serialize, Deserialize)]
struct PdgDoc {
    nodes: Vec<u32>,
    #[serde(rename = "controlEdges")]
    control_edges: Vec<PdgControlEdge>,
    #[serde(rename = "dataEdges")]
    data_edges: Vec<PdgDataEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PdgControlEdge {
    src: u32,
    dst: u32,
    label: Branch,
}

#[derive(Debug, Serialize, Deserialize)]
struct PdgDataEdge {
    src: u32,
    dst: u32,
    var: String,
}

/// Assembles the PDG from the dependence analyses. The edge sets are taken
/// as computed; this only bundles them with the node universe.
pub fn build_pdg(
    ast: &Ast,
    cfg: &Cfg,
    control: BTreeSet<ControlDep>,
    data: BTreeSet<DefUse>,
) -> Pdg {
    debug_assert_eq!(ast.stmt_count(), cfg.stmt_count());
    Pdg {
        stmt_count: cfg.stmt_count(),
        control_edges: control,
        data_edges: data,
    }
}

/// Convenience: CFG, postdominators, dependences, and PDG in one call.
pub fn pdg_for(ast: &Ast) -> Pdg {
    let cfg = super::build_cfg(ast);
    let pdt = super::compute_postdominators(&cfg);
    let control = super::control_dependences(&cfg, &pdt);
    let data = super::reaching_definitions(&cfg, ast);
    build_pdg(ast, &cfg, control, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, SourceProgram, StmtId};

    fn s(i: u32) -> StmtId {
        StmtId(i)
    }

    #[test]
    fn single_print_has_entry_edge_and_no_data() {
        let ast = parse(&SourceProgram::new("t", "print(7);")).unwrap();
        let pdg = pdg_for(&ast);
        let control: Vec<_> = pdg.control_edges().cloned().collect();
        assert_eq!(control, vec![(PdgSource::Entry, s(1), Branch::True)]);
        assert_eq!(pdg.data_edges().count(), 0);
    }

    #[test]
    fn loop_program_has_control_data_cycle() {
        // n = 5 (1); while (n > 0) (2) { n = n - 1 (3) }
        let ast = parse(&SourceProgram::new("t", "n = 5; while (n > 0) { n = n - 1; }")).unwrap();
        let pdg = pdg_for(&ast);
        assert!(pdg
            .control_edges
            .contains(&(PdgSource::Stmt(s(2)), s(3), Branch::True)));
        assert!(pdg.data_edges.contains(&(s(3), s(2), "n".to_string())));
    }

    #[test]
    fn json_export_names_the_documented_fields() {
        let ast = parse(&SourceProgram::new("t", "x = 1; print(x);")).unwrap();
        let json = pdg_for(&ast).to_json();
        let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(doc.get("nodes").is_some());
        assert!(doc.get("controlEdges").is_some());
        assert!(doc.get("dataEdges").is_some());
    }
}
