//! Control flow graph over statement nodes plus synthetic ENTRY and EXIT.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lang::{Ast, Stmt, StmtId, StmtKind};

/// Branch label on the out-edges of a predicate node.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Branch {
    #[serde(rename = "T")]
    True,
    #[serde(rename = "F")]
    False,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::True => f.write_str("T"),
            Branch::False => f.write_str("F"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CfgNode {
    Entry,
    Stmt(StmtId),
    Exit,
}

impl fmt::Display for CfgNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CfgNode::Entry => f.write_str("ENTRY"),
            CfgNode::Stmt(id) => write!(f, "{id}"),
            CfgNode::Exit => f.write_str("EXIT"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg {
    stmt_count: u32,
    edges: BTreeSet<(CfgNode, CfgNode, Option<Branch>)>,
}

impl Cfg {
    pub fn stmt_count(&self) -> u32 {
        self.stmt_count
    }

    /// ENTRY, every statement node in id order, then EXIT.
    pub fn nodes(&self) -> Vec<CfgNode> {
        let mut out = vec![CfgNode::Entry];
        out.extend((1..=self.stmt_count).map(|i| CfgNode::Stmt(StmtId(i))));
        out.push(CfgNode::Exit);
        out
    }

    pub fn edges(&self) -> impl Iterator<Item = &(CfgNode, CfgNode, Option<Branch>)> {
        self.edges.iter()
    }

    pub fn successors(&self, node: CfgNode) -> Vec<(CfgNode, Option<Branch>)> {
        self.edges
            .iter()
            .filter(|(src, _, _)| *src == node)
            .map(|(_, dst, label)| (*dst, *label))
            .collect()
    }

    pub fn predecessors(&self, node: CfgNode) -> Vec<(CfgNode, Option<Branch>)> {
        self.edges
            .iter()
            .filter(|(_, dst, _)| *dst == node)
            .map(|(src, _, label)| (*src, *label))
            .collect()
    }

    pub fn is_predicate(&self, node: CfgNode) -> bool {
        self.successors(node).iter().any(|(_, l)| l.is_some())
    }

    /// Target of the given branch out-edge of a predicate node.
    pub fn branch_target(&self, node: CfgNode, branch: Branch) -> Option<CfgNode> {
        self.successors(node)
            .into_iter()
            .find(|(_, l)| *l == Some(branch))
            .map(|(dst, _)| dst)
    }

    /// Checks the structural invariants; used by tests.
    pub fn validate(&self) -> Result<(), String> {
        if !self.predecessors(CfgNode::Entry).is_empty() {
            return Err("ENTRY has predecessors".into());
        }
        if !self.successors(CfgNode::Exit).is_empty() {
            return Err("EXIT has successors".into());
        }
        for node in self.nodes() {
            let succs = self.successors(node);
            let labeled: Vec<_> = succs.iter().filter(|(_, l)| l.is_some()).collect();
            if !labeled.is_empty() {
                if succs.len() != 2 || labeled.len() != 2 {
                    return Err(format!("predicate {node} does not have exactly T and F edges"));
                }
                let labels: BTreeSet<_> = labeled.iter().map(|(_, l)| *l).collect();
                if labels.len() != 2 {
                    return Err(format!("predicate {node} has duplicate branch labels"));
                }
            }
            if node != CfgNode::Exit && succs.is_empty() {
                return Err(format!("{node} has no successors"));
            }
        }
        // Reachability from ENTRY and co-reachability of EXIT.
        let reach = self.reachable_from(CfgNode::Entry);
        if reach.len() != self.nodes().len() {
            return Err("not all nodes reachable from ENTRY".into());
        }
        for node in self.nodes() {
            if node != CfgNode::Exit && !self.reachable_from(node).contains(&CfgNode::Exit) {
                return Err(format!("EXIT not reachable from {node}"));
            }
        }
        Ok(())
    }

    fn reachable_from(&self, start: CfgNode) -> BTreeSet<CfgNode> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            if seen.insert(n) {
                for (s, _) in self.successors(n) {
                    stack.push(s);
                }
            }
        }
        seen
    }
}

/// Builds the CFG of a program. While predicates get a back-edge from each
/// exit of the loop body; all predicates get exactly one T and one F edge.
pub fn build_cfg(ast: &Ast) -> Cfg {
    let mut edges = BTreeSet::new();
    let dangling = wire_block(
        &ast.body,
        vec![(CfgNode::Entry, None)],
        &mut edges,
    );
    for (src, label) in dangling {
        edges.insert((src, CfgNode::Exit, label));
    }
    Cfg {
        stmt_count: ast.stmt_count(),
        edges,
    }
}

type Dangling = Vec<(CfgNode, Option<Branch>)>;

fn wire_block(
    stmts: &[Stmt],
    mut incoming: Dangling,
    edges: &mut BTreeSet<(CfgNode, CfgNode, Option<Branch>)>,
) -> Dangling {
    for stmt in stmts {
        let node = CfgNode::Stmt(stmt.id);
        for (src, label) in incoming.drain(..) {
            edges.insert((src, node, label));
        }
        incoming = match &stmt.kind {
            StmtKind::Assign { .. } | StmtKind::Print { .. } => vec![(node, None)],
            StmtKind::If {
                then_body,
                else_body,
                ..
            } => {
                let mut outs =
                    wire_block(then_body, vec![(node, Some(Branch::True))], edges);
                outs.extend(wire_block(
                    else_body,
                    vec![(node, Some(Branch::False))],
                    edges,
                ));
                outs
            }
            StmtKind::While { body, .. } => {
                let body_outs = wire_block(body, vec![(node, Some(Branch::True))], edges);
                for (src, label) in body_outs {
                    edges.insert((src, node, label));
                }
                vec![(node, Some(Branch::False))]
            }
        };
    }
    incoming
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, SourceProgram};

    fn cfg_of(text: &str) -> Cfg {
        let ast = parse(&SourceProgram::new("t", text)).unwrap();
        let cfg = build_cfg(&ast);
        cfg.validate().unwrap();
        cfg
    }

    #[test]
    fn straight_line_is_a_chain() {
        let cfg = cfg_of("a = 1; b = 2; c = 3;");
        let expected: BTreeSet<_> = [
            (CfgNode::Entry, CfgNode::Stmt(StmtId(1)), None),
            (CfgNode::Stmt(StmtId(1)), CfgNode::Stmt(StmtId(2)), None),
            (CfgNode::Stmt(StmtId(2)), CfgNode::Stmt(StmtId(3)), None),
            (CfgNode::Stmt(StmtId(3)), CfgNode::Exit, None),
        ]
        .into_iter()
        .collect();
        assert_eq!(cfg.edges, expected);
    }

    #[test]
    fn while_predicate_has_true_into_body_and_false_past_it() {
        // Loop predicate is statement 2; body is 3..=4, successor is 5.
        let cfg = cfg_of("input n; i = n; while (i > 0) { print(i); i = i - 1; } print(0);");
        let pred = CfgNode::Stmt(StmtId(2));
        assert!(cfg.is_predicate(pred));
        assert_eq!(cfg.branch_target(pred, Branch::True), Some(CfgNode::Stmt(StmtId(3))));
        assert_eq!(cfg.branch_target(pred, Branch::False), Some(CfgNode::Stmt(StmtId(5))));
        // Back edge from the last body statement.
        assert!(cfg
            .edges
            .contains(&(CfgNode::Stmt(StmtId(4)), pred, None)));
    }

    #[test]
    fn if_else_branches_join_at_successor() {
        let cfg = cfg_of("input c; if (c > 0) { x = 1; } else { x = 2; } print(x);");
        let pred = CfgNode::Stmt(StmtId(1));
        assert_eq!(cfg.branch_target(pred, Branch::True), Some(CfgNode::Stmt(StmtId(2))));
        assert_eq!(cfg.branch_target(pred, Branch::False), Some(CfgNode::Stmt(StmtId(3))));
        let join = CfgNode::Stmt(StmtId(4));
        assert!(cfg.edges.contains(&(CfgNode::Stmt(StmtId(2)), join, None)));
        assert!(cfg.edges.contains(&(CfgNode::Stmt(StmtId(3)), join, None)));
    }

    #[test]
    fn empty_program_is_entry_to_exit() {
        let cfg = cfg_of("input n;");
        let expected: BTreeSet<_> = [(CfgNode::Entry, CfgNode::Exit, None)].into_iter().collect();
        assert_eq!(cfg.edges, expected);
    }

    #[test]
    fn empty_loop_body_loops_on_the_predicate() {
        let cfg = cfg_of("input n; while (n > 100) { } print(n);");
        let pred = CfgNode::Stmt(StmtId(1));
        assert_eq!(cfg.branch_target(pred, Branch::True), Some(pred));
    }
}
