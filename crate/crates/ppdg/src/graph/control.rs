//! Control dependence: statement `n` is control dependent on predicate `p`
//! with label `L` when every path from `p`'s `L`-successor to EXIT passes
//! through `n`, while the other branch can reach EXIT avoiding `n`. Realized
//! through the postdominator tree. Statements no predicate controls are made
//! control dependent on ENTRY so every node has a controlling parent.

use std::collections::BTreeSet;

use super::cfg::{Branch, Cfg, CfgNode};
use super::postdom::PostDomTree;
use crate::lang::StmtId;

/// Source of a dependence edge: ENTRY or a statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PdgSource {
    Entry,
    Stmt(StmtId),
}

impl std::fmt::Display for PdgSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PdgSource::Entry => f.write_str("ENTRY"),
            PdgSource::Stmt(id) => write!(f, "{id}"),
        }
    }
}

pub type ControlDep = (PdgSource, StmtId, Branch);

pub fn control_dependences(cfg: &Cfg, pdt: &PostDomTree) -> BTreeSet<ControlDep> {
    let mut deps = BTreeSet::new();

    for node in cfg.nodes() {
        let pred_id = match node {
            CfgNode::Stmt(id) if cfg.is_predicate(node) => id,
            _ => continue,
        };
        let true_target = cfg.branch_target(node, Branch::True).unwrap();
        let false_target = cfg.branch_target(node, Branch::False).unwrap();

        for candidate in cfg.nodes() {
            let cand_id = match candidate {
                CfgNode::Stmt(id) => id,
                _ => continue,
            };
            let on_true = pdt.postdominates(candidate, true_target);
            let on_false = pdt.postdominates(candidate, false_target);
            if on_true && !on_false {
                deps.insert((PdgSource::Stmt(pred_id), cand_id, Branch::True));
            } else if on_false && !on_true {
                deps.insert((PdgSource::Stmt(pred_id), cand_id, Branch::False));
            }
        }
    }

    let controlled: BTreeSet<StmtId> = deps.iter().map(|(_, dst, _)| *dst).collect();
    for i in 1..=cfg.stmt_count() {
        let id = StmtId(i);
        if !controlled.contains(&id) {
            deps.insert((PdgSource::Entry, id, Branch::True));
        }
    }
    deps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_cfg, compute_postdominators};
    use crate::lang::{parse, SourceProgram};

    fn deps_of(text: &str) -> BTreeSet<ControlDep> {
        let ast = parse(&SourceProgram::new("t", text)).unwrap();
        let cfg = build_cfg(&ast);
        let pdt = compute_postdominators(&cfg);
        control_dependences(&cfg, &pdt)
    }

    fn s(i: u32) -> StmtId {
        StmtId(i)
    }

    #[test]
    fn if_else_controls_both_branches() {
        let deps = deps_of("input c; if (c > 0) { x = 1; } else { x = 2; } print(x);");
        assert!(deps.contains(&(PdgSource::Stmt(s(1)), s(2), Branch::True)));
        assert!(deps.contains(&(PdgSource::Stmt(s(1)), s(3), Branch::False)));
        // The predicate itself and the join are top-level.
        assert!(deps.contains(&(PdgSource::Entry, s(1), Branch::True)));
        assert!(deps.contains(&(PdgSource::Entry, s(4), Branch::True)));
    }

    #[test]
    fn while_predicate_controls_its_body_and_itself() {
        let deps = deps_of("input n; while (n > 0) { n = n - 1; }");
        assert!(deps.contains(&(PdgSource::Stmt(s(1)), s(2), Branch::True)));
        assert!(deps.contains(&(PdgSource::Stmt(s(1)), s(1), Branch::True)));
        // Self-dependence replaces the ENTRY default for the predicate.
        assert!(!deps.contains(&(PdgSource::Entry, s(1), Branch::True)));
    }

    #[test]
    fn straight_line_statements_depend_on_entry() {
        let deps = deps_of("a = 1; print(a);");
        let expected: BTreeSet<ControlDep> = [
            (PdgSource::Entry, s(1), Branch::True),
            (PdgSource::Entry, s(2), Branch::True),
        ]
        .into_iter()
        .collect();
        assert_eq!(deps, expected);
    }

    #[test]
    fn nested_loop_predicate_depends_on_outer_and_itself() {
        let deps =
            deps_of("input n; i = 0; while (i < n) { j = 0; while (j < i) { j = j + 1; } i = i + 1; }");
        // Inner predicate (4) is controlled by the outer predicate (2) and itself.
        assert!(deps.contains(&(PdgSource::Stmt(s(2)), s(4), Branch::True)));
        assert!(deps.contains(&(PdgSource::Stmt(s(4)), s(4), Branch::True)));
    }
}
