//! Reaching definitions via the usual iterative dataflow equations, then
//! def-use pairs: a definition reaches a use when some definition-clear path
//! connects them in the CFG.

use std::collections::{BTreeMap, BTreeSet};

use super::cfg::{Cfg, CfgNode};
use crate::lang::{Ast, StmtId};

/// (defining statement, using statement, variable)
pub type DefUse = (StmtId, StmtId, String);

pub fn reaching_definitions(cfg: &Cfg, ast: &Ast) -> BTreeSet<DefUse> {
    let stmts = ast.statements();
    let defs: BTreeMap<StmtId, String> = stmts
        .iter()
        .filter_map(|s| s.defined_var().map(|v| (s.id, v.to_string())))
        .collect();
    let uses: BTreeMap<StmtId, Vec<String>> =
        stmts.iter().map(|s| (s.id, s.used_vars())).collect();

    // IN[n] = union of OUT[p]; OUT[n] = gen(n) ∪ (IN[n] − kill(n)).
    let nodes = cfg.nodes();
    let mut in_sets: BTreeMap<CfgNode, BTreeSet<StmtId>> =
        nodes.iter().map(|&n| (n, BTreeSet::new())).collect();
    let mut out_sets = in_sets.clone();

    let mut changed = true;
    while changed {
        changed = false;
        for &n in &nodes {
            let mut incoming = BTreeSet::new();
            for (p, _) in cfg.predecessors(n) {
                incoming.extend(out_sets[&p].iter().copied());
            }
            let mut outgoing = incoming.clone();
            if let CfgNode::Stmt(id) = n {
                if let Some(var) = defs.get(&id) {
                    outgoing.retain(|d| defs.get(d) != Some(var));
                    outgoing.insert(id);
                }
            }
            if incoming != in_sets[&n] || outgoing != out_sets[&n] {
                in_sets.insert(n, incoming);
                out_sets.insert(n, outgoing);
                changed = true;
            }
        }
    }

    let mut pairs = BTreeSet::new();
    for &n in &nodes {
        let use_id = match n {
            CfgNode::Stmt(id) => id,
            _ => continue,
        };
        for var in &uses[&use_id] {
            for def_id in &in_sets[&n] {
                if defs.get(def_id) == Some(var) {
                    pairs.insert((*def_id, use_id, var.clone()));
                }
            }
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_cfg;
    use crate::lang::{parse, SourceProgram};

    fn pairs_of(text: &str) -> BTreeSet<DefUse> {
        let ast = parse(&SourceProgram::new("t", text)).unwrap();
        let cfg = build_cfg(&ast);
        reaching_definitions(&cfg, &ast)
    }

    fn s(i: u32) -> StmtId {
        StmtId(i)
    }

    #[test]
    fn simple_def_reaches_use() {
        let pairs = pairs_of("x = 1; print(x);");
        let expected: BTreeSet<DefUse> = [(s(1), s(2), "x".to_string())].into_iter().collect();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn redefinition_kills_the_earlier_def() {
        let pairs = pairs_of("x = 1; x = 2; print(x);");
        let expected: BTreeSet<DefUse> = [(s(2), s(3), "x".to_string())].into_iter().collect();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn loop_carried_defs_reach_the_predicate() {
        // n = 5 (1); while (n > 0) (2) { n = n - 1 (3) }
        let pairs = pairs_of("n = 5; while (n > 0) { n = n - 1; }");
        let reaching_pred: BTreeSet<StmtId> = pairs
            .iter()
            .filter(|(_, use_, v)| *use_ == s(2) && v == "n")
            .map(|(d, _, _)| *d)
            .collect();
        assert_eq!(reaching_pred, [s(1), s(3)].into_iter().collect());
        // The update reads both the initial and its own previous value.
        assert!(pairs.contains(&(s(1), s(3), "n".to_string())));
        assert!(pairs.contains(&(s(3), s(3), "n".to_string())));
    }

    #[test]
    fn branch_definitions_both_reach_the_join() {
        let pairs = pairs_of("input c; if (c > 0) { x = 1; } else { x = 2; } print(x);");
        assert!(pairs.contains(&(s(2), s(4), "x".to_string())));
        assert!(pairs.contains(&(s(3), s(4), "x".to_string())));
    }

    #[test]
    fn input_variables_have_no_defining_statement() {
        let pairs = pairs_of("input a; print(a);");
        assert!(pairs.is_empty());
    }
}
