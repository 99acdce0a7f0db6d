//! Postdominator computation by iterating the set equations to a fixpoint.
//! MiniLang CFGs are small, so the quadratic set-based formulation is both
//! the simplest and the easiest to cross-check against path enumeration.

use std::collections::{BTreeMap, BTreeSet};

use super::cfg::{Cfg, CfgNode};

/// Immediate postdominators; a tree rooted at EXIT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostDomTree {
    ipdom: BTreeMap<CfgNode, CfgNode>,
}

impl PostDomTree {
    pub fn ipdom(&self, node: CfgNode) -> Option<CfgNode> {
        self.ipdom.get(&node).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CfgNode, &CfgNode)> {
        self.ipdom.iter()
    }

    /// Reflexive postdominance: walks the ipdom chain from `node`.
    pub fn postdominates(&self, candidate: CfgNode, node: CfgNode) -> bool {
        let mut current = node;
        loop {
            if current == candidate {
                return true;
            }
            match self.ipdom(current) {
                Some(next) => current = next,
                None => return false,
            }
        }
    }
}

pub fn compute_postdominators(cfg: &Cfg) -> PostDomTree {
    let nodes = cfg.nodes();
    let all: BTreeSet<CfgNode> = nodes.iter().copied().collect();

    let mut pdom: BTreeMap<CfgNode, BTreeSet<CfgNode>> = nodes
        .iter()
        .map(|&n| {
            if n == CfgNode::Exit {
                (n, [n].into_iter().collect())
            } else {
                (n, all.clone())
            }
        })
        .collect();

    let mut changed = true;
    while changed {
        changed = false;
        for &n in nodes.iter().rev() {
            if n == CfgNode::Exit {
                continue;
            }
            let mut next: Option<BTreeSet<CfgNode>> = None;
            for (succ, _) in cfg.successors(n) {
                let s = &pdom[&succ];
                next = Some(match next {
                    None => s.clone(),
                    Some(acc) => acc.intersection(s).copied().collect(),
                });
            }
            let mut next = next.unwrap_or_default();
            next.insert(n);
            if next != pdom[&n] {
                pdom.insert(n, next);
                changed = true;
            }
        }
    }

    // The immediate postdominator of n is the strict postdominator whose own
    // set contains all other strict postdominators of n.
    let mut ipdom = BTreeMap::new();
    for &n in &nodes {
        if n == CfgNode::Exit {
            continue;
        }
        let strict: BTreeSet<CfgNode> = pdom[&n].iter().copied().filter(|&m| m != n).collect();
        let immediate = strict
            .iter()
            .copied()
            .find(|&c| strict.is_subset(&pdom[&c]))
            .expect("every non-exit node has a postdominator");
        ipdom.insert(n, immediate);
    }
    PostDomTree { ipdom }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_cfg;
    use crate::lang::{parse, SourceProgram, StmtId};

    fn pdt_of(text: &str) -> (Cfg, PostDomTree) {
        let ast = parse(&SourceProgram::new("t", text)).unwrap();
        let cfg = build_cfg(&ast);
        let pdt = compute_postdominators(&cfg);
        (cfg, pdt)
    }

    fn stmt(i: u32) -> CfgNode {
        CfgNode::Stmt(StmtId(i))
    }

    #[test]
    fn chain_ipdom_is_the_successor() {
        let (_, pdt) = pdt_of("a = 1; b = 2; c = 3;");
        assert_eq!(pdt.ipdom(CfgNode::Entry), Some(stmt(1)));
        assert_eq!(pdt.ipdom(stmt(1)), Some(stmt(2)));
        assert_eq!(pdt.ipdom(stmt(2)), Some(stmt(3)));
        assert_eq!(pdt.ipdom(stmt(3)), Some(CfgNode::Exit));
    }

    #[test]
    fn diamond_ipdom_of_predicate_is_the_join() {
        let (_, pdt) = pdt_of("input c; if (c > 0) { x = 1; } else { x = 2; } print(x);");
        assert_eq!(pdt.ipdom(stmt(1)), Some(stmt(4)));
        assert_eq!(pdt.ipdom(stmt(2)), Some(stmt(4)));
        assert_eq!(pdt.ipdom(stmt(3)), Some(stmt(4)));
    }

    #[test]
    fn loop_predicate_ipdom_is_the_exit_successor() {
        let (_, pdt) = pdt_of("input n; i = n; while (i > 0) { i = i - 1; } print(i);");
        assert_eq!(pdt.ipdom(stmt(2)), Some(stmt(4)));
        // Body statement is postdominated by the predicate.
        assert_eq!(pdt.ipdom(stmt(3)), Some(stmt(2)));
    }

    #[test]
    fn postdominance_is_reflexive_and_follows_the_chain() {
        let (_, pdt) = pdt_of("a = 1; b = 2;");
        assert!(pdt.postdominates(stmt(1), stmt(1)));
        assert!(pdt.postdominates(stmt(2), stmt(1)));
        assert!(pdt.postdominates(CfgNode::Exit, CfgNode::Entry));
        assert!(!pdt.postdominates(stmt(1), stmt(2)));
    }
}
