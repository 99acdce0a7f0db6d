//! PDG transformation: break every cyclic dependence so the model is a DAG.
//!
//! In a structured MiniLang PDG the only edges that can point backwards in
//! statement order are a loop predicate's control self-dependence and
//! loop-carried data dependences. Each backward data edge (s, t, v) is
//! rerouted through a fresh aux node that shadows the defining statement s:
//! the edge is removed and aux -> t is added, so t is conditioned on the
//! state s had on the previous iteration. Predicate self-dependences carry
//! no information beyond "the loop re-entered", which the variable-carrying
//! aux parent already encodes, so they are simply dropped. Aux nodes are
//! numbered after the statements in the order the broken edges sort.

use std::collections::{BTreeMap, BTreeSet};

use super::node::Node;
use crate::graph::{Branch, Pdg, PdgSource};
use crate::lang::StmtId;

/// Provenance of an edge in the transformed graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    Control(Branch),
    Data(String),
    Aux(String),
}

impl EdgeKind {
    pub fn label(&self) -> String {
        match self {
            EdgeKind::Control(b) => b.to_string(),
            EdgeKind::Data(v) | EdgeKind::Aux(v) => v.clone(),
        }
    }
}

/// The statement and variable an aux node stands in for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxSource {
    pub source: StmtId,
    pub var: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedPdg {
    stmt_count: u32,
    edges: BTreeSet<(Node, Node, EdgeKind)>,
    aux: BTreeMap<u32, AuxSource>,
}

impl TransformedPdg {
    pub(crate) fn from_parts(
        stmt_count: u32,
        edges: BTreeSet<(Node, Node, EdgeKind)>,
        aux: BTreeMap<u32, AuxSource>,
    ) -> Self {
        TransformedPdg {
            stmt_count,
            edges,
            aux,
        }
    }

    pub fn stmt_count(&self) -> u32 {
        self.stmt_count
    }

    /// ENTRY, statements, then aux nodes, in numbering order.
    pub fn nodes(&self) -> Vec<Node> {
        let mut out = vec![Node::Entry];
        out.extend((1..=self.stmt_count).map(Node::stmt));
        out.extend(self.aux.keys().map(|&k| Node::Aux(k)));
        out
    }

    pub fn edges(&self) -> impl Iterator<Item = &(Node, Node, EdgeKind)> {
        self.edges.iter()
    }

    pub fn aux_nodes(&self) -> impl Iterator<Item = (Node, &AuxSource)> {
        self.aux.iter().map(|(&k, src)| (Node::Aux(k), src))
    }

    pub fn aux_source(&self, node: Node) -> Option<&AuxSource> {
        match node {
            Node::Aux(k) => self.aux.get(&k),
            _ => None,
        }
    }

    /// Parents of a node (distinct sources of incoming edges), sorted.
    pub fn parents(&self, node: Node) -> Vec<Node> {
        let set: BTreeSet<Node> = self
            .edges
            .iter()
            .filter(|(_, dst, _)| *dst == node)
            .map(|(src, _, _)| *src)
            .collect();
        set.into_iter().collect()
    }

    /// Aux in-edges of a node as (aux node, shadowed source), sorted.
    pub fn aux_parents(&self, node: Node) -> Vec<(Node, &AuxSource)> {
        self.edges
            .iter()
            .filter(|(src, dst, kind)| {
                *dst == node && matches!(kind, EdgeKind::Aux(_)) && matches!(src, Node::Aux(_))
            })
            .map(|(src, _, _)| (*src, self.aux_source(*src).expect("aux edge from aux node")))
            .collect()
    }

    pub fn node_number(&self, node: Node) -> u32 {
        node.number(self.stmt_count)
    }

    pub fn node_from_number(&self, n: u32) -> Node {
        Node::from_number(n, self.stmt_count)
    }

    pub fn contains(&self, node: Node) -> bool {
        match node {
            Node::Entry => true,
            Node::Stmt(id) => id.0 >= 1 && id.0 <= self.stmt_count,
            Node::Aux(k) => self.aux.contains_key(&k),
        }
    }

    /// Kahn's toposort; returns false if any cycle survived.
    pub fn is_acyclic(&self) -> bool {
        let nodes = self.nodes();
        let mut indegree: BTreeMap<Node, usize> = nodes.iter().map(|&n| (n, 0)).collect();
        for (_, dst, _) in &self.edges {
            *indegree.get_mut(dst).expect("edge target in node set") += 1;
        }
        let mut ready: Vec<Node> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&n, _)| n)
            .collect();
        let mut seen = 0;
        while let Some(n) = ready.pop() {
            seen += 1;
            for (src, dst, _) in &self.edges {
                if *src == n {
                    let d = indegree.get_mut(dst).unwrap();
                    *d -= 1;
                    if *d == 0 {
                        ready.push(*dst);
                    }
                }
            }
        }
        seen == nodes.len()
    }
}

/// Node order used to classify an edge as backward: ENTRY precedes all
/// statements, statements follow id order.
fn position(src: &PdgSource) -> u32 {
    match src {
        PdgSource::Entry => 0,
        PdgSource::Stmt(id) => id.0,
    }
}

pub fn transform_pdg(pdg: &Pdg) -> TransformedPdg {
    let mut edges = BTreeSet::new();

    for (src, dst, branch) in pdg.control_edges() {
        let backward = dst.0 <= position(src);
        if backward {
            // Structured control dependence only points backward at a loop
            // predicate's self-dependence; drop it.
            debug_assert_eq!(*src, PdgSource::Stmt(*dst));
            continue;
        }
        let src_node = match src {
            PdgSource::Entry => Node::Entry,
            PdgSource::Stmt(id) => Node::Stmt(*id),
        };
        edges.insert((src_node, Node::Stmt(*dst), EdgeKind::Control(*branch)));
    }

    let mut aux = BTreeMap::new();
    let mut next_aux = 1u32;
    for (def, use_, var) in pdg.data_edges() {
        if use_.0 <= def.0 {
            let aux_node = Node::Aux(next_aux);
            aux.insert(
                next_aux,
                AuxSource {
                    source: *def,
                    var: var.clone(),
                },
            );
            next_aux += 1;
            edges.insert((aux_node, Node::Stmt(*use_), EdgeKind::Aux(var.clone())));
        } else {
            edges.insert((Node::Stmt(*def), Node::Stmt(*use_), EdgeKind::Data(var.clone())));
        }
    }

    TransformedPdg {
        stmt_count: pdg.stmt_count(),
        edges,
        aux,
    }
}
