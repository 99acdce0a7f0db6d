//! Node identity in the dependence model: ENTRY, statements, and the aux
//! nodes introduced by cycle breaking. Numbering continues past the
//! statements, so for a program with N statements ENTRY is 0, statements are
//! 1..=N, and aux nodes are N+1, N+2, ...

use std::fmt;

use crate::lang::StmtId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Entry,
    Stmt(StmtId),
    Aux(u32),
}

impl Node {
    pub fn stmt(id: u32) -> Node {
        Node::Stmt(StmtId(id))
    }

    pub fn as_stmt(&self) -> Option<StmtId> {
        match self {
            Node::Stmt(id) => Some(*id),
            _ => None,
        }
    }

    /// Numeric id given the statement count of the program.
    pub fn number(&self, stmt_count: u32) -> u32 {
        match self {
            Node::Entry => 0,
            Node::Stmt(id) => id.0,
            Node::Aux(k) => stmt_count + k,
        }
    }

    /// Inverse of [`Node::number`].
    pub fn from_number(n: u32, stmt_count: u32) -> Node {
        if n == 0 {
            Node::Entry
        } else if n <= stmt_count {
            Node::Stmt(StmtId(n))
        } else {
            Node::Aux(n - stmt_count)
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Entry => f.write_str("ENTRY"),
            Node::Stmt(id) => write!(f, "{id}"),
            Node::Aux(k) => write!(f, "aux{k}"),
        }
    }
}
