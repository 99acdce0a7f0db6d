//! MiniLang: a deterministic integer-only imperative language.
//!
//! Programs declare input variables (bound by test cases), then run a body of
//! assignments, `if`/`else`, `while`, and `print` statements. Comparisons and
//! logical operators evaluate to 0 or 1; conditions treat any nonzero value
//! as true. The grammar is documented in `docs/minilang.md`.

mod ast;
mod defassign;
mod lexer;
mod parser;
pub(crate) mod printer;

pub use ast::{
    list_statements, Ast, BinOp, Expr, Pos, SourceProgram, Stmt, StmtClass, StmtId, StmtInfo,
    StmtKind, UnOp,
};
pub use parser::parse;
pub use printer::{expr_text, stmt_text, unparse};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ParseError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: variable `{var}` may be read before assignment (statement {stmt})")]
    UseBeforeAssign { var: String, stmt: StmtId, pos: Pos },
    #[error("{pos}: duplicate input declaration `{var}`")]
    DuplicateInput { var: String, pos: Pos },
}
