//! Definite-assignment check: every variable read must be an input or
//! assigned earlier on every control-flow path to the read.

use std::collections::BTreeSet;

use super::ast::{Ast, Expr, Stmt, StmtKind};
use super::ParseError;

pub fn check(ast: &Ast) -> Result<(), ParseError> {
    let mut assigned: BTreeSet<String> = ast.inputs.iter().cloned().collect();
    check_block(ast, &ast.body, &mut assigned)
}

fn check_block(
    ast: &Ast,
    stmts: &[Stmt],
    assigned: &mut BTreeSet<String>,
) -> Result<(), ParseError> {
    for stmt in stmts {
        match &stmt.kind {
            StmtKind::Assign { target, value } => {
                check_expr(ast, stmt, value, assigned)?;
                assigned.insert(target.clone());
            }
            StmtKind::Print { value } => check_expr(ast, stmt, value, assigned)?,
            StmtKind::If {
                cond,
                then_body,
                else_body,
            } => {
                check_expr(ast, stmt, cond, assigned)?;
                let mut then_set = assigned.clone();
                check_block(ast, then_body, &mut then_set)?;
                let mut else_set = assigned.clone();
                check_block(ast, else_body, &mut else_set)?;
                // Only assignments made on both branches survive the join.
                *assigned = then_set.intersection(&else_set).cloned().collect();
            }
            StmtKind::While { cond, body } => {
                check_expr(ast, stmt, cond, assigned)?;
                // The body may not run at all, so its assignments do not
                // become definite after the loop.
                let mut body_set = assigned.clone();
                check_block(ast, body, &mut body_set)?;
            }
        }
    }
    Ok(())
}

fn check_expr(
    ast: &Ast,
    stmt: &Stmt,
    expr: &Expr,
    assigned: &BTreeSet<String>,
) -> Result<(), ParseError> {
    match expr {
        Expr::Int(_) => Ok(()),
        Expr::Var(name) => {
            if assigned.contains(name) {
                Ok(())
            } else {
                Err(ParseError::UseBeforeAssign {
                    var: name.clone(),
                    stmt: stmt.id,
                    pos: ast.span(stmt.id),
                })
            }
        }
        Expr::Unary(_, operand) => check_expr(ast, stmt, operand, assigned),
        Expr::Binary(_, lhs, rhs) => {
            check_expr(ast, stmt, lhs, assigned)?;
            check_expr(ast, stmt, rhs, assigned)
        }
    }
}
