//! Canonical MiniLang pretty-printer.
//!
//! Every compound subexpression nested inside another expression is printed
//! parenthesized, so expression structure is encoded purely by parentheses
//! and never by operator precedence. Replacing one operator or literal in the
//! tree therefore changes exactly one token of the printed text, which is the
//! property the mutation tooling relies on.

use std::fmt::Write;

use super::ast::{Ast, Expr, SourceProgram, Stmt, StmtKind};

const INDENT: &str = "  ";

pub fn unparse(ast: &Ast) -> SourceProgram {
    let mut out = String::new();
    for input in &ast.inputs {
        writeln!(out, "input {input};").unwrap();
    }
    write_block(&mut out, &ast.body, 0);
    SourceProgram::new(ast.name.clone(), out)
}

fn write_block(out: &mut String, stmts: &[Stmt], depth: usize) {
    for stmt in stmts {
        let pad = INDENT.repeat(depth);
        match &stmt.kind {
            StmtKind::Assign { target, value } => {
                writeln!(out, "{pad}{target} = {};", expr_text(value)).unwrap();
            }
            StmtKind::Print { value } => {
                writeln!(out, "{pad}print({});", expr_text(value)).unwrap();
            }
            StmtKind::While { cond, body } => {
                writeln!(out, "{pad}while ({}) {{", expr_text(cond)).unwrap();
                write_block(out, body, depth + 1);
                writeln!(out, "{pad}}}").unwrap();
            }
            StmtKind::If {
                cond,
                then_body,
                else_body,
            } => {
                writeln!(out, "{pad}if ({}) {{", expr_text(cond)).unwrap();
                write_block(out, then_body, depth + 1);
                if else_body.is_empty() {
                    writeln!(out, "{pad}}}").unwrap();
                } else {
                    writeln!(out, "{pad}}} else {{").unwrap();
                    write_block(out, else_body, depth + 1);
                    writeln!(out, "{pad}}}").unwrap();
                }
            }
        }
    }
}

/// Expression as text, with the outermost level unparenthesized.
pub fn expr_text(expr: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr, false);
    out
}

fn write_expr(out: &mut String, expr: &Expr, nested: bool) {
    match expr {
        Expr::Int(v) => {
            write!(out, "{v}").unwrap();
        }
        Expr::Var(name) => out.push_str(name),
        Expr::Unary(op, operand) => {
            if nested {
                out.push('(');
            }
            out.push_str(op.symbol());
            write_expr(out, operand, true);
            if nested {
                out.push(')');
            }
        }
        Expr::Binary(op, lhs, rhs) => {
            if nested {
                out.push('(');
            }
            write_expr(out, lhs, true);
            write!(out, " {} ", op.symbol()).unwrap();
            write_expr(out, rhs, true);
            if nested {
                out.push(')');
            }
        }
    }
}

/// Single-line rendering of one statement, used for tables and graph labels.
/// Predicates render as their header only.
pub fn stmt_text(stmt: &Stmt) -> String {
    match &stmt.kind {
        StmtKind::Assign { target, value } => format!("{target} = {};", expr_text(value)),
        StmtKind::Print { value } => format!("print({});", expr_text(value)),
        StmtKind::While { cond, .. } => format!("while ({})", expr_text(cond)),
        StmtKind::If { cond, .. } => format!("if ({})", expr_text(cond)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    fn roundtrip(text: &str) -> (Ast, Ast) {
        let first = parse(&SourceProgram::new("t", text)).unwrap();
        let printed = unparse(&first);
        let second = parse(&printed).unwrap();
        (first, second)
    }

    #[test]
    fn roundtrip_preserves_structure_and_ids() {
        let (a, b) = roundtrip("x = 1;");
        assert_eq!(a, b);

        let (a, b) = roundtrip(
            "input n; i = 0; while (i < n) { if (i % 2 == 0) { print(i); } else { print(0 - i); } i = i + 1; }",
        );
        assert_eq!(a, b);
    }

    #[test]
    fn unparse_is_a_fixpoint_of_parse_unparse() {
        let src = "input a;\nx = a + (2 * a);\nprint(x);\n";
        let ast = parse(&SourceProgram::new("t", src)).unwrap();
        let once = unparse(&ast);
        let twice = unparse(&parse(&once).unwrap());
        assert_eq!(once.text, twice.text);
    }

    #[test]
    fn nested_expressions_are_parenthesized() {
        let ast = parse(&SourceProgram::new("t", "x = 1 + 2 * 3;")).unwrap();
        let text = unparse(&ast).text;
        assert!(text.contains("x = 1 + (2 * 3);"), "got: {text}");
    }

    #[test]
    fn negative_literals_print_without_parens() {
        // Built directly, as the mutation tooling does; `-5` re-parses as a
        // negated literal, which evaluates identically.
        let ast = parse(&SourceProgram::new("t", "x = 3 * 5;")).unwrap();
        let mut mutated = ast.clone();
        if let StmtKind::Assign { value, .. } = &mut mutated.body[0].kind {
            if let Expr::Binary(_, _, rhs) = value {
                **rhs = Expr::Int(-5);
            }
        }
        let text = unparse(&mutated).text;
        assert!(text.contains("x = 3 * -5;"), "got: {text}");
        assert!(parse(&unparse(&mutated)).is_ok());
    }
}
