//! Recursive-descent parser. Statements are numbered 1..=N in pre-order as
//! they are parsed, which mirrors source line order for the canonical layout.

use std::collections::BTreeMap;

use super::ast::*;
use super::defassign;
use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

pub fn parse(source: &SourceProgram) -> Result<Ast, ParseError> {
    let tokens = tokenize(&source.text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        next_id: 1,
        spans: BTreeMap::new(),
    };
    let inputs = parser.parse_inputs()?;
    let body = parser.parse_stmts_until_eof()?;
    let ast = Ast::new(source.name.clone(), inputs, body, parser.spans);
    defassign::check(&ast)?;
    Ok(ast)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    next_id: u32,
    spans: BTreeMap<StmtId, Pos>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn last_pos(&self) -> Pos {
        self.tokens
            .last()
            .map(|t| t.pos)
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let pos = self.peek().map(|t| t.pos).unwrap_or_else(|| self.last_pos());
        ParseError::Syntax {
            pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        match self.peek() {
            Some(tok) if tok.kind == kind => Ok(self.advance().unwrap()),
            Some(tok) => Err(ParseError::Syntax {
                pos: tok.pos,
                message: format!("expected `{kind}`, found `{}`", tok.kind),
            }),
            None => Err(ParseError::Syntax {
                pos: self.last_pos(),
                message: format!("expected `{kind}`, found end of input"),
            }),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(name),
                pos,
            }) => {
                let out = (name.clone(), *pos);
                self.advance();
                Ok(out)
            }
            _ => Err(self.error_here("expected identifier")),
        }
    }

    fn fresh_id(&mut self, pos: Pos) -> StmtId {
        let id = StmtId(self.next_id);
        self.next_id += 1;
        self.spans.insert(id, pos);
        id
    }

    fn parse_inputs(&mut self) -> Result<Vec<String>, ParseError> {
        let mut inputs = Vec::new();
        while matches!(self.peek(), Some(t) if t.kind == TokenKind::KwInput) {
            self.advance();
            let (name, pos) = self.expect_ident()?;
            if inputs.contains(&name) {
                return Err(ParseError::DuplicateInput { var: name, pos });
            }
            inputs.push(name);
            self.expect(TokenKind::Semi)?;
        }
        Ok(inputs)
    }

    fn parse_stmts_until_eof(&mut self) -> Result<Vec<Stmt>, ParseError> {
        let mut stmts = Vec::new();
        while self.peek().is_some() {
            stmts.push(self.parse_stmt()?);
        }
        Ok(stmts)
    }

    fn parse_block(&mut self) -> Result<Vec<Stmt>, ParseError> {
        self.expect(TokenKind::LBrace)?;
        let mut stmts = Vec::new();
        loop {
            match self.peek() {
                Some(t) if t.kind == TokenKind::RBrace => {
                    self.advance();
                    return Ok(stmts);
                }
                Some(_) => stmts.push(self.parse_stmt()?),
                None => return Err(self.error_here("expected `}`")),
            }
        }
    }

    fn parse_stmt(&mut self) -> Result<Stmt, ParseError> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.error_here("expected statement"))?;
        match tok.kind {
            TokenKind::KwIf => {
                let id = self.fresh_id(tok.pos);
                self.advance();
                self.expect(TokenKind::LParen)?;
                let cond = self.parse_expr()?;
                self.expect(TokenKind::RParen)?;
                let then_body = self.parse_block()?;
                let else_body = if matches!(self.peek(), Some(t) if t.kind == TokenKind::KwElse) {
                    self.advance();
                    self.parse_block()?
                } else {
                    Vec::new()
                };
                Ok(Stmt {
                    id,
                    kind: StmtKind::If {
                        cond,
                        then_body,
                        else_body,
                    },
                })
            }
            TokenKind::KwWhile => {
                let id = self.fresh_id(tok.pos);
                self.advance();
                self.expect(TokenKind::LParen)?;
                let cond = self.parse_expr()?;
                self.expect(TokenKind::RParen)?;
                let body = self.parse_block()?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::While { cond, body },
                })
            }
            TokenKind::KwPrint => {
                let id = self.fresh_id(tok.pos);
                self.advance();
                self.expect(TokenKind::LParen)?;
                let value = self.parse_expr()?;
                self.expect(TokenKind::RParen)?;
                self.expect(TokenKind::Semi)?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::Print { value },
                })
            }
            TokenKind::Ident(_) => {
                let id = self.fresh_id(tok.pos);
                let (target, _) = self.expect_ident()?;
                self.expect(TokenKind::Assign)?;
                let value = self.parse_expr()?;
                self.expect(TokenKind::Semi)?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::Assign { target, value },
                })
            }
            TokenKind::KwInput => Err(ParseError::Syntax {
                pos: tok.pos,
                message: "input declarations must precede all statements".to_string(),
            }),
            other => Err(ParseError::Syntax {
                pos: tok.pos,
                message: format!("expected statement, found `{other}`"),
            }),
        }
    }

    // Precedence, loosest first: || ; && ; == != ; < <= > >= ; + - ; * / % ; unary.
    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        self.parse_or()
    }

    fn parse_or(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_and()?;
        while matches!(self.peek(), Some(t) if t.kind == TokenKind::OrOr) {
            self.advance();
            let rhs = self.parse_and()?;
            lhs = Expr::binary(BinOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_equality()?;
        while matches!(self.peek(), Some(t) if t.kind == TokenKind::AndAnd) {
            self.advance();
            let rhs = self.parse_equality()?;
            lhs = Expr::binary(BinOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_equality(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_relational()?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::EqEq) => BinOp::Eq,
                Some(TokenKind::NotEq) => BinOp::Ne,
                _ => break,
            };
            self.advance();
            let rhs = self.parse_relational()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_relational(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_additive()?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Lt) => BinOp::Lt,
                Some(TokenKind::Le) => BinOp::Le,
                Some(TokenKind::Gt) => BinOp::Gt,
                Some(TokenKind::Ge) => BinOp::Ge,
                _ => break,
            };
            self.advance();
            let rhs = self.parse_additive()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_additive(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => break,
            };
            self.advance();
            let rhs = self.parse_term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_unary()?;
        loop {
            let op = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                Some(TokenKind::Percent) => BinOp::Mod,
                _ => break,
            };
            self.advance();
            let rhs = self.parse_unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Minus) => {
                self.advance();
                Ok(Expr::unary(UnOp::Neg, self.parse_unary()?))
            }
            Some(TokenKind::Bang) => {
                self.advance();
                Ok(Expr::unary(UnOp::Not, self.parse_unary()?))
            }
            _ => self.parse_primary(),
        }
    }

    fn parse_primary(&mut self) -> Result<Expr, ParseError> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.error_here("expected expression"))?;
        match tok.kind {
            TokenKind::Int(v) => {
                self.advance();
                Ok(Expr::Int(v))
            }
            TokenKind::Ident(name) => {
                self.advance();
                Ok(Expr::Var(name))
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.parse_expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            other => Err(ParseError::Syntax {
                pos: tok.pos,
                message: format!("expected expression, found `{other}`"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_text(text: &str) -> Result<Ast, ParseError> {
        parse(&SourceProgram::new("test", text))
    }

    #[test]
    fn two_statement_program_gets_ids_one_and_two() {
        let ast = parse_text("x = 1; print(x);").unwrap();
        let stmts = ast.statements();
        assert_eq!(stmts.len(), 2);
        assert_eq!(stmts[0].id, StmtId(1));
        assert_eq!(stmts[1].id, StmtId(2));
    }

    #[test]
    fn while_body_is_numbered_in_preorder() {
        let ast = parse_text("input n; while (n > 0) { n = n - 1; } print(n);").unwrap();
        let stmts = ast.statements();
        assert_eq!(stmts.len(), 3);
        assert!(matches!(stmts[0].kind, StmtKind::While { .. }));
        assert_eq!(stmts[0].id, StmtId(1));
        assert!(matches!(stmts[1].kind, StmtKind::Assign { .. }));
        assert_eq!(stmts[1].id, StmtId(2));
        assert!(matches!(stmts[2].kind, StmtKind::Print { .. }));
        assert_eq!(stmts[2].id, StmtId(3));
    }

    #[test]
    fn ids_are_dense_preorder_for_nested_structures() {
        let ast = parse_text(
            "input a; if (a > 0) { x = 1; if (x > 0) { y = 2; } } else { x = 3; } print(x);",
        )
        .unwrap();
        let ids: Vec<u32> = ast.statements().iter().map(|s| s.id.0).collect();
        assert_eq!(ids, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn use_before_assignment_is_rejected() {
        let err = parse_text("print(y);").unwrap_err();
        assert!(matches!(err, ParseError::UseBeforeAssign { ref var, .. } if var == "y"));
    }

    #[test]
    fn input_variables_may_be_read_immediately() {
        assert!(parse_text("input y; print(y);").is_ok());
    }

    #[test]
    fn duplicate_input_declaration_is_rejected() {
        let err = parse_text("input a; input a; print(a);").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateInput { ref var, .. } if var == "a"));
    }

    #[test]
    fn branch_assignment_does_not_count_as_definite() {
        let err = parse_text("input c; if (c > 0) { x = 1; } print(x);").unwrap_err();
        assert!(matches!(err, ParseError::UseBeforeAssign { ref var, .. } if var == "x"));
    }

    #[test]
    fn assignment_in_both_branches_is_definite() {
        let src = "input c; if (c > 0) { x = 1; } else { x = 2; } print(x);";
        assert!(parse_text(src).is_ok());
    }

    #[test]
    fn loop_body_assignment_is_not_definite_after_loop() {
        let err = parse_text("input n; while (n > 0) { x = 1; n = n - 1; } print(x);").unwrap_err();
        assert!(matches!(err, ParseError::UseBeforeAssign { ref var, .. } if var == "x"));
    }

    #[test]
    fn precedence_groups_multiplication_tighter_than_addition() {
        let ast = parse_text("x = 1 + 2 * 3;").unwrap();
        match &ast.body[0].kind {
            StmtKind::Assign { value, .. } => match value {
                Expr::Binary(BinOp::Add, lhs, rhs) => {
                    assert_eq!(**lhs, Expr::Int(1));
                    assert!(matches!(**rhs, Expr::Binary(BinOp::Mul, _, _)));
                }
                other => panic!("unexpected expr {other:?}"),
            },
            other => panic!("unexpected stmt {other:?}"),
        }
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_text("x = ;").unwrap_err();
        match err {
            ParseError::Syntax { pos, .. } => assert_eq!((pos.line, pos.col), (1, 5)),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn zero_statement_program_parses() {
        let ast = parse_text("input n;").unwrap();
        assert_eq!(ast.stmt_count(), 0);
    }
}
