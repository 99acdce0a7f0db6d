//! Tokenizer for MiniLang. Line comments start with `//`.

use std::fmt;

use super::ast::Pos;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    KwInput,
    KwIf,
    KwElse,
    KwWhile,
    KwPrint,
    Assign,
    Semi,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    NotEq,
    AndAnd,
    OrOr,
    Bang,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "{s}"),
            TokenKind::Int(v) => write!(f, "{v}"),
            TokenKind::KwInput => f.write_str("input"),
            TokenKind::KwIf => f.write_str("if"),
            TokenKind::KwElse => f.write_str("else"),
            TokenKind::KwWhile => f.write_str("while"),
            TokenKind::KwPrint => f.write_str("print"),
            TokenKind::Assign => f.write_str("="),
            TokenKind::Semi => f.write_str(";"),
            TokenKind::LParen => f.write_str("("),
            TokenKind::RParen => f.write_str(")"),
            TokenKind::LBrace => f.write_str("{"),
            TokenKind::RBrace => f.write_str("}"),
            TokenKind::Plus => f.write_str("+"),
            TokenKind::Minus => f.write_str("-"),
            TokenKind::Star => f.write_str("*"),
            TokenKind::Slash => f.write_str("/"),
            TokenKind::Percent => f.write_str("%"),
            TokenKind::Lt => f.write_str("<"),
            TokenKind::Le => f.write_str("<="),
            TokenKind::Gt => f.write_str(">"),
            TokenKind::Ge => f.write_str(">="),
            TokenKind::EqEq => f.write_str("=="),
            TokenKind::NotEq => f.write_str("!="),
            TokenKind::AndAnd => f.write_str("&&"),
            TokenKind::OrOr => f.write_str("||"),
            TokenKind::Bang => f.write_str("!"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;

    let bump = |i: &mut usize, line: &mut u32, col: &mut u32, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };

        if c.is_whitespace() {
            bump(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                let cur = chars[i];
                bump(&mut i, &mut line, &mut col, cur);
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut text = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                let cur = chars[i];
                text.push(cur);
                bump(&mut i, &mut line, &mut col, cur);
            }
            let value: i64 = text.parse().map_err(|_| ParseError::Syntax {
                pos,
                message: format!("integer literal `{text}` out of range"),
            })?;
            tokens.push(Token {
                kind: TokenKind::Int(value),
                pos,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                let cur = chars[i];
                word.push(cur);
                bump(&mut i, &mut line, &mut col, cur);
            }
            let kind = match word.as_str() {
                "input" => TokenKind::KwInput,
                "if" => TokenKind::KwIf,
                "else" => TokenKind::KwElse,
                "while" => TokenKind::KwWhile,
                "print" => TokenKind::KwPrint,
                _ => TokenKind::Ident(word),
            };
            tokens.push(Token { kind, pos });
            continue;
        }

        let two = |a: char| chars.get(i + 1) == Some(&a);
        let (kind, len) = match c {
            '=' if two('=') => (TokenKind::EqEq, 2),
            '=' => (TokenKind::Assign, 1),
            '!' if two('=') => (TokenKind::NotEq, 2),
            '!' => (TokenKind::Bang, 1),
            '<' if two('=') => (TokenKind::Le, 2),
            '<' => (TokenKind::Lt, 1),
            '>' if two('=') => (TokenKind::Ge, 2),
            '>' => (TokenKind::Gt, 1),
            '&' if two('&') => (TokenKind::AndAnd, 2),
            '|' if two('|') => (TokenKind::OrOr, 2),
            ';' => (TokenKind::Semi, 1),
            '(' => (TokenKind::LParen, 1),
            ')' => (TokenKind::RParen, 1),
            '{' => (TokenKind::LBrace, 1),
            '}' => (TokenKind::RBrace, 1),
            '+' => (TokenKind::Plus, 1),
            '-' => (TokenKind::Minus, 1),
            '*' => (TokenKind::Star, 1),
            '/' => (TokenKind::Slash, 1),
            '%' => (TokenKind::Percent, 1),
            other => {
                return Err(ParseError::Syntax {
                    pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        for _ in 0..len {
            let cur = chars[i];
            bump(&mut i, &mut line, &mut col, cur);
        }
        tokens.push(Token { kind, pos });
    }

    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_operators_and_keywords() {
        let toks = tokenize("while (a <= -3) { b = b % 2; } // done").unwrap();
        let kinds: Vec<&TokenKind> = toks.iter().map(|t| &t.kind).collect();
        assert!(matches!(kinds[0], TokenKind::KwWhile));
        assert!(kinds.iter().any(|k| matches!(k, TokenKind::Le)));
        assert!(kinds.iter().any(|k| matches!(k, TokenKind::Percent)));
        // comment is skipped entirely
        assert!(matches!(kinds.last().unwrap(), TokenKind::RBrace));
    }

    #[test]
    fn reports_position_of_bad_character() {
        let err = tokenize("x = 1;\ny = @;").unwrap_err();
        match err {
            ParseError::Syntax { pos, .. } => {
                assert_eq!((pos.line, pos.col), (2, 5));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
