//! Abstract syntax for MiniLang programs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A MiniLang source file: raw text plus a name (usually the file stem).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceProgram {
    pub name: String,
    pub text: String,
}

impl SourceProgram {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        SourceProgram {
            name: name.into(),
            text: text.into(),
        }
    }

    /// Reads a `.mini` file; the program name is the file stem.
    pub fn from_path(path: impl AsRef<std::path::Path>) -> std::io::Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "program".to_string());
        Ok(SourceProgram { name, text })
    }
}

/// Identifier of a statement. Ids are dense `1..=N` in pre-order, so a
/// statement's id doubles as its position in enumeration order.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct StmtId(pub u32);

impl fmt::Display for StmtId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Binary operators, grouped by the mutation classes that apply to them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub const ARITHMETIC: [BinOp; 5] = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod];
    pub const RELATIONAL: [BinOp; 6] = [
        BinOp::Lt,
        BinOp::Le,
        BinOp::Gt,
        BinOp::Ge,
        BinOp::Eq,
        BinOp::Ne,
    ];
    pub const LOGICAL: [BinOp; 2] = [BinOp::And, BinOp::Or];

    pub fn is_arithmetic(self) -> bool {
        Self::ARITHMETIC.contains(&self)
    }

    pub fn is_relational(self) -> bool {
        Self::RELATIONAL.contains(&self)
    }

    pub fn is_logical(self) -> bool {
        Self::LOGICAL.contains(&self)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    Not,
}

impl UnOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnOp::Neg => "-",
            UnOp::Not => "!",
        }
    }
}

/// Integer-valued expression. Comparisons and logical operators yield 0 or 1;
/// any nonzero value is truthy in a condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Var(String),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn unary(op: UnOp, operand: Expr) -> Expr {
        Expr::Unary(op, Box::new(operand))
    }

    /// Collects variable names read by this expression, in sorted order.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = Vec::new();
        self.collect_variables(&mut vars);
        vars.sort();
        vars.dedup();
        vars
    }

    fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(name) => out.push(name.clone()),
            Expr::Unary(_, operand) => operand.collect_variables(out),
            Expr::Binary(_, lhs, rhs) => {
                lhs.collect_variables(out);
                rhs.collect_variables(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Assign { target: String, value: Expr },
    If { cond: Expr, then_body: Vec<Stmt>, else_body: Vec<Stmt> },
    While { cond: Expr, body: Vec<Stmt> },
    Print { value: Expr },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub id: StmtId,
    pub kind: StmtKind,
}

impl Stmt {
    pub fn is_predicate(&self) -> bool {
        matches!(self.kind, StmtKind::If { .. } | StmtKind::While { .. })
    }

    /// Variables read when this statement itself executes. For predicates
    /// that is the condition only; body reads belong to the body statements.
    pub fn used_vars(&self) -> Vec<String> {
        match &self.kind {
            StmtKind::Assign { value, .. } => value.variables(),
            StmtKind::If { cond, .. } => cond.variables(),
            StmtKind::While { cond, .. } => cond.variables(),
            StmtKind::Print { value } => value.variables(),
        }
    }

    pub fn defined_var(&self) -> Option<&str> {
        match &self.kind {
            StmtKind::Assign { target, .. } => Some(target),
            _ => None,
        }
    }
}

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A parsed program. Statement ids are dense `1..=stmt_count()` in pre-order.
///
/// Equality is structural: two `Ast`s compare equal when their input
/// declarations and statement trees (including ids) match, regardless of the
/// source positions they were parsed from.
#[derive(Debug, Clone)]
pub struct Ast {
    pub name: String,
    pub inputs: Vec<String>,
    pub body: Vec<Stmt>,
    spans: BTreeMap<StmtId, Pos>,
}

impl PartialEq for Ast {
    fn eq(&self, other: &Self) -> bool {
        self.inputs == other.inputs && self.body == other.body
    }
}

impl Eq for Ast {}

impl Ast {
    pub(crate) fn new(
        name: String,
        inputs: Vec<String>,
        body: Vec<Stmt>,
        spans: BTreeMap<StmtId, Pos>,
    ) -> Self {
        Ast {
            name,
            inputs,
            body,
            spans,
        }
    }

    pub fn stmt_count(&self) -> u32 {
        fn count(stmts: &[Stmt]) -> u32 {
            stmts
                .iter()
                .map(|s| match &s.kind {
                    StmtKind::If {
                        then_body,
                        else_body,
                        ..
                    } => 1 + count(then_body) + count(else_body),
                    StmtKind::While { body, .. } => 1 + count(body),
                    _ => 1,
                })
                .sum()
        }
        count(&self.body)
    }

    pub fn span(&self, id: StmtId) -> Pos {
        self.spans.get(&id).copied().unwrap_or_default()
    }

    /// All statements in id (pre-order) order.
    pub fn statements(&self) -> Vec<&Stmt> {
        fn walk<'a>(stmts: &'a [Stmt], out: &mut Vec<&'a Stmt>) {
            for s in stmts {
                out.push(s);
                match &s.kind {
                    StmtKind::If {
                        then_body,
                        else_body,
                        ..
                    } => {
                        walk(then_body, out);
                        walk(else_body, out);
                    }
                    StmtKind::While { body, .. } => walk(body, out),
                    _ => {}
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.body, &mut out);
        out
    }

    pub fn stmt(&self, id: StmtId) -> Option<&Stmt> {
        self.statements().into_iter().find(|s| s.id == id)
    }

    /// Every variable the program mentions: inputs plus assignment targets.
    pub fn variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = self.inputs.clone();
        for s in self.statements() {
            if let Some(t) = s.defined_var() {
                vars.push(t.to_string());
            }
        }
        vars.sort();
        vars.dedup();
        vars
    }
}

/// Statement classification as reported by [`list_statements`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StmtClass {
    Assign,
    If,
    While,
    Print,
}

impl StmtClass {
    pub fn is_predicate(self) -> bool {
        matches!(self, StmtClass::If | StmtClass::While)
    }
}

impl fmt::Display for StmtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StmtClass::Assign => "assign",
            StmtClass::If => "if",
            StmtClass::While => "while",
            StmtClass::Print => "print",
        };
        f.write_str(s)
    }
}

/// One row of the statement table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StmtInfo {
    pub id: StmtId,
    pub class: StmtClass,
    pub uses: Vec<String>,
    pub defines: Option<String>,
    pub text: String,
}

/// One entry per statement in id order, with predicate kinds flagged and
/// use/def sets attached.
pub fn list_statements(ast: &Ast) -> Vec<StmtInfo> {
    ast.statements()
        .into_iter()
        .map(|s| {
            let class = match &s.kind {
                StmtKind::Assign { .. } => StmtClass::Assign,
                StmtKind::If { .. } => StmtClass::If,
                StmtKind::While { .. } => StmtClass::While,
                StmtKind::Print { .. } => StmtClass::Print,
            };
            StmtInfo {
                id: s.id,
                class,
                uses: s.used_vars(),
                defines: s.defined_var().map(str::to_string),
                text: crate::lang::printer::stmt_text(s),
            }
        })
        .collect()
}
