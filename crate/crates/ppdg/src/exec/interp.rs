//! Tree-walking interpreter with trace emission.
//!
//! Every predicate evaluation emits (node, TRUE|FALSE); every assignment and
//! print emits (node, abstract state of the computed value). When a node with
//! aux parents is evaluated again after its shadowed source has run, the aux
//! events carrying the source's most recent state are emitted immediately
//! before the node's own event. Arithmetic wraps on i64; division or modulo
//! by zero and step-budget exhaustion end the run with a CRASH verdict and a
//! trace covering everything up to the faulting node.

use std::collections::HashMap;

use thiserror::Error;

use super::suite::{TestCase, TestSuite};
use super::Verdict;
use crate::lang::{Ast, BinOp, Expr, Stmt, StmtKind, UnOp};
use crate::model::{Node, NodeStateTrace, Ppdg, RecentStates, TraceEvent};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionResult {
    pub output: Vec<i64>,
    pub verdict: Verdict,
    pub trace: NodeStateTrace,
    pub step_count: u64,
}

/// Problems with the test setup itself; runtime faults are CRASH verdicts,
/// not errors.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExecError {
    #[error("test `{test}`: no binding for input variable `{var}`")]
    MissingInput { test: String, var: String },
    #[error("test `{test}`: binding for `{var}` does not match any input declaration")]
    UnknownInput { test: String, var: String },
}

enum Fault {
    DivisionByZero,
    BudgetExceeded,
}

pub fn execute(
    ast: &Ast,
    model: &Ppdg,
    case: &TestCase,
    step_budget: u64,
) -> Result<ExecutionResult, ExecError> {
    for input in &ast.inputs {
        if !case.inputs.contains_key(input) {
            return Err(ExecError::MissingInput {
                test: case.id.clone(),
                var: input.clone(),
            });
        }
    }
    for bound in case.inputs.keys() {
        if !ast.inputs.contains(bound) {
            return Err(ExecError::UnknownInput {
                test: case.id.clone(),
                var: bound.clone(),
            });
        }
    }

    let mut interp = Interp {
        model,
        env: case.inputs.iter().map(|(k, &v)| (k.clone(), v)).collect(),
        output: Vec::new(),
        events: Vec::new(),
        recent: RecentStates::new(),
        steps: 0,
        budget: step_budget,
    };
    let fault = interp.run_block(&ast.body).err();

    let verdict = match fault {
        Some(_) => Verdict::Crash,
        None if interp.output == case.expected => Verdict::Pass,
        None => Verdict::Fail,
    };
    let mut trace = NodeStateTrace::new(case.id.clone(), verdict);
    trace.events = interp.events;
    Ok(ExecutionResult {
        output: interp.output,
        verdict,
        trace,
        step_count: interp.steps,
    })
}

/// Runs every case of the suite in order. Case results are independent, so
/// the collection is a pure function of (ast, suite, budget).
pub fn run_suite(
    ast: &Ast,
    model: &Ppdg,
    suite: &TestSuite,
    step_budget: u64,
) -> Result<Vec<ExecutionResult>, ExecError> {
    suite
        .cases
        .iter()
        .map(|case| execute(ast, model, case, step_budget))
        .collect()
}

struct Interp<'a> {
    model: &'a Ppdg,
    env: HashMap<String, i64>,
    output: Vec<i64>,
    events: Vec<TraceEvent>,
    recent: RecentStates,
    steps: u64,
    budget: u64,
}

impl Interp<'_> {
    fn run_block(&mut self, stmts: &[Stmt]) -> Result<(), Fault> {
        for stmt in stmts {
            self.run_stmt(stmt)?;
        }
        Ok(())
    }

    fn run_stmt(&mut self, stmt: &Stmt) -> Result<(), Fault> {
        match &stmt.kind {
            StmtKind::Assign { target, value } => {
                self.tick()?;
                let v = self.eval(value)?;
                self.env.insert(target.clone(), v);
                self.emit_value(stmt, v);
                Ok(())
            }
            StmtKind::Print { value } => {
                self.tick()?;
                let v = self.eval(value)?;
                self.output.push(v);
                self.emit_value(stmt, v);
                Ok(())
            }
            StmtKind::If {
                cond,
                then_body,
                else_body,
            } => {
                self.tick()?;
                let taken = self.eval(cond)? != 0;
                self.emit_branch(stmt, taken);
                if taken {
                    self.run_block(then_body)
                } else {
                    self.run_block(else_body)
                }
            }
            StmtKind::While { cond, body } => loop {
                self.tick()?;
                let taken = self.eval(cond)? != 0;
                self.emit_branch(stmt, taken);
                if !taken {
                    return Ok(());
                }
                self.run_block(body)?;
            },
        }
    }

    fn tick(&mut self) -> Result<(), Fault> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Fault::BudgetExceeded)
        } else {
            Ok(())
        }
    }

    /// Aux parents fire first: each one republishes the most recent state of
    /// the statement it shadows, skipped while that statement has not run.
    fn emit_aux_parents(&mut self, node: Node) {
        for (aux_node, aux) in self.model.skeleton().aux_parents(node) {
            if let Some(state) = self.recent.get(Node::Stmt(aux.source)) {
                self.events.push(TraceEvent {
                    node: aux_node,
                    state,
                });
                self.recent.update(aux_node, state);
            }
        }
    }

    fn emit_value(&mut self, stmt: &Stmt, value: i64) {
        let node = Node::Stmt(stmt.id);
        self.emit_aux_parents(node);
        let state = self.model.spaces().policy().abstract_value(value);
        self.events.push(TraceEvent { node, state });
        self.recent.update(node, state);
    }

    fn emit_branch(&mut self, stmt: &Stmt, taken: bool) {
        let node = Node::Stmt(stmt.id);
        self.emit_aux_parents(node);
        let state = if taken {
            crate::model::NodeState::True
        } else {
            crate::model::NodeState::False
        };
        self.events.push(TraceEvent { node, state });
        self.recent.update(node, state);
    }

    fn eval(&mut self, expr: &Expr) -> Result<i64, Fault> {
        match expr {
            Expr::Int(v) => Ok(*v),
            Expr::Var(name) => Ok(*self
                .env
                .get(name)
                .expect("definite assignment guarantees a value")),
            Expr::Unary(UnOp::Neg, operand) => Ok(self.eval(operand)?.wrapping_neg()),
            Expr::Unary(UnOp::Not, operand) => Ok((self.eval(operand)? == 0) as i64),
            Expr::Binary(op, lhs, rhs) => {
                // Logical operators short-circuit; everything else is strict.
                match op {
                    BinOp::And => {
                        if self.eval(lhs)? == 0 {
                            return Ok(0);
                        }
                        return Ok((self.eval(rhs)? != 0) as i64);
                    }
                    BinOp::Or => {
                        if self.eval(lhs)? != 0 {
                            return Ok(1);
                        }
                        return Ok((self.eval(rhs)? != 0) as i64);
                    }
                    _ => {}
                }
                let a = self.eval(lhs)?;
                let b = self.eval(rhs)?;
                Ok(match op {
                    BinOp::Add => a.wrapping_add(b),
                    BinOp::Sub => a.wrapping_sub(b),
                    BinOp::Mul => a.wrapping_mul(b),
                    BinOp::Div => {
                        if b == 0 {
                            return Err(Fault::DivisionByZero);
                        }
                        a.wrapping_div(b)
                    }
                    BinOp::Mod => {
                        if b == 0 {
                            return Err(Fault::DivisionByZero);
                        }
                        a.wrapping_rem(b)
                    }
                    BinOp::Lt => (a < b) as i64,
                    BinOp::Le => (a <= b) as i64,
                    BinOp::Gt => (a > b) as i64,
                    BinOp::Ge => (a >= b) as i64,
                    BinOp::Eq => (a == b) as i64,
                    BinOp::Ne => (a != b) as i64,
                    BinOp::And | BinOp::Or => unreachable!("handled above"),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse, SourceProgram};
    use crate::model::NodeState;
    use std::collections::BTreeMap;

    fn setup(text: &str) -> (Ast, Ppdg) {
        let ast = parse(&SourceProgram::new("t", text)).unwrap();
        let model = Ppdg::skeleton_for(&ast);
        (ast, model)
    }

    fn case(id: &str, inputs: &[(&str, i64)], expected: &[i64]) -> TestCase {
        TestCase {
            id: id.to_string(),
            inputs: inputs
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect::<BTreeMap<_, _>>(),
            expected: expected.to_vec(),
        }
    }

    fn events(result: &ExecutionResult) -> Vec<(Node, NodeState)> {
        result.trace.events.iter().map(|e| (e.node, e.state)).collect()
    }

    #[test]
    fn negative_assignment_emits_neg_states() {
        let (ast, model) = setup("x = 0 - 3; print(x);");
        let result = execute(&ast, &model, &case("t", &[], &[-3]), 1000).unwrap();
        assert_eq!(result.verdict, Verdict::Pass);
        assert_eq!(
            events(&result),
            vec![
                (Node::stmt(1), NodeState::Neg),
                (Node::stmt(2), NodeState::Neg)
            ]
        );
    }

    #[test]
    fn countdown_emits_predicate_and_aux_sequence() {
        // n = 2 (1); while (n > 0) (2) { n = n - 1 (3) }
        let (ast, model) = setup("n = 2; while (n > 0) { n = n - 1; }");
        let result = execute(&ast, &model, &case("t", &[], &[]), 1000).unwrap();
        assert_eq!(result.verdict, Verdict::Pass);
        // Aux nodes: (3,2,n) -> aux1 before re-evaluations of 2,
        //            (3,3,n) -> aux2 before re-executions of 3.
        let got = events(&result);
        let expected = vec![
            (Node::stmt(1), NodeState::Pos),   // n = 2
            (Node::stmt(2), NodeState::True),  // 2 > 0
            (Node::stmt(3), NodeState::Pos),   // n = 1
            (Node::Aux(1), NodeState::Pos),    // previous n from stmt 3
            (Node::stmt(2), NodeState::True),  // 1 > 0
            (Node::Aux(2), NodeState::Pos),    // previous n from stmt 3
            (Node::stmt(3), NodeState::Zero),  // n = 0
            (Node::Aux(1), NodeState::Zero),
            (Node::stmt(2), NodeState::False), // 0 > 0
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn division_by_zero_crashes_with_trace_prefix() {
        let (ast, model) = setup("x = 1; y = 1 / 0; print(y);");
        let result = execute(&ast, &model, &case("t", &[], &[1]), 1000).unwrap();
        assert_eq!(result.verdict, Verdict::Crash);
        assert_eq!(events(&result), vec![(Node::stmt(1), NodeState::Pos)]);
    }

    #[test]
    fn infinite_loop_exhausts_the_budget() {
        let (ast, model) = setup("input n; while (n > 0) { print(n); }");
        let result = execute(&ast, &model, &case("t", &[("n", 1)], &[]), 50).unwrap();
        assert_eq!(result.verdict, Verdict::Crash);
        assert_eq!(result.step_count, 51);
    }

    #[test]
    fn wrong_output_fails() {
        let (ast, model) = setup("print(2);");
        let result = execute(&ast, &model, &case("t", &[], &[3]), 1000).unwrap();
        assert_eq!(result.verdict, Verdict::Fail);
    }

    #[test]
    fn missing_input_binding_is_a_setup_error() {
        let (ast, model) = setup("input n; print(n);");
        let err = execute(&ast, &model, &case("t", &[], &[0]), 1000).unwrap_err();
        assert!(matches!(err, ExecError::MissingInput { ref var, .. } if var == "n"));
    }

    #[test]
    fn execution_is_deterministic() {
        let (ast, model) = setup("input n; s = 0; i = 1; while (i <= n) { s = s + i; i = i + 1; } print(s);");
        let c = case("t", &[("n", 4)], &[10]);
        let a = execute(&ast, &model, &c, 10_000).unwrap();
        let b = execute(&ast, &model, &c, 10_000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.verdict, Verdict::Pass);
    }

    #[test]
    fn suite_runs_every_case() {
        let (ast, model) = setup("input n; print(n * 2);");
        let suite = TestSuite {
            program: "t".to_string(),
            cases: vec![
                case("a", &[("n", 1)], &[2]),
                case("b", &[("n", 2)], &[5]), // wrong on purpose
                case("c", &[("n", 3)], &[6]),
            ],
        };
        let results = run_suite(&ast, &model, &suite, 1000).unwrap();
        let verdicts: Vec<Verdict> = results.iter().map(|r| r.verdict).collect();
        assert_eq!(verdicts, vec![Verdict::Pass, Verdict::Fail, Verdict::Pass]);
    }
}
