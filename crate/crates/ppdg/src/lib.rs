//! Statement-level fault localization for MiniLang programs.
//!
//! The pipeline: parse a program, build its control flow graph and program
//! dependence graph, transform the PDG into an acyclic model with discrete
//! per-node states, learn conditional probability tables from the node-state
//! traces of passing test executions, and rank the statements of a failing
//! execution by their lowest conditional probability. A coverage-based
//! suspiciousness baseline and a mutation-based fault seeder support
//! benchmarking the ranker.
//!
//! Start with [`analyze`] for the whole pipeline on one program, or see the
//! runnable programs under `examples/`.

pub mod exec;
pub mod experiment;
pub mod graph;
pub mod lang;
pub mod localize;
pub mod model;
pub mod mutate;

use lang::{Ast, ParseError, SourceProgram};

/// Everything the pipeline derives from one program.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub ast: Ast,
    pub cfg: graph::Cfg,
    pub postdoms: graph::PostDomTree,
    pub pdg: graph::Pdg,
    pub tpdg: model::TransformedPdg,
    /// Zero-count model: skeleton plus state spaces, ready for learning.
    pub model: model::Ppdg,
}

/// Parses and analyzes a program with the default sign abstraction and no
/// smoothing.
pub fn analyze(source: &SourceProgram) -> Result<Analysis, ParseError> {
    analyze_with(source, model::ValuePolicy::Sign, model::Smoothing::Off)
}

pub fn analyze_with(
    source: &SourceProgram,
    policy: model::ValuePolicy,
    smoothing: model::Smoothing,
) -> Result<Analysis, ParseError> {
    let ast = lang::parse(source)?;
    let cfg = graph::build_cfg(&ast);
    let postdoms = graph::compute_postdominators(&cfg);
    let control = graph::control_dependences(&cfg, &postdoms);
    let data = graph::reaching_definitions(&cfg, &ast);
    let pdg = graph::build_pdg(&ast, &cfg, control, data);
    let tpdg = model::transform_pdg(&pdg);
    let spaces = model::StateSpaces::assign(&tpdg, &ast, policy);
    let model = model::Ppdg::new(ast.name.clone(), tpdg.clone(), spaces, smoothing);
    Ok(Analysis {
        ast,
        cfg,
        postdoms,
        pdg,
        tpdg,
        model,
    })
}
