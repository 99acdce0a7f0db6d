//! Command-line front door; all logic lives in the library.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ppdg::exec::{load_suite, run_suite, DEFAULT_STEP_BUDGET};
use ppdg::lang::{list_statements, SourceProgram};
use ppdg::localize::{rank_cp, sbi_scores};
use ppdg::model::{learn_params, NodeStateTrace, Ppdg, Smoothing};
use ppdg::mutate::{enumerate_mutants, parse_operator_list};

#[derive(Parser)]
#[command(
    name = "ppdg",
    about = "Fault localization for MiniLang programs via probabilistic dependence graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Syntax-check a program and print its statement table
    Parse { file: PathBuf },
    /// Export the control flow graph as DOT
    Cfg {
        file: PathBuf,
        /// Output path; stdout when omitted
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Export the program dependence graph as DOT and/or JSON
    Pdg {
        file: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the JSON form (nodes, controlEdges, dataEdges)
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Export the transformed dependence graph as DOT
    Ppdg {
        file: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run a test suite and learn probability tables from the passing traces
    Train {
        file: PathBuf,
        #[arg(long)]
        suite: PathBuf,
        /// Where to write the learned model JSON
        #[arg(long)]
        out: PathBuf,
        /// Also write one trace JSONL per test case into this directory
        #[arg(long)]
        traces_out: Option<PathBuf>,
        #[arg(long, default_value = "off", value_parser = parse_smoothing)]
        smoothing: Smoothing,
        #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
        step_budget: u64,
    },
    /// Rank the nodes of a failing trace by conditional probability
    Localize {
        model: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coverage-based suspiciousness scores for a program under a suite
    Sbi {
        file: PathBuf,
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
        step_budget: u64,
    },
    /// Generate single-site mutants and write sources plus a manifest
    Mutate {
        file: PathBuf,
        /// Comma-separated operator list, e.g. AOR,ROR,LOR,CRP,VRP
        #[arg(long, default_value = "AOR,ROR,LOR,CRP,VRP")]
        ops: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full mutation experiment described by a config file
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn load_program(path: &Path) -> Result<SourceProgram, String> {
    SourceProgram::from_path(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_or_print(path: Option<&Path>, content: &str) -> Result<(), String> {
    match path {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), String> {
    match command {
        Command::Parse { file } => {
            let source = load_program(&file)?;
            let ast = ppdg::lang::parse(&source).map_err(|e| e.to_string())?;
            println!("{:<4} {:<8} {:<10} {:<14} text", "id", "kind", "defines", "uses");
            for info in list_statements(&ast) {
                println!(
                    "{:<4} {:<8} {:<10} {:<14} {}",
                    info.id,
                    info.class,
                    info.defines.as_deref().unwrap_or("-"),
                    if info.uses.is_empty() {
                        "-".to_string()
                    } else {
                        info.uses.join(",")
                    },
                    info.text
                );
            }
            Ok(())
        }
        Command::Cfg { file, dot } => {
            let analysis = analyze(&file)?;
            write_or_print(dot.as_deref(), &analysis.cfg.to_dot(&analysis.ast))
        }
        Command::Pdg { file, dot, json } => {
            let analysis = analyze(&file)?;
            if dot.is_none() && json.is_none() {
                return write_or_print(None, &analysis.pdg.to_dot(&analysis.ast));
            }
            if let Some(path) = dot {
                write_or_print(Some(&path), &analysis.pdg.to_dot(&analysis.ast))?;
            }
            if let Some(path) = json {
                write_or_print(Some(&path), &analysis.pdg.to_json())?;
            }
            Ok(())
        }
        Command::Ppdg { file, dot } => {
            let analysis = analyze(&file)?;
            write_or_print(dot.as_deref(), &analysis.tpdg.to_dot(&analysis.ast))
        }
        Command::Train {
            file,
            suite,
            out,
            traces_out,
            smoothing,
            step_budget,
        } => {
            let source = load_program(&file)?;
            let analysis = ppdg::analyze_with(&source, Default::default(), smoothing)
                .map_err(|e| e.to_string())?;
            let suite = load_suite(&suite)?;
            let results = run_suite(&analysis.ast, &analysis.model, &suite, step_budget)
                .map_err(|e| e.to_string())?;

            if let Some(dir) = traces_out {
                std::fs::create_dir_all(&dir)
                    .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
                for result in &results {
                    let path = dir.join(format!("{}.jsonl", result.trace.test_id));
                    std::fs::write(&path, result.trace.to_jsonl(analysis.ast.stmt_count()))
                        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                }
            }

            let passing: Vec<NodeStateTrace> = results
                .iter()
                .filter(|r| !r.verdict.is_failing())
                .map(|r| r.trace.clone())
                .collect();
            if passing.is_empty() {
                return Err(
                    "no passing executions: probability tables are learned from passing \
                     executions only, and this suite has none"
                        .to_string(),
                );
            }
            let learned =
                learn_params(&analysis.model, &passing).map_err(|e| e.to_string())?;
            std::fs::write(&out, learned.to_json())
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            println!(
                "trained on {} passing / {} total executions; model written to {}",
                passing.len(),
                results.len(),
                out.display()
            );
            Ok(())
        }
        Command::Localize {
            model,
            trace,
            format,
            out,
        } => {
            let text = std::fs::read_to_string(&model)
                .map_err(|e| format!("cannot read {}: {e}", model.display()))?;
            let model = Ppdg::from_json(&text).map_err(|e| e.to_string())?;
            let stmt_count = model.skeleton().stmt_count();
            let trace_text = std::fs::read_to_string(&trace)
                .map_err(|e| format!("cannot read {}: {e}", trace.display()))?;
            let trace = NodeStateTrace::from_jsonl(&trace_text, stmt_count)
                .map_err(|e| e.to_string())?;
            let ranking = rank_cp(&trace, &model).map_err(|e| e.to_string())?;
            let rendered = match format {
                OutputFormat::Csv => ranking.to_csv(stmt_count),
                OutputFormat::Json => ranking.to_json(stmt_count),
            };
            write_or_print(out.as_deref(), &rendered)
        }
        Command::Sbi {
            file,
            suite,
            format,
            out,
            step_budget,
        } => {
            let analysis = analyze(&file)?;
            let suite = load_suite(&suite)?;
            let results = run_suite(&analysis.ast, &analysis.model, &suite, step_budget)
                .map_err(|e| e.to_string())?;
            let scores = sbi_scores(&results, analysis.ast.stmt_count());
            let rendered = match format {
                OutputFormat::Csv => scores.to_csv(),
                OutputFormat::Json => scores.to_json(),
            };
            write_or_print(out.as_deref(), &rendered)
        }
        Command::Mutate { file, ops, out } => {
            let operators = parse_operator_list(&ops)?;
            let source = load_program(&file)?;
            let ast = ppdg::lang::parse(&source).map_err(|e| e.to_string())?;
            let mutants = enumerate_mutants(&ast, &operators);
            std::fs::create_dir_all(&out)
                .map_err(|e| format!("cannot create {}: {e}", out.display()))?;

            let mut manifest = Vec::new();
            for (index, mutant) in mutants.iter().enumerate() {
                let id = format!("m{:04}", index + 1);
                let source_text = ppdg::lang::unparse(&mutant.ast).text;
                let file_name = format!("{}_{id}.mini", mutant.base);
                std::fs::write(out.join(&file_name), &source_text)
                    .map_err(|e| format!("cannot write {file_name}: {e}"))?;
                manifest.push(serde_json::json!({
                    "id": id,
                    "base": mutant.base,
                    "site": {"stmt": mutant.site.stmt.0, "position": mutant.site.position},
                    "operator": mutant.operator,
                    "faultyStmtId": mutant.faulty_stmt.0,
                    "change": mutant.change,
                    "sourceText": source_text,
                    "file": file_name,
                }));
            }
            let manifest_path = out.join("manifest.json");
            std::fs::write(
                &manifest_path,
                serde_json::to_string_pretty(&manifest).expect("manifest json"),
            )
            .map_err(|e| format!("cannot write {}: {e}", manifest_path.display()))?;
            println!("{} mutants written to {}", mutants.len(), out.display());
            Ok(())
        }
        Command::Experiment { config, out } => {
            let mut config = ppdg::experiment::ExperimentConfig::load(&config)?;
            if let Some(dir) = out {
                config.out_dir = Some(dir);
            }
            let report = ppdg::experiment::run_experiment(&config)?;
            let dir = config
                .out_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from("experiment-out"));
            ppdg::experiment::write_report(&report, &dir)?;
            for skipped in &report.skipped {
                eprintln!("skipped {}: {}", skipped.program, skipped.reason);
            }
            let overall = &report.overall;
            println!(
                "programs: {} | mutants: {} (killed {}, equivalent {}, no-passing {})",
                report.programs.len(),
                overall.mutants,
                overall.killed,
                overall.equivalent_on_suite,
                overall.no_passing
            );
            println!(
                "top-{} identified: ppdg {} vs sbi {} | mean exam: ppdg {} vs sbi {}",
                report.top_k,
                overall.ppdg.identified,
                overall.sbi.identified,
                overall
                    .ppdg
                    .mean_exam
                    .map(|m| format!("{m:.4}"))
                    .unwrap_or_else(|| "-".into()),
                overall
                    .sbi
                    .mean_exam
                    .map(|m| format!("{m:.4}"))
                    .unwrap_or_else(|| "-".into()),
            );
            println!("report written to {}", dir.display());
            Ok(())
        }
    }
}

fn analyze(file: &Path) -> Result<ppdg::Analysis, String> {
    let source = load_program(file)?;
    ppdg::analyze(&source).map_err(|e| e.to_string())
}

fn parse_smoothing(s: &str) -> Result<Smoothing, String> {
    s.parse()
}
