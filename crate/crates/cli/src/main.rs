use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use ffc_core::dataset::{self, ColumnMap, EntryError, FaultEntry, LabelRow};
use ffc_core::flowgraph::{build_graph, to_dot, to_interchange};
use ffc_core::minij::parse_source;
use ffc_core::stats::{self, is_table1_header};

mod report;

use report::{ClassifyOutput, Paint};

#[derive(Parser)]
#[command(name = "ffc", version, about = "Flow-graph fault classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a MiniJ source file
    Parse {
        file: PathBuf,
        /// Print the syntax tree as JSON
        #[arg(long)]
        emit_ast: bool,
    },
    /// Build the flow graph of one method
    Graph {
        file: PathBuf,
        /// Method to lower; may be omitted when the file has only one
        #[arg(long)]
        method: Option<String>,
        #[arg(long, conflicts_with = "interchange")]
        dot: bool,
        /// Interchange JSON (the default)
        #[arg(long)]
        interchange: bool,
    },
    /// Classify every entry of a manifest
    Classify {
        #[arg(long)]
        manifest: PathBuf,
        /// Include node alignment and edge diff in JSON records
        #[arg(long)]
        emit_alignment: bool,
        #[command(flatten)]
        jobs: Jobs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Class frequencies or classes-per-fault distribution of a label file
    Stats {
        #[command(flatten)]
        labels: Labels,
        /// Frequency table (the default)
        #[arg(long, conflicts_with = "distribution")]
        table1: bool,
        #[arg(long)]
        distribution: bool,
        #[arg(long)]
        by_project: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Class co-occurrence matrix of a label file
    Cooccur {
        #[command(flatten)]
        labels: Labels,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare classifier output with reference labels
    Compare {
        #[arg(long)]
        manifest: PathBuf,
        #[command(flatten)]
        labels: Labels,
        #[command(flatten)]
        jobs: Jobs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args)]
struct Labels {
    #[arg(long)]
    labels: PathBuf,
    /// JSON object mapping label columns to the file's column names
    #[arg(long)]
    columns: Option<PathBuf>,
}

#[derive(Args)]
struct Jobs {
    /// Worker threads for classification (output order does not depend on it)
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<ExitCode> {
    match command {
        Command::Parse { file, emit_ast } => {
            let program = parse_file(&file)?;
            if emit_ast {
                writeln!(out, "{}", serde_json::to_string_pretty(&program)?)?;
            } else {
                for m in &program.methods {
                    writeln!(
                        out,
                        "{}\t{} params\tline {}",
                        m.name,
                        m.params.len(),
                        m.line
                    )?;
                }
            }
        }
        Command::Graph {
            file,
            method,
            dot,
            interchange: _,
        } => {
            let program = parse_file(&file)?;
            let method = match method {
                Some(m) => m,
                None if program.methods.len() == 1 => program.methods[0].name.clone(),
                None => bail!("{}: several methods, pass --method", file.display()),
            };
            let built =
                build_graph(&program, &method).with_context(|| file.display().to_string())?;
            let params: Vec<&str> = program
                .methods
                .iter()
                .find(|m| m.name == method)
                .map(|m| m.params.iter().map(|p| p.name.as_str()).collect())
                .unwrap_or_default();
            for u in built
                .undefined_uses
                .iter()
                .filter(|u| !params.contains(&u.var.as_str()))
            {
                eprintln!(
                    "note: {}: node {} reads `{}` with no definition; assumed defined at entry",
                    file.display(),
                    u.node,
                    u.var.as_str()
                );
            }
            if dot {
                write!(out, "{}", to_dot(&built.graph))?;
            } else {
                writeln!(out, "{}", to_interchange(&built.graph))?;
            }
        }
        Command::Classify {
            manifest,
            emit_alignment,
            jobs,
            format,
        } => {
            let entries = load_manifest(&manifest)?;
            let results = analyze_all(&entries, jobs.jobs)?;
            let mut failed = false;
            let mut outputs = Vec::new();
            for (entry, result) in &results {
                match result {
                    Ok(a) => outputs.push(ClassifyOutput::new(entry, a, emit_alignment)),
                    Err(e) => {
                        failed = true;
                        eprintln!("error: {}: {e}", entry.id);
                    }
                }
            }
            report::write_classifications(out, &outputs, format, Paint::from_env())?;
            if failed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Stats {
            labels,
            table1: _,
            distribution,
            by_project,
            format,
        } => {
            let text = std::fs::read_to_string(&labels.labels)
                .with_context(|| format!("cannot read {}", labels.labels.display()))?;
            let first = text.lines().next().unwrap_or("");
            let report = if is_table1_header(first) {
                if distribution {
                    bail!(
                        "{}: aggregate table has no per-fault rows for a distribution",
                        labels.labels.display()
                    );
                }
                let t = stats::read_table1(text.as_bytes())
                    .with_context(|| labels.labels.display().to_string())?;
                t.check_consistency()
                    .with_context(|| labels.labels.display().to_string())?;
                let mut table = t.to_frequency_table();
                if !by_project {
                    table.projects.clear();
                }
                render(format, table.to_csv(), || table.to_text())?
            } else {
                let rows = read_labels(&labels, &text)?;
                if distribution {
                    let d = stats::distribution(&rows, by_project)?;
                    render(format, d.to_csv(), || d.to_text())?
                } else {
                    let t = stats::frequencies(&rows, by_project)?;
                    render(format, t.to_csv(), || t.to_text())?
                }
            };
            write!(out, "{report}")?;
        }
        Command::Cooccur { labels, format } => {
            let text = std::fs::read_to_string(&labels.labels)
                .with_context(|| format!("cannot read {}", labels.labels.display()))?;
            let m = stats::cooccurrence(&read_labels(&labels, &text)?);
            write!(out, "{}", render(format, m.to_csv(), || m.to_text())?)?;
        }
        Command::Compare {
            manifest,
            labels,
            jobs,
            format,
        } => {
            let entries = load_manifest(&manifest)?;
            let text = std::fs::read_to_string(&labels.labels)
                .with_context(|| format!("cannot read {}", labels.labels.display()))?;
            let reference = read_labels(&labels, &text)?;
            let results = classify_all(&entries, jobs.jobs)?;
            let r =
                dataset::AgreementReport::from_outcomes(entries.iter().zip(results), &reference);
            match format {
                Format::Csv => write!(out, "{}", r.to_csv())?,
                Format::Text => write!(out, "{}", report::agreement_text(&r, Paint::from_env()))?,
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn render(format: Format, csv: String, text: impl FnOnce() -> String) -> Result<String> {
    match format {
        Format::Csv => Ok(csv),
        Format::Text => Ok(text()),
        Format::Json => bail!("JSON output is only available for classify and compare"),
    }
}

fn parse_file(path: &Path) -> Result<ffc_core::minij::Program> {
    let src =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_source(&src).with_context(|| path.display().to_string())
}

fn load_manifest(path: &Path) -> Result<Vec<FaultEntry>> {
    let mut entries = dataset::load_manifest(path)?;
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(entries)
}

fn read_labels(labels: &Labels, text: &str) -> Result<Vec<LabelRow>> {
    let map = match &labels.columns {
        Some(p) => ColumnMap::load(p).with_context(|| p.display().to_string())?,
        None => ColumnMap::default(),
    };
    dataset::read_labels_with(text.as_bytes(), &map)
        .with_context(|| labels.labels.display().to_string())
}

fn pool(jobs: u16) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(jobs as usize)
        .build()?)
}

type Analyzed<'a> = Vec<(&'a FaultEntry, Result<dataset::EntryAnalysis, EntryError>)>;

fn analyze_all(entries: &[FaultEntry], jobs: u16) -> Result<Analyzed<'_>> {
    // par_iter().collect() keeps input order whatever the thread count
    Ok(pool(jobs)?.install(|| entries.par_iter().map(|e| (e, e.analyze())).collect()))
}

fn classify_all(
    entries: &[FaultEntry],
    jobs: u16,
) -> Result<Vec<Result<ffc_core::classifier::FaultClassSet, EntryError>>> {
    Ok(pool(jobs)?.install(|| entries.par_iter().map(|e| e.classify()).collect()))
}
