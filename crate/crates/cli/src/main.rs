//! Command-line front end: split decomposition, Buneman complexes,
//! tight-span assembly, and oracle verification over the text formats
//! described in the README.
//!
//! Exit codes: 0 on success, 1 when verification finds a mismatch, 2 on
//! invalid input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tightspan::buneman::BunemanComplex;
use tightspan::export;
use tightspan::metric::{decompose, parse_matrix, synthesize, FiniteMetric};
use tightspan::oracle::{compare, OracleOptions};
use tightspan::splits::{parse_splits, WeightedSplitSystem};
use tightspan::tightspan::assemble;

#[derive(Parser)]
#[command(
    name = "tightspan",
    version,
    about = "Exact tight spans of totally split-decomposable metrics"
)]
struct Cli {
    /// Print progress and timing to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Matrix,
    Splits,
}

#[derive(Subcommand)]
enum Command {
    /// Split-decompose a distance matrix into a weighted split system.
    Decompose {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Add decimal approximations with this many digits to JSON output.
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Build the Buneman complex of a split system (or of a metric's
    /// decomposition).
    Buneman {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Assemble the tight span as a polytopal complex.
    Tightspan {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Report weak compatibility and the component classification.
    Check {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Assemble the tight span and verify it against the polyhedral oracle.
    Verify {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Maximum number of taxa the oracle will accept.
        #[arg(long, default_value_t = 8)]
        oracle_cap: usize,
        /// Drop one edge before comparing (negative-control test hook).
        #[arg(long, hide = true)]
        corrupt: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let verbose = cli.verbose > 0;
    match cli.command {
        Command::Decompose {
            input,
            output,
            format,
            decimal,
        } => cmd_decompose(&input, output.as_deref(), format, decimal),
        Command::Buneman {
            input,
            output,
            format,
            kind,
        } => cmd_buneman(&input, output.as_deref(), format, kind, verbose),
        Command::Tightspan {
            input,
            output,
            format,
            kind,
            decimal,
        } => cmd_tightspan(&input, output.as_deref(), format, kind, decimal, verbose),
        Command::Check {
            input,
            output,
            format,
            kind,
        } => cmd_check(&input, output.as_deref(), format, kind),
        Command::Verify {
            input,
            output,
            format,
            kind,
            oracle_cap,
            corrupt,
        } => cmd_verify(
            &input,
            output.as_deref(),
            format,
            kind,
            oracle_cap,
            corrupt,
            verbose,
        ),
    }
}

enum Input {
    Matrix(FiniteMetric),
    Splits(WeightedSplitSystem),
}

/// Read the input file, inferring its kind from the body unless overridden:
/// after the `taxa:` header, split lines contain a `:` separator while
/// matrix rows are bare numbers.
fn load_input(path: &Path, kind: Option<Kind>) -> Result<Input> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read `{}`", path.display()))?;
    let kind = match kind {
        Some(k) => k,
        None => detect_kind(&text)?,
    };
    match kind {
        Kind::Matrix => Ok(Input::Matrix(parse_matrix(&text)?)),
        Kind::Splits => Ok(Input::Splits(parse_splits(&text)?)),
    }
}

fn detect_kind(text: &str) -> Result<Kind> {
    let mut after_header = false;
    for raw in text.lines() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with("taxa:") {
            after_header = true;
            continue;
        }
        if after_header {
            return Ok(if content.contains(':') {
                Kind::Splits
            } else {
                Kind::Matrix
            });
        }
    }
    if after_header {
        // A header with no data lines: an empty split system.
        return Ok(Kind::Splits);
    }
    bail!("cannot detect input kind: no `taxa:` header found")
}

/// Obtain a weakly usable split system plus the metric to verify against.
/// Matrix inputs are decomposed first and must be totally
/// split-decomposable.
fn system_of(input: Input) -> Result<(WeightedSplitSystem, FiniteMetric)> {
    match input {
        Input::Splits(sys) => {
            let d = synthesize(&sys);
            Ok((sys, d))
        }
        Input::Matrix(d) => {
            let result = decompose(&d)?;
            if !result.totally_split_decomposable {
                bail!(
                    "metric is not totally split-decomposable: the split-prime residual is nonzero"
                );
            }
            Ok((result.system, d))
        }
    }
}

fn write_out(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("cannot write `{}`", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn classification_lines(sys: &WeightedSplitSystem) -> Result<Vec<String>> {
    let graph = sys.incompatibility_graph();
    let mut lines = vec![format!("components: {}", graph.components().len())];
    for (i, comp) in graph.components().iter().enumerate() {
        let class = sys.classify_component(comp)?;
        let ids: Vec<String> = comp.iter().map(|s| s.to_string()).collect();
        lines.push(format!(
            "component {i}: {} (splits {})",
            class.name(),
            ids.join(",")
        ));
    }
    let oct = sys.oct_subsystems()?;
    lines.push(format!("octahedral subsystems: {}", oct.len()));
    Ok(lines)
}

fn cmd_decompose(
    input: &Path,
    output: Option<&Path>,
    format: Format,
    decimal: Option<usize>,
) -> Result<ExitCode> {
    let text = fs::read_to_string(input)
        .with_context(|| format!("cannot read `{}`", input.display()))?;
    let d = parse_matrix(&text)?;
    let result = decompose(&d)?;
    let content = match format {
        Format::Dot => bail!("format `dot` does not apply to decompose"),
        Format::Json => {
            let mut v = export::decomposition_json(&result, decimal);
            if result.system_weakly_compatible {
                let lines = classification_lines(&result.system)?;
                v.as_object_mut()
                    .unwrap()
                    .insert("classification".into(), serde_json::json!(lines));
            }
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "# totally split-decomposable: {}\n",
                if result.totally_split_decomposable {
                    "yes"
                } else {
                    "no"
                }
            ));
            out.push_str(&format!(
                "# weakly compatible: {}\n",
                if result.system_weakly_compatible {
                    "yes"
                } else {
                    "no"
                }
            ));
            if result.system_weakly_compatible {
                for line in classification_lines(&result.system)? {
                    out.push_str(&format!("# {line}\n"));
                }
            }
            if !result.totally_split_decomposable {
                out.push_str("# residual matrix (split-prime part):\n");
                let n = d.n();
                for x in 0..n {
                    let row: Vec<String> = (0..n)
                        .map(|y| {
                            tightspan::rational::format_rational(&result.residual[x * n + y])
                        })
                        .collect();
                    out.push_str(&format!("#   {}\n", row.join(" ")));
                }
            }
            out.push_str(&result.system.to_string());
            out
        }
    };
    write_out(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_buneman(
    input: &Path,
    output: Option<&Path>,
    format: Format,
    kind: Option<Kind>,
    verbose: bool,
) -> Result<ExitCode> {
    let (sys, _) = system_of(load_input(input, kind)?)?;
    sys.require_weakly_compatible()?;
    let t0 = Instant::now();
    let complex = BunemanComplex::build(&sys)?;
    if verbose {
        eprintln!("buneman complex built in {:.2?}", t0.elapsed());
    }
    let content = match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&export::buneman_json(&complex))?
        ),
        Format::Dot => export::buneman_dot(&complex),
        Format::Text => {
            let mut per_dim: Vec<String> = Vec::new();
            for d in 0..=complex.max_dim() {
                let c = complex.cells_of_dim(d).len();
                per_dim.push(match d {
                    0 => format!("{c}V"),
                    1 => format!("{c}E"),
                    2 => format!("{c}F"),
                    _ => format!("{c}C{d}"),
                });
            }
            let mut out = format!("summary: {}\n", per_dim.join("/"));
            out.push_str(&format!("blocks: {}\n", complex.blocks().len()));
            for (i, b) in complex.blocks().iter().enumerate() {
                let class = complex.component_classes()[b.component].name();
                let ids: Vec<String> =
                    tightspan::splits::TaxonSet(b.splits).iter().map(|s| s.to_string()).collect();
                out.push_str(&format!(
                    "block {i}: {class} (splits {}), {} vertices, {} cells\n",
                    ids.join(","),
                    b.vertices.len(),
                    b.cells.len()
                ));
            }
            let cuts = complex.cut_vertices();
            if cuts.is_empty() {
                out.push_str("cut vertices: none\n");
            } else {
                let ids: Vec<String> = cuts.iter().map(|v| v.to_string()).collect();
                out.push_str(&format!("cut vertices: {}\n", ids.join(",")));
            }
            out
        }
    };
    write_out(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_tightspan(
    input: &Path,
    output: Option<&Path>,
    format: Format,
    kind: Option<Kind>,
    decimal: Option<usize>,
    verbose: bool,
) -> Result<ExitCode> {
    let (sys, _) = system_of(load_input(input, kind)?)?;
    let t0 = Instant::now();
    let assembly = assemble(&sys)?;
    if verbose {
        eprintln!("tight span assembled in {:.2?}", t0.elapsed());
    }
    let complex = &assembly.complex;
    let content = match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&export::tightspan_json(complex, decimal))?
        ),
        Format::Dot => export::tightspan_dot(complex),
        Format::Text => {
            let summaries = complex.block_summaries();
            let plural = if summaries.len() == 1 { "block" } else { "blocks" };
            let mut out = format!(
                "{} {plural}: {}\n",
                summaries.len(),
                summaries.join(", ")
            );
            out.push_str(&format!(
                "vertices: {}\nedges: {}\n",
                complex.vertex_count(),
                complex.edges().len()
            ));
            let cuts = complex.cut_vertices();
            if cuts.is_empty() {
                out.push_str("cut vertices: none\n");
            } else {
                let ids: Vec<String> = cuts.iter().map(|v| v.to_string()).collect();
                out.push_str(&format!("cut vertices: {}\n", ids.join(",")));
            }
            out
        }
    };
    write_out(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(
    input: &Path,
    output: Option<&Path>,
    format: Format,
    kind: Option<Kind>,
) -> Result<ExitCode> {
    let sys = match load_input(input, kind)? {
        Input::Splits(sys) => sys,
        Input::Matrix(d) => decompose(&d)?.system,
    };
    let weakly = sys.is_weakly_compatible();
    let content = match format {
        Format::Dot => bail!("format `dot` does not apply to check"),
        Format::Json => {
            let mut v = export::system_json(&sys);
            let obj = v.as_object_mut().unwrap();
            obj.insert("weakly_compatible".into(), serde_json::json!(weakly));
            if weakly {
                obj.insert(
                    "classification".into(),
                    serde_json::json!(classification_lines(&sys)?),
                );
            } else if let Some(violation) = sys.weak_compatibility_violation() {
                obj.insert(
                    "violation".into(),
                    serde_json::json!({
                        "splits": violation.splits,
                        "taxa": violation.taxa.map(|t| sys.ground().label(t).to_string()),
                    }),
                );
            }
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        Format::Text => {
            let mut out = format!(
                "weakly compatible: {}\n",
                if weakly { "yes" } else { "no" }
            );
            if weakly {
                for line in classification_lines(&sys)? {
                    out.push_str(&line);
                    out.push('\n');
                }
            } else if let Some(violation) = sys.weak_compatibility_violation() {
                let splits: Vec<String> =
                    violation.splits.iter().map(|s| s.to_string()).collect();
                let taxa: Vec<String> = violation
                    .taxa
                    .iter()
                    .map(|&t| sys.ground().label(t).to_string())
                    .collect();
                out.push_str(&format!("violating splits: {}\n", splits.join(",")));
                out.push_str(&format!("violating taxa: {}\n", taxa.join(",")));
            }
            out
        }
    };
    write_out(output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    input: &Path,
    output: Option<&Path>,
    format: Format,
    kind: Option<Kind>,
    oracle_cap: usize,
    corrupt: bool,
    verbose: bool,
) -> Result<ExitCode> {
    let (sys, d) = system_of(load_input(input, kind)?)?;
    let t0 = Instant::now();
    let assembly = assemble(&sys)?;
    let mut complex = assembly.complex;
    if corrupt {
        complex.corrupt_drop_last_edge();
    }
    let report = compare(&complex, &d, &OracleOptions { cap: oracle_cap })?;
    if verbose {
        eprintln!("assembly + oracle comparison took {:.2?}", t0.elapsed());
    }
    let content = match format {
        Format::Dot => bail!("format `dot` does not apply to verify"),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&export::report_json(&report))?
        ),
        Format::Text => {
            let yn = |b: bool| if b { "yes" } else { "no" };
            let mut out = String::new();
            out.push_str(&format!(
                "vertices match: {} (oracle {}, structural {})\n",
                yn(report.vertices_match),
                report.oracle_vertex_count,
                report.structural_vertex_count
            ));
            out.push_str(&format!(
                "edges match: {} (oracle {}, structural {})\n",
                yn(report.edges_match),
                report.oracle_edge_count,
                report.structural_edge_count
            ));
            out.push_str(&format!(
                "block count: oracle {}, structural {}\n",
                report.oracle_block_count, report.structural_block_count
            ));
            let passed = report.cell_checks.iter().filter(|c| c.pass).count();
            out.push_str(&format!(
                "cell checks: {passed}/{} passed\n",
                report.cell_checks.len()
            ));
            for m in &report.mismatches {
                out.push_str(&format!("mismatch: {m}\n"));
            }
            out.push_str(&format!(
                "verification: {}\n",
                if report.passed() { "PASS" } else { "FAIL" }
            ));
            out
        }
    };
    write_out(output, &content)?;
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
