//! Argument parsing and subcommand execution.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use cpc_core::analysis::{distance_with, monte_carlo, DistanceReport, LookupDecoder, MAX_DISTANCE_WEIGHT};
use cpc_core::builder::{search_cross_checks, DesignSession, DEFAULT_SEARCH_BUDGET};
use cpc_core::dot::{factor_graph_dot, operational_dot};
use cpc_core::reference;
use cpc_core::translation::translate;
use cpc_core::Execution;

use crate::bundle::CodeBundle;
use crate::error::{CliError, CliResult};
use crate::input;

/// Environment variable holding the default `serve` port.
pub const PORT_ENV: &str = "CPC_PORT";

#[derive(Debug, Parser)]
#[command(name = "cpc", version, about = "Design and analyse parity-check quantum codes", arg_required_else_help = true)]
pub struct Cli {
    /// Run data-parallel loops on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Combine a bit-flip and a phase-flip classical code into a bundle.
    Build {
        /// Bit-flip code: JSON file or built-in name.
        #[arg(long, required_unless_present = "reference")]
        bit: Option<String>,
        /// Phase-flip code: JSON file or built-in name.
        #[arg(long, required_unless_present = "reference")]
        phase: Option<String>,
        /// Start from a reference code instead (4-2-1, 4-2-2, 10-4-1, 10-4-3).
        #[arg(long, conflicts_with_all = ["bit", "phase"])]
        reference: Option<String>,
        /// Cross-checks to add, as parity pairs numbered from 1: `1-2,3-4`.
        #[arg(long, value_delimiter = ',')]
        cross: Vec<String>,
        #[arg(long)]
        name: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Add virtual edges to a bare graph.
    Annotate {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the classical factor graph of a bundle or graph.
    Translate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = TranslateFormat::Text)]
        format: TranslateFormat,
    },
    /// Print stabilizers as Pauli strings.
    Stabilizers {
        bundle: PathBuf,
        /// Print `G_X|G_Z` rows instead.
        #[arg(long)]
        binary: bool,
    },
    /// Print the single-qubit syndrome table.
    Syndromes {
        bundle: PathBuf,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
    },
    /// Brute-force code distance.
    Distance {
        bundle: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// Monte Carlo logical failure rate under depolarizing noise.
    Montecarlo {
        bundle: PathBuf,
        /// Physical error rates, comma separated for a sweep.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for cross-checks reaching a target distance.
    Search {
        bundle: PathBuf,
        #[arg(long)]
        target_d: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: usize,
        /// Write the bundle with the found cross-checks applied.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Graphviz export.
    ExportDot {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DotView::Operational)]
        view: DotView,
    },
    /// Serve the HTTP/JSON design API.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, env = PORT_ENV, default_value_t = 8080)]
        port: u16,
        /// Save all sessions to this file after every change, and load it at start.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TranslateFormat {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DotView {
    Operational,
    Factor,
}

/// Runs the CLI and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::io("stdout", e))
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p.display(), e)),
        None => emit(out, text),
    }
}

fn parse_pair(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("cross-check {s:?} should look like 1-2"));
    let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
    let a: usize = a.trim().trim_start_matches(['p', 'P']).parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches(['p', 'P']).parse().map_err(|_| bad())?;
    if a == 0 || b == 0 {
        return Err(bad());
    }
    Ok((a - 1, b - 1))
}

fn format_pairs(pairs: &[(usize, usize)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("{}-{}", a + 1, b + 1))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Build {
            bit,
            phase,
            reference: reference_name,
            cross,
            name,
            output,
        } => {
            let mut session = match reference_name {
                Some(r) => reference::by_name(&r).map_err(|e| CliError::Usage(e.to_string()))?,
                None => {
                    let bit = input::classical_code(bit.as_deref().expect("required by clap"))?;
                    let phase = input::classical_code(phase.as_deref().expect("required by clap"))?;
                    DesignSession::combine(&bit, &phase)?
                }
            };
            let pairs = cross.iter().map(|s| parse_pair(s)).collect::<CliResult<Vec<_>>>()?;
            session.apply_cross_checks(&pairs)?;
            let mut bundle = CodeBundle::from_session(&session)?;
            if let Some(name) = name {
                bundle.name = name;
            }
            write_or_print(output.as_deref(), &(bundle.to_json() + "\n"), out)
        }
        Command::Annotate { input: path, output } => {
            let (graph, _) = input::graph_input(&path)?;
            let annotated = if graph.is_annotated() { graph } else { graph.annotate()? };
            let text = serde_json::to_string_pretty(&annotated).expect("graph serializes") + "\n";
            write_or_print(output.as_deref(), &text, out)
        }
        Command::Translate { input: path, format } => {
            let (graph, _) = input::graph_input(&path)?;
            let graph = if graph.is_annotated() { graph } else { graph.annotate()? };
            let f = translate(&graph)?;
            let text = match format {
                TranslateFormat::Json => serde_json::to_string_pretty(&f).expect("serializes") + "\n",
                TranslateFormat::Dot => factor_graph_dot(&f),
                TranslateFormat::Text => {
                    let mut text = String::new();
                    for c in 0..f.h().rows() {
                        let vars: Vec<String> = f.h().row(c).ones().map(|v| f.variables()[v].to_string()).collect();
                        text += &format!("c{}: {}\n", c + 1, vars.join(" "));
                    }
                    let loose: Vec<String> = f.unconnected_variables().iter().map(|v| v.to_string()).collect();
                    if !loose.is_empty() {
                        text += &format!("unconnected: {}\n", loose.join(" "));
                    }
                    text
                }
            };
            emit(out, &text)
        }
        Command::Stabilizers { bundle, binary } => {
            let b = CodeBundle::load(&bundle)?;
            let lines = if binary {
                (0..b.g_xz.m()).map(|i| b.g_xz.row_string(i)).collect()
            } else {
                b.g_xz.pauli_strings(&b.graph.labels())?
            };
            emit(out, &(lines.join("\n") + "\n"))
        }
        Command::Syndromes { bundle, format } => {
            let b = CodeBundle::load(&bundle)?;
            let text = match format {
                TableFormat::Table => b.syndromes.to_text(Some(&b.tags)),
                TableFormat::Json => serde_json::to_string_pretty(&b.syndromes).expect("serializes") + "\n",
            };
            emit(out, &text)
        }
        Command::Distance { bundle, max_weight } => {
            if max_weight > MAX_DISTANCE_WEIGHT {
                return Err(CliError::Usage(format!(
                    "--max-weight is at most {MAX_DISTANCE_WEIGHT}"
                )));
            }
            let b = CodeBundle::load(&bundle)?;
            let d = distance_with(&b.g_xz, max_weight, exec)?;
            let mut text = format!("distance {d}\n");
            if let DistanceReport::Exact { witness, .. } = &d {
                text += &format!("witness {}\n", witness.render(&b.graph.labels()));
            }
            emit(out, &text)
        }
        Command::Montecarlo {
            bundle,
            p,
            shots,
            seed,
            out: csv_path,
        } => {
            let b = CodeBundle::load(&bundle)?;
            let decoder = LookupDecoder::build(&b.g_xz)?;
            let mut writer = csv::Writer::from_writer(Vec::new());
            for rate in p {
                let r = monte_carlo(&b.g_xz, &decoder, rate, shots, seed, exec)?;
                writer.serialize(&r).map_err(|e| CliError::Data(e.to_string()))?;
            }
            let bytes = writer.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
            let text = String::from_utf8(bytes).expect("csv is utf-8");
            write_or_print(csv_path.as_deref(), &text, out)
        }
        Command::Search {
            bundle,
            target_d,
            budget,
            output,
        } => {
            let b = CodeBundle::load(&bundle)?;
            let session = b.session()?;
            let report = search_cross_checks(&session, target_d, budget, exec).map_err(|e| match e {
                cpc_core::Error::Range(msg) => CliError::Usage(msg),
                other => other.into(),
            })?;
            let status = if report.found { "found" } else { "not found" };
            let mut text = format!(
                "{status}: cross {} (distance {}, {} candidates)\n",
                if report.pairs.is_empty() { "-".to_string() } else { format_pairs(&report.pairs) },
                report.distance,
                report.examined
            );
            if !report.found && report.complete {
                text += "every candidate set was examined\n";
            }
            emit(out, &text)?;
            if let (true, Some(path)) = (report.found, output) {
                let mut session = session;
                session.apply_cross_checks(&report.pairs)?;
                let updated = CodeBundle::from_session(&session)?;
                write_or_print(Some(&path), &(updated.to_json() + "\n"), out)?;
            }
            if report.found {
                Ok(())
            } else {
                Err(CliError::Data(format!("no cross-check set reaches distance {target_d}")))
            }
        }
        Command::ExportDot { input: path, view } => {
            let (graph, _) = input::graph_input(&path)?;
            let text = match view {
                DotView::Operational => operational_dot(&graph),
                DotView::Factor => {
                    let graph = if graph.is_annotated() { graph } else { graph.annotate()? };
                    factor_graph_dot(&translate(&graph)?)
                }
            };
            emit(out, &text)
        }
        Command::Serve { host, port, snapshot } => {
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::io("tokio runtime", e))?;
            runtime.block_on(crate::service::serve(host, port, snapshot))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_parse() {
        assert_eq!(parse_pair("1-2").unwrap(), (0, 1));
        assert_eq!(parse_pair("p3-p6").unwrap(), (2, 5));
        assert!(parse_pair("0-1").is_err());
        assert!(parse_pair("12").is_err());
        assert_eq!(format_pairs(&[(0, 1), (2, 5)]), "1-2,3-6");
    }

    #[test]
    fn no_arguments_is_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["cpc"], &mut out, &mut err), 1);
        assert!(String::from_utf8(err).unwrap().contains("Usage"));
    }
}
