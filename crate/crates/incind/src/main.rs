use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use incind::{parse_derivation, parse_problem, serialize_derivation, serialize_team};
use incind_core::atoms::{normalize_atom, Problem};
use incind_core::{
    check_derivation, decide, ChaseBounds, DecideConfig, DisproofSource, SearchBudget, Verdict,
};

const PROVED: u8 = 0;
const DISPROVED: u8 = 1;
const UNKNOWN: u8 = 2;
const INPUT_ERROR: u8 = 3;
const INTERNAL_ERROR: u8 = 4;

/// Decides implication between independence, inclusion and dependence atoms.
///
/// Exit status: 0 proved, 1 disproved, 2 unknown, 3 input error,
/// 4 internal error or rejected proof.
#[derive(Debug, Parser)]
#[command(name = "incind", version)]
struct Cli {
    /// Problem file; standard input if omitted.
    file: Option<PathBuf>,
    /// Chase levels to build per goal conjunct.
    #[arg(long, default_value_t = ChaseBounds::default().max_depth)]
    max_depth: u32,
    /// Vertex cap per chase graph.
    #[arg(long, default_value_t = ChaseBounds::default().max_vertices)]
    max_vertices: usize,
    /// Largest team size tried by the counterexample search.
    #[arg(long, default_value_t = SearchBudget::default().max_rows)]
    search_rows: usize,
    /// Largest number of distinct values per searched team.
    #[arg(long, default_value_t = SearchBudget::default().max_values)]
    search_values: usize,
    /// Write the derivation here when the goal is proved.
    #[arg(long, value_name = "PATH")]
    emit_proof: Option<PathBuf>,
    /// Write the counterexample team here when the goal is disproved.
    #[arg(long, value_name = "PATH")]
    emit_team: Option<PathBuf>,
    /// Check the derivation in PATH against the problem instead of deciding.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["emit_proof", "emit_team"])]
    check_proof: Option<PathBuf>,
    /// Print nothing on standard output.
    #[arg(long)]
    quiet: bool,
}

struct Failure(u8, String);

fn read_input(file: Option<&Path>) -> Result<String, Failure> {
    let mut text = String::new();
    let read = match file {
        Some(path) => std::fs::read_to_string(path).map(|t| text = t),
        None => std::io::stdin().read_to_string(&mut text).map(drop),
    };
    read.map_err(|e| {
        let name = file.map_or("standard input".into(), |p| p.display().to_string());
        Failure(INPUT_ERROR, format!("cannot read {name}: {e}"))
    })?;
    Ok(text)
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure(INPUT_ERROR, format!("cannot write {}: {e}", path.display())))
}

/// Comment lines relating each original atom to its normal form.
fn mapping(p: &Problem) -> String {
    let mut out = String::new();
    let mut line = |role: &str, atom| {
        let parts: Vec<String> = normalize_atom(atom).iter().map(ToString::to_string).collect();
        let parts = if parts.is_empty() {
            "nothing".to_string()
        } else {
            parts.join(" & ")
        };
        out.push_str(&format!("# {role} {atom} normalizes to {parts}\n"));
    };
    for a in &p.assumptions {
        line("assumption", a);
    }
    line("goal", &p.goal);
    out
}

fn check_proof(p: &Problem, path: &Path, quiet: bool) -> Result<u8, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(INPUT_ERROR, format!("cannot read {}: {e}", path.display())))?;
    let d = parse_derivation(&text, p)
        .map_err(|e| Failure(INTERNAL_ERROR, format!("{}: {e}", path.display())))?;
    check_derivation(&d).map_err(|e| Failure(INTERNAL_ERROR, format!("proof rejected: {e}")))?;
    if !quiet {
        println!("proof accepted ({} steps)", d.steps.len());
    }
    Ok(PROVED)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let text = read_input(cli.file.as_deref())?;
    let problem = parse_problem(&text).map_err(|e| Failure(INPUT_ERROR, e.to_string()))?;
    if let Some(path) = &cli.check_proof {
        return check_proof(&problem, path, cli.quiet);
    }
    let config = DecideConfig {
        chase: ChaseBounds {
            max_depth: cli.max_depth,
            max_vertices: cli.max_vertices,
        },
        search: SearchBudget {
            max_rows: cli.search_rows,
            max_values: cli.search_values,
        },
    };
    let verdict =
        decide(&problem, &config).map_err(|e| Failure(INTERNAL_ERROR, e.to_string()))?;
    match verdict {
        Verdict::Proved { derivation, depth } => {
            if let Some(path) = &cli.emit_proof {
                let text = mapping(&problem) + &serialize_derivation(&derivation);
                write_output(path, &text)?;
            }
            if !cli.quiet {
                println!(
                    "proved at chase depth {depth} ({} steps)",
                    derivation.steps.len()
                );
            }
            Ok(PROVED)
        }
        Verdict::Disproved { team, source } => {
            let text = serialize_team(&team);
            if let Some(path) = &cli.emit_team {
                write_output(path, &text)?;
            }
            if !cli.quiet {
                let how = match source {
                    DisproofSource::Saturation => "saturation",
                    DisproofSource::Search => "search",
                };
                println!("disproved by {how}; counterexample:");
                println!("{}", text.trim_end());
            }
            Ok(DISPROVED)
        }
        Verdict::Unknown {
            depth,
            vertices,
            search_rows,
        } => {
            if !cli.quiet {
                println!(
                    "unknown: chase depth {depth}, {vertices} vertices, teams up to {search_rows} rows"
                );
            }
            Ok(UNKNOWN)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { PROVED };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("incind: {message}");
            ExitCode::from(code)
        }
    }
}
