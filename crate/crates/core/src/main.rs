use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use cutperm::io::{emit_trace, parse_document, parse_formula, print_document, ParseError};
use cutperm::kernel::generate_proof;
use cutperm::maximal::{eliminate_cuts, maximality_report, maximalize, reduce_degree};
use cutperm::mix::{reconstruct_monotomic, reconstruct_polytomic, reconstruction_stats, MixApp};
use cutperm::session::DEFAULT_MAX_STEPS;
use cutperm::wnorm::w_normalize;
use cutperm::zucker::{eliminate_cut_z, to_zucker};
use cutperm::{EngineError, Proof, Session};

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: Box<ParseError> },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(EngineError::Budget(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cutperm", version, about = "Cut elimination by permuting cut with contraction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Write the step trace to this file.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Emit trace records as JSON objects, one per line.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: u64,
    /// Write the resulting proof here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Style {
    Poly,
    Mono,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a proof and print its endsequent.
    Check { file: PathBuf },
    /// Print the rank of every cut.
    Rank { file: PathBuf },
    /// W-normalize.
    Wnormal { file: PathBuf },
    /// Make every cut of a W-normal proof maximal.
    Maximalize { file: PathBuf },
    /// Lower the degree of a maximalized proof.
    ReduceDegree { file: PathBuf },
    /// Full elimination: W-normalize, maximalize, reduce, repeat.
    Eliminate { file: PathBuf },
    /// Direct elimination on contraction indices (implication-free proofs).
    Zucker { file: PathBuf },
    /// Reconstruct a mix of two proofs with cuts.
    Mix {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Style::Poly)]
        style: Style,
        /// Print rule counts instead of the proof.
        #[arg(long)]
        stats: bool,
    },
    /// Rule counts of a proof.
    Stats { file: PathBuf },
    /// Generate a random valid proof.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        no_imp: bool,
    },
}

fn read(path: &Path) -> Result<Proof, CliError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    Ok(parse_document(&text).map_err(|source| CliError::Parse { path: shown, source: Box::new(source) })?.proof)
}

fn write(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let c = &cli.common;
    let mut s = Session::new(c.max_steps);
    if c.trace.is_some() {
        s = s.recording();
    }
    let proof = |p: &Proof| print_document(p, None);
    let output = match &cli.command {
        Command::Check { file } => format!("{}\n", read(file)?.end()),
        Command::Rank { file } => {
            let p = read(file)?;
            let mut out = String::new();
            for cut in maximality_report(&p).cuts {
                let r = cut.rank;
                out.push_str(&format!(
                    "{}\tleft {}\tright {}\ttotal {}\t{}\n",
                    cut.path,
                    r.left,
                    r.right,
                    r.total,
                    if cut.maximal { "maximal" } else { "nonmaximal" }
                ));
            }
            out
        }
        Command::Wnormal { file } => {
            s.set_phase("P1");
            proof(&w_normalize(&read(file)?, &mut s)?)
        }
        Command::Maximalize { file } => {
            s.set_phase("P2");
            proof(&maximalize(&read(file)?, &mut s)?)
        }
        Command::ReduceDegree { file } => {
            s.set_phase("P3");
            proof(&reduce_degree(&read(file)?, &mut s)?)
        }
        Command::Eliminate { file } => {
            let (out, phases) = eliminate_cuts(&read(file)?, &mut s)?;
            for r in &phases {
                eprintln!("{}\t{}\t{}\tnodes {}\tcuts {}\tdegree {}", r.phase, r.label, r.endsequent, r.nodes, r.cuts, r.degree);
            }
            proof(&out)
        }
        Command::Zucker { file } => {
            let z = to_zucker(&read(file)?)?;
            let out = eliminate_cut_z(&z, &mut s)?;
            eprintln!("{z}\n{out}");
            proof(out.proof())
        }
        Command::Mix { left, right, formula, style, stats } => {
            let f = parse_formula(formula).map_err(|source| CliError::Parse { path: "--formula".into(), source: Box::new(source) })?;
            let m = MixApp::new(read(left)?, read(right)?, f)?;
            let p = match style {
                Style::Poly => reconstruct_polytomic(&m)?,
                Style::Mono => reconstruct_monotomic(&m)?,
            };
            if *stats {
                let st = reconstruction_stats(&p);
                format!("cuts {}\tw {}\tc {}\tk {}\tnodes {}\n", st.cuts, st.w, st.c, st.k, st.nodes)
            } else {
                proof(&p)
            }
        }
        Command::Stats { file } => {
            let st = reconstruction_stats(&read(file)?);
            format!("cuts {}\tw {}\tc {}\tk {}\tnodes {}\n", st.cuts, st.w, st.c, st.k, st.nodes)
        }
        Command::Gen { seed, budget, no_imp } => {
            proof(&generate_proof(*seed, *budget, &["p", "q", "r"], !no_imp))
        }
    };
    if let Some(t) = &c.trace {
        let text = emit_trace(s.trace(), c.json);
        fs::write(t, text).map_err(|source| CliError::Io { path: t.display().to_string(), source })?;
    }
    write(&c.out, &output)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
