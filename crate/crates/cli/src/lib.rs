//! The `hksym` command line: argument parsing, dispatch and exit codes.

pub mod commands;
pub mod config;
pub mod paper_check;
pub mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;
use thiserror::Error;

use config::{Config, ConfigError, OutputFormat, Overrides};
use render::Document;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Domain(#[from] hksym_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) | CliError::Config(_) => 2,
        }
    }

    /// Snake-case name of the error variant.
    pub fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "usage".into(),
            CliError::Config(_) => "config".into(),
            CliError::Domain(e) => {
                let dbg = format!("{e:?}");
                let name: String = dbg.chars().take_while(|c| c.is_alphanumeric()).collect();
                let mut out = String::new();
                for (i, c) in name.chars().enumerate() {
                    if c.is_uppercase() && i > 0 {
                        out.push('_');
                    }
                    out.push(c.to_ascii_lowercase());
                }
                out
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
    }
}

fn parse_big(s: &str) -> Result<BigInt, String> {
    s.trim().parse().map_err(|_| format!("`{s}` is not an integer"))
}

fn parse_pair(s: &str) -> Result<(BigInt, BigInt), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("`{s}` is not of the form x,y"))?;
    Ok((parse_big(a)?, parse_big(b)?))
}

#[derive(Debug, Parser)]
#[command(name = "hksym", version, about = "Walls, Mori cones and isometries for K3^[n]-type lattices")]
pub struct Cli {
    /// Output format (json, markdown or csv)
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,
    /// Key-value config file (default: $HKSYM_CONFIG, then ./hksym.conf)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel searches
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Coordinate bound for representation and decomposition searches
    #[arg(long, global = true)]
    pub search_box: Option<u64>,
    /// Replace the ray-square window used by table searches
    #[arg(long, global = true, value_parser = parse_big, allow_hyphen_values = true)]
    pub window_override: Option<BigInt>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate wall types for a given v²
    Walls {
        #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
        vsq: BigInt,
    },
    /// Mori cone generators of S^[n] with Pic(S) = ℤf
    Mori {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_big)]
        fsq: BigInt,
    },
    /// Ampleness of the class x·f + y·δ
    Ample {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_big)]
        fsq: BigInt,
        /// x,y for the class x·f + y·δ (e.g. 3,-16)
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        div: (BigInt, BigInt),
    },
    /// Pairs (a, b) with small f²a² − 2(n−1)b² from the continued fraction
    Smalltable {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_big)]
        fsq: BigInt,
        /// Keep rows with |value| ≤ window (default |C|)
        #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
        window: Option<BigInt>,
        #[arg(long)]
        max_rows: Option<usize>,
    },
    /// Orbit invariants (ρ², dv, discriminant class) of the ray s·f − t·δ
    Orbit {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_big)]
        fsq: BigInt,
        /// s,t for the ray s·f − t·δ
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        rho: (BigInt, BigInt),
    },
    /// Find f² whose second Mori ray is s·f − t·δ with prescribed ρ²
    Design {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_big)]
        s: BigInt,
        #[arg(long = "rho-sq", value_parser = parse_big, allow_hyphen_values = true)]
        rho_sq: BigInt,
        #[arg(long = "t-residue", value_parser = parse_big, default_value = "0")]
        t_residue: BigInt,
        #[arg(long = "t-ceiling", value_parser = parse_big, default_value = "1000000")]
        t_ceiling: BigInt,
    },
    /// Reflection in g = x·f + y·δ on Pic(S^[n])
    Reflect {
        #[arg(long)]
        n: u64,
        #[arg(long, value_parser = parse_big)]
        fsq: BigInt,
        /// x,y for g = x·f + y·δ (e.g. 1,-1)
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        g: (BigInt, BigInt),
    },
    /// Transport a wall through a non-monodromy isometry of Λ₇
    Ambiguity {
        #[arg(long, default_value_t = 7)]
        n: u64,
    },
    /// Degrees f² ≤ ceiling where S^[3] has an ample class of square 2
    InvolutionSearch {
        #[arg(long, value_parser = parse_big)]
        ceiling: BigInt,
        /// Continued-fraction periods to scan
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Recompute all reference values and report mismatches
    PaperCheck {
        #[arg(long, default_value_t = paper_check::DEFAULT_SEED)]
        seed: u64,
    },
}

/// Exit code and text produced by one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn dispatch(cmd: &Command, cfg: &Config) -> Result<(Document, bool), CliError> {
    let doc = match cmd {
        Command::Walls { vsq } => commands::walls(vsq)?,
        Command::Mori { n, fsq } => commands::mori(*n, fsq)?,
        Command::Ample { n, fsq, div } => commands::ample(*n, fsq, &div.0, &-&div.1)?,
        Command::Smalltable { n, fsq, window, max_rows } => {
            commands::smalltable(*n, fsq, window.as_ref(), *max_rows, cfg)?
        }
        Command::Orbit { n, fsq, rho } => commands::orbit(*n, fsq, &rho.0, &rho.1)?,
        Command::Design { n, s, rho_sq, t_residue, t_ceiling } => {
            commands::design(*n, s, rho_sq, t_residue, t_ceiling)?
        }
        Command::Reflect { n, fsq, g } => commands::reflect(*n, fsq, &g.0, &-&g.1)?,
        Command::Ambiguity { n } => commands::ambiguity(*n)?,
        Command::InvolutionSearch { ceiling, depth } => commands::involution_search(ceiling, *depth)?,
        Command::PaperCheck { seed } => {
            let report = paper_check::run(cfg, *seed)?;
            let ok = report.all_match();
            let md = report.markdown();
            return Ok((Document::new(&report).with_markdown(md), ok));
        }
    };
    Ok((doc, true))
}

/// Run with explicit arguments and environment lookup; nothing is printed.
pub fn run_with<I, T>(args: I, env: impl Fn(&str) -> Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let flags = Overrides {
        search_box: cli.search_box,
        window_override: cli.window_override.clone(),
        output: cli.output,
        jobs: cli.jobs,
    };
    let result = Config::resolve(cli.config.as_deref(), env, &flags).map_err(CliError::from).and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", cfg.jobs)))?;
        let (doc, ok) = pool.install(|| dispatch(&cli.command, &cfg))?;
        let text = doc.render(cfg.output).ok_or_else(|| {
            CliError::Usage(format!("{} output is not available for this command", cfg.output))
        })?;
        Ok((text, ok))
    });
    match result {
        Ok((stdout, ok)) => Outcome { code: if ok { 0 } else { 1 }, stdout, stderr: String::new() },
        Err(e) => {
            let mut stdout = serde_json::to_string_pretty(&e.to_json()).expect("json");
            stdout.push('\n');
            Outcome { code: e.exit_code(), stdout, stderr: format!("hksym: {e}\n") }
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, |k| std::env::var(k).ok())
}
