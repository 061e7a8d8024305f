use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug, Clone)]
#[command(name = "cubeterm", version, about = "Decide cube, edge and near unanimity terms of finite algebras")]
pub struct Cli {
    /// Human-readable summary and indented JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Give up after this many milliseconds (reported as truncated).
    #[arg(long, global = true, value_name = "MS")]
    pub timeout_ms: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check an algebra file and list its violations.
    Validate { file: PathBuf },
    /// Decide whether the algebra has a cube term.
    DecideCube {
        file: PathBuf,
        /// Largest dimension the general procedure may try.
        #[arg(long)]
        cap: Option<usize>,
        /// Use the general procedure even for idempotent algebras.
        #[arg(long)]
        force_general: bool,
    },
    /// Search an idempotent algebra for a cube term blocker.
    FindBlocker { file: PathBuf },
    CheckCubeDim {
        file: PathBuf,
        #[arg(short = 'd')]
        d: usize,
    },
    CheckEdgeDim {
        file: PathBuf,
        #[arg(short = 'd')]
        d: usize,
    },
    CheckNu {
        file: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Decide whether the algebra has a near unanimity term.
    DecideNu {
        file: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Smallest dimension of a cube term.
    MinCubeDim {
        file: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Cube dimension bounds for the algebra's signature.
    Bounds { file: PathBuf },
    /// Write a built-in or generated algebra.
    Gen(GenArgs),
    /// Brute-force reference computations.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[command(subcommand)]
    pub what: GenCommand,
    /// Also write the algebra to this file.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum GenCommand {
    /// A named fixture such as lattice2 or semilattice2.
    Fixture { name: String },
    /// An idempotent quasigroup of order N.
    Quasigroup { n: usize },
    /// The tight example on N elements with the given arities.
    Tight {
        n: usize,
        #[arg(value_delimiter = ',', required = true)]
        arities: Vec<usize>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum OracleCommand {
    /// Blocker by exhaustive search over pairs of subuniverses.
    Blockers { file: PathBuf },
    /// First compatible chipped cube of arity D.
    ChippedCubes {
        file: PathBuf,
        #[arg(short = 'd')]
        d: usize,
    },
    /// The K-ary term operations and the identities they satisfy.
    Clone {
        file: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
}
