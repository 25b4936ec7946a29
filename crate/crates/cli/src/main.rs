//! `topocyl`: experiments over finite topological cylindric algebras, each
//! writing one canonical JSON report.
//!
//! Exit status: 0 when the verdict matches `--expect` (or no expectation
//! applies), 1 on a mismatch, 2 on a usage or input error.

mod commands;
mod config;
mod report;
mod structure;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::Common;

#[derive(Debug, Parser)]
#[command(
    name = "topocyl",
    version,
    about = "Topological cylindric algebra experiments"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite topologies.
    #[command(subcommand)]
    Topo(TopoCmd),
    /// S4 semantics over topologies, preorders and dynamic models.
    #[command(subcommand)]
    Modal(ModalCmd),
    /// Topological set algebras.
    #[command(subcommand)]
    Setalg(SetalgCmd),
    /// Atom structures and their complex algebras.
    #[command(subcommand)]
    Bao(BaoCmd),
    /// Rainbow atom structures.
    #[command(subcommand)]
    Rainbow(RainbowCmd),
    /// Atomic network games.
    #[command(subcommand)]
    Game(GameCmd),
}

#[derive(Debug, Subcommand)]
pub enum TopoCmd {
    /// Enumerates every topology on `--size` points.
    Enum {
        #[arg(long)]
        size: usize,
        /// Include the open sets of every topology.
        #[arg(long)]
        list: bool,
    },
    /// Validates a topology and reports its properties.
    Check {
        /// `{"size": u, "opens": [[..], ..]}` inline or `@file`.
        #[arg(long)]
        topology: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Topo,
    Kripke,
    Dynamic,
}

#[derive(Debug, Subcommand)]
pub enum ModalCmd {
    /// Truth set of a formula in one model.
    Eval {
        #[arg(long)]
        formula: String,
        /// Topology JSON (topological or dynamic model).
        #[arg(long, conflicts_with = "preorder")]
        topology: Option<String>,
        /// `{"size": u, "leq": [[x, y], ..]}` (Kripke model).
        #[arg(long)]
        preorder: Option<String>,
        /// Continuous self-map for a dynamic model, e.g. `[1,0]`.
        #[arg(long, requires = "topology")]
        map: Option<String>,
        /// `{"0": [points], "1": [points]}`; missing atoms are empty.
        #[arg(long, default_value = "{}")]
        valuation: String,
    },
    /// Bounded search for a countermodel.
    Countermodel {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value = "topo")]
        mode: ModeArg,
    },
    /// Kripke semantics against the Alexandrov topology on every preorder.
    Equiv {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 500)]
        formulas: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SetOp {
    Cyl,
    Diag,
    Int,
    Cl,
    Box,
    Subst,
    Dims,
}

#[derive(Debug, Subcommand)]
pub enum SetalgCmd {
    /// Applies one operation to a tuple set.
    Op {
        #[arg(long, value_enum)]
        op: SetOp,
        /// `{"dim", "base", "topology", "members"}` inline or `@file`.
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long, default_value_t = 0)]
        j: usize,
        /// Substitution map for `subst`, e.g. `[0,0]`.
        #[arg(long)]
        tau: Option<String>,
    },
    /// Checks axiom suites on full topological set algebras.
    Axioms {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        base: usize,
        /// One topology; default is every topology on the base.
        #[arg(long)]
        topology: Option<String>,
        /// Comma-separated suites.
        #[arg(long, default_value = "CA,TCA")]
        suites: String,
    },
    /// Interior is not additive on the indiscrete 2-point base.
    WitnessNonadditive,
    /// Equal cylindric reducts with different interiors.
    WitnessNontermdef,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CheckArg {
    Auto,
    Exhaustive,
    Sampled,
    Atoms,
}

#[derive(Args, Debug)]
pub struct StructureArg {
    /// `space:N:U[:discrete|indiscrete|t<k>]`, `rainbow[:3]` or `file:<dump>`.
    #[arg(long, default_value = "space:2:2")]
    pub structure: String,
}

#[derive(Debug, Subcommand)]
pub enum BaoCmd {
    /// Summarizes the complex algebra of a structure.
    Cm {
        #[command(flatten)]
        structure: StructureArg,
        /// Include the atom structure dump.
        #[arg(long)]
        dump: bool,
    },
    /// Checks an equation or an axiom suite.
    Check {
        #[command(flatten)]
        structure: StructureArg,
        #[arg(long, conflicts_with = "suite", required_unless_present = "suite")]
        equation: Option<String>,
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        check: CheckArg,
    },
    /// Neat reduct to dimension `--m`.
    Nr {
        #[command(flatten)]
        structure: StructureArg,
        #[arg(long)]
        m: usize,
    },
    /// Subalgebra generated by atom sets, e.g. `[[0],[1,2]]`.
    Sg {
        #[command(flatten)]
        structure: StructureArg,
        #[arg(long)]
        gens: String,
    },
    /// Searches for a representation on a base of at most `--max-size`.
    Represent {
        #[command(flatten)]
        structure: StructureArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PaletteArg {
    Default,
    Full,
}

#[derive(Args, Debug)]
pub struct RainbowArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "default")]
    pub palette: PaletteArg,
    /// Shades on every tuple rather than only on non-green-faced ones.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Subcommand)]
pub enum RainbowCmd {
    /// Counts atoms, optionally listing and validating each.
    Atoms {
        #[command(flatten)]
        rainbow: RainbowArgs,
        #[arg(long)]
        list: bool,
    },
    /// Builds the atom structure and checks suites on its complex algebra.
    Structure {
        #[command(flatten)]
        rainbow: RainbowArgs,
        #[arg(long, default_value = "CA")]
        suites: String,
        #[arg(long, value_enum, default_value = "atoms")]
        check: CheckArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GameModeArg {
    F,
    G,
}

#[derive(Debug, Subcommand)]
pub enum GameCmd {
    /// Solves a bounded truncation and emits a certificate.
    Solve {
        #[command(flatten)]
        structure: StructureArg,
        #[arg(long, value_enum, default_value = "f")]
        mode: GameModeArg,
        /// Positions expanded before giving up.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Plays ∀'s cone script on the rainbow structure.
    Script {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Comma-separated tints, opening cone first.
        #[arg(long, default_value = "1,2,3,4")]
        tints: String,
    },
    /// Replays a game artifact.
    VerifyTranscript {
        /// Report written by `game solve` or `game script`.
        input: std::path::PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
