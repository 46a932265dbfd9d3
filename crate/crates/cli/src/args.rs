use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "aeq",
    version,
    about = "Certify, construct, bound and search for almost-equidistant point sets"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Tolerance on squared distances in floating mode.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Tolerance on eigenvalues in floating mode.
    #[arg(long = "eig-tol", global = true, default_value_t = 1e-8)]
    pub eig_tol: f64,
    /// Read inputs as exact rationals and use zero tolerances.
    #[arg(long, global = true)]
    pub exact: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (AEQ_THREADS overrides; default: logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct PointInput {
    /// Point-set file (JSON or CSV by extension); `-` reads JSON from stdin.
    #[arg(long)]
    pub input: PathBuf,
    /// Override the format guessed from the extension.
    #[arg(long = "input-format", value_enum)]
    pub input_format: Option<InputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Simplex,
    TwoSimplices,
    Rosenfeld,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremArg {
    Sphere,
    Diameter,
    Ball,
    General,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Check that every triple contains a unit-distance pair.
    Verify(PointInput),
    /// Spectral certificate of the U-matrix.
    Certify(PointInput),
    /// Generate a construction.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        dim: usize,
        /// Number of simplex vertices (default dim + 1).
        #[arg(long)]
        k: Option<usize>,
        /// Lift onto the radius-1/sqrt(2) sphere in dimension dim + 1.
        #[arg(long)]
        lift: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a cardinality bound, optionally on a configuration.
    Bounds {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        c0: Option<f64>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long = "input-format", value_enum)]
        input_format: Option<InputFormat>,
    },
    /// Multistart penalty search for an almost-equidistant set.
    Search {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "diameter-le-1")]
        diameter_le_1: bool,
        #[arg(long = "sphere-radius", conflicts_with = "diameter_le_1")]
        sphere_radius: Option<f64>,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-iters", default_value_t = 2000)]
        max_iters: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diameter-constrained searches over n for one dimension.
    Probe {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-iters", default_value_t = 1500)]
        max_iters: usize,
    },
    /// Rank of A − λ₂I over triangle-free graphs from a graph-list file.
    Tdrank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        graphs: PathBuf,
        /// Exact multiplicities (same as the global --exact).
        #[arg(long = "exact-multiplicity")]
        exact_multiplicity: bool,
    },
    /// Chained bound audit: verify, recentre, f-statistic, norms, ball/sphere bound.
    Pipeline {
        #[command(flatten)]
        input: PointInput,
        /// Also require diameter at most 1 and apply the diameter bound.
        #[arg(long)]
        diameter: bool,
    },
    /// Single-point defect estimate for one point of a configuration.
    LemmaEnd {
        #[command(flatten)]
        input: PointInput,
        #[arg(long)]
        w0: usize,
        #[arg(long)]
        x: f64,
    },
    /// Weyl's inequality for two symmetric matrices (CSV).
    Weyl {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Perron–Frobenius check for a nonnegative matrix (CSV).
    Perron {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Gershgorin bound for a matrix (CSV).
    Gershgorin {
        #[arg(long)]
        matrix: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Certify(_) => "certify",
            Command::Construct { .. } => "construct",
            Command::Bounds { .. } => "bounds",
            Command::Search { .. } => "search",
            Command::Probe { .. } => "probe",
            Command::Tdrank { .. } => "tdrank",
            Command::Pipeline { .. } => "pipeline",
            Command::LemmaEnd { .. } => "lemma-end",
            Command::Weyl { .. } => "weyl",
            Command::Perron { .. } => "perron",
            Command::Gershgorin { .. } => "gershgorin",
        }
    }
}
