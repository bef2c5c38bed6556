//! Command-line driver: configuration, sweeps over the coupling cube,
//! verification, spectra, order parameters and anyon condensation.

pub mod config;
pub mod run;

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use config::{Axis, Format, GridShape, Injection, Mode, RunConfig, Theory};
pub use run::{run, CliError, RunOutput};

#[derive(Parser, Debug)]
#[command(name = "colorcode", version, about = "Perturbed color code on hexagonal tori")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Torus size L1xL2, multiples of 3 [default: 3x3].
    #[arg(long, global = true)]
    pub lattice: Option<String>,
    /// Largest log2(dimension) diagonalized densely [default: 14].
    #[arg(long, global = true)]
    pub dense_limit: Option<u32>,
    /// Output file [default: standard output].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format [default: csv for sweep and spectrum, text for verify and
    /// condense, json for order-params].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads [default: all cores].
    #[arg(long, global = true, env = "COLORCODE_THREADS")]
    pub threads: Option<usize>,
    /// Seed for randomized checks and solver start vectors [default: 1].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lattice validation, commutation, frame and spectral checks.
    Verify {
        /// Fault to inject before checking, e.g. recolor-edge:5.
        #[arg(long)]
        inject: Option<Injection>,
        /// Lowest eigenvalues compared by the matrix-free stage (0 disables it)
        /// [default: 0].
        #[arg(long)]
        matrix_free_k: Option<usize>,
        /// Eigenvalue tolerance of the dense stage [default: 1e-9].
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Eigenvalues of the perturbed model at one coupling point.
    Spectrum {
        /// Couplings j_r,j_g,j_b [default: 0,0,0].
        #[arg(long, value_parser = parse_triple)]
        j: Option<[f64; 3]>,
        /// Eigenvalues from the iterative solver beyond the dense limit [default: 10].
        #[arg(long)]
        k: Option<usize>,
    },
    /// Phase diagram from the three decoupled Ising models.
    Sweep {
        /// Axis START:STOP:STEP (or a single value) for all three couplings.
        #[arg(long)]
        grid: Option<Axis>,
        #[arg(long)]
        jr: Option<Axis>,
        #[arg(long)]
        jg: Option<Axis>,
        #[arg(long)]
        jb: Option<Axis>,
        /// Restrict to the plane jg=jb, spanned by the jr and jg axes [default shape].
        #[arg(long, value_parser = parse_slice, conflicts_with = "diagonal")]
        slice: Option<()>,
        /// Restrict to the line jr=jg=jb, along the jr axis.
        #[arg(long)]
        diagonal: bool,
        /// Sweep the full jr x jg x jb product.
        #[arg(long, conflicts_with_all = ["slice", "diagonal"])]
        cube: bool,
        /// String order threshold for labels [default: 0.5].
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// String order parameters at one coupling point.
    OrderParams {
        /// Couplings j_r,j_g,j_b [default: 0,0,0].
        #[arg(long, value_parser = parse_triple)]
        j: Option<[f64; 3]>,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Condense bosons of an anyon theory and print the quotient.
    Condense {
        #[arg(long, value_enum, default_value = "color-code")]
        theory: Theory,
        /// Anyon labels, e.g. r_x b_x.
        #[arg(required = true)]
        labels: Vec<String>,
    },
    /// Run the mode named in the configuration file.
    Run,
    /// Print the JSON schema of the configuration file.
    Schema,
}

fn parse_triple(s: &str) -> anyhow::Result<[f64; 3]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?}")))
        .collect::<anyhow::Result<_>>()?;
    match v.as_slice() {
        [a, b, c] => Ok([*a, *b, *c]),
        _ => bail!("expected j_r,j_g,j_b, got {s:?}"),
    }
}

fn parse_slice(s: &str) -> anyhow::Result<()> {
    match s.replace(' ', "").as_str() {
        "jg=jb" | "jb=jg" => Ok(()),
        _ => bail!("only the slice jg=jb is supported, got {s:?}"),
    }
}

/// Builds the effective configuration: file (or defaults), then flags.
pub fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(CliError::Config)?;
            RunConfig::from_json(&text).map_err(CliError::Config)?
        }
        None => RunConfig::default(),
    };
    let c = &cli.common;
    if let Some(l) = &c.lattice {
        cfg.lattice = l.clone();
    }
    if let Some(d) = c.dense_limit {
        cfg.solver.dense_limit_log2 = d;
    }
    if let Some(o) = &c.out {
        cfg.output.path = Some(o.clone());
    }
    if c.format.is_some() {
        cfg.output.format = c.format;
    }
    if c.threads.is_some() {
        cfg.threads = c.threads;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    match &cli.command {
        Command::Verify { inject, matrix_free_k, tol } => {
            cfg.mode = Mode::Verify;
            if inject.is_some() {
                cfg.inject = *inject;
            }
            if let Some(k) = matrix_free_k {
                cfg.solver.matrix_free_k = *k;
            }
            if let Some(t) = tol {
                cfg.solver.tol = *t;
            }
        }
        Command::Spectrum { j, k } => {
            cfg.mode = Mode::Spectrum;
            if let Some(j) = j {
                cfg.couplings = *j;
            }
            if let Some(k) = k {
                cfg.solver.k = *k;
            }
        }
        Command::Sweep { grid, jr, jg, jb, slice, diagonal, cube, threshold } => {
            cfg.mode = Mode::Sweep;
            if let Some(g) = grid {
                cfg.grid.jr = *g;
                cfg.grid.jg = *g;
                cfg.grid.jb = *g;
            }
            for (axis, value) in [(&mut cfg.grid.jr, jr), (&mut cfg.grid.jg, jg), (&mut cfg.grid.jb, jb)] {
                if let Some(v) = value {
                    *axis = *v;
                }
            }
            if slice.is_some() {
                cfg.grid.shape = GridShape::Slice;
            } else if *diagonal {
                cfg.grid.shape = GridShape::Diagonal;
            } else if *cube {
                cfg.grid.shape = GridShape::Cube;
            }
            if let Some(t) = threshold {
                cfg.solver.threshold = *t;
            }
        }
        Command::OrderParams { j, threshold } => {
            cfg.mode = Mode::OrderParams;
            if let Some(j) = j {
                cfg.couplings = *j;
            }
            if let Some(t) = threshold {
                cfg.solver.threshold = *t;
            }
        }
        Command::Condense { theory, labels } => {
            cfg.mode = Mode::Condense;
            cfg.theory = *theory;
            cfg.condense = labels.clone();
        }
        Command::Run => {
            if cli.common.config.is_none() {
                return Err(CliError::Config(anyhow::anyhow!("`run` needs --config")));
            }
        }
        Command::Schema => {}
    }
    Ok(cfg)
}
