//! Batch driver for the quaternionic-geometry toolkit: Dirac spectra,
//! Willmore energies, the Pluecker relation, spectral-genus scans and the
//! Riemann-Roch index check, with JSON/CSV reports and optional SVG plots.

mod commands;
mod plot;
mod report;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "quatgeo", about = "quaternionic holomorphic geometry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble a Dirac operator, compute its low spectrum and check the
    /// eigenvalue bounds.
    Dirac {
        /// domain config JSON ({"type":"torus"|"sphere", ...})
        #[arg(long)]
        domain: PathBuf,
        /// spin structure phases along the generators, e.g. 0.5,0.5
        #[arg(long, default_value = "0,0")]
        spin: String,
        /// number of smallest-magnitude complex eigenvalues
        #[arg(long, default_value_t = 40)]
        k: usize,
        #[arg(long, default_value_t = 0.02)]
        cluster_tol: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plot: bool,
    },
    /// Willmore energy of an immersion by both quadratures.
    Willmore {
        /// immersion config JSON
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plot: bool,
    },
    /// Weierstrass gaps, ord H and the Pluecker relation of a linear system.
    Plucker {
        /// linear system JSON
        #[arg(long)]
        system: PathBuf,
        /// "auto" (Wronskian roots + both chart origins) or a JSON list
        /// [[chart, re, im], ...]
        #[arg(long, default_value = "auto")]
        points: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plot: bool,
    },
    /// Spectral-genus scan of harmonic torus data over a mu annulus.
    SpectralGenus {
        /// harmonic data config JSON
        #[arg(long)]
        input: PathBuf,
        /// annulus radii, e.g. 0.25,4
        #[arg(long, default_value = "0.25,4")]
        annulus: String,
        #[arg(long, default_value_t = 41)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plot: bool,
    },
    /// Riemann-Roch index check for delbar + q conj on a flat torus.
    RiemannRoch {
        /// domain config JSON (odd torus grid)
        #[arg(long)]
        domain: PathBuf,
        /// constant Hopf field values to sweep, e.g. 0,0.1,0.5
        #[arg(long, default_value = "0,0.1,0.5")]
        q: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    // QUATGEO_THREADS caps internal parallelism; the current backends are
    // serial, so any positive value is accepted as an upper bound.
    if let Ok(v) = std::env::var("QUATGEO_THREADS") {
        if v.parse::<usize>().map(|n| n == 0).unwrap_or(true) {
            eprintln!("invalid QUATGEO_THREADS value `{v}`");
            return ExitCode::from(2);
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Dirac {
            domain,
            spin,
            k,
            cluster_tol,
            out,
            plot,
        } => commands::run_dirac(&domain, &spin, k, cluster_tol, &out, plot),
        Command::Willmore { input, out, plot } => commands::run_willmore(&input, &out, plot),
        Command::Plucker {
            system,
            points,
            out,
            plot,
        } => commands::run_plucker(&system, &points, &out, plot),
        Command::SpectralGenus {
            input,
            annulus,
            grid,
            out,
            plot,
        } => commands::run_spectral_genus(&input, &annulus, grid, &out, plot),
        Command::RiemannRoch { domain, q, out } => commands::run_riemann_roch(&domain, &q, &out),
    };
    match outcome {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
