use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hchain",
    version,
    about = "Exact finite-N fluctuation observables of the pinned harmonic chain",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Pair variances from the full mode sum (N <= 4096).
    ExactPair,
    /// Pair variances replaced by the site variance at the separation.
    Bulk,
}

impl Method {
    pub fn flag(self) -> &'static str {
        match self {
            Method::ExactPair => "exact-pair",
            Method::Bulk => "bulk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderRegime {
    Thermal,
    Quantum,
}

/// Chain parameters and temperature shared by most subcommands.
#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Number of atoms N.
    #[arg(long)]
    pub n: usize,

    /// Quantum coupling α = ħ/(m a c).
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,

    /// Temperature k_B T/(ħ ω_s); 0 or omitted is the ground state.
    #[arg(long, conflicts_with = "eta_cl")]
    pub eta: Option<f64>,

    /// Temperature k_B T/(m c²) = α η. Without --classical it is converted
    /// to η and needs α > 0.
    #[arg(long = "eta-cl")]
    pub eta_cl: Option<f64>,

    /// On-site spring constant relative to the nearest-neighbour spring.
    #[arg(long = "pin-ratio", default_value_t = 0.0)]
    pub pin_ratio: f64,

    /// Use the long-wavelength dispersion ω² = pin + k̃².
    #[arg(long)]
    pub linearized: bool,

    /// Classical equipartition in every mode at --eta-cl.
    #[arg(long, requires = "eta_cl")]
    pub classical: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal-mode wavenumbers and frequencies.
    Modes(ChainArgs),

    /// Mean-square displacement of every site.
    Fluct(ChainArgs),

    /// Mean-square relative displacements ⟨(u_n − u_l)²⟩.
    Pairfluct {
        #[command(flatten)]
        chain: ChainArgs,

        /// Emit the row of this site only; otherwise the lower triangle.
        #[arg(long = "ref")]
        reference: Option<usize>,

        #[arg(long, value_enum, default_value_t = Method::ExactPair)]
        method: Method,
    },

    /// Average one-particle density on a grid in x/a.
    Density {
        #[command(flatten)]
        chain: ChainArgs,

        /// Default 0.
        #[arg(long = "x-min")]
        x_min: Option<f64>,

        /// Default N + 1.
        #[arg(long = "x-max")]
        x_max: Option<f64>,

        /// Number of grid points, default ten per lattice constant.
        #[arg(long = "x-steps")]
        x_steps: Option<usize>,
    },

    /// Static structure factor S_N(q).
    Sq {
        #[command(flatten)]
        chain: ChainArgs,

        #[arg(long, value_enum, default_value_t = Method::ExactPair)]
        method: Method,

        /// Default q-max / q-steps, so the grid covers (0, q-max].
        #[arg(long = "q-min")]
        q_min: Option<f64>,

        #[arg(long = "q-max", default_value_t = 3.0 * PI)]
        q_max: f64,

        /// Number of uniform points; Bragg points 2πν are added exactly.
        #[arg(long = "q-steps", default_value_t = 500)]
        q_steps: usize,

        /// Geometric refinement points on each side of every Bragg point.
        #[arg(long, default_value_t = 0)]
        refine: usize,

        /// Largest refinement offset in qa; the smallest is 2π/N.
        #[arg(long = "refine-width", default_value_t = 0.1)]
        refine_width: f64,
    },

    /// Debye-Waller exponent and Bragg-peak power laws.
    Bragg {
        #[arg(long)]
        alpha: f64,

        /// Peak orders, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        nu: Vec<i64>,
    },

    /// Zero-phonon probabilities p_l for a source at every site l.
    Moessbauer {
        #[command(flatten)]
        chain: ChainArgs,

        /// Momentum transfer times lattice constant.
        #[arg(long, default_value_t = 2.0 * PI)]
        qa: f64,
    },

    /// Single-oscillator variance relative to its ground state against temperature.
    Crossover {
        #[arg(long = "eta-min", default_value_t = 0.0)]
        eta_min: f64,

        #[arg(long = "eta-max", default_value_t = 2.0)]
        eta_max: f64,

        #[arg(long = "eta-steps", default_value_t = 201)]
        eta_steps: usize,
    },

    /// Long-range order of a d-dimensional harmonic crystal.
    Classify {
        #[arg(long)]
        d: u32,

        #[arg(long, value_enum)]
        regime: OrderRegime,
    },

    /// Quantum coupling α from SI sound velocity and lattice constant.
    AlphaFromSi {
        /// Sound velocity in m/s.
        #[arg(long)]
        c: f64,

        /// Lattice constant in m.
        #[arg(long)]
        a: f64,

        /// Mass number of the atoms.
        #[arg(long = "A")]
        nucleons: f64,
    },
}
