//! `logkfl`: command-line front end for the logkfl engine.

mod commands;
mod human;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use logkfl::calculators::Mode;
use logkfl::cohomology::DEFAULT_SIZE_BOUND;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Parser, Debug)]
#[command(name = "logkfl", version, about = "Exact Kummer log flat cohomology computations")]
pub struct Cli {
    /// Output format: aligned tables or JSON.
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,

    /// Largest complex, in `|G|^degree × generators`, before giving up.
    #[arg(long, global = true, env = "LOGKFL_SIZE_BOUND", default_value_t = DEFAULT_SIZE_BOUND)]
    pub size_bound: u128,

    #[command(subcommand)]
    pub command: Command,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse::<Mode>().map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Smith normal form of an integer matrix.
    Snf {
        /// JSON rows, e.g. "[[2,4],[6,8]]".
        #[arg(long)]
        matrix: String,
    },
    /// Normal form of a finitely generated abelian group, optionally combined
    /// with a second one.
    Group {
        /// Group notation such as "Z^2+Z/4", or JSON.
        #[arg(long, conflicts_with = "relations")]
        group: Option<String>,
        /// Relation matrix whose columns are relations, as JSON rows.
        #[arg(long)]
        relations: Option<String>,
        #[arg(long, conflicts_with_all = ["hom", "exterior"])]
        tensor: Option<String>,
        #[arg(long, conflicts_with = "exterior")]
        hom: Option<String>,
        /// Exterior power of a free group.
        #[arg(long)]
        exterior: Option<usize>,
    },
    /// H^i(G, M) of a finite abelian group from the standard complex.
    Cohomology {
        #[arg(long)]
        group: String,
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        degree: usize,
    },
    /// H^i(Z/m, M) by periodicity.
    CyclicClosed {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        degree: usize,
    },
    /// H^i of the prime-to-p completion of Z^r: closed form, and a ladder
    /// colimit when M is finite.
    Profinite {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        degree: usize,
        /// Comma-separated levels; defaults to e, e^2, e^3 for e the
        /// prime-to-p exponent of M.
        #[arg(long, value_delimiter = ',')]
        ladder: Option<Vec<u64>>,
    },
    /// Čech cohomology of the Kummer cover X_n/X of a log point.
    Cech {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        degree: usize,
    },
    /// colim_n of the Čech cohomology of X_n/X for torsion M.
    CechColimit {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        degree: usize,
    },
    /// R^i ε_fl* F over a log trait or a Dedekind base.
    DirectImage {
        /// Base as JSON, or @path to a JSON file.
        #[arg(long)]
        base: String,
        /// lattice:r, rational:d, a finite l-group such as Z/9, or JSON.
        #[arg(long)]
        sheaf: String,
        #[arg(long)]
        degree: usize,
    },
    /// Galois cohomology of a finite field with q elements.
    Zhat {
        #[arg(long)]
        q: u64,
        /// Symbolic module such as "Z/5(-1)" or "Q_3/Z_3(-1)".
        #[arg(long, conflicts_with = "group")]
        module: Option<String>,
        /// Finite group with an explicit Frobenius.
        #[arg(long, requires = "frobenius")]
        group: Option<String>,
        /// Frobenius matrix as JSON rows; column j is the image of generator j.
        #[arg(long)]
        frobenius: Option<String>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
    },
    /// Kummer log flat cohomology of a discrete valuation ring with finite
    /// residue field.
    CalcDvr {
        #[arg(long)]
        q: u64,
        /// Residue characteristic; inferred from q when omitted.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        sheaf: String,
        #[arg(long, value_parser = parse_mode, default_value = "computed")]
        mode: Mode,
    },
    /// Kummer log flat against étale cohomology of a Dedekind base.
    CalcDedekind {
        /// Base as JSON, or @path to a JSON file.
        #[arg(long)]
        base: String,
        #[arg(long)]
        sheaf: String,
        /// Étale row as a JSON graded module; opaque symbols by default.
        #[arg(long)]
        etale_row: Option<String>,
        #[arg(long, value_parser = parse_mode, default_value = "computed")]
        mode: Mode,
    },
    /// Runs the invariant suites.
    Verify {
        /// Run a single suite.
        #[arg(long)]
        suite: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
