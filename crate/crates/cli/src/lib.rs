//! Command-line front end for `harmonic-chain`.
//!
//! [`run`] does all the work and returns what would be printed, so the
//! binary is a thin wrapper and tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure.

mod scenario;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use harmonic_chain::experiments::{emit_plot_script, format_number, run_scenario, write_csv};
use harmonic_chain::{
    bipartite_log_negativity, build_potential, chain_covariance, circulant_eigenvalues,
    classical_correlations, eigh_symmetric, ground_energy, q_spectrum, ChainSpec, Error,
    GroupSelection, Topology,
};

pub use scenario::{load_scenario, parse_scenario, LoadError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "harmonic-chain", version, about = "Entanglement in harmonic oscillator chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Log-negativity between two groups of oscillators
    Negativity {
        #[command(flatten)]
        chain: ChainArgs,
        /// Temperature; 0 is the ground state
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        temperature: f64,
        /// First group, 1-based, e.g. `1-4` or `1,3,5-9`
        #[arg(long = "group-a", value_name = "SPEC")]
        group_a: String,
        /// Second group
        #[arg(long = "group-b", value_name = "SPEC")]
        group_b: String,
    },
    /// Ground-state energy Tr V^{1/2} in units of the single-oscillator zero-point energy
    Energy {
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Eigenvalues of the potential matrix, or of Q with --q
    Spectrum {
        #[command(flatten)]
        chain: ChainArgs,
        /// Print the spectrum of Q for the half/half split instead
        #[arg(long)]
        q: bool,
    },
    /// Ground-state correlations <X_1 X_j> for j = 1..n
    Correlations {
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Parameter sweeps
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Subcommand, Debug)]
enum ScenarioAction {
    /// Run a JSON scenario file and write its CSV
    Run {
        file: PathBuf,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write a gnuplot script next to the CSV
        #[arg(long)]
        plot: bool,
    },
}

#[derive(Args, Debug)]
struct ChainArgs {
    /// Number of oscillators
    #[arg(long)]
    n: usize,
    /// Couplings alpha_1,alpha_2,... (one value is nearest neighbour)
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "ring")]
    topology: String,
}

/// Failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INVALID };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::invalid(e.to_string())
    }
}

pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn dispatch(command: Command) -> Result<String, Failure> {
    let mut out = String::new();
    match command {
        Command::Negativity {
            chain,
            temperature,
            group_a,
            group_b,
        } => {
            let spec = chain.spec()?;
            if !temperature.is_finite() || temperature < 0.0 {
                return Err(Failure::invalid(format!(
                    "--temperature: must be finite and nonnegative, got {temperature}"
                )));
            }
            let spec = spec.with_temperature(temperature)?;
            let a = parse_group(&group_a, "--group-a")?;
            let b = parse_group(&group_b, "--group-b")?;
            let sel = GroupSelection::from_one_based(a, b, spec.n())?;
            let cov = chain_covariance(&spec)?;
            let res = bipartite_log_negativity(&cov, &sel)?;
            let _ = writeln!(out, "N {}", format_number(res.log_negativity));
            let spectrum: Vec<String> = res.symplectic_spectrum.iter().map(|&x| format_number(x)).collect();
            let _ = writeln!(out, "spectrum {}", spectrum.join(" "));
        }
        Command::Energy { chain } => {
            let v = build_potential(&chain.spec()?)?;
            let _ = writeln!(out, "{}", format_number(ground_energy(&v)?));
        }
        Command::Spectrum { chain, q } => {
            let spec = chain.spec()?;
            let values = if q {
                if spec.n() % 2 != 0 {
                    return Err(Error::OddSize(spec.n()).into());
                }
                q_spectrum(&build_potential(&spec)?, true)?
            } else if spec.topology() == Topology::Ring {
                circulant_eigenvalues(&spec.ring_row())?
            } else {
                eigh_symmetric(&build_potential(&spec)?)?.eigenvalues().to_vec()
            };
            for x in values {
                let _ = writeln!(out, "{}", format_number(x));
            }
        }
        Command::Correlations { chain } => {
            let spec = chain.spec()?;
            if spec.topology() != Topology::Ring {
                return Err(Failure::invalid("--topology: correlations need a ring"));
            }
            for c in classical_correlations(&build_potential(&spec)?)? {
                let _ = writeln!(out, "{}", format_number(c));
            }
        }
        Command::Scenario {
            action: ScenarioAction::Run { file, out: dir, plot },
        } => {
            let cfg = load_scenario(&file)?;
            let table = run_scenario(&cfg)?;
            fs::create_dir_all(&dir)
                .map_err(|e| Failure::invalid(format!("--out {}: {e}", dir.display())))?;
            let csv = dir.join(format!("{}.csv", cfg.kind.file_stem()));
            write_csv(&table, &csv).map_err(|e| io_failure(&csv, e))?;
            let _ = writeln!(out, "{}", csv.display());
            if plot {
                let script = dir.join(format!("{}.gp", cfg.kind.file_stem()));
                emit_plot_script(&table, &csv, &script).map_err(|e| io_failure(&script, e))?;
                let _ = writeln!(out, "{}", script.display());
            }
        }
    }
    Ok(out)
}

fn io_failure(path: &Path, e: Error) -> Failure {
    Failure::invalid(format!("{}: {e}", path.display()))
}

impl ChainArgs {
    fn spec(&self) -> Result<ChainSpec, Failure> {
        let couplings = parse_numbers(&self.alpha, "--alpha")?;
        let topology: Topology = self
            .topology
            .parse()
            .map_err(|_| Failure::invalid(format!("--topology: expected ring or terminated, got {:?}", self.topology)))?;
        ChainSpec::new(self.n, couplings, topology).map_err(|e| Failure::invalid(format!("--n/--alpha: {e}")))
    }
}

fn parse_numbers(text: &str, flag: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Failure::invalid(format!("{flag}: {t:?} is not a finite number")))
        })
        .collect()
}

/// Parses a 1-based group SPEC such as `1,3,5-9`.
pub fn parse_group_spec(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let index = |s: &str| -> Result<usize, String> {
            match s.trim().parse::<usize>() {
                Ok(0) => Err(format!("{part:?}: oscillators are numbered from 1")),
                Ok(i) => Ok(i),
                Err(_) => Err(format!("{part:?} is not an index or range")),
            }
        };
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (index(lo)?, index(hi)?);
                if hi < lo {
                    return Err(format!("{part:?}: range end is before its start"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(index(part)?),
        }
    }
    Ok(out)
}

fn parse_group(text: &str, flag: &str) -> Result<Vec<usize>, Failure> {
    parse_group_spec(text).map_err(|m| Failure::invalid(format!("{flag}: {m}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("harmonic-chain").chain(args.iter().copied()))
    }

    #[test]
    fn group_specs() {
        assert_eq!(parse_group_spec("1-4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_group_spec("1,3,5-7").unwrap(), vec![1, 3, 5, 6, 7]);
        assert_eq!(parse_group_spec(" 2 , 4 ").unwrap(), vec![2, 4]);
        for bad in ["", "0", "3-1", "a", "1-", "1,,2", "-3", "1-2-3"] {
            assert!(parse_group_spec(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn negativity_symmetric_bisection() {
        let o = run_args(&["negativity", "--n", "8", "--alpha", "20", "--group-a", "1-4", "--group-b", "5-8"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.starts_with("N 3.1699250014"), "{}", o.stdout);
    }

    #[test]
    fn uncoupled_is_zero() {
        let o = run_args(&["negativity", "--n", "8", "--alpha", "0", "--group-a", "1-4", "--group-b", "5-8"]);
        assert!(o.stdout.starts_with("N 0\n"), "{}", o.stdout);
        let o = run_args(&["energy", "--n", "4", "--alpha", "0"]);
        assert_eq!(o.stdout, "4\n");
    }

    #[test]
    fn numerical_errors_exit_two() {
        let f: Failure = Error::NoConvergence { dim: 4, residual: 1e-3 }.into();
        assert_eq!(f.code, EXIT_NUMERICAL);
        let f: Failure = Error::OddSize(7).into();
        assert_eq!(f.code, EXIT_INVALID);
    }

    #[test]
    fn errors_leave_stdout_empty() {
        let cases: &[(&[&str], i32)] = &[
            (&["negativity", "--n", "8", "--alpha", "1", "--group-a", "1-4", "--group-b", "4-8"], 1),
            (&["negativity", "--n", "8", "--alpha", "1", "--group-a", "1-x", "--group-b", "5-8"], 1),
            (&["negativity", "--n", "8", "--alpha", "-0.3", "--group-a", "1", "--group-b", "2"], 1),
            (&["energy", "--n", "8", "--alpha", "1", "--bogus"], 1),
            (&["spectrum", "--n", "7", "--alpha", "1", "--q"], 1),
        ];
        for (args, code) in cases {
            let o = run_args(args);
            assert_eq!(o.code, *code, "{args:?}: {}", o.stderr);
            assert!(o.stdout.is_empty(), "{args:?}");
            assert!(!o.stderr.is_empty(), "{args:?}");
        }
    }
}
