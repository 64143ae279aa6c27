//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use bbs_core::measures::{sample_append_mix, sample_bernoulli, sample_hat_mu_len, ComponentLaw};
use bbs_core::reconstruct::reconstruct;
use bbs_core::slots::components;
use bbs_core::soliton::identify;
use bbs_core::speeds::{solve_alpha, solve_rho};
use bbs_core::trajectory::{select_tags, track_trajectories};

use crate::formats::{
    parse_list, read_components, read_config, soliton_report, truncate, write_components,
    write_config, write_speeds, write_trajectories, Params,
};
use crate::raster::{ImageFormat, Raster};
use crate::run::run;
use crate::selftest::run_suite;
use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "bbs", version, about = "Box-ball system toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Io {
    /// Input file; `-` or absent reads standard input.
    pub input: Option<PathBuf>,
    /// Output file; absent writes standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Comma-separated densities, entry `k - 1` for size `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<f64>);

#[derive(Args, Debug, Clone)]
pub struct Densities {
    /// Solitons per excursion, comma separated.
    #[arg(long, value_parser = parse_densities, conflicts_with = "alpha")]
    pub rho: Option<List>,
    /// Solitons per slot, comma separated.
    #[arg(long, value_parser = parse_densities)]
    pub alpha: Option<List>,
    /// Truncation level.
    #[arg(long = "K")]
    pub k: Option<usize>,
}

fn parse_densities(s: &str) -> Result<List, String> {
    parse_list(s).map(List).map_err(|e| e.0)
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply the dynamics to a configuration.
    Evolve {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// List the solitons of a configuration.
    Solitons {
        #[command(flatten)]
        io: Io,
    },
    /// Slot components of a configuration with a record at site 0.
    Decompose {
        #[command(flatten)]
        io: Io,
    },
    /// Configuration from slot components.
    Reconstruct {
        #[command(flatten)]
        io: Io,
    },
    /// Sample a configuration: `--lambda` for independent bits, `--rho` for
    /// appended solitons after mixing, `--alpha` for independent components.
    Sample {
        #[arg(long)]
        lambda: Option<f64>,
        #[command(flatten)]
        densities: Densities,
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "mix-steps", default_value_t = 50)]
        mix_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Speed table from `--rho` or `--alpha`.
    Speeds {
        #[command(flatten)]
        densities: Densities,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trajectories of tagged solitons and records.
    Track {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 140)]
        steps: usize,
        /// Tagged solitons per size, and tagged records.
        #[arg(long, default_value_t = 20)]
        tags: usize,
        /// Tagged items start at least this far from both edges.
        #[arg(long, default_value_t = 0)]
        margin: usize,
    },
    /// Space-time raster of a configuration.
    Render {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 140)]
        steps: usize,
        #[arg(long, default_value = "pbm")]
        format: String,
        /// Repeat every row this many times.
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Densities for predicted-speed overlays (pgm only).
        #[command(flatten)]
        densities: Densities,
    },
    /// Run the invariant suite.
    Selftest {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Full pipeline from a parameter file into a run directory.
    Run {
        /// Parameter file; `-` or absent reads standard input.
        params: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed of the parameter file.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => Ok(fs::read_to_string(p)?),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

impl Densities {
    fn table(&self) -> Result<Option<bbs_core::speeds::SpeedTable>, CliError> {
        Ok(match (&self.rho, &self.alpha) {
            (Some(r), _) => Some(solve_rho(&truncate(&r.0, self.k))?),
            (None, Some(a)) => Some(solve_alpha(&truncate(&a.0, self.k))?),
            (None, None) => None,
        })
    }
}

/// Executes a parsed command.
pub fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Evolve { io, steps } => {
            let c = read_config(&read_input(io.input.as_deref())?)?;
            write_output(io.out.as_deref(), &write_config(&c.apply_t_steps(steps)))
        }
        Command::Solitons { io } => {
            let c = read_config(&read_input(io.input.as_deref())?)?;
            write_output(io.out.as_deref(), &soliton_report(&identify(&c)))
        }
        Command::Decompose { io } => {
            let c = read_config(&read_input(io.input.as_deref())?)?;
            let z = components(&c)?;
            let n = c.closed().records().len();
            write_output(io.out.as_deref(), &write_components(&z, Some(n)))
        }
        Command::Reconstruct { io } => {
            let (z, excursions) = read_components(&read_input(io.input.as_deref())?)?;
            let labels = || z.iter().map(|(_, i, _)| i);
            let n_right = excursions.unwrap_or_else(|| {
                labels()
                    .filter(|&i| i >= 0)
                    .max()
                    .map_or(1, |i| i as usize + 1)
            });
            let n_left = labels()
                .filter(|&i| i < 0)
                .map(|i| (-i) as usize)
                .max()
                .unwrap_or(0);
            let r = reconstruct(&z, n_right, n_left);
            if n_left > 0 {
                eprintln!("origin {}", r.origin);
            }
            write_output(io.out.as_deref(), &write_config(&r.config))
        }
        Command::Sample {
            lambda,
            densities,
            n,
            seed,
            mix_steps,
            out,
        } => {
            let c = match (lambda, &densities.rho, &densities.alpha) {
                (Some(l), None, None) => sample_bernoulli(l, n, seed)?,
                (None, Some(r), None) => {
                    sample_append_mix(&truncate(&r.0, densities.k), n, mix_steps, seed)?
                }
                (None, None, Some(a)) => {
                    let law = ComponentLaw::bernoulli(&truncate(&a.0, densities.k))?;
                    sample_hat_mu_len(&law, n, seed)
                }
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --lambda, --rho, --alpha".into(),
                    ))
                }
            };
            write_output(out.as_deref(), &write_config(&c))
        }
        Command::Speeds { densities, out } => {
            let t = densities
                .table()?
                .ok_or_else(|| CliError::Usage("give --rho or --alpha".into()))?;
            write_output(out.as_deref(), &write_speeds(&t))
        }
        Command::Track {
            io,
            steps,
            tags,
            margin,
        } => {
            let c = read_config(&read_input(io.input.as_deref())?)?;
            let t = select_tags(&c, tags, tags, margin);
            let traj = track_trajectories(&c, steps, &t, margin)?;
            write_output(io.out.as_deref(), &write_trajectories(&traj))
        }
        Command::Render {
            io,
            steps,
            format,
            repeat,
            densities,
        } => {
            let format: ImageFormat = format.parse().map_err(CliError::Usage)?;
            let c = read_config(&read_input(io.input.as_deref())?)?;
            let mut raster = Raster::evolve(&c, steps);
            if let (ImageFormat::Pgm, Some(table)) = (format, densities.table()?) {
                for s in identify(&c).iter().filter(|s| s.size() <= table.len()) {
                    raster.slope_line(s.leftmost() as i64, table.v[s.size() - 1]);
                }
            }
            write_output(io.out.as_deref(), &raster.render(format, repeat))
        }
        Command::Selftest { n, seed } => {
            let checks = run_suite(n, seed);
            let mut failed = 0;
            for c in &checks {
                println!("{c}");
                failed += c.failures;
            }
            if failed > 0 {
                Err(CliError::Consistency(format!(
                    "{failed} selftest cases failed"
                )))
            } else {
                Ok(())
            }
        }
        Command::Run { params, out, seed } => {
            let mut p = Params::parse(&read_input(params.as_deref())?)?;
            if let Some(s) = seed {
                p.seed = s;
            }
            run(&out, &p).map(|_| ())
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("bbs: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_valid() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(main_with_args(["bbs", "frobnicate"]), 2);
        assert_eq!(main_with_args(["bbs", "speeds"]), 2);
        assert_eq!(main_with_args(["bbs", "speeds", "--rho", "0.1,x"]), 2);
        assert_eq!(main_with_args(["bbs", "sample", "--lambda", "0.7"]), 2);
    }
}
