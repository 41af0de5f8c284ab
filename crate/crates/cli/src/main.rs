//! `kdl`: build plat knots, measure their distortion, and compare against
//! the closed-form bounds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod sweep;

/// Exit statuses shared by every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    User = 2,
    Budget = 3,
    Invariant = 4,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Parser)]
#[command(
    name = "kdl",
    version,
    about = "Distortion of polygonal knots and bounds for highly twisted plats"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
pub struct PlatArgs {
    /// Number of bridges (the plat has 2b strands).
    #[arg(long)]
    pub b: usize,
    /// Number of twist rows (odd, at least 4b(b-2)).
    #[arg(long)]
    pub n: usize,
    /// Minimum crossings per twist region.
    #[arg(long)]
    pub t: i32,
    /// Put exactly t crossings in every region instead of the odd-first-row,
    /// even-elsewhere pattern.
    #[arg(long)]
    pub uniform: bool,
}

impl PlatArgs {
    pub fn spec(&self) -> kdl_core::Result<kdl_core::PlatSpec> {
        if self.uniform {
            kdl_core::PlatSpec::uniform_alternating(self.b, self.n, self.t)
        } else {
            kdl_core::plat::make_alternating_jm_spec(self.b, self.n, self.t)
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sampled,
    Certified,
}

#[derive(Subcommand)]
enum Command {
    /// Build a plat knot and write its curve JSON.
    Build {
        #[command(flatten)]
        plat: PlatArgs,
        #[arg(long, default_value_t = kdl_core::plat::DEFAULT_SAMPLES_PER_HALF_TWIST)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the polyline as a Wavefront OBJ file.
        #[arg(long)]
        obj: Option<PathBuf>,
    },
    /// Compute the distortion of a curve file and print it as JSON.
    Distortion {
        curve: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Certified)]
        mode: Mode,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        /// Uniform samples added to the vertices in sampled mode.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        /// Cell expansion cap; overrides KDL_BUDGET.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        sequential: bool,
    },
    /// Print the bounds report for a plat, optionally measured on a curve.
    Bounds {
        #[command(flatten)]
        plat: PlatArgs,
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long, default_value_t = kdl_core::bounds::ALTERNATING_REPRESENTATIVITY)]
        representativity: u32,
    },
    /// Sample the single-arc and adjacent-arc ratio estimates for one twist count.
    Verify {
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 128)]
        samples: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// One CSV row per b with n = 4b(b-2)+1.
    Sweep {
        #[arg(long)]
        b_min: usize,
        #[arg(long)]
        b_max: usize,
        #[arg(long)]
        t: i32,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = kdl_core::plat::DEFAULT_SAMPLES_PER_HALF_TWIST)]
        samples: usize,
        /// Certify every row, not just b ≤ 4.
        #[arg(long)]
        certify_all: bool,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Lower the sampled distortion of a curve by annealing its vertices.
    Refine {
        curve: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        iterations: u64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 0.02)]
        floor: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.9999)]
        cooling: f64,
        #[arg(long, default_value_t = 1e-3)]
        temperature: f64,
        #[arg(long, default_value_t = 128)]
        samples: usize,
        /// Write the improvement log as CSV.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build {
            plat,
            samples,
            out,
            obj,
        } => commands::build(plat, samples, &out, obj.as_deref()),
        Command::Distortion {
            curve,
            mode,
            eps,
            samples,
            budget,
            sequential,
        } => commands::distortion(&curve, mode, eps, samples, budget, sequential),
        Command::Bounds {
            plat,
            curve,
            representativity,
        } => commands::bounds(plat, curve.as_deref(), representativity),
        Command::Verify {
            t,
            samples,
            inject_fault,
        } => commands::verify(t, samples, inject_fault),
        Command::Sweep {
            b_min,
            b_max,
            t,
            eps,
            samples,
            certify_all,
            csv,
        } => sweep::run(
            sweep::SweepArgs {
                b_min,
                b_max,
                t,
                eps,
                samples,
                certify_all,
            },
            &csv,
        ),
        Command::Refine {
            curve,
            out,
            iterations,
            step,
            floor,
            seed,
            cooling,
            temperature,
            samples,
            log,
        } => {
            let cfg = kdl_core::RefineConfig {
                iterations,
                step,
                clearance_floor: floor,
                seed,
                cooling,
                temperature,
                samples,
            };
            commands::refine(&curve, &out, &cfg, log.as_deref())
        }
    };
    match result {
        Ok(status) => status.into(),
        Err(err) => {
            eprintln!("error: {err:#}");
            status_of(&err).into()
        }
    }
}

fn status_of(err: &anyhow::Error) -> Status {
    match err.downcast_ref::<kdl_core::Error>() {
        Some(kdl_core::Error::BudgetExceeded(_)) => Status::Budget,
        _ => Status::User,
    }
}
