use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qcg::config::{ExperimentConfig, ProblemKind};
use qcg::runner::{self, RunOutcome, EXIT_ERROR};
use qcg::verify::{run_checks, VerifyOptions};

#[derive(Parser)]
#[command(name = "qcg", version, about = "Quaternion conjugate-gradient-type solvers: experiments and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Overrides {
    /// Solver to run (repeatable): qnherlq, qnherqr, qgmres.
    #[arg(long = "solver")]
    solvers: Vec<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    maxit: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn apply(self, cfg: &mut ExperimentConfig) {
        if !self.solvers.is_empty() {
            cfg.solvers = self.solvers;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(m) = self.maxit {
            cfg.maxit = m;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = self.out {
            cfg.out = o;
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the reference checks; exits 1 if any fails.
    Verify {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Use a Hermitian matrix and check that T is real symmetric.
        #[arg(long)]
        hermitian: bool,
        /// Corrupt the real representation (negative control).
        #[arg(long)]
        corrupt: bool,
    },
    /// Deblur a square PNG with the multichannel Gaussian-uniform blur.
    Deblur {
        /// Input image; the bundled 32x32 test image when omitted.
        #[arg(long)]
        image: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[arg(long, default_value_t = 7)]
        s: usize,
        /// Treat the image as RGBA with alpha on the real part.
        #[arg(long)]
        rgba: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Solve the Lorenz filter system of size n.
    FilterDemo {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long)]
        noise_sigma: Option<f64>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn report(outcome: &RunOutcome) {
    for o in &outcome.outcomes {
        let r = &o.report;
        print!(
            "{:8} {:15} it={:5} rr={:.3e} cpu={:.3}s",
            o.kind.name(),
            r.status.as_str(),
            r.iters,
            r.final_rr,
            r.wall_seconds
        );
        if let Some(s) = &o.scores {
            print!(
                " psnr {:.2} -> {:.2} dB, ssim {:.4}",
                s.psnr_blurred, s.psnr_restored, s.ssim_restored
            );
        }
        println!();
    }
    println!("artifacts in {}", outcome.out_dir.display());
}

fn execute(mut cfg: ExperimentConfig, overrides: Overrides) -> anyhow::Result<i32> {
    overrides.apply(&mut cfg);
    let outcome = runner::run(&cfg)?;
    report(&outcome);
    Ok(outcome.exit_code)
}

fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Run { config, overrides } => execute(ExperimentConfig::load(&config)?, overrides),
        Command::Verify {
            n,
            seed,
            hermitian,
            corrupt,
        } => {
            let checks = run_checks(&VerifyOptions {
                n,
                seed,
                hermitian,
                corrupt,
            });
            for c in &checks {
                println!("{c}");
            }
            Ok(if checks.iter().all(|c| c.passed) { 0 } else { 1 })
        }
        Command::Deblur {
            image,
            sigma,
            r,
            s,
            rgba,
            overrides,
        } => {
            let mut cfg = ExperimentConfig::new(ProblemKind::BlurMultichannel);
            cfg.solvers = vec!["qnherqr".into()];
            cfg.image = image;
            cfg.sigma = sigma;
            cfg.r = r;
            cfg.s = s;
            cfg.image_mode = if rgba { "rgba" } else { "rgb" }.into();
            execute(cfg, overrides)
        }
        Command::FilterDemo {
            n,
            noise_sigma,
            overrides,
        } => {
            let mut cfg = ExperimentConfig::new(ProblemKind::LorenzFilter);
            cfg.n = Some(n);
            cfg.noise_sigma = noise_sigma;
            execute(cfg, overrides)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
