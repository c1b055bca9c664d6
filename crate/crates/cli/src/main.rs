use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use gradelab::harness::{rows_to_csv, write_rows};
use gradelab::{
    check_hypotheses, perf_mc, perf_quad, reproduce, run_sweep, theorem_verdict, CheckOptions,
    ExperimentConfig, FigureId, GradingScheme, MotivationParams, QualityPrior, ScoreModel, Setup,
    TheoremId,
};

#[derive(Parser)]
#[command(name = "gradelab", version, about = "Letter grades vs numerical scores: simulation and audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Mc,
    Quad,
}

#[derive(Subcommand)]
enum Command {
    /// Expected quality change under one grading scheme, as JSON.
    Perf {
        /// `uniform` or `tn:MU,SIGMA`
        #[arg(long, default_value = "tn:0.65,0.12")]
        prior: QualityPrior,
        /// `exact`, `tn:GAMMA`, `tri:W`, `rect:W` (append `:raw` to skip renormalization)
        #[arg(long, default_value = "tn:0.015")]
        model: ScoreModel,
        /// `ns`, `ulg:T` or `cuts:[c0,...,cT]`
        #[arg(long, default_value = "ns")]
        scheme: GradingScheme,
        #[arg(long)]
        alpha_m: f64,
        #[arg(long)]
        alpha_d: f64,
        /// Number of evaluations; quadrature supports only r = 2.
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, default_value_t = 5000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "mc")]
        method: MethodArg,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Audits theorem hypotheses; prints the assumption report, or a verdict
    /// embedding it when `--theorem` is given.
    Check {
        #[arg(long)]
        theorem: Option<TheoremId>,
        #[arg(long, default_value = "uniform")]
        prior: QualityPrior,
        #[arg(long, default_value = "tn:0.015")]
        model: ScoreModel,
        /// Number of letter grades compared with numerical scoring.
        #[arg(long, default_value_t = 4)]
        grades: u32,
        #[arg(long, default_value_t = 0.8)]
        alpha_m: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha_d: f64,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Runs a JSON-configured sweep and writes CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerates the config and CSV behind a figure.
    Reproduce {
        #[arg(long)]
        figure: FigureId,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Perf {
            prior,
            model,
            scheme,
            alpha_m,
            alpha_d,
            r,
            n,
            seed,
            method,
            tol,
        } => {
            let params = MotivationParams::new(alpha_m, alpha_d)?;
            let est = match method {
                MethodArg::Mc => perf_mc(&prior, &model, &scheme, &params, n, r, seed)?,
                MethodArg::Quad => {
                    if r != 2 {
                        return Err(gradelab::Error::InvalidParameter(format!(
                            "quadrature evaluates a single update (r = 2), got r = {r}"
                        ))
                        .into());
                    }
                    perf_quad(&prior, &model, &scheme, &params, tol)?
                }
            };
            print_json(&est)
        }
        Command::Check {
            theorem,
            prior,
            model,
            grades,
            alpha_m,
            alpha_d,
            grid,
            tol,
        } => {
            let setup = Setup {
                prior,
                model,
                grades,
                params: MotivationParams::new(alpha_m, alpha_d)?,
            };
            let opts = CheckOptions {
                grid_size: grid,
                tol,
                ..CheckOptions::default()
            };
            match theorem {
                Some(id) => print_json(&theorem_verdict(id, &setup, &opts)?),
                None => print_json(&check_hypotheses(&setup, &opts)?),
            }
        }
        Command::Sweep { config, out } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let config = ExperimentConfig::from_json(&text)?;
            let rows = run_sweep(&config)?;
            match out {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    write_rows(std::io::BufWriter::new(file), &rows)?;
                }
                None => print!("{}", rows_to_csv(&rows)),
            }
            Ok(())
        }
        Command::Reproduce {
            figure,
            out_dir,
            seed,
        } => {
            let path = reproduce(figure, &out_dir, seed)?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<gradelab::Error>() {
                Some(e) if e.is_convergence() => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
