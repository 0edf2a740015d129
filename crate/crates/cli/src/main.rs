use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use openwar_cli::{cmd_boot, cmd_pythag, cmd_simulate, cmd_validate, cmd_war, CliError, CliResult, RunConfig};

#[derive(Parser)]
#[command(name = "openwar", version, about = "Conservation-of-runs WAR from play-by-play data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a season file against the record schema.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Generate a synthetic season.
    Simulate {
        #[arg(long, default_value_t = 50)]
        games: usize,
        #[arg(long, env = "OPENWAR_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        teams: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Point WAR for every player.
    War {
        #[command(flatten)]
        run: RunArgs,
        /// Also write the offensive ledger and fielding coefficients.
        #[arg(long)]
        ledgers: bool,
    },
    /// Resampled WAR quantiles.
    Boot {
        #[command(flatten)]
        run: RunArgs,
        /// Two player ids; writes Pr(WAR_a > WAR_b).
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        compare: Option<Vec<String>>,
    },
    /// Runs per win from the Pythagorean exponent and run environment.
    Pythag {
        #[arg(long = "pythag-p", default_value_t = 2.0)]
        p: f64,
        #[arg(long = "pythag-r", default_value_t = 810.0)]
        r: f64,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, env = "OPENWAR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = openwar::uncertainty::DEFAULT_REPLICATES)]
    replicates: usize,
    #[arg(long, default_value_t = 390)]
    cutoff_pos: usize,
    #[arg(long, default_value_t = 360)]
    cutoff_pitch: usize,
    #[arg(long)]
    runs_per_win: Option<f64>,
    #[arg(long)]
    pythag_p: Option<f64>,
    #[arg(long)]
    pythag_r: Option<f64>,
    #[arg(long)]
    bandwidth_x: Option<f64>,
    #[arg(long)]
    bandwidth_y: Option<f64>,
    #[arg(long, overrides_with = "lenient")]
    strict: bool,
    #[arg(long, overrides_with = "strict")]
    lenient: bool,
    #[arg(long)]
    threads: Option<usize>,
}

impl From<RunArgs> for RunConfig {
    fn from(a: RunArgs) -> Self {
        RunConfig {
            input: a.input,
            out: a.out,
            seed: a.seed,
            replicates: a.replicates,
            cutoff_pos: a.cutoff_pos,
            cutoff_pitch: a.cutoff_pitch,
            runs_per_win: a.runs_per_win,
            pythag_p: a.pythag_p,
            pythag_r: a.pythag_r,
            bandwidth_x: a.bandwidth_x,
            bandwidth_y: a.bandwidth_y,
            strict: !a.lenient,
            threads: a.threads,
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Validate { input } => {
            let report = cmd_validate(&input)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            if !report.clean {
                return Err(CliError::Validation(format!(
                    "{} records dropped, {} warnings",
                    report.dropped.len(),
                    report.warnings.len()
                )));
            }
        }
        Command::Simulate { games, seed, teams, out } => {
            let data = cmd_simulate(games, seed, teams, &out)?;
            eprintln!("wrote {} plate appearances to {}", data.len(), out.display());
        }
        Command::War { run, ledgers } => {
            let config = RunConfig::from(run);
            let season = cmd_war(&config, ledgers)?;
            let v = &season.valuation;
            eprintln!(
                "{} players, total RAA {:.3e}, total WAR {:.2}, outputs in {}",
                v.players.len(),
                v.total_raa(),
                v.total_war(),
                config.out.display()
            );
        }
        Command::Boot { run, compare } => {
            let config = RunConfig::from(run);
            let pair = compare.as_ref().map(|c| (c[0].as_str(), c[1].as_str()));
            let dist = cmd_boot(&config, pair)?;
            eprintln!("{} replicates for {} players", dist.replicates, dist.players.len());
        }
        Command::Pythag { p, r } => println!("{:?}", cmd_pythag(p, r)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprintln!("{}", CliError::Config(e.to_string().trim().to_string()).to_json());
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
