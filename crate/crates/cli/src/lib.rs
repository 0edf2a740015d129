//! Batch front end for the openwar pipeline.
//!
//! Each command reads a [`RunConfig`], writes its tables under the output
//! directory and echoes the config into every file it produces: CSV files
//! start with a `# config: {json}` line, JSON files carry a `config` field.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use openwar::defense::write_surface_grid;
use openwar::numerics::Bandwidth;
use openwar::pbp::{generate_synthetic_season, parse_season, write_season, ParseOutcome, SeasonDataset, Strictness, SynthConfig};
use openwar::pipeline::{evaluate_season, PipelineConfig, SeasonValuation};
use openwar::uncertainty::{bootstrap_war, compare_players, BootstrapConfig, WarDistribution};
use openwar::valuation::{runs_per_win, Cutoffs, DEFAULT_RUNS_PER_WIN};
use serde::Serialize;
use serde_json::json;

pub const SURFACE_STEP: f64 = 10.0;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Config(_) => "config",
            CliError::Numeric(_) => "numeric",
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() }).to_string()
    }
}

impl From<openwar::Error> for CliError {
    fn from(e: openwar::Error) -> Self {
        use openwar::Error::*;
        let msg = e.to_string();
        match e {
            Schema(_) | Taxonomy(_) | Record { .. } | Chain { .. } | Csv(_) | UnknownPlayer(_) => {
                CliError::Validation(msg)
            }
            Config(_) | NonPositive(_) | Bandwidth(..) | Probability(_) | MissingPlayer(_) | Io(_) => {
                CliError::Config(msg)
            }
            _ => CliError::Numeric(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
    pub replicates: usize,
    pub cutoff_pos: usize,
    pub cutoff_pitch: usize,
    pub runs_per_win: Option<f64>,
    pub pythag_p: Option<f64>,
    pub pythag_r: Option<f64>,
    pub bandwidth_x: Option<f64>,
    pub bandwidth_y: Option<f64>,
    pub strict: bool,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let cutoffs = Cutoffs::default();
        Self {
            input: PathBuf::new(),
            out: PathBuf::from("."),
            seed: 0,
            replicates: openwar::uncertainty::DEFAULT_REPLICATES,
            cutoff_pos: cutoffs.position_players,
            cutoff_pitch: cutoffs.pitchers,
            runs_per_win: None,
            pythag_p: None,
            pythag_r: None,
            bandwidth_x: None,
            bandwidth_y: None,
            strict: true,
            threads: None,
        }
    }
}

fn positive(name: &str, v: Option<f64>) -> CliResult<()> {
    match v {
        Some(x) if !(x.is_finite() && x > 0.0) => Err(CliError::Config(format!("{name} must be a positive number, got {x}"))),
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        positive("runs_per_win", self.runs_per_win)?;
        positive("pythag_p", self.pythag_p)?;
        positive("pythag_r", self.pythag_r)?;
        positive("bandwidth_x", self.bandwidth_x)?;
        positive("bandwidth_y", self.bandwidth_y)?;
        if self.replicates == 0 {
            return Err(CliError::Config("replicates must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        if self.bandwidth_x.is_some() != self.bandwidth_y.is_some() {
            return Err(CliError::Config("bandwidth_x and bandwidth_y go together".into()));
        }
        if self.pythag_p.is_some() != self.pythag_r.is_some() {
            return Err(CliError::Config("pythag_p and pythag_r go together".into()));
        }
        if self.runs_per_win.is_some() && self.pythag_p.is_some() {
            return Err(CliError::Config("give runs_per_win or pythag_p/pythag_r, not both".into()));
        }
        Ok(())
    }

    /// Explicit value, else the Pythagorean conversion, else the default.
    pub fn resolved_runs_per_win(&self) -> CliResult<f64> {
        match (self.runs_per_win, self.pythag_p, self.pythag_r) {
            (Some(v), _, _) => Ok(v),
            (None, Some(p), Some(r)) => Ok(runs_per_win(p, r)?),
            _ => Ok(DEFAULT_RUNS_PER_WIN),
        }
    }

    pub fn strictness(&self) -> Strictness {
        if self.strict {
            Strictness::Strict
        } else {
            Strictness::Lenient
        }
    }

    pub fn pipeline(&self) -> CliResult<PipelineConfig> {
        let bandwidth = match (self.bandwidth_x, self.bandwidth_y) {
            (Some(x), Some(y)) => Some(Bandwidth { x, y }),
            _ => None,
        };
        Ok(PipelineConfig {
            cutoffs: Cutoffs {
                position_players: self.cutoff_pos,
                pitchers: self.cutoff_pitch,
            },
            runs_per_win: self.resolved_runs_per_win()?,
            bandwidth,
            strictness: self.strictness(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    /// Runs `f` on a pool sized by `threads`, or the global pool.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> CliResult<T> {
        match self.threads {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::Config(e.to_string()))?;
                Ok(pool.install(f))
            }
            None => Ok(f()),
        }
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Opens `path` and writes the config comment line.
fn csv_with_config(path: &Path, config: &serde_json::Value) -> CliResult<BufWriter<File>> {
    let mut w = create(path)?;
    writeln!(w, "# config: {config}")?;
    Ok(w)
}

fn write_json(path: &Path, value: &serde_json::Value) -> CliResult<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Numeric(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read_season(input: &Path, strictness: Strictness) -> CliResult<ParseOutcome> {
    let file = File::open(input).map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
    Ok(parse_season(std::io::BufReader::new(file), strictness)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub input: PathBuf,
    pub records: usize,
    pub dropped: Vec<String>,
    pub warnings: Vec<String>,
    pub clean: bool,
}

/// Reads every record, collecting violations instead of stopping at the
/// first. Schema problems still abort.
pub fn cmd_validate(input: &Path) -> CliResult<ValidationReport> {
    let outcome = read_season(input, Strictness::Lenient)?;
    let fmt = |d: &openwar::pbp::Diagnostic| format!("{}/{}: {}", d.game_id, d.pa_index, d.message);
    Ok(ValidationReport {
        input: input.to_path_buf(),
        records: outcome.dataset.len(),
        dropped: outcome.dropped.iter().map(fmt).collect(),
        warnings: outcome.warnings.iter().map(fmt).collect(),
        clean: outcome.is_clean(),
    })
}

pub fn cmd_simulate(games: usize, seed: u64, teams: Option<usize>, out: &Path) -> CliResult<SeasonDataset> {
    if games == 0 {
        return Err(CliError::Config("games must be at least 1".into()));
    }
    let mut config = SynthConfig::new(games, seed);
    if let Some(t) = teams {
        config.teams = t;
    }
    let data = generate_synthetic_season(&config)?;
    let echo = json!({ "games": games, "seed": seed, "teams": config.teams });
    let mut w = csv_with_config(out, &echo)?;
    write_season(&data, &mut w)?;
    w.flush()?;
    Ok(data)
}

/// Files written by [`cmd_war`].
pub const WAR_OUTPUTS: [&str; 4] = ["valuation.csv", "valuation.json", "re_matrix.csv", "surface_grid.csv"];

fn load_and_evaluate(config: &RunConfig) -> CliResult<(SeasonValuation, PipelineConfig)> {
    config.validate()?;
    let pipeline = config.pipeline()?;
    let outcome = read_season(&config.input, pipeline.strictness)?;
    for d in &outcome.dropped {
        log::warn!("dropped {}/{}: {}", d.game_id, d.pa_index, d.message);
    }
    let season = config.install(|| evaluate_season(&outcome.dataset, &pipeline))??;
    Ok((season, pipeline))
}

/// Point valuation. Writes the valuation table (CSV and JSON), the run
/// expectancy matrix and the out-probability surface; with `ledgers`, also
/// the offensive ledger and fielding model coefficients.
pub fn cmd_war(config: &RunConfig, ledgers: bool) -> CliResult<SeasonValuation> {
    let (season, pipeline) = load_and_evaluate(config)?;
    let echo = config.to_json();
    fs::create_dir_all(&config.out)?;
    let out = |name: &str| config.out.join(name);

    let mut w = csv_with_config(&out("valuation.csv"), &echo)?;
    season.valuation.write_csv(&mut w)?;
    w.flush()?;

    let v = &season.valuation;
    write_json(
        &out("valuation.json"),
        &json!({
            "config": echo,
            "runs_per_win": pipeline.runs_per_win,
            "bandwidth": season.defense.surface.bandwidth(),
            "total_raa": v.total_raa(),
            "total_war": v.total_war(),
            "excluded_half_innings": season.excluded_half_innings,
            "replacement": {
                "cutoffs": v.pool.cutoffs,
                "players": v.pool.replacement_count(),
                "rates": v.pool.rates,
                "empty_components": v.pool.empty_components,
                "unfilled_roles": v.pool.unfilled_roles,
            },
            "players": v.players,
        }),
    )?;

    let mut w = csv_with_config(&out("re_matrix.csv"), &echo)?;
    season.matrix.write_csv(&mut w)?;
    w.flush()?;

    let mut w = csv_with_config(&out("surface_grid.csv"), &echo)?;
    write_surface_grid(&season.defense.surface, SURFACE_STEP, &mut w)?;
    w.flush()?;

    if ledgers {
        let mut w = csv_with_config(&out("offense_ledger.csv"), &echo)?;
        season.offense.write_csv(&mut w)?;
        w.flush()?;
        let mut w = csv_with_config(&out("fielding_coefficients.csv"), &echo)?;
        season.defense.models.write_coefficients_csv(&mut w)?;
        w.flush()?;
    }
    Ok(season)
}

/// Resampled WAR quantiles, plus `Pr(WAR_a > WAR_b)` when a pair is given.
pub fn cmd_boot(config: &RunConfig, pair: Option<(&str, &str)>) -> CliResult<WarDistribution> {
    let (season, pipeline) = load_and_evaluate(config)?;
    let echo = config.to_json();
    fs::create_dir_all(&config.out)?;
    let boot = BootstrapConfig::new(config.replicates, config.seed);
    let point = season.point_war();
    let dist = config.install(|| {
        bootstrap_war(&season.bundles, &season.valuation.pool, pipeline.runs_per_win, &point, &boot)
    })??;

    let mut w = csv_with_config(&config.out.join("war_quantiles.csv"), &echo)?;
    dist.write_quantiles_csv(&mut w)?;
    w.flush()?;

    if let Some((a, b)) = pair {
        let c = compare_players(&dist, a, b)?;
        write_json(&config.out.join("comparison.json"), &json!({ "config": echo, "comparison": c }))?;
    }
    Ok(dist)
}

pub fn cmd_pythag(p: f64, r: f64) -> CliResult<f64> {
    Ok(runs_per_win(p, r)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn season_file(dir: &Path, games: usize, seed: u64) -> PathBuf {
        let path = dir.join("season.csv");
        cmd_simulate(games, seed, None, &path).unwrap();
        path
    }

    #[test]
    fn pythag_default() {
        assert_eq!(format!("{:?}", cmd_pythag(2.0, 810.0).unwrap()), "10.0");
        assert_eq!(cmd_pythag(0.0, 810.0).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn config_checks() {
        let ok = RunConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            RunConfig { runs_per_win: Some(-1.0), ..ok.clone() },
            RunConfig { replicates: 0, ..ok.clone() },
            RunConfig { bandwidth_x: Some(5.0), ..ok.clone() },
            RunConfig { runs_per_win: Some(9.0), pythag_p: Some(2.0), pythag_r: Some(700.0), ..ok.clone() },
            RunConfig { threads: Some(0), ..ok.clone() },
        ] {
            assert_eq!(bad.validate().unwrap_err().exit_code(), 2, "{bad:?}");
        }
        let py = RunConfig { pythag_p: Some(2.0), pythag_r: Some(810.0), ..ok };
        assert_eq!(py.resolved_runs_per_win().unwrap(), 10.0);
    }

    #[test]
    fn simulate_then_war_conserves_runs() {
        let dir = tempfile::tempdir().unwrap();
        let input = season_file(dir.path(), 20, 3);
        let config = RunConfig {
            input,
            out: dir.path().join("out"),
            cutoff_pos: 48,
            cutoff_pitch: 42,
            ..RunConfig::default()
        };
        let season = cmd_war(&config, true).unwrap();
        let scale: f64 = season.deltas().iter().map(|d| d.abs()).sum();
        assert!(season.valuation.total_raa().abs() < 1e-8 * scale);
        for name in WAR_OUTPUTS.iter().chain(&["offense_ledger.csv", "fielding_coefficients.csv"]) {
            let text = fs::read_to_string(config.out.join(name)).unwrap();
            assert!(text.replace(" ", "").contains("\"cutoff_pos\":48"), "{name}");
        }
        let csv = fs::read_to_string(config.out.join("valuation.csv")).unwrap();
        assert!(csv.lines().next().unwrap().starts_with("# config: {"));
        assert!(csv.lines().nth(1).unwrap().starts_with("player_id,name,PA,BF"));
    }

    #[test]
    fn validation_reports_problems() {
        let dir = tempfile::tempdir().unwrap();
        let input = season_file(dir.path(), 2, 1);
        let report = cmd_validate(&input).unwrap();
        assert!(report.clean && report.records > 0);

        let text = fs::read_to_string(&input).unwrap().replacen(",Single,", ",Bloop,", 1);
        let bad = dir.path().join("bad.csv");
        fs::write(&bad, text).unwrap();
        let report = cmd_validate(&bad).unwrap();
        assert!(!report.clean);
        assert_eq!(report.dropped.len(), 1);

        let strict = RunConfig { input: bad, out: dir.path().join("o"), ..RunConfig::default() };
        assert_eq!(cmd_war(&strict, false).unwrap_err().exit_code(), 1);
        let missing = RunConfig { input: dir.path().join("none.csv"), ..strict };
        assert_eq!(cmd_war(&missing, false).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn boot_writes_quantiles_and_comparison() {
        let dir = tempfile::tempdir().unwrap();
        let input = season_file(dir.path(), 20, 5);
        let config = RunConfig {
            input,
            out: dir.path().join("out"),
            replicates: 30,
            seed: 4,
            cutoff_pos: 48,
            cutoff_pitch: 42,
            threads: Some(2),
            ..RunConfig::default()
        };
        let dist = cmd_boot(&config, None).unwrap();
        let (a, b) = (dist.players[0].clone(), dist.players[1].clone());
        cmd_boot(&config, Some((&a, &b))).unwrap();
        let cmp: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(config.out.join("comparison.json")).unwrap()).unwrap();
        assert_eq!(cmp["comparison"]["replicates"], 30);
        assert_eq!(cmp["config"]["seed"], 4);
        assert_eq!(cmd_boot(&config, Some((&a, "nobody"))).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn error_json_is_machine_readable() {
        let e = CliError::Config("bad".into());
        let v: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["exit_code"], 2);
        assert_eq!(v["error"], "config");
    }
}
