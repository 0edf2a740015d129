//! Frozen CSV schema for play-by-play records.

use std::collections::HashMap;
use std::io::{Read, Write};

use log::warn;

use super::{
    Base, BatterPosition, Destination, EventType, FieldPosition, GameState, Half, Hand,
    PlateAppearance, Runner, SeasonDataset,
};
use crate::error::{Error, Result};

/// Required columns, in canonical order.
pub const REQUIRED_COLUMNS: [&str; 34] = [
    "game_id",
    "pa_index",
    "inning",
    "half",
    "batter_id",
    "pitcher_id",
    "start_outs",
    "start_bases",
    "end_outs",
    "end_bases",
    "runner1_id",
    "runner2_id",
    "runner3_id",
    "runner1_dest",
    "runner2_dest",
    "runner3_dest",
    "batter_dest",
    "runs_scored",
    "event_type",
    "ballpark_id",
    "batter_hand",
    "pitcher_hand",
    "batter_position",
    "f1",
    "f2",
    "f3",
    "f4",
    "f5",
    "f6",
    "f7",
    "f8",
    "f9",
    "bip_x",
    "bip_y",
];

/// Columns that may be omitted from the header.
pub const OPTIONAL_COLUMNS: [&str; 3] = ["credited_fielder_position", "away_team", "home_team"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Any violation aborts the parse.
    #[default]
    Strict,
    /// Violating records are dropped and counted; chain breaks are warnings.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub game_id: String,
    pub pa_index: u32,
    pub message: String,
}

/// Result of a parse: the dataset plus what was dropped or flagged.
#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub dataset: SeasonDataset,
    pub dropped: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

impl ParseOutcome {
    pub fn is_clean(&self) -> bool {
        self.dropped.is_empty() && self.warnings.is_empty()
    }
}

struct Columns(HashMap<String, usize>);

impl Columns {
    fn from_header(header: &csv::StringRecord) -> Result<Self> {
        let mut map = HashMap::new();
        for (i, name) in header.iter().enumerate() {
            let name = name.trim();
            if !REQUIRED_COLUMNS.contains(&name) && !OPTIONAL_COLUMNS.contains(&name) {
                return Err(Error::Schema(format!("unexpected column {name:?}")));
            }
            if map.insert(name.to_string(), i).is_some() {
                return Err(Error::Schema(format!("duplicate column {name:?}")));
            }
        }
        let missing: Vec<_> = REQUIRED_COLUMNS
            .iter()
            .filter(|c| !map.contains_key(**c))
            .collect();
        if !missing.is_empty() {
            return Err(Error::Schema(format!("missing columns {missing:?}")));
        }
        Ok(Columns(map))
    }

    fn get<'r>(&self, rec: &'r csv::StringRecord, name: &str) -> &'r str {
        self.0
            .get(name)
            .and_then(|&i| rec.get(i))
            .map(str::trim)
            .unwrap_or("")
    }
}

enum RowError {
    Taxonomy(String),
    Invalid(String),
}

fn opt(s: &str) -> Option<&str> {
    (!s.is_empty()).then_some(s)
}

fn num<T: std::str::FromStr>(s: &str, col: &str) -> Result<T, RowError> {
    s.parse()
        .map_err(|_| RowError::Invalid(format!("column {col}: cannot parse {s:?}")))
}

fn required<'a>(s: &'a str, col: &str) -> Result<&'a str, RowError> {
    opt(s).ok_or_else(|| RowError::Invalid(format!("column {col} is empty")))
}

fn decode_row(cols: &Columns, rec: &csv::StringRecord) -> Result<PlateAppearance, RowError> {
    let g = |name: &str| cols.get(rec, name);
    let state = |o: &str, b: &str| -> Result<GameState, RowError> {
        let outs: u8 = num(g(o), o)?;
        let bases: u8 = num(g(b), b)?;
        GameState::new(outs, bases)
            .ok_or_else(|| RowError::Invalid(format!("invalid state ({outs}, {bases})")))
    };
    let event_label = g("event_type");
    let event_type = EventType::from_label(event_label)
        .ok_or_else(|| RowError::Taxonomy(event_label.to_string()))?;
    let dest = |col: &str| -> Result<Option<Destination>, RowError> {
        opt(g(col))
            .map(|s| {
                Destination::from_code(s)
                    .ok_or_else(|| RowError::Invalid(format!("column {col}: bad destination {s:?}")))
            })
            .transpose()
    };
    let hand = |col: &str| -> Result<Hand, RowError> {
        Hand::from_code(g(col)).ok_or_else(|| RowError::Invalid(format!("column {col}: bad hand")))
    };

    let mut runners: [Option<Runner>; 3] = Default::default();
    for base in Base::ALL {
        let n = base.number();
        let id_col = format!("runner{n}_id");
        let dest_col = format!("runner{n}_dest");
        match (opt(g(&id_col)), dest(&dest_col)?) {
            (Some(id), Some(d)) => {
                runners[base as usize] = Some(Runner {
                    id: id.to_string(),
                    dest: d,
                })
            }
            (None, None) => {}
            _ => {
                return Err(RowError::Invalid(format!(
                    "{id_col} and {dest_col} must be both present or both empty"
                )))
            }
        }
    }
    let mut fielders: [String; 9] = Default::default();
    for pos in FieldPosition::ALL {
        let col = format!("f{}", pos.number());
        fielders[pos.index()] = required(g(&col), &col)?.to_string();
    }
    let bip_location = match (opt(g("bip_x")), opt(g("bip_y"))) {
        (Some(x), Some(y)) => Some((num::<f64>(x, "bip_x")?, num::<f64>(y, "bip_y")?)),
        (None, None) => None,
        _ => return Err(RowError::Invalid("bip_x and bip_y must be both present or both empty".into())),
    };
    let credited_fielder = opt(g("credited_fielder_position"))
        .map(|s| {
            FieldPosition::from_code(s)
                .ok_or_else(|| RowError::Invalid(format!("bad credited fielder {s:?}")))
        })
        .transpose()?;

    Ok(PlateAppearance {
        game_id: required(g("game_id"), "game_id")?.to_string(),
        pa_index: num(g("pa_index"), "pa_index")?,
        inning: num(g("inning"), "inning")?,
        half: Half::from_code(g("half")).ok_or_else(|| RowError::Invalid("bad half".into()))?,
        batter_id: required(g("batter_id"), "batter_id")?.to_string(),
        pitcher_id: required(g("pitcher_id"), "pitcher_id")?.to_string(),
        start_state: state("start_outs", "start_bases")?,
        end_state: state("end_outs", "end_bases")?,
        runners,
        batter_dest: dest("batter_dest")?
            .ok_or_else(|| RowError::Invalid("batter_dest is empty".into()))?,
        runs_scored: num(g("runs_scored"), "runs_scored")?,
        event_type,
        ballpark_id: required(g("ballpark_id"), "ballpark_id")?.to_string(),
        batter_hand: hand("batter_hand")?,
        pitcher_hand: hand("pitcher_hand")?,
        batter_position: BatterPosition::from_code(g("batter_position"))
            .ok_or_else(|| RowError::Invalid("bad batter_position".into()))?,
        fielders,
        bip_location,
        credited_fielder,
        away_team: opt(g("away_team")).map(str::to_string),
        home_team: opt(g("home_team")).map(str::to_string),
    })
}

/// Parses and validates a season file.
pub fn parse_season<R: Read>(source: R, strictness: Strictness) -> Result<ParseOutcome> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .from_reader(source);
    let header = reader
        .headers()
        .map_err(|e| Error::Schema(format!("unreadable header: {e}")))?
        .clone();
    let cols = Columns::from_header(&header)?;

    let mut records = Vec::new();
    let mut dropped = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row?;
        let game_id = cols.get(&row, "game_id").to_string();
        let pa_index = cols.get(&row, "pa_index").parse().unwrap_or(0);
        let diag = |message: String| Diagnostic {
            game_id: game_id.clone(),
            pa_index,
            message,
        };
        let problem = match decode_row(&cols, &row) {
            Ok(pa) => {
                let v = pa.violations();
                if v.is_empty() {
                    records.push(pa);
                    continue;
                }
                v.join("; ")
            }
            Err(RowError::Taxonomy(label)) => {
                if strictness == Strictness::Strict {
                    return Err(Error::Taxonomy(label));
                }
                format!("unknown event type {label:?}")
            }
            Err(RowError::Invalid(msg)) => msg,
        };
        if strictness == Strictness::Strict {
            return Err(Error::Record {
                game_id,
                pa_index,
                reason: format!("data row {}: {problem}", line + 1),
            });
        }
        warn!("dropping record {game_id}/{pa_index}: {problem}");
        dropped.push(diag(problem));
    }

    let warnings = check_chains(&records, strictness)?;
    Ok(ParseOutcome {
        dataset: SeasonDataset::from_records(records),
        dropped,
        warnings,
    })
}

/// Consecutive plate appearances in a half-inning must hand off their game
/// state. Breaks are errors in strict mode and warnings otherwise.
pub fn check_chains(records: &[PlateAppearance], strictness: Strictness) -> Result<Vec<Diagnostic>> {
    let mut warnings = Vec::new();
    for (i, pa) in records.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| &records[j]);
        let same_half = prev.is_some_and(|p| p.half_inning_key() == pa.half_inning_key());
        let same_game = prev.is_some_and(|p| p.game_id == pa.game_id);
        if same_game && prev.is_some_and(|p| p.pa_index >= pa.pa_index) {
            let d = Diagnostic {
                game_id: pa.game_id.clone(),
                pa_index: pa.pa_index,
                message: "pa_index does not increase within the game".into(),
            };
            if strictness == Strictness::Strict {
                return Err(Error::Record {
                    game_id: d.game_id,
                    pa_index: d.pa_index,
                    reason: d.message,
                });
            }
            warnings.push(d);
        }
        let expected = match prev {
            Some(p) if same_half => p.end_state,
            _ => GameState::START,
        };
        if expected != pa.start_state {
            if strictness == Strictness::Strict {
                return Err(Error::Chain {
                    game_id: pa.game_id.clone(),
                    pa_index: pa.pa_index,
                    expected,
                    found: pa.start_state,
                });
            }
            warnings.push(Diagnostic {
                game_id: pa.game_id.clone(),
                pa_index: pa.pa_index,
                message: format!("state discontinuity: expected {expected}, found {}", pa.start_state),
            });
        }
    }
    Ok(warnings)
}

fn fmt_opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the dataset in the canonical column order, optional columns
/// included.
pub fn write_season<W: Write>(data: &SeasonDataset, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(REQUIRED_COLUMNS.iter().chain(OPTIONAL_COLUMNS.iter()))?;
    for pa in &data.plate_appearances {
        let runner_id = |b: Base| pa.runner(b).map(|r| r.id.clone()).unwrap_or_default();
        let runner_dest = |b: Base| fmt_opt(pa.runner(b).map(|r| r.dest.code()));
        let mut row = vec![
            pa.game_id.clone(),
            pa.pa_index.to_string(),
            pa.inning.to_string(),
            pa.half.code().to_string(),
            pa.batter_id.clone(),
            pa.pitcher_id.clone(),
            pa.start_state.outs().to_string(),
            pa.start_state.bases().to_string(),
            pa.end_state.outs().to_string(),
            pa.end_state.bases().to_string(),
            runner_id(Base::First),
            runner_id(Base::Second),
            runner_id(Base::Third),
            runner_dest(Base::First),
            runner_dest(Base::Second),
            runner_dest(Base::Third),
            pa.batter_dest.code().to_string(),
            pa.runs_scored.to_string(),
            pa.event_type.label().to_string(),
            pa.ballpark_id.clone(),
            pa.batter_hand.code().to_string(),
            pa.pitcher_hand.code().to_string(),
            pa.batter_position.code().to_string(),
        ];
        row.extend(pa.fielders.iter().cloned());
        row.push(fmt_opt(pa.bip_location.map(|l| l.0)));
        row.push(fmt_opt(pa.bip_location.map(|l| l.1)));
        row.push(fmt_opt(pa.credited_fielder.map(|p| p.code())));
        row.push(pa.away_team.clone().unwrap_or_default());
        row.push(pa.home_team.clone().unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(data: &SeasonDataset) -> String {
    let mut buf = Vec::new();
    write_season(data, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}
