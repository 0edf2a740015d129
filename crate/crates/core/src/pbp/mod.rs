//! Play-by-play data model, file format and synthetic seasons.

mod csv_io;
pub mod field;
mod record;
mod roles;
mod state;
pub mod synth;
mod taxonomy;
mod totals;

pub use csv_io::{
    check_chains, parse_season, to_csv_string, write_season, Diagnostic, ParseOutcome, Strictness,
    OPTIONAL_COLUMNS, REQUIRED_COLUMNS,
};
pub use record::{HalfInning, PlateAppearance, Runner, SeasonDataset};
pub use roles::{platoon_advantage, BatterPosition, FieldPosition, Half, Hand};
pub use state::{Base, Destination, GameState};
pub use synth::{generate_synthetic_season, SynthConfig};
pub use taxonomy::EventType;
pub use totals::{aggregate_team_totals, TeamTotals};
