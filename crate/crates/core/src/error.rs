use thiserror::Error;

use crate::pbp::GameState;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown event type {0:?}")]
    Taxonomy(String),

    #[error("invalid record (game {game_id}, pa {pa_index}): {reason}")]
    Record {
        game_id: String,
        pa_index: u32,
        reason: String,
    },

    #[error("state chain break (game {game_id}, pa {pa_index}): expected start {expected}, found {found}")]
    Chain {
        game_id: String,
        pa_index: u32,
        expected: GameState,
        found: GameState,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid design: {0}")]
    Design(String),

    #[error("every design column was dropped as collinear")]
    AllColumnsDropped,

    #[error("response has a single class")]
    SingleClass,

    #[error("bandwidth must be positive, got ({0}, {1})")]
    Bandwidth(f64, f64),

    #[error("probability out of range: {0}")]
    Probability(String),

    #[error("run expectancy states never observed: {0:?}")]
    EmptyStates(Vec<GameState>),

    #[error("state {0} is not covered by the run expectancy matrix")]
    StateNotInMatrix(GameState),

    #[error("player {0:?} appears in a ledger but not in the roster")]
    UnknownPlayer(String),

    #[error("player {0:?} not present in the distribution")]
    MissingPlayer(String),

    #[error("parameter must be positive: {0}")]
    NonPositive(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
