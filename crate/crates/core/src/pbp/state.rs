use std::fmt;

use serde::{Deserialize, Serialize};

/// Base-out state: outs in `0..=3` and a base occupancy mask (bit 0 = first,
/// bit 1 = second, bit 2 = third). The three-out state always carries an
/// empty mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GameState {
    outs: u8,
    bases: u8,
}

impl GameState {
    pub const START: GameState = GameState { outs: 0, bases: 0 };
    pub const THREE_OUTS: GameState = GameState { outs: 3, bases: 0 };

    /// Returns `None` when `outs > 3` or `bases > 7`.
    pub fn new(outs: u8, bases: u8) -> Option<Self> {
        match (outs, bases) {
            (3, b) if b <= 7 => Some(Self::THREE_OUTS),
            (o, b) if o < 3 && b <= 7 => Some(Self { outs: o, bases: b }),
            _ => None,
        }
    }

    pub fn outs(self) -> u8 {
        self.outs
    }

    pub fn bases(self) -> u8 {
        self.bases
    }

    pub fn is_absorbing(self) -> bool {
        self.outs == 3
    }

    pub fn occupied(self, base: Base) -> bool {
        self.bases & base.mask() != 0
    }

    /// All 24 live states, outs-major.
    pub fn live_states() -> impl Iterator<Item = GameState> {
        (0..3u8).flat_map(|o| (0..8u8).map(move |b| GameState { outs: o, bases: b }))
    }

    /// Position of a live state in [`GameState::live_states`] order.
    pub fn live_index(self) -> Option<usize> {
        (!self.is_absorbing()).then(|| self.outs as usize * 8 + self.bases as usize)
    }
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:03b})", self.outs, self.bases)
    }
}

/// One of the three bases a runner can start a play on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    First,
    Second,
    Third,
}

impl Base {
    pub const ALL: [Base; 3] = [Base::First, Base::Second, Base::Third];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn mask(self) -> u8 {
        1 << (self as u8)
    }

    pub fn from_number(n: u8) -> Option<Base> {
        match n {
            1 => Some(Base::First),
            2 => Some(Base::Second),
            3 => Some(Base::Third),
            _ => None,
        }
    }
}

/// Where a batter or runner ended the play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Destination {
    Base(Base),
    Scored,
    Out,
}

impl Destination {
    pub fn code(self) -> &'static str {
        match self {
            Destination::Base(Base::First) => "1B",
            Destination::Base(Base::Second) => "2B",
            Destination::Base(Base::Third) => "3B",
            Destination::Scored => "H",
            Destination::Out => "O",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        Some(match s {
            "1B" => Destination::Base(Base::First),
            "2B" => Destination::Base(Base::Second),
            "3B" => Destination::Base(Base::Third),
            "H" => Destination::Scored,
            "O" => Destination::Out,
            _ => return None,
        })
    }

    /// Base number reached, with home counted as 4. `None` for outs.
    pub fn reached(self) -> Option<u8> {
        match self {
            Destination::Base(b) => Some(b.number()),
            Destination::Scored => Some(4),
            Destination::Out => None,
        }
    }
}
