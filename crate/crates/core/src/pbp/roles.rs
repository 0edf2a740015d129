use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Half {
    Top,
    Bottom,
}

impl Half {
    pub fn code(self) -> &'static str {
        match self {
            Half::Top => "top",
            Half::Bottom => "bottom",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "top" => Some(Half::Top),
            "bottom" => Some(Half::Bottom),
            _ => None,
        }
    }
}

/// Batting side or throwing hand. `S` (switch) only applies to batters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Hand {
    L,
    R,
    S,
}

impl Hand {
    pub fn code(self) -> &'static str {
        match self {
            Hand::L => "L",
            Hand::R => "R",
            Hand::S => "S",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "L" => Some(Hand::L),
            "R" => Some(Hand::R),
            "S" => Some(Hand::S),
            _ => None,
        }
    }
}

/// Batter holds the platoon advantage when batting from the side opposite the
/// pitcher's throwing hand. Switch hitters always do.
pub fn platoon_advantage(batter: Hand, pitcher: Hand) -> bool {
    batter == Hand::S || batter != pitcher
}

/// The nine defensive positions, in scorekeeping order (1 = pitcher ... 9 =
/// right field).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldPosition {
    P,
    C,
    FirstBase,
    SecondBase,
    ThirdBase,
    SS,
    LF,
    CF,
    RF,
}

impl FieldPosition {
    pub const ALL: [FieldPosition; 9] = [
        FieldPosition::P,
        FieldPosition::C,
        FieldPosition::FirstBase,
        FieldPosition::SecondBase,
        FieldPosition::ThirdBase,
        FieldPosition::SS,
        FieldPosition::LF,
        FieldPosition::CF,
        FieldPosition::RF,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn code(self) -> &'static str {
        match self {
            FieldPosition::P => "P",
            FieldPosition::C => "C",
            FieldPosition::FirstBase => "1B",
            FieldPosition::SecondBase => "2B",
            FieldPosition::ThirdBase => "3B",
            FieldPosition::SS => "SS",
            FieldPosition::LF => "LF",
            FieldPosition::CF => "CF",
            FieldPosition::RF => "RF",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.code() == s)
    }
}

impl fmt::Display for FieldPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Lineup role of the hitter: a fielding position, designated hitter or
/// pinch hitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BatterPosition {
    Field(FieldPosition),
    DH,
    PH,
}

impl BatterPosition {
    pub fn code(self) -> &'static str {
        match self {
            BatterPosition::Field(p) => p.code(),
            BatterPosition::DH => "DH",
            BatterPosition::PH => "PH",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "DH" => Some(BatterPosition::DH),
            "PH" => Some(BatterPosition::PH),
            other => FieldPosition::from_code(other).map(BatterPosition::Field),
        }
    }
}

impl fmt::Display for BatterPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}
