use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! event_types {
    ($($variant:ident => $label:literal, $count:literal;)*) => {
        /// Plate appearance outcome, as labelled in the MLBAM GameDay feed.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum EventType {
            $($variant,)*
        }

        impl EventType {
            pub const ALL: &'static [EventType] = &[$(EventType::$variant,)*];

            pub fn label(self) -> &'static str {
                match self {
                    $(EventType::$variant => $label,)*
                }
            }

            /// Occurrences in the 2012 MLBAM season, used as the default
            /// event mix for synthetic seasons.
            pub fn season_count(self) -> u32 {
                match self {
                    $(EventType::$variant => $count,)*
                }
            }
        }
    };
}

event_types! {
    Strikeout => "Strikeout", 36286;
    Groundout => "Groundout", 35266;
    Single => "Single", 27954;
    Flyout => "Flyout", 24890;
    Walk => "Walk", 13660;
    PopOut => "Pop Out", 9072;
    Double => "Double", 8221;
    Lineout => "Lineout", 6666;
    HomeRun => "Home Run", 4937;
    Forceout => "Forceout", 3984;
    GroundedIntoDp => "Grounded Into DP", 3613;
    FieldError => "Field Error", 1705;
    HitByPitch => "Hit By Pitch", 1494;
    SacBunt => "Sac Bunt", 1478;
    SacFly => "Sac Fly", 1213;
    IntentWalk => "Intent Walk", 1056;
    Triple => "Triple", 927;
    DoublePlay => "Double Play", 494;
    RunnerOut => "Runner Out", 463;
    BuntGroundout => "Bunt Groundout", 410;
    FieldersChoiceOut => "Fielders Choice Out", 352;
    BuntPopOut => "Bunt Pop Out", 209;
    StrikeoutDp => "Strikeout - DP", 146;
    FieldersChoice => "Fielders Choice", 114;
    FanInterference => "Fan interference", 46;
    BatterInterference => "Batter Interference", 35;
    CatcherInterference => "Catcher Interference", 23;
    SacFlyDp => "Sac Fly DP", 11;
    Null => "null", 5;
    BuntLineout => "Bunt Lineout", 4;
    TriplePlay => "Triple Play", 3;
    SacrificeBuntDp => "Sacrifice Bunt DP", 2;
}

impl EventType {
    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|e| e.label() == s)
    }

    /// Whether the batted ball was fieldable, i.e. carries a location and
    /// shares responsibility with the fielders.
    pub fn ball_in_play(self) -> bool {
        !matches!(
            self,
            EventType::Strikeout
                | EventType::Walk
                | EventType::IntentWalk
                | EventType::HitByPitch
                | EventType::HomeRun
                | EventType::CatcherInterference
                | EventType::BatterInterference
                | EventType::StrikeoutDp
                | EventType::Null
        )
    }

    /// Run value of the defense belongs to the pitcher alone.
    pub fn pitcher_only(self) -> bool {
        !self.ball_in_play()
    }

    pub fn is_hit(self) -> bool {
        matches!(
            self,
            EventType::Single | EventType::Double | EventType::Triple | EventType::HomeRun
        )
    }

    pub fn is_walk(self) -> bool {
        matches!(self, EventType::Walk | EventType::IntentWalk)
    }

    pub fn is_strikeout(self) -> bool {
        matches!(self, EventType::Strikeout | EventType::StrikeoutDp)
    }

    /// Counts as an official at bat (walks, hit batsmen, sacrifices and
    /// catcher interference do not).
    pub fn is_at_bat(self) -> bool {
        !matches!(
            self,
            EventType::Walk
                | EventType::IntentWalk
                | EventType::HitByPitch
                | EventType::SacBunt
                | EventType::SacFly
                | EventType::SacFlyDp
                | EventType::SacrificeBuntDp
                | EventType::CatcherInterference
        )
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
