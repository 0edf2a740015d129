#![allow(dead_code)]

use openwar::pbp::{
    Base, BatterPosition, Destination, EventType, FieldPosition, GameState, Half, Hand,
    PlateAppearance, Runner,
};

pub fn state(outs: u8, bases: u8) -> GameState {
    GameState::new(outs, bases).unwrap()
}

/// Plate appearance with neutral defaults: batter `b1`, pitcher `p1`,
/// fielders `f1`..`f9`, park `park_a`, both right-handed, batter playing
/// left field. Runners implied by the start state are named `r1`..`r3` and
/// hold their base.
pub fn pa(game: &str, idx: u32, start: (u8, u8), end: (u8, u8), event: EventType) -> PlateAppearance {
    let start_state = state(start.0, start.1);
    let runners = Base::ALL.map(|b| {
        start_state.occupied(b).then(|| Runner {
            id: format!("r{}", b.number()),
            dest: Destination::Base(b),
        })
    });
    PlateAppearance {
        game_id: game.to_string(),
        pa_index: idx,
        inning: 1,
        half: Half::Top,
        batter_id: "b1".into(),
        pitcher_id: "p1".into(),
        start_state,
        end_state: state(end.0, end.1),
        runners,
        batter_dest: Destination::Out,
        runs_scored: 0,
        event_type: event,
        ballpark_id: "park_a".into(),
        batter_hand: Hand::R,
        pitcher_hand: Hand::R,
        batter_position: BatterPosition::Field(FieldPosition::LF),
        fielders: std::array::from_fn(|i| format!("f{}", i + 1)),
        bip_location: event.ball_in_play().then_some((0.0, 150.0)),
        credited_fielder: None,
        away_team: None,
        home_team: None,
    }
}

pub trait PaExt {
    fn inning(self, inning: u32, half: Half) -> Self;
    fn batter(self, id: &str, dest: Destination) -> Self;
    fn pitcher(self, id: &str) -> Self;
    fn runner(self, base: Base, id: &str, dest: Destination) -> Self;
    fn runs(self, r: u32) -> Self;
    fn park(self, park: &str) -> Self;
    fn hands(self, batter: Hand, pitcher: Hand) -> Self;
    fn position(self, pos: BatterPosition) -> Self;
    fn at(self, x: f64, y: f64) -> Self;
    fn credited(self, pos: FieldPosition) -> Self;
}

impl PaExt for PlateAppearance {
    fn inning(mut self, inning: u32, half: Half) -> Self {
        self.inning = inning;
        self.half = half;
        self
    }
    fn batter(mut self, id: &str, dest: Destination) -> Self {
        self.batter_id = id.into();
        self.batter_dest = dest;
        self
    }
    fn pitcher(mut self, id: &str) -> Self {
        self.pitcher_id = id.into();
        self
    }
    fn runner(mut self, base: Base, id: &str, dest: Destination) -> Self {
        self.runners[base as usize] = Some(Runner { id: id.into(), dest });
        self
    }
    fn runs(mut self, r: u32) -> Self {
        self.runs_scored = r;
        self
    }
    fn park(mut self, park: &str) -> Self {
        self.ballpark_id = park.into();
        self
    }
    fn hands(mut self, batter: Hand, pitcher: Hand) -> Self {
        self.batter_hand = batter;
        self.pitcher_hand = pitcher;
        self
    }
    fn position(mut self, pos: BatterPosition) -> Self {
        self.batter_position = pos;
        self
    }
    fn at(mut self, x: f64, y: f64) -> Self {
        self.bip_location = Some((x, y));
        self
    }
    fn credited(mut self, pos: FieldPosition) -> Self {
        self.credited_fielder = Some(pos);
        self
    }
}

/// The hand-built three half-inning fixture: nine plate appearances, two
/// runs.
pub fn three_half_innings() -> Vec<PlateAppearance> {
    use Destination::{Out, Scored};
    use EventType::*;
    let b1 = Destination::Base(Base::First);
    vec![
        pa("g1", 1, (0, 0), (1, 0), Strikeout).inning(9, Half::Top),
        pa("g1", 2, (1, 0), (2, 0), Strikeout).inning(9, Half::Top),
        pa("g1", 3, (2, 0), (3, 0), Strikeout).inning(9, Half::Top),
        pa("g1", 4, (0, 0), (0, 1), Single).inning(9, Half::Bottom).batter("b2", b1),
        pa("g1", 5, (0, 1), (2, 0), GroundedIntoDp)
            .inning(9, Half::Bottom)
            .runner(Base::First, "b2", Out),
        pa("g1", 6, (2, 0), (2, 1), Walk).inning(9, Half::Bottom).batter("b3", b1),
        pa("g1", 7, (2, 1), (3, 0), Flyout)
            .inning(9, Half::Bottom)
            .runner(Base::First, "b3", b1),
        pa("g2", 1, (0, 0), (0, 1), Walk).inning(9, Half::Bottom).batter("b4", b1),
        pa("g2", 2, (0, 1), (0, 0), HomeRun)
            .inning(9, Half::Bottom)
            .batter("b5", Scored)
            .runner(Base::First, "b4", Scored)
            .runs(2),
    ]
}
