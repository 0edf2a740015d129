//! Deterministic synthetic seasons.
//!
//! A small league of teams with 13 position players and 12 pitchers each.
//! Regulars, rotation starters and late-inning relievers carry better talent
//! and most of the playing time, so a playing-time cutoff separates a
//! stronger major-league tier from a weaker replacement tier. Outcomes are
//! drawn event-first from the configured event mix, then runner movement and
//! batted-ball location are drawn given the event.

use super::field::{clip_to_fair, from_polar};
use super::{
    Base, BatterPosition, Destination, EventType, FieldPosition, GameState, Half, Hand,
    PlateAppearance, Runner, SeasonDataset,
};
use crate::error::{Error, Result};
use crate::numerics::SeededRng;

const POSITION_PLAYERS: usize = 13;
const PITCHERS: usize = 12;
const ROTATION: usize = 5;
const CLOSER: usize = 11;
const MAX_INNINGS: u32 = 15;

/// Batting order by defensive position; the pitcher bats ninth.
const ORDER: [FieldPosition; 9] = [
    FieldPosition::CF,
    FieldPosition::SS,
    FieldPosition::FirstBase,
    FieldPosition::ThirdBase,
    FieldPosition::RF,
    FieldPosition::LF,
    FieldPosition::SecondBase,
    FieldPosition::C,
    FieldPosition::P,
];

/// Nominal fielder positions in feet.
const SPOTS: [(f64, f64); 9] = [
    (0.0, 55.0),
    (0.0, 8.0),
    (68.0, 100.0),
    (32.0, 148.0),
    (-68.0, 100.0),
    (-32.0, 148.0),
    (-160.0, 250.0),
    (0.0, 310.0),
    (160.0, 250.0),
];

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub games: usize,
    pub seed: u64,
    /// Event mix; `None` uses the 2012 league frequencies.
    pub event_probs: Option<Vec<(EventType, f64)>>,
    pub teams: usize,
}

impl SynthConfig {
    pub fn new(games: usize, seed: u64) -> Self {
        Self {
            games,
            seed,
            event_probs: None,
            teams: 6,
        }
    }

    pub fn with_event_probs(mut self, probs: Vec<(EventType, f64)>) -> Self {
        self.event_probs = Some(probs);
        self
    }

    pub fn with_teams(mut self, teams: usize) -> Self {
        self.teams = teams;
        self
    }
}

/// League event frequencies, normalized over the events the generator can
/// play out directly.
pub fn default_event_probs() -> Vec<(EventType, f64)> {
    let usable: Vec<_> = EventType::ALL
        .iter()
        .copied()
        .filter(|e| !matches!(e, EventType::RunnerOut | EventType::Null))
        .collect();
    let total: f64 = usable.iter().map(|e| f64::from(e.season_count())).sum();
    usable
        .into_iter()
        .map(|e| (e, f64::from(e.season_count()) / total))
        .collect()
}

fn probability_table(probs: &[(EventType, f64)]) -> Result<Vec<f64>> {
    let mut table = vec![0.0; EventType::ALL.len()];
    for &(e, p) in probs {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::Probability(format!("{e}: {p}")));
        }
        let slot = EventType::ALL.iter().position(|&x| x == e).expect("taxonomy member");
        table[slot] += p;
    }
    let total: f64 = table.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Probability(format!("event probabilities sum to {total}")));
    }
    Ok(table)
}

#[derive(Debug, Clone)]
struct Player {
    id: String,
    hand: Hand,
    talent: f64,
}

#[derive(Debug, Clone)]
struct Team {
    id: String,
    park: String,
    batters: Vec<Player>,
    pitchers: Vec<Player>,
    games: usize,
}

fn build_team(k: usize, rng: &mut SeededRng) -> Team {
    let id = format!("t{:02}", k + 1);
    let batters = (0..POSITION_PLAYERS)
        .map(|i| {
            let u = rng.uniform();
            let hand = if u < 0.6 {
                Hand::R
            } else if u < 0.9 {
                Hand::L
            } else {
                Hand::S
            };
            let talent = if i < 8 {
                rng.normal(0.12, 0.12)
            } else {
                rng.normal(-0.2, 0.12)
            };
            Player {
                id: format!("{id}b{:02}", i + 1),
                hand,
                talent,
            }
        })
        .collect();
    let pitchers = (0..PITCHERS)
        .map(|i| {
            let hand = if rng.bernoulli(0.7) { Hand::R } else { Hand::L };
            let talent = match i {
                0..=4 => rng.normal(0.08, 0.1),
                10 | 11 => rng.normal(0.1, 0.1),
                _ => rng.normal(-0.2, 0.1),
            };
            Player {
                id: format!("{id}p{:02}", i + 1),
                hand,
                talent,
            }
        })
        .collect();
    Team {
        park: format!("park_{id}"),
        id,
        batters,
        pitchers,
        games: 0,
    }
}

/// Bench player covering a position, if the position has a designated
/// backup.
fn backup_for(pos: FieldPosition) -> usize {
    match pos {
        FieldPosition::C => 8,
        FieldPosition::FirstBase | FieldPosition::ThirdBase => 9,
        FieldPosition::SecondBase | FieldPosition::SS => 10,
        _ => 11,
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Batter(usize, FieldPosition),
    Pitcher,
}

/// One team's state during a game.
struct Side {
    team: usize,
    order: [Slot; 9],
    next: usize,
    bench: Vec<usize>,
    defense: [usize; 9],
    pitcher: usize,
    starter: usize,
    starter_allowed: u32,
    used_relievers: Vec<usize>,
    pitcher_inning: u32,
}

impl Side {
    fn new(team: usize, t: &Team, rng: &mut SeededRng) -> Self {
        let mut defense = [0usize; 9];
        let mut in_lineup = [false; POSITION_PLAYERS];
        for pos in &FieldPosition::ALL[1..] {
            let regular = pos.index() - 1;
            let backup = backup_for(*pos);
            let chosen = if rng.bernoulli(0.12) && !in_lineup[backup] {
                backup
            } else {
                regular
            };
            in_lineup[chosen] = true;
            defense[pos.index()] = chosen;
        }
        let order = ORDER.map(|pos| match pos {
            FieldPosition::P => Slot::Pitcher,
            p => Slot::Batter(defense[p.index()], p),
        });
        let bench = (0..POSITION_PLAYERS).filter(|&i| !in_lineup[i]).collect();
        let starter = t.games % ROTATION;
        Self {
            team,
            order,
            next: 0,
            bench,
            defense,
            pitcher: starter,
            starter,
            starter_allowed: 0,
            used_relievers: Vec::new(),
            pitcher_inning: 0,
        }
    }

    /// Picks the pitcher for a new defensive inning.
    fn set_pitcher(&mut self, inning: u32, rng: &mut SeededRng) {
        if self.pitcher_inning == inning {
            return;
        }
        self.pitcher_inning = inning;
        let starter_done = self.pitcher != self.starter || inning > 6 || self.starter_allowed >= 6;
        if !starter_done {
            return;
        }
        if inning >= 9 && !self.used_relievers.contains(&CLOSER) {
            self.pitcher = CLOSER;
        } else {
            let candidates: Vec<usize> = (ROTATION..PITCHERS)
                .filter(|r| *r != CLOSER && !self.used_relievers.contains(r))
                .collect();
            self.pitcher = if candidates.is_empty() {
                ROTATION + rng.below(PITCHERS - ROTATION - 1)
            } else {
                let weights: Vec<f64> = candidates
                    .iter()
                    .map(|&r| if r == 10 { 4.0 } else { 1.0 + (r - ROTATION) as f64 * 0.5 })
                    .collect();
                candidates[rng.weighted(&weights)]
            };
        }
        self.used_relievers.push(self.pitcher);
    }
}

fn offense_tilt(e: EventType) -> f64 {
    if e.is_hit() || e.is_walk() || e == EventType::HitByPitch {
        1.0
    } else if e.is_strikeout() {
        -1.0
    } else {
        0.0
    }
}

/// Runner targets in base numbers (4 = home) or `None` for an out.
type Targets = [Option<u8>; 3];

struct Play {
    event: EventType,
    runners: [Option<Destination>; 3],
    batter: Destination,
}

struct Generator {
    rng: SeededRng,
    probs: Vec<f64>,
    teams: Vec<Team>,
}

impl Generator {
    fn draw_event(&mut self, batter_talent: f64, pitcher_talent: f64) -> EventType {
        let edge = batter_talent - pitcher_talent;
        let weights: Vec<f64> = EventType::ALL
            .iter()
            .zip(&self.probs)
            .map(|(&e, &p)| p * (offense_tilt(e) * edge).exp())
            .collect();
        EventType::ALL[self.rng.weighted(&weights)]
    }

    /// Replaces events whose preconditions fail in the current state.
    fn feasible(event: EventType, outs: u8, occ: [bool; 3]) -> EventType {
        use EventType::*;
        let on = occ.iter().filter(|&&b| b).count();
        match event {
            StrikeoutDp if on == 0 || outs > 1 => Strikeout,
            SacFly if !occ[2] || outs > 1 => Flyout,
            SacBunt if on == 0 || outs > 1 => BuntGroundout,
            Forceout if !occ[0] => Groundout,
            FieldersChoiceOut | FieldersChoice if on == 0 => Groundout,
            GroundedIntoDp | DoublePlay if !occ[0] || outs > 1 => Groundout,
            SacFlyDp if !occ[2] || on < 2 || outs > 0 => Flyout,
            SacrificeBuntDp if on == 0 || outs > 0 => BuntGroundout,
            TriplePlay if on < 2 || outs > 0 => Groundout,
            RunnerOut => Groundout,
            e => e,
        }
    }

    fn resolve(&mut self, drawn: EventType, outs: u8, occ: [bool; 3]) -> Play {
        use EventType::*;
        let event = Self::feasible(drawn, outs, occ);
        let rng = &mut self.rng;
        let hold: Targets = [1u8, 2, 3].map(Some);
        let mut want = hold;
        let lead = (0..3).rev().find(|&b| occ[b]);
        let continues = outs + 1 < 3;
        let batter_target: Option<u8> = match event {
            HomeRun => {
                want = [Some(4); 3];
                Some(4)
            }
            Triple => {
                want = [Some(4); 3];
                Some(3)
            }
            Double | FanInterference => {
                want = [Some(if rng.bernoulli(0.4) { 4 } else { 3 }), Some(4), Some(4)];
                Some(2)
            }
            Single => {
                let r2 = if rng.bernoulli(0.03) {
                    None
                } else if rng.bernoulli(0.6) {
                    Some(4)
                } else {
                    Some(3)
                };
                want = [Some(if rng.bernoulli(0.28) { 3 } else { 2 }), r2, Some(4)];
                Some(1)
            }
            FieldError => {
                let extra = if rng.bernoulli(0.15) { 2 } else { 1 };
                want = [1u8, 2, 3].map(|b| Some((b + extra).min(4)));
                Some(extra)
            }
            Walk | IntentWalk | HitByPitch | CatcherInterference => {
                want = [
                    Some(2),
                    Some(if occ[0] { 3 } else { 2 }),
                    Some(if occ[0] && occ[1] { 4 } else { 3 }),
                ];
                Some(1)
            }
            FieldersChoice => {
                want = [Some(2), Some(3), Some(4)];
                Some(1)
            }
            Forceout | FieldersChoiceOut => {
                if occ[0] {
                    let r3 = if occ[1] || rng.bernoulli(0.3) { 4 } else { 3 };
                    want = [None, Some(3), Some(r3)];
                } else if let Some(l) = lead {
                    want[l] = None;
                }
                Some(1)
            }
            GroundedIntoDp | DoublePlay => {
                let r3 = if outs == 0 && rng.bernoulli(0.5) { 4 } else { 3 };
                want = [None, Some(3), Some(r3)];
                None
            }
            SacBunt => {
                want = [Some(2), Some(3), Some(4)];
                None
            }
            SacrificeBuntDp => {
                want = [Some(2), Some(3), Some(4)];
                if let Some(l) = lead {
                    want[l] = None;
                }
                None
            }
            SacFly => {
                want = [Some(1), Some(if rng.bernoulli(0.3) { 3 } else { 2 }), Some(4)];
                None
            }
            SacFlyDp => {
                let victim = if occ[1] { 1 } else { 0 };
                want[2] = Some(4);
                want[victim] = None;
                None
            }
            TriplePlay | StrikeoutDp => {
                let victims = if event == TriplePlay { 2 } else { 1 };
                for b in (0..3).rev().filter(|&b| occ[b]).take(victims) {
                    want[b] = None;
                }
                None
            }
            Groundout if continues => {
                want = [
                    Some(if rng.bernoulli(0.8) { 2 } else { 1 }),
                    Some(if rng.bernoulli(0.6) { 3 } else { 2 }),
                    Some(if rng.bernoulli(0.5) { 4 } else { 3 }),
                ];
                None
            }
            BuntGroundout if continues => {
                if rng.bernoulli(0.5) {
                    want = [Some(2), Some(3), Some(4)];
                }
                None
            }
            Flyout if continues => {
                if rng.bernoulli(0.15) {
                    want[1] = Some(3);
                }
                None
            }
            _ => None,
        };

        // settle runners lead-first so nobody passes the runner ahead
        let mut taken = [false; 5];
        let mut runners: [Option<Destination>; 3] = [None; 3];
        for b in (0..3).rev().filter(|&b| occ[b]) {
            let start = b as u8 + 1;
            runners[b] = Some(match want[b] {
                None => Destination::Out,
                Some(t) => {
                    let mut t = t.max(start);
                    while t < 4 && taken[t as usize] {
                        t -= 1;
                    }
                    taken[t as usize] = true;
                    to_dest(t)
                }
            });
        }
        let batter = match batter_target {
            None => Destination::Out,
            Some(t) => {
                debug_assert!(t == 4 || !taken[t as usize], "batter blocked on {event}");
                to_dest(t)
            }
        };

        let mut play = Play {
            event,
            runners,
            batter,
        };
        let recorded = play.runners.iter().flatten().filter(|d| **d == Destination::Out).count()
            + usize::from(play.batter == Destination::Out);
        if usize::from(outs) + recorded >= 3 {
            // no run counts on a play that ends the inning
            for d in play.runners.iter_mut().flatten() {
                if *d == Destination::Scored {
                    *d = Destination::Base(Base::Third);
                }
            }
        }
        play
    }

    /// Location and credited fielder for a ball in play.
    fn batted_ball(&mut self, play: &Play) -> ((f64, f64), Option<FieldPosition>) {
        use EventType::*;
        use FieldPosition as F;
        let rng = &mut self.rng;
        let pick = |rng: &mut SeededRng, table: &[(F, f64)]| {
            let w: Vec<f64> = table.iter().map(|t| t.1).collect();
            table[rng.weighted(&w)].0
        };
        let infield = [(F::P, 1.0), (F::FirstBase, 2.0), (F::SecondBase, 4.0), (F::ThirdBase, 3.0), (F::SS, 4.0)];
        let bunt = [(F::P, 3.0), (F::C, 2.0), (F::FirstBase, 2.0), (F::ThirdBase, 3.0)];
        let outfield = [(F::LF, 3.0), (F::CF, 4.0), (F::RF, 3.0)];
        let popup = [(F::C, 1.0), (F::FirstBase, 2.0), (F::SecondBase, 2.0), (F::ThirdBase, 2.0), (F::SS, 2.0)];
        let liner = [
            (F::P, 1.0),
            (F::FirstBase, 1.0),
            (F::SecondBase, 2.0),
            (F::ThirdBase, 1.0),
            (F::SS, 2.0),
            (F::LF, 2.0),
            (F::CF, 2.0),
            (F::RF, 2.0),
        ];
        let fielder = match play.event {
            Single => {
                let (lo, hi) = if rng.bernoulli(0.5) { (120.0, 180.0) } else { (180.0, 260.0) };
                return (from_polar(rng.uniform_in(lo, hi), rng.uniform_in(2.0, 88.0)), None);
            }
            Double => return (from_polar(rng.uniform_in(250.0, 350.0), rng.uniform_in(0.0, 90.0)), None),
            Triple => return (from_polar(rng.uniform_in(300.0, 390.0), rng.uniform_in(0.0, 90.0)), None),
            FanInterference => {
                return (from_polar(rng.uniform_in(330.0, 380.0), rng.uniform_in(0.0, 90.0)), None)
            }
            BuntGroundout | SacBunt | SacrificeBuntDp | BuntPopOut | BuntLineout => pick(rng, &bunt),
            Flyout | SacFly | SacFlyDp => pick(rng, &outfield),
            PopOut => pick(rng, &popup),
            Lineout => pick(rng, &liner),
            _ => pick(rng, &infield),
        };
        let spread = match fielder {
            F::LF | F::CF | F::RF => 30.0,
            F::P | F::C => 8.0,
            _ => 18.0,
        };
        let (sx, sy) = SPOTS[fielder.index()];
        let loc = (rng.normal(sx, spread), rng.normal(sy, spread));
        let made_out = play.batter == Destination::Out
            || play.runners.iter().flatten().any(|d| *d == Destination::Out);
        (loc, made_out.then_some(fielder))
    }

    fn play_game(&mut self, g: usize, out: &mut Vec<PlateAppearance>) {
        let n = self.teams.len();
        let home = g % n;
        let away = (home + 1 + (g / n) % (n - 1)) % n;
        let game_id = format!("g{:04}_{}_{}", g + 1, self.teams[away].id, self.teams[home].id);
        let mut sides = [
            Side::new(away, &self.teams[away], &mut self.rng),
            Side::new(home, &self.teams[home], &mut self.rng),
        ];
        let mut score = [0u32; 2];
        let mut pa_index = 0u32;
        let mut inning = 1u32;
        'game: loop {
            for half in [Half::Top, Half::Bottom] {
                if half == Half::Bottom && inning >= 9 && score[1] > score[0] {
                    break 'game;
                }
                let (bat, field) = match half {
                    Half::Top => (0, 1),
                    Half::Bottom => (1, 0),
                };
                sides[field].set_pitcher(inning, &mut self.rng);
                let mut state = GameState::START;
                let mut on_base: [Option<String>; 3] = Default::default();
                while !state.is_absorbing() {
                    pa_index += 1;
                    let pa = self.plate_appearance(
                        &game_id, pa_index, inning, half, &mut sides, bat, field, state, &on_base,
                    );
                    score[bat] += pa.runs_scored;
                    if sides[field].pitcher == sides[field].starter {
                        sides[field].starter_allowed += pa.runs_scored;
                    }
                    state = pa.end_state;
                    on_base = Default::default();
                    if !state.is_absorbing() {
                        let movers = pa
                            .runners_on()
                            .map(|(_, r)| (r.id.clone(), r.dest))
                            .chain(std::iter::once((pa.batter_id.clone(), pa.batter_dest)));
                        for (id, d) in movers {
                            if let Destination::Base(b) = d {
                                on_base[b as usize] = Some(id);
                            }
                        }
                    }
                    out.push(pa);
                    if half == Half::Bottom && inning >= 9 && score[1] > score[0] {
                        break 'game;
                    }
                }
            }
            if (inning >= 9 && score[0] != score[1]) || inning >= MAX_INNINGS {
                break;
            }
            inning += 1;
        }
        self.teams[away].games += 1;
        self.teams[home].games += 1;
    }

    #[allow(clippy::too_many_arguments)]
    fn plate_appearance(
        &mut self,
        game_id: &str,
        pa_index: u32,
        inning: u32,
        half: Half,
        sides: &mut [Side; 2],
        bat: usize,
        field: usize,
        state: GameState,
        on_base: &[Option<String>; 3],
    ) -> PlateAppearance {
        let slot = sides[bat].order[sides[bat].next];
        sides[bat].next = (sides[bat].next + 1) % 9;
        let bteam = &self.teams[sides[bat].team];
        let (batter, position) = match slot {
            Slot::Batter(i, pos) => (&bteam.batters[i], BatterPosition::Field(pos)),
            Slot::Pitcher => {
                if inning >= 7 && !sides[bat].bench.is_empty() && self.rng.bernoulli(0.6) {
                    let k = self.rng.below(sides[bat].bench.len());
                    let ph = sides[bat].bench.remove(k);
                    (&bteam.batters[ph], BatterPosition::PH)
                } else {
                    (&bteam.pitchers[sides[bat].pitcher], BatterPosition::Field(FieldPosition::P))
                }
            }
        };
        let batter = batter.clone();
        let fteam = &self.teams[sides[field].team];
        let pitcher = fteam.pitchers[sides[field].pitcher].clone();
        let mut fielders: [String; 9] = Default::default();
        fielders[0] = pitcher.id.clone();
        for pos in &FieldPosition::ALL[1..] {
            fielders[pos.index()] = fteam.batters[sides[field].defense[pos.index()]].id.clone();
        }
        let park = self.teams[sides[1].team].park.clone();
        let teams = (
            self.teams[sides[0].team].id.clone(),
            self.teams[sides[1].team].id.clone(),
        );

        let occ = [0, 1, 2].map(|b| on_base[b].is_some());
        let drawn = self.draw_event(batter.talent, pitcher.talent);
        let play = self.resolve(drawn, state.outs(), occ);
        let (bip_location, credited_fielder) = if play.event.ball_in_play() {
            let (loc, who) = self.batted_ball(&play);
            let (x, y) = clip_to_fair(loc.0, loc.1);
            (Some((round_tenth(x), round_tenth(y))), who)
        } else {
            (None, None)
        };

        let runners = [0, 1, 2].map(|b| {
            on_base[b].clone().map(|id| Runner {
                id,
                dest: play.runners[b].expect("occupied base has a destination"),
            })
        });
        let dests = play.runners.iter().flatten().copied().chain(std::iter::once(play.batter));
        let mut outs = state.outs();
        let mut runs = 0;
        let mut mask = 0u8;
        for d in dests {
            match d {
                Destination::Out => outs += 1,
                Destination::Scored => runs += 1,
                Destination::Base(b) => mask |= b.mask(),
            }
        }
        let end_state = GameState::new(outs.min(3), mask).expect("valid end state");

        PlateAppearance {
            game_id: game_id.to_string(),
            pa_index,
            inning,
            half,
            batter_id: batter.id,
            pitcher_id: pitcher.id,
            start_state: state,
            end_state,
            runners,
            batter_dest: play.batter,
            runs_scored: runs,
            event_type: play.event,
            ballpark_id: park,
            batter_hand: batter.hand,
            pitcher_hand: pitcher.hand,
            batter_position: position,
            fielders,
            bip_location,
            credited_fielder,
            away_team: Some(teams.0),
            home_team: Some(teams.1),
        }
    }
}

fn to_dest(base: u8) -> Destination {
    match base {
        4 => Destination::Scored,
        b => Destination::Base(Base::from_number(b).expect("base 1-3")),
    }
}

fn round_tenth(v: f64) -> f64 {
    let r = (v * 10.0).round() / 10.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Generates a season. Output is a pure function of the configuration.
pub fn generate_synthetic_season(config: &SynthConfig) -> Result<SeasonDataset> {
    if config.games == 0 {
        return Err(Error::Config("games must be at least 1".into()));
    }
    if config.teams < 2 {
        return Err(Error::Config("at least two teams are required".into()));
    }
    let probs = match &config.event_probs {
        Some(p) => probability_table(p)?,
        None => probability_table(&default_event_probs())?,
    };
    let mut rng = SeededRng::new(config.seed);
    let teams = (0..config.teams).map(|k| build_team(k, &mut rng)).collect();
    let mut gen = Generator { rng, probs, teams };
    let mut records = Vec::new();
    for g in 0..config.games {
        gen.play_game(g, &mut records);
    }
    Ok(SeasonDataset::from_records(records))
}
