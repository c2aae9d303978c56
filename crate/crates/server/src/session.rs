//! Game sessions without any networking: seats, the event log and the
//! JSON views sent to clients.

use std::fmt;
use std::str::FromStr;

use polydots::engine::{BoardSpec, Claim, Face, GameState, IllegalMove, MoveOutcome, Player, Variant};
use polydots::geometry::{HalfArea, LatticePoint, Segment};
use polydots::strategy::{choose_move, StrategyId};
use serde::{Deserialize, Serialize};

/// Who sits in a seat.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seat {
    Human,
    Ai(StrategyId),
}

impl Seat {
    pub fn is_human(self) -> bool {
        self == Seat::Human
    }
}

impl FromStr for Seat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "human" {
            return Ok(Seat::Human);
        }
        s.parse::<StrategyId>().map(Seat::Ai).map_err(|_| {
            let known: Vec<&str> = StrategyId::ALL.iter().map(|s| s.token()).collect();
            format!("unknown seat `{s}` (expected human or one of {})", known.join(", "))
        })
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seat::Human => f.write_str("human"),
            Seat::Ai(s) => f.write_str(s.token()),
        }
    }
}

/// Why a posted move was refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    Illegal(IllegalMove),
    NotYourTurn,
}

impl Rejection {
    pub fn token(self) -> &'static str {
        match self {
            // After the game ends nobody is to move.
            Rejection::Illegal(IllegalMove::GameOver) | Rejection::NotYourTurn => "not-your-turn",
            Rejection::Illegal(m) => m.token(),
        }
    }

    pub fn message(self) -> String {
        match self {
            Rejection::Illegal(IllegalMove::GameOver) => "the game is over".to_string(),
            Rejection::Illegal(m) => m.to_string(),
            Rejection::NotYourTurn => "the seat to move is not played by a human".to_string(),
        }
    }
}

fn pair(p: LatticePoint) -> [i32; 2] {
    [p.x, p.y]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardView {
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeatsView {
    pub p1: String,
    pub p2: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scores {
    pub p1_halves: u64,
    pub p2_halves: u64,
}

impl Scores {
    fn of(state: &GameState) -> Scores {
        let (a, b) = state.scores();
        Scores { p1_halves: a.halves(), p2_halves: b.halves() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentView {
    pub from: [i32; 2],
    pub to: [i32; 2],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub player: Option<u8>,
}

impl SegmentView {
    fn of(s: &Segment, player: Option<Player>) -> SegmentView {
        SegmentView { from: pair(s.a()), to: pair(s.b()), player: player.map(Player::number) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimView {
    pub outer: Vec<[i32; 2]>,
    pub player: u8,
    pub area_halves: u64,
}

impl ClaimView {
    fn of(face: &Face, area: HalfArea, player: Player) -> ClaimView {
        ClaimView { outer: face.walk.iter().map(|&p| pair(p)).collect(), player: player.number(), area_halves: area.halves() }
    }

    fn of_claim(c: &Claim) -> ClaimView {
        ClaimView::of(&c.face, c.area(), c.player)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveView {
    pub player: u8,
    pub from: [i32; 2],
    pub to: [i32; 2],
}

/// One applied move as streamed to clients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub seq: u64,
    #[serde(rename = "move")]
    pub mv: MoveView,
    pub claims: Vec<ClaimView>,
    pub extra_turn: bool,
    pub doublecross: bool,
    pub scores: Scores,
    /// Player number to move next, absent once the game is over.
    pub to_move: Option<u8>,
    pub game_over: bool,
}

/// The public snapshot of a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateView {
    pub id: String,
    pub board: BoardView,
    pub variant: Variant,
    pub seats: SeatsView,
    pub segments: Vec<SegmentView>,
    pub claims: Vec<ClaimView>,
    pub to_move: Option<u8>,
    pub scores: Scores,
    pub turns: u64,
    pub doublecrosses: u64,
    pub game_over: bool,
    /// Sequence number of the last event; resume the event stream after it.
    pub seq: u64,
}

pub struct Session {
    id: String,
    state: GameState,
    seats: [Seat; 2],
    events: Vec<Event>,
    seed: u64,
}

impl Session {
    pub fn new(id: String, board: BoardSpec, variant: Variant, seats: [Seat; 2], seed: u64) -> Session {
        Session { id, state: GameState::new(board, variant), seats, events: Vec::new(), seed }
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn seats(&self) -> [Seat; 2] {
        self.seats
    }

    fn seat_to_move(&self) -> Option<Seat> {
        (!self.state.is_over()).then(|| self.seats[(self.state.to_move().number() - 1) as usize])
    }

    /// True when no human input is needed for the game to continue.
    pub fn ai_to_move(&self) -> bool {
        matches!(self.seat_to_move(), Some(Seat::Ai(_)))
    }

    pub fn all_ai(&self) -> bool {
        !self.seats[0].is_human() && !self.seats[1].is_human()
    }

    fn record(&mut self, out: &MoveOutcome) -> Event {
        let event = Event {
            seq: self.events.len() as u64 + 1,
            mv: MoveView { player: out.player.number(), from: pair(out.segment.a()), to: pair(out.segment.b()) },
            claims: out.claimed.iter().map(|(f, a)| ClaimView::of(f, *a, out.player)).collect(),
            extra_turn: out.extra_turn,
            doublecross: out.doublecross,
            scores: Scores::of(&self.state),
            to_move: (!out.game_over).then(|| out.next_player.number()),
            game_over: out.game_over,
        };
        self.events.push(event.clone());
        event
    }

    /// Plays a human move for the seat to move, then every AI turn that
    /// follows until a human must move again or the game ends.
    pub fn human_move(&mut self, s: Segment) -> Result<Vec<Event>, Rejection> {
        match self.seat_to_move() {
            None => return Err(Rejection::Illegal(IllegalMove::GameOver)),
            Some(Seat::Ai(_)) => return Err(Rejection::NotYourTurn),
            Some(Seat::Human) => {}
        }
        let out = self.state.apply_move(s).map_err(Rejection::Illegal)?;
        let mut batch = vec![self.record(&out)];
        batch.extend(self.ai_until_human());
        Ok(batch)
    }

    /// One full AI turn: moves until the turn passes or the game ends.
    pub fn ai_turn(&mut self) -> Vec<Event> {
        let mut batch = Vec::new();
        let Some(Seat::Ai(strategy)) = self.seat_to_move() else {
            return batch;
        };
        let mover = self.state.to_move();
        while !self.state.is_over() && self.state.to_move() == mover {
            let seed = self.seed ^ (self.events.len() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let m = choose_move(strategy, &self.state, seed).expect("an unfinished game has a move");
            let out = self.state.apply_move(m).expect("strategies return legal moves");
            batch.push(self.record(&out));
        }
        batch
    }

    /// AI turns until a human seat is to move or the game is over.
    pub fn ai_until_human(&mut self) -> Vec<Event> {
        let mut batch = Vec::new();
        while self.ai_to_move() {
            batch.extend(self.ai_turn());
        }
        batch
    }

    pub fn view(&self) -> StateView {
        let st = &self.state;
        let acc = st.accounting();
        StateView {
            id: self.id.clone(),
            board: BoardView { width: st.board().width(), height: st.board().height() },
            variant: st.variant(),
            seats: SeatsView { p1: self.seats[0].to_string(), p2: self.seats[1].to_string() },
            segments: st.moves().iter().map(|m| SegmentView::of(&m.segment, Some(m.player))).collect(),
            claims: st.claims().map(ClaimView::of_claim).collect(),
            to_move: (!st.is_over()).then(|| st.to_move().number()),
            scores: Scores::of(st),
            turns: acc.turns,
            doublecrosses: acc.doublecrosses,
            game_over: st.is_over(),
            seq: self.events.len() as u64,
        }
    }

    pub fn legal(&self) -> Vec<SegmentView> {
        self.state.legal_moves().iter().map(|s| SegmentView::of(s, None)).collect()
    }
}

/// Rebuilds a game from an event log on a fresh engine.
pub fn replay_events(board: BoardSpec, variant: Variant, events: &[Event]) -> Result<GameState, String> {
    let mut state = GameState::new(board, variant);
    for e in events {
        if state.to_move().number() != e.mv.player {
            return Err(format!("event {}: player {} moved out of turn", e.seq, e.mv.player));
        }
        let s = Segment::new(LatticePoint::from(e.mv.from), LatticePoint::from(e.mv.to)).map_err(|err| err.to_string())?;
        let out = state.apply_move(s).map_err(|err| format!("event {}: {err}", e.seq))?;
        if out.claimed.len() != e.claims.len() || out.extra_turn != e.extra_turn {
            return Err(format!("event {}: outcome differs from the log", e.seq));
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(p1: &str, p2: &str) -> Session {
        let seats = [p1.parse().unwrap(), p2.parse().unwrap()];
        Session::new("t".into(), BoardSpec::new(3, 3).unwrap(), Variant::Triangles, seats, 5)
    }

    #[test]
    fn seats_parse_and_print() {
        assert_eq!("human".parse::<Seat>().unwrap(), Seat::Human);
        assert_eq!("greedy".parse::<Seat>().unwrap(), Seat::Ai(StrategyId::GreedyChild));
        assert!("robot".parse::<Seat>().is_err());
        assert_eq!(Seat::Ai(StrategyId::Exact).to_string(), "exact");
    }

    #[test]
    fn claiming_move_keeps_the_seat() {
        let mut s = session("human", "human");
        s.human_move(Segment::of((0, 0), (1, 0))).unwrap();
        s.human_move(Segment::of((0, 0), (1, 1))).unwrap();
        let batch = s.human_move(Segment::of((1, 0), (1, 1))).unwrap();
        assert_eq!(batch.len(), 1);
        assert!(batch[0].extra_turn);
        assert_eq!(batch[0].to_move, Some(1));
        assert_eq!(batch[0].claims[0].area_halves, 1);
    }

    #[test]
    fn ai_replies_follow_in_the_same_batch() {
        let mut s = session("human", "greedy");
        let batch = s.human_move(Segment::of((0, 0), (1, 0))).unwrap();
        assert!(batch.len() >= 2);
        assert!(batch[1..].iter().all(|e| e.mv.player == 2));
        assert_eq!(batch.last().unwrap().to_move, Some(1));
    }

    #[test]
    fn rejections_carry_tokens() {
        let mut s = session("human", "human");
        s.human_move(Segment::of((0, 0), (1, 1))).unwrap();
        let err = s.human_move(Segment::of((0, 1), (1, 0))).unwrap_err();
        assert_eq!(err.token(), "conflict");
        assert_eq!(s.human_move(Segment::of((0, 0), (2, 2))).unwrap_err().token(), "non-primitive");
        let mut ai_first = session("greedy", "human");
        assert!(!ai_first.ai_until_human().is_empty());
        assert_eq!(ai_first.view().to_move, Some(2));
        let mut bots = session("random", "random");
        assert_eq!(bots.human_move(Segment::of((0, 0), (1, 0))).unwrap_err().token(), "not-your-turn");
        while bots.ai_to_move() {
            bots.ai_turn();
        }
        assert!(bots.state().is_over());
        assert_eq!(bots.human_move(Segment::of((0, 0), (1, 0))).unwrap_err().token(), "not-your-turn");
    }

    #[test]
    fn event_log_replays_to_the_same_state() {
        let mut s = session("greedy", "double-dealer");
        while s.ai_to_move() {
            s.ai_turn();
        }
        let replayed = replay_events(s.state().board(), s.state().variant(), s.events()).unwrap();
        assert_eq!(replayed.drawn(), s.state().drawn());
        assert_eq!(replayed.scores(), s.state().scores());
        assert_eq!(s.view().seq, s.events().len() as u64);
    }
}
