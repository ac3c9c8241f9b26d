use std::collections::HashSet;

use super::state::{GameState, Move, Player};
use crate::error::GameError;
use crate::graphs::Graph;

/// A player's decision procedure. Strategies may keep private state, but the
/// engine validates every edge they return.
pub trait Strategy {
    fn name(&self) -> String;

    /// Exactly `count` distinct free edges to claim.
    fn next_moves(&mut self, state: &GameState<'_>, count: usize) -> Result<Vec<usize>, GameError>;

    /// Called after every move by either player, including this one's.
    fn observe(&mut self, _state: &GameState<'_>) {}

    /// Runtime invariant violations noticed so far.
    fn violations(&self) -> Vec<String> {
        Vec::new()
    }

    /// Free-form `(key, value)` diagnostics for reports.
    fn notes(&self) -> Vec<(String, String)> {
        Vec::new()
    }
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn next_moves(&mut self, state: &GameState<'_>, count: usize) -> Result<Vec<usize>, GameError> {
        (**self).next_moves(state, count)
    }

    fn observe(&mut self, state: &GameState<'_>) {
        (**self).observe(state)
    }

    fn violations(&self) -> Vec<String> {
        (**self).violations()
    }

    fn notes(&self) -> Vec<(String, String)> {
        (**self).notes()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameResult {
    pub largest_maker_component: usize,
    pub maker_component_sizes: Vec<usize>,
    /// A round is one move by each player, starting with whoever moved first.
    pub rounds: usize,
    pub maker_edges: usize,
    pub breaker_edges: usize,
    pub invariant_violations: Vec<String>,
    pub notes: Vec<(String, String)>,
    pub moves: Vec<Move>,
}

impl GameResult {
    pub fn note(&self, key: &str) -> Option<&str> {
        self.notes.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

fn validate(state: &GameState<'_>, player: Player, edges: &[usize], count: usize) -> Result<(), GameError> {
    let fail = |reason: String| GameError::Protocol { player: player.to_string(), reason };
    if edges.len() != count {
        return Err(fail(format!("returned {} edges, {} required", edges.len(), count)));
    }
    let mut seen = HashSet::with_capacity(edges.len());
    for &e in edges {
        if e >= state.board().m() {
            return Err(fail(format!("edge {e} is not on the board")));
        }
        if !state.is_free(e) {
            return Err(fail(format!("edge {e} is not free")));
        }
        if !seen.insert(e) {
            return Err(fail(format!("edge {e} returned twice")));
        }
    }
    Ok(())
}

/// Move-by-move driver for the (1:b) game: Maker claims one edge per move
/// and Breaker `b`, or all that remain if fewer.
#[derive(Debug, Clone)]
pub struct Game<'a> {
    state: GameState<'a>,
}

impl<'a> Game<'a> {
    pub fn new(board: &'a Graph, b: usize, first: Player) -> Result<Self, GameError> {
        if b == 0 {
            return Err(GameError::Domain("bias must be at least 1".into()));
        }
        Ok(Self { state: GameState::new(board, b, first) })
    }

    pub fn state(&self) -> &GameState<'a> {
        &self.state
    }

    pub fn is_over(&self) -> bool {
        self.state.free_count() == 0
    }

    /// Plays one move by whoever is to move, then lets both strategies observe.
    pub fn step(&mut self, maker: &mut dyn Strategy, breaker: &mut dyn Strategy) -> Result<(), GameError> {
        let player = self.state.turn();
        let count = self.state.required_count();
        let edges = match player {
            Player::Maker => maker.next_moves(&self.state, count)?,
            Player::Breaker => breaker.next_moves(&self.state, count)?,
        };
        validate(&self.state, player, &edges, count)?;
        self.state.apply(player, edges);
        maker.observe(&self.state);
        breaker.observe(&self.state);
        Ok(())
    }

    pub fn finish(self, maker: &dyn Strategy, breaker: &dyn Strategy) -> GameResult {
        let state = self.state;
        let sizes = state.component_sizes_of(Player::Maker);
        let mut violations: Vec<String> = maker
            .violations()
            .into_iter()
            .map(|v| format!("maker: {v}"))
            .collect();
        violations.extend(breaker.violations().into_iter().map(|v| format!("breaker: {v}")));
        if let Err(e) = check_claim_accounting(state.moves(), state.b(), state.first(), state.board().m()) {
            violations.push(format!("engine: {e}"));
        }
        let mut notes = maker.notes();
        notes.extend(breaker.notes());
        GameResult {
            largest_maker_component: sizes.first().copied().unwrap_or(0),
            maker_component_sizes: sizes,
            rounds: state.moves().len().div_ceil(2),
            maker_edges: state.claimed_count(Player::Maker),
            breaker_edges: state.claimed_count(Player::Breaker),
            invariant_violations: violations,
            notes,
            moves: state.moves().to_vec(),
        }
    }
}

/// Runs the game until every edge is claimed.
pub fn play(
    board: &Graph,
    b: usize,
    maker: &mut dyn Strategy,
    breaker: &mut dyn Strategy,
    first: Player,
) -> Result<GameResult, GameError> {
    let mut game = Game::new(board, b, first)?;
    while !game.is_over() {
        game.step(maker, breaker)?;
    }
    Ok(game.finish(maker, breaker))
}

/// Checks a move log against the (1:b) protocol: alternation, one edge per
/// Maker move, `b` per Breaker move except a short final one, no repeats.
pub fn check_claim_accounting(moves: &[Move], b: usize, first: Player, board_edges: usize) -> Result<(), String> {
    let mut claimed = HashSet::new();
    let mut expected = first;
    for (i, mv) in moves.iter().enumerate() {
        if mv.player != expected {
            return Err(format!("move {i} by {} out of turn", mv.player));
        }
        let remaining = board_edges - claimed.len();
        let want = match mv.player {
            Player::Maker => remaining.min(1),
            Player::Breaker => remaining.min(b),
        };
        if mv.edges.len() != want {
            return Err(format!("move {i} by {} claimed {} edges, expected {want}", mv.player, mv.edges.len()));
        }
        for &e in &mv.edges {
            if !claimed.insert(e) {
                return Err(format!("edge {e} claimed twice"));
            }
        }
        expected = expected.other();
    }
    if claimed.len() != board_edges {
        return Err(format!("{} of {board_edges} edges claimed at the end", claimed.len()));
    }
    Ok(())
}

/// Claims the lowest-id free edges. Used as a deterministic baseline and
/// as the fallback inside other strategies.
#[derive(Debug, Default, Clone)]
pub struct LowestFirst;

impl Strategy for LowestFirst {
    fn name(&self) -> String {
        "lowest".into()
    }

    fn next_moves(&mut self, state: &GameState<'_>, count: usize) -> Result<Vec<usize>, GameError> {
        Ok(lowest_free_edges(state, count, &[]))
    }
}

/// The `count` lowest-id free edges not in `skip`.
pub(crate) fn lowest_free_edges(state: &GameState<'_>, count: usize, skip: &[usize]) -> Vec<usize> {
    let start = state.lowest_free().unwrap_or(state.board().m());
    (start..state.board().m())
        .filter(|&e| state.is_free(e) && !skip.contains(&e))
        .take(count)
        .collect()
}
