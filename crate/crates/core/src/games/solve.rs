//! Bounded minimax over truncated games, with checkable certificates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{
    initial_responses, is_legal_move, legal_exists_responses, legal_forall_moves, validate_network,
    GameError, GameMode, GameState, Move, Network,
};
use crate::bao::AtomStructure;

/// Largest truncation the solver accepts.
pub const MAX_ROUNDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Node budget `m`.
    pub nodes: usize,
    /// Rounds after the opening.
    pub rounds: usize,
    pub mode: GameMode,
    /// Positions expanded before giving up.
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Exists,
    Forall,
}

/// An answer by ∃ and the canonical position it leads to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reply {
    pub network: Network,
    pub next: usize,
    /// `renaming[x]` is the name of node `x` in the next position.
    pub renaming: Vec<usize>,
}

/// ∀'s opening atom and ∃'s answers to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Opening {
    pub atom: usize,
    pub exists: Vec<Reply>,
}

/// A move and ∃'s answers. An empty answer list is a dead end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub forall: Move,
    pub exists: Vec<Reply>,
}

/// A position up to renaming of nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Position {
    pub id: usize,
    pub rounds_left: usize,
    pub networks: Vec<Network>,
    pub lines: Vec<Line>,
}

/// A strategy for the winner, shared between positions equal up to
/// renaming. For ∃ every move gets one answer; for ∀ one move per
/// position gets every answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub truncation: String,
    pub mode: GameMode,
    pub nodes: usize,
    pub rounds: usize,
    pub winner: Player,
    pub openings: Vec<Opening>,
    pub positions: Vec<Position>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub winner: Player,
    pub positions_searched: u64,
    pub certificate: Certificate,
}

type Key = (Vec<Network>, usize);

struct Solver<'a> {
    s: &'a AtomStructure,
    cfg: &'a SolveConfig,
    perms: Vec<Vec<usize>>,
    memo: HashMap<Key, bool>,
    expanded: u64,
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(m: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for x in 0..m {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(m, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    go(m, &mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Sorted, deduplicated networks after renaming.
fn renamed(state: &[Network], pi: &[usize]) -> Vec<Network> {
    let mut v: Vec<Network> = state.iter().map(|n| n.rename(pi)).collect();
    v.sort();
    v.dedup();
    v
}

impl Solver<'_> {
    /// The least renaming of `state`, and the permutation reaching it.
    fn canonical(&self, state: &[Network]) -> (Vec<Network>, Vec<usize>) {
        let mut best: Option<(Vec<Network>, &Vec<usize>)> = None;
        for pi in &self.perms {
            let cand = renamed(state, pi);
            if best.as_ref().is_none_or(|(b, _)| cand < *b) {
                best = Some((cand, pi));
            }
        }
        let (v, pi) = best.expect("at least one permutation");
        (v, pi.clone())
    }

    fn next_state(&self, state: &[Network], m: Network) -> Vec<Network> {
        match self.cfg.mode {
            GameMode::G => vec![m],
            GameMode::F => {
                let mut v = state.to_vec();
                v.push(m);
                v
            }
        }
    }

    fn game_state(&self, state: &[Network]) -> GameState {
        GameState {
            budget: self.cfg.nodes,
            mode: self.cfg.mode,
            networks: state.to_vec(),
        }
    }

    /// Whether ∃ survives `r` more rounds from the canonical `state`.
    fn wins(&mut self, state: &[Network], r: usize) -> Result<bool, GameError> {
        if r == 0 {
            return Ok(true);
        }
        let key = (state.to_vec(), r);
        if let Some(&w) = self.memo.get(&key) {
            return Ok(w);
        }
        self.expanded += 1;
        if self.expanded > self.cfg.budget {
            return Err(GameError::BudgetExceeded {
                positions: self.expanded,
            });
        }
        let gs = self.game_state(state);
        let mut result = true;
        for mv in legal_forall_moves(self.s, &gs) {
            let mut answered = false;
            for m in legal_exists_responses(self.s, &gs, &mv) {
                let (next, _) = self.canonical(&self.next_state(state, m));
                if self.wins(&next, r - 1)? {
                    answered = true;
                    break;
                }
            }
            if !answered {
                result = false;
                break;
            }
        }
        self.memo.insert(key, result);
        Ok(result)
    }
}

struct Builder<'a, 'b> {
    solver: &'b mut Solver<'a>,
    ids: HashMap<Key, usize>,
    positions: Vec<Position>,
    queue: Vec<usize>,
}

impl Builder<'_, '_> {
    fn reply(&mut self, state: &[Network], network: Network, r: usize) -> Reply {
        let (next, renaming) = self
            .solver
            .canonical(&self.solver.next_state(state, network.clone()));
        let key = (next.clone(), r);
        let next_id = match self.ids.get(&key) {
            Some(&id) => id,
            None => {
                let id = self.positions.len();
                self.ids.insert(key, id);
                self.positions.push(Position {
                    id,
                    rounds_left: r,
                    networks: next,
                    lines: Vec::new(),
                });
                self.queue.push(id);
                id
            }
        };
        Reply {
            network,
            next: next_id,
            renaming,
        }
    }

    fn fill(&mut self, id: usize, winner: Player) -> Result<(), GameError> {
        let state = self.positions[id].networks.clone();
        let r = self.positions[id].rounds_left;
        if r == 0 {
            return Ok(());
        }
        let gs = self.solver.game_state(&state);
        let mut lines = Vec::new();
        for mv in legal_forall_moves(self.solver.s, &gs) {
            let responses = legal_exists_responses(self.solver.s, &gs, &mv);
            match winner {
                Player::Exists => {
                    let mut chosen = None;
                    for m in responses {
                        let (next, _) = self
                            .solver
                            .canonical(&self.solver.next_state(&state, m.clone()));
                        if self.solver.wins(&next, r - 1)? {
                            chosen = Some(m);
                            break;
                        }
                    }
                    let m = chosen.expect("position is won by ∃");
                    let reply = self.reply(&state, m, r - 1);
                    lines.push(Line {
                        forall: mv,
                        exists: vec![reply],
                    });
                }
                Player::Forall => {
                    let mut all_lose = true;
                    for m in &responses {
                        let (next, _) = self
                            .solver
                            .canonical(&self.solver.next_state(&state, m.clone()));
                        if self.solver.wins(&next, r - 1)? {
                            all_lose = false;
                            break;
                        }
                    }
                    if all_lose {
                        let exists = responses
                            .into_iter()
                            .map(|m| self.reply(&state, m, r - 1))
                            .collect();
                        lines.push(Line { forall: mv, exists });
                        break;
                    }
                }
            }
        }
        self.positions[id].lines = lines;
        Ok(())
    }
}

/// Solves the `r`-round truncation of `F^m` or `G^m`: ∃ wins it when she
/// answers the opening and `r` further moves.
pub fn solve_bounded(s: &AtomStructure, cfg: &SolveConfig) -> Result<Solution, GameError> {
    let n = s.dim();
    if cfg.rounds > MAX_ROUNDS {
        return Err(GameError::BadConfig(format!(
            "rounds {} > {MAX_ROUNDS}",
            cfg.rounds
        )));
    }
    if cfg.nodes <= n || cfg.nodes > n + 3 {
        return Err(GameError::BadConfig(format!(
            "node budget {} outside {}..={}",
            cfg.nodes,
            n + 1,
            n + 3
        )));
    }
    let mut solver = Solver {
        s,
        cfg,
        perms: permutations(cfg.nodes),
        memo: HashMap::new(),
        expanded: 0,
    };
    let r = cfg.rounds;
    let mut winner = Player::Exists;
    let mut openings_answers = Vec::new();
    for a in 0..s.atoms() {
        let mut answer = None;
        let responses = initial_responses(s, a);
        for m in &responses {
            let (first, _) = solver.canonical(std::slice::from_ref(m));
            if solver.wins(&first, r)? {
                answer = Some(m.clone());
                break;
            }
        }
        match answer {
            Some(m) => openings_answers.push((a, vec![m])),
            None => {
                winner = Player::Forall;
                openings_answers = vec![(a, responses)];
                break;
            }
        }
    }
    let mut b = Builder {
        solver: &mut solver,
        ids: HashMap::new(),
        positions: Vec::new(),
        queue: Vec::new(),
    };
    let mut openings = Vec::new();
    for (a, answers) in openings_answers {
        let exists = answers.into_iter().map(|m| b.reply(&[], m, r)).collect();
        openings.push(Opening { atom: a, exists });
    }
    while let Some(id) = b.queue.pop() {
        b.fill(id, winner)?;
    }
    let mut positions = b.positions;
    positions.sort_by_key(|p| p.id);
    let certificate = Certificate {
        truncation: format!("{r}-round truncation"),
        mode: cfg.mode,
        nodes: cfg.nodes,
        rounds: r,
        winner,
        openings,
        positions,
    };
    Ok(Solution {
        winner,
        positions_searched: solver.expanded,
        certificate,
    })
}

fn is_permutation(pi: &[usize], m: usize) -> bool {
    let mut seen = vec![false; m];
    pi.len() == m
        && pi
            .iter()
            .all(|&x| x < m && !std::mem::replace(&mut seen[x], true))
}

/// Replays a certificate against the structure: every network is valid,
/// every move and answer is legal, renamings match the positions they
/// point to, and the winner's obligations are met in full.
pub fn verify_certificate(s: &AtomStructure, cert: &Certificate) -> Result<(), String> {
    let m = cert.nodes;
    let pos = |id: usize| cert.positions.get(id).ok_or(format!("no position {id}"));
    for (i, p) in cert.positions.iter().enumerate() {
        if p.id != i {
            return Err(format!("position {i} carries id {}", p.id));
        }
        for net in &p.networks {
            validate_network(s, net).map_err(|v| format!("position {i}: {v:?}"))?;
            if net.nodes().iter().any(|&x| x >= m) {
                return Err(format!("position {i}: node outside the budget"));
            }
        }
    }
    let check_reply = |state: &[Network], reply: &Reply, rounds: usize| -> Result<(), String> {
        validate_network(s, &reply.network).map_err(|v| format!("{v:?}"))?;
        if !is_permutation(&reply.renaming, m) {
            return Err("renaming is not a permutation".into());
        }
        let mut next = match cert.mode {
            GameMode::G => vec![reply.network.clone()],
            GameMode::F => {
                let mut v = state.to_vec();
                v.push(reply.network.clone());
                v
            }
        };
        next = renamed(&next, &reply.renaming);
        let target = pos(reply.next)?;
        if target.networks != next || target.rounds_left != rounds {
            return Err(format!("reply does not lead to position {}", reply.next));
        }
        Ok(())
    };
    // openings
    let all_initial = |a: usize| initial_responses(s, a);
    match cert.winner {
        Player::Exists => {
            let atoms: Vec<usize> = cert.openings.iter().map(|o| o.atom).collect();
            if atoms != (0..s.atoms()).collect::<Vec<_>>() {
                return Err("∃ must answer every opening atom".into());
            }
        }
        Player::Forall => {
            if cert.openings.len() != 1 {
                return Err("∀ names exactly one opening atom".into());
            }
        }
    }
    for o in &cert.openings {
        let legal = all_initial(o.atom);
        match cert.winner {
            Player::Exists if o.exists.len() != 1 => {
                return Err(format!("opening {}: one answer expected", o.atom))
            }
            Player::Forall => {
                let mut given: Vec<Network> = o.exists.iter().map(|r| r.network.clone()).collect();
                given.sort();
                if given != legal {
                    return Err(format!(
                        "opening {}: answers are not all of ∃'s options",
                        o.atom
                    ));
                }
            }
            _ => {}
        }
        for reply in &o.exists {
            if !legal.contains(&reply.network) {
                return Err(format!("opening {}: illegal answer", o.atom));
            }
            check_reply(&[], reply, cert.rounds)?;
        }
    }
    for p in &cert.positions {
        let state = &p.networks;
        if cert.mode == GameMode::G && state.len() != 1 {
            return Err(format!("position {}: G positions hold one network", p.id));
        }
        let gs = GameState {
            budget: m,
            mode: cert.mode,
            networks: state.clone(),
        };
        if p.rounds_left == 0 {
            if !p.lines.is_empty() {
                return Err(format!("position {}: moves after the last round", p.id));
            }
            continue;
        }
        match cert.winner {
            Player::Exists => {
                let mut want = legal_forall_moves(s, &gs);
                let mut got: Vec<Move> = p.lines.iter().map(|l| l.forall.clone()).collect();
                want.sort();
                got.sort();
                if want != got {
                    return Err(format!("position {}: moves do not match ∀'s options", p.id));
                }
                for line in &p.lines {
                    let [reply] = line.exists.as_slice() else {
                        return Err(format!("position {}: one answer per move", p.id));
                    };
                    let net = &reply.network;
                    let base = &state[line.forall.network];
                    let mut nodes = base.nodes().to_vec();
                    nodes.push(line.forall.k);
                    nodes.sort_unstable();
                    if !net.extends(base)
                        || net.nodes() != nodes.as_slice()
                        || net.label(&line.forall.demanded()) != Some(line.forall.atom)
                    {
                        return Err(format!("position {}: answer is not a legal response", p.id));
                    }
                    check_reply(state, reply, p.rounds_left - 1)?;
                }
            }
            Player::Forall => {
                let [line] = p.lines.as_slice() else {
                    return Err(format!("position {}: ∀ plays one move", p.id));
                };
                if !is_legal_move(s, &gs, &line.forall) {
                    return Err(format!("position {}: illegal move", p.id));
                }
                let mut want = legal_exists_responses(s, &gs, &line.forall);
                let mut got: Vec<Network> = line.exists.iter().map(|r| r.network.clone()).collect();
                want.sort();
                got.sort();
                if want != got {
                    return Err(format!(
                        "position {}: answers are not all of ∃'s options",
                        p.id
                    ));
                }
                for reply in &line.exists {
                    let target = pos(reply.next)?;
                    if target.rounds_left == 0 {
                        return Err(format!("position {}: ∃ survives to the end", p.id));
                    }
                    check_reply(state, reply, p.rounds_left - 1)?;
                }
            }
        }
    }
    Ok(())
}
