//! ∀'s cone strategy on the rainbow atom structure, checked against every
//! answer ∃ can give.

use serde::{Deserialize, Serialize};

use super::{
    initial_responses, is_legal_move, legal_exists_responses, validate_network, GameError,
    GameMode, GameState, Move, Network,
};
use crate::rainbow::{cone, RainbowStructure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptConfig {
    /// Tint of the opening cone, then of each demanded cone. Tints must be
    /// distinct and within `1..=n+1`.
    pub tints: Vec<usize>,
}

impl ScriptConfig {
    /// All four tints at dimension 3: one opening cone and three more.
    pub fn default_n3() -> Self {
        Self {
            tints: vec![1, 2, 3, 4],
        }
    }
}

/// ∃'s situation after ∀'s move: her answers, or a dead end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExistsStep {
    Answers(Vec<Answer>),
    DeadEnd(DeadEnd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeadEnd {
    DeadEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub network: Network,
    pub then: ScriptNode,
}

/// One round: ∀'s opening atom (round 0) or cone demand, then ∃'s step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptNode {
    pub round: usize,
    pub forall: ForallStep,
    pub exists: ExistsStep,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ForallStep {
    Move(Move),
    Opening { atom: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptTree {
    pub n: usize,
    pub tints: Vec<usize>,
    pub nodes: usize,
    pub max_round: usize,
    pub leaves: usize,
    pub root: ScriptNode,
}

struct Script<'a> {
    rs: &'a RainbowStructure,
    tints: &'a [usize],
    cones: Vec<usize>,
    budget: usize,
    max_round: usize,
    leaves: usize,
}

impl Script<'_> {
    /// ∀ demands the next cone on the base face of the latest network.
    fn round(&mut self, history: &[Network], round: usize) -> Result<ScriptNode, GameError> {
        let s = &self.rs.structure;
        let n = s.dim();
        let latest = history.last().expect("opening played");
        if round >= self.tints.len() {
            return Err(GameError::ScriptRefuted(format!(
                "∃ survives every scripted move; last network {latest:?}"
            )));
        }
        let k = n - 1 + round;
        let mv = Move {
            network: history.len() - 1,
            face: (0..n - 1).collect(),
            k,
            atom: self.cones[round],
            l: n - 1,
        };
        let state = GameState {
            budget: self.budget,
            mode: GameMode::F,
            networks: history.to_vec(),
        };
        if !is_legal_move(s, &state, &mv) {
            return Err(GameError::ScriptRefuted(format!(
                "round {round}: cone move is illegal"
            )));
        }
        let responses = legal_exists_responses(s, &state, &mv);
        let exists = self.answers(history, responses, round)?;
        Ok(ScriptNode {
            round,
            forall: ForallStep::Move(mv),
            exists,
        })
    }

    fn answers(
        &mut self,
        history: &[Network],
        responses: Vec<Network>,
        round: usize,
    ) -> Result<ExistsStep, GameError> {
        if responses.is_empty() {
            self.leaves += 1;
            self.max_round = self.max_round.max(round);
            return Ok(ExistsStep::DeadEnd(DeadEnd::DeadEnd));
        }
        let mut out = Vec::new();
        for m in responses {
            let mut next = history.to_vec();
            next.push(m.clone());
            let then = self.round(&next, round + 1)?;
            out.push(Answer { network: m, then });
        }
        Ok(ExistsStep::Answers(out))
    }
}

/// Plays ∀'s cone script at dimension 3: the opening cone on nodes
/// `0..n`, then cones with fresh apexes on the face `(0, ..., n-2)`. Every
/// answer of ∃ is followed; the result is a tree whose leaves are all
/// dead ends for ∃, or `ScriptRefuted`.
pub fn verify_forall_script(
    rs: &RainbowStructure,
    cfg: &ScriptConfig,
) -> Result<ScriptTree, GameError> {
    let sig = rs.signature();
    let n = sig.n();
    let mut seen = cfg.tints.clone();
    seen.sort_unstable();
    seen.dedup();
    if cfg.tints.is_empty()
        || seen.len() != cfg.tints.len()
        || seen.iter().any(|&t| t == 0 || t > n + 1)
    {
        return Err(GameError::BadConfig(format!("tints {:?}", cfg.tints)));
    }
    let shade = sig.full_yellow();
    let cones = cfg
        .tints
        .iter()
        .map(|&t| {
            rs.atom_of_graph(&cone(&sig, t, shade))
                .ok_or_else(|| GameError::BadConfig(format!("no cone atom for tint {t}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut script = Script {
        rs,
        tints: &cfg.tints,
        cones,
        budget: n + cfg.tints.len() - 1,
        max_round: 0,
        leaves: 0,
    };
    let opening = initial_responses(&rs.structure, script.cones[0]);
    let exists = script.answers(&[], opening, 0)?;
    let root = ScriptNode {
        round: 0,
        forall: ForallStep::Opening {
            atom: script.cones[0],
        },
        exists,
    };
    Ok(ScriptTree {
        n,
        tints: cfg.tints.clone(),
        nodes: script.budget,
        max_round: script.max_round,
        leaves: script.leaves,
        root,
    })
}

/// Replays a script tree: each move is legal, each answer list is all of
/// ∃'s options, every network is valid and every leaf is a dead end.
pub fn verify_script_tree(rs: &RainbowStructure, tree: &ScriptTree) -> Result<(), String> {
    let s = &rs.structure;
    fn walk(
        s: &crate::bao::AtomStructure,
        budget: usize,
        history: &[Network],
        node: &ScriptNode,
        round: usize,
    ) -> Result<(), String> {
        if node.round != round {
            return Err(format!("round {} recorded as {}", round, node.round));
        }
        let mut want = match (&node.forall, history.is_empty()) {
            (ForallStep::Opening { atom }, true) => initial_responses(s, *atom),
            (ForallStep::Move(mv), false) => {
                let state = GameState {
                    budget,
                    mode: GameMode::F,
                    networks: history.to_vec(),
                };
                if !is_legal_move(s, &state, mv) {
                    return Err(format!("round {round}: illegal move"));
                }
                legal_exists_responses(s, &state, mv)
            }
            _ => return Err(format!("round {round}: opening out of place")),
        };
        match &node.exists {
            ExistsStep::DeadEnd(_) => {
                if want.is_empty() {
                    Ok(())
                } else {
                    Err(format!(
                        "round {round}: ∃ has an answer at a claimed dead end"
                    ))
                }
            }
            ExistsStep::Answers(answers) => {
                let mut got: Vec<Network> = answers.iter().map(|a| a.network.clone()).collect();
                want.sort();
                got.sort();
                if want != got {
                    return Err(format!("round {round}: answers are not all of ∃'s options"));
                }
                for a in answers {
                    validate_network(s, &a.network).map_err(|v| format!("{v:?}"))?;
                    let mut next = history.to_vec();
                    next.push(a.network.clone());
                    walk(s, budget, &next, &a.then, round + 1)?;
                }
                Ok(())
            }
        }
    }
    walk(s, tree.nodes, &[], &tree.root, 0)
}
