//! Atomic networks and the cylindrifier games `F^m` and `G^m`.

mod script;
mod solve;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bao::{AtomStructure, Element};
use crate::rainbow::RainbowError;

pub use script::{
    verify_forall_script, verify_script_tree, ExistsStep, ScriptConfig, ScriptNode, ScriptTree,
};
pub use solve::{
    solve_bounded, verify_certificate, Certificate, Line, Opening, Player, Position, Reply,
    Solution, SolveConfig, MAX_ROUNDS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("bad game configuration: {0}")]
    BadConfig(String),
    #[error("search aborted after {positions} positions; the result is inconclusive")]
    BudgetExceeded { positions: u64 },
    #[error("the scripted strategy was refuted: {0}")]
    ScriptRefuted(String),
    #[error("malformed network: {0}")]
    BadNetwork(String),
    #[error(transparent)]
    Rainbow(#[from] RainbowError),
}

/// Whether `∀` may reuse nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameMode {
    /// `k` need only avoid the chosen network; node names may recur.
    F,
    /// `k` must never have been used.
    G,
}

/// A map from `n`-tuples of nodes to atoms. Labels are listed for tuples in
/// lexicographic order of node names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "NetworkJson")]
pub struct Network {
    dim: usize,
    nodes: Vec<usize>,
    labels: Vec<usize>,
}

#[derive(Deserialize)]
struct NetworkJson {
    dim: usize,
    nodes: Vec<usize>,
    labels: Vec<usize>,
}

impl TryFrom<NetworkJson> for Network {
    type Error = GameError;

    fn try_from(v: NetworkJson) -> Result<Self, GameError> {
        Network::new(v.dim, v.nodes, v.labels)
    }
}

impl Network {
    pub fn new(dim: usize, nodes: Vec<usize>, labels: Vec<usize>) -> Result<Self, GameError> {
        if dim == 0 || nodes.is_empty() {
            return Err(GameError::BadNetwork("no nodes or dimension 0".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GameError::BadNetwork(
                "nodes must be strictly increasing".into(),
            ));
        }
        let want = nodes.len().checked_pow(dim as u32);
        if want != Some(labels.len()) {
            return Err(GameError::BadNetwork(format!(
                "{} labels for {} nodes in dimension {dim}",
                labels.len(),
                nodes.len()
            )));
        }
        Ok(Self { dim, nodes, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn has_node(&self, x: usize) -> bool {
        self.nodes.binary_search(&x).is_ok()
    }

    fn position_tuple(&self, idx: usize) -> Vec<usize> {
        digits(idx, self.nodes.len(), self.dim)
    }

    /// The tuple of node names at label position `idx`.
    pub fn tuple(&self, idx: usize) -> Vec<usize> {
        self.position_tuple(idx)
            .into_iter()
            .map(|p| self.nodes[p])
            .collect()
    }

    fn index_of(&self, t: &[usize]) -> Option<usize> {
        if t.len() != self.dim {
            return None;
        }
        let k = self.nodes.len();
        t.iter().try_fold(0, |acc, x| {
            self.nodes.binary_search(x).ok().map(|p| acc * k + p)
        })
    }

    pub fn label(&self, t: &[usize]) -> Option<usize> {
        self.index_of(t).map(|i| self.labels[i])
    }

    /// The network on `keep ∩ nodes`.
    pub fn restrict(&self, keep: &[usize]) -> Network {
        let nodes: Vec<usize> = self
            .nodes
            .iter()
            .copied()
            .filter(|x| keep.contains(x))
            .collect();
        let k = nodes.len();
        let labels = (0..k.pow(self.dim as u32))
            .map(|idx| {
                let t: Vec<usize> = digits(idx, k, self.dim)
                    .into_iter()
                    .map(|p| nodes[p])
                    .collect();
                self.label(&t).expect("subset of nodes")
            })
            .collect();
        Network {
            dim: self.dim,
            nodes,
            labels,
        }
    }

    /// Renames node `x` to `pi[x]`.
    pub fn rename(&self, pi: &[usize]) -> Network {
        let mut nodes: Vec<usize> = self.nodes.iter().map(|&x| pi[x]).collect();
        nodes.sort_unstable();
        let k = nodes.len();
        let mut inv = vec![usize::MAX; pi.len()];
        for (x, &y) in pi.iter().enumerate() {
            inv[y] = x;
        }
        let labels = (0..k.pow(self.dim as u32))
            .map(|idx| {
                let t: Vec<usize> = digits(idx, k, self.dim)
                    .into_iter()
                    .map(|p| inv[nodes[p]])
                    .collect();
                self.label(&t).expect("renaming is a bijection")
            })
            .collect();
        Network {
            dim: self.dim,
            nodes,
            labels,
        }
    }

    /// Whether `self` agrees with `other` on all of `other`'s tuples.
    pub fn extends(&self, other: &Network) -> bool {
        other.dim == self.dim
            && other.nodes.iter().all(|&x| self.has_node(x))
            && (0..other.labels.len()).all(|i| self.label(&other.tuple(i)) == Some(other.labels[i]))
    }
}

/// Base-`k` digits of `idx`, most significant first.
fn digits(mut idx: usize, k: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for p in (0..len).rev() {
        out[p] = idx % k;
        idx /= k;
    }
    out
}

/// Which network condition fails, and where.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NetworkViolation {
    UnknownAtom {
        tuple: Vec<usize>,
        atom: usize,
    },
    DimensionMismatch {
        network: usize,
        structure: usize,
    },
    /// `N(δ)` with `δ_i = δ_j` is not below `d_ij`.
    Diagonal {
        tuple: Vec<usize>,
        i: usize,
        j: usize,
    },
    /// `N(δ[i→d])` is not below `c_i N(δ)`.
    Cylindrifier {
        tuple: Vec<usize>,
        i: usize,
        d: usize,
    },
}

/// Checks `N(δ^i_j) ≤ d_ij` and `N(δ[i→d]) ≤ c_i N(δ)` everywhere.
pub fn validate_network(s: &AtomStructure, net: &Network) -> Result<(), NetworkViolation> {
    let n = s.dim();
    if net.dim != n {
        return Err(NetworkViolation::DimensionMismatch {
            network: net.dim,
            structure: n,
        });
    }
    for (idx, &a) in net.labels.iter().enumerate() {
        if a >= s.atoms() {
            return Err(NetworkViolation::UnknownAtom {
                tuple: net.tuple(idx),
                atom: a,
            });
        }
    }
    for idx in 0..net.labels.len() {
        let t = net.tuple(idx);
        let a = net.labels[idx];
        for i in 0..n {
            for j in 0..n {
                if t[i] == t[j] && !s.diagonal(i, j).contains(a) {
                    return Err(NetworkViolation::Diagonal { tuple: t, i, j });
                }
            }
        }
        for i in 0..n {
            let t_i = s.accessibility(i);
            for &d in &net.nodes {
                let mut u = t.clone();
                u[i] = d;
                let b = net.label(&u).expect("same nodes");
                if !t_i.related(b, a) {
                    return Err(NetworkViolation::Cylindrifier { tuple: t, i, d });
                }
            }
        }
    }
    Ok(())
}

/// A cylindrifier move `(N, F, k, b, l)`: `network` indexes the state's
/// history and `face` has `n - 1` entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub network: usize,
    pub face: Vec<usize>,
    pub k: usize,
    pub atom: usize,
    pub l: usize,
}

impl Move {
    /// The face with `x` inserted at position `l`.
    pub fn tuple_with(&self, x: usize) -> Vec<usize> {
        let mut t = self.face.clone();
        t.insert(self.l, x);
        t
    }

    /// The tuple that must receive `atom`.
    pub fn demanded(&self) -> Vec<usize> {
        self.tuple_with(self.k)
    }
}

/// Networks played so far, with the node budget and reuse rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub budget: usize,
    pub mode: GameMode,
    pub networks: Vec<Network>,
}

impl GameState {
    fn used(&self) -> Vec<bool> {
        let mut used = vec![false; self.budget];
        for net in &self.networks {
            for &x in &net.nodes {
                if x < self.budget {
                    used[x] = true;
                }
            }
        }
        used
    }
}

/// Ordered tuples of length `len` over `nodes`, repetition allowed.
fn tuples_over(nodes: &[usize], len: usize) -> Vec<Vec<usize>> {
    let k = nodes.len();
    (0..k.pow(len as u32))
        .map(|idx| digits(idx, k, len).into_iter().map(|p| nodes[p]).collect())
        .collect()
}

/// Whether `mv` is a cylindrifier move ∀ may make in `state`.
pub fn is_legal_move(s: &AtomStructure, state: &GameState, mv: &Move) -> bool {
    let n = s.dim();
    let Some(net) = state.networks.get(mv.network) else {
        return false;
    };
    if mv.face.len() + 1 != n || mv.l >= n || mv.atom >= s.atoms() || mv.k >= state.budget {
        return false;
    }
    if mv.face.iter().any(|x| !net.has_node(*x)) || net.has_node(mv.k) {
        return false;
    }
    if state.mode == GameMode::G && state.used()[mv.k] {
        return false;
    }
    let here = net
        .label(&mv.tuple_with(mv.face[0]))
        .expect("face nodes present");
    s.accessibility(mv.l).related(mv.atom, here)
}

/// Every cylindrifier move, ordered by network, face, `k`, `l`, atom.
pub fn legal_forall_moves(s: &AtomStructure, state: &GameState) -> Vec<Move> {
    let n = s.dim();
    let used = state.used();
    let mut out = Vec::new();
    for (ni, net) in state.networks.iter().enumerate() {
        for face in tuples_over(&net.nodes, n - 1) {
            for k in 0..state.budget {
                if net.has_node(k) || (state.mode == GameMode::G && used[k]) {
                    continue;
                }
                for l in 0..n {
                    let mut t = face.clone();
                    t.insert(l, face[0]);
                    let here = net.label(&t).expect("face nodes present");
                    let succ = s
                        .accessibility(l)
                        .image(&Element::from_indices(s.atoms(), [here]));
                    for atom in succ.ones() {
                        out.push(Move {
                            network: ni,
                            face: face.clone(),
                            k,
                            atom,
                            l,
                        });
                    }
                }
            }
        }
    }
    out
}

/// All networks `M ⊇ N` on `nodes(N) ∪ {k}` with `M(demanded) = b`.
pub fn legal_exists_responses(s: &AtomStructure, state: &GameState, mv: &Move) -> Vec<Network> {
    if !is_legal_move(s, state, mv) {
        return Vec::new();
    }
    let base = &state.networks[mv.network];
    let mut nodes = base.nodes.clone();
    nodes.push(mv.k);
    nodes.sort_unstable();
    extensions(s, &nodes, Some(base), &[(mv.demanded(), mv.atom)], None)
}

/// ∃'s opening answers to the atom `a`: networks on the nodes of some
/// `d̄` (named `0..` in order of first appearance) with `N(d̄) = a`.
pub fn initial_responses(s: &AtomStructure, a: usize) -> Vec<Network> {
    let n = s.dim();
    let mut out = Vec::new();
    for pattern in growth_strings(n) {
        let m = pattern.iter().max().map_or(0, |x| x + 1);
        let nodes: Vec<usize> = (0..m).collect();
        out.extend(extensions(s, &nodes, None, &[(pattern, a)], None));
    }
    out.sort();
    out.dedup();
    out
}

/// Restricted growth strings of length `n`: one per partition of `n`.
fn growth_strings(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let top = cur.iter().max().map_or(0, |x| x + 1);
        for x in 0..=top {
            cur.push(x);
            go(n, cur, out);
            cur.pop();
        }
    }
    go(n, &mut Vec::new(), &mut out);
    out
}

/// Constraint search for networks on `nodes` extending `base` and meeting
/// `demands`. Lines (tuples differing in one coordinate) share a `T_i`
/// image; the most constrained tuple is branched on first.
fn extensions(
    s: &AtomStructure,
    nodes: &[usize],
    base: Option<&Network>,
    demands: &[(Vec<usize>, usize)],
    limit: Option<usize>,
) -> Vec<Network> {
    let n = s.dim();
    let k = nodes.len();
    let total = k.pow(n as u32);
    let tuple =
        |idx: usize| -> Vec<usize> { digits(idx, k, n).into_iter().map(|p| nodes[p]).collect() };
    let mut fixed = vec![false; total];
    let mut dom: Vec<Element> = Vec::with_capacity(total);
    for idx in 0..total {
        let t = tuple(idx);
        let mut d = match base.and_then(|b| b.label(&t)) {
            Some(a) => {
                fixed[idx] = true;
                Element::from_indices(s.atoms(), [a])
            }
            None => Element::full(s.atoms()),
        };
        for i in 0..n {
            for j in 0..n {
                if t[i] == t[j] {
                    d.intersect_with(s.diagonal(i, j));
                }
            }
        }
        dom.push(d);
    }
    for (t, b) in demands {
        let pos: Option<usize> = t.iter().try_fold(0, |acc, x| {
            nodes.iter().position(|y| y == x).map(|p| acc * k + p)
        });
        let Some(idx) = pos else { return Vec::new() };
        if *b >= s.atoms() {
            return Vec::new();
        }
        dom[idx].intersect_with(&Element::from_indices(s.atoms(), [*b]));
    }
    let mut lines = Vec::new();
    for i in 0..n {
        let stride = k.pow((n - 1 - i) as u32);
        for idx in 0..total {
            if digits(idx, k, n)[i] != 0 {
                continue;
            }
            let members: Vec<usize> = (0..k).map(|x| idx + x * stride).collect();
            if members.iter().any(|&m| !fixed[m]) {
                lines.push((i, members));
            }
        }
    }
    let search = Csp {
        s,
        nodes,
        lines,
        limit,
    };
    let mut out = Vec::new();
    search.run(dom, &mut out);
    out
}

struct Csp<'a> {
    s: &'a AtomStructure,
    nodes: &'a [usize],
    lines: Vec<(usize, Vec<usize>)>,
    limit: Option<usize>,
}

impl Csp<'_> {
    fn propagate(&self, dom: &mut [Element]) -> bool {
        loop {
            let mut changed = false;
            for (i, members) in &self.lines {
                let t = self.s.accessibility(*i);
                let mut allowed: Option<Element> = None;
                for &m in members {
                    let img = t.image(&dom[m]);
                    match allowed.as_mut() {
                        None => allowed = Some(img),
                        Some(a) => a.intersect_with(&img),
                    }
                }
                let allowed = allowed.expect("lines are nonempty");
                for &m in members {
                    if !dom[m].is_subset(&allowed) {
                        dom[m].intersect_with(&allowed);
                        if dom[m].is_empty() {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&self, mut dom: Vec<Element>, out: &mut Vec<Network>) {
        if self.limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        if dom.iter().any(Element::is_empty) || !self.propagate(&mut dom) {
            return;
        }
        let pick = dom
            .iter()
            .enumerate()
            .filter(|(_, d)| d.count() > 1)
            .min_by(|(i, a), (j, b)| match a.count().cmp(&b.count()) {
                Ordering::Equal => i.cmp(j),
                o => o,
            })
            .map(|(i, _)| i);
        match pick {
            None => {
                let labels = dom.iter().map(|d| d.first().expect("nonempty")).collect();
                let net = Network {
                    dim: self.s.dim(),
                    nodes: self.nodes.to_vec(),
                    labels,
                };
                if validate_network(self.s, &net).is_ok() {
                    out.push(net);
                }
            }
            Some(v) => {
                for a in dom[v].ones() {
                    let mut next = dom.clone();
                    next[v] = Element::from_indices(self.s.atoms(), [a]);
                    self.run(next, out);
                    if self.limit.is_some_and(|l| out.len() >= l) {
                        return;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::bao::Accessibility;
    use crate::setalg::Space;

    pub(crate) fn full_set_structure(n: usize, u: usize) -> AtomStructure {
        AtomStructure::of_space(&Space::new(n, u).unwrap()).unwrap()
    }

    /// Two atoms in dimension 2; `T_0` is the identity.
    pub(crate) fn rigid_structure() -> AtomStructure {
        AtomStructure::new(
            2,
            2,
            vec![
                Accessibility::equivalence(vec![0, 1]),
                Accessibility::equivalence(vec![0, 0]),
            ],
            vec![
                Element::full(2),
                Element::from_indices(2, [0]),
                Element::from_indices(2, [0]),
                Element::full(2),
            ],
            vec![crate::bao::Interior::Identity; 2],
        )
        .unwrap()
    }

    /// Oracle: a network on the full set algebra structure is a pair of
    /// maps `f_i` with `N(x, y) = (f_0 x, f_1 y)` and `f_0 = f_1`.
    fn brute_networks(s: &AtomStructure, nodes: &[usize]) -> Vec<Network> {
        let k = nodes.len();
        let total = k * k;
        let mut out = Vec::new();
        for code in 0..s.atoms().pow(total as u32) {
            let labels = digits(code, s.atoms(), total);
            let net = Network::new(2, nodes.to_vec(), labels).unwrap();
            if validate_network(s, &net).is_ok() {
                out.push(net);
            }
        }
        out
    }

    #[test]
    fn network_basics() {
        let net = Network::new(2, vec![1, 4], vec![0, 1, 2, 3]).unwrap();
        assert_eq!(net.label(&[4, 1]), Some(2));
        assert_eq!(net.tuple(1), vec![1, 4]);
        assert_eq!(net.restrict(&[4]).labels(), &[3]);
        let r = net.rename(&[0, 4, 2, 3, 1]);
        assert_eq!(r.nodes(), &[1, 4]);
        assert_eq!(r.label(&[4, 1]), Some(1));
        assert!(net.extends(&net.restrict(&[1])));
        assert!(Network::new(2, vec![1, 1], vec![0; 4]).is_err());
        let json = serde_json::to_string(&net).unwrap();
        assert_eq!(serde_json::from_str::<Network>(&json).unwrap(), net);
    }

    #[test]
    fn validation_examples() {
        let s = full_set_structure(2, 2);
        // atom 0 = (0,0) lies below d_01
        assert!(validate_network(&s, &Network::new(2, vec![0], vec![0]).unwrap()).is_ok());
        // atom 1 = (1,0) on the diagonal tuple (0,0)
        assert!(matches!(
            validate_network(&s, &Network::new(2, vec![0], vec![1]).unwrap()),
            Err(NetworkViolation::Diagonal { .. })
        ));
        assert!(matches!(
            validate_network(&s, &Network::new(2, vec![0, 1], vec![0, 0, 0, 3]).unwrap()),
            Err(NetworkViolation::Cylindrifier { .. })
        ));
    }

    #[test]
    fn propagation_matches_brute_force() {
        let s = full_set_structure(2, 2);
        for nodes in [vec![0], vec![0, 1], vec![0, 2, 3]] {
            let mut want = brute_networks(&s, &nodes);
            let mut got = extensions(&s, &nodes, None, &[], None);
            want.sort();
            got.sort();
            assert_eq!(got, want);
            // a network is fixed by one map into the base
            assert_eq!(got.len(), 1 << nodes.len());
        }
    }

    #[test]
    fn moves_and_responses() {
        let s = full_set_structure(2, 2);
        let start = initial_responses(&s, 1);
        assert!(!start.is_empty());
        let state = GameState {
            budget: 3,
            mode: GameMode::G,
            networks: vec![start[0].clone()],
        };
        let moves = legal_forall_moves(&s, &state);
        assert!(!moves.is_empty());
        for mv in &moves {
            assert!(is_legal_move(&s, &state, mv));
            let res = legal_exists_responses(&s, &state, mv);
            // the copying response always exists in a full set algebra
            assert!(!res.is_empty());
            for m in res {
                assert!(m.extends(&state.networks[0]));
                assert_eq!(m.label(&mv.demanded()), Some(mv.atom));
            }
        }
        // an atom outside c_l of the face is refused
        let mv = &moves[0];
        let bad = (0..4).find(|&b| {
            !s.accessibility(mv.l).related(
                b,
                state.networks[0].label(&mv.tuple_with(mv.face[0])).unwrap(),
            )
        });
        let bad = Move {
            atom: bad.unwrap(),
            ..mv.clone()
        };
        assert!(!is_legal_move(&s, &state, &bad));
        assert!(legal_exists_responses(&s, &state, &bad).is_empty());
    }

    #[test]
    fn budget_limits_fresh_nodes() {
        let s = full_set_structure(2, 2);
        let net = initial_responses(&s, 1)
            .into_iter()
            .find(|n| n.nodes().len() == 2)
            .unwrap();
        let mut state = GameState {
            budget: 2,
            mode: GameMode::G,
            networks: vec![net.clone()],
        };
        assert!(legal_forall_moves(&s, &state).is_empty());
        state.budget = 3;
        assert!(legal_forall_moves(&s, &state).iter().all(|m| m.k == 2));
        // F-mode may return to a smaller network and reuse node 1
        let small = net.restrict(&[0]);
        let f = GameState {
            budget: 2,
            mode: GameMode::F,
            networks: vec![small, net],
        };
        assert!(legal_forall_moves(&s, &f)
            .iter()
            .any(|m| m.network == 0 && m.k == 1));
        let g = GameState {
            mode: GameMode::G,
            ..f
        };
        assert!(legal_forall_moves(&s, &g).is_empty());
    }

    #[test]
    fn rigid_structure_has_no_opening_for_the_off_diagonal_atom() {
        let s = rigid_structure();
        assert!(initial_responses(&s, 1).is_empty());
        assert!(!initial_responses(&s, 0).is_empty());
    }
}
