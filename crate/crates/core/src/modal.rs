//! S4 and S4C formulas with topological, preorder and dynamic semantics.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::points::{self, PointSet};
use crate::sample;
use crate::topology::{self, alexandrov, FiniteTopology, Preorder, TopologyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModalError {
    #[error("map is not continuous: preimage of open {open:?} is {preimage:?}")]
    NotContinuous {
        open: Vec<usize>,
        preimage: Vec<usize>,
    },
    #[error("map is not total on the base: {0}")]
    NotTotal(String),
    #[error("valuation of p{atom} leaves the base")]
    ValuationOutOfRange { atom: usize },
    #[error("size {size} exceeds the limit {max} for this search mode")]
    SizeTooLarge { size: usize, max: usize },
    #[error("NEXT is only meaningful in dynamic models")]
    UnsupportedNext,
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Formula tree. `Next` is the temporal modality of dynamic models.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Formula {
    Atom {
        index: usize,
    },
    Not {
        arg: Box<Formula>,
    },
    And {
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Or {
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Implies {
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Iff {
        left: Box<Formula>,
        right: Box<Formula>,
    },
    #[serde(rename = "I")]
    Interior {
        arg: Box<Formula>,
    },
    #[serde(rename = "X")]
    Next {
        arg: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(index: usize) -> Self {
        Formula::Atom { index }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(arg: Formula) -> Self {
        Formula::Not { arg: Box::new(arg) }
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Or {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::Implies {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn iff(left: Formula, right: Formula) -> Self {
        Formula::Iff {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn interior(arg: Formula) -> Self {
        Formula::Interior { arg: Box::new(arg) }
    }

    pub fn next(arg: Formula) -> Self {
        Formula::Next { arg: Box::new(arg) }
    }

    /// Atom indices occurring in the formula, ascending.
    pub fn atoms(&self) -> Vec<usize> {
        let mut out = std::collections::BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom { index } = f {
                out.insert(*index);
            }
        });
        out.into_iter().collect()
    }

    /// Nesting depth of modal operators (`I` and `X`).
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom { .. } => 0,
            Formula::Not { arg } => arg.modal_depth(),
            Formula::Interior { arg } | Formula::Next { arg } => 1 + arg.modal_depth(),
            Formula::And { left, right }
            | Formula::Or { left, right }
            | Formula::Implies { left, right }
            | Formula::Iff { left, right } => left.modal_depth().max(right.modal_depth()),
        }
    }

    pub fn has_next(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Next { .. }));
        found
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Atom { .. } => {}
            Formula::Not { arg } | Formula::Interior { arg } | Formula::Next { arg } => {
                arg.visit(f)
            }
            Formula::And { left, right }
            | Formula::Or { left, right }
            | Formula::Implies { left, right }
            | Formula::Iff { left, right } => {
                left.visit(f);
                right.visit(f);
            }
        }
    }

    /// Parses the text syntax: atoms `p0, p1, ..` (bare `p`, `q`, `r` alias
    /// `p0..p2`), `~`, `&`, `|`, `->`, `<->`, prefix `I` and `X`, parentheses.
    pub fn parse(text: &str) -> Result<Self, ModalError> {
        let mut parser = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let f = parser.iff()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { index } => write!(f, "p{index}"),
            Formula::Not { arg } => write!(f, "~{arg}"),
            Formula::Interior { arg } => write!(f, "I{arg}"),
            Formula::Next { arg } => write!(f, "X{arg}"),
            Formula::And { left, right } => write!(f, "({left} & {right})"),
            Formula::Or { left, right } => write!(f, "({left} | {right})"),
            Formula::Implies { left, right } => write!(f, "({left} -> {right})"),
            Formula::Iff { left, right } => write!(f, "({left} <-> {right})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ModalError {
        ModalError::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ModalError> {
        let mut left = self.implication()?;
        while self.eat("<->") {
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ModalError> {
        let left = self.disjunction()?;
        if self.eat("->") {
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ModalError> {
        let mut left = self.conjunction()?;
        while self.eat("|") {
            left = Formula::or(left, self.conjunction()?);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ModalError> {
        let mut left = self.unary()?;
        while self.eat("&") {
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ModalError> {
        self.skip_ws();
        if self.eat("~") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("(") {
            let f = self.iff()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(f);
        }
        match self.src.get(self.pos) {
            Some(b'I') => {
                self.pos += 1;
                Ok(Formula::interior(self.unary()?))
            }
            Some(b'X') => {
                self.pos += 1;
                Ok(Formula::next(self.unary()?))
            }
            Some(&c @ (b'p' | b'q' | b'r')) => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Ok(Formula::atom((c - b'p') as usize));
                }
                if c != b'p' {
                    return Err(self.error("indexed atoms use the letter p"));
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                digits
                    .parse()
                    .map(Formula::atom)
                    .map_err(|_| self.error("atom index out of range"))
            }
            _ => Err(self.error("expected a formula")),
        }
    }
}

/// Valuation of atoms; absent atoms denote the empty set.
pub type Valuation = BTreeMap<usize, PointSet>;

fn check_valuation(size: usize, valuation: &Valuation) -> Result<(), ModalError> {
    for (&atom, &set) in valuation {
        if !points::is_subset(set, points::full(size)) {
            return Err(ModalError::ValuationOutOfRange { atom });
        }
    }
    Ok(())
}

/// Structural evaluation with pluggable modal clauses.
fn eval_with(
    base: PointSet,
    valuation: &Valuation,
    phi: &Formula,
    box_op: &impl Fn(PointSet) -> PointSet,
    next_op: &impl Fn(PointSet) -> PointSet,
) -> PointSet {
    let rec = |f: &Formula| eval_with(base, valuation, f, box_op, next_op);
    match phi {
        Formula::Atom { index } => valuation.get(index).copied().unwrap_or(0),
        Formula::Not { arg } => base & !rec(arg),
        Formula::And { left, right } => rec(left) & rec(right),
        Formula::Or { left, right } => rec(left) | rec(right),
        Formula::Implies { left, right } => (base & !rec(left)) | rec(right),
        Formula::Iff { left, right } => base & !(rec(left) ^ rec(right)),
        Formula::Interior { arg } => box_op(rec(arg)),
        Formula::Next { arg } => next_op(rec(arg)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopoModel {
    pub topology: FiniteTopology,
    pub valuation: Valuation,
}

impl TopoModel {
    pub fn new(topology: FiniteTopology, valuation: Valuation) -> Result<Self, ModalError> {
        check_valuation(topology.size(), &valuation)?;
        Ok(Self {
            topology,
            valuation,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub preorder: Preorder,
    pub valuation: Valuation,
}

impl KripkeModel {
    pub fn new(preorder: Preorder, valuation: Valuation) -> Result<Self, ModalError> {
        check_valuation(preorder.size(), &valuation)?;
        Ok(Self {
            preorder,
            valuation,
        })
    }
}

/// A finite space with a continuous self-map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynamicModel {
    topology: FiniteTopology,
    map: Vec<usize>,
    valuation: Valuation,
}

impl DynamicModel {
    pub fn new(
        topology: FiniteTopology,
        map: Vec<usize>,
        valuation: Valuation,
    ) -> Result<Self, ModalError> {
        check_valuation(topology.size(), &valuation)?;
        if map.len() != topology.size() || map.iter().any(|&y| y >= topology.size()) {
            return Err(ModalError::NotTotal(format!("{map:?}")));
        }
        if let Some((open, preimage)) = discontinuity(&topology, &map) {
            return Err(ModalError::NotContinuous {
                open: points::to_vec(open),
                preimage: points::to_vec(preimage),
            });
        }
        Ok(Self {
            topology,
            map,
            valuation,
        })
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }
}

fn preimage(map: &[usize], set: PointSet) -> PointSet {
    map.iter()
        .enumerate()
        .filter(|(_, &y)| points::contains(set, y))
        .fold(0, |acc, (x, _)| acc | points::singleton(x))
}

fn discontinuity(t: &FiniteTopology, map: &[usize]) -> Option<(PointSet, PointSet)> {
    t.opens().iter().find_map(|&o| {
        let pre = preimage(map, o);
        (!t.is_open(pre)).then_some((o, pre))
    })
}

/// Whether the preimage of every open set is open. `map` must be total.
pub fn is_continuous(t: &FiniteTopology, map: &[usize]) -> bool {
    discontinuity(t, map).is_none()
}

/// Satisfaction set with `I` read as topological interior. `X` is rejected
/// by returning the evaluation under the identity map.
pub fn eval_topo(m: &TopoModel, phi: &Formula) -> PointSet {
    let t = &m.topology;
    eval_with(
        t.base(),
        &m.valuation,
        phi,
        &|s| t.interior_unchecked(s),
        &|s| s,
    )
}

/// Satisfaction set with `I φ` holding at `x` iff every successor of `x` satisfies `φ`.
pub fn eval_kripke(m: &KripkeModel, phi: &Formula) -> PointSet {
    let p = &m.preorder;
    let base = points::full(p.size());
    eval_with(
        base,
        &m.valuation,
        phi,
        &|s| {
            (0..p.size())
                .filter(|&x| points::is_subset(p.successors(x), s))
                .fold(0, |acc, x| acc | points::singleton(x))
        },
        &|s| s,
    )
}

/// As [`eval_topo`], with `X φ` interpreted as the preimage of `φ` under the map.
pub fn eval_dynamic(m: &DynamicModel, phi: &Formula) -> PointSet {
    let t = &m.topology;
    eval_with(
        t.base(),
        &m.valuation,
        phi,
        &|s| t.interior_unchecked(s),
        &|s| preimage(&m.map, s),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Topo,
    Kripke,
    Dynamic,
}

impl SearchMode {
    pub fn max_size(self) -> usize {
        match self {
            SearchMode::Topo => 4,
            SearchMode::Kripke => 5,
            SearchMode::Dynamic => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub seed: u64,
    /// Valuations tried per frame when the valuation space is sampled.
    pub samples: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 256,
        }
    }
}

/// The frame part of a countermodel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Frame {
    Topo {
        topology: FiniteTopology,
    },
    Kripke {
        preorder: Preorder,
    },
    Dynamic {
        topology: FiniteTopology,
        map: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub frame: Frame,
    pub valuation: Valuation,
    pub point: usize,
}

/// Outcome of a bounded search. Absence of a countermodel only covers frames
/// up to `max_size` and, when `exhaustive` is false, the sampled valuations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountermodelReport {
    pub formula: String,
    pub mode: SearchMode,
    pub max_size: usize,
    pub exhaustive: bool,
    pub seed: u64,
    pub frames_checked: usize,
    pub countermodel: Option<Countermodel>,
}

/// Valuations over `atoms` on a base of `size` points: all of them when at
/// most two atoms occur, otherwise `samples` seeded draws.
fn valuations(
    atoms: &[usize],
    size: usize,
    opts: &SearchOptions,
    rng: &mut impl Rng,
) -> (Vec<Valuation>, bool) {
    let full = points::full(size);
    if atoms.len() <= 2 {
        let per_atom = 1u64 << size;
        let total = per_atom.pow(atoms.len() as u32);
        let vals = (0..total)
            .map(|mut code| {
                atoms
                    .iter()
                    .map(|&a| {
                        let set = code % per_atom;
                        code /= per_atom;
                        (a, set)
                    })
                    .collect()
            })
            .collect();
        (vals, true)
    } else {
        let vals = (0..opts.samples)
            .map(|_| {
                atoms
                    .iter()
                    .map(|&a| (a, rng.gen::<u64>() & full))
                    .collect()
            })
            .collect();
        (vals, false)
    }
}

/// Topologies on `size` points ordered by number of opens, so the first
/// countermodel found lives on the coarsest possible space.
fn coarsest_first(size: usize) -> Result<Vec<FiniteTopology>, ModalError> {
    let mut ts = topology::enumerate_topologies(size)?;
    ts.sort_by_key(|t| t.opens().len());
    Ok(ts)
}

/// Searches frames of size `1..=max_size` for a point refuting `phi`.
pub fn find_countermodel(
    phi: &Formula,
    max_size: usize,
    mode: SearchMode,
    opts: &SearchOptions,
) -> Result<CountermodelReport, ModalError> {
    if max_size > mode.max_size() {
        return Err(ModalError::SizeTooLarge {
            size: max_size,
            max: mode.max_size(),
        });
    }
    if phi.has_next() && mode != SearchMode::Dynamic {
        return Err(ModalError::UnsupportedNext);
    }
    let atoms = phi.atoms();
    let mut rng = sample::rng(opts.seed);
    let mut exhaustive = true;
    let mut frames_checked = 0;
    for size in 1..=max_size {
        let full = points::full(size);
        let frames: Vec<Frame> = match mode {
            SearchMode::Topo => coarsest_first(size)?
                .into_iter()
                .map(|topology| Frame::Topo { topology })
                .collect(),
            SearchMode::Kripke => topology::enumerate_preorders(size)?
                .into_iter()
                .map(|preorder| Frame::Kripke { preorder })
                .collect(),
            SearchMode::Dynamic => {
                let mut frames = Vec::new();
                for topology in coarsest_first(size)? {
                    for code in 0..size.pow(size as u32) {
                        let map: Vec<usize> = (0..size)
                            .map(|x| code / size.pow(x as u32) % size)
                            .collect();
                        if is_continuous(&topology, &map) {
                            frames.push(Frame::Dynamic {
                                topology: topology.clone(),
                                map,
                            });
                        }
                    }
                }
                frames
            }
        };
        for frame in frames {
            frames_checked += 1;
            let (vals, complete) = valuations(&atoms, size, opts, &mut rng);
            exhaustive &= complete;
            for valuation in vals {
                let truth = match &frame {
                    Frame::Topo { topology } => eval_topo(
                        &TopoModel {
                            topology: topology.clone(),
                            valuation: valuation.clone(),
                        },
                        phi,
                    ),
                    Frame::Kripke { preorder } => eval_kripke(
                        &KripkeModel {
                            preorder: preorder.clone(),
                            valuation: valuation.clone(),
                        },
                        phi,
                    ),
                    Frame::Dynamic { topology, map } => eval_dynamic(
                        &DynamicModel {
                            topology: topology.clone(),
                            map: map.clone(),
                            valuation: valuation.clone(),
                        },
                        phi,
                    ),
                };
                let refuted = full & !truth;
                if refuted != 0 {
                    return Ok(CountermodelReport {
                        formula: phi.to_string(),
                        mode,
                        max_size,
                        exhaustive,
                        seed: opts.seed,
                        frames_checked,
                        countermodel: Some(Countermodel {
                            frame,
                            valuation,
                            point: refuted.trailing_zeros() as usize,
                        }),
                    });
                }
            }
        }
    }
    Ok(CountermodelReport {
        formula: phi.to_string(),
        mode,
        max_size,
        exhaustive,
        seed: opts.seed,
        frames_checked,
        countermodel: None,
    })
}

/// Seeded random formula over atoms `0..atoms` whose modal depth is at most
/// `max_depth`. `size` bounds the number of connectives.
pub fn random_formula(rng: &mut impl Rng, atoms: usize, max_depth: usize, size: usize) -> Formula {
    if size == 0 {
        return Formula::atom(rng.gen_range(0..atoms.max(1)));
    }
    let choices = if max_depth > 0 { 6 } else { 4 };
    match rng.gen_range(0..choices) {
        0 => Formula::not(random_formula(rng, atoms, max_depth, size - 1)),
        1..=3 => {
            let split = rng.gen_range(0..size);
            let left = random_formula(rng, atoms, max_depth, split);
            let right = random_formula(rng, atoms, max_depth, size - 1 - split);
            match rng.gen_range(0..3) {
                0 => Formula::and(left, right),
                1 => Formula::or(left, right),
                _ => Formula::implies(left, right),
            }
        }
        _ => Formula::interior(random_formula(rng, atoms, max_depth - 1, size - 1)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub max_size: usize,
    pub depth: usize,
    pub formulas: usize,
    pub seed: u64,
    pub instances: u64,
    pub equal: bool,
    /// First disagreement: (formula, preorder, valuation).
    pub mismatch: Option<(String, Preorder, Valuation)>,
}

/// Compares `eval_kripke(p, ·)` with `eval_topo(alexandrov(p), ·)` over every
/// preorder of size `<= max_size`, every valuation of two atoms, and
/// `formulas` seeded formulas of modal depth `<= depth`.
pub fn kripke_alexandrov_sweep(
    max_size: usize,
    depth: usize,
    formulas: usize,
    seed: u64,
) -> Result<EquivalenceReport, ModalError> {
    if max_size > SearchMode::Kripke.max_size() {
        return Err(ModalError::SizeTooLarge {
            size: max_size,
            max: SearchMode::Kripke.max_size(),
        });
    }
    let mut rng = sample::rng(seed);
    let phis: Vec<Formula> = (0..formulas)
        .map(|_| {
            let size = rng.gen_range(1..=8);
            random_formula(&mut rng, 2, depth, size)
        })
        .collect();
    let mut instances = 0u64;
    for size in 0..=max_size {
        for p in topology::enumerate_preorders(size)? {
            let t = alexandrov(&p);
            for v0 in 0..1u64 << size {
                for v1 in 0..1u64 << size {
                    let valuation: Valuation = [(0, v0), (1, v1)].into_iter().collect();
                    let km = KripkeModel {
                        preorder: p.clone(),
                        valuation: valuation.clone(),
                    };
                    let tm = TopoModel {
                        topology: t.clone(),
                        valuation: valuation.clone(),
                    };
                    for phi in &phis {
                        instances += 1;
                        if eval_kripke(&km, phi) != eval_topo(&tm, phi) {
                            return Ok(EquivalenceReport {
                                max_size,
                                depth,
                                formulas,
                                seed,
                                instances,
                                equal: false,
                                mismatch: Some((phi.to_string(), p.clone(), valuation)),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(EquivalenceReport {
        max_size,
        depth,
        formulas,
        seed,
        instances,
        equal: true,
        mismatch: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(pairs: &[(usize, PointSet)]) -> Valuation {
        pairs.iter().copied().collect()
    }

    fn topo(t: FiniteTopology, v: &[(usize, PointSet)]) -> TopoModel {
        TopoModel::new(t, val(v)).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let f = Formula::parse("I(p0 & p1) -> ~X p2 | q").unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::interior(Formula::and(Formula::atom(0), Formula::atom(1))),
                Formula::or(
                    Formula::not(Formula::next(Formula::atom(2))),
                    Formula::atom(1)
                ),
            )
        );
        assert_eq!(Formula::parse(&f.to_string()).unwrap(), f);
        assert!(Formula::parse("p0 &").is_err());
        assert!(Formula::parse("(p0").is_err());
        assert!(Formula::parse("q1").is_err());
        assert_eq!(f.atoms(), vec![0, 1, 2]);
        assert_eq!(Formula::parse("I I p & X p").unwrap().modal_depth(), 2);
    }

    #[test]
    fn json_ast_uses_op_tags() {
        let f = Formula::interior(Formula::atom(0));
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"op":"I","arg":{"op":"atom","index":0}}"#);
        let back: Formula = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn eval_topo_examples() {
        let ip = Formula::parse("I p").unwrap();
        let m = topo(FiniteTopology::indiscrete(2).unwrap(), &[(0, 0b01)]);
        assert_eq!(eval_topo(&m, &ip), 0);
        let m = topo(FiniteTopology::discrete(2).unwrap(), &[(0, 0b01)]);
        assert_eq!(eval_topo(&m, &ip), 0b01);
        let lhs = Formula::parse("I (p & q)").unwrap();
        let rhs = Formula::parse("I p & I q").unwrap();
        for t in topology::enumerate_topologies(3).unwrap() {
            for a in 0..8 {
                for b in 0..8 {
                    let m = topo(t.clone(), &[(0, a), (1, b)]);
                    assert_eq!(eval_topo(&m, &lhs), eval_topo(&m, &rhs));
                }
            }
        }
    }

    #[test]
    fn missing_atoms_denote_empty() {
        let m = topo(FiniteTopology::discrete(2).unwrap(), &[]);
        assert_eq!(eval_topo(&m, &Formula::atom(7)), 0);
        assert_eq!(eval_topo(&m, &Formula::parse("~p7").unwrap()), 0b11);
    }

    #[test]
    fn eval_kripke_examples() {
        let ip = Formula::parse("I p").unwrap();
        let chain = Preorder::new(2, [(0, 0), (1, 1), (0, 1)]).unwrap();
        let m = KripkeModel::new(chain, val(&[(0, 0b10)])).unwrap();
        assert_eq!(eval_kripke(&m, &ip), 0b10);
        for v in 0..4 {
            let m = KripkeModel::new(Preorder::identity(2), val(&[(0, v)])).unwrap();
            assert_eq!(eval_kripke(&m, &ip), v);
        }
        let m = KripkeModel::new(Preorder::total(2), val(&[(0, 0b01)])).unwrap();
        assert_eq!(eval_kripke(&m, &ip), 0);
    }

    #[test]
    fn eval_dynamic_examples() {
        let xp = Formula::parse("X p").unwrap();
        let d2 = FiniteTopology::discrete(2).unwrap();
        let m = DynamicModel::new(d2, vec![1, 0], val(&[(0, 0b01)])).unwrap();
        assert_eq!(eval_dynamic(&m, &xp), 0b10);
        let i2 = FiniteTopology::indiscrete(2).unwrap();
        let m = DynamicModel::new(i2, vec![0, 0], val(&[(0, 0b01)])).unwrap();
        assert_eq!(eval_dynamic(&m, &xp), 0b11);
        // identity map: X is a no-op and I agrees with the static semantics
        let mut rng = sample::rng(3);
        for t in topology::enumerate_topologies(3).unwrap() {
            let ident: Vec<usize> = (0..3).collect();
            for _ in 0..20 {
                let phi = random_formula(&mut rng, 2, 2, 6);
                let v = val(&[(0, rng.gen::<u64>() & 7), (1, rng.gen::<u64>() & 7)]);
                let dm = DynamicModel::new(t.clone(), ident.clone(), v.clone()).unwrap();
                let tm = topo(t.clone(), &[(0, v[&0]), (1, v[&1])]);
                assert_eq!(eval_dynamic(&dm, &phi), eval_topo(&tm, &phi));
                let with_next = Formula::next(phi.clone());
                assert_eq!(eval_dynamic(&dm, &with_next), eval_topo(&tm, &phi));
            }
        }
    }

    #[test]
    fn continuity() {
        let chain = FiniteTopology::new(3, [0, 0b1, 0b11, 0b111]).unwrap();
        assert!(is_continuous(&chain, &[0, 1, 2]));
        assert!(!is_continuous(&chain, &[1, 0, 2]));
        let d3 = FiniteTopology::discrete(3).unwrap();
        for code in 0..27 {
            let map: Vec<usize> = (0..3).map(|x| code / 3usize.pow(x) % 3).collect();
            assert!(is_continuous(&d3, &map));
        }
        assert!(matches!(
            DynamicModel::new(chain, vec![1, 0, 2], Valuation::new()),
            Err(ModalError::NotContinuous { .. })
        ));
    }

    #[test]
    fn countermodel_search() {
        let opts = SearchOptions::default();
        let t_axiom = Formula::parse("I p -> p").unwrap();
        let r = find_countermodel(&t_axiom, 4, SearchMode::Topo, &opts).unwrap();
        assert!(r.countermodel.is_none() && r.exhaustive);

        let converse = Formula::parse("p -> I p").unwrap();
        let r = find_countermodel(&converse, 4, SearchMode::Topo, &opts).unwrap();
        let cm = r.countermodel.unwrap();
        // the first refuting frame is the indiscrete 2-point space with p = {0}
        assert_eq!(
            cm.frame,
            Frame::Topo {
                topology: FiniteTopology::indiscrete(2).unwrap()
            }
        );
        assert_eq!(cm.valuation, val(&[(0, 0b01)]));
        assert_eq!(cm.point, 0);

        let idem = Formula::parse("I I p <-> I p").unwrap();
        assert!(find_countermodel(&idem, 4, SearchMode::Topo, &opts)
            .unwrap()
            .countermodel
            .is_none());
        assert!(find_countermodel(&idem, 5, SearchMode::Kripke, &opts)
            .unwrap()
            .countermodel
            .is_none());
        assert!(matches!(
            find_countermodel(&idem, 5, SearchMode::Topo, &opts),
            Err(ModalError::SizeTooLarge { .. })
        ));
        assert_eq!(
            find_countermodel(&Formula::parse("X p").unwrap(), 2, SearchMode::Topo, &opts),
            Err(ModalError::UnsupportedNext)
        );
    }

    #[test]
    fn dynamic_countermodels() {
        let opts = SearchOptions::default();
        // X commutes with Boolean connectives in every dynamic model
        let f = Formula::parse("X ~p <-> ~X p").unwrap();
        assert!(find_countermodel(&f, 3, SearchMode::Dynamic, &opts)
            .unwrap()
            .countermodel
            .is_none());
        // continuity: X I p -> I X p
        let cont = Formula::parse("X I p -> I X p").unwrap();
        assert!(find_countermodel(&cont, 3, SearchMode::Dynamic, &opts)
            .unwrap()
            .countermodel
            .is_none());
        // but not the converse
        let conv = Formula::parse("I X p -> X I p").unwrap();
        assert!(find_countermodel(&conv, 3, SearchMode::Dynamic, &opts)
            .unwrap()
            .countermodel
            .is_some());
    }

    #[test]
    fn s4_axioms_on_small_spaces() {
        let axioms = [
            "I (p -> q) -> (I p -> I q)",
            "I p -> p",
            "I p -> I I p",
            "I (p | ~p)",
        ];
        let opts = SearchOptions::default();
        for a in axioms {
            let f = Formula::parse(a).unwrap();
            let r = find_countermodel(&f, 3, SearchMode::Topo, &opts).unwrap();
            assert!(r.countermodel.is_none(), "{a}");
        }
    }

    #[test]
    fn sweep_small() {
        let r = kripke_alexandrov_sweep(3, 3, 50, 7).unwrap();
        assert!(r.equal);
        assert!(r.instances > 0);
    }
}
