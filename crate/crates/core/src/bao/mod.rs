//! Finite algebras in the signature of topological cylindric algebras:
//! atom structures, complex algebras, neat reducts and generated subalgebras.

mod axioms;
mod represent;
mod term;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSet;
use crate::setalg::{SetAlgError, Space};

pub use axioms::{
    check_axiom_suite, suite_axioms, Axiom, AxiomReport, AxiomResult, Suite, Verdict,
};
pub use represent::{
    try_represent, RepresentOutcome, Representation, MAX_REPRESENT_BASE, MAX_REPRESENT_CARRIER,
};
pub use term::{check_equation, eval_term, CheckMode, Equation, EquationVerdict, Guard, Term};

/// An element of a complex algebra: a set of atoms.
pub type Element = BitSet;

/// Largest atom count whose full carrier may be materialized.
pub const MAX_MATERIALIZED_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaoError {
    #[error(
        "{atoms} atoms are too many to materialize the carrier (limit {MAX_MATERIALIZED_ATOMS})"
    )]
    TooManyAtoms { atoms: usize },
    #[error("{envs} environments exceed the exhaustive limit")]
    TooLargeForExhaustive { envs: u128 },
    #[error("variable v{0} is unbound")]
    UnboundVariable(usize),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("carrier is not closed: {0}")]
    NotClosed(String),
    #[error("algebra too large for this operation: {0}")]
    TooLarge(String),
    #[error("element is not in the carrier")]
    NotInCarrier,
    #[error("malformed atom structure: {0}")]
    BadStructure(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error(transparent)]
    SetAlg(#[from] SetAlgError),
    #[error(transparent)]
    Topology(#[from] crate::topology::TopologyError),
}

/// The accessibility relation `T_i` of an atom structure.
#[derive(Clone, PartialEq, Eq)]
pub enum Accessibility {
    /// An equivalence relation given by class indices.
    Equivalence {
        class_of: Vec<u32>,
        classes: Vec<Element>,
    },
    /// An arbitrary relation; `pred[b]` holds every `a` with `a T b`.
    Relation { pred: Vec<Element> },
}

impl Accessibility {
    /// Equivalence with `class_of[a]` naming the class of atom `a`.
    pub fn equivalence(class_of: Vec<u32>) -> Self {
        let width = class_of.len();
        let count = class_of.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut classes = vec![Element::empty(width); count];
        for (a, &c) in class_of.iter().enumerate() {
            classes[c as usize].insert(a);
        }
        classes.retain(|c| !c.is_empty());
        // renumber densely
        let mut dense = vec![0u32; width];
        for (k, c) in classes.iter().enumerate() {
            for a in c.ones() {
                dense[a] = k as u32;
            }
        }
        Accessibility::Equivalence {
            class_of: dense,
            classes,
        }
    }

    pub fn from_pairs(width: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pred = vec![Element::empty(width); width];
        for (a, b) in pairs {
            pred[b].insert(a);
        }
        Accessibility::Relation { pred }
    }

    /// `{a : a T b for some b in x}`.
    pub fn image(&self, x: &Element) -> Element {
        let mut out = Element::empty(x.width());
        match self {
            Accessibility::Equivalence { class_of, classes } => {
                let mut seen = BTreeSet::new();
                for b in x.ones() {
                    if seen.insert(class_of[b]) {
                        out.union_with(&classes[class_of[b] as usize]);
                    }
                }
            }
            Accessibility::Relation { pred } => {
                for b in x.ones() {
                    out.union_with(&pred[b]);
                }
            }
        }
        out
    }

    /// Whether `a T b`.
    pub fn related(&self, a: usize, b: usize) -> bool {
        match self {
            Accessibility::Equivalence { class_of, .. } => class_of[a] == class_of[b],
            Accessibility::Relation { pred } => pred[b].contains(a),
        }
    }

    /// Atoms `b` with `a T b`.
    pub fn successors(&self, a: usize) -> Element {
        match self {
            Accessibility::Equivalence { class_of, classes } => {
                classes[class_of[a] as usize].clone()
            }
            Accessibility::Relation { pred } => {
                Element::from_indices(pred.len(), (0..pred.len()).filter(|&b| pred[b].contains(a)))
            }
        }
    }

    fn width(&self) -> usize {
        match self {
            Accessibility::Equivalence { class_of, .. } => class_of.len(),
            Accessibility::Relation { pred } => pred.len(),
        }
    }

    pub fn pairs(&self) -> Vec<[usize; 2]> {
        let w = self.width();
        let mut out = Vec::new();
        for a in 0..w {
            for b in self.successors(a).ones() {
                out.push([a, b]);
            }
        }
        out
    }
}

impl fmt::Debug for Accessibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Accessibility({:?})", self.pairs())
    }
}

pub type InteriorFn = Arc<dyn Fn(&Element) -> Element + Send + Sync>;

/// How `I_i` acts on atom sets.
#[derive(Clone)]
pub enum Interior {
    Identity,
    /// `I(X) = {a : every successor of a lies in X}` for the listed successors.
    Box {
        succ: Vec<Element>,
    },
    /// An arbitrary map, not backed by a relation. Flagged in dumps.
    Custom {
        name: String,
        f: InteriorFn,
    },
}

impl Interior {
    pub fn apply(&self, x: &Element) -> Element {
        match self {
            Interior::Identity => x.clone(),
            Interior::Box { succ } => {
                Element::from_indices(x.width(), (0..succ.len()).filter(|&a| succ[a].is_subset(x)))
            }
            Interior::Custom { f, .. } => f(x),
        }
    }

    pub fn is_relational(&self) -> bool {
        !matches!(self, Interior::Custom { .. })
    }
}

impl fmt::Debug for Interior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interior::Identity => write!(f, "identity"),
            Interior::Box { succ } => write!(f, "box{succ:?}"),
            Interior::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

/// Atoms with accessibility relations `T_i`, diagonal atom sets `D_ij` and
/// interior descriptors.
#[derive(Debug, Clone)]
pub struct AtomStructure {
    dim: usize,
    atoms: usize,
    t: Vec<Accessibility>,
    d: Vec<Element>,
    interior: Vec<Interior>,
}

impl AtomStructure {
    /// `d` lists `D_ij` at position `i * dim + j`.
    pub fn new(
        dim: usize,
        atoms: usize,
        t: Vec<Accessibility>,
        d: Vec<Element>,
        interior: Vec<Interior>,
    ) -> Result<Self, BaoError> {
        let bad = |m: String| Err(BaoError::BadStructure(m));
        if dim == 0 {
            return bad("dimension 0".into());
        }
        if t.len() != dim || interior.len() != dim || d.len() != dim * dim {
            return bad("one T_i and I_i per index and one D_ij per pair are required".into());
        }
        if t.iter().any(|r| r.width() != atoms) || d.iter().any(|x| x.width() != atoms) {
            return bad("relation or diagonal over the wrong atom count".into());
        }
        for (i, int) in interior.iter().enumerate() {
            if let Interior::Box { succ } = int {
                if succ.len() != atoms || succ.iter().any(|s| s.width() != atoms) {
                    return bad(format!("interior table {i} has the wrong shape"));
                }
            }
        }
        for i in 0..dim {
            if !d[i * dim + i].is_full() {
                return bad(format!("D_{i}{i} must contain every atom"));
            }
        }
        Ok(Self {
            dim,
            atoms,
            t,
            d,
            interior,
        })
    }

    /// The atom structure of the full set algebra on `space`; atoms are
    /// tuple codes. Non-discrete topologies give a custom interior.
    pub fn of_space(space: &Space) -> Result<Self, BaoError> {
        let n = space.dim();
        let width = space.tuples();
        let t = (0..n)
            .map(|i| {
                Accessibility::equivalence(
                    (0..width).map(|c| space.replace(c, i, 0) as u32).collect(),
                )
            })
            .collect();
        let mut d = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                d.push(space.diag(i, j)?);
            }
        }
        let shared = Arc::new(space.clone());
        let interior = (0..n)
            .map(|k| match space.topology() {
                Some(t) if !t.is_discrete() => {
                    let sp = Arc::clone(&shared);
                    Interior::Custom {
                        name: "topology".into(),
                        f: Arc::new(move |x: &Element| {
                            sp.interior_op(k, x, false).expect("width checked")
                        }),
                    }
                }
                _ => Interior::Identity,
            })
            .collect();
        Self::new(n, width, t, d, interior)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn accessibility(&self, i: usize) -> &Accessibility {
        &self.t[i]
    }

    pub fn diagonal(&self, i: usize, j: usize) -> &Element {
        &self.d[i * self.dim + j]
    }

    pub fn interior(&self, i: usize) -> &Interior {
        &self.interior[i]
    }

    /// Replaces every interior descriptor.
    pub fn with_interior(mut self, interior: Vec<Interior>) -> Result<Self, BaoError> {
        if interior.len() != self.dim {
            return Err(BaoError::BadStructure("one interior per index".into()));
        }
        self.interior = interior;
        Self::new(self.dim, self.atoms, self.t, self.d, self.interior)
    }

    pub fn dump(&self) -> AtomStructureDump {
        AtomStructureDump {
            dim: self.dim,
            atoms: self.atoms,
            t: self.t.iter().map(Accessibility::pairs).collect(),
            d: self.d.iter().map(Element::to_vec).collect(),
            interior: self
                .interior
                .iter()
                .map(|int| match int {
                    Interior::Identity => InteriorDump::Name("identity".into()),
                    Interior::Box { succ } => {
                        InteriorDump::Table(succ.iter().map(Element::to_vec).collect())
                    }
                    Interior::Custom { name, .. } => InteriorDump::Name(format!("custom:{name}")),
                })
                .collect(),
        }
    }

    pub fn from_dump(dump: &AtomStructureDump) -> Result<Self, BaoError> {
        let w = dump.atoms;
        let check = |ids: &[usize]| -> Result<(), BaoError> {
            match ids.iter().find(|&&a| a >= w) {
                Some(a) => Err(BaoError::BadStructure(format!("atom {a} out of range"))),
                None => Ok(()),
            }
        };
        let mut t = Vec::new();
        for pairs in &dump.t {
            for p in pairs {
                check(p)?;
            }
            t.push(Accessibility::from_pairs(
                w,
                pairs.iter().map(|&[a, b]| (a, b)),
            ));
        }
        let mut d = Vec::new();
        for ids in &dump.d {
            check(ids)?;
            d.push(Element::from_indices(w, ids.iter().copied()));
        }
        let mut interior = Vec::new();
        for int in &dump.interior {
            interior.push(match int {
                InteriorDump::Name(n) if n == "identity" => Interior::Identity,
                InteriorDump::Name(n) => {
                    return Err(BaoError::BadStructure(format!(
                        "interior {n} cannot be rebuilt from a dump"
                    )))
                }
                InteriorDump::Table(rows) => {
                    if rows.len() != w {
                        return Err(BaoError::BadStructure("interior table length".into()));
                    }
                    let mut succ = Vec::new();
                    for r in rows {
                        check(r)?;
                        succ.push(Element::from_indices(w, r.iter().copied()));
                    }
                    Interior::Box { succ }
                }
            });
        }
        Self::new(dump.dim, w, t, d, interior)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InteriorDump {
    Name(String),
    /// Successor lists per atom.
    Table(Vec<Vec<usize>>),
}

/// Wire form of an atom structure. `D` is row-major over `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomStructureDump {
    pub dim: usize,
    pub atoms: usize,
    #[serde(rename = "T")]
    pub t: Vec<Vec<[usize; 2]>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<usize>>,
    pub interior: Vec<InteriorDump>,
}

#[derive(Debug, Clone)]
pub enum Carrier {
    /// Every atom set.
    Full,
    /// An explicit sorted subuniverse.
    Listed(Arc<Vec<Element>>),
}

/// A finite algebra whose elements are atom sets of a structure, with
/// indexed operations restricted to `0..dim`.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    structure: Arc<AtomStructure>,
    dim: usize,
    carrier: Carrier,
}

/// The complex algebra of `s`.
pub fn cm(s: AtomStructure) -> FiniteAlgebra {
    FiniteAlgebra {
        dim: s.dim,
        structure: Arc::new(s),
        carrier: Carrier::Full,
    }
}

impl FiniteAlgebra {
    pub fn structure(&self) -> &AtomStructure {
        &self.structure
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of atoms of the underlying structure.
    pub fn width(&self) -> usize {
        self.structure.atoms
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    /// Carrier size as a float (full carriers can be astronomically large).
    pub fn size_f64(&self) -> f64 {
        match &self.carrier {
            Carrier::Full => 2f64.powi(self.width() as i32),
            Carrier::Listed(v) => v.len() as f64,
        }
    }

    pub fn zero(&self) -> Element {
        Element::empty(self.width())
    }

    pub fn one(&self) -> Element {
        Element::full(self.width())
    }

    pub fn check_index(&self, i: usize) -> Result<(), BaoError> {
        if i < self.dim {
            Ok(())
        } else {
            Err(BaoError::IndexOutOfRange {
                index: i,
                dim: self.dim,
            })
        }
    }

    pub fn cyl(&self, i: usize, x: &Element) -> Element {
        debug_assert!(i < self.dim);
        self.structure.t[i].image(x)
    }

    pub fn diag(&self, i: usize, j: usize) -> Element {
        debug_assert!(i < self.dim && j < self.dim);
        self.structure.diagonal(i, j).clone()
    }

    pub fn interior(&self, i: usize, x: &Element) -> Element {
        debug_assert!(i < self.dim);
        self.structure.interior[i].apply(x)
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.width() == self.width()
            && match &self.carrier {
                Carrier::Full => true,
                Carrier::Listed(v) => v.binary_search(x).is_ok(),
            }
    }

    /// All elements, failing for full carriers over too many atoms.
    pub fn elements(&self) -> Result<Vec<Element>, BaoError> {
        match &self.carrier {
            Carrier::Listed(v) => Ok(v.as_ref().clone()),
            Carrier::Full => {
                let w = self.width();
                if w > MAX_MATERIALIZED_ATOMS {
                    return Err(BaoError::TooManyAtoms { atoms: w });
                }
                Ok((0..1u64 << w).map(|c| Element::from_word(w, c)).collect())
            }
        }
    }

    /// The atoms of the carrier: its minimal nonzero elements.
    pub fn carrier_atoms(&self) -> Vec<Element> {
        let w = self.width();
        match &self.carrier {
            Carrier::Full => (0..w).map(|a| Element::from_indices(w, [a])).collect(),
            Carrier::Listed(v) => {
                let nonzero: Vec<&Element> = v.iter().filter(|x| !x.is_empty()).collect();
                nonzero
                    .iter()
                    .filter(|x| !nonzero.iter().any(|y| *y != **x && y.is_subset(x)))
                    .map(|x| (*x).clone())
                    .collect()
            }
        }
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> Element {
        match &self.carrier {
            Carrier::Full => {
                let w = self.width();
                Element::from_indices(w, (0..w).filter(|_| rng.gen::<bool>()))
            }
            Carrier::Listed(v) => v[rng.gen_range(0..v.len())].clone(),
        }
    }

    /// Applies every operation to the given elements and reports the first
    /// result outside the carrier.
    fn closure_violation(&self, elems: &[Element]) -> Option<String> {
        let listed = match &self.carrier {
            Carrier::Full => return None,
            Carrier::Listed(v) => v,
        };
        let inside = |x: &Element| listed.binary_search(x).is_ok();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !inside(&self.diag(i, j)) {
                    return Some(format!("d_{i}{j}"));
                }
            }
        }
        for (n, x) in elems.iter().enumerate() {
            if !inside(&x.complement()) {
                return Some(format!("complement of element {n}"));
            }
            for i in 0..self.dim {
                if !inside(&self.cyl(i, x)) {
                    return Some(format!("c_{i} of element {n}"));
                }
                if !inside(&self.interior(i, x)) {
                    return Some(format!("I_{i} of element {n}"));
                }
            }
            for (m, y) in elems.iter().enumerate().skip(n + 1) {
                if !inside(&x.union(y)) {
                    return Some(format!("join of elements {n} and {m}"));
                }
            }
        }
        None
    }
}

/// `{i < dim : c_i x != x}`.
pub fn dimension_set_abs(alg: &FiniteAlgebra, x: &Element) -> Vec<usize> {
    (0..alg.dim).filter(|&i| alg.cyl(i, x) != *x).collect()
}

/// Upper bound on carriers scanned or generated by `nr` and `sg`.
pub const MAX_SUBUNIVERSE: usize = 1 << 20;

/// The neat reduct to dimension `m`: elements with dimension set inside
/// `0..m`, with the operations of index `>= m` dropped.
pub fn nr(m: usize, alg: &FiniteAlgebra) -> Result<FiniteAlgebra, BaoError> {
    if m == 0 || m > alg.dim {
        return Err(BaoError::IndexOutOfRange {
            index: m,
            dim: alg.dim,
        });
    }
    if m == alg.dim {
        return Ok(alg.clone());
    }
    let candidates = match &alg.carrier {
        Carrier::Listed(v) => v.as_ref().clone(),
        Carrier::Full => {
            if alg.width() > 20 {
                return Err(BaoError::TooLarge(format!(
                    "full carrier over {} atoms",
                    alg.width()
                )));
            }
            alg.elements()?
        }
    };
    let mut kept: Vec<Element> = candidates
        .into_iter()
        .filter(|x| (m..alg.dim).all(|i| alg.cyl(i, x) == *x))
        .collect();
    kept.sort();
    let reduct = FiniteAlgebra {
        structure: Arc::clone(&alg.structure),
        dim: m,
        carrier: Carrier::Listed(Arc::new(kept)),
    };
    let elems = reduct.elements()?;
    if let Some(v) = reduct.closure_violation(&elems) {
        return Err(BaoError::NotClosed(v));
    }
    Ok(reduct)
}

/// The subalgebra generated by `gens`, by fixpoint iteration.
pub fn sg(alg: &FiniteAlgebra, gens: &[Element]) -> Result<FiniteAlgebra, BaoError> {
    if gens.iter().any(|g| !alg.contains(g)) {
        return Err(BaoError::NotInCarrier);
    }
    let mut all: Vec<Element> = Vec::new();
    let mut seen: HashSet<Element> = HashSet::new();
    let mut push = |x: Element, all: &mut Vec<Element>| {
        if seen.insert(x.clone()) {
            all.push(x);
        }
    };
    push(alg.zero(), &mut all);
    push(alg.one(), &mut all);
    for i in 0..alg.dim {
        for j in 0..alg.dim {
            push(alg.diag(i, j), &mut all);
        }
    }
    for g in gens {
        push(g.clone(), &mut all);
    }
    // elements before `done` have been combined with everything before them
    let mut done = 0;
    while done < all.len() {
        if all.len() > MAX_SUBUNIVERSE {
            return Err(BaoError::TooLarge("generated subuniverse".into()));
        }
        let x = all[done].clone();
        push(x.complement(), &mut all);
        for i in 0..alg.dim {
            push(alg.cyl(i, &x), &mut all);
            push(alg.interior(i, &x), &mut all);
        }
        for k in 0..=done {
            let y = all[k].clone();
            push(x.union(&y), &mut all);
        }
        done += 1;
    }
    all.sort();
    Ok(FiniteAlgebra {
        structure: Arc::clone(&alg.structure),
        dim: alg.dim,
        carrier: Carrier::Listed(Arc::new(all)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setalg::TupleSet;
    use crate::topology::FiniteTopology;

    pub(crate) fn space(n: usize, u: usize, t: FiniteTopology) -> Space {
        assert_eq!(t.size(), u);
        Space::topological(n, t).unwrap()
    }

    #[test]
    fn cm_of_space_matches_set_algebra() {
        for (n, u) in [(2, 2), (3, 2), (2, 3)] {
            for t in [
                FiniteTopology::discrete(u).unwrap(),
                FiniteTopology::indiscrete(u).unwrap(),
            ] {
                let sp = space(n, u, t);
                let alg = cm(AtomStructure::of_space(&sp).unwrap());
                assert_eq!(alg.width(), sp.tuples());
                let mut rng = crate::sample::rng(1);
                for _ in 0..200 {
                    let x: TupleSet = alg.random_element(&mut rng);
                    for i in 0..n {
                        assert_eq!(alg.cyl(i, &x), sp.cyl(i, &x).unwrap());
                        assert_eq!(alg.interior(i, &x), sp.interior_op(i, &x, false).unwrap());
                        for j in 0..n {
                            assert_eq!(alg.diag(i, j), sp.diag(i, j).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dump_round_trip() {
        let sp = Space::new(2, 2).unwrap();
        let s = AtomStructure::of_space(&sp).unwrap();
        let dump = s.dump();
        assert_eq!(dump.t[0].len(), 8);
        let json = serde_json::to_string(&dump).unwrap();
        assert!(json.starts_with(r#"{"dim":2,"atoms":4,"T":[[[0,0],[0,1]"#));
        assert!(json.ends_with(r#""interior":["identity","identity"]}"#));
        let back = AtomStructure::from_dump(&serde_json::from_str(&json).unwrap()).unwrap();
        let (a, b) = (cm(s), cm(back));
        for x in a.elements().unwrap() {
            for i in 0..2 {
                assert_eq!(a.cyl(i, &x), b.cyl(i, &x));
            }
        }
        let indisc = space(2, 2, FiniteTopology::indiscrete(2).unwrap());
        let dump = AtomStructure::of_space(&indisc).unwrap().dump();
        assert_eq!(
            dump.interior[0],
            InteriorDump::Name("custom:topology".into())
        );
        assert!(AtomStructure::from_dump(&dump).is_err());
    }

    #[test]
    fn identity_interior_is_identity() {
        let alg = cm(AtomStructure::of_space(&Space::new(2, 2).unwrap()).unwrap());
        for x in alg.elements().unwrap() {
            assert_eq!(alg.interior(0, &x), x);
            assert_eq!(alg.interior(1, &x), x);
        }
    }

    #[test]
    fn structure_validation() {
        let w = 2;
        let t = vec![Accessibility::from_pairs(w, [])];
        let d = vec![Element::empty(w)];
        assert!(AtomStructure::new(1, w, t.clone(), d, vec![Interior::Identity]).is_err());
        let ok = AtomStructure::new(1, w, t, vec![Element::full(w)], vec![Interior::Identity]);
        assert!(ok.is_ok());
        let big = cm(ok.unwrap());
        assert!(big.elements().is_ok());
    }

    #[test]
    fn box_interior_uses_successors() {
        // chain 0 -> 1: I{1} = {1}, I{0} = {}
        let succ = vec![
            Element::from_indices(2, [0, 1]),
            Element::from_indices(2, [1]),
        ];
        let int = Interior::Box { succ };
        assert_eq!(int.apply(&Element::from_indices(2, [1])).to_vec(), vec![1]);
        assert!(int.apply(&Element::from_indices(2, [0])).is_empty());
    }

    #[test]
    fn dimension_sets() {
        let alg = cm(AtomStructure::of_space(&Space::new(2, 2).unwrap()).unwrap());
        assert!(dimension_set_abs(&alg, &alg.one()).is_empty());
        assert_eq!(dimension_set_abs(&alg, &alg.diag(0, 1)), vec![0, 1]);
        let mut rng = crate::sample::rng(2);
        for _ in 0..20 {
            let a = alg.random_element(&mut rng);
            assert!(!dimension_set_abs(&alg, &alg.cyl(0, &a)).contains(&0));
        }
    }

    #[test]
    fn nr_of_dim3_is_dim2() {
        let sp3 = Space::new(3, 2).unwrap();
        let alg3 = cm(AtomStructure::of_space(&sp3).unwrap());
        assert_eq!(nr(3, &alg3).unwrap().size_f64(), 256.0);
        let red = nr(2, &alg3).unwrap();
        let sp2 = Space::new(2, 2).unwrap();
        // the reduct is exactly the image of the lifting map
        let mut images: Vec<Element> = (0..16u64)
            .map(|c| sp2.neat_lift(&TupleSet::from_word(4, c), 1).unwrap().1)
            .collect();
        images.sort();
        assert_eq!(red.elements().unwrap(), images);
        // and the lifting map commutes with the retained operations
        for c in 0..16u64 {
            let x = TupleSet::from_word(4, c);
            let lx = sp2.neat_lift(&x, 1).unwrap().1;
            for i in 0..2 {
                let lc = sp2.neat_lift(&sp2.cyl(i, &x).unwrap(), 1).unwrap().1;
                assert_eq!(red.cyl(i, &lx), lc);
            }
        }
        // an element with dimension set {0, 2} is excluded
        let x = sp3.diag(0, 2).unwrap();
        assert_eq!(dimension_set_abs(&alg3, &x), vec![0, 2]);
        assert!(!red.contains(&x));
    }

    #[test]
    fn sg_examples() {
        let alg = cm(AtomStructure::of_space(&Space::new(2, 2).unwrap()).unwrap());
        let minimal = sg(&alg, &[]).unwrap();
        let with_one = sg(&alg, &[alg.one()]).unwrap();
        assert_eq!(minimal.elements().unwrap(), with_one.elements().unwrap());
        // generated by d_01 under c_i and complement: 0, 1, d, -d
        assert_eq!(minimal.size_f64(), 4.0);
        let atoms = alg.carrier_atoms();
        assert_eq!(sg(&alg, &atoms).unwrap().size_f64(), 16.0);
        // idempotent and monotone
        let g = vec![Element::from_indices(4, [0, 1])];
        let s1 = sg(&alg, &g).unwrap();
        let s2 = sg(&s1, &s1.elements().unwrap()).unwrap();
        assert_eq!(s1.elements().unwrap(), s2.elements().unwrap());
        let bigger = sg(&alg, &[g[0].clone(), Element::from_indices(4, [3])]).unwrap();
        assert!(s1.elements().unwrap().iter().all(|x| bigger.contains(x)));
        assert_eq!(
            sg(&minimal, &[Element::from_indices(4, [3])]).unwrap_err(),
            BaoError::NotInCarrier
        );
    }
}
