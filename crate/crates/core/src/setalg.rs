//! Topological cylindric set algebras of finite dimension over finite bases.
//!
//! An `n`-tuple `s` over `0..u` is coded as `sum s_i * u^i`, so coordinate 0
//! is the least significant digit. A [`TupleSet`] is a bit set of width `u^n`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSet;
use crate::points::{self, PointSet};
use crate::topology::{self, FiniteTopology, TopologyError, TopologyJson};

pub type TupleSet = BitSet;

/// Largest number of tuples a space may hold.
pub const MAX_TUPLES: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetAlgError {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension must be at least 1")]
    DimZero,
    #[error("{base}^{dim} tuples exceed the cap of {MAX_TUPLES}")]
    TooLarge { dim: usize, base: usize },
    #[error("the space carries no topology")]
    NoTopology,
    #[error("the space carries no Chang system")]
    NoChangSystem,
    #[error("topology has {got} points but the base has {expected}")]
    BaseMismatch { expected: usize, got: usize },
    #[error("tuple set has width {got}, expected {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("element is not below the unit of the generalized space")]
    NotSubsetOfUnit,
    #[error("generalized space needs summands of one common dimension")]
    BadSummands,
    #[error("Chang family of point {point} lists a set outside the base")]
    ChangOutOfRange { point: usize },
    #[error("tuple code {code} out of range")]
    MemberOutOfRange { code: usize },
    #[error("transformation must map 0..{dim} into itself")]
    BadTransformation { dim: usize },
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// How a point's family decides membership in a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChangReading {
    /// `s` is in `□_k X` iff the `k`-fiber of `s` belongs to the family of `s_k`.
    Literal,
    /// The family of `s_k` is a neighbourhood base: `s` is in `□_k X` iff
    /// some member contains `s_k` and lies inside the `k`-fiber.
    NeighbourhoodBase,
}

/// Per-point families of subsets of the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangSystem {
    families: Vec<BTreeSet<PointSet>>,
    reading: ChangReading,
}

impl ChangSystem {
    pub fn new(
        size: usize,
        families: Vec<BTreeSet<PointSet>>,
        reading: ChangReading,
    ) -> Result<Self, SetAlgError> {
        if families.len() != size {
            return Err(SetAlgError::BaseMismatch {
                expected: size,
                got: families.len(),
            });
        }
        for (point, fam) in families.iter().enumerate() {
            if fam
                .iter()
                .any(|&s| !points::is_subset(s, points::full(size)))
            {
                return Err(SetAlgError::ChangOutOfRange { point });
            }
        }
        Ok(Self { families, reading })
    }

    pub fn size(&self) -> usize {
        self.families.len()
    }

    pub fn family(&self, point: usize) -> &BTreeSet<PointSet> {
        &self.families[point]
    }

    pub fn reading(&self) -> ChangReading {
        self.reading
    }

    /// Whether `fiber` passes the test of point `a`.
    pub fn accepts(&self, a: usize, fiber: PointSet) -> bool {
        let fam = &self.families[a];
        match self.reading {
            ChangReading::Literal => fam.contains(&fiber),
            ChangReading::NeighbourhoodBase => fam
                .iter()
                .any(|&o| points::contains(o, a) && points::is_subset(o, fiber)),
        }
    }
}

/// The constant Chang system sending every point to the open family, read
/// as a neighbourhood base so that its boxes are the interior operators.
pub fn chang_from_topology(t: &FiniteTopology) -> ChangSystem {
    let fam: BTreeSet<PointSet> = t.opens().iter().copied().collect();
    ChangSystem {
        families: vec![fam; t.size()],
        reading: ChangReading::NeighbourhoodBase,
    }
}

/// The unit `^nU` with optional topology and Chang system on `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    dim: usize,
    base: usize,
    topology: Option<FiniteTopology>,
    chang: Option<ChangSystem>,
    stride: Vec<usize>,
}

impl Space {
    pub fn new(dim: usize, base: usize) -> Result<Self, SetAlgError> {
        if dim == 0 {
            return Err(SetAlgError::DimZero);
        }
        let mut stride = Vec::with_capacity(dim + 1);
        let mut acc = 1usize;
        for _ in 0..=dim {
            stride.push(acc);
            acc = acc.saturating_mul(base);
        }
        if stride[dim] > MAX_TUPLES || base > points::MAX_POINTS {
            return Err(SetAlgError::TooLarge { dim, base });
        }
        Ok(Self {
            dim,
            base,
            topology: None,
            chang: None,
            stride,
        })
    }

    pub fn with_topology(mut self, t: FiniteTopology) -> Result<Self, SetAlgError> {
        if t.size() != self.base {
            return Err(SetAlgError::BaseMismatch {
                expected: self.base,
                got: t.size(),
            });
        }
        self.topology = Some(t);
        Ok(self)
    }

    pub fn with_chang(mut self, v: ChangSystem) -> Result<Self, SetAlgError> {
        if v.size() != self.base {
            return Err(SetAlgError::BaseMismatch {
                expected: self.base,
                got: v.size(),
            });
        }
        self.chang = Some(v);
        Ok(self)
    }

    /// Shorthand for a space with a topology.
    pub fn topological(dim: usize, t: FiniteTopology) -> Result<Self, SetAlgError> {
        Space::new(dim, t.size())?.with_topology(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn topology(&self) -> Option<&FiniteTopology> {
        self.topology.as_ref()
    }

    pub fn chang(&self) -> Option<&ChangSystem> {
        self.chang.as_ref()
    }

    /// Number of tuples, `u^n`.
    pub fn tuples(&self) -> usize {
        self.stride[self.dim]
    }

    pub fn encode(&self, s: &[usize]) -> usize {
        debug_assert_eq!(s.len(), self.dim);
        s.iter().zip(&self.stride).map(|(&x, &w)| x * w).sum()
    }

    pub fn decode(&self, code: usize) -> Vec<usize> {
        (0..self.dim).map(|i| self.coord(code, i)).collect()
    }

    #[inline]
    pub fn coord(&self, code: usize, i: usize) -> usize {
        code / self.stride[i] % self.base
    }

    /// The code of `s[i -> a]`.
    #[inline]
    pub fn replace(&self, code: usize, i: usize, a: usize) -> usize {
        code - self.coord(code, i) * self.stride[i] + a * self.stride[i]
    }

    pub fn empty(&self) -> TupleSet {
        TupleSet::empty(self.tuples())
    }

    pub fn unit(&self) -> TupleSet {
        TupleSet::full(self.tuples())
    }

    pub fn set_of(&self, tuples: &[&[usize]]) -> TupleSet {
        TupleSet::from_indices(self.tuples(), tuples.iter().map(|s| self.encode(s)))
    }

    pub fn check_index(&self, i: usize) -> Result<(), SetAlgError> {
        if i < self.dim {
            Ok(())
        } else {
            Err(SetAlgError::IndexOutOfRange {
                index: i,
                dim: self.dim,
            })
        }
    }

    pub fn check_width(&self, x: &TupleSet) -> Result<(), SetAlgError> {
        if x.width() == self.tuples() {
            Ok(())
        } else {
            Err(SetAlgError::WidthMismatch {
                expected: self.tuples(),
                got: x.width(),
            })
        }
    }

    /// Codes with coordinate `i` equal to 0, one per `i`-fiber.
    fn fiber_roots(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.tuples()).filter(move |&c| self.coord(c, i) == 0)
    }

    /// `{a : s[i -> a] in x}` for the fiber through `root`.
    fn fiber(&self, x: &TupleSet, i: usize, root: usize) -> PointSet {
        (0..self.base)
            .filter(|&a| x.contains(root + a * self.stride[i]))
            .fold(0, |acc, a| acc | points::singleton(a))
    }

    /// Applies a pointwise map to every `i`-fiber of `x`.
    fn map_fibers(&self, i: usize, x: &TupleSet, f: impl Fn(PointSet) -> PointSet) -> TupleSet {
        let mut out = self.empty();
        for root in self.fiber_roots(i) {
            let img = f(self.fiber(x, i, root));
            for a in points::members(img) {
                out.insert(root + a * self.stride[i]);
            }
        }
        out
    }

    /// `c_i x`: tuples agreeing off `i` with a member of `x`.
    pub fn cyl(&self, i: usize, x: &TupleSet) -> Result<TupleSet, SetAlgError> {
        self.check_index(i)?;
        self.check_width(x)?;
        let full = points::full(self.base);
        Ok(self.map_fibers(i, x, |f| if f == 0 { 0 } else { full }))
    }

    /// `d_ij`: tuples with equal `i` and `j` coordinates.
    pub fn diag(&self, i: usize, j: usize) -> Result<TupleSet, SetAlgError> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(TupleSet::from_indices(
            self.tuples(),
            (0..self.tuples()).filter(|&c| self.coord(c, i) == self.coord(c, j)),
        ))
    }

    /// `I_k x`, or `Cl_k x` when `dual` is set: the topological interior
    /// (closure) applied to every `k`-fiber.
    pub fn interior_op(&self, k: usize, x: &TupleSet, dual: bool) -> Result<TupleSet, SetAlgError> {
        self.check_index(k)?;
        self.check_width(x)?;
        let t = self.topology.as_ref().ok_or(SetAlgError::NoTopology)?;
        Ok(if dual {
            self.map_fibers(k, x, |f| t.closure_unchecked(f))
        } else {
            self.map_fibers(k, x, |f| t.interior_unchecked(f))
        })
    }

    /// `□_k x`: tuples whose `k`-fiber passes the test of their `k`-th point.
    pub fn box_op(&self, k: usize, x: &TupleSet) -> Result<TupleSet, SetAlgError> {
        self.check_index(k)?;
        self.check_width(x)?;
        let v = self.chang.as_ref().ok_or(SetAlgError::NoChangSystem)?;
        Ok(self.map_fibers(k, x, |f| {
            (0..self.base)
                .filter(|&a| v.accepts(a, f))
                .fold(0, |acc, a| acc | points::singleton(a))
        }))
    }

    /// `S_tau x = {s : s o tau in x}` for a finite transformation `tau`.
    pub fn subst(&self, tau: &[usize], x: &TupleSet) -> Result<TupleSet, SetAlgError> {
        if tau.len() != self.dim || tau.iter().any(|&j| j >= self.dim) {
            return Err(SetAlgError::BadTransformation { dim: self.dim });
        }
        self.check_width(x)?;
        Ok(TupleSet::from_indices(
            self.tuples(),
            (0..self.tuples()).filter(|&c| {
                let moved: usize = tau
                    .iter()
                    .enumerate()
                    .map(|(k, &j)| self.coord(c, j) * self.stride[k])
                    .sum();
                x.contains(moved)
            }),
        ))
    }

    /// The replacement `[i|j]` as a transformation.
    pub fn replacement(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.dim).map(|k| if k == i { j } else { k }).collect()
    }

    /// `{i : c_i x != x}`.
    pub fn dimension_set(&self, x: &TupleSet) -> Result<Vec<usize>, SetAlgError> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            if self.cyl(i, x)? != *x {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// The same base, topology and Chang system in dimension `dim + extra`.
    pub fn lifted(&self, extra: usize) -> Result<Space, SetAlgError> {
        let mut s = Space::new(self.dim + extra, self.base)?;
        s.topology = self.topology.clone();
        s.chang = self.chang.clone();
        Ok(s)
    }

    /// `{s in ^(n+extra)U : s restricted to n is in x}`, returned with its space.
    pub fn neat_lift(&self, x: &TupleSet, extra: usize) -> Result<(Space, TupleSet), SetAlgError> {
        self.check_width(x)?;
        let big = self.lifted(extra)?;
        let low = self.tuples();
        let lifted = TupleSet::from_indices(
            big.tuples(),
            (0..big.tuples()).filter(|&c| x.contains(c % low)),
        );
        Ok((big, lifted))
    }

    pub fn to_json(&self, x: &TupleSet) -> TupleSetJson {
        TupleSetJson {
            dim: self.dim,
            base: self.base,
            topology: self.topology.as_ref().map(TopologyJson::from),
            members: x.to_vec(),
        }
    }
}

/// Wire form of a tuple set together with its space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleSetJson {
    pub dim: usize,
    pub base: usize,
    pub topology: Option<TopologyJson>,
    pub members: Vec<usize>,
}

impl TupleSetJson {
    pub fn into_parts(self) -> Result<(Space, TupleSet), SetAlgError> {
        let mut space = Space::new(self.dim, self.base)?;
        if let Some(t) = self.topology {
            space = space.with_topology(FiniteTopology::try_from(t)?)?;
        }
        if let Some(&code) = self.members.iter().find(|&&c| c >= space.tuples()) {
            return Err(SetAlgError::MemberOutOfRange { code });
        }
        let x = TupleSet::from_indices(space.tuples(), self.members);
        Ok((space, x))
    }
}

/// A disjoint union of units `^nU_i`, each summand with its own topology.
///
/// Elements are tuple sets of the union space (base `sum |U_i|`, coproduct
/// topology) lying below the unit. Operations are relativized to the unit.
#[derive(Debug, Clone)]
pub struct GeneralizedSpace {
    summands: Vec<Space>,
    union: Space,
    offsets: Vec<usize>,
    unit: TupleSet,
}

impl GeneralizedSpace {
    pub fn new(summands: Vec<Space>) -> Result<Self, SetAlgError> {
        let dim = summands.first().ok_or(SetAlgError::BadSummands)?.dim();
        if summands
            .iter()
            .any(|s| s.dim() != dim || s.topology().is_none())
        {
            return Err(SetAlgError::BadSummands);
        }
        let tops: Vec<FiniteTopology> = summands
            .iter()
            .map(|s| s.topology().unwrap().clone())
            .collect();
        let union = Space::topological(dim, topology::coproduct(&tops)?)?;
        let mut offsets = Vec::new();
        let mut acc = 0;
        for s in &summands {
            offsets.push(acc);
            acc += s.base();
        }
        let mut unit = union.empty();
        for (s, &off) in summands.iter().zip(&offsets) {
            for c in 0..s.tuples() {
                unit.insert(Self::embed_code(&union, s, off, c));
            }
        }
        Ok(Self {
            summands,
            union,
            offsets,
            unit,
        })
    }

    fn embed_code(union: &Space, s: &Space, off: usize, c: usize) -> usize {
        let t: Vec<usize> = s.decode(c).into_iter().map(|a| a + off).collect();
        union.encode(&t)
    }

    pub fn summands(&self) -> &[Space] {
        &self.summands
    }

    /// The ambient space over the union base with the coproduct topology.
    pub fn union_space(&self) -> &Space {
        &self.union
    }

    pub fn unit(&self) -> &TupleSet {
        &self.unit
    }

    fn check(&self, x: &TupleSet) -> Result<(), SetAlgError> {
        self.union.check_width(x)?;
        if x.is_subset(&self.unit) {
            Ok(())
        } else {
            Err(SetAlgError::NotSubsetOfUnit)
        }
    }

    /// All elements, i.e. all subsets of the unit, in binary-counter order.
    pub fn elements(&self) -> impl Iterator<Item = TupleSet> + '_ {
        let members = self.unit.to_vec();
        let width = self.union.tuples();
        (0u64..1 << members.len()).map(move |code| {
            TupleSet::from_indices(
                width,
                members
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| code >> b & 1 == 1)
                    .map(|(_, &m)| m),
            )
        })
    }

    pub fn cyl(&self, i: usize, x: &TupleSet) -> Result<TupleSet, SetAlgError> {
        self.check(x)?;
        Ok(self.union.cyl(i, x)?.intersection(&self.unit))
    }

    pub fn diag(&self, i: usize, j: usize) -> Result<TupleSet, SetAlgError> {
        Ok(self.union.diag(i, j)?.intersection(&self.unit))
    }

    pub fn interior_op(&self, k: usize, x: &TupleSet) -> Result<TupleSet, SetAlgError> {
        self.check(x)?;
        Ok(self
            .union
            .interior_op(k, x, false)?
            .intersection(&self.unit))
    }

    pub fn complement(&self, x: &TupleSet) -> Result<TupleSet, SetAlgError> {
        self.check(x)?;
        Ok(self.unit.difference(x))
    }

    /// `x -> (x ∩ ^nU_i)_i`, each component re-indexed into its summand.
    pub fn decompose(&self, x: &TupleSet) -> Result<Vec<TupleSet>, SetAlgError> {
        self.check(x)?;
        Ok(self
            .summands
            .iter()
            .zip(&self.offsets)
            .map(|(s, &off)| {
                TupleSet::from_indices(
                    s.tuples(),
                    (0..s.tuples())
                        .filter(|&c| x.contains(Self::embed_code(&self.union, s, off, c))),
                )
            })
            .collect())
    }

    /// Inverse of [`GeneralizedSpace::decompose`].
    pub fn compose(&self, parts: &[TupleSet]) -> Result<TupleSet, SetAlgError> {
        if parts.len() != self.summands.len() {
            return Err(SetAlgError::BadSummands);
        }
        let mut out = self.union.empty();
        for ((s, &off), part) in self.summands.iter().zip(&self.offsets).zip(parts) {
            s.check_width(part)?;
            for c in part.ones() {
                out.insert(Self::embed_code(&self.union, s, off, c));
            }
        }
        Ok(out)
    }
}

/// Interiors of two sets and of their union on the indiscrete 2-point base
/// in dimension 2, where `I_0` fails to be additive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonAdditiveWitness {
    pub x: TupleSetJson,
    pub y: TupleSetJson,
    pub interior_x: TupleSetJson,
    pub interior_y: TupleSetJson,
    pub union_of_interiors: TupleSetJson,
    pub interior_of_union: TupleSetJson,
    pub additive: bool,
}

pub fn nonadditive_witness() -> Result<NonAdditiveWitness, SetAlgError> {
    let space = Space::topological(2, FiniteTopology::indiscrete(2)?)?;
    let x = space.set_of(&[&[0, 0]]);
    let y = space.set_of(&[&[1, 0]]);
    let ix = space.interior_op(0, &x, false)?;
    let iy = space.interior_op(0, &y, false)?;
    let union = ix.union(&iy);
    let iu = space.interior_op(0, &x.union(&y), false)?;
    Ok(NonAdditiveWitness {
        additive: union == iu,
        x: space.to_json(&x),
        y: space.to_json(&y),
        interior_x: space.to_json(&ix),
        interior_y: space.to_json(&iy),
        union_of_interiors: space.to_json(&union),
        interior_of_union: space.to_json(&iu),
    })
}

/// Two topologies on one base whose set algebras share every `c_i` and
/// `d_ij` but differ in `I_k` on `element`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonTermDefWitness {
    pub dim: usize,
    pub base: usize,
    pub cylindric_reducts_agree: bool,
    pub k: usize,
    pub element: Vec<usize>,
    pub interior_discrete: Vec<usize>,
    pub interior_indiscrete: Vec<usize>,
}

/// Scans all elements of the discrete and indiscrete algebras of dimension 2
/// on 2 points and reports the first element where the interiors differ.
pub fn nontermdef_witness() -> Result<NonTermDefWitness, SetAlgError> {
    let disc = Space::topological(2, FiniteTopology::discrete(2)?)?;
    let indisc = Space::topological(2, FiniteTopology::indiscrete(2)?)?;
    let mut agree = true;
    let mut found = None;
    for code in 0..1u64 << disc.tuples() {
        let x = TupleSet::from_word(disc.tuples(), code);
        for i in 0..2 {
            agree &= disc.cyl(i, &x)? == indisc.cyl(i, &x)?;
            for j in 0..2 {
                agree &= disc.diag(i, j)? == indisc.diag(i, j)?;
            }
            if found.is_none() {
                let a = disc.interior_op(i, &x, false)?;
                let b = indisc.interior_op(i, &x, false)?;
                if a != b {
                    found = Some((i, x.to_vec(), a.to_vec(), b.to_vec()));
                }
            }
        }
    }
    let (k, element, interior_discrete, interior_indiscrete) =
        found.expect("discrete and indiscrete interiors differ");
    Ok(NonTermDefWitness {
        dim: 2,
        base: 2,
        cylindric_reducts_agree: agree,
        k,
        element,
        interior_discrete,
        interior_indiscrete,
    })
}
