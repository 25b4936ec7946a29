//! Finite topological spaces and preorders.
//!
//! Every finite space is Alexandrov: each point `x` has a least open
//! neighbourhood, and the opens are exactly the up-closed sets of the
//! specialization preorder. Both views are kept on [`FiniteTopology`] so that
//! interiors can be computed either by scanning opens or pointwise.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::points::{self, PointSet, MAX_POINTS};

/// Largest base accepted by [`enumerate_topologies`].
pub const MAX_ENUM_SIZE: usize = 4;

/// Largest base for which the discrete preset materializes its opens.
pub const MAX_DISCRETE_SIZE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("opens not closed under union: {a:?} | {b:?} is missing")]
    NotClosedUnderUnion { a: Vec<usize>, b: Vec<usize> },
    #[error("opens not closed under intersection: {a:?} & {b:?} is missing")]
    NotClosedUnderIntersection { a: Vec<usize>, b: Vec<usize> },
    #[error("opens must contain the empty set and the full base (missing {missing:?})")]
    MissingEmptyOrFull { missing: Vec<usize> },
    #[error("point set {set:?} leaves the base 0..{size}")]
    OutOfRangePoint { set: Vec<usize>, size: usize },
    #[error("coproduct of an empty list")]
    EmptyList,
    #[error("size {size} exceeds the supported maximum {max}")]
    SizeTooLarge { size: usize, max: usize },
    #[error("relation is not a preorder: {reason}")]
    NotPreorder { reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preset {
    #[default]
    None,
    Discrete,
    Indiscrete,
}

/// A topology on the points `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteTopology {
    size: usize,
    /// Canonical order: lexicographic on ascending member lists.
    opens: Vec<PointSet>,
    /// Least open neighbourhood of each point.
    neighbourhood: Vec<PointSet>,
}

fn check_range(size: usize, set: PointSet) -> Result<(), TopologyError> {
    if points::is_subset(set, points::full(size)) {
        Ok(())
    } else {
        Err(TopologyError::OutOfRangePoint {
            set: points::to_vec(set),
            size,
        })
    }
}

impl FiniteTopology {
    /// Validates `opens` as a topology on `0..size`.
    pub fn new(
        size: usize,
        opens: impl IntoIterator<Item = PointSet>,
    ) -> Result<Self, TopologyError> {
        if size > MAX_POINTS {
            return Err(TopologyError::SizeTooLarge {
                size,
                max: MAX_POINTS,
            });
        }
        let mut family: Vec<PointSet> = opens.into_iter().collect();
        for &o in &family {
            check_range(size, o)?;
        }
        family.sort_unstable();
        family.dedup();
        let full = points::full(size);
        for required in [0, full] {
            if family.binary_search(&required).is_err() {
                return Err(TopologyError::MissingEmptyOrFull {
                    missing: points::to_vec(required),
                });
            }
        }
        for (idx, &a) in family.iter().enumerate() {
            for &b in &family[idx + 1..] {
                if family.binary_search(&(a | b)).is_err() {
                    return Err(TopologyError::NotClosedUnderUnion {
                        a: points::to_vec(a),
                        b: points::to_vec(b),
                    });
                }
                if family.binary_search(&(a & b)).is_err() {
                    return Err(TopologyError::NotClosedUnderIntersection {
                        a: points::to_vec(a),
                        b: points::to_vec(b),
                    });
                }
            }
        }
        Ok(Self::from_sorted_unchecked(size, family))
    }

    fn from_sorted_unchecked(size: usize, mut family: Vec<PointSet>) -> Self {
        let neighbourhood = (0..size)
            .map(|x| {
                family
                    .iter()
                    .filter(|&&o| points::contains(o, x))
                    .fold(points::full(size), |acc, &o| acc & o)
            })
            .collect();
        family.sort_by(|a, b| points::lex_cmp(*a, *b));
        Self {
            size,
            opens: family,
            neighbourhood,
        }
    }

    pub fn discrete(size: usize) -> Result<Self, TopologyError> {
        if size > MAX_DISCRETE_SIZE {
            return Err(TopologyError::SizeTooLarge {
                size,
                max: MAX_DISCRETE_SIZE,
            });
        }
        Ok(Self::from_sorted_unchecked(
            size,
            (0..=points::full(size)).collect(),
        ))
    }

    pub fn indiscrete(size: usize) -> Result<Self, TopologyError> {
        if size > MAX_POINTS {
            return Err(TopologyError::SizeTooLarge {
                size,
                max: MAX_POINTS,
            });
        }
        let mut family = vec![0, points::full(size)];
        family.dedup();
        Ok(Self::from_sorted_unchecked(size, family))
    }

    /// Builds a topology from explicit opens, or from a preset that overrides them.
    pub fn make(
        size: usize,
        opens: impl IntoIterator<Item = PointSet>,
        preset: Preset,
    ) -> Result<Self, TopologyError> {
        match preset {
            Preset::None => Self::new(size, opens),
            Preset::Discrete => Self::discrete(size),
            Preset::Indiscrete => Self::indiscrete(size),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn base(&self) -> PointSet {
        points::full(self.size)
    }

    /// Opens in canonical (lexicographic) order.
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        self.opens.contains(&set)
    }

    /// Least open set containing `x`.
    pub fn neighbourhood(&self, x: usize) -> PointSet {
        self.neighbourhood[x]
    }

    pub fn is_discrete(&self) -> bool {
        self.neighbourhood
            .iter()
            .enumerate()
            .all(|(x, &n)| n == points::singleton(x))
    }

    /// Largest open set contained in `a`.
    pub fn interior(&self, a: PointSet) -> Result<PointSet, TopologyError> {
        check_range(self.size, a)?;
        Ok(self.interior_unchecked(a))
    }

    /// Interior without the range check; `a` must lie in the base.
    #[inline]
    pub fn interior_unchecked(&self, a: PointSet) -> PointSet {
        let mut out = 0;
        for x in points::members(a) {
            if points::is_subset(self.neighbourhood[x], a) {
                out |= points::singleton(x);
            }
        }
        out
    }

    /// Smallest closed set containing `a`.
    pub fn closure(&self, a: PointSet) -> Result<PointSet, TopologyError> {
        check_range(self.size, a)?;
        Ok(self.closure_unchecked(a))
    }

    #[inline]
    pub fn closure_unchecked(&self, a: PointSet) -> PointSet {
        let base = self.base();
        base & !self.interior_unchecked(base & !a)
    }

    /// Whether the closure of every open set is open.
    pub fn is_almost_discrete(&self) -> bool {
        self.opens.iter().all(|&o| {
            let cl = self.closure_unchecked(o);
            self.interior_unchecked(cl) == cl
        })
    }

    /// `x <= y` iff `x` lies in the closure of `{y}`, i.e. every open set
    /// containing `x` contains `y`. With this orientation the opens are the
    /// up-closed sets, matching [`alexandrov`].
    pub fn specialization_preorder(&self) -> Preorder {
        Preorder {
            size: self.size,
            up: self.neighbourhood.clone(),
        }
    }

    /// Subspace on `s`, re-indexed so the members of `s` become `0..|s|` in order.
    pub fn subspace(&self, s: PointSet) -> Result<Self, TopologyError> {
        check_range(self.size, s)?;
        let index: Vec<usize> = points::to_vec(s);
        let reindex = |o: PointSet| {
            index
                .iter()
                .enumerate()
                .filter(|(_, &p)| points::contains(o, p))
                .fold(0, |acc, (i, _)| acc | points::singleton(i))
        };
        let mut family: Vec<PointSet> = self.opens.iter().map(|&o| reindex(o & s)).collect();
        family.sort_unstable();
        family.dedup();
        Ok(Self::from_sorted_unchecked(index.len(), family))
    }
}

/// Disjoint union; summand `i`'s point `p` becomes `offset(i) + p`, offsets
/// being the cumulative sizes of the earlier summands.
pub fn coproduct(ts: &[FiniteTopology]) -> Result<FiniteTopology, TopologyError> {
    if ts.is_empty() {
        return Err(TopologyError::EmptyList);
    }
    let size: usize = ts.iter().map(|t| t.size).sum();
    if size > MAX_POINTS {
        return Err(TopologyError::SizeTooLarge {
            size,
            max: MAX_POINTS,
        });
    }
    let mut family = vec![0u64];
    let mut offset = 0;
    for t in ts {
        let mut next = Vec::with_capacity(family.len() * t.opens.len());
        for &acc in &family {
            for &o in &t.opens {
                next.push(acc | (o << offset));
            }
        }
        family = next;
        offset += t.size;
    }
    family.sort_unstable();
    family.dedup();
    Ok(FiniteTopology::from_sorted_unchecked(size, family))
}

/// Every topology on `0..size`, each exactly once, in a deterministic order.
pub fn enumerate_topologies(size: usize) -> Result<Vec<FiniteTopology>, TopologyError> {
    if size > MAX_ENUM_SIZE {
        return Err(TopologyError::SizeTooLarge {
            size,
            max: MAX_ENUM_SIZE,
        });
    }
    // Topologies on a finite set correspond to preorders; enumerate those.
    Ok(enumerate_preorders(size)?.iter().map(alexandrov).collect())
}

/// A reflexive, transitive relation on `0..size`; `up[x] = {y : x <= y}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Preorder {
    size: usize,
    up: Vec<PointSet>,
}

impl Preorder {
    pub fn new(
        size: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, TopologyError> {
        if size > MAX_POINTS {
            return Err(TopologyError::SizeTooLarge {
                size,
                max: MAX_POINTS,
            });
        }
        let mut up = vec![0; size];
        for (x, y) in pairs {
            if x >= size || y >= size {
                return Err(TopologyError::OutOfRangePoint {
                    set: vec![x, y],
                    size,
                });
            }
            up[x] |= points::singleton(y);
        }
        Self::from_up_sets(size, up)
    }

    /// Validates up-sets `up[x] = {y : x <= y}`.
    pub fn from_up_sets(size: usize, up: Vec<PointSet>) -> Result<Self, TopologyError> {
        if up.len() != size {
            return Err(TopologyError::NotPreorder {
                reason: format!("{} rows for {} points", up.len(), size),
            });
        }
        for (x, &row) in up.iter().enumerate() {
            check_range(size, row)?;
            if !points::contains(row, x) {
                return Err(TopologyError::NotPreorder {
                    reason: format!("not reflexive at {x}"),
                });
            }
            for y in points::members(row) {
                if !points::is_subset(up[y], row) {
                    return Err(TopologyError::NotPreorder {
                        reason: format!("not transitive through {x} <= {y}"),
                    });
                }
            }
        }
        Ok(Self { size, up })
    }

    pub fn identity(size: usize) -> Self {
        Self {
            size,
            up: (0..size).map(points::singleton).collect(),
        }
    }

    pub fn total(size: usize) -> Self {
        Self {
            size,
            up: vec![points::full(size); size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        points::contains(self.up[x], y)
    }

    /// `{y : x <= y}`.
    pub fn successors(&self, x: usize) -> PointSet {
        self.up[x]
    }

    /// All pairs `(x, y)` with `x <= y`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|x| points::members(self.up[x]).map(move |y| (x, y)))
            .collect()
    }

    pub fn is_up_closed(&self, set: PointSet) -> bool {
        points::members(set).all(|x| points::is_subset(self.up[x], set))
    }
}

/// Topology whose opens are the up-closed sets of `p`.
pub fn alexandrov(p: &Preorder) -> FiniteTopology {
    let full = points::full(p.size);
    let opens: Vec<PointSet> = if p.size <= 20 {
        (0..=full).filter(|&s| p.is_up_closed(s)).collect()
    } else {
        // Close the principal up-sets under union.
        let mut family = vec![0u64];
        for &u in &p.up {
            let extra: Vec<_> = family.iter().map(|&f| f | u).collect();
            family.extend(extra);
            family.sort_unstable();
            family.dedup();
        }
        family
    };
    FiniteTopology::from_sorted_unchecked(p.size, opens)
}

/// Every preorder on `0..size`, in lexicographic order of their up-set rows.
pub fn enumerate_preorders(size: usize) -> Result<Vec<Preorder>, TopologyError> {
    if size > MAX_ENUM_SIZE + 1 {
        return Err(TopologyError::SizeTooLarge {
            size,
            max: MAX_ENUM_SIZE + 1,
        });
    }
    let mut out = Vec::new();
    let mut rows = vec![0u64; size];
    fn extend(size: usize, x: usize, rows: &mut Vec<PointSet>, out: &mut Vec<Preorder>) {
        if x == size {
            if let Ok(p) = Preorder::from_up_sets(size, rows.clone()) {
                out.push(p);
            }
            return;
        }
        let others = points::full(size) & !points::singleton(x);
        // Enumerate subsets of `others` in increasing numeric order.
        let mut sub: PointSet = 0;
        loop {
            rows[x] = sub | points::singleton(x);
            extend(size, x + 1, rows, out);
            if sub == others {
                break;
            }
            sub = (sub.wrapping_sub(others)) & others;
        }
    }
    extend(size, 0, &mut rows, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyJson {
    pub size: usize,
    pub opens: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreorderJson {
    pub size: usize,
    pub leq: Vec<[usize; 2]>,
}

impl From<&FiniteTopology> for TopologyJson {
    fn from(t: &FiniteTopology) -> Self {
        TopologyJson {
            size: t.size,
            opens: t.opens.iter().map(|&o| points::to_vec(o)).collect(),
        }
    }
}

impl TryFrom<TopologyJson> for FiniteTopology {
    type Error = TopologyError;

    fn try_from(json: TopologyJson) -> Result<Self, Self::Error> {
        let mut opens = Vec::with_capacity(json.opens.len());
        for o in &json.opens {
            if let Some(&p) = o.iter().find(|&&p| p >= json.size) {
                return Err(TopologyError::OutOfRangePoint {
                    set: vec![p],
                    size: json.size,
                });
            }
            opens.push(points::from_slice(o));
        }
        FiniteTopology::new(json.size, opens)
    }
}

impl Serialize for FiniteTopology {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TopologyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteTopology {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = TopologyJson::deserialize(d)?;
        FiniteTopology::try_from(json).map_err(serde::de::Error::custom)
    }
}

impl From<&Preorder> for PreorderJson {
    fn from(p: &Preorder) -> Self {
        PreorderJson {
            size: p.size,
            leq: p.pairs().into_iter().map(|(x, y)| [x, y]).collect(),
        }
    }
}

impl Serialize for Preorder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PreorderJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Preorder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = PreorderJson::deserialize(d)?;
        Preorder::new(json.size, json.leq.iter().map(|&[x, y]| (x, y)))
            .map_err(serde::de::Error::custom)
    }
}
