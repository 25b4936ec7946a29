//! Word-sized point sets over a base `0..size` with `size <= 64`.

/// A set of points of a finite base, bit `p` set iff point `p` is a member.
pub type PointSet = u64;

/// Largest base a [`PointSet`] can index.
pub const MAX_POINTS: usize = 64;

/// The full base `{0, .., size-1}`.
#[inline]
pub fn full(size: usize) -> PointSet {
    if size >= 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

#[inline]
pub fn singleton(p: usize) -> PointSet {
    1u64 << p
}

#[inline]
pub fn contains(set: PointSet, p: usize) -> bool {
    set >> p & 1 == 1
}

#[inline]
pub fn is_subset(a: PointSet, b: PointSet) -> bool {
    a & !b == 0
}

/// Members in ascending order.
pub fn members(set: PointSet) -> impl Iterator<Item = usize> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let p = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(p)
        }
    })
}

pub fn to_vec(set: PointSet) -> Vec<usize> {
    members(set).collect()
}

pub fn from_slice(points: &[usize]) -> PointSet {
    points.iter().fold(0, |acc, &p| acc | singleton(p))
}

/// Orders point sets as their ascending member lists compare lexicographically.
pub fn lex_cmp(a: PointSet, b: PointSet) -> std::cmp::Ordering {
    members(a).cmp(members(b))
}
