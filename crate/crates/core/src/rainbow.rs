//! The finite rainbow algebra: colours, coloured graphs, atoms and the
//! atom structure at dimension 3.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bao::{Accessibility, AtomStructure, Element, Interior};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RainbowError {
    #[error("dimension {0} is below 3")]
    DimTooSmall(usize),
    #[error("dimension {0} is not supported here (only 3)")]
    DimUnsupported(usize),
    #[error("bad colour code {0:?}")]
    BadCode(String),
    #[error("yellow palette is empty or outside the signature")]
    BadPalette,
    #[error("{0} atoms exceed the enumeration limit")]
    TooManyAtoms(u128),
    #[error("malformed graph: {0}")]
    BadGraph(String),
}

/// An edge colour as seen from the first endpoint to the second.
///
/// `Red(i, j)` on `(x, y)` gives `x` index `i` and `y` index `j`; the same
/// edge read from `y` is `Red(j, i)`. Only `i < j` appears in codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colour {
    /// `g_i`, `1 <= i <= n-2`.
    Green(usize),
    /// `g_0^i`, `1 <= i <= n+1`.
    GreenZero(usize),
    /// `w_i`, `i <= n-2`.
    White(usize),
    Red(usize, usize),
}

impl Colour {
    pub fn is_green(self) -> bool {
        matches!(self, Colour::Green(_) | Colour::GreenZero(_))
    }

    pub fn is_red(self) -> bool {
        matches!(self, Colour::Red(..))
    }

    /// The same edge read in the other direction.
    pub fn reversed(self) -> Self {
        match self {
            Colour::Red(i, j) => Colour::Red(j, i),
            c => c,
        }
    }

    /// Code of the colour as read from the endpoint with the lower red
    /// index; non-red colours are symmetric.
    pub fn code(self) -> String {
        fn idx(i: usize, j: usize) -> String {
            if i < 10 && j < 10 {
                format!("{i}{j}")
            } else {
                format!("{i}_{j}")
            }
        }
        match self {
            Colour::Green(i) => format!("g{i}"),
            Colour::GreenZero(i) => format!("g0^{i}"),
            Colour::White(i) => format!("w{i}"),
            Colour::Red(i, j) => format!("r{}", idx(i.min(j), i.max(j))),
        }
    }

    /// Parses a code; reds come back with `i < j`.
    pub fn parse(code: &str) -> Result<Self, RainbowError> {
        let bad = || RainbowError::BadCode(code.to_string());
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        if let Some(rest) = code.strip_prefix("g0^") {
            return Ok(Colour::GreenZero(num(rest)?));
        }
        if let Some(rest) = code.strip_prefix('g') {
            return Ok(Colour::Green(num(rest)?));
        }
        if let Some(rest) = code.strip_prefix('w') {
            return Ok(Colour::White(num(rest)?));
        }
        if let Some(rest) = code.strip_prefix('r') {
            let (i, j) = match rest.split_once('_') {
                Some((a, b)) => (num(a)?, num(b)?),
                None if rest.len() == 2 && rest.is_ascii() => (num(&rest[..1])?, num(&rest[1..])?),
                None => return Err(bad()),
            };
            if i >= j {
                return Err(bad());
            }
            return Ok(Colour::Red(i, j));
        }
        Err(bad())
    }
}

/// A shade of yellow `y_S`, with `S` a bit mask over `0..n+2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Yellow(pub u64);

impl Yellow {
    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn members(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    pub fn code(self) -> String {
        let parts: Vec<String> = self.members().iter().map(|i| i.to_string()).collect();
        format!("yS:{{{}}}", parts.join(","))
    }

    pub fn parse(code: &str) -> Result<Self, RainbowError> {
        let bad = || RainbowError::BadCode(code.to_string());
        let inner = code
            .strip_prefix("yS:{")
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(bad)?;
        let mut mask = 0u64;
        for part in inner.split(',').filter(|s| !s.is_empty()) {
            let i: usize = part.trim().parse().map_err(|_| bad())?;
            if i >= 64 {
                return Err(bad());
            }
            mask |= 1 << i;
        }
        Ok(Yellow(mask))
    }
}

impl fmt::Display for Yellow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

/// The colour inventory at dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RainbowSignature {
    n: usize,
}

pub fn signature(n: usize) -> Result<RainbowSignature, RainbowError> {
    if n < 3 {
        return Err(RainbowError::DimTooSmall(n));
    }
    if n + 2 > 62 {
        return Err(RainbowError::DimUnsupported(n));
    }
    Ok(RainbowSignature { n })
}

impl RainbowSignature {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn greens(&self) -> Vec<Colour> {
        let n = self.n;
        (1..=n - 2)
            .map(Colour::Green)
            .chain((1..=n + 1).map(Colour::GreenZero))
            .collect()
    }

    pub fn whites(&self) -> Vec<Colour> {
        (0..=self.n - 2).map(Colour::White).collect()
    }

    pub fn reds(&self) -> Vec<Colour> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| Colour::Red(i, j)))
            .collect()
    }

    /// Number of shades `y_S`, `S ⊆ n+2`.
    pub fn yellow_count(&self) -> u64 {
        1 << (self.n + 2)
    }

    /// `y_S` with `S = {0, ..., n+1}`.
    pub fn full_yellow(&self) -> Yellow {
        Yellow((1 << (self.n + 2)) - 1)
    }

    pub fn all_yellows(&self) -> Vec<Yellow> {
        (0..self.yellow_count()).map(Yellow).collect()
    }

    /// Edge colours as read along an ordered pair, reds in both orientations.
    pub fn edge_options(&self) -> Vec<Colour> {
        let mut out = self.greens();
        out.extend(self.whites());
        for r in self.reds() {
            out.push(r);
            out.push(r.reversed());
        }
        out
    }

    pub fn admits(&self, c: Colour) -> bool {
        let n = self.n;
        match c {
            Colour::Green(i) => (1..=n - 2).contains(&i),
            Colour::GreenZero(i) => (1..=n + 1).contains(&i),
            Colour::White(i) => i <= n - 2,
            Colour::Red(i, j) => i < n && j < n && i != j,
        }
    }

    pub fn admits_yellow(&self, y: Yellow) -> bool {
        y.0 >> (self.n + 2) == 0
    }

    pub fn to_json(&self) -> Value {
        let codes = |v: Vec<Colour>| v.into_iter().map(Colour::code).collect::<Vec<_>>();
        json!({
            "n": self.n,
            "greens": codes(self.greens()),
            "whites": codes(self.whites()),
            "reds": codes(self.reds()),
            "yellows": self.yellow_count(),
        })
    }
}

/// How yellow labels on tuples related by a permutation interact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum YellowMode {
    /// Every ordered tuple carries its own shade.
    #[default]
    Strict,
    /// Tuples with the same underlying set carry the same shade.
    Lenient,
}

/// A complete graph with edge colours and yellow shades on tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColouredGraph {
    nodes: usize,
    /// `edges[x * nodes + y]`, the colour read from `x` to `y`.
    edges: Vec<Option<Colour>>,
    yellows: BTreeMap<Vec<usize>, Yellow>,
}

/// Which rule a graph breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    UnknownColour {
        nodes: Vec<usize>,
        code: String,
    },
    Incomplete {
        nodes: [usize; 2],
    },
    GreenTriangle {
        nodes: [usize; 3],
    },
    GreenWhite {
        nodes: [usize; 3],
    },
    GreenZeroWhite {
        nodes: [usize; 3],
    },
    InconsistentReds {
        nodes: [usize; 3],
    },
    MissingYellow {
        tuple: Vec<usize>,
    },
    UnexpectedYellow {
        tuple: Vec<usize>,
    },
    AsymmetricYellow {
        tuple: Vec<usize>,
    },
    ConeTint {
        base: Vec<usize>,
        apex: usize,
        tint: usize,
        shade: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphVerdict {
    pub valid: bool,
    pub violation: Option<Violation>,
}

impl ColouredGraph {
    /// A graph on `nodes` points with nothing labelled.
    pub fn new(nodes: usize) -> Self {
        Self {
            nodes,
            edges: vec![None; nodes * nodes],
            yellows: BTreeMap::new(),
        }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Colours `(x, y)` as `c` and `(y, x)` as its reverse.
    pub fn set_edge(&mut self, x: usize, y: usize, c: Colour) {
        assert!(x != y && x < self.nodes && y < self.nodes);
        self.edges[x * self.nodes + y] = Some(c);
        self.edges[y * self.nodes + x] = Some(c.reversed());
    }

    pub fn edge(&self, x: usize, y: usize) -> Option<Colour> {
        if x == y || x >= self.nodes || y >= self.nodes {
            return None;
        }
        self.edges[x * self.nodes + y]
    }

    pub fn set_yellow(&mut self, tuple: Vec<usize>, y: Yellow) {
        self.yellows.insert(tuple, y);
    }

    pub fn yellow(&self, tuple: &[usize]) -> Option<Yellow> {
        self.yellows.get(tuple).copied()
    }

    pub fn yellows(&self) -> impl Iterator<Item = (&Vec<usize>, &Yellow)> {
        self.yellows.iter()
    }

    fn green_free(&self, tuple: &[usize]) -> bool {
        tuple.iter().enumerate().all(|(p, &a)| {
            tuple[p + 1..]
                .iter()
                .all(|&b| !self.edge(a, b).is_some_and(Colour::is_green))
        })
    }

    /// Checks completeness, forbidden triples, yellow totality and the cone
    /// clause, in that order, reporting the first violation.
    pub fn validate(&self, sig: &RainbowSignature, mode: YellowMode) -> Result<(), Violation> {
        let m = self.nodes;
        let n = sig.n();
        for x in 0..m {
            for y in x + 1..m {
                match self.edge(x, y) {
                    None => return Err(Violation::Incomplete { nodes: [x, y] }),
                    Some(c) if !sig.admits(c) => {
                        return Err(Violation::UnknownColour {
                            nodes: vec![x, y],
                            code: c.code(),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        for (t, y) in &self.yellows {
            if !sig.admits_yellow(*y) {
                return Err(Violation::UnknownColour {
                    nodes: t.clone(),
                    code: y.code(),
                });
            }
        }
        for x in 0..m {
            for y in x + 1..m {
                for z in y + 1..m {
                    if let Some(v) = self.triangle_violation(x, y, z) {
                        return Err(v);
                    }
                }
            }
        }
        for t in self.yellows.keys() {
            let distinct = t.len() == n - 1
                && t.iter().all(|&a| a < m)
                && t.iter().enumerate().all(|(p, a)| !t[p + 1..].contains(a));
            if !distinct || !self.green_free(t) {
                return Err(Violation::UnexpectedYellow { tuple: t.clone() });
            }
        }
        let tuples = distinct_tuples(m, n - 1);
        for t in &tuples {
            if self.green_free(t) && !self.yellows.contains_key(t) {
                return Err(Violation::MissingYellow { tuple: t.clone() });
            }
        }
        if mode == YellowMode::Lenient {
            for t in &tuples {
                let mut sorted = t.clone();
                sorted.sort_unstable();
                if self.yellows.get(t) != self.yellows.get(&sorted) {
                    return Err(Violation::AsymmetricYellow { tuple: t.clone() });
                }
            }
        }
        for apex in 0..m {
            for base in tuples.iter().filter(|t| !t.contains(&apex)) {
                if let Some(tint) = self.cone_tint(base, apex) {
                    let shade = self.yellows[base];
                    if !shade.contains(tint) {
                        return Err(Violation::ConeTint {
                            base: base.clone(),
                            apex,
                            tint,
                            shade: shade.code(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn verdict(&self, sig: &RainbowSignature, mode: YellowMode) -> GraphVerdict {
        let violation = self.validate(sig, mode).err();
        GraphVerdict {
            valid: violation.is_none(),
            violation,
        }
    }

    fn triangle_violation(&self, x: usize, y: usize, z: usize) -> Option<Violation> {
        let e = |a, b| self.edge(a, b).expect("completeness checked");
        let (xy, yz, xz) = (e(x, y), e(y, z), e(x, z));
        let nodes = [x, y, z];
        let all = [xy, yz, xz];
        if all.iter().all(|c| c.is_green()) {
            return Some(Violation::GreenTriangle { nodes });
        }
        // each edge in turn as the white side
        for (w, g1, g2) in [(xy, yz, xz), (yz, xy, xz), (xz, xy, yz)] {
            match (w, g1, g2) {
                (Colour::White(i), Colour::Green(a), Colour::Green(b)) if a == i && b == i => {
                    return Some(Violation::GreenWhite { nodes })
                }
                (Colour::White(0), Colour::GreenZero(_), Colour::GreenZero(_)) => {
                    return Some(Violation::GreenZeroWhite { nodes })
                }
                _ => {}
            }
        }
        if all.iter().all(|c| c.is_red()) {
            // each vertex must get the same index from both of its edges
            let idx = |a: usize, b: usize| match e(a, b) {
                Colour::Red(i, _) => i,
                _ => unreachable!(),
            };
            if idx(x, y) != idx(x, z) || idx(y, x) != idx(y, z) || idx(z, x) != idx(z, y) {
                return Some(Violation::InconsistentReds { nodes });
            }
        }
        None
    }

    /// The tint if `base` plus `apex` form a cone with that base order.
    fn cone_tint(&self, base: &[usize], apex: usize) -> Option<usize> {
        let tint = match self.edge(base[0], apex)? {
            Colour::GreenZero(i) => i,
            _ => return None,
        };
        for (j, &b) in base.iter().enumerate().skip(1) {
            if self.edge(b, apex)? != Colour::Green(j) {
                return None;
            }
        }
        self.green_free(base).then_some(tint)
    }

    /// `{"nodes": m, "edges": {"(x,y)": code}, "yellows": {"(..)": code}}`,
    /// with red edges keyed so their code reads from the first node.
    pub fn to_json(&self) -> Value {
        let mut edges = serde_json::Map::new();
        for x in 0..self.nodes {
            for y in x + 1..self.nodes {
                if let Some(c) = self.edge(x, y) {
                    let key = match c {
                        Colour::Red(i, j) if i > j => format!("({y},{x})"),
                        _ => format!("({x},{y})"),
                    };
                    edges.insert(key, Value::String(c.code()));
                }
            }
        }
        let yellows: serde_json::Map<String, Value> = self
            .yellows
            .iter()
            .map(|(t, y)| (tuple_key(t), Value::String(y.code())))
            .collect();
        json!({ "nodes": self.nodes, "edges": edges, "yellows": yellows })
    }

    pub fn from_json(v: &Value) -> Result<Self, RainbowError> {
        let bad = |m: &str| RainbowError::BadGraph(m.to_string());
        let nodes = v["nodes"].as_u64().ok_or_else(|| bad("nodes"))? as usize;
        let mut g = ColouredGraph::new(nodes);
        if let Some(edges) = v["edges"].as_object() {
            for (k, code) in edges {
                let t = parse_tuple(k).ok_or_else(|| bad(k))?;
                let c = Colour::parse(code.as_str().ok_or_else(|| bad(k))?)?;
                if t.len() != 2 || t[0] == t[1] || t[0] >= nodes || t[1] >= nodes {
                    return Err(bad(k));
                }
                g.set_edge(t[0], t[1], c);
            }
        }
        if let Some(ys) = v["yellows"].as_object() {
            for (k, code) in ys {
                let t = parse_tuple(k).ok_or_else(|| bad(k))?;
                g.set_yellow(t, Yellow::parse(code.as_str().ok_or_else(|| bad(k))?)?);
            }
        }
        Ok(g)
    }
}

fn tuple_key(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn parse_tuple(s: &str) -> Option<Vec<usize>> {
    s.strip_prefix('(')?
        .strip_suffix(')')?
        .split(',')
        .map(|p| p.trim().parse().ok())
        .collect()
}

/// Ordered tuples of `len` distinct nodes below `m`, lexicographically.
fn distinct_tuples(m: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(m: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in 0..m {
            if !cur.contains(&x) {
                cur.push(x);
                go(m, len, cur, out);
                cur.pop();
            }
        }
    }
    go(m, len, &mut cur, &mut out);
    out
}

pub fn is_valid_coloured_graph(
    g: &ColouredGraph,
    sig: &RainbowSignature,
    mode: YellowMode,
) -> GraphVerdict {
    g.verdict(sig, mode)
}

/// An `i`-cone: base nodes `0..n-1` joined by `w_0`, apex `n-1`, with
/// every base permutation shaded `base_shade`.
pub fn cone(sig: &RainbowSignature, tint: usize, base_shade: Yellow) -> ColouredGraph {
    let n = sig.n();
    let apex = n - 1;
    let mut g = ColouredGraph::new(n);
    for x in 0..apex {
        for y in x + 1..apex {
            g.set_edge(x, y, Colour::White(0));
        }
    }
    g.set_edge(0, apex, Colour::GreenZero(tint));
    for j in 1..apex {
        g.set_edge(j, apex, Colour::Green(j));
    }
    for t in distinct_tuples(apex, n - 1) {
        g.set_yellow(t, base_shade);
    }
    g
}

/// An atom: a surjection from the indices onto a valid graph, with nodes
/// numbered in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RainbowAtom {
    pub map: Vec<usize>,
    pub graph: ColouredGraph,
}

impl RainbowAtom {
    fn sort_key(&self) -> (usize, Vec<String>, Vec<String>, Vec<usize>) {
        let g = &self.graph;
        let m = g.nodes();
        let mut edges = Vec::new();
        for x in 0..m {
            for y in x + 1..m {
                let c = g.edge(x, y).expect("complete");
                // orientation matters for reds
                edges.push(match c {
                    Colour::Red(i, j) if i > j => format!("{}'", c.code()),
                    _ => c.code(),
                });
            }
        }
        let yellows = g
            .yellows()
            .map(|(t, y)| format!("{}{}", tuple_key(t), y))
            .collect();
        (m, edges, yellows, self.map.clone())
    }

    /// The colour of the pair of indices `(i, j)`, if their images differ.
    pub fn edge(&self, i: usize, j: usize) -> Option<Colour> {
        self.graph.edge(self.map[i], self.map[j])
    }

    /// Whether indices `i` and `j` map to the same node.
    pub fn merged(&self, i: usize, j: usize) -> bool {
        self.map[i] == self.map[j]
    }

    pub fn to_json(&self) -> Value {
        json!({ "map": self.map, "graph": self.graph.to_json() })
    }
}

/// Enumeration parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowConfig {
    pub n: usize,
    /// Shades allowed on yellow tuples.
    pub palette: Vec<Yellow>,
    pub mode: YellowMode,
}

impl RainbowConfig {
    /// Dimension 3 with the single shade `y_S`, `S = {0, ..., 4}`.
    pub fn default_n3() -> Self {
        let sig = signature(3).expect("3 is supported");
        Self {
            n: 3,
            palette: vec![sig.full_yellow()],
            mode: YellowMode::Strict,
        }
    }

    /// Dimension 3 with all 32 shades.
    pub fn full_palette_n3() -> Self {
        let sig = signature(3).expect("3 is supported");
        Self {
            n: 3,
            palette: sig.all_yellows(),
            mode: YellowMode::Strict,
        }
    }

    fn check(&self) -> Result<RainbowSignature, RainbowError> {
        let sig = signature(self.n)?;
        if self.n != 3 {
            return Err(RainbowError::DimUnsupported(self.n));
        }
        if self.palette.is_empty() || self.palette.iter().any(|y| !sig.admits_yellow(*y)) {
            return Err(RainbowError::BadPalette);
        }
        Ok(sig)
    }
}

/// Largest atom count `enumerate_atoms` will build.
pub const MAX_ENUMERATED_ATOMS: u64 = 1 << 20;

/// Kernel patterns of maps `3 -> M` with nodes in first-appearance order.
const PATTERNS: [[usize; 3]; 5] = [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1], [0, 1, 2]];

/// Yellow slots of a graph on `m <= 3` nodes: ordered pairs of distinct
/// nodes with a non-green edge, paired with the tints their cones demand.
fn yellow_slots(g: &ColouredGraph) -> Vec<(Vec<usize>, Vec<usize>)> {
    let m = g.nodes();
    let mut out = Vec::new();
    for t in distinct_tuples(m, 2) {
        if !g.green_free(&t) {
            continue;
        }
        let tints = (0..m)
            .filter(|a| !t.contains(a))
            .filter_map(|apex| g.cone_tint(&t, apex))
            .collect();
        out.push((t, tints));
    }
    out
}

/// Edge-coloured graphs on `m` nodes without yellows that pass the
/// triangle rules, in a fixed order.
fn edge_colourings(sig: &RainbowSignature, m: usize) -> Vec<ColouredGraph> {
    let opts = sig.edge_options();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|x| (x + 1..m).map(move |y| (x, y)))
        .collect();
    let mut out = Vec::new();
    let total = opts.len().pow(pairs.len() as u32);
    for mut code in 0..total {
        let mut g = ColouredGraph::new(m);
        for &(x, y) in &pairs {
            g.set_edge(x, y, opts[code % opts.len()]);
            code /= opts.len();
        }
        let ok = (0..m).all(|x| {
            (x + 1..m).all(|y| (y + 1..m).all(|z| g.triangle_violation(x, y, z).is_none()))
        });
        if ok {
            out.push(g);
        }
    }
    out
}

/// Groups the yellow slots into independently shaded units; lenient mode
/// shades a pair and its reverse together.
fn yellow_units(
    slots: &[(Vec<usize>, Vec<usize>)],
    mode: YellowMode,
) -> Vec<(Vec<Vec<usize>>, Vec<usize>)> {
    let mut units: Vec<(Vec<Vec<usize>>, Vec<usize>)> = Vec::new();
    for (t, tints) in slots {
        let mut key = t.clone();
        key.sort_unstable();
        let found = match mode {
            YellowMode::Strict => None,
            YellowMode::Lenient => units.iter_mut().find(|(ts, _)| {
                let mut k = ts[0].clone();
                k.sort_unstable();
                k == key
            }),
        };
        match found {
            Some((ts, req)) => {
                ts.push(t.clone());
                req.extend(tints);
            }
            None => units.push((vec![t.clone()], tints.clone())),
        }
    }
    units
}

fn shades_for(palette: &[Yellow], required: &[usize]) -> Vec<Yellow> {
    palette
        .iter()
        .copied()
        .filter(|y| required.iter().all(|&i| y.contains(i)))
        .collect()
}

/// The number of atoms, computed without listing them.
pub fn count_atoms(cfg: &RainbowConfig) -> Result<u128, RainbowError> {
    let sig = cfg.check()?;
    let mut total = 0u128;
    for pattern in PATTERNS {
        let m = pattern.iter().max().unwrap() + 1;
        for g in edge_colourings(&sig, m) {
            let units = yellow_units(&yellow_slots(&g), cfg.mode);
            total += units
                .iter()
                .map(|(_, req)| shades_for(&cfg.palette, req).len() as u128)
                .product::<u128>();
        }
    }
    Ok(total)
}

/// All atoms at dimension 3 in canonical order: graph size, edge codes,
/// yellow codes, then the kernel of the map.
pub fn enumerate_atoms(cfg: &RainbowConfig) -> Result<Vec<RainbowAtom>, RainbowError> {
    let sig = cfg.check()?;
    let count = count_atoms(cfg)?;
    if count > MAX_ENUMERATED_ATOMS as u128 {
        return Err(RainbowError::TooManyAtoms(count));
    }
    let mut atoms = Vec::new();
    for pattern in PATTERNS {
        let m = pattern.iter().max().unwrap() + 1;
        for g in edge_colourings(&sig, m) {
            let units = yellow_units(&yellow_slots(&g), cfg.mode);
            let choices: Vec<Vec<Yellow>> = units
                .iter()
                .map(|(_, req)| shades_for(&cfg.palette, req))
                .collect();
            let mut pick = vec![0usize; units.len()];
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            loop {
                let mut h = g.clone();
                for (u, (ts, _)) in units.iter().enumerate() {
                    for t in ts {
                        h.set_yellow(t.clone(), choices[u][pick[u]]);
                    }
                }
                debug_assert!(h.validate(&sig, cfg.mode).is_ok());
                atoms.push(RainbowAtom {
                    map: pattern.to_vec(),
                    graph: h,
                });
                // odometer over shade choices
                let mut p = 0;
                while p < pick.len() {
                    pick[p] += 1;
                    if pick[p] < choices[p].len() {
                        break;
                    }
                    pick[p] = 0;
                    p += 1;
                }
                if p == pick.len() {
                    break;
                }
            }
        }
    }
    atoms.sort_by_cached_key(RainbowAtom::sort_key);
    Ok(atoms)
}

/// Atoms and the atom structure built over them.
#[derive(Debug, Clone)]
pub struct RainbowStructure {
    pub config: RainbowConfig,
    pub atoms: Vec<RainbowAtom>,
    pub structure: AtomStructure,
    index: HashMap<RainbowAtom, usize>,
}

impl RainbowStructure {
    /// Index of the atom with this map and graph.
    pub fn find(&self, atom: &RainbowAtom) -> Option<usize> {
        self.index.get(atom).copied()
    }

    /// The atom of a graph on nodes `0..n` read through the identity map.
    pub fn atom_of_graph(&self, g: &ColouredGraph) -> Option<usize> {
        self.find(&RainbowAtom {
            map: (0..g.nodes()).collect(),
            graph: g.clone(),
        })
    }

    pub fn signature(&self) -> RainbowSignature {
        signature(self.config.n).expect("checked at build")
    }
}

/// `T_i` relates atoms agreeing away from `i`, `D_ij` holds atoms with
/// `a(i) = a(j)`, and every interior is the identity.
pub fn build_atom_structure(cfg: &RainbowConfig) -> Result<RainbowStructure, RainbowError> {
    let atoms = enumerate_atoms(cfg)?;
    let n = cfg.n;
    let width = atoms.len();
    let mut t = Vec::with_capacity(n);
    for i in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let mut keys: HashMap<(bool, Option<Colour>, Option<Yellow>, Option<Yellow>), u32> =
            HashMap::new();
        let class_of = atoms
            .iter()
            .map(|a| {
                let (j, k) = (rest[0], rest[1]);
                let (x, y) = (a.map[j], a.map[k]);
                let key = (
                    x == y,
                    a.graph.edge(x, y),
                    a.graph.yellow(&[x, y]),
                    a.graph.yellow(&[y, x]),
                );
                let next = keys.len() as u32;
                *keys.entry(key).or_insert(next)
            })
            .collect();
        t.push(Accessibility::equivalence(class_of));
    }
    let mut d = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            d.push(Element::from_indices(
                width,
                (0..width).filter(|&a| atoms[a].merged(i, j)),
            ));
        }
    }
    let structure = AtomStructure::new(n, width, t, d, vec![Interior::Identity; n])
        .map_err(|e| RainbowError::BadGraph(e.to_string()))?;
    let index = atoms
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, a)| (a, k))
        .collect();
    Ok(RainbowStructure {
        config: cfg.clone(),
        atoms,
        structure,
        index,
    })
}
