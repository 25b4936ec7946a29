//! Bounded search for representations as topological set algebras.

use serde::Serialize;

use super::{check_axiom_suite, BaoError, CheckMode, Element, FiniteAlgebra, Suite, Verdict};
use crate::setalg::{Space, TupleSet};
use crate::topology::{enumerate_topologies, FiniteTopology};

/// Largest carrier `try_represent` accepts.
pub const MAX_REPRESENT_CARRIER: usize = 1 << 8;
/// Largest base `try_represent` searches.
pub const MAX_REPRESENT_BASE: usize = 3;
/// Search nodes visited before giving up on one topology.
pub const NODE_BUDGET: u64 = 50_000_000;

/// An embedding into the full set algebra on `base^dim` with a topology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub base: usize,
    pub dim: usize,
    pub topology: FiniteTopology,
    /// Atoms of the carrier, as atom lists of the structure.
    pub carrier_atoms: Vec<Vec<usize>>,
    /// Tuple codes assigned to each carrier atom.
    pub atom_images: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum RepresentOutcome {
    Represented {
        representation: Representation,
        nodes: u64,
    },
    /// Fails an axiom every representable algebra satisfies.
    AxiomViolation {
        suite: Suite,
        id: String,
        instance: String,
    },
    /// Nothing found within the bounds. This is not a proof of
    /// non-representability.
    Exhausted {
        max_base: usize,
        topologies_tried: usize,
        nodes: u64,
        budget_hit: bool,
    },
}

struct Tables {
    k: usize,
    /// `below[x][a]`: carrier atom `a` lies below element `x`.
    below: Vec<Vec<bool>>,
    /// `int_below[i][x][a]`: atom `a` lies below `I_i x`.
    int_below: Vec<Vec<Vec<bool>>>,
    /// `cyl_below[i][a][b]`: atom `a` lies below `c_i b`.
    cyl_below: Vec<Vec<Vec<bool>>>,
    /// `diag_below[i][j][a]`: atom `a` lies below `d_ij`.
    diag_below: Vec<Vec<Vec<bool>>>,
}

impl Tables {
    fn new(alg: &FiniteAlgebra, elems: &[Element], atoms: &[Element]) -> Self {
        let n = alg.dim();
        let le = |a: &Element, x: &Element| a.is_subset(x);
        Tables {
            k: atoms.len(),
            below: elems
                .iter()
                .map(|x| atoms.iter().map(|a| le(a, x)).collect())
                .collect(),
            int_below: (0..n)
                .map(|i| {
                    elems
                        .iter()
                        .map(|x| {
                            let ix = alg.interior(i, x);
                            atoms.iter().map(|a| le(a, &ix)).collect()
                        })
                        .collect()
                })
                .collect(),
            cyl_below: (0..n)
                .map(|i| {
                    atoms
                        .iter()
                        .map(|a| atoms.iter().map(|b| le(a, &alg.cyl(i, b))).collect())
                        .collect()
                })
                .collect(),
            diag_below: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let d = alg.diag(i, j);
                            atoms.iter().map(|a| le(a, &d)).collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

struct Search<'a> {
    space: &'a Space,
    topology: &'a FiniteTopology,
    tables: &'a Tables,
    lab: Vec<usize>,
    nodes: u64,
    budget_hit: bool,
}

impl Search<'_> {
    fn diag_ok(&self, c: usize, a: usize) -> bool {
        let n = self.space.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let equal = self.space.coord(c, i) == self.space.coord(c, j);
                self.tables.diag_below[i][j][a] == equal
            })
        })
    }

    /// Checks the `i`-fiber through `c`, all of whose tuples are labelled.
    fn fiber_ok(&self, c: usize, i: usize) -> bool {
        let sp = self.space;
        let u = sp.base();
        let fiber: Vec<usize> = (0..u).map(|b| sp.replace(c, i, b)).collect();
        let labels: Vec<usize> = fiber.iter().map(|&s| self.lab[s]).collect();
        let t = self.tables;
        for &s in &fiber {
            let a = self.lab[s];
            for b in 0..t.k {
                if t.cyl_below[i][a][b] != labels.contains(&b) {
                    return false;
                }
            }
        }
        for (x, below) in t.below.iter().enumerate() {
            let set = (0..u)
                .filter(|&b| below[labels[b]])
                .fold(0u64, |acc, b| acc | 1 << b);
            let int = self.topology.interior_unchecked(set);
            for (b, &s) in fiber.iter().enumerate() {
                if t.int_below[i][x][self.lab[s]] != (int >> b & 1 == 1) {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&mut self, c: usize) -> bool {
        if self.nodes >= NODE_BUDGET {
            self.budget_hit = true;
            return false;
        }
        self.nodes += 1;
        let sp = self.space;
        if c == sp.tuples() {
            let mut used = vec![false; self.tables.k];
            for &a in &self.lab {
                used[a] = true;
            }
            return used.into_iter().all(|x| x);
        }
        for a in 0..self.tables.k {
            if !self.diag_ok(c, a) {
                continue;
            }
            self.lab[c] = a;
            // fibers through c are complete once c is their last tuple
            let complete = (0..sp.dim())
                .filter(|&i| sp.coord(c, i) == sp.base() - 1)
                .all(|i| self.fiber_ok(c, i));
            if complete && self.extend(c + 1) {
                return true;
            }
            if self.budget_hit {
                return false;
            }
        }
        false
    }
}

fn verify(alg: &FiniteAlgebra, elems: &[Element], atoms: &[Element], rep: &Representation) -> bool {
    let space = match Space::topological(rep.dim, rep.topology.clone()) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let h = |x: &Element| -> TupleSet {
        let mut out = space.empty();
        for (a, img) in atoms.iter().zip(&rep.atom_images) {
            if a.is_subset(x) {
                for &c in img {
                    out.insert(c);
                }
            }
        }
        out
    };
    let mut images: Vec<TupleSet> = elems.iter().map(h).collect();
    let n = alg.dim();
    for (x, hx) in elems.iter().zip(&images) {
        if h(&x.complement()) != hx.complement() {
            return false;
        }
        for i in 0..n {
            if h(&alg.cyl(i, x)) != space.cyl(i, hx).unwrap()
                || h(&alg.interior(i, x)) != space.interior_op(i, hx, false).unwrap()
            {
                return false;
            }
            for j in 0..n {
                if h(&alg.diag(i, j)) != space.diag(i, j).unwrap() {
                    return false;
                }
            }
        }
    }
    images.sort();
    images.dedup();
    images.len() == elems.len()
}

/// Looks for an embedding into a full topological set algebra with base
/// size at most `max_base`, trying the discrete topology first. Algebras
/// failing the CA or TCA suite are rejected up front.
pub fn try_represent(alg: &FiniteAlgebra, max_base: usize) -> Result<RepresentOutcome, BaoError> {
    if max_base > MAX_REPRESENT_BASE {
        return Err(BaoError::TooLarge(format!(
            "base {max_base} > {MAX_REPRESENT_BASE}"
        )));
    }
    if alg.size_f64() > MAX_REPRESENT_CARRIER as f64 {
        return Err(BaoError::TooLarge(format!(
            "carrier of {} elements",
            alg.size_f64()
        )));
    }
    for suite in [Suite::Ca, Suite::Tca] {
        let report = check_axiom_suite(alg, suite, &CheckMode::Auto { seed: 0 })?;
        let failure = report.failures().next().map(|f| {
            let instance = match &f.verdict {
                Verdict::Fails { instance, .. } => instance.clone(),
                _ => String::new(),
            };
            (f.id.clone(), instance)
        });
        if let Some((id, instance)) = failure {
            return Ok(RepresentOutcome::AxiomViolation {
                suite,
                id,
                instance,
            });
        }
    }
    let elems = alg.elements()?;
    let atoms = alg.carrier_atoms();
    let tables = Tables::new(alg, &elems, &atoms);
    let mut nodes = 0;
    let mut tried = 0;
    let mut budget_hit = false;
    for u in 1..=max_base {
        let space = Space::new(alg.dim(), u)?;
        if space.tuples() < atoms.len() {
            continue;
        }
        let discrete = FiniteTopology::discrete(u)?;
        let mut tops = vec![discrete.clone()];
        tops.extend(
            enumerate_topologies(u)?
                .into_iter()
                .filter(|t| *t != discrete),
        );
        for topology in tops {
            tried += 1;
            let mut search = Search {
                space: &space,
                topology: &topology,
                tables: &tables,
                lab: vec![0; space.tuples()],
                nodes: 0,
                budget_hit: false,
            };
            let found = search.extend(0);
            nodes += search.nodes;
            budget_hit |= search.budget_hit;
            if found {
                let mut atom_images = vec![Vec::new(); atoms.len()];
                for (c, &a) in search.lab.iter().enumerate() {
                    atom_images[a].push(c);
                }
                let representation = Representation {
                    base: u,
                    dim: alg.dim(),
                    topology,
                    carrier_atoms: atoms.iter().map(Element::to_vec).collect(),
                    atom_images,
                };
                assert!(
                    verify(alg, &elems, &atoms, &representation),
                    "search produced a labelling that is not an embedding"
                );
                return Ok(RepresentOutcome::Represented {
                    representation,
                    nodes,
                });
            }
        }
    }
    Ok(RepresentOutcome::Exhausted {
        max_base,
        topologies_tried: tried,
        nodes,
        budget_hit,
    })
}
