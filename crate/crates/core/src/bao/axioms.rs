//! Axiom suites for cylindric, topological cylindric and Chang algebras.
//!
//! Chang boxes are read as the algebra's interior operators. Variables
//! `v0, v1, v2` play the roles of `p, q, r` (or `x, y, z`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::term::{check_guarded, Counterexample};
use super::{BaoError, CheckMode, Equation, FiniteAlgebra, Guard, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "CA")]
    Ca,
    #[serde(rename = "TCA")]
    Tca,
    Chang,
    S4Chang,
    S5Chang,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "ca" => Some(Suite::Ca),
            "tca" => Some(Suite::Tca),
            "chang" => Some(Suite::Chang),
            "s4chang" | "s4-chang" => Some(Suite::S4Chang),
            "s5chang" | "s5-chang" => Some(Suite::S5Chang),
            _ => None,
        }
    }
}

/// One instance of an axiom schema at fixed indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub label: String,
    pub equation: Equation,
    pub guards: Vec<Guard>,
}

/// An axiom schema instantiated at a dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub id: String,
    pub text: &'static str,
    pub instances: Vec<Instance>,
}

fn v(k: usize) -> Term {
    Term::var(k)
}

fn plain(label: String, equation: Equation) -> Instance {
    Instance {
        label,
        equation,
        guards: vec![],
    }
}

fn per_index(n: usize, f: impl Fn(usize) -> Equation) -> Vec<Instance> {
    (0..n).map(|i| plain(format!("i={i}"), f(i))).collect()
}

fn per_distinct_pair(n: usize, f: impl Fn(usize, usize) -> Instance) -> Vec<Instance> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            out.push(f(i, j));
        }
    }
    out
}

fn axiom(id: &str, text: &'static str, instances: Vec<Instance>) -> Axiom {
    Axiom {
        id: id.to_string(),
        text,
        instances,
    }
}

fn ca_axioms(n: usize) -> Vec<Axiom> {
    let boolean = [
        "v0 * -v0 = 0",
        "v0 + -v0 = 1",
        "v0 * (v0 + v1) = v0",
        "v0 + v1 * v2 = (v0 + v1) * (v0 + v2)",
    ]
    .iter()
    .enumerate()
    .map(|(k, e)| plain(format!("law {}", k + 1), Equation::parse(e).unwrap()))
    .collect();
    let mut commute = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            commute.push(plain(
                format!("i={i},j={j}"),
                Equation::eq(
                    Term::cyl(i, Term::cyl(j, v(0))),
                    Term::cyl(j, Term::cyl(i, v(0))),
                ),
            ));
        }
    }
    let mut d7 = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in (0..n).filter(|&k| k != i && k != j) {
                d7.push(plain(
                    format!("i={i},j={j},k={k}"),
                    Equation::eq(
                        Term::diag(i, j),
                        Term::cyl(k, Term::meet(Term::diag(i, k), Term::diag(j, k))),
                    ),
                ));
            }
        }
    }
    vec![
        axiom("CA-1", "Boolean algebra laws", boolean),
        axiom(
            "CA-2",
            "c_i 0 = 0",
            per_index(n, |i| Equation::eq(Term::cyl(i, Term::Zero), Term::Zero)),
        ),
        axiom(
            "CA-3",
            "x <= c_i x",
            per_index(n, |i| Equation::leq(v(0), Term::cyl(i, v(0)))),
        ),
        axiom(
            "CA-4",
            "c_i(x * c_i y) = c_i x * c_i y",
            per_index(n, |i| {
                Equation::eq(
                    Term::cyl(i, Term::meet(v(0), Term::cyl(i, v(1)))),
                    Term::meet(Term::cyl(i, v(0)), Term::cyl(i, v(1))),
                )
            }),
        ),
        axiom("CA-5", "c_i c_j x = c_j c_i x", commute),
        axiom(
            "CA-6",
            "d_ii = 1",
            per_index(n, |i| Equation::eq(Term::diag(i, i), Term::One)),
        ),
        axiom("CA-7", "d_ij = c_k(d_ik * d_jk) for k != i, j", d7),
        axiom(
            "CA-8",
            "c_i(d_ij * x) * c_i(d_ij * -x) = 0 for i != j",
            per_distinct_pair(n, |i, j| {
                plain(
                    format!("i={i},j={j}"),
                    Equation::eq(
                        Term::meet(
                            Term::cyl(i, Term::meet(Term::diag(i, j), v(0))),
                            Term::cyl(i, Term::meet(Term::diag(i, j), Term::compl(v(0)))),
                        ),
                        Term::Zero,
                    ),
                )
            }),
        ),
    ]
}

fn oplus_axiom(id: &str, text: &'static str, n: usize) -> Axiom {
    axiom(
        id,
        text,
        per_index(n, |i| {
            Equation::leq(
                Term::q(i, Term::oplus(v(0), v(1))),
                Term::q(i, Term::oplus(Term::int(i, v(0)), Term::int(i, v(1)))),
            )
        }),
    )
}

/// `c_k I_i p = I_i p` for `k != i`, guarded by `c_k p = p`.
fn cyl_fixes_axiom(id: &str, text: &'static str, n: usize) -> Axiom {
    axiom(
        id,
        text,
        per_distinct_pair(n, |i, k| Instance {
            label: format!("i={i},k={k}"),
            equation: Equation::eq(Term::cyl(k, Term::int(i, v(0))), Term::int(i, v(0))),
            guards: vec![Guard { index: k, var: 0 }],
        }),
    )
}

/// `s_i^j I_i p = I_j s_i^j p` for `i != j`, guarded by `c_j p = p`, where
/// `s_i^j x = c_i(d_ij * x)` moves the value of `j` into `i`.
fn subst_axiom(id: &str, text: &'static str, n: usize) -> Axiom {
    axiom(
        id,
        text,
        per_distinct_pair(n, |i, j| Instance {
            label: format!("i={i},j={j}"),
            equation: Equation::eq(
                Term::subst(i, j, Term::int(i, v(0))),
                Term::int(j, Term::subst(i, j, v(0))),
            ),
            guards: vec![Guard { index: j, var: 0 }],
        }),
    )
}

fn unit_axiom(id: &str, text: &'static str, n: usize) -> Axiom {
    axiom(
        id,
        text,
        per_index(n, |i| Equation::eq(Term::int(i, Term::One), Term::One)),
    )
}

fn deflation_axiom(id: &str, text: &'static str, n: usize) -> Axiom {
    axiom(
        id,
        text,
        per_index(n, |i| Equation::leq(Term::int(i, v(0)), v(0))),
    )
}

fn meet_axiom(id: &str, text: &'static str, n: usize) -> Axiom {
    axiom(
        id,
        text,
        per_index(n, |i| {
            Equation::eq(
                Term::meet(Term::int(i, v(0)), Term::int(i, v(1))),
                Term::int(i, Term::meet(v(0), v(1))),
            )
        }),
    )
}

fn four_axiom(id: &str, text: &'static str, n: usize) -> Axiom {
    axiom(
        id,
        text,
        per_index(n, |i| {
            Equation::leq(Term::int(i, v(0)), Term::int(i, Term::int(i, v(0))))
        }),
    )
}

/// The axioms of `suite` at dimension `n`.
pub fn suite_axioms(suite: Suite, n: usize) -> Vec<Axiom> {
    match suite {
        Suite::Ca => ca_axioms(n),
        Suite::Tca => vec![
            oplus_axiom("TCA-1", "q_i(p ^ q) <= q_i(I_i p ^ I_i q)", n),
            deflation_axiom("TCA-2", "I_i p <= p", n),
            meet_axiom("TCA-3", "I_i p * I_i q = I_i(p * q)", n),
            four_axiom("TCA-4", "I_i p <= I_i I_i p", n),
            unit_axiom("TCA-5", "I_i 1 = 1", n),
            cyl_fixes_axiom("TCA-6", "c_k I_i p = I_i p for k != i, c_k p = p", n),
            subst_axiom("TCA-7", "s_i^j I_i p = I_j s_i^j p for c_j p = p", n),
        ],
        Suite::Chang | Suite::S4Chang | Suite::S5Chang => {
            let mut out = vec![
                oplus_axiom("Chang-1", "q_i(p ^ q) <= q_i(B_i p ^ B_i q)", n),
                subst_axiom("Chang-2", "s_i^j B_i p = B_j s_i^j p for c_j p = p", n),
            ];
            if suite != Suite::Chang {
                out.extend([
                    unit_axiom("S4-1", "B_i 1 = 1", n),
                    deflation_axiom("S4-2", "B_i p <= p", n),
                    meet_axiom("S4-3", "B_i p * B_i q = B_i(p * q)", n),
                    cyl_fixes_axiom("S4-4", "c_k B_i p = B_i p for k != i, c_k p = p", n),
                    four_axiom("S4-5", "B_i p <= B_i B_i p", n),
                ]);
            }
            if suite == Suite::S5Chang {
                out.push(axiom(
                    "S5-6",
                    "-B_i -p <= B_i -B_i -p",
                    per_index(n, |i| {
                        let dia = Term::compl(Term::int(i, Term::compl(v(0))));
                        Equation::leq(dia.clone(), Term::int(i, dia))
                    }),
                ));
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    /// No instance had an environment satisfying its guards.
    Vacuous,
    Fails {
        instance: String,
        counterexample: Counterexample,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    /// Position in the suite, from 1.
    pub item: usize,
    pub id: String,
    pub text: String,
    pub instances: usize,
    pub vacuous_instances: usize,
    pub envs_checked: u64,
    pub exhaustive: bool,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub suite: Suite,
    pub dim: usize,
    pub mode: CheckMode,
    /// No axiom fails.
    pub all_hold: bool,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn failures(&self) -> impl Iterator<Item = &AxiomResult> {
        self.results
            .iter()
            .filter(|r| matches!(r.verdict, Verdict::Fails { .. }))
    }
}

/// Runs every axiom of `suite` on `alg`. Guarded instances only see
/// environments that satisfy their guards; sampled modes draw guarded
/// variables from the image of the relevant cylindrifier.
pub fn check_axiom_suite(
    alg: &FiniteAlgebra,
    suite: Suite,
    mode: &CheckMode,
) -> Result<AxiomReport, BaoError> {
    let axioms = suite_axioms(suite, alg.dim());
    let jobs: Vec<(usize, &Instance)> = axioms
        .iter()
        .enumerate()
        .flat_map(|(a, ax)| ax.instances.iter().map(move |ins| (a, ins)))
        .collect();
    let verdicts = jobs
        .par_iter()
        .enumerate()
        .map(|(k, (_, ins))| {
            let m = match *mode {
                CheckMode::Sampled { count, seed } => CheckMode::Sampled {
                    count,
                    seed: seed.wrapping_add(k as u64),
                },
                other => other,
            };
            check_guarded(alg, &ins.equation, &ins.guards, &m)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut results: Vec<AxiomResult> = axioms
        .iter()
        .enumerate()
        .map(|(a, ax)| AxiomResult {
            item: a + 1,
            id: ax.id.clone(),
            text: ax.text.to_string(),
            instances: ax.instances.len(),
            vacuous_instances: 0,
            envs_checked: 0,
            exhaustive: true,
            verdict: Verdict::Vacuous,
        })
        .collect();
    for ((a, ins), v) in jobs.iter().zip(verdicts) {
        let r = &mut results[*a];
        r.envs_checked += v.envs_checked;
        r.exhaustive &= v.exhaustive;
        if v.vacuous {
            r.vacuous_instances += 1;
            continue;
        }
        match (&r.verdict, v.counterexample) {
            (Verdict::Fails { .. }, _) => {}
            (_, Some(cx)) => {
                r.verdict = Verdict::Fails {
                    instance: format!("{}: {}", ins.label, ins.equation),
                    counterexample: cx,
                }
            }
            (_, None) => r.verdict = Verdict::Holds,
        }
    }
    Ok(AxiomReport {
        suite,
        dim: alg.dim(),
        mode: *mode,
        all_hold: results
            .iter()
            .all(|r| !matches!(r.verdict, Verdict::Fails { .. })),
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::{cm, AtomStructure, Element, Interior};
    use crate::setalg::Space;
    use crate::topology::{enumerate_topologies, FiniteTopology};
    use std::sync::Arc;

    fn set_algebra(n: usize, t: FiniteTopology) -> FiniteAlgebra {
        cm(AtomStructure::of_space(&Space::topological(n, t).unwrap()).unwrap())
    }

    fn failed_ids(r: &AxiomReport) -> Vec<String> {
        r.failures().map(|f| f.id.clone()).collect()
    }

    #[test]
    fn set_algebras_are_sound() {
        for (n, u) in [(2, 2), (1, 3), (3, 2)] {
            for t in enumerate_topologies(u).unwrap() {
                let alg = set_algebra(n, t);
                for suite in [Suite::Ca, Suite::Tca, Suite::S4Chang] {
                    let r = check_axiom_suite(&alg, suite, &CheckMode::Auto { seed: 5 }).unwrap();
                    assert!(r.all_hold, "{suite:?} n={n} u={u}: {:?}", failed_ids(&r));
                }
            }
        }
    }

    #[test]
    fn discrete_is_s5() {
        let alg = set_algebra(2, FiniteTopology::discrete(3).unwrap());
        let r = check_axiom_suite(&alg, Suite::S5Chang, &CheckMode::Exhaustive).unwrap();
        assert!(r.all_hold);
        assert_eq!(r.results.len(), 8);
        // Sierpinski space is not almost discrete and breaks the S5 item
        let sier = FiniteTopology::new(2, [0, 0b01, 0b11]).unwrap();
        let r = check_axiom_suite(
            &set_algebra(2, sier),
            Suite::S5Chang,
            &CheckMode::Exhaustive,
        )
        .unwrap();
        assert_eq!(failed_ids(&r), vec!["S5-6"]);
    }

    #[test]
    fn constant_zero_interior_fails_unit_axiom() {
        let s = AtomStructure::of_space(&Space::new(2, 2).unwrap())
            .unwrap()
            .with_interior(vec![
                Interior::Custom {
                    name: "zero".into(),
                    f: Arc::new(|x: &Element| Element::empty(x.width())),
                };
                2
            ])
            .unwrap();
        let r = check_axiom_suite(&cm(s), Suite::Tca, &CheckMode::Exhaustive).unwrap();
        let ids = failed_ids(&r);
        assert!(ids.contains(&"TCA-5".to_string()));
        assert!(!ids.contains(&"TCA-2".to_string()));
    }

    #[test]
    fn empty_accessibility_fails_ca3() {
        use crate::bao::Accessibility;
        let w = 2;
        let s = AtomStructure::new(
            1,
            w,
            vec![Accessibility::from_pairs(w, [])],
            vec![Element::full(w)],
            vec![Interior::Identity],
        )
        .unwrap();
        let r = check_axiom_suite(&cm(s), Suite::Ca, &CheckMode::Exhaustive).unwrap();
        assert!(failed_ids(&r).contains(&"CA-3".to_string()));
    }

    #[test]
    fn vacuity_is_reported() {
        // at n = 2 no k differs from both i and j, and at n = 1 no pair is distinct
        let alg = set_algebra(1, FiniteTopology::indiscrete(2).unwrap());
        let r = check_axiom_suite(&alg, Suite::Ca, &CheckMode::Exhaustive).unwrap();
        let by_id = |id: &str| r.results.iter().find(|x| x.id == id).unwrap().clone();
        assert_eq!(by_id("CA-7").verdict, Verdict::Vacuous);
        assert_eq!(by_id("CA-8").instances, 0);
        let r = check_axiom_suite(&alg, Suite::Tca, &CheckMode::Exhaustive).unwrap();
        assert_eq!(r.results[5].verdict, Verdict::Vacuous);
        assert!(r.all_hold);
    }

    /// The substitution axiom with the indices as printed, `s_j^i I_i p =
    /// I_j s_j^i p` with `s_j^i x = c_j(d_ji * x)`, fails on a set algebra.
    #[test]
    fn printed_index_order_of_subst_axiom_fails() {
        let alg = set_algebra(2, FiniteTopology::indiscrete(2).unwrap());
        let mut fails = false;
        for code in 0..16u64 {
            let p = Element::from_word(4, code);
            if alg.cyl(1, &p) != p {
                continue;
            }
            let (i, j) = (0, 1);
            let s = |x: &Element| alg.cyl(j, &alg.diag(j, i).intersection(x));
            let lhs = s(&alg.interior(i, &p));
            let rhs = alg.interior(j, &s(&p));
            fails |= lhs != rhs;
        }
        assert!(fails);
    }

    /// With `⊕` read as symmetric difference the first TCA axiom fails.
    #[test]
    fn symmetric_difference_reading_fails() {
        let alg = set_algebra(2, FiniteTopology::indiscrete(2).unwrap());
        let xor = |a: &Element, b: &Element| a.union(b).difference(&a.intersection(b));
        let q = |x: &Element| alg.cyl(0, &x.complement()).complement();
        let mut fails = false;
        for a in 0..16u64 {
            for b in 0..16u64 {
                let (p, r) = (Element::from_word(4, a), Element::from_word(4, b));
                let lhs = q(&xor(&p, &r));
                let rhs = q(&xor(&alg.interior(0, &p), &alg.interior(0, &r)));
                fails |= !lhs.is_subset(&rhs);
            }
        }
        assert!(fails);
    }
}
