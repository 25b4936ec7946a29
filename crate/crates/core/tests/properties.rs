//! Property tests for the invariants of each module.

use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use topocyl::bao::{
    check_axiom_suite, cm, nr, sg, Accessibility, AtomStructure, CheckMode, FiniteAlgebra,
    Interior, InteriorDump, Suite,
};
use topocyl::bits::BitSet;
use topocyl::games::{
    solve_bounded, validate_network, verify_certificate, verify_forall_script, GameError, GameMode,
    Player, ScriptConfig, SolveConfig,
};
use topocyl::modal::{
    eval_dynamic, eval_kripke, eval_topo, random_formula, DynamicModel, Formula, KripkeModel,
    TopoModel, Valuation,
};
use topocyl::points::{self, PointSet};
use topocyl::rainbow::{
    build_atom_structure, cone, is_valid_coloured_graph, signature, RainbowConfig,
    RainbowStructure, Yellow,
};
use topocyl::setalg::{chang_from_topology, Space, TupleSet};
use topocyl::topology::{alexandrov, coproduct, enumerate_topologies, FiniteTopology, Preorder};

fn topologies(size: usize) -> &'static [FiniteTopology] {
    static CACHE: OnceLock<Vec<Vec<FiniteTopology>>> = OnceLock::new();
    &CACHE.get_or_init(|| (0..=4).map(|s| enumerate_topologies(s).unwrap()).collect())[size]
}

fn rainbow() -> &'static RainbowStructure {
    static RS: OnceLock<RainbowStructure> = OnceLock::new();
    RS.get_or_init(|| build_atom_structure(&RainbowConfig::default_n3()).unwrap())
}

/// A topology on up to four points, chosen by index.
fn topology() -> impl Strategy<Value = FiniteTopology> {
    (0usize..=4, any::<prop::sample::Index>()).prop_map(|(size, i)| {
        let ts = topologies(size);
        ts[i.index(ts.len())].clone()
    })
}

/// Reflexive-transitive closure of a random relation on up to six points.
fn preorder() -> impl Strategy<Value = Preorder> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut r = vec![vec![false; n]; n];
            for x in 0..n {
                for y in 0..n {
                    r[x][y] = x == y || bits[x * n + y];
                }
            }
            for k in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        r[x][y] |= r[x][k] && r[k][y];
                    }
                }
            }
            let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y)));
            let pairs: Vec<_> = pairs.filter(|&(x, y)| r[x][y]).collect();
            Preorder::new(n, pairs).unwrap()
        })
    })
}

fn formula(max_depth: usize) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        random_formula(&mut rng, 3, max_depth, 10)
    })
}

fn valuation(size: usize, words: &[u64]) -> Valuation {
    words
        .iter()
        .enumerate()
        .map(|(a, &w)| (a, w & points::full(size)))
        .collect()
}

/// Replaces every `X` by its argument.
fn strip_next(phi: &Formula) -> Formula {
    match phi {
        Formula::Atom { index } => Formula::atom(*index),
        Formula::Not { arg } => Formula::not(strip_next(arg)),
        Formula::And { left, right } => Formula::and(strip_next(left), strip_next(right)),
        Formula::Or { left, right } => Formula::or(strip_next(left), strip_next(right)),
        Formula::Implies { left, right } => Formula::implies(strip_next(left), strip_next(right)),
        Formula::Iff { left, right } => Formula::iff(strip_next(left), strip_next(right)),
        Formula::Interior { arg } => Formula::interior(strip_next(arg)),
        Formula::Next { arg } => strip_next(arg),
    }
}

/// Inserts `X` above every interior operator.
fn add_next(phi: &Formula) -> Formula {
    match phi {
        Formula::Atom { index } => Formula::atom(*index),
        Formula::Not { arg } => Formula::not(add_next(arg)),
        Formula::And { left, right } => Formula::and(add_next(left), add_next(right)),
        Formula::Or { left, right } => Formula::or(add_next(left), add_next(right)),
        Formula::Implies { left, right } => Formula::implies(add_next(left), add_next(right)),
        Formula::Iff { left, right } => Formula::iff(add_next(left), add_next(right)),
        Formula::Interior { arg } => Formula::next(Formula::interior(add_next(arg))),
        Formula::Next { arg } => Formula::next(add_next(arg)),
    }
}

fn space_with(n: usize, t: &FiniteTopology) -> Space {
    Space::topological(n, t.clone()).unwrap()
}

fn tuple_set(space: &Space, seed: &[bool]) -> TupleSet {
    TupleSet::from_indices(
        space.tuples(),
        (0..space.tuples()).filter(|&c| seed[c % seed.len()] ^ (c % 3 == 0 && seed[0])),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn interior_is_deflationary_idempotent_and_meet_preserving(
        t in topology(), a in any::<u64>(), b in any::<u64>()
    ) {
        let full = t.base();
        let (a, b) = (a & full, b & full);
        let ia = t.interior(a).unwrap();
        prop_assert!(points::is_subset(ia, a));
        prop_assert_eq!(t.interior(ia).unwrap(), ia);
        prop_assert_eq!(t.interior(a & b).unwrap(), ia & t.interior(b).unwrap());
        prop_assert_eq!(t.closure(a).unwrap(), full & !t.interior(full & !a).unwrap());
    }

    #[test]
    fn preorder_round_trip(p in preorder()) {
        prop_assert_eq!(alexandrov(&p).specialization_preorder(), p);
    }

    #[test]
    fn topology_round_trip(t in topology()) {
        prop_assert_eq!(alexandrov(&t.specialization_preorder()), t);
    }

    #[test]
    fn coproduct_injections_are_continuous(a in topology(), b in topology()) {
        let c = coproduct(&[a.clone(), b.clone()]).unwrap();
        for &o in c.opens() {
            prop_assert!(a.is_open(o & a.base()));
            prop_assert!(b.is_open((o >> a.size()) & b.base()));
        }
    }

    #[test]
    fn kripke_and_alexandrov_semantics_agree(
        p in preorder(), phi in formula(3), words in prop::collection::vec(any::<u64>(), 3)
    ) {
        let v = valuation(p.size(), &words);
        let km = KripkeModel::new(p.clone(), v.clone()).unwrap();
        let tm = TopoModel::new(alexandrov(&p), v).unwrap();
        prop_assert_eq!(eval_kripke(&km, &phi), eval_topo(&tm, &phi));
    }

    #[test]
    fn s4_axioms_hold_as_set_identities(
        size in 0usize..=3, i in any::<prop::sample::Index>(),
        phi in formula(2), psi in formula(2), words in prop::collection::vec(any::<u64>(), 3)
    ) {
        let ts = topologies(size);
        let t = ts[i.index(ts.len())].clone();
        let full = points::full(size);
        let m = TopoModel::new(t, valuation(size, &words)).unwrap();
        let e = |f: &Formula| eval_topo(&m, f);
        let ip = Formula::interior(phi.clone());
        // K on meets, T, 4
        prop_assert_eq!(
            e(&Formula::interior(Formula::and(phi.clone(), psi.clone()))),
            e(&ip) & e(&Formula::interior(psi.clone()))
        );
        prop_assert!(points::is_subset(e(&ip), e(&phi)));
        prop_assert_eq!(e(&Formula::interior(ip.clone())), e(&ip));
        // necessitation on a validity
        let taut = Formula::or(phi.clone(), Formula::not(phi.clone()));
        prop_assert_eq!(e(&taut), full);
        prop_assert_eq!(e(&Formula::interior(taut)), full);
    }

    #[test]
    fn identity_dynamics_is_static(
        t in topology(), phi in formula(3), words in prop::collection::vec(any::<u64>(), 3)
    ) {
        let v = valuation(t.size(), &words);
        let id: Vec<usize> = (0..t.size()).collect();
        let dm = DynamicModel::new(t.clone(), id, v.clone()).unwrap();
        let tm = TopoModel::new(t, v).unwrap();
        let with_next = add_next(&phi);
        prop_assert_eq!(eval_dynamic(&dm, &with_next), eval_topo(&tm, &strip_next(&with_next)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn set_algebra_operations(
        n in 2usize..=3, u in 2usize..=3, i in any::<prop::sample::Index>(),
        seed in prop::collection::vec(any::<bool>(), 1..40), k in 0usize..3, j in 0usize..3
    ) {
        let ts = topologies(u);
        let t = &ts[i.index(ts.len())];
        let space = space_with(n, t);
        let (k, j) = (k % n, j % n);
        let x = tuple_set(&space, &seed);
        let ix = space.interior_op(k, &x, false).unwrap();
        prop_assert!(ix.is_subset(&x));
        let boxed = space.clone().with_chang(chang_from_topology(t)).unwrap().box_op(k, &x).unwrap();
        prop_assert_eq!(&boxed, &ix);
        if k != j {
            let s = space.subst(&space.replacement(k, j), &x).unwrap();
            let term = space.cyl(k, &space.diag(k, j).unwrap().intersection(&x)).unwrap();
            prop_assert_eq!(s, term);
        }
        // cylindrifiers: extensive, additive, idempotent
        let y = tuple_set(&space, &seed.iter().map(|b| !b).collect::<Vec<_>>());
        let cx = space.cyl(k, &x).unwrap();
        prop_assert!(x.is_subset(&cx));
        prop_assert_eq!(space.cyl(k, &cx).unwrap(), cx.clone());
        prop_assert_eq!(space.cyl(k, &x.union(&y)).unwrap(), cx.union(&space.cyl(k, &y).unwrap()));
    }

    #[test]
    fn complex_algebra_matches_the_set_algebra(
        n in 2usize..=3, i in any::<prop::sample::Index>(),
        seed in prop::collection::vec(any::<bool>(), 1..30), k in 0usize..3, j in 0usize..3
    ) {
        let ts = topologies(2);
        let space = space_with(n, &ts[i.index(ts.len())]);
        let s = AtomStructure::of_space(&space).unwrap();
        let dump = s.dump();
        let relational = dump.interior.iter().all(|d| !matches!(d, InteriorDump::Name(n) if n.starts_with("custom:")));
        let back = AtomStructure::from_dump(&dump);
        prop_assert_eq!(back.is_ok(), relational);
        let alg = cm(s);
        let (k, j) = (k % n, j % n);
        let x = tuple_set(&space, &seed);
        prop_assert_eq!(alg.cyl(k, &x), space.cyl(k, &x).unwrap());
        prop_assert_eq!(alg.diag(k, j), space.diag(k, j).unwrap());
        prop_assert_eq!(alg.interior(k, &x), space.interior_op(k, &x, false).unwrap());
        if let Ok(back) = back {
            let balg = cm(back);
            prop_assert_eq!(balg.cyl(k, &x), alg.cyl(k, &x));
            prop_assert_eq!(balg.interior(k, &x), alg.interior(k, &x));
        }
    }
}

fn full22(t: usize) -> FiniteAlgebra {
    cm(AtomStructure::of_space(&space_with(2, &topologies(2)[t])).unwrap())
}

fn carrier(alg: &FiniteAlgebra) -> Vec<BitSet> {
    let mut v = alg.elements().unwrap();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sg_is_monotone_idempotent_and_sound(
        t in 0usize..4, small in prop::collection::vec(0u64..16, 0..3), extra in 0u64..16
    ) {
        let alg = full22(t);
        let el = |w: u64| BitSet::from_word(4, w);
        let g: Vec<BitSet> = small.iter().map(|&w| el(w)).collect();
        let mut h = g.clone();
        h.push(el(extra));
        let sg_g = sg(&alg, &g).unwrap();
        let sg_h = sg(&alg, &h).unwrap();
        let cg = carrier(&sg_g);
        let ch = carrier(&sg_h);
        prop_assert!(cg.iter().all(|x| ch.contains(x)));
        prop_assert_eq!(carrier(&sg(&sg_g, &cg).unwrap()), cg);
        for suite in [Suite::Ca, Suite::Tca] {
            let rep = check_axiom_suite(&sg_g, suite, &CheckMode::Auto { seed: 1 }).unwrap();
            prop_assert!(rep.all_hold);
        }
    }

    #[test]
    fn rainbow_atoms_are_valid_graphs(i in any::<prop::sample::Index>()) {
        let rs = rainbow();
        let a = &rs.atoms[i.index(rs.atoms.len())];
        prop_assert!(is_valid_coloured_graph(&a.graph, &rs.signature(), rs.config.mode).valid);
        prop_assert_eq!(rs.find(a), Some(i.index(rs.atoms.len())));
    }

    #[test]
    fn rainbow_accessibility_is_an_equivalence(
        l in 0usize..3,
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
    ) {
        let rs = rainbow();
        let t = rs.structure.accessibility(l);
        let n = rs.atoms.len();
        let (a, b) = (a.index(n), b.index(n));
        prop_assert!(t.related(a, a));
        prop_assert_eq!(t.related(a, b), t.related(b, a));
        for c in t.successors(b).ones() {
            if t.related(a, b) {
                prop_assert!(t.related(a, c));
            }
        }
    }

    #[test]
    fn cone_clause(tint in 1usize..=4, shade in 0u64..32) {
        let sig = signature(3).unwrap();
        let g = cone(&sig, tint, Yellow(shade));
        let valid = is_valid_coloured_graph(&g, &sig, Default::default()).valid;
        prop_assert_eq!(valid, Yellow(shade).contains(tint));
    }
}

/// Two atoms in dimension 2 where `T_0` is the identity: ∀ opens with the
/// off-diagonal atom and ∃ has no answer.
fn rigid() -> AtomStructure {
    AtomStructure::new(
        2,
        2,
        vec![
            Accessibility::equivalence(vec![0, 1]),
            Accessibility::equivalence(vec![0, 0]),
        ],
        vec![
            BitSet::full(2),
            BitSet::from_indices(2, [0]),
            BitSet::from_indices(2, [0]),
            BitSet::full(2),
        ],
        vec![Interior::Identity; 2],
    )
    .unwrap()
}

fn game_fixture(which: usize) -> AtomStructure {
    match which {
        0 => AtomStructure::of_space(&Space::new(2, 2).unwrap()).unwrap(),
        1 => AtomStructure::of_space(&space_with(2, &topologies(2)[1])).unwrap(),
        2 => AtomStructure::of_space(&Space::new(2, 3).unwrap()).unwrap(),
        _ => rigid(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn games_are_monotone_valid_and_deterministic(
        which in 0usize..4, m in 3usize..=4, r in 0usize..=2, g in any::<bool>()
    ) {
        let s = game_fixture(which);
        let mode = if g { GameMode::G } else { GameMode::F };
        let cfg = SolveConfig { nodes: m, rounds: r, mode, budget: 1_000_000 };
        let sol = solve_bounded(&s, &cfg).unwrap();
        verify_certificate(&s, &sol.certificate).map_err(TestCaseError::fail)?;
        for p in &sol.certificate.positions {
            for net in &p.networks {
                prop_assert!(validate_network(&s, net).is_ok());
            }
        }
        prop_assert_eq!(&solve_bounded(&s, &cfg).unwrap().certificate, &sol.certificate);
        // more nodes or more rounds only help the universal player
        if sol.winner == Player::Exists {
            if m > 3 {
                let fewer_nodes = SolveConfig { nodes: m - 1, ..cfg.clone() };
                prop_assert_eq!(solve_bounded(&s, &fewer_nodes).unwrap().winner, Player::Exists);
            }
            if r > 0 {
                let fewer_rounds = SolveConfig { rounds: r - 1, ..cfg.clone() };
                prop_assert_eq!(solve_bounded(&s, &fewer_rounds).unwrap().winner, Player::Exists);
            }
        } else {
            let more_nodes = SolveConfig { nodes: m + 1, ..cfg.clone() };
            prop_assert_eq!(solve_bounded(&s, &more_nodes).unwrap().winner, Player::Forall);
            let more_rounds = SolveConfig { rounds: r + 1, ..cfg.clone() };
            prop_assert_eq!(solve_bounded(&s, &more_rounds).unwrap().winner, Player::Forall);
        }
        prop_assert_eq!(sol.winner == Player::Forall, which == 3);
    }
}

#[test]
fn solver_never_contradicts_the_script_on_rainbow() {
    let rs = rainbow();
    verify_forall_script(rs, &ScriptConfig::default_n3()).unwrap();
    let cfg = SolveConfig {
        nodes: 6,
        rounds: 3,
        mode: GameMode::F,
        budget: 2,
    };
    match solve_bounded(&rs.structure, &cfg) {
        Ok(sol) => assert_eq!(sol.winner, Player::Forall),
        Err(e) => assert!(matches!(e, GameError::BudgetExceeded { .. })),
    }
}

#[test]
fn neat_reduct_recovers_the_lifted_algebra() {
    for t in topologies(2) {
        let low = space_with(2, t);
        let high = space_with(3, t);
        let reduct = nr(2, &cm(AtomStructure::of_space(&high).unwrap())).unwrap();
        let mut lifted: Vec<BitSet> = (0..16u64)
            .map(|w| low.neat_lift(&TupleSet::from_word(4, w), 1).unwrap().1)
            .collect();
        lifted.sort();
        assert_eq!(carrier(&reduct), lifted);
        for w in 0..16u64 {
            let x = TupleSet::from_word(4, w);
            let lx = low.neat_lift(&x, 1).unwrap().1;
            for i in 0..2 {
                let via_low = low
                    .neat_lift(&low.interior_op(i, &x, false).unwrap(), 1)
                    .unwrap()
                    .1;
                assert_eq!(reduct.interior(i, &lx), via_low);
                let via_low = low.neat_lift(&low.cyl(i, &x).unwrap(), 1).unwrap().1;
                assert_eq!(reduct.cyl(i, &lx), via_low);
            }
        }
    }
}

#[test]
fn point_sets_round_trip() {
    for set in 0..256u64 {
        let v = points::to_vec(set);
        assert_eq!(points::from_slice(&v), set as PointSet);
    }
}
