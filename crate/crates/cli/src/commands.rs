//! Command handlers. Each returns an [`Outcome`]; `run` turns it into a
//! report and an exit status.

use std::collections::BTreeMap;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use topocyl::bao::{
    check_axiom_suite, check_equation, cm, nr, sg, try_represent, AxiomReport, CheckMode, Equation,
    FiniteAlgebra, Suite,
};
use topocyl::bits::BitSet;
use topocyl::games::{
    solve_bounded, verify_certificate, verify_forall_script, verify_script_tree, Certificate,
    GameError, GameMode, ScriptConfig, ScriptTree, SolveConfig,
};
use topocyl::modal::{
    eval_dynamic, eval_kripke, eval_topo, find_countermodel, kripke_alexandrov_sweep, DynamicModel,
    Formula, KripkeModel, SearchMode, SearchOptions, TopoModel, Valuation,
};
use topocyl::points;
use topocyl::rainbow::{
    build_atom_structure, count_atoms, enumerate_atoms, signature, RainbowConfig, YellowMode,
};
use topocyl::setalg::{nonadditive_witness, nontermdef_witness, Space, TupleSetJson};
use topocyl::topology::{
    alexandrov, enumerate_preorders, enumerate_topologies, FiniteTopology, Preorder, PreorderJson,
    TopologyJson,
};

use crate::config::ExperimentConfig;
use crate::report::{self, Outcome};
use crate::structure::{resolve, Resolved};
use crate::{
    BaoCmd, CheckArg, Cli, Command, GameCmd, GameModeArg, ModalCmd, ModeArg, PaletteArg,
    RainbowArgs, RainbowCmd, SetOp, SetalgCmd, TopoCmd,
};

/// Positions the solver may expand when no budget is given.
const DEFAULT_BUDGET: u64 = 5_000_000;

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let mut cfg = ExperimentConfig::load(&cli.common)?;
    let (name, outcome) = match &cli.command {
        Command::Topo(c) => topo(c),
        Command::Modal(c) => modal(c, &mut cfg),
        Command::Setalg(c) => setalg(c, &mut cfg),
        Command::Bao(c) => bao(c, &mut cfg),
        Command::Rainbow(c) => rainbow(c, &mut cfg),
        Command::Game(c) => game(c, &mut cfg),
    }?;
    if name == "game verify-transcript" && cfg.expect.is_none() {
        cfg.expect = Some("valid".into());
    }
    let doc = report::document(name, &cfg, &outcome)?;
    report::write(&doc, &cfg)?;
    Ok(match &cfg.expect {
        Some(e) if *e != outcome.verdict => {
            eprintln!(
                "verdict `{}` does not match expected `{e}`",
                outcome.verdict
            );
            ExitCode::from(1)
        }
        _ => ExitCode::SUCCESS,
    })
}

/// Parses JSON given inline or as `@path`.
fn json_arg<T: DeserializeOwned>(what: &str, arg: &str) -> Result<T> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).with_context(|| format!("parsing --{what}"))
}

fn parse_list(what: &str, arg: &str) -> Result<Vec<usize>> {
    arg.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .with_context(|| format!("parsing --{what}"))
        })
        .collect()
}

fn holds(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "fails"
    }
}

fn topo(c: &TopoCmd) -> Result<(&'static str, Outcome)> {
    Ok(match c {
        TopoCmd::Enum { size, list } => {
            let ts = enumerate_topologies(*size)?;
            let preorders = enumerate_preorders(*size)?.len();
            let mut result = json!({
                "size": size,
                "count": ts.len(),
                "preorders": preorders,
                "discrete": ts.iter().filter(|t| t.is_discrete()).count(),
                "almost_discrete": ts.iter().filter(|t| t.is_almost_discrete()).count(),
            });
            if *list {
                result["topologies"] = serde_json::to_value(&ts)?;
            }
            let out = Outcome::new(ts.len().to_string(), result, json!({ "size": size }));
            ("topo enum", out)
        }
        TopoCmd::Check { topology } => {
            let raw: TopologyJson = json_arg("topology", topology)?;
            let params = json!({ "topology": raw });
            let out = match FiniteTopology::try_from(raw) {
                Ok(t) => {
                    let p = t.specialization_preorder();
                    let result = json!({
                        "topology": t,
                        "discrete": t.is_discrete(),
                        "almost_discrete": t.is_almost_discrete(),
                        "specialization": PreorderJson::from(&p),
                        "alexandrov_round_trip": alexandrov(&p) == t,
                    });
                    Outcome::new("valid", result, params)
                }
                Err(e) => Outcome::new("invalid", json!({ "error": e.to_string() }), params),
            };
            ("topo check", out)
        }
    })
}

fn valuation(arg: &str) -> Result<Valuation> {
    let raw: BTreeMap<String, Vec<usize>> = json_arg("valuation", arg)?;
    raw.into_iter()
        .map(|(k, pts)| {
            let atom = k
                .trim_start_matches('p')
                .parse()
                .with_context(|| format!("atom `{k}`"))?;
            if pts.iter().any(|&p| p >= 64) {
                bail!("point out of range in atom `{k}`");
            }
            Ok((atom, points::from_slice(&pts)))
        })
        .collect()
}

fn modal(c: &ModalCmd, cfg: &mut ExperimentConfig) -> Result<(&'static str, Outcome)> {
    Ok(match c {
        ModalCmd::Eval {
            formula,
            topology,
            preorder,
            map,
            valuation: val,
        } => {
            let phi = Formula::parse(formula)?;
            let v = valuation(val)?;
            let (truth, size, kind) = match (topology, preorder) {
                (_, Some(p)) => {
                    let raw: PreorderJson = json_arg("preorder", p)?;
                    let p = Preorder::new(raw.size, raw.leq.iter().map(|&[x, y]| (x, y)))?;
                    let size = p.size();
                    (eval_kripke(&KripkeModel::new(p, v)?, &phi), size, "kripke")
                }
                (Some(t), None) => {
                    let t = FiniteTopology::try_from(json_arg::<TopologyJson>("topology", t)?)?;
                    let size = t.size();
                    match map {
                        Some(m) => {
                            let m: Vec<usize> = json_arg("map", m)?;
                            (
                                eval_dynamic(&DynamicModel::new(t, m, v)?, &phi),
                                size,
                                "dynamic",
                            )
                        }
                        None => (eval_topo(&TopoModel::new(t, v)?, &phi), size, "topo"),
                    }
                }
                (None, None) => bail!("give --topology or --preorder"),
            };
            let valid = truth == points::full(size);
            let result = json!({
                "model": kind,
                "truth": points::to_vec(truth),
                "valid": valid,
            });
            let params = json!({
                "formula": formula,
                "topology": topology,
                "preorder": preorder,
                "map": map,
                "valuation": val,
            });
            let verdict = if valid { "valid" } else { "not-valid" };
            ("modal eval", Outcome::new(verdict, result, params))
        }
        ModalCmd::Countermodel { formula, mode } => {
            let phi = Formula::parse(formula)?;
            let mode = match mode {
                ModeArg::Topo => SearchMode::Topo,
                ModeArg::Kripke => SearchMode::Kripke,
                ModeArg::Dynamic => SearchMode::Dynamic,
            };
            let max_size = *cfg.max_size.get_or_insert(mode.max_size());
            let opts = SearchOptions {
                seed: cfg.seed(),
                samples: *cfg.samples.get_or_insert(SearchOptions::default().samples),
            };
            let rep = find_countermodel(&phi, max_size, mode, &opts)?;
            let verdict = if rep.countermodel.is_some() {
                "refuted"
            } else {
                "no-countermodel"
            };
            let params = json!({ "formula": formula, "mode": mode });
            let out = Outcome::new(verdict, serde_json::to_value(&rep)?, params);
            ("modal countermodel", out)
        }
        ModalCmd::Equiv { depth, formulas } => {
            let max_size = *cfg.max_size.get_or_insert(4);
            let seed = *cfg.seed.get_or_insert(0);
            let rep = kripke_alexandrov_sweep(max_size, *depth, *formulas, seed)?;
            let verdict = if rep.equal { "equal" } else { "differ" };
            let params = json!({ "depth": depth, "formulas": formulas });
            let out = Outcome::new(verdict, serde_json::to_value(&rep)?, params);
            ("modal equiv", out)
        }
    })
}

/// Per-axiom verdicts keyed by axiom index.
fn suite_json(rep: &AxiomReport) -> Result<Value> {
    let by_item: BTreeMap<String, Value> = rep
        .results
        .iter()
        .map(|r| Ok((r.item.to_string(), serde_json::to_value(r)?)))
        .collect::<Result<_>>()?;
    Ok(json!({
        "all_hold": rep.all_hold,
        "mode": rep.mode,
        "axioms": by_item,
    }))
}

fn suites(arg: &str) -> Result<Vec<(String, Suite)>> {
    arg.split(',')
        .map(|s| {
            let s = s.trim();
            let suite = Suite::parse(s).ok_or_else(|| anyhow!("unknown suite `{s}`"))?;
            let key = serde_json::to_value(suite)?
                .as_str()
                .map(str::to_string)
                .expect("suites serialize as names");
            Ok((key, suite))
        })
        .collect()
}

/// Runs `suites` on `alg`, returning the report keyed by suite name and the
/// number of failing axioms.
fn run_suites(
    alg: &FiniteAlgebra,
    suites: &[(String, Suite)],
    mode: &CheckMode,
) -> Result<(Value, usize)> {
    let mut out = serde_json::Map::new();
    let mut failures = 0;
    for (key, suite) in suites {
        let rep = check_axiom_suite(alg, *suite, mode)?;
        failures += rep.failures().count();
        out.insert(key.clone(), suite_json(&rep)?);
    }
    Ok((Value::Object(out), failures))
}

fn check_mode(arg: CheckArg, cfg: &mut ExperimentConfig) -> CheckMode {
    let seed = *cfg.seed.get_or_insert(0);
    match arg {
        CheckArg::Auto => CheckMode::Auto { seed },
        CheckArg::Exhaustive => CheckMode::Exhaustive,
        CheckArg::Atoms => CheckMode::Atoms { seed },
        CheckArg::Sampled => CheckMode::Sampled {
            count: *cfg.samples.get_or_insert(10_000),
            seed,
        },
    }
}

fn setalg(c: &SetalgCmd, cfg: &mut ExperimentConfig) -> Result<(&'static str, Outcome)> {
    Ok(match c {
        SetalgCmd::Op { op, set, i, j, tau } => {
            let raw: TupleSetJson = json_arg("set", set)?;
            let (space, x) = raw.clone().into_parts()?;
            let y = match op {
                SetOp::Cyl => space.cyl(*i, &x)?,
                SetOp::Diag => space.diag(*i, *j)?,
                SetOp::Int => space.interior_op(*i, &x, false)?,
                SetOp::Cl => space.interior_op(*i, &x, true)?,
                SetOp::Box => space.box_op(*i, &x)?,
                SetOp::Subst => {
                    let tau: Vec<usize> = match tau {
                        Some(t) => json_arg("tau", t)?,
                        None => space.replacement(*i, *j),
                    };
                    space.subst(&tau, &x)?
                }
                SetOp::Dims => {
                    let dims = space.dimension_set(&x)?;
                    let params = json!({ "op": "dims", "set": raw });
                    let out = Outcome::new("ok", json!({ "dimension_set": dims }), params);
                    return Ok(("setalg op", out));
                }
            };
            let tuples: Vec<Vec<usize>> = y.ones().map(|c| space.decode(c)).collect();
            let result = json!({ "set": space.to_json(&y), "tuples": tuples });
            let params = json!({
                "op": format!("{op:?}").to_lowercase(),
                "set": raw,
                "i": i,
                "j": j,
                "tau": tau,
            });
            ("setalg op", Outcome::new("ok", result, params))
        }
        SetalgCmd::Axioms {
            dim,
            base,
            topology,
            suites: names,
        } => {
            let suites = suites(names)?;
            let ts = match topology {
                Some(t) => vec![FiniteTopology::try_from(json_arg::<TopologyJson>(
                    "topology", t,
                )?)?],
                None => enumerate_topologies(*base)?,
            };
            let mode = check_mode(CheckArg::Sampled, cfg);
            let mut per = Vec::new();
            let mut failures = 0;
            for (k, t) in ts.iter().enumerate() {
                let space = Space::topological(*dim, t.clone())?;
                let alg = cm(topocyl::bao::AtomStructure::of_space(&space)?);
                let (rep, f) = run_suites(&alg, &suites, &mode)?;
                failures += f;
                per.push(json!({ "index": k, "topology": t, "suites": rep }));
            }
            let result = json!({ "topologies": per, "failures": failures });
            let params = json!({
                "dim": dim,
                "base": base,
                "topology": topology,
                "suites": names,
            });
            (
                "setalg axioms",
                Outcome::new(holds(failures == 0), result, params),
            )
        }
        SetalgCmd::WitnessNonadditive => {
            let w = nonadditive_witness()?;
            let verdict = if w.additive {
                "additive"
            } else {
                "non-additive"
            };
            let out = Outcome::new(verdict, serde_json::to_value(&w)?, json!({}));
            ("setalg witness-nonadditive", out)
        }
        SetalgCmd::WitnessNontermdef => {
            let w = nontermdef_witness()?;
            let verdict = if w.cylindric_reducts_agree {
                "interiors-differ"
            } else {
                "reducts-differ"
            };
            let out = Outcome::new(verdict, serde_json::to_value(&w)?, json!({}));
            ("setalg witness-nontermdef", out)
        }
    })
}

fn elements_json(alg: &FiniteAlgebra) -> Result<Value> {
    let els = alg.elements()?;
    let listed: Vec<Vec<usize>> = if els.len() <= 64 {
        els.iter().map(BitSet::to_vec).collect()
    } else {
        Vec::new()
    };
    Ok(json!({ "dim": alg.dim(), "size": els.len(), "elements": listed }))
}

fn bao(c: &BaoCmd, cfg: &mut ExperimentConfig) -> Result<(&'static str, Outcome)> {
    Ok(match c {
        BaoCmd::Cm { structure, dump } => {
            let s = resolve(&structure.structure)?.into_atoms();
            let mut result = json!({
                "dim": s.dim(),
                "atoms": s.atoms(),
                "log2_size": s.atoms(),
            });
            if *dump {
                result["dump"] = serde_json::to_value(s.dump())?;
            }
            let params = json!({ "structure": structure.structure, "dump": dump });
            ("bao cm", Outcome::new("ok", result, params))
        }
        BaoCmd::Check {
            structure,
            equation,
            suite,
            check,
        } => {
            let alg = cm(resolve(&structure.structure)?.into_atoms());
            let mode = check_mode(*check, cfg);
            let params = json!({
                "structure": structure.structure,
                "equation": equation,
                "suite": suite,
                "check": format!("{check:?}").to_lowercase(),
            });
            let (ok, result) = match (equation, suite) {
                (Some(e), _) => {
                    let v = check_equation(&alg, &Equation::parse(e)?, &mode)?;
                    (v.holds, serde_json::to_value(&v)?)
                }
                (None, Some(names)) => {
                    let (rep, failures) = run_suites(&alg, &suites(names)?, &mode)?;
                    (failures == 0, rep)
                }
                (None, None) => bail!("give --equation or --suite"),
            };
            ("bao check", Outcome::new(holds(ok), result, params))
        }
        BaoCmd::Nr { structure, m } => {
            let alg = cm(resolve(&structure.structure)?.into_atoms());
            let reduct = nr(*m, &alg)?;
            let params = json!({ "structure": structure.structure, "m": m });
            (
                "bao nr",
                Outcome::new("ok", elements_json(&reduct)?, params),
            )
        }
        BaoCmd::Sg { structure, gens } => {
            let alg = cm(resolve(&structure.structure)?.into_atoms());
            let raw: Vec<Vec<usize>> = json_arg("gens", gens)?;
            let width = alg.width();
            if raw.iter().flatten().any(|&a| a >= width) {
                bail!("generator atom out of range (structure has {width} atoms)");
            }
            let gs: Vec<BitSet> = raw
                .iter()
                .map(|g| BitSet::from_indices(width, g.iter().copied()))
                .collect();
            let sub = sg(&alg, &gs)?;
            let params = json!({ "structure": structure.structure, "gens": raw });
            ("bao sg", Outcome::new("ok", elements_json(&sub)?, params))
        }
        BaoCmd::Represent { structure } => {
            let alg = cm(resolve(&structure.structure)?.into_atoms());
            let max_base = *cfg.max_size.get_or_insert(topocyl::bao::MAX_REPRESENT_BASE);
            let outcome = serde_json::to_value(try_represent(&alg, max_base)?)?;
            let verdict = outcome["outcome"]
                .as_str()
                .expect("outcome is tagged")
                .to_string();
            let params = json!({ "structure": structure.structure });
            ("bao represent", Outcome::new(verdict, outcome, params))
        }
    })
}

fn rainbow_config(a: &RainbowArgs) -> Result<RainbowConfig> {
    let sig = signature(a.n)?;
    Ok(RainbowConfig {
        n: a.n,
        palette: match a.palette {
            PaletteArg::Default => vec![sig.full_yellow()],
            PaletteArg::Full => sig.all_yellows(),
        },
        mode: if a.lenient {
            YellowMode::Lenient
        } else {
            YellowMode::Strict
        },
    })
}

fn rainbow(c: &RainbowCmd, cfg: &mut ExperimentConfig) -> Result<(&'static str, Outcome)> {
    Ok(match c {
        RainbowCmd::Atoms { rainbow, list } => {
            let rc = rainbow_config(rainbow)?;
            let count = count_atoms(&rc)?;
            let mut result = json!({ "count": count.to_string(), "config": rc });
            if *list {
                let sig = signature(rc.n)?;
                let atoms = enumerate_atoms(&rc)?;
                let all_valid = atoms
                    .iter()
                    .all(|a| a.graph.validate(&sig, rc.mode).is_ok());
                result["all_valid"] = json!(all_valid);
                result["atoms"] = Value::Array(atoms.iter().map(|a| a.to_json()).collect());
            }
            let params = json!({ "rainbow": rc, "list": list });
            (
                "rainbow atoms",
                Outcome::new(count.to_string(), result, params),
            )
        }
        RainbowCmd::Structure {
            rainbow,
            suites: names,
            check,
        } => {
            let rc = rainbow_config(rainbow)?;
            let rs = build_atom_structure(&rc)?;
            let alg = cm(rs.structure.clone());
            let mode = check_mode(*check, cfg);
            let (rep, failures) = run_suites(&alg, &suites(names)?, &mode)?;
            let result = json!({
                "atoms": rs.atoms.len(),
                "dim": rs.structure.dim(),
                "suites": rep,
                "failures": failures,
            });
            let params = json!({
                "rainbow": rc,
                "suites": names,
                "check": format!("{check:?}").to_lowercase(),
            });
            (
                "rainbow structure",
                Outcome::new(holds(failures == 0), result, params),
            )
        }
    })
}

fn game(c: &GameCmd, cfg: &mut ExperimentConfig) -> Result<(&'static str, Outcome)> {
    Ok(match c {
        GameCmd::Solve {
            structure,
            mode,
            budget,
        } => {
            let s = resolve(&structure.structure)?.into_atoms();
            let nodes = *cfg.nodes.get_or_insert(s.dim() + 3);
            let rounds = *cfg.rounds.get_or_insert(3);
            if let Some(b) = budget {
                cfg.budget = Some(*b);
            }
            let budget = *cfg.budget.get_or_insert(DEFAULT_BUDGET);
            let mode = match mode {
                GameModeArg::F => GameMode::F,
                GameModeArg::G => GameMode::G,
            };
            let sc = SolveConfig {
                nodes,
                rounds,
                mode,
                budget,
            };
            let params = json!({ "structure": structure.structure, "mode": mode });
            let out = match solve_bounded(&s, &sc) {
                Ok(sol) => {
                    let verdict = serde_json::to_value(sol.winner)?
                        .as_str()
                        .expect("players serialize as names")
                        .to_string();
                    Outcome::new(verdict, serde_json::to_value(&sol)?, params)
                }
                Err(GameError::BudgetExceeded { positions }) => {
                    let result = json!({
                        "winner": null,
                        "positions_searched": positions,
                        "certificate": null,
                    });
                    Outcome::new("inconclusive", result, params)
                }
                Err(e) => return Err(e.into()),
            };
            ("game solve", out)
        }
        GameCmd::Script { n, tints } => {
            if *n != 3 {
                bail!("the cone script is built for n = 3 only");
            }
            let tints = parse_list("tints", tints)?;
            let Resolved::Rainbow(rs) = resolve("rainbow:3")? else {
                unreachable!("rainbow descriptor")
            };
            let params = json!({ "structure": "rainbow:3", "n": n, "tints": tints });
            let out = match verify_forall_script(&rs, &ScriptConfig { tints }) {
                Ok(tree) => Outcome::new("forall-wins", json!({ "tree": tree }), params),
                Err(GameError::ScriptRefuted(reason)) => {
                    Outcome::new("refuted", json!({ "tree": null, "reason": reason }), params)
                }
                Err(e) => return Err(e.into()),
            };
            ("game script", out)
        }
        GameCmd::VerifyTranscript { input } => {
            let text = std::fs::read_to_string(input)
                .with_context(|| format!("reading {}", input.display()))?;
            let doc: Value = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", input.display()))?;
            let (checked, check) = verify_artifact(&doc)?;
            let verdict = if check.is_ok() { "valid" } else { "invalid" };
            let result = json!({
                "artifact": doc["command"],
                "checked": checked,
                "error": check.err(),
            });
            let params = json!({ "input": input });
            (
                "game verify-transcript",
                Outcome::new(verdict, result, params),
            )
        }
    })
}

/// Replays a game artifact. Inconclusive and refuted artifacts claim
/// nothing and are valid when they carry no strategy.
fn verify_artifact(doc: &Value) -> Result<(&'static str, Result<(), String>)> {
    let desc = doc["config"]["structure"]
        .as_str()
        .ok_or_else(|| anyhow!("artifact has no structure descriptor"))?;
    let result = &doc["result"];
    match doc["command"].as_str() {
        Some("game solve") => {
            let cert = &result["certificate"];
            if cert.is_null() {
                let ok = result["winner"].is_null() && doc["verdict"] == "inconclusive";
                let check = ok
                    .then_some(())
                    .ok_or_else(|| "winner claimed without certificate".into());
                return Ok(("nothing claimed", check));
            }
            let s = resolve(desc)?.into_atoms();
            let check = serde_json::from_value::<Certificate>(cert.clone())
                .map_err(|e| e.to_string())
                .and_then(|c| {
                    let claimed = serde_json::to_value(c.winner).map_err(|e| e.to_string())?;
                    if claimed != result["winner"] || claimed != doc["verdict"] {
                        return Err("certificate winner differs from the reported winner".into());
                    }
                    verify_certificate(&s, &c)
                });
            Ok(("certificate", check))
        }
        Some("game script") => {
            let tree = &result["tree"];
            if tree.is_null() {
                let ok = doc["verdict"] == "refuted";
                let check = ok
                    .then_some(())
                    .ok_or_else(|| "win claimed without a tree".into());
                return Ok(("nothing claimed", check));
            }
            let Resolved::Rainbow(rs) = resolve(desc)? else {
                bail!("script artifacts need a rainbow structure");
            };
            let check = serde_json::from_value::<ScriptTree>(tree.clone())
                .map_err(|e| e.to_string())
                .and_then(|t| {
                    if doc["verdict"] != "forall-wins" {
                        return Err("tree present but no win reported".into());
                    }
                    verify_script_tree(&rs, &t)
                });
            Ok(("script tree", check))
        }
        other => bail!("not a game artifact: {other:?}"),
    }
}
