//! Terms, equations and equation checking over finite algebras.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BaoError, Element, FiniteAlgebra};
use crate::sample;

/// Terms over variables `v_k` in the signature `+ · − 0 1 c_i d_ij I_i`
/// with the derived operations `s_i^j`, `q_i` and `⊕`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Term {
    Var {
        index: usize,
    },
    Zero,
    One,
    Join {
        left: Box<Term>,
        right: Box<Term>,
    },
    Meet {
        left: Box<Term>,
        right: Box<Term>,
    },
    Compl {
        arg: Box<Term>,
    },
    Cyl {
        i: usize,
        arg: Box<Term>,
    },
    Diag {
        i: usize,
        j: usize,
    },
    #[serde(rename = "I")]
    Int {
        i: usize,
        arg: Box<Term>,
    },
    /// `s_i^j x = c_i(d_ij · x)`; the identity when `i = j`.
    Subst {
        i: usize,
        j: usize,
        arg: Box<Term>,
    },
    /// `q_i x = −c_i−x`.
    Q {
        i: usize,
        arg: Box<Term>,
    },
    /// `a ⊕ b = (−a + b) · (−b + a)`.
    Oplus {
        left: Box<Term>,
        right: Box<Term>,
    },
}

impl Term {
    pub fn var(index: usize) -> Self {
        Term::Var { index }
    }

    pub fn join(left: Term, right: Term) -> Self {
        Term::Join {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn meet(left: Term, right: Term) -> Self {
        Term::Meet {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn compl(arg: Term) -> Self {
        Term::Compl { arg: Box::new(arg) }
    }

    pub fn cyl(i: usize, arg: Term) -> Self {
        Term::Cyl {
            i,
            arg: Box::new(arg),
        }
    }

    pub fn diag(i: usize, j: usize) -> Self {
        Term::Diag { i, j }
    }

    pub fn int(i: usize, arg: Term) -> Self {
        Term::Int {
            i,
            arg: Box::new(arg),
        }
    }

    pub fn subst(i: usize, j: usize, arg: Term) -> Self {
        Term::Subst {
            i,
            j,
            arg: Box::new(arg),
        }
    }

    pub fn q(i: usize, arg: Term) -> Self {
        Term::Q {
            i,
            arg: Box::new(arg),
        }
    }

    pub fn oplus(left: Term, right: Term) -> Self {
        Term::Oplus {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var { .. } | Term::Zero | Term::One | Term::Diag { .. } => vec![],
            Term::Compl { arg }
            | Term::Cyl { arg, .. }
            | Term::Int { arg, .. }
            | Term::Subst { arg, .. }
            | Term::Q { arg, .. } => vec![arg],
            Term::Join { left, right }
            | Term::Meet { left, right }
            | Term::Oplus { left, right } => vec![left, right],
        }
    }

    /// Built from variables, `0`, `1` and Boolean operations only.
    pub fn is_boolean(&self) -> bool {
        match self {
            Term::Var { .. } | Term::Zero | Term::One => true,
            Term::Join { left, right }
            | Term::Meet { left, right }
            | Term::Oplus { left, right } => left.is_boolean() && right.is_boolean(),
            Term::Compl { arg } => arg.is_boolean(),
            _ => false,
        }
    }

    /// One more than the largest variable index, or 0.
    pub fn var_count(&self) -> usize {
        let own = match self {
            Term::Var { index } => index + 1,
            _ => 0,
        };
        self.children()
            .into_iter()
            .map(Term::var_count)
            .fold(own, usize::max)
    }

    /// One more than the largest operation index, or 0.
    pub fn index_bound(&self) -> usize {
        let own = match self {
            Term::Cyl { i, .. } | Term::Int { i, .. } | Term::Q { i, .. } => i + 1,
            Term::Diag { i, j } | Term::Subst { i, j, .. } => i.max(j) + 1,
            _ => 0,
        };
        self.children()
            .into_iter()
            .map(Term::index_bound)
            .fold(own, usize::max)
    }

    /// Parses `v0`, `p`/`q`/`r` (aliases of `v0..v2`), `0`, `1`, `a + b`,
    /// `a * b`, `a ^ b` (for `⊕`), `-a`, `c0(a)`, `I0(a)`, `q0(a)`,
    /// `s0_1(a)`, `d0_1`. `^` binds tighter than `+` and looser than `*`.
    pub fn parse(text: &str) -> Result<Self, BaoError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let t = p.join()?;
        p.finish()?;
        Ok(t)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var { index } => write!(f, "v{index}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Join { left, right } => write!(f, "({left} + {right})"),
            Term::Meet { left, right } => write!(f, "({left} * {right})"),
            Term::Oplus { left, right } => write!(f, "({left} ^ {right})"),
            Term::Compl { arg } => write!(f, "-{arg}"),
            Term::Cyl { i, arg } => write!(f, "c{i}({arg})"),
            Term::Int { i, arg } => write!(f, "I{i}({arg})"),
            Term::Q { i, arg } => write!(f, "q{i}({arg})"),
            Term::Subst { i, j, arg } => write!(f, "s{i}_{j}({arg})"),
            Term::Diag { i, j } => write!(f, "d{i}_{j}"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> BaoError {
        BaoError::Parse {
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

    fn finish(&mut self) -> Result<(), BaoError> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }

    fn number(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn join(&mut self) -> Result<Term, BaoError> {
        let mut t = self.oplus()?;
        while self.eat("+") {
            t = Term::join(t, self.oplus()?);
        }
        Ok(t)
    }

    fn oplus(&mut self) -> Result<Term, BaoError> {
        let mut t = self.meet()?;
        while self.eat("^") {
            t = Term::oplus(t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term, BaoError> {
        let mut t = self.unary()?;
        while self.eat("*") {
            t = Term::meet(t, self.unary()?);
        }
        Ok(t)
    }

    fn pair(&mut self) -> Result<(usize, usize), BaoError> {
        let i = self
            .number()
            .ok_or_else(|| self.error("expected an index"))?;
        if !self.eat("_") {
            return Err(self.error("expected '_'"));
        }
        let j = self
            .number()
            .ok_or_else(|| self.error("expected an index"))?;
        Ok((i, j))
    }

    fn call(&mut self) -> Result<Term, BaoError> {
        if !self.eat("(") {
            return Err(self.error("expected '('"));
        }
        let t = self.join()?;
        if !self.eat(")") {
            return Err(self.error("expected ')'"));
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, BaoError> {
        if self.eat("-") {
            return Ok(Term::compl(self.unary()?));
        }
        if self.eat("(") {
            let t = self.join()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(t);
        }
        self.skip_ws();
        let c = *self
            .src
            .get(self.pos)
            .ok_or_else(|| self.error("expected a term"))?;
        self.pos += 1;
        let next_is_digit = self.src.get(self.pos).is_some_and(u8::is_ascii_digit);
        match c {
            b'0' => Ok(Term::Zero),
            b'1' => Ok(Term::One),
            b'v' => Ok(Term::var(
                self.number()
                    .ok_or_else(|| self.error("expected a variable index"))?,
            )),
            b'p' | b'r' if !next_is_digit => Ok(Term::var(if c == b'p' { 0 } else { 2 })),
            b'q' if !next_is_digit => Ok(Term::var(1)),
            b'c' | b'I' | b'q' => {
                let i = self
                    .number()
                    .ok_or_else(|| self.error("expected an index"))?;
                let arg = self.call()?;
                Ok(match c {
                    b'c' => Term::cyl(i, arg),
                    b'I' => Term::int(i, arg),
                    _ => Term::q(i, arg),
                })
            }
            b's' => {
                let (i, j) = self.pair()?;
                Ok(Term::subst(i, j, self.call()?))
            }
            b'd' => {
                let (i, j) = self.pair()?;
                Ok(Term::diag(i, j))
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected a term"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Leq,
}

/// `lhs = rhs` or `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub relation: Relation,
}

impl Equation {
    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Equation {
            lhs,
            rhs,
            relation: Relation::Eq,
        }
    }

    pub fn leq(lhs: Term, rhs: Term) -> Self {
        Equation {
            lhs,
            rhs,
            relation: Relation::Leq,
        }
    }

    pub fn var_count(&self) -> usize {
        self.lhs.var_count().max(self.rhs.var_count())
    }

    pub fn index_bound(&self) -> usize {
        self.lhs.index_bound().max(self.rhs.index_bound())
    }

    /// Parses `t = t` or `t <= t`.
    pub fn parse(text: &str) -> Result<Self, BaoError> {
        let (lhs, rhs, relation) = if let Some((l, r)) = text.split_once("<=") {
            (l, r, Relation::Leq)
        } else if let Some((l, r)) = text.split_once('=') {
            (l, r, Relation::Eq)
        } else {
            return Err(BaoError::Parse {
                offset: 0,
                message: "expected '=' or '<='".into(),
            });
        };
        Ok(Equation {
            lhs: Term::parse(lhs)?,
            rhs: Term::parse(rhs)?,
            relation,
        })
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Eq => "=",
            Relation::Leq => "<=",
        };
        write!(f, "{} {rel} {}", self.lhs, self.rhs)
    }
}

/// `c_index v_var = v_var`, i.e. `index` is outside the dimension set of the variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Guard {
    pub index: usize,
    pub var: usize,
}

fn eval(alg: &FiniteAlgebra, t: &Term, env: &[Element]) -> Element {
    let rec = |t: &Term| eval(alg, t, env);
    match t {
        Term::Var { index } => env[*index].clone(),
        Term::Zero => alg.zero(),
        Term::One => alg.one(),
        Term::Join { left, right } => rec(left).union(&rec(right)),
        Term::Meet { left, right } => rec(left).intersection(&rec(right)),
        Term::Compl { arg } => rec(arg).complement(),
        Term::Cyl { i, arg } => alg.cyl(*i, &rec(arg)),
        Term::Diag { i, j } => alg.diag(*i, *j),
        Term::Int { i, arg } => alg.interior(*i, &rec(arg)),
        Term::Subst { i, j, arg } => {
            let x = rec(arg);
            if i == j {
                x
            } else {
                alg.cyl(*i, &alg.diag(*i, *j).intersection(&x))
            }
        }
        Term::Q { i, arg } => alg.cyl(*i, &rec(arg).complement()).complement(),
        Term::Oplus { left, right } => {
            let (a, b) = (rec(left), rec(right));
            a.complement()
                .union(&b)
                .intersection(&b.complement().union(&a))
        }
    }
}

fn validate(alg: &FiniteAlgebra, bound: usize) -> Result<(), BaoError> {
    if bound > alg.dim() {
        return Err(BaoError::IndexOutOfRange {
            index: bound - 1,
            dim: alg.dim(),
        });
    }
    Ok(())
}

/// Evaluates `t` with `v_k` bound to `env[k]`.
pub fn eval_term(alg: &FiniteAlgebra, t: &Term, env: &[Element]) -> Result<Element, BaoError> {
    validate(alg, t.index_bound())?;
    if t.var_count() > env.len() {
        return Err(BaoError::UnboundVariable(env.len()));
    }
    if let Some(x) = env.iter().find(|x| x.width() != alg.width()) {
        let _ = x;
        return Err(BaoError::NotInCarrier);
    }
    Ok(eval(alg, t, env))
}

/// How environments are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CheckMode {
    /// Every environment over the carrier (at most 2^24).
    Exhaustive,
    /// Seeded random environments.
    Sampled { count: usize, seed: u64 },
    /// Exhaustive up to 2^16 environments, else 10,000 samples.
    Auto { seed: u64 },
    /// Variables range over the carrier's atoms: exhaustive up to 2^24
    /// environments, else 10,000 samples.
    Atoms { seed: u64 },
}

pub const EXHAUSTIVE_LIMIT: u128 = 1 << 24;
pub const AUTO_LIMIT: u128 = 1 << 16;
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Atom lists bound to `v0, v1, ..`.
    pub env: Vec<Vec<usize>>,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationVerdict {
    pub holds: bool,
    /// No environment satisfied the guards.
    pub vacuous: bool,
    pub exhaustive: bool,
    pub envs_checked: u64,
    pub counterexample: Option<Counterexample>,
}

/// Checks an unguarded equation.
pub fn check_equation(
    alg: &FiniteAlgebra,
    eq: &Equation,
    mode: &CheckMode,
) -> Result<EquationVerdict, BaoError> {
    check_guarded(alg, eq, &[], mode)
}

enum Plan {
    Grid { domain: Vec<Element>, vars: usize },
    Samples(Vec<Vec<Element>>),
}

fn grid_env(domain: &[Element], vars: usize, mut idx: u64) -> Vec<Element> {
    let k = domain.len() as u64;
    (0..vars)
        .map(|_| {
            let e = domain[(idx % k) as usize].clone();
            idx /= k;
            e
        })
        .collect()
}

/// Checks `eq` on environments satisfying every guard.
pub(crate) fn check_guarded(
    alg: &FiniteAlgebra,
    eq: &Equation,
    guards: &[Guard],
    mode: &CheckMode,
) -> Result<EquationVerdict, BaoError> {
    validate(alg, eq.index_bound())?;
    for g in guards {
        validate(alg, g.index + 1)?;
    }
    let vars = eq
        .var_count()
        .max(guards.iter().map(|g| g.var + 1).max().unwrap_or(0));
    let carrier_size = alg.size_f64();
    let envs_f = carrier_size.powi(vars as i32);
    let sample = |count: usize, seed: u64, directed: bool, atoms: Option<&[Element]>| {
        let mut rng = sample::rng(seed);
        let envs = (0..count)
            .map(|_| {
                (0..vars)
                    .map(|v| {
                        let mut x = match atoms {
                            Some(a) => a[rng.gen_range(0..a.len())].clone(),
                            None => alg.random_element(&mut rng),
                        };
                        if directed {
                            for g in guards.iter().filter(|g| g.var == v) {
                                x = alg.cyl(g.index, &x);
                            }
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        Plan::Samples(envs)
    };
    let plan = match *mode {
        CheckMode::Exhaustive => {
            if envs_f > EXHAUSTIVE_LIMIT as f64 {
                return Err(BaoError::TooLargeForExhaustive {
                    envs: envs_f.min(u128::MAX as f64) as u128,
                });
            }
            Plan::Grid {
                domain: alg.elements()?,
                vars,
            }
        }
        CheckMode::Sampled { count, seed } => sample(count, seed, true, None),
        CheckMode::Auto { seed } => {
            if envs_f <= AUTO_LIMIT as f64 {
                Plan::Grid {
                    domain: alg.elements()?,
                    vars,
                }
            } else {
                sample(DEFAULT_SAMPLES, seed, true, None)
            }
        }
        CheckMode::Atoms { seed } => {
            let atoms = alg.carrier_atoms();
            if guards.is_empty() && eq.lhs.is_boolean() && eq.rhs.is_boolean() {
                // Boolean terms commute with permutations of the atoms, so
                // only the equality pattern of the variables matters.
                let k = vars.min(atoms.len());
                Plan::Grid {
                    domain: atoms[..k].to_vec(),
                    vars,
                }
            } else if (atoms.len() as f64).powi(vars as i32) <= EXHAUSTIVE_LIMIT as f64 {
                Plan::Grid {
                    domain: atoms,
                    vars,
                }
            } else {
                sample(DEFAULT_SAMPLES, seed, false, Some(&atoms))
            }
        }
    };
    let test = |env: &[Element]| -> Option<Option<Counterexample>> {
        if guards
            .iter()
            .any(|g| alg.cyl(g.index, &env[g.var]) != env[g.var])
        {
            return None;
        }
        let l = eval(alg, &eq.lhs, env);
        let r = eval(alg, &eq.rhs, env);
        let ok = match eq.relation {
            Relation::Eq => l == r,
            Relation::Leq => l.is_subset(&r),
        };
        Some((!ok).then(|| Counterexample {
            env: env.iter().map(Element::to_vec).collect(),
            lhs: l.to_vec(),
            rhs: r.to_vec(),
        }))
    };
    // (environments passing the guards, first failure by position)
    type Acc = (u64, Option<(u64, Counterexample)>);
    let merge = |a: Acc, b: Acc| -> Acc {
        let fail = match (a.1, b.1) {
            (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
            (x, y) => x.or(y),
        };
        (a.0 + b.0, fail)
    };
    let visit = |idx: u64, env: &[Element]| -> Acc {
        match test(env) {
            None => (0, None),
            Some(fail) => (1, fail.map(|c| (idx, c))),
        }
    };
    let (exhaustive, (checked, fail)) = match plan {
        Plan::Grid { domain, vars } => {
            let total = (domain.len() as u64).pow(vars as u32);
            let acc = (0..total)
                .into_par_iter()
                .map(|idx| visit(idx, &grid_env(&domain, vars, idx)))
                .reduce(|| (0, None), merge);
            (true, acc)
        }
        Plan::Samples(envs) => {
            let acc = envs
                .par_iter()
                .enumerate()
                .map(|(idx, env)| visit(idx as u64, env))
                .reduce(|| (0, None), merge);
            (false, acc)
        }
    };
    Ok(EquationVerdict {
        holds: fail.is_none(),
        vacuous: checked == 0,
        exhaustive,
        envs_checked: checked,
        counterexample: fail.map(|(_, c)| c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::{cm, AtomStructure};
    use crate::setalg::{nonadditive_witness, Space};
    use crate::topology::FiniteTopology;

    fn full22() -> FiniteAlgebra {
        cm(AtomStructure::of_space(&Space::new(2, 2).unwrap()).unwrap())
    }

    #[test]
    fn parse_and_display() {
        let t = Term::parse("c0(p * -q) + I1(v2) ^ s0_1(d1_0)").unwrap();
        assert_eq!(Term::parse(&t.to_string()).unwrap(), t);
        assert_eq!(t.var_count(), 3);
        assert_eq!(t.index_bound(), 2);
        let e = Equation::parse("q0(v0) <= v0").unwrap();
        assert_eq!(e.relation, Relation::Leq);
        assert_eq!(e.lhs, Term::q(0, Term::var(0)));
        assert!(Term::parse("c(p)").is_err());
        assert!(Term::parse("p +").is_err());
        let json = serde_json::to_string(&Term::int(0, Term::var(1))).unwrap();
        assert_eq!(json, r#"{"op":"I","i":0,"arg":{"op":"var","index":1}}"#);
    }

    #[test]
    fn eval_examples() {
        let alg = full22();
        let sp = Space::new(2, 2).unwrap();
        let x = sp.set_of(&[&[0, 0]]);
        assert_eq!(
            eval_term(&alg, &Term::var(0), std::slice::from_ref(&x)).unwrap(),
            x
        );
        let s = eval_term(
            &alg,
            &Term::subst(0, 1, Term::var(0)),
            std::slice::from_ref(&x),
        )
        .unwrap();
        assert_eq!(
            s,
            sp.cyl(0, &sp.diag(0, 1).unwrap().intersection(&x)).unwrap()
        );
        let q = eval_term(&alg, &Term::q(0, Term::var(0)), std::slice::from_ref(&x)).unwrap();
        assert!(q.is_empty());
        assert_eq!(
            eval_term(&alg, &Term::var(1), std::slice::from_ref(&x)),
            Err(BaoError::UnboundVariable(1))
        );
        assert!(matches!(
            eval_term(&alg, &Term::cyl(2, Term::var(0)), &[x]),
            Err(BaoError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn oplus_is_the_biconditional() {
        let alg = full22();
        for a in 0..16 {
            for b in 0..16 {
                let env = [Element::from_word(4, a), Element::from_word(4, b)];
                let o = eval_term(&alg, &Term::oplus(Term::var(0), Term::var(1)), &env).unwrap();
                assert_eq!(o.to_word(), !(a ^ b) & 0xf);
            }
        }
    }

    #[test]
    fn boolean_laws_on_atoms_use_equality_patterns() {
        let alg = full22();
        let e = Equation::parse("v0 + v1 * v2 = (v0 + v1) * (v0 + v2)").unwrap();
        let v = check_equation(&alg, &e, &CheckMode::Atoms { seed: 0 }).unwrap();
        assert!(v.holds && v.exhaustive);
        assert_eq!(v.envs_checked, 27);
        let e = Equation::parse("v0 * -v1 = v0").unwrap();
        let v = check_equation(&alg, &e, &CheckMode::Atoms { seed: 0 }).unwrap();
        assert!(!v.holds && v.exhaustive);
        assert!(!Term::parse("c0(p) + q").unwrap().is_boolean());
        assert!(Term::parse("-(p ^ q) * 1").unwrap().is_boolean());
    }

    #[test]
    fn equation_examples() {
        let alg = full22();
        let e = Equation::parse("c0(0) = 0").unwrap();
        let v = check_equation(&alg, &e, &CheckMode::Exhaustive).unwrap();
        assert!(v.holds && v.exhaustive && !v.vacuous);
        let e = Equation::parse("d0_0 = 1").unwrap();
        assert!(
            check_equation(&alg, &e, &CheckMode::Auto { seed: 0 })
                .unwrap()
                .holds
        );

        let sp = Space::topological(2, FiniteTopology::indiscrete(2).unwrap()).unwrap();
        let ind = cm(AtomStructure::of_space(&sp).unwrap());
        let e = Equation::parse("I0(v0) + I0(v1) = I0(v0 + v1)").unwrap();
        let v = check_equation(&ind, &e, &CheckMode::Exhaustive).unwrap();
        assert!(!v.holds);
        assert_eq!(v.envs_checked, 256);
        let cx = v.counterexample.unwrap();
        // the first failure in environment order is the fixed witness pair
        let w = nonadditive_witness().unwrap();
        assert_eq!(cx.env, vec![w.y.members.clone(), w.x.members.clone()]);
        assert_eq!(cx.lhs, w.union_of_interiors.members);
        assert_eq!(cx.rhs, w.interior_of_union.members);
    }

    #[test]
    fn sampling_is_deterministic_and_guarded() {
        let alg = full22();
        let e = Equation::parse("c1(v0) = v0").unwrap();
        let guard = [Guard { index: 1, var: 0 }];
        let mode = CheckMode::Sampled {
            count: 500,
            seed: 9,
        };
        let a = check_guarded(&alg, &e, &guard, &mode).unwrap();
        let b = check_guarded(&alg, &e, &guard, &mode).unwrap();
        assert_eq!(a, b);
        assert!(a.holds && a.envs_checked == 500);
        let ex = check_guarded(&alg, &e, &guard, &CheckMode::Exhaustive).unwrap();
        assert!(ex.holds && ex.envs_checked == 4);
    }

    #[test]
    fn exhaustive_limit() {
        let sp = Space::new(3, 2).unwrap();
        let alg = cm(AtomStructure::of_space(&sp).unwrap());
        // 256^3 environments sit exactly at the limit
        let e = Equation::parse("v0 * (v1 + v2) = v0 * v1 + v0 * v2").unwrap();
        let at_limit = check_equation(&alg, &e, &CheckMode::Auto { seed: 1 }).unwrap();
        assert!(!at_limit.exhaustive);
        let e = Equation::parse("v0 * (v1 + v2) + v3 = v0 * v1 + v0 * v2 + v3").unwrap();
        assert!(matches!(
            check_equation(&alg, &e, &CheckMode::Exhaustive),
            Err(BaoError::TooLargeForExhaustive { .. })
        ));
        let v = check_equation(&alg, &e, &CheckMode::Auto { seed: 1 }).unwrap();
        assert!(v.holds && !v.exhaustive && v.envs_checked == DEFAULT_SAMPLES as u64);
    }
}
