//! Support over first-order information models.
//!
//! A model is a family of structures (worlds) over one domain; formulas are
//! supported at information states, i.e. sets of worlds. Identity is always
//! identity of individuals. The relational encoding turns a model into a
//! two-sorted structure in which every symbol takes an extra world argument.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::evaluator::{atom_truth, ensure_sentence, DepProfile, EvalConfig, EvalError};
use crate::structures::{Assignment, Elem, Relation, Structure, StructureError, StructureSpace};
use crate::syntax::{Formula, Signature, Term, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InqbqError {
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("world {0} disagrees with world 0 on the domain or signature")]
    InconsistentWorld(usize),
    #[error("identity must not be interpreted per world")]
    NonIdModel,
    #[error("state {mask:#b} mentions worlds beyond {worlds}")]
    StateOutOfRange { mask: u64, worlds: usize },
    #[error("at most 64 worlds are supported, got {0}")]
    TooManyWorlds(usize),
    #[error("constant `{0}` is not interpreted")]
    MissingConstant(String),
    #[error("sort error: {0}")]
    Sort(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// A first-order information model; world `w` is `worlds[w]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoModel {
    domain_size: usize,
    worlds: Vec<Structure>,
}

impl InfoModel {
    pub fn new(worlds: Vec<Structure>) -> Result<Self, InqbqError> {
        let first = worlds.first().ok_or(InqbqError::NoWorlds)?;
        if worlds.len() > 64 {
            return Err(InqbqError::TooManyWorlds(worlds.len()));
        }
        let (n, sig) = (first.domain_size(), first.signature());
        if let Some(i) = worlds
            .iter()
            .position(|w| w.domain_size() != n || w.signature() != sig)
        {
            return Err(InqbqError::InconsistentWorld(i));
        }
        Ok(InfoModel {
            domain_size: n,
            worlds,
        })
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn world(&self, w: usize) -> &Structure {
        &self.worlds[w]
    }

    pub fn signature(&self) -> Signature {
        self.worlds[0].signature()
    }

    pub fn full_state(&self) -> State {
        State::full(self.world_count())
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "worlds": self.world_count(),
            "domain": self.domain_size,
            "interpretation": self.worlds.iter().map(Structure::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self, InqbqError> {
        let raw: InfoModelJson =
            serde_json::from_value(value.clone()).map_err(|e| InqbqError::Json(e.to_string()))?;
        if raw.interpretation.len() != raw.worlds {
            return Err(InqbqError::Json(format!(
                "\"worlds\" is {} but {} interpretations are given",
                raw.worlds,
                raw.interpretation.len()
            )));
        }
        let mut worlds = Vec::with_capacity(raw.worlds);
        for w in &raw.interpretation {
            if w.get("predicates").and_then(|p| p.get("=")).is_some() {
                return Err(InqbqError::NonIdModel);
            }
            let s = Structure::from_json(w)?;
            if s.domain_size() != raw.domain {
                return Err(InqbqError::InconsistentWorld(worlds.len()));
            }
            worlds.push(s);
        }
        InfoModel::new(worlds)
    }

    pub fn from_json_str(text: &str) -> Result<Self, InqbqError> {
        let v: Value = serde_json::from_str(text).map_err(|e| InqbqError::Json(e.to_string()))?;
        Self::from_json(&v)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InfoModelJson {
    worlds: usize,
    domain: usize,
    interpretation: Vec<Value>,
}

/// A set of worlds as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(pub u64);

impl State {
    pub fn empty() -> Self {
        State(0)
    }

    pub fn full(worlds: usize) -> Self {
        State(if worlds >= 64 {
            u64::MAX
        } else {
            (1 << worlds) - 1
        })
    }

    pub fn singleton(w: usize) -> Self {
        State(1 << w)
    }

    pub fn from_worlds(ws: impl IntoIterator<Item = usize>) -> Self {
        State(ws.into_iter().fold(0, |m, w| m | 1 << w))
    }

    pub fn contains(&self, w: usize) -> bool {
        w < 64 && self.0 >> w & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn worlds(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(move |&w| self.contains(w))
    }

    /// All sub-states in increasing mask order.
    pub fn substates(&self) -> impl Iterator<Item = State> {
        let s = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == s {
                None
            } else {
                Some((cur.wrapping_sub(s)) & s)
            };
            Some(State(cur))
        })
    }
}

/// Support of `phi` at state `s` under assignment `g`.
pub fn state_supports(
    m: &InfoModel,
    s: State,
    g: &Assignment,
    phi: &Formula,
    cfg: &EvalConfig,
) -> Result<bool, InqbqError> {
    if s.0 & !State::full(m.world_count()).0 != 0 {
        return Err(InqbqError::StateOutOfRange {
            mask: s.0,
            worlds: m.world_count(),
        });
    }
    let mut range = None;
    phi.visit(&mut |f| {
        if let Formula::RangeAll(x, _) = f {
            range.get_or_insert_with(|| x.name().to_string());
        }
    });
    if let Some(x) = range {
        return Err(EvalError::RangeQuantifier(x).into());
    }
    if let Some(v) = phi.free_vars().into_iter().find(|v| g.get(v).is_none()) {
        return Err(EvalError::UnboundVariable(v.name().to_string()).into());
    }
    if let Some((_, d)) = g.iter().find(|(_, d)| *d >= m.domain_size()) {
        return Err(StructureError::OutOfDomain {
            elem: d,
            size: m.domain_size(),
        }
        .into());
    }
    let mut env: Vec<(Var, Elem)> = g.iter().map(|(v, d)| (v.clone(), d)).collect();
    support(m, s, &mut env, phi, cfg)
}

fn support(
    m: &InfoModel,
    s: State,
    env: &mut Vec<(Var, Elem)>,
    phi: &Formula,
    cfg: &EvalConfig,
) -> Result<bool, InqbqError> {
    match phi {
        Formula::Atom(..) | Formula::Eq(..) => {
            let lookup = |v: &Var| env.iter().rev().find(|(w, _)| w == v).map(|(_, d)| *d);
            for w in s.worlds() {
                if !atom_truth(m.world(w), phi, &lookup)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Bot => Ok(s.is_empty()),
        Formula::And(a, b) => Ok(support(m, s, env, a, cfg)? && support(m, s, env, b, cfg)?),
        Formula::IDisj(a, b) => Ok(support(m, s, env, a, cfg)? || support(m, s, env, b, cfg)?),
        Formula::Implies(a, b) => {
            if s.len() > cfg.naive_subteam_cap.min(63) {
                return Err(EvalError::CapExceeded {
                    size: s.len(),
                    cap: cfg.naive_subteam_cap,
                }
                .into());
            }
            for t in s.substates() {
                if support(m, t, env, a, cfg)? && !support(m, t, env, b, cfg)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::ForAll(x, body) | Formula::IExists(x, body) => {
            let universal = matches!(phi, Formula::ForAll(..));
            for d in 0..m.domain_size() {
                env.push((x.clone(), d));
                let r = support(m, s, env, body, cfg);
                env.pop();
                if r? != universal {
                    return Ok(!universal);
                }
            }
            Ok(universal)
        }
        Formula::RangeAll(x, _) => Err(EvalError::RangeQuantifier(x.name().to_string()).into()),
    }
}

/// `M ⊨ σ`: support of a sentence at the set of all worlds.
pub fn satisfies(m: &InfoModel, sentence: &Formula, cfg: &EvalConfig) -> Result<bool, InqbqError> {
    ensure_sentence(sentence)?;
    state_supports(m, m.full_state(), &Assignment::new(), sentence, cfg)
}

/// `R_s = {(a_w, b_w) | w ∈ s}`.
pub fn state_relation(m: &InfoModel, s: State) -> Result<Relation, InqbqError> {
    for c in ["a", "b"] {
        if m.signature().function_arity(c) != Some(0) {
            return Err(InqbqError::MissingConstant(c.to_string()));
        }
    }
    let mut r = Relation::new(2);
    for w in s.worlds().take_while(|&w| w < m.world_count()) {
        let mw = m.world(w);
        let a = mw.apply("a", &[]).expect("checked");
        let b = mw.apply("b", &[]).expect("checked");
        r.tuples.insert(vec![a, b]);
    }
    Ok(r)
}

/// The model with worlds `D²`, world `(i, j)` (index `i·n + j`) interpreting
/// `a` as `i` and `b` as `j`.
pub fn build_full_model(n: usize) -> Result<InfoModel, InqbqError> {
    if n * n > 64 {
        return Err(InqbqError::TooManyWorlds(n * n));
    }
    let mut worlds = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut s = Structure::new(n)?;
            s.set_constant("a", i)?;
            s.set_constant("b", j)?;
            worlds.push(s);
        }
    }
    InfoModel::new(worlds)
}

/// Scans every state for a relation `R_s` that is an injective total function
/// which is not surjective; returns how many such states exist.
pub fn count_dedekind_states(m: &InfoModel) -> Result<usize, InqbqError> {
    let mut count = 0;
    for s in m.full_state().substates() {
        let r = state_relation(m, s)?;
        if DepProfile::of_relation(&r, m.domain_size()).is_dedekind_witness() {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct WorldTable<T> {
    arity: usize,
    cells: Vec<T>,
}

/// A two-sorted structure: worlds `0..world_count`, individuals `0..domain_size`.
/// Every symbol keeps its name and takes the world as its first argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSortedStructure {
    world_count: usize,
    domain_size: usize,
    predicates: BTreeMap<String, WorldTable<bool>>,
    functions: BTreeMap<String, WorldTable<Elem>>,
}

fn entity_index(args: &[Elem], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

fn entity_tuple(mut idx: usize, n: usize, arity: usize) -> Vec<Elem> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

impl TwoSortedStructure {
    pub fn world_count(&self) -> usize {
        self.world_count
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    fn cells(&self, arity: usize) -> usize {
        self.domain_size.pow(arity as u32)
    }

    /// `(w, args) ∈ P*`.
    pub fn holds(&self, pred: &str, w: usize, args: &[Elem]) -> Option<bool> {
        let t = self.predicates.get(pred)?;
        if w >= self.world_count
            || args.len() != t.arity
            || args.iter().any(|&a| a >= self.domain_size)
        {
            return None;
        }
        Some(t.cells[w * self.cells(t.arity) + entity_index(args, self.domain_size)])
    }

    /// `f*(w, args)`.
    pub fn apply(&self, func: &str, w: usize, args: &[Elem]) -> Option<Elem> {
        let t = self.functions.get(func)?;
        if w >= self.world_count
            || args.len() != t.arity
            || args.iter().any(|&a| a >= self.domain_size)
        {
            return None;
        }
        Some(t.cells[w * self.cells(t.arity) + entity_index(args, self.domain_size)])
    }

    /// Inverse of [`encode_relational`].
    pub fn decode(&self) -> Result<InfoModel, InqbqError> {
        let n = self.domain_size;
        let mut worlds = Vec::with_capacity(self.world_count);
        for w in 0..self.world_count {
            let mut s = Structure::new(n)?;
            for (p, t) in &self.predicates {
                let k = self.cells(t.arity);
                let ext: Vec<Vec<Elem>> = (0..k)
                    .filter(|&i| t.cells[w * k + i])
                    .map(|i| entity_tuple(i, n, t.arity))
                    .collect();
                s.set_predicate(p, t.arity, &ext)?;
            }
            for (f, t) in &self.functions {
                let k = self.cells(t.arity);
                s.set_function(f, t.arity, |args| t.cells[w * k + entity_index(args, n)])?;
            }
            worlds.push(s);
        }
        InfoModel::new(worlds)
    }
}

/// The two-sorted encoding `M*` of an information model.
pub fn encode_relational(m: &InfoModel) -> TwoSortedStructure {
    let n = m.domain_size();
    let sig = m.signature();
    let mut predicates = BTreeMap::new();
    for (p, arity) in sig.predicates() {
        let k = n.pow(arity as u32);
        let mut cells = Vec::with_capacity(m.world_count() * k);
        for w in 0..m.world_count() {
            for i in 0..k {
                let args = entity_tuple(i, n, arity);
                cells.push(m.world(w).holds(p, &args).expect("declared in every world"));
            }
        }
        predicates.insert(p.to_string(), WorldTable { arity, cells });
    }
    let mut functions = BTreeMap::new();
    for (f, arity) in sig.functions() {
        let k = n.pow(arity as u32);
        let mut cells = Vec::with_capacity(m.world_count() * k);
        for w in 0..m.world_count() {
            for i in 0..k {
                let args = entity_tuple(i, n, arity);
                cells.push(m.world(w).apply(f, &args).expect("declared in every world"));
            }
        }
        functions.insert(f.to_string(), WorldTable { arity, cells });
    }
    TwoSortedStructure {
        world_count: m.world_count(),
        domain_size: n,
        predicates,
        functions,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    World,
    Entity,
}

/// Terms of the two-sorted language. Applications list the world argument first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SortedTerm {
    Var(Var),
    App(String, Vec<SortedTerm>),
}

impl SortedTerm {
    pub fn var(name: &str) -> Self {
        SortedTerm::Var(Var::new(name))
    }

    /// `c*(w)` for a constant `c`.
    pub fn constant_at(c: &str, world: &str) -> Self {
        SortedTerm::App(c.to_string(), vec![SortedTerm::var(world)])
    }
}

/// Classical two-sorted formulas.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SortedFormula {
    Pred(String, Vec<SortedTerm>),
    Eq(SortedTerm, SortedTerm),
    Not(Box<SortedFormula>),
    And(Box<SortedFormula>, Box<SortedFormula>),
    Or(Box<SortedFormula>, Box<SortedFormula>),
    Implies(Box<SortedFormula>, Box<SortedFormula>),
    ForAll(Var, Sort, Box<SortedFormula>),
    Exists(Var, Sort, Box<SortedFormula>),
}

impl SortedFormula {
    pub fn pred(p: &str, args: Vec<SortedTerm>) -> Self {
        SortedFormula::Pred(p.to_string(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: SortedFormula) -> Self {
        SortedFormula::Not(Box::new(a))
    }

    pub fn or(a: SortedFormula, b: SortedFormula) -> Self {
        SortedFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, sort: Sort, body: SortedFormula) -> Self {
        SortedFormula::ForAll(Var::new(v), sort, Box::new(body))
    }

    pub fn exists(v: &str, sort: Sort, body: SortedFormula) -> Self {
        SortedFormula::Exists(Var::new(v), sort, Box::new(body))
    }
}

impl fmt::Display for SortedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortedTerm::Var(v) => write!(f, "{v}"),
            SortedTerm::App(g, args) => {
                write!(f, "{g}*(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for SortedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sort = |s: &Sort| if *s == Sort::World { "W" } else { "D" };
        match self {
            SortedFormula::Pred(p, args) => {
                write!(f, "{p}*(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            SortedFormula::Eq(a, b) => write!(f, "{a} = {b}"),
            SortedFormula::Not(a) => write!(f, "~{a}"),
            SortedFormula::And(a, b) => write!(f, "({a} & {b})"),
            SortedFormula::Or(a, b) => write!(f, "({a} | {b})"),
            SortedFormula::Implies(a, b) => write!(f, "({a} -> {b})"),
            SortedFormula::ForAll(v, s, body) => write!(f, "forall {v}:{}. {body}", sort(s)),
            SortedFormula::Exists(v, s, body) => write!(f, "exists {v}:{}. {body}", sort(s)),
        }
    }
}

fn sort_of(
    s: &TwoSortedStructure,
    env: &[(Var, Sort, usize)],
    t: &SortedTerm,
) -> Result<Sort, InqbqError> {
    match t {
        SortedTerm::Var(v) => env
            .iter()
            .rev()
            .find(|(w, _, _)| w == v)
            .map(|(_, sort, _)| *sort)
            .ok_or_else(|| InqbqError::Sort(format!("unbound variable `{v}`"))),
        SortedTerm::App(f, args) => {
            let table = s
                .functions
                .get(f)
                .ok_or_else(|| InqbqError::Sort(format!("unknown function `{f}*`")))?;
            check_args(s, env, f, table.arity, args)?;
            Ok(Sort::Entity)
        }
    }
}

fn check_args(
    s: &TwoSortedStructure,
    env: &[(Var, Sort, usize)],
    sym: &str,
    arity: usize,
    args: &[SortedTerm],
) -> Result<(), InqbqError> {
    if args.len() != arity + 1 {
        return Err(InqbqError::Sort(format!(
            "`{sym}*` takes {} arguments, got {}",
            arity + 1,
            args.len()
        )));
    }
    for (i, a) in args.iter().enumerate() {
        let want = if i == 0 { Sort::World } else { Sort::Entity };
        let got = sort_of(s, env, a)?;
        if got != want {
            return Err(InqbqError::Sort(format!(
                "argument {i} of `{sym}*` must have sort {want:?}, found {got:?}"
            )));
        }
    }
    Ok(())
}

fn value_of(s: &TwoSortedStructure, env: &[(Var, Sort, usize)], t: &SortedTerm) -> usize {
    match t {
        SortedTerm::Var(v) => {
            env.iter()
                .rev()
                .find(|(w, _, _)| w == v)
                .expect("sort-checked")
                .2
        }
        SortedTerm::App(f, args) => {
            let vals: Vec<usize> = args.iter().map(|a| value_of(s, env, a)).collect();
            s.apply(f, vals[0], &vals[1..]).expect("sort-checked")
        }
    }
}

fn check_formula(
    s: &TwoSortedStructure,
    env: &mut Vec<(Var, Sort, usize)>,
    phi: &SortedFormula,
) -> Result<(), InqbqError> {
    match phi {
        SortedFormula::Pred(p, args) => {
            let table = s
                .predicates
                .get(p)
                .ok_or_else(|| InqbqError::Sort(format!("unknown predicate `{p}*`")))?;
            check_args(s, env, p, table.arity, args)
        }
        SortedFormula::Eq(a, b) => {
            let (sa, sb) = (sort_of(s, env, a)?, sort_of(s, env, b)?);
            if sa != sb {
                return Err(InqbqError::Sort(format!(
                    "`{a} = {b}` compares {sa:?} with {sb:?}"
                )));
            }
            Ok(())
        }
        SortedFormula::Not(a) => check_formula(s, env, a),
        SortedFormula::And(a, b) | SortedFormula::Or(a, b) | SortedFormula::Implies(a, b) => {
            check_formula(s, env, a)?;
            check_formula(s, env, b)
        }
        SortedFormula::ForAll(v, sort, body) | SortedFormula::Exists(v, sort, body) => {
            env.push((v.clone(), *sort, 0));
            let r = check_formula(s, env, body);
            env.pop();
            r
        }
    }
}

fn eval_sorted(
    s: &TwoSortedStructure,
    env: &mut Vec<(Var, Sort, usize)>,
    phi: &SortedFormula,
) -> bool {
    match phi {
        SortedFormula::Pred(p, args) => {
            let vals: Vec<usize> = args.iter().map(|a| value_of(s, env, a)).collect();
            s.holds(p, vals[0], &vals[1..]).expect("sort-checked")
        }
        SortedFormula::Eq(a, b) => value_of(s, env, a) == value_of(s, env, b),
        SortedFormula::Not(a) => !eval_sorted(s, env, a),
        SortedFormula::And(a, b) => eval_sorted(s, env, a) && eval_sorted(s, env, b),
        SortedFormula::Or(a, b) => eval_sorted(s, env, a) || eval_sorted(s, env, b),
        SortedFormula::Implies(a, b) => !eval_sorted(s, env, a) || eval_sorted(s, env, b),
        SortedFormula::ForAll(v, sort, body) | SortedFormula::Exists(v, sort, body) => {
            let universal = matches!(phi, SortedFormula::ForAll(..));
            let size = match sort {
                Sort::World => s.world_count,
                Sort::Entity => s.domain_size,
            };
            for d in 0..size {
                env.push((v.clone(), *sort, d));
                let r = eval_sorted(s, env, body);
                env.pop();
                if r != universal {
                    return !universal;
                }
            }
            universal
        }
    }
}

/// Tarskian truth of a two-sorted sentence.
pub fn fo2_eval(s: &TwoSortedStructure, sentence: &SortedFormula) -> Result<bool, InqbqError> {
    check_formula(s, &mut Vec::new(), sentence)?;
    Ok(eval_sorted(s, &mut Vec::new(), sentence))
}

/// Sentences over `{P unary, a}` paired with their two-sorted counterparts.
pub fn sample_translations() -> Vec<(Formula, SortedFormula)> {
    let pa = Formula::atom("P", vec![Term::constant("a")]);
    let p_star_a = SortedFormula::pred(
        "P",
        vec![SortedTerm::var("w"), SortedTerm::constant_at("a", "w")],
    );
    let everywhere = SortedFormula::forall("w", Sort::World, p_star_a.clone());
    let nowhere = SortedFormula::forall("w", Sort::World, SortedFormula::not(p_star_a));
    vec![
        (pa.clone(), everywhere.clone()),
        (
            crate::syntax::question(pa),
            SortedFormula::or(everywhere, nowhere),
        ),
        (
            Formula::iexists("x", Formula::atom("P", vec![Term::var("x")])),
            SortedFormula::exists(
                "x",
                Sort::Entity,
                SortedFormula::forall(
                    "w",
                    Sort::World,
                    SortedFormula::pred("P", vec![SortedTerm::var("w"), SortedTerm::var("x")]),
                ),
            ),
        ),
    ]
}

/// Every information model over `sig` with `worlds` worlds and domain size `n`.
pub fn info_models(sig: &Signature, worlds: usize, n: usize) -> Result<Vec<InfoModel>, InqbqError> {
    let space = StructureSpace::new(sig, n, 1 << 16)?;
    let per_world: Vec<Structure> = space.iter().collect();
    let total = per_world
        .len()
        .checked_pow(worlds as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or(StructureError::BoundExceeded {
            what: format!("models with {worlds} worlds"),
            bound: 1 << 20,
        })?;
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut ws = Vec::with_capacity(worlds);
        for _ in 0..worlds {
            ws.push(per_world[idx % per_world.len()].clone());
            idx /= per_world.len();
        }
        out.push(InfoModel::new(ws)?);
    }
    Ok(out)
}

/// Agreement counts of one translation pair over an enumerated model class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationCheck {
    pub inqbq: String,
    pub two_sorted: String,
    pub models: usize,
    pub agreements: usize,
}

impl TranslationCheck {
    pub fn passed(&self) -> bool {
        self.models == self.agreements
    }
}

/// Evaluates each pair of [`sample_translations`] on every model with up to
/// `max_worlds` worlds and domain size up to `max_domain`.
pub fn translation_sweep(
    max_worlds: usize,
    max_domain: usize,
    cfg: &EvalConfig,
) -> Result<Vec<TranslationCheck>, InqbqError> {
    let sig = Signature::new().with_predicate("P", 1).with_constant("a");
    let mut models = Vec::new();
    for k in 1..=max_worlds {
        for n in 1..=max_domain {
            models.extend(info_models(&sig, k, n)?);
        }
    }
    let mut out = Vec::new();
    for (phi, star) in sample_translations() {
        let mut agreements = 0;
        for m in &models {
            if satisfies(m, &phi, cfg)? == fo2_eval(&encode_relational(m), &star)? {
                agreements += 1;
            }
        }
        out.push(TranslationCheck {
            inqbq: crate::parser::render(&phi),
            two_sorted: star.to_string(),
            models: models.len(),
            agreements,
        });
    }
    Ok(out)
}
