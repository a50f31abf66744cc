//! Memoizing evaluator.
//!
//! Every subformula is compiled once into a node. A team reaching a node is
//! restricted to the node's free variables and stored as the sorted list of
//! its points, each point being the base-`n` code of its values. By locality
//! that restriction determines support, so it also serves as the memo key.
//!
//! Implications search only the sub-teams supporting the antecedent. Those
//! form a downward-closed family, so a depth-first walk adding rows in
//! increasing order reaches each of them once, and testing the consequent at
//! the walk's leaves covers every maximal member; since the consequent is
//! persistent, a falsifier exists iff some maximal antecedent-supporting
//! sub-team fails it.

use std::collections::HashMap;

use super::{atom_truth, check_inputs, eval_term, truth, EvalConfig, EvalError};
use crate::structures::{Elem, Structure, Team};
use crate::syntax::{is_question_free, Formula, Term, Var};

type NodeId = usize;
type Point = u64;

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct EvalStats {
    pub memo_hits: u64,
    pub memo_misses: u64,
    pub memo_entries: usize,
    pub memo_bytes: usize,
    /// Set once the memo reached its byte budget and stopped growing.
    pub memo_saturated: bool,
    pub flat_shortcuts: u64,
    pub pattern_hits: u64,
    pub subteams_visited: u64,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Atomic,
    Bot,
    And(NodeId, NodeId),
    IDisj(NodeId, NodeId),
    Implies(NodeId, NodeId),
    ForAll(NodeId),
    IExists(NodeId),
    RangeAll(NodeId),
}

#[derive(Debug, Clone)]
enum Pattern {
    ValueQuestion(Term),
    Question(NodeId),
    Dep(Vec<Term>, Term),
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Parent(usize),
    Bound,
}

#[derive(Debug)]
struct Node {
    formula: Formula,
    kind: Kind,
    fv: Vec<Var>,
    flat: bool,
    pattern: Option<Pattern>,
    /// Per child: where each of the child's variables comes from.
    child_maps: Vec<Vec<Slot>>,
}

fn value_question_term(phi: &Formula) -> Option<&Term> {
    let Formula::ForAll(v, body) = phi else {
        return None;
    };
    let Formula::IDisj(pos, neg) = &**body else {
        return None;
    };
    let Formula::Implies(neg_eq, bot) = &**neg else {
        return None;
    };
    if **bot != Formula::Bot || pos != neg_eq {
        return None;
    }
    let Formula::Eq(l, r) = &**pos else {
        return None;
    };
    let t = match (l, r) {
        (Term::Var(w), t) if w == v => t,
        (t, Term::Var(w)) if w == v => t,
        _ => return None,
    };
    (!t.vars().contains(v)).then_some(t)
}

fn conjuncts<'a>(phi: &'a Formula, out: &mut Vec<&'a Formula>) {
    match phi {
        Formula::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        _ => out.push(phi),
    }
}

fn checked_pow(n: usize, k: usize) -> Option<u64> {
    (0..k).try_fold(1u64, |acc, _| acc.checked_mul(n as u64))
}

/// Fast support checker bound to one structure. Not shared between threads;
/// use one instance per worker.
pub struct FastEvaluator<'m> {
    model: &'m Structure,
    cfg: EvalConfig,
    nodes: Vec<Node>,
    index: HashMap<Formula, NodeId>,
    memo: HashMap<(NodeId, Vec<Point>), bool>,
    truth_cache: HashMap<(NodeId, Point), bool>,
    stats: EvalStats,
}

impl<'m> FastEvaluator<'m> {
    pub fn new(model: &'m Structure, cfg: EvalConfig) -> Self {
        FastEvaluator {
            model,
            cfg,
            nodes: Vec::new(),
            index: HashMap::new(),
            memo: HashMap::new(),
            truth_cache: HashMap::new(),
            stats: EvalStats::default(),
        }
    }

    pub fn stats(&self) -> &EvalStats {
        &self.stats
    }

    fn n(&self) -> usize {
        self.model.domain_size()
    }

    fn compile(&mut self, phi: &Formula) -> Result<NodeId, EvalError> {
        if let Some(&id) = self.index.get(phi) {
            return Ok(id);
        }
        let fv: Vec<Var> = phi.free_vars().into_iter().collect();
        if checked_pow(self.n(), fv.len()).is_none() {
            return Err(EvalError::PointSpaceTooLarge {
                size: self.n(),
                vars: fv.len(),
            });
        }
        let (kind, children, bound) = match phi {
            Formula::Atom(..) | Formula::Eq(..) => (Kind::Atomic, vec![], None),
            Formula::Bot => (Kind::Bot, vec![], None),
            Formula::And(a, b) | Formula::IDisj(a, b) | Formula::Implies(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                let kind = match phi {
                    Formula::And(..) => Kind::And(a, b),
                    Formula::IDisj(..) => Kind::IDisj(a, b),
                    _ => Kind::Implies(a, b),
                };
                (kind, vec![a, b], None)
            }
            Formula::ForAll(x, body) | Formula::IExists(x, body) | Formula::RangeAll(x, body) => {
                let b = self.compile(body)?;
                let kind = match phi {
                    Formula::ForAll(..) => Kind::ForAll(b),
                    Formula::IExists(..) => Kind::IExists(b),
                    _ => Kind::RangeAll(b),
                };
                (kind, vec![b], Some(x.clone()))
            }
        };
        let child_maps = children
            .iter()
            .map(|&c| {
                self.nodes[c]
                    .fv
                    .iter()
                    .map(|v| match fv.binary_search(v) {
                        Ok(i) => Slot::Parent(i),
                        Err(_) => {
                            debug_assert_eq!(Some(v), bound.as_ref());
                            Slot::Bound
                        }
                    })
                    .collect()
            })
            .collect();
        let pattern = self.detect_pattern(phi, kind);
        let node = Node {
            formula: phi.clone(),
            kind,
            fv,
            flat: is_question_free(phi),
            pattern,
            child_maps,
        };
        self.nodes.push(node);
        let id = self.nodes.len() - 1;
        self.index.insert(phi.clone(), id);
        Ok(id)
    }

    fn detect_pattern(&self, phi: &Formula, kind: Kind) -> Option<Pattern> {
        if let Some(t) = value_question_term(phi) {
            return Some(Pattern::ValueQuestion(t.clone()));
        }
        match (phi, kind) {
            (Formula::IDisj(pos, neg), Kind::IDisj(a, _))
                if **neg == Formula::not((**pos).clone()) && self.nodes[a].flat =>
            {
                Some(Pattern::Question(a))
            }
            (Formula::Implies(ante, cons), _) => {
                let y = value_question_term(cons)?;
                let mut parts = Vec::new();
                conjuncts(ante, &mut parts);
                let xs = parts
                    .into_iter()
                    .map(|p| value_question_term(p).cloned())
                    .collect::<Option<Vec<_>>>()?;
                Some(Pattern::Dep(xs, y.clone()))
            }
            _ => None,
        }
    }

    fn decode(&self, mut code: Point, k: usize) -> Vec<Elem> {
        let n = self.n() as u64;
        let mut out = vec![0; k];
        for slot in out.iter_mut().rev() {
            *slot = (code % n) as Elem;
            code /= n;
        }
        out
    }

    fn encode(&self, vals: impl Iterator<Item = Elem>) -> Point {
        let n = self.n() as u64;
        vals.fold(0, |acc, v| acc * n + v as u64)
    }

    /// Points of child `which` obtained from the parent's points, with the bound
    /// variable (if any) set to each of `bound`.
    fn project(&self, id: NodeId, which: usize, pts: &[Point], bound: &[Elem]) -> Vec<Point> {
        let node = &self.nodes[id];
        let map = &node.child_maps[which];
        let k = node.fv.len();
        let mut out = Vec::with_capacity(pts.len() * bound.len().max(1));
        for &p in pts {
            let vals = self.decode(p, k);
            if bound.is_empty() || !map.iter().any(|s| matches!(s, Slot::Bound)) {
                out.push(self.encode(map.iter().map(|s| match s {
                    Slot::Parent(i) => vals[*i],
                    Slot::Bound => bound[0],
                })));
            } else {
                for &d in bound {
                    out.push(self.encode(map.iter().map(|s| match s {
                        Slot::Parent(i) => vals[*i],
                        Slot::Bound => d,
                    })));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn env(&self, id: NodeId, p: Point) -> Vec<(Var, Elem)> {
        let node = &self.nodes[id];
        node.fv
            .iter()
            .cloned()
            .zip(self.decode(p, node.fv.len()))
            .collect()
    }

    fn term_at(&self, id: NodeId, p: Point, t: &Term) -> Result<Elem, EvalError> {
        let env = self.env(id, p);
        let lookup = |v: &Var| env.iter().find(|(w, _)| w == v).map(|(_, d)| *d);
        eval_term(self.model, t, &lookup)
    }

    /// Tarskian truth of a question-free node at one point.
    fn point_truth(&mut self, id: NodeId, p: Point) -> Result<bool, EvalError> {
        if let Some(&b) = self.truth_cache.get(&(id, p)) {
            return Ok(b);
        }
        let mut env = self.env(id, p);
        let node = &self.nodes[id];
        let b = match node.kind {
            Kind::Atomic => {
                let lookup = |v: &Var| env.iter().find(|(w, _)| w == v).map(|(_, d)| *d);
                atom_truth(self.model, &node.formula, &lookup)?
            }
            _ => truth(self.model, &mut env, &node.formula)?,
        };
        self.truth_cache.insert((id, p), b);
        Ok(b)
    }

    fn constant_over(&self, id: NodeId, pts: &[Point], t: &Term) -> Result<bool, EvalError> {
        let mut seen = None;
        for &p in pts {
            let v = self.term_at(id, p, t)?;
            match seen {
                Some(w) if w != v => return Ok(false),
                _ => seen = Some(v),
            }
        }
        Ok(true)
    }

    fn pattern(&mut self, id: NodeId, pts: &[Point]) -> Result<Option<bool>, EvalError> {
        let Some(pattern) = self.nodes[id].pattern.clone() else {
            return Ok(None);
        };
        self.stats.pattern_hits += 1;
        let verdict = match pattern {
            Pattern::ValueQuestion(t) => self.constant_over(id, pts, &t)?,
            Pattern::Question(a) => {
                let child = self.project(id, 0, pts, &[]);
                let mut seen = None;
                let mut agree = true;
                for p in child {
                    let b = self.point_truth(a, p)?;
                    if seen.is_some_and(|s| s != b) {
                        agree = false;
                        break;
                    }
                    seen = Some(b);
                }
                agree
            }
            Pattern::Dep(xs, y) => {
                let mut graph: HashMap<Vec<Elem>, Elem> = HashMap::new();
                let mut functional = true;
                for &p in pts {
                    let key = xs
                        .iter()
                        .map(|t| self.term_at(id, p, t))
                        .collect::<Result<Vec<_>, _>>()?;
                    let val = self.term_at(id, p, &y)?;
                    if *graph.entry(key).or_insert(val) != val {
                        functional = false;
                        break;
                    }
                }
                functional
            }
        };
        Ok(Some(verdict))
    }

    fn eval(&mut self, id: NodeId, pts: &[Point]) -> Result<bool, EvalError> {
        if pts.is_empty() {
            return Ok(true);
        }
        let fast = self.cfg.enable_fast_paths;
        if fast && self.nodes[id].flat {
            self.stats.flat_shortcuts += 1;
            for &p in pts {
                if !self.point_truth(id, p)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        if fast {
            if let Some(v) = self.pattern(id, pts)? {
                return Ok(v);
            }
        }
        let key = (id, pts.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(v);
        }
        self.stats.memo_misses += 1;
        let n = self.n();
        let all: Vec<Elem> = (0..n).collect();
        let v = match self.nodes[id].kind {
            Kind::Atomic => {
                let mut ok = true;
                for &p in pts {
                    if !self.point_truth(id, p)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            Kind::Bot => false,
            Kind::And(a, b) => {
                let pa = self.project(id, 0, pts, &[]);
                self.eval(a, &pa)? && {
                    let pb = self.project(id, 1, pts, &[]);
                    self.eval(b, &pb)?
                }
            }
            Kind::IDisj(a, b) => {
                let pa = self.project(id, 0, pts, &[]);
                self.eval(a, &pa)? || {
                    let pb = self.project(id, 1, pts, &[]);
                    self.eval(b, &pb)?
                }
            }
            Kind::ForAll(b) => {
                let mut ok = true;
                for d in 0..n {
                    let pb = self.project(id, 0, pts, &[d]);
                    if !self.eval(b, &pb)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            Kind::IExists(b) => {
                let mut ok = false;
                for d in 0..n {
                    let pb = self.project(id, 0, pts, &[d]);
                    if self.eval(b, &pb)? {
                        ok = true;
                        break;
                    }
                }
                ok
            }
            Kind::RangeAll(b) => {
                let pb = self.project(id, 0, pts, &all);
                self.eval(b, &pb)?
            }
            Kind::Implies(..) => self.falsifier(id, pts)?.is_none(),
        };
        self.remember(key, v);
        Ok(v)
    }

    fn remember(&mut self, key: (NodeId, Vec<Point>), v: bool) {
        let cost = 64 + 8 * key.1.len();
        if self.stats.memo_bytes + cost > self.cfg.memo_limit {
            self.stats.memo_saturated = true;
            return;
        }
        self.stats.memo_bytes += cost;
        self.memo.insert(key, v);
        self.stats.memo_entries = self.memo.len();
    }

    /// A set of the implication node's points supporting the antecedent but not the consequent.
    fn falsifier(&mut self, id: NodeId, pts: &[Point]) -> Result<Option<Vec<Point>>, EvalError> {
        let Kind::Implies(a, c) = self.nodes[id].kind else {
            unreachable!("falsifier on a non-implication")
        };
        if self.cfg.enable_fast_paths && self.nodes[c].flat {
            // Persistency of the antecedent: some single point must already fail.
            for &p in pts {
                let pa = self.project(id, 0, &[p], &[]);
                if !self.eval(a, &pa)? {
                    continue;
                }
                let pc = self.project(id, 1, &[p], &[]);
                if !self.point_truth(c, pc[0])? {
                    return Ok(Some(vec![p]));
                }
            }
            return Ok(None);
        }
        if self.cfg.enable_fast_paths && self.nodes[a].flat {
            // The antecedent holds exactly on the sub-teams of its truth set.
            let mut inside = Vec::new();
            for &p in pts {
                let pa = self.project(id, 0, &[p], &[]);
                if self.point_truth(a, pa[0])? {
                    inside.push(p);
                }
            }
            let pc = self.project(id, 1, &inside, &[]);
            return Ok((!self.eval(c, &pc)?).then_some(inside));
        }
        let mut current = Vec::new();
        self.search(id, a, c, pts, 0, &mut current)
    }

    fn search(
        &mut self,
        id: NodeId,
        a: NodeId,
        c: NodeId,
        pts: &[Point],
        start: usize,
        current: &mut Vec<Point>,
    ) -> Result<Option<Vec<Point>>, EvalError> {
        self.stats.subteams_visited += 1;
        let mut leaf = true;
        for j in start..pts.len() {
            current.push(pts[j]);
            let pa = self.project(id, 0, current, &[]);
            if self.eval(a, &pa)? {
                leaf = false;
                if let Some(w) = self.search(id, a, c, pts, j + 1, current)? {
                    return Ok(Some(w));
                }
            }
            current.pop();
        }
        if leaf {
            let pc = self.project(id, 1, current, &[]);
            if !self.eval(c, &pc)? {
                return Ok(Some(current.clone()));
            }
        }
        Ok(None)
    }

    fn team_points(&self, id: NodeId, team: &Team) -> Vec<Point> {
        let cols: Vec<usize> = self.nodes[id]
            .fv
            .iter()
            .map(|v| team.var_index(v).expect("checked by caller"))
            .collect();
        let mut pts: Vec<Point> = team
            .rows()
            .iter()
            .map(|r| self.encode(cols.iter().map(|&c| r[c])))
            .collect();
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    pub fn supports(&mut self, team: &Team, phi: &Formula) -> Result<bool, EvalError> {
        check_inputs(self.model, team, phi)?;
        let id = self.compile(phi)?;
        let pts = self.team_points(id, team);
        self.eval(id, &pts)
    }

    /// Some sub-team of `team` supporting `antecedent` but not `consequent`, or
    /// `None` exactly when `team` supports the implication. The witness is the
    /// first one met by the depth-first search (rows added in increasing order),
    /// lifted back to all rows of `team` that agree with it on the free variables.
    pub fn find_falsifier(
        &mut self,
        team: &Team,
        antecedent: &Formula,
        consequent: &Formula,
    ) -> Result<Option<Team>, EvalError> {
        let phi = Formula::implies(antecedent.clone(), consequent.clone());
        check_inputs(self.model, team, &phi)?;
        let id = self.compile(&phi)?;
        let pts = self.team_points(id, team);
        let Some(mut witness) = self.falsifier(id, &pts)? else {
            return Ok(None);
        };
        witness.sort_unstable();
        let cols: Vec<usize> = self.nodes[id]
            .fv
            .iter()
            .map(|v| team.var_index(v).expect("checked"))
            .collect();
        let mask = team
            .rows()
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                witness
                    .binary_search(&self.encode(cols.iter().map(|&c| r[c])))
                    .is_ok()
            })
            .fold(0u64, |m, (i, _)| m | 1 << i);
        Ok(Some(team.select(mask)))
    }
}

/// One-shot fast support check.
pub fn supports_fast(
    m: &Structure,
    team: &Team,
    phi: &Formula,
    cfg: &EvalConfig,
) -> Result<bool, EvalError> {
    FastEvaluator::new(m, *cfg).supports(team, phi)
}
