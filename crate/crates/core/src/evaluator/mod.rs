//! Support of formulas at teams.
//!
//! [`supports`] follows the inductive clauses literally and serves as the
//! oracle; [`FastEvaluator`] computes the same relation with short-circuits,
//! closed forms for value questions and dependence, and memoization.

mod fast;

pub use fast::{supports_fast, EvalStats, FastEvaluator};

use rayon::prelude::*;
use thiserror::Error;

use crate::structures::{
    Assignment, Elem, Relation, Structure, StructureError, Team, DEFAULT_SUBTEAM_CAP,
};
use crate::syntax::{is_classical, Formula, Term, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct EvalConfig {
    /// Largest team (or state) whose sub-teams the reference evaluator enumerates.
    pub naive_subteam_cap: usize,
    /// Enables the flat short-circuit and the closed-form patterns of the fast evaluator.
    pub enable_fast_paths: bool,
    /// Approximate byte budget of the fast evaluator's memo table.
    pub memo_limit: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            naive_subteam_cap: DEFAULT_SUBTEAM_CAP,
            enable_fast_paths: true,
            memo_limit: 64 << 20,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("formula is not classical")]
    NotClassical,
    #[error("variable `{0}` is not assigned")]
    UnboundVariable(String),
    #[error("symbol `{0}` is not interpreted with {1} arguments")]
    UninterpretedSymbol(String, usize),
    #[error("implication over {size} rows exceeds the sub-team cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("formula has free variables {0:?}")]
    NotASentence(Vec<String>),
    #[error("the range quantifier [{0}] is not part of this language")]
    RangeQuantifier(String),
    #[error("point space {size}^{vars} does not fit in 64 bits")]
    PointSpaceTooLarge { size: usize, vars: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Value of `t` under `lookup`.
pub fn eval_term(
    m: &Structure,
    t: &Term,
    lookup: &impl Fn(&Var) -> Option<Elem>,
) -> Result<Elem, EvalError> {
    match t {
        Term::Var(v) => lookup(v).ok_or_else(|| EvalError::UnboundVariable(v.name().to_string())),
        Term::App(f, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(m, a, lookup))
                .collect::<Result<Vec<_>, _>>()?;
            m.apply(f, &vals)
                .ok_or_else(|| EvalError::UninterpretedSymbol(f.clone(), vals.len()))
        }
    }
}

/// Truth of an atomic formula (`P(…)` or `t = t`).
pub(crate) fn atom_truth(
    m: &Structure,
    phi: &Formula,
    lookup: &impl Fn(&Var) -> Option<Elem>,
) -> Result<bool, EvalError> {
    match phi {
        Formula::Atom(p, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(m, a, lookup))
                .collect::<Result<Vec<_>, _>>()?;
            m.holds(p, &vals)
                .ok_or_else(|| EvalError::UninterpretedSymbol(p.clone(), vals.len()))
        }
        Formula::Eq(a, b) => Ok(eval_term(m, a, lookup)? == eval_term(m, b, lookup)?),
        _ => unreachable!("atom_truth on a compound formula"),
    }
}

/// Tarskian truth over an environment stack (later bindings shadow earlier ones).
/// The range quantifier is read as `forall`, which is sound for question-free bodies.
pub(crate) fn truth(
    m: &Structure,
    env: &mut Vec<(Var, Elem)>,
    phi: &Formula,
) -> Result<bool, EvalError> {
    match phi {
        Formula::Atom(..) | Formula::Eq(..) => {
            let lookup = |v: &Var| env.iter().rev().find(|(w, _)| w == v).map(|(_, d)| *d);
            atom_truth(m, phi, &lookup)
        }
        Formula::Bot => Ok(false),
        Formula::And(a, b) => Ok(truth(m, env, a)? && truth(m, env, b)?),
        Formula::Implies(a, b) => Ok(!truth(m, env, a)? || truth(m, env, b)?),
        Formula::ForAll(x, body) | Formula::RangeAll(x, body) => {
            for d in m.domain() {
                env.push((x.clone(), d));
                let r = truth(m, env, body);
                env.pop();
                if !r? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::IDisj(..) | Formula::IExists(..) => Err(EvalError::NotClassical),
    }
}

/// Standard Tarskian truth of a classical formula under `g`.
pub fn tarski(m: &Structure, g: &Assignment, alpha: &Formula) -> Result<bool, EvalError> {
    if !is_classical(alpha) {
        return Err(EvalError::NotClassical);
    }
    let mut env: Vec<(Var, Elem)> = g.iter().map(|(v, d)| (v.clone(), d)).collect();
    truth(m, &mut env, alpha)
}

fn check_inputs(m: &Structure, team: &Team, phi: &Formula) -> Result<(), EvalError> {
    if let Some(v) = phi
        .free_vars()
        .into_iter()
        .find(|v| team.var_index(v).is_none())
    {
        return Err(EvalError::UnboundVariable(v.name().to_string()));
    }
    team.check_domain(m.domain_size())?;
    Ok(())
}

/// Reference support relation: every clause implemented literally, implication by
/// enumerating all sub-teams.
pub fn supports(
    m: &Structure,
    team: &Team,
    phi: &Formula,
    cfg: &EvalConfig,
) -> Result<bool, EvalError> {
    check_inputs(m, team, phi)?;
    reference(m, team, phi, cfg)
}

fn reference(
    m: &Structure,
    team: &Team,
    phi: &Formula,
    cfg: &EvalConfig,
) -> Result<bool, EvalError> {
    let n = m.domain_size();
    match phi {
        Formula::Atom(..) | Formula::Eq(..) => {
            for row in team.rows() {
                let lookup = |v: &Var| team.var_index(v).map(|i| row[i]);
                if !atom_truth(m, phi, &lookup)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Bot => Ok(team.is_empty()),
        Formula::And(a, b) => Ok(reference(m, team, a, cfg)? && reference(m, team, b, cfg)?),
        Formula::IDisj(a, b) => Ok(reference(m, team, a, cfg)? || reference(m, team, b, cfg)?),
        Formula::Implies(a, b) => {
            let masks =
                team.subteams(cfg.naive_subteam_cap)
                    .map_err(|_| EvalError::CapExceeded {
                        size: team.len(),
                        cap: cfg.naive_subteam_cap,
                    })?;
            for mask in masks {
                let sub = team.select(mask);
                if reference(m, &sub, a, cfg)? && !reference(m, &sub, b, cfg)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::ForAll(x, body) => {
            for d in m.domain() {
                if !reference(m, &team.extend_const(x, d, n)?, body, cfg)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::IExists(x, body) => {
            for d in m.domain() {
                if reference(m, &team.extend_const(x, d, n)?, body, cfg)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::RangeAll(x, body) => {
            let all: Vec<Elem> = m.domain().collect();
            reference(m, &team.extend_all(x, &all, n)?, body, cfg)
        }
    }
}

/// Satisfaction of a sentence: support at the team holding only the empty assignment.
pub fn satisfies(m: &Structure, sentence: &Formula, cfg: &EvalConfig) -> Result<bool, EvalError> {
    ensure_sentence(sentence)?;
    supports(m, &Team::unit(), sentence, cfg)
}

/// [`satisfies`] computed with the fast evaluator.
pub fn satisfies_fast(
    m: &Structure,
    sentence: &Formula,
    cfg: &EvalConfig,
) -> Result<bool, EvalError> {
    ensure_sentence(sentence)?;
    supports_fast(m, &Team::unit(), sentence, cfg)
}

pub(crate) fn ensure_sentence(phi: &Formula) -> Result<(), EvalError> {
    let fv = phi.free_vars();
    if fv.is_empty() {
        Ok(())
    } else {
        Err(EvalError::NotASentence(
            fv.iter().map(|v| v.name().to_string()).collect(),
        ))
    }
}

/// The least sub-team (by row mask) of `team` that supports `antecedent` but not
/// `consequent`, or `None` exactly when `team` supports the implication.
pub fn find_falsifying_subteam(
    m: &Structure,
    team: &Team,
    antecedent: &Formula,
    consequent: &Formula,
    cfg: &EvalConfig,
) -> Result<Option<Team>, EvalError> {
    check_inputs(m, team, antecedent)?;
    check_inputs(m, team, consequent)?;
    let masks = team
        .subteams(cfg.naive_subteam_cap)
        .map_err(|_| EvalError::CapExceeded {
            size: team.len(),
            cap: cfg.naive_subteam_cap,
        })?;
    // Parallel search; find_map_first keeps the least mask.
    let hit = masks.into_par_iter().find_map_first(|mask| {
        let sub = team.select(mask);
        let verdict = reference(m, &sub, antecedent, cfg)
            .and_then(|a| Ok(a && !reference(m, &sub, consequent, cfg)?));
        match verdict {
            Ok(true) => Some(Ok(sub)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        }
    });
    hit.transpose()
}

/// Shape of the relation `Y[x,y]` of a team.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepProfile {
    pub is_function: bool,
    pub is_injective: bool,
    pub dom_is_full: bool,
    pub ran_is_full: bool,
}

impl DepProfile {
    pub fn of_relation(r: &Relation, n: usize) -> Self {
        assert_eq!(r.arity, 2, "binary relation expected");
        let mut image: Vec<Option<Elem>> = vec![None; n];
        let mut preimage: Vec<Option<Elem>> = vec![None; n];
        let (mut is_function, mut is_injective) = (true, true);
        for t in &r.tuples {
            let (a, b) = (t[0], t[1]);
            match image[a] {
                Some(c) if c != b => is_function = false,
                _ => image[a] = Some(b),
            }
            match preimage[b] {
                Some(c) if c != a => is_injective = false,
                _ => preimage[b] = Some(a),
            }
        }
        DepProfile {
            is_function,
            is_injective,
            dom_is_full: image.iter().all(Option::is_some),
            ran_is_full: preimage.iter().all(Option::is_some),
        }
    }

    /// An injective total function that is not surjective.
    pub fn is_dedekind_witness(&self) -> bool {
        self.is_function && self.is_injective && self.dom_is_full && !self.ran_is_full
    }
}

/// Profile of `Y[x,y]` for a team over (at least) the variables `x` and `y`.
pub fn dep_profile(m: &Structure, team: &Team) -> Result<DepProfile, EvalError> {
    team.check_domain(m.domain_size())?;
    let r = team.team_relation(&[Var::new("x"), Var::new("y")])?;
    Ok(DepProfile::of_relation(&r, m.domain_size()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::syntax::Signature;

    fn empty(n: usize) -> Structure {
        Structure::new(n).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse(text, &Signature::new()).unwrap()
    }

    #[test]
    fn tarski_cases() {
        let m = empty(2);
        let g = Assignment::new().with("x", 1).with("y", 1);
        assert!(tarski(&m, &g, &f("x = y")).unwrap());
        assert!(tarski(&m, &Assignment::new(), &f("forall x. exists y. x != y")).unwrap());
        assert!(!tarski(
            &empty(1),
            &Assignment::new(),
            &f("forall x. exists y. x != y")
        )
        .unwrap());
        assert_eq!(tarski(&m, &g, &f("?(x = y)")), Err(EvalError::NotClassical));
        assert!(matches!(
            tarski(&m, &Assignment::new(), &f("x = y")),
            Err(EvalError::UnboundVariable(_))
        ));
    }

    #[test]
    fn empty_team_supports_everything() {
        let m = empty(3);
        let cfg = EvalConfig::default();
        let t = Team::empty(vec![Var::new("x"), Var::new("y")]);
        for text in [
            "bot",
            "x = y",
            "iexists z. z != z",
            "[x]bot",
            "dep(x;y) -> bot",
        ] {
            assert!(supports(&m, &t, &f(text), &cfg).unwrap(), "{text}");
        }
    }

    #[test]
    fn value_question_constancy() {
        let m = empty(3);
        let cfg = EvalConfig::default();
        let lam = f("lam y");
        let constant = Team::from_names(&["x", "y"], vec![vec![0, 2], vec![1, 2]]).unwrap();
        let varying = Team::from_names(&["x", "y"], vec![vec![0, 2], vec![0, 1]]).unwrap();
        assert!(supports(&m, &constant, &lam, &cfg).unwrap());
        assert!(!supports(&m, &varying, &lam, &cfg).unwrap());
    }

    #[test]
    fn quantifier_clauses() {
        let m = empty(2);
        let cfg = EvalConfig::default();
        let unit = Team::unit();
        assert!(supports(&m, &unit, &f("iexists x. forall y. x = x"), &cfg).unwrap());
        assert!(!supports(&m, &unit, &f("iexists x. forall y. x = y"), &cfg).unwrap());
        // [x] builds one team with both values; lam x then fails, forall x. lam x holds.
        assert!(!supports(&m, &unit, &f("[x] lam x"), &cfg).unwrap());
        assert!(supports(&m, &unit, &f("forall x. lam x"), &cfg).unwrap());
    }

    #[test]
    fn cap_is_enforced_on_implication() {
        let m = empty(3);
        let cfg = EvalConfig {
            naive_subteam_cap: 4,
            ..EvalConfig::default()
        };
        let t = Team::maximal(&[Var::new("x"), Var::new("y")], 3).unwrap();
        assert!(matches!(
            supports(&m, &t, &f("dep(x;y)"), &cfg),
            Err(EvalError::CapExceeded { size: 9, cap: 4 })
        ));
        assert!(supports(&m, &t, &f("x = x"), &cfg).unwrap());
    }

    #[test]
    fn open_formula_is_not_a_sentence() {
        assert!(matches!(
            satisfies(&empty(2), &f("x = x"), &EvalConfig::default()),
            Err(EvalError::NotASentence(_))
        ));
    }

    #[test]
    fn unbound_and_out_of_domain() {
        let m = empty(2);
        let cfg = EvalConfig::default();
        let t = Team::from_names(&["x"], vec![vec![0]]).unwrap();
        assert!(matches!(
            supports(&m, &t, &f("x = y"), &cfg),
            Err(EvalError::UnboundVariable(_))
        ));
        let t = Team::from_names(&["x"], vec![vec![5]]).unwrap();
        assert!(matches!(
            supports(&m, &t, &f("x = x"), &cfg),
            Err(EvalError::Structure(_))
        ));
    }

    #[test]
    fn dep_profile_cases() {
        let m = empty(2);
        let perm = Team::from_names(&["x", "y"], vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(
            dep_profile(&m, &perm).unwrap(),
            DepProfile {
                is_function: true,
                is_injective: true,
                dom_is_full: true,
                ran_is_full: true
            }
        );
        let collapse = Team::from_names(&["x", "y"], vec![vec![0, 1], vec![1, 1]]).unwrap();
        let p = dep_profile(&m, &collapse).unwrap();
        assert!(p.is_function && !p.is_injective);
        assert!(dep_profile(&m, &Team::from_names(&["x"], vec![vec![0]]).unwrap()).is_err());
    }

    #[test]
    fn bot_antecedent_has_no_falsifier() {
        let m = empty(2);
        let t = Team::maximal(&[Var::new("x"), Var::new("y")], 2).unwrap();
        let cfg = EvalConfig::default();
        for cons in ["bot", "x = y", "lam x"] {
            assert_eq!(
                find_falsifying_subteam(&m, &t, &Formula::Bot, &f(cons), &cfg).unwrap(),
                None
            );
        }
    }

    #[test]
    fn falsifier_is_least_mask() {
        let m = empty(2);
        let cfg = EvalConfig::default();
        let t = Team::maximal(&[Var::new("x"), Var::new("y")], 2).unwrap();
        // Rows: 00, 01, 10, 11. The first sub-team breaking x = y is {01}.
        let w = find_falsifying_subteam(&m, &t, &Formula::top(), &f("x = y"), &cfg)
            .unwrap()
            .unwrap();
        assert_eq!(w.rows(), &[vec![0, 1]]);
        let phi = Formula::implies(Formula::top(), f("x = y"));
        assert!(!supports(&m, &t, &phi, &cfg).unwrap());
    }
}
