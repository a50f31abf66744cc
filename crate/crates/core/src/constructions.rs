//! Named formulas, the 3SAT reduction, and the brute-force SAT oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::evaluator::{satisfies, satisfies_fast, DepProfile, EvalConfig, EvalError};
use crate::parser::parse;
use crate::structures::{Elem, Relation, Structure, StructureError, Team, TeamSpace};
use crate::syntax::{Formula, Signature, Term, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("unknown formula `{0}`; expected one of {names}", names = PaperFormula::NAMES.join(", "))]
    UnknownFormula(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("the oracle handles at most {max} variables, got {found}")]
    TooManyVariables { found: usize, max: usize },
    #[error("the team does not support dep(x;y)")]
    DependenceViolated,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// The formulas reachable through [`paper_formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PaperFormula {
    PhiXy,
    PsiFiniteness,
    PsiNegInfinity,
    PhiAb,
    BoundedPredecessors,
    ConpPhi,
}

impl PaperFormula {
    pub const ALL: [PaperFormula; 6] = [
        PaperFormula::PhiXy,
        PaperFormula::PsiFiniteness,
        PaperFormula::PsiNegInfinity,
        PaperFormula::PhiAb,
        PaperFormula::BoundedPredecessors,
        PaperFormula::ConpPhi,
    ];

    pub const NAMES: [&'static str; 6] = [
        "phi_xy",
        "psi_finiteness",
        "psi_neg_infinity",
        "phi_ab",
        "bounded_predecessors",
        "conp_phi",
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[Self::ALL.iter().position(|&f| f == self).expect("listed")]
    }

    /// The smallest signature the formula is written over.
    pub fn signature(self) -> Signature {
        match self {
            PaperFormula::PhiAb => Signature::new().with_constant("a").with_constant("b"),
            PaperFormula::BoundedPredecessors => Signature::new().with_predicate("Le", 2),
            PaperFormula::ConpPhi => Signature::new()
                .with_predicate("V", 1)
                .with_predicate("C", 1),
            _ => Signature::new(),
        }
    }

    pub fn formula(self) -> Formula {
        let text = match self {
            PaperFormula::PhiXy => PHI_XY,
            PaperFormula::PsiFiniteness => "[x][y](dep(x;y) & dep(y;x) & iexists z. z != y -> iexists u. u != x)",
            PaperFormula::PsiNegInfinity => {
                return Formula::not(PaperFormula::PsiFiniteness.formula());
            }
            PaperFormula::PhiAb => "dep(a;b) & dep(b;a) & iexists z. z != b -> iexists u. u != a",
            PaperFormula::BoundedPredecessors => {
                "forall z. [x][y](Le(x, z) & Le(y, z) & dep(x;y) & dep(y;x) & iexists u. (Le(u, z) & u != y) \
                 -> iexists t. (Le(t, z) & t != x))"
            }
            PaperFormula::ConpPhi => "dep(x;y) -> iexists w. (C(w) & w != z)",
        };
        parse(text, &self.signature()).expect("built-in formulas parse")
    }
}

const PHI_XY: &str = "dep(x;y) & dep(y;x) & iexists z. z != y -> iexists u. u != x";

impl FromStr for PaperFormula {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| ConstructionError::UnknownFormula(s.to_string()))
    }
}

impl fmt::Display for PaperFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn paper_formula(name: &str) -> Result<Formula, ConstructionError> {
    Ok(name.parse::<PaperFormula>()?.formula())
}

/// The antecedent and consequent of the top-level implication of `phi_xy`.
pub fn phi_xy_parts() -> (Formula, Formula) {
    match PaperFormula::PhiXy.formula() {
        Formula::Implies(a, b) => (*a, *b),
        _ => unreachable!("phi_xy is an implication"),
    }
}

/// `exists x1 … exists xn. ⋀_{i<j} xi != xj`, a classical sentence.
pub fn at_least_n(n: usize) -> Formula {
    assert!(n >= 1, "at_least_n needs n >= 1");
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut body = Formula::conj((0..n).flat_map(|i| {
        let names = &names;
        (i + 1..n)
            .map(move |j| Formula::not(Formula::eq(Term::var(&names[i]), Term::var(&names[j]))))
    }));
    for x in names.iter().rev() {
        body = Formula::not(Formula::forall(x, Formula::not(body)));
    }
    body
}

/// Every linear order on `0..n`, as a structure interpreting `Le`, one per
/// permutation of the domain.
pub fn linear_orders(n: usize) -> Result<Vec<Structure>, ConstructionError> {
    let mut out = Vec::new();
    let mut perm: Vec<Elem> = (0..n).collect();
    loop {
        let rank: Vec<usize> = {
            let mut r = vec![0; n];
            for (pos, &e) in perm.iter().enumerate() {
                r[e] = pos;
            }
            r
        };
        let mut s = Structure::new(n)?;
        let tuples: Vec<[Elem; 2]> = (0..n)
            .flat_map(|a| (0..n).map(move |b| [a, b]))
            .filter(|&[a, b]| rank[a] <= rank[b])
            .collect();
        s.set_predicate("Le", 2, tuples)?;
        out.push(s);
        if !next_permutation(&mut perm) {
            return Ok(out);
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p
        .iter()
        .rposition(|&v| v > p[i])
        .expect("exists past a rise");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// A literal: a variable index and a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

/// A 3-CNF formula over variables `0..variable_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CnfInstance {
    variable_count: usize,
    clauses: Vec<[Literal; 3]>,
}

impl CnfInstance {
    pub fn new(
        variable_count: usize,
        clauses: Vec<[Literal; 3]>,
    ) -> Result<Self, ConstructionError> {
        if variable_count == 0 {
            return Err(ConstructionError::InvalidInstance("no variables".into()));
        }
        if let Some(l) = clauses.iter().flatten().find(|l| l.var >= variable_count) {
            return Err(ConstructionError::InvalidInstance(format!(
                "variable {} out of range 0..{variable_count}",
                l.var
            )));
        }
        Ok(CnfInstance {
            variable_count,
            clauses,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    /// Parses DIMACS CNF. Every clause must have exactly three literals.
    pub fn from_dimacs(text: &str) -> Result<Self, ConstructionError> {
        let err = |line: usize, message: String| ConstructionError::Dimacs { line, message };
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<Literal> = Vec::new();
        let mut pending_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') || line == "%" {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                match parts.as_slice() {
                    ["p", "cnf", v, c] => {
                        let v = v
                            .parse()
                            .map_err(|_| err(lineno, format!("bad variable count `{v}`")))?;
                        let c = c
                            .parse()
                            .map_err(|_| err(lineno, format!("bad clause count `{c}`")))?;
                        header = Some((v, c));
                    }
                    _ => return Err(err(lineno, "expected `p cnf <vars> <clauses>`".into())),
                }
                continue;
            }
            let (vars, _) =
                header.ok_or_else(|| err(lineno, "clause before the problem line".into()))?;
            for tok in line.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| err(lineno, format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    if pending.len() != 3 {
                        return Err(err(
                            pending_line.max(lineno),
                            format!("clause has {} literals, expected 3", pending.len()),
                        ));
                    }
                    clauses.push([pending[0], pending[1], pending[2]]);
                    pending.clear();
                    continue;
                }
                let v = lit.unsigned_abs() as usize;
                if v > vars {
                    return Err(err(
                        lineno,
                        format!("variable {v} exceeds declared count {vars}"),
                    ));
                }
                if pending.is_empty() {
                    pending_line = lineno;
                }
                pending.push(Literal {
                    var: v - 1,
                    positive: lit > 0,
                });
            }
        }
        if !pending.is_empty() {
            return Err(err(pending_line, "clause is not terminated by 0".into()));
        }
        let (vars, count) = header.ok_or_else(|| err(0, "missing problem line".into()))?;
        if count != clauses.len() {
            return Err(err(
                0,
                format!("header declares {count} clauses, found {}", clauses.len()),
            ));
        }
        CnfInstance::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let v = l.var as i64 + 1;
                out.push_str(&format!("{} ", if l.positive { v } else { -v }));
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for CnfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            f.write_str("(")?;
            for (j, l) in c.iter().enumerate() {
                if j > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{}p{}", if l.positive { "" } else { "~" }, l.var)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub const SAT_ORACLE_MAX_VARS: usize = 24;

fn assignment_of(bits: u64, k: usize) -> Vec<bool> {
    (0..k).map(|i| bits >> i & 1 == 1).collect()
}

/// The least satisfying assignment (variable `i` is bit `i`), by brute force.
pub fn find_model(cnf: &CnfInstance) -> Result<Option<Vec<bool>>, ConstructionError> {
    let k = cnf.variable_count;
    if k > SAT_ORACLE_MAX_VARS {
        return Err(ConstructionError::TooManyVariables {
            found: k,
            max: SAT_ORACLE_MAX_VARS,
        });
    }
    Ok((0..1u64 << k)
        .into_par_iter()
        .find_first(|&bits| cnf.evaluate(&assignment_of(bits, k)))
        .map(|bits| assignment_of(bits, k)))
}

pub fn sat_oracle(cnf: &CnfInstance) -> Result<bool, ConstructionError> {
    Ok(find_model(cnf)?.is_some())
}

/// Where each kind of element lives in the reduction domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionLayout {
    pub clauses: Range<Elem>,
    pub positions: Range<Elem>,
    pub variables: Range<Elem>,
    pub parity_false: Elem,
    pub parity_true: Elem,
}

impl ReductionLayout {
    pub fn domain_size(&self) -> usize {
        self.parity_true + 1
    }

    pub fn variable_elem(&self, var: usize) -> Elem {
        self.variables.start + var
    }
}

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub structure: Structure,
    pub team: Team,
    pub formula: Formula,
    pub layout: ReductionLayout,
}

impl ReductionOutput {
    pub fn antecedent(&self) -> &Formula {
        match &self.formula {
            Formula::Implies(a, _) => a,
            _ => unreachable!("conp_phi is an implication"),
        }
    }

    pub fn consequent(&self) -> &Formula {
        match &self.formula {
            Formula::Implies(_, b) => b,
            _ => unreachable!("conp_phi is an implication"),
        }
    }

    /// The partial assignment read off a sub-team: variable `p` is true iff some
    /// row has `x = p` and `y` true.
    pub fn extract_assignment(&self, y: &Team) -> Result<BTreeMap<usize, bool>, ConstructionError> {
        let r = y.team_relation(&[Var::new("x"), Var::new("y")])?;
        if !DepProfile::of_relation(&r, self.layout.domain_size()).is_function {
            return Err(ConstructionError::DependenceViolated);
        }
        Ok(r.tuples
            .iter()
            .filter(|t| self.layout.variables.contains(&t[0]))
            .map(|t| {
                (
                    t[0] - self.layout.variables.start,
                    t[1] == self.layout.parity_true,
                )
            })
            .collect())
    }
}

/// Builds the structure, team over `(z, u, x, y)`, and formula of the reduction.
pub fn encode_3sat(cnf: &CnfInstance) -> Result<ReductionOutput, ConstructionError> {
    let m = cnf.clauses.len();
    if m == 0 {
        return Err(ConstructionError::InvalidInstance("no clauses".into()));
    }
    let k = cnf.variable_count;
    let layout = ReductionLayout {
        clauses: 0..m,
        positions: m..m + 3,
        variables: m + 3..m + 3 + k,
        parity_false: m + 3 + k,
        parity_true: m + 4 + k,
    };
    let mut structure = Structure::new(layout.domain_size())?;
    structure.set_predicate("V", 1, layout.variables.clone().map(|e| [e]))?;
    structure.set_predicate("C", 1, layout.clauses.clone().map(|e| [e]))?;
    let mut rows = Vec::with_capacity(3 * m);
    for (i, clause) in cnf.clauses.iter().enumerate() {
        for (j, lit) in clause.iter().enumerate() {
            let parity = if lit.positive {
                layout.parity_true
            } else {
                layout.parity_false
            };
            rows.push((
                i,
                layout.positions.start + j,
                layout.variable_elem(lit.var),
                parity,
            ));
        }
    }
    let team = Team::from_names(
        &["z", "u", "x", "y"],
        rows.into_iter()
            .map(|(z, u, x, y)| vec![z, u, x, y])
            .collect(),
    )?;
    Ok(ReductionOutput {
        structure,
        team,
        formula: PaperFormula::ConpPhi.formula(),
        layout,
    })
}

fn random_instance(
    rng: &mut ChaCha8Rng,
    k: usize,
    m: usize,
    polarity: Option<bool>,
) -> CnfInstance {
    let clauses = (0..m)
        .map(|_| {
            std::array::from_fn(|_| Literal {
                var: rng.gen_range(0..k),
                positive: polarity.unwrap_or_else(|| rng.gen_bool(0.5)),
            })
        })
        .collect();
    CnfInstance::new(k, clauses).expect("in range")
}

/// A fixed, reproducible collection of 3-CNFs with at most three variables and
/// four clauses, mixing satisfiable and unsatisfiable cases.
pub fn standard_instances() -> Vec<CnfInstance> {
    let (p, q) = (0, 1);
    let mut out = vec![
        CnfInstance::new(1, vec![[Literal::pos(p); 3]]).expect("valid"),
        CnfInstance::new(1, vec![[Literal::neg(p); 3]]).expect("valid"),
        CnfInstance::new(1, vec![[Literal::pos(p); 3], [Literal::neg(p); 3]]).expect("valid"),
        CnfInstance::new(
            2,
            vec![
                [Literal::pos(p), Literal::pos(p), Literal::pos(q)],
                [Literal::pos(p), Literal::pos(p), Literal::neg(q)],
                [Literal::neg(p), Literal::neg(p), Literal::pos(q)],
                [Literal::neg(p), Literal::neg(p), Literal::neg(q)],
            ],
        )
        .expect("valid"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x3_5A7);
    for k in 1..=3 {
        for m in 1..=4 {
            out.push(random_instance(&mut rng, k, m, Some(true)));
            out.push(random_instance(&mut rng, k, m, Some(false)));
            for _ in 0..16 {
                out.push(random_instance(&mut rng, k, m, None));
            }
        }
    }
    // Clauses with one or two distinct literals, padded to width three; these
    // are unsatisfiable far more often than uniformly drawn ones.
    for k in 1..=2 {
        for m in 2..=4 {
            for _ in 0..16 {
                let clauses = (0..m)
                    .map(|_| {
                        let a = Literal {
                            var: rng.gen_range(0..k),
                            positive: rng.gen_bool(0.5),
                        };
                        let b = if rng.gen_bool(0.5) {
                            a
                        } else {
                            Literal {
                                var: rng.gen_range(0..k),
                                positive: rng.gen_bool(0.5),
                            }
                        };
                        [a, a, b]
                    })
                    .collect();
                out.push(CnfInstance::new(k, clauses).expect("in range"));
            }
        }
    }
    out
}

/// Counts over all teams on `(x, y)` for the empty-signature structure of size `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitenessReport {
    pub domain_size: usize,
    pub psi_satisfied: bool,
    pub neg_psi_satisfied: bool,
    pub evaluator: &'static str,
    pub teams: u64,
    pub functions: u64,
    pub injective: u64,
    pub total: u64,
    pub surjective: u64,
    pub injective_total_functions: u64,
    pub dedekind_witnesses: u64,
}

/// Evaluates `psi_finiteness` and its negation at size `n`, and tallies the
/// relation profiles of every team over `(x, y)`. The reference evaluator is used
/// up to size 3.
pub fn finiteness_report(
    n: usize,
    cfg: &EvalConfig,
) -> Result<FinitenessReport, ConstructionError> {
    let m = Structure::new(n)?;
    let psi = PaperFormula::PsiFiniteness.formula();
    let neg = PaperFormula::PsiNegInfinity.formula();
    let reference = n <= 3;
    let eval = |f: &Formula| {
        if reference {
            satisfies(&m, f, cfg)
        } else {
            satisfies_fast(&m, f, cfg)
        }
    };
    let (psi_satisfied, neg_psi_satisfied) = (eval(&psi)?, eval(&neg)?);
    let space = TeamSpace::new(&[Var::new("x"), Var::new("y")], n, 24)?;
    let profiles: Vec<DepProfile> = (0..space.count())
        .into_par_iter()
        .map(|mask| {
            let r: Relation = space
                .get(mask)
                .team_relation(&[Var::new("x"), Var::new("y")])
                .expect("vars present");
            DepProfile::of_relation(&r, n)
        })
        .collect();
    let count = |f: fn(&DepProfile) -> bool| profiles.iter().filter(|p| f(p)).count() as u64;
    Ok(FinitenessReport {
        domain_size: n,
        psi_satisfied,
        neg_psi_satisfied,
        evaluator: if reference { "reference" } else { "fast" },
        teams: space.count(),
        functions: count(|p| p.is_function),
        injective: count(|p| p.is_injective),
        total: count(|p| p.dom_is_full),
        surjective: count(|p| p.ran_is_full),
        injective_total_functions: count(|p| p.is_function && p.is_injective && p.dom_is_full),
        dedekind_witnesses: count(DepProfile::is_dedekind_witness),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{supports, supports_fast, tarski};
    use crate::parser::render;
    use crate::structures::Assignment;
    use crate::syntax::is_classical;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    #[test]
    fn names_roundtrip_and_unknown_name() {
        for f in PaperFormula::ALL {
            assert_eq!(f.name().parse::<PaperFormula>().unwrap(), f);
        }
        assert!(matches!(
            paper_formula("psi"),
            Err(ConstructionError::UnknownFormula(_))
        ));
    }

    #[test]
    fn free_variables() {
        let fv: Vec<String> = PaperFormula::PhiXy
            .formula()
            .free_vars()
            .iter()
            .map(|v| v.name().to_string())
            .collect();
        assert_eq!(fv, ["x", "y"]);
        assert!(PaperFormula::PsiFiniteness.formula().is_sentence());
        assert!(PaperFormula::PhiAb.formula().is_sentence());
        assert!(PaperFormula::BoundedPredecessors.formula().is_sentence());
        let conp: Vec<String> = PaperFormula::ConpPhi
            .formula()
            .free_vars()
            .iter()
            .map(|v| v.name().to_string())
            .collect();
        assert_eq!(conp, ["x", "y", "z"]);
    }

    #[test]
    fn psi_is_range_quantified_phi() {
        let psi = PaperFormula::PsiFiniteness.formula();
        let expected =
            Formula::range_all("x", Formula::range_all("y", PaperFormula::PhiXy.formula()));
        assert_eq!(psi, expected);
        assert_eq!(PaperFormula::PsiNegInfinity.formula(), Formula::not(psi));
    }

    #[test]
    fn at_least_n_shape_and_truth() {
        assert!(is_classical(&at_least_n(3)));
        assert_eq!(
            render(&at_least_n(1)),
            render(&Formula::not(Formula::forall(
                "x1",
                Formula::not(Formula::top())
            )))
        );
        for n in 1..=4 {
            for size in 1..=5 {
                let m = Structure::new(size).unwrap();
                assert_eq!(
                    tarski(&m, &Assignment::new(), &at_least_n(n)).unwrap(),
                    size >= n
                );
            }
        }
    }

    #[test]
    fn linear_orders_are_total_orders() {
        assert_eq!(linear_orders(3).unwrap().len(), 6);
        for s in linear_orders(3).unwrap() {
            for a in 0..3 {
                assert_eq!(s.holds("Le", &[a, a]), Some(true));
                for b in 0..3 {
                    if a != b {
                        assert_ne!(s.holds("Le", &[a, b]), s.holds("Le", &[b, a]));
                    }
                }
            }
        }
    }

    #[test]
    fn dimacs_roundtrip_and_errors() {
        let text = "c example\np cnf 3 2\n1 -2 3 0\n-1 -1 2 0\n";
        let cnf = CnfInstance::from_dimacs(text).unwrap();
        assert_eq!(cnf.variable_count(), 3);
        assert_eq!(
            cnf.clauses()[0],
            [Literal::pos(0), Literal::neg(1), Literal::pos(2)]
        );
        assert_eq!(CnfInstance::from_dimacs(&cnf.to_dimacs()).unwrap(), cnf);
        let wide = "p cnf 4 1\n1 2 3 4 0\n";
        assert!(matches!(
            CnfInstance::from_dimacs(wide),
            Err(ConstructionError::Dimacs { line: 2, .. })
        ));
        assert!(CnfInstance::from_dimacs("p cnf 2 1\n1 2 0\n").is_err());
        assert!(CnfInstance::from_dimacs("1 2 3 0\n").is_err());
        assert!(CnfInstance::from_dimacs("p cnf 2 1\n1 2 3 0\n").is_err());
        let split = "p cnf 3 1\n1 2\n3 0\n";
        assert_eq!(CnfInstance::from_dimacs(split).unwrap().clauses().len(), 1);
    }

    #[test]
    fn oracle_basics() {
        let p = CnfInstance::new(1, vec![[Literal::pos(0); 3]]).unwrap();
        assert!(sat_oracle(&p).unwrap());
        let contra = CnfInstance::new(1, vec![[Literal::pos(0); 3], [Literal::neg(0); 3]]).unwrap();
        assert!(!sat_oracle(&contra).unwrap());
        let big = CnfInstance::new(25, vec![]).unwrap();
        assert!(matches!(
            sat_oracle(&big),
            Err(ConstructionError::TooManyVariables { .. })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let cnf = random_instance(&mut rng, 6, 20, None);
            if let Some(model) = find_model(&cnf).unwrap() {
                assert!(cnf
                    .clauses()
                    .iter()
                    .all(|c| c.iter().any(|l| model[l.var] == l.positive)));
            }
        }
    }

    #[test]
    fn reduction_layout_invariants() {
        let cnf = CnfInstance::new(
            2,
            vec![
                [Literal::pos(0), Literal::neg(1), Literal::pos(1)],
                [Literal::neg(0); 3],
            ],
        )
        .unwrap();
        let out = encode_3sat(&cnf).unwrap();
        let l = &out.layout;
        assert_eq!(l.domain_size(), 2 + 3 + 2 + 2);
        assert_eq!(out.structure.domain_size(), l.domain_size());
        for e in 0..l.domain_size() {
            assert_eq!(
                out.structure.holds("V", &[e]),
                Some(l.variables.contains(&e))
            );
            assert_eq!(out.structure.holds("C", &[e]), Some(l.clauses.contains(&e)));
        }
        // The duplicated literals of the second clause still occupy three positions.
        assert_eq!(out.team.len(), 6);
        assert!(matches!(
            encode_3sat(&CnfInstance::new(1, vec![]).unwrap()),
            Err(ConstructionError::InvalidInstance(_))
        ));
    }

    #[test]
    fn reduction_examples() {
        let contra = CnfInstance::new(1, vec![[Literal::pos(0); 3], [Literal::neg(0); 3]]).unwrap();
        let out = encode_3sat(&contra).unwrap();
        assert!(supports(&out.structure, &out.team, &out.formula, &cfg()).unwrap());

        let p = CnfInstance::new(1, vec![[Literal::pos(0); 3]]).unwrap();
        let out = encode_3sat(&p).unwrap();
        assert!(!supports(&out.structure, &out.team, &out.formula, &cfg()).unwrap());
        let y = crate::evaluator::find_falsifying_subteam(
            &out.structure,
            &out.team,
            out.antecedent(),
            out.consequent(),
            &cfg(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(
            out.extract_assignment(&y).unwrap(),
            BTreeMap::from([(0, true)])
        );
    }

    #[test]
    fn extraction_edge_cases() {
        let cnf =
            CnfInstance::new(2, vec![[Literal::pos(0), Literal::neg(0), Literal::pos(1)]]).unwrap();
        let out = encode_3sat(&cnf).unwrap();
        assert!(out
            .extract_assignment(&out.team.select(0))
            .unwrap()
            .is_empty());
        assert_eq!(
            out.extract_assignment(&out.team).unwrap_err(),
            ConstructionError::DependenceViolated
        );
    }

    #[test]
    fn small_reductions_agree_with_both_evaluators() {
        for cnf in standard_instances()
            .iter()
            .filter(|c| c.clauses().len() <= 2)
        {
            let out = encode_3sat(cnf).unwrap();
            let slow = supports(&out.structure, &out.team, &out.formula, &cfg()).unwrap();
            let fast = supports_fast(&out.structure, &out.team, &out.formula, &cfg()).unwrap();
            assert_eq!(slow, fast, "{cnf}");
            assert_eq!(slow, !sat_oracle(cnf).unwrap(), "{cnf}");
        }
    }

    #[test]
    fn standard_set_shape() {
        let set = standard_instances();
        assert!(set.len() >= 200);
        assert!(set
            .iter()
            .all(|c| c.variable_count() <= 3 && (1..=4).contains(&c.clauses().len())));
        let sat = set.iter().filter(|c| sat_oracle(c).unwrap()).count();
        assert!(sat > 0 && sat < set.len());
        assert_eq!(standard_instances(), set);
    }

    #[test]
    fn finiteness_report_small() {
        let r = finiteness_report(2, &cfg()).unwrap();
        assert!(r.psi_satisfied && !r.neg_psi_satisfied);
        assert_eq!(r.teams, 16);
        assert_eq!(r.dedekind_witnesses, 0);
        // The two permutations of a two-element set.
        assert_eq!(r.injective_total_functions, 2);
    }
}
