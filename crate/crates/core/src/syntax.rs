//! Abstract syntax of terms and formulas.
//!
//! A single [`Formula`] type serves the team language with or without the
//! range quantifier `[x]`, the classical fragment, and the world-based
//! language; membership in each is decided by the predicate functions at the
//! bottom of this module. Derived operators live in [`Sugar`] and are
//! expanded into core formulas by [`desugar`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Words reserved by the concrete syntax; never legal as symbol or variable names.
pub const KEYWORDS: &[&str] = &["bot", "forall", "exists", "iexists", "lam", "dep", "ior"];

/// An interned variable name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// Returns true if `name` is an identifier of the concrete syntax that is not a keyword.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("symbol `{0}` is declared both as a predicate and as a function")]
    NameClash(String),
    #[error("`=` is built in and cannot be declared")]
    ReservedIdentity,
    #[error("`{0}` is not a legal symbol name")]
    IllegalName(String),
    #[error("sugar {kind:?} expects {expected}, got {found}")]
    SugarShape {
        kind: SugarKind,
        expected: &'static str,
        found: String,
    },
}

/// Predicate and function symbols with their arities. Constants are 0-ary functions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    predicates: BTreeMap<String, usize>,
    functions: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_name(&self, name: &str) -> Result<(), SyntaxError> {
        if name == "=" {
            return Err(SyntaxError::ReservedIdentity);
        }
        if !is_identifier(name) {
            return Err(SyntaxError::IllegalName(name.to_string()));
        }
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        self.check_name(name)?;
        if self.functions.contains_key(name) {
            return Err(SyntaxError::NameClash(name.to_string()));
        }
        self.predicates.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        self.check_name(name)?;
        if self.predicates.contains_key(name) {
            return Err(SyntaxError::NameClash(name.to_string()));
        }
        self.functions.insert(name.to_string(), arity);
        Ok(())
    }

    /// Builder form of [`Signature::add_predicate`]. Panics on an invalid declaration.
    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.add_predicate(name, arity)
            .expect("invalid predicate declaration");
        self
    }

    /// Builder form of [`Signature::add_function`]. Panics on an invalid declaration.
    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.add_function(name, arity)
            .expect("invalid function declaration");
        self
    }

    pub fn with_constant(self, name: &str) -> Self {
        self.with_function(name, 0)
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_symbol(&self, name: &str) -> bool {
        self.predicates.contains_key(name) || self.functions.contains_key(name)
    }

    /// Union of two signatures. Fails if the same name has conflicting declarations.
    pub fn merge(&self, other: &Signature) -> Result<Signature, SyntaxError> {
        let mut out = self.clone();
        for (p, a) in other.predicates() {
            match out.predicate_arity(p) {
                Some(b) if a != b => return Err(SyntaxError::NameClash(p.to_string())),
                _ => out.add_predicate(p, a)?,
            }
        }
        for (f, a) in other.functions() {
            match out.function_arity(f) {
                Some(b) if a != b => return Err(SyntaxError::NameClash(f.to_string())),
                _ => out.add_function(f, a)?,
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    /// Function application; constants are applications with no arguments.
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Var::new(name))
    }

    pub fn constant(name: &str) -> Self {
        Term::App(name.to_string(), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Self {
        Term::App(name.to_string(), args)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }
}

/// Core formulas. `IDisj` is the inquisitive disjunction, `IExists` the
/// inquisitive existential and `RangeAll` the range quantifier `[x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Bot,
    And(Box<Formula>, Box<Formula>),
    IDisj(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(Var, Box<Formula>),
    IExists(Var, Box<Formula>),
    RangeAll(Var, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Self {
        Formula::Atom(pred.to_string(), args)
    }

    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Eq(a, b)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn idisj(a: Formula, b: Formula) -> Self {
        Formula::IDisj(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::implies(a, Formula::Bot)
    }

    /// `bot -> bot`, the canonical tautology.
    pub fn top() -> Self {
        Formula::not(Formula::Bot)
    }

    pub fn forall(x: &str, body: Formula) -> Self {
        Formula::ForAll(Var::new(x), Box::new(body))
    }

    pub fn iexists(x: &str, body: Formula) -> Self {
        Formula::IExists(Var::new(x), Box::new(body))
    }

    pub fn range_all(x: &str, body: Formula) -> Self {
        Formula::RangeAll(Var::new(x), Box::new(body))
    }

    /// Left-nested conjunction of the given formulas; the empty conjunction is `top`.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let add_term = |t: &Term, bound: &Vec<Var>, out: &mut BTreeSet<Var>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| add_term(t, bound, out)),
            Formula::Eq(a, b) => {
                add_term(a, bound, out);
                add_term(b, bound, out);
            }
            Formula::Bot => {}
            Formula::And(a, b) | Formula::IDisj(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ForAll(x, body) | Formula::IExists(x, body) | Formula::RangeAll(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable occurring in the formula, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, args) => args.iter().for_each(|t| t.collect_vars(&mut out)),
            Formula::Eq(a, b) => {
                a.collect_vars(&mut out);
                b.collect_vars(&mut out);
            }
            Formula::ForAll(x, _) | Formula::IExists(x, _) | Formula::RangeAll(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::And(a, b) | Formula::IDisj(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::ForAll(_, body) | Formula::IExists(_, body) | Formula::RangeAll(_, body) => {
                body.visit(f)
            }
            _ => {}
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Eq(..) | Formula::Bot => 1,
            Formula::And(a, b) | Formula::IDisj(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::ForAll(_, body) | Formula::IExists(_, body) | Formula::RangeAll(_, body) => {
                1 + body.depth()
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn any_node(&self, pred: impl Fn(&Formula) -> bool) -> bool {
        let mut hit = false;
        self.visit(&mut |f| hit |= pred(f));
        hit
    }

    pub fn contains_range_quantifier(&self) -> bool {
        self.any_node(|f| matches!(f, Formula::RangeAll(..)))
    }
}

/// Classical fragment: atoms, `bot`, `&`, `->` and `forall` only.
pub fn is_classical(phi: &Formula) -> bool {
    !phi.any_node(|f| {
        matches!(
            f,
            Formula::IDisj(..) | Formula::IExists(..) | Formula::RangeAll(..)
        )
    })
}

/// Team language without the range quantifier (also the world-based language).
pub fn is_inqbt(phi: &Formula) -> bool {
    !phi.contains_range_quantifier()
}

/// Free of inquisitive disjunction and inquisitive existential; such formulas are flat.
pub fn is_question_free(phi: &Formula) -> bool {
    !phi.any_node(|f| matches!(f, Formula::IDisj(..) | Formula::IExists(..)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    UnknownPredicate(String),
    UnknownFunction(String),
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    IllegalVariable(String),
}

/// A well-formedness problem, located by the child indices leading to it from the root.
/// Formula children are numbered left to right; term arguments continue the path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: Vec<usize>,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: ", self.path)?;
        match &self.kind {
            DiagnosticKind::UnknownPredicate(p) => write!(f, "unknown predicate `{p}`"),
            DiagnosticKind::UnknownFunction(p) => write!(f, "unknown function `{p}`"),
            DiagnosticKind::ArityMismatch {
                symbol,
                expected,
                found,
            } => write!(f, "`{symbol}` expects {expected} arguments, found {found}"),
            DiagnosticKind::IllegalVariable(v) => write!(f, "`{v}` is not a legal variable name"),
        }
    }
}

fn legal_var(v: &Var, sig: &Signature) -> bool {
    is_identifier(v.name()) && !sig.is_symbol(v.name())
}

/// Checks symbol arities and variable names against `sig`.
pub fn well_formed(phi: &Formula, sig: &Signature) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    check_formula(phi, sig, &mut Vec::new(), &mut out);
    out
}

fn check_term(t: &Term, sig: &Signature, path: &mut Vec<usize>, out: &mut Vec<Diagnostic>) {
    match t {
        Term::Var(v) => {
            if !legal_var(v, sig) {
                out.push(Diagnostic {
                    path: path.clone(),
                    kind: DiagnosticKind::IllegalVariable(v.name().to_string()),
                });
            }
        }
        Term::App(f, args) => {
            match sig.function_arity(f) {
                None => out.push(Diagnostic {
                    path: path.clone(),
                    kind: DiagnosticKind::UnknownFunction(f.clone()),
                }),
                Some(n) if n != args.len() => out.push(Diagnostic {
                    path: path.clone(),
                    kind: DiagnosticKind::ArityMismatch {
                        symbol: f.clone(),
                        expected: n,
                        found: args.len(),
                    },
                }),
                Some(_) => {}
            }
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                check_term(a, sig, path, out);
                path.pop();
            }
        }
    }
}

fn check_formula(phi: &Formula, sig: &Signature, path: &mut Vec<usize>, out: &mut Vec<Diagnostic>) {
    match phi {
        Formula::Atom(p, args) => {
            match sig.predicate_arity(p) {
                None => out.push(Diagnostic {
                    path: path.clone(),
                    kind: DiagnosticKind::UnknownPredicate(p.clone()),
                }),
                Some(n) if n != args.len() => out.push(Diagnostic {
                    path: path.clone(),
                    kind: DiagnosticKind::ArityMismatch {
                        symbol: p.clone(),
                        expected: n,
                        found: args.len(),
                    },
                }),
                Some(_) => {}
            }
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                check_term(a, sig, path, out);
                path.pop();
            }
        }
        Formula::Eq(a, b) => {
            for (i, t) in [a, b].into_iter().enumerate() {
                path.push(i);
                check_term(t, sig, path, out);
                path.pop();
            }
        }
        Formula::Bot => {}
        Formula::And(a, b) | Formula::IDisj(a, b) | Formula::Implies(a, b) => {
            for (i, f) in [a, b].into_iter().enumerate() {
                path.push(i);
                check_formula(f, sig, path, out);
                path.pop();
            }
        }
        Formula::ForAll(x, body) | Formula::IExists(x, body) | Formula::RangeAll(x, body) => {
            if !legal_var(x, sig) {
                out.push(Diagnostic {
                    path: path.clone(),
                    kind: DiagnosticKind::IllegalVariable(x.name().to_string()),
                });
            }
            path.push(0);
            check_formula(body, sig, path, out);
            path.pop();
        }
    }
}

/// Surface formulas: the core connectives plus the derived operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sugar {
    Core(Formula),
    And(Box<Sugar>, Box<Sugar>),
    IDisj(Box<Sugar>, Box<Sugar>),
    Implies(Box<Sugar>, Box<Sugar>),
    ForAll(Var, Box<Sugar>),
    IExists(Var, Box<Sugar>),
    RangeAll(Var, Box<Sugar>),
    Not(Box<Sugar>),
    /// Classical disjunction.
    COr(Box<Sugar>, Box<Sugar>),
    Iff(Box<Sugar>, Box<Sugar>),
    /// Classical existential.
    CExists(Var, Box<Sugar>),
    QuestionMark(Box<Sugar>),
    ValueQuestion(Term),
    DepAtom(Vec<Term>, Term),
}

impl From<Formula> for Sugar {
    fn from(f: Formula) -> Self {
        Sugar::Core(f)
    }
}

impl Sugar {
    pub fn free_vars(&self) -> BTreeSet<Var> {
        match self {
            Sugar::Core(f) => f.free_vars(),
            Sugar::And(a, b) | Sugar::IDisj(a, b) | Sugar::Implies(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            Sugar::COr(a, b) | Sugar::Iff(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            Sugar::ForAll(x, body)
            | Sugar::IExists(x, body)
            | Sugar::RangeAll(x, body)
            | Sugar::CExists(x, body) => {
                let mut s = body.free_vars();
                s.remove(x);
                s
            }
            Sugar::Not(a) | Sugar::QuestionMark(a) => a.free_vars(),
            Sugar::ValueQuestion(t) => t.vars(),
            Sugar::DepAtom(xs, y) => {
                let mut s = y.vars();
                xs.iter().for_each(|t| t.collect_vars(&mut s));
                s
            }
        }
    }
}

/// The first name `v0, v1, …` not contained in `avoid`.
pub fn fresh_var(avoid: &BTreeSet<String>) -> Var {
    (0..)
        .map(|i| format!("v{i}"))
        .find(|n| !avoid.contains(n))
        .map(|n| Var::new(&n))
        .expect("unbounded enumeration")
}

/// `lam t`: `forall v. ?(v = t)` with `v` the least fresh name not occurring in `t`
/// nor in `avoid`.
pub fn value_question(t: &Term, avoid: &BTreeSet<String>) -> Formula {
    let mut used: BTreeSet<String> = avoid.clone();
    used.extend(t.vars().iter().map(|v| v.name().to_string()));
    let v = fresh_var(&used);
    let eq = Formula::Eq(Term::Var(v.clone()), t.clone());
    Formula::ForAll(v, Box::new(question(eq)))
}

/// `?phi := phi ior ~phi`.
pub fn question(phi: Formula) -> Formula {
    Formula::idisj(phi.clone(), Formula::not(phi))
}

/// `dep(x1..xn; y) := lam x1 & … & lam xn -> lam y`.
pub fn dependence(xs: &[Term], y: &Term, avoid: &BTreeSet<String>) -> Formula {
    let consequent = value_question(y, avoid);
    if xs.is_empty() {
        return consequent;
    }
    let antecedent = Formula::conj(xs.iter().map(|x| value_question(x, avoid)));
    Formula::implies(antecedent, consequent)
}

/// Expands every derived operator. Fresh variables avoid only the names in `avoid`
/// and those of the term they quantify against.
pub fn desugar_avoiding(s: &Sugar, avoid: &BTreeSet<String>) -> Formula {
    let d = |x: &Sugar| desugar_avoiding(x, avoid);
    match s {
        Sugar::Core(f) => f.clone(),
        Sugar::And(a, b) => Formula::and(d(a), d(b)),
        Sugar::IDisj(a, b) => Formula::idisj(d(a), d(b)),
        Sugar::Implies(a, b) => Formula::implies(d(a), d(b)),
        Sugar::ForAll(x, body) => Formula::ForAll(x.clone(), Box::new(d(body))),
        Sugar::IExists(x, body) => Formula::IExists(x.clone(), Box::new(d(body))),
        Sugar::RangeAll(x, body) => Formula::RangeAll(x.clone(), Box::new(d(body))),
        Sugar::Not(a) => Formula::not(d(a)),
        Sugar::COr(a, b) => Formula::not(Formula::and(Formula::not(d(a)), Formula::not(d(b)))),
        Sugar::Iff(a, b) => {
            let (a, b) = (d(a), d(b));
            Formula::and(
                Formula::implies(a.clone(), b.clone()),
                Formula::implies(b, a),
            )
        }
        Sugar::CExists(x, body) => {
            Formula::not(Formula::ForAll(x.clone(), Box::new(Formula::not(d(body)))))
        }
        Sugar::QuestionMark(a) => question(d(a)),
        Sugar::ValueQuestion(t) => value_question(t, avoid),
        Sugar::DepAtom(xs, y) => dependence(xs, y, avoid),
    }
}

pub fn desugar(s: &Sugar) -> Formula {
    desugar_avoiding(s, &BTreeSet::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SugarKind {
    ValueQuestion,
    DepAtom,
    QuestionMark,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SugarArg {
    Term(Term),
    Formula(Formula),
}

/// Builds the core expansion of a derived form from loose arguments.
///
/// `ValueQuestion` takes one term, `QuestionMark` one formula, and `DepAtom`
/// takes the determining terms followed by the dependent term.
pub fn make_sugar(kind: SugarKind, args: Vec<SugarArg>) -> Result<Formula, SyntaxError> {
    let shape = |expected: &'static str, args: &[SugarArg]| SyntaxError::SugarShape {
        kind,
        expected,
        found: format!("{args:?}"),
    };
    match kind {
        SugarKind::ValueQuestion => match args.as_slice() {
            [SugarArg::Term(t)] => Ok(desugar(&Sugar::ValueQuestion(t.clone()))),
            _ => Err(shape("exactly one term", &args)),
        },
        SugarKind::QuestionMark => match args.as_slice() {
            [SugarArg::Formula(f)] => Ok(question(f.clone())),
            _ => Err(shape("exactly one formula", &args)),
        },
        SugarKind::DepAtom => {
            let terms: Option<Vec<Term>> = args
                .iter()
                .map(|a| match a {
                    SugarArg::Term(t) => Some(t.clone()),
                    SugarArg::Formula(_) => None,
                })
                .collect();
            match terms {
                Some(mut ts) if !ts.is_empty() => {
                    let y = ts.pop().expect("non-empty");
                    Ok(desugar(&Sugar::DepAtom(ts, y)))
                }
                _ => Err(shape("one or more terms", &args)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }
    fn y() -> Term {
        Term::var("y")
    }

    #[test]
    fn arity_diagnostics() {
        let sig = Signature::new().with_predicate("P", 1);
        assert!(well_formed(&Formula::atom("P", vec![x()]), &sig).is_empty());
        let d = well_formed(&Formula::atom("P", vec![x(), y()]), &sig);
        assert_eq!(d.len(), 1);
        assert!(matches!(
            d[0].kind,
            DiagnosticKind::ArityMismatch {
                expected: 1,
                found: 2,
                ..
            }
        ));
    }

    #[test]
    fn diagnostics_carry_paths() {
        let sig = Signature::new().with_predicate("P", 1);
        let phi = Formula::and(
            Formula::atom("P", vec![x()]),
            Formula::forall("x", Formula::atom("Q", vec![x()])),
        );
        let d = well_formed(&phi, &sig);
        assert_eq!(d[0].path, vec![1, 0]);
        assert_eq!(d[0].kind, DiagnosticKind::UnknownPredicate("Q".into()));
    }

    #[test]
    fn bound_variable_must_not_shadow_constant() {
        let sig = Signature::new().with_predicate("P", 1).with_constant("a");
        let phi = Formula::forall("a", Formula::atom("P", vec![Term::constant("a")]));
        let d = well_formed(&phi, &sig);
        assert_eq!(
            d,
            vec![Diagnostic {
                path: vec![],
                kind: DiagnosticKind::IllegalVariable("a".into())
            }]
        );
    }

    #[test]
    fn dep_desugars_to_well_formed() {
        let phi = desugar(&Sugar::DepAtom(vec![x()], y()));
        assert!(well_formed(&phi, &Signature::new()).is_empty());
    }

    #[test]
    fn signature_name_spaces_disjoint() {
        let mut sig = Signature::new().with_predicate("P", 1);
        assert_eq!(
            sig.add_function("P", 0),
            Err(SyntaxError::NameClash("P".into()))
        );
        assert_eq!(
            sig.add_predicate("=", 2),
            Err(SyntaxError::ReservedIdentity)
        );
    }

    #[test]
    fn free_variables() {
        let phi = Formula::forall("x", Formula::atom("P", vec![x(), y()]));
        assert_eq!(phi.free_vars(), BTreeSet::from([Var::new("y")]));
        let lam = desugar(&Sugar::ValueQuestion(y()));
        assert_eq!(lam.free_vars(), BTreeSet::from([Var::new("y")]));
        let closed = Formula::range_all("x", Formula::iexists("y", Formula::eq(x(), y())));
        assert!(closed.free_vars().is_empty());
    }

    #[test]
    fn question_mark_expansion() {
        let pa = Formula::atom("P", vec![Term::constant("a")]);
        let q = desugar(&Sugar::QuestionMark(Box::new(pa.clone().into())));
        assert_eq!(
            q,
            Formula::idisj(pa.clone(), Formula::implies(pa, Formula::Bot))
        );
    }

    #[test]
    fn value_question_uses_least_fresh_name() {
        let lam = desugar(&Sugar::ValueQuestion(y()));
        let eq = Formula::eq(Term::var("v0"), y());
        assert_eq!(
            lam,
            Formula::forall(
                "v0",
                Formula::idisj(eq.clone(), Formula::implies(eq, Formula::Bot))
            )
        );
        let t = Term::app("f", vec![Term::var("v0"), Term::var("v1")]);
        match desugar(&Sugar::ValueQuestion(t.clone())) {
            Formula::ForAll(v, _) => {
                assert_eq!(v.name(), "v2");
                assert!(!t.vars().contains(&v));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dep_expansion() {
        let dep = desugar(&Sugar::DepAtom(vec![x()], y()));
        let lx = desugar(&Sugar::ValueQuestion(x()));
        let ly = desugar(&Sugar::ValueQuestion(y()));
        assert_eq!(dep, Formula::implies(lx, ly));
    }

    #[test]
    fn make_sugar_shapes() {
        assert_eq!(
            make_sugar(
                SugarKind::QuestionMark,
                vec![SugarArg::Formula(Formula::Bot)]
            )
            .unwrap(),
            Formula::idisj(Formula::Bot, Formula::implies(Formula::Bot, Formula::Bot))
        );
        assert!(make_sugar(SugarKind::ValueQuestion, vec![]).is_err());
        assert!(make_sugar(SugarKind::DepAtom, vec![SugarArg::Formula(Formula::Bot)]).is_err());
        let dep = make_sugar(
            SugarKind::DepAtom,
            vec![SugarArg::Term(x()), SugarArg::Term(y())],
        )
        .unwrap();
        assert_eq!(dep, desugar(&Sugar::DepAtom(vec![x()], y())));
    }

    #[test]
    fn desugar_idempotent_on_core() {
        let phi = desugar(&Sugar::DepAtom(vec![x(), y()], Term::var("z")));
        assert_eq!(desugar(&Sugar::Core(phi.clone())), phi);
    }

    #[test]
    fn sugar_free_vars_do_not_leak() {
        let s = Sugar::And(
            Box::new(Sugar::DepAtom(vec![x()], y())),
            Box::new(Sugar::CExists(
                Var::new("z"),
                Box::new(Sugar::ValueQuestion(Term::var("z"))),
            )),
        );
        assert_eq!(desugar(&s).free_vars(), s.free_vars());
    }

    #[test]
    fn fragments() {
        let lam = desugar(&Sugar::ValueQuestion(y()));
        assert!(!is_classical(&lam));
        assert!(is_inqbt(&lam));
        let r = Formula::range_all("x", Formula::eq(x(), x()));
        assert!(!is_inqbt(&r));
        assert!(is_question_free(&r));
        assert!(!is_classical(&r));
    }
}
