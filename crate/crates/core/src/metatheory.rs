//! Executable property suites over exhaustive and seeded random corpora.
//!
//! The exhaustive tier evaluates every corpus formula on every structure over
//! the corpus signature with domain size up to `max_domain` and on every team
//! over the corpus variables. The randomized tier draws structures, teams and
//! formulas at a larger domain; each draw has its own ChaCha stream derived from
//! the global seed, so results do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::constructions::PaperFormula;
use crate::evaluator::{satisfies, supports, tarski, EvalConfig, EvalError, FastEvaluator};
use crate::parser::render;
use crate::structures::{Structure, StructureError, StructureSpace, Team, TeamSpace};
use crate::syntax::{is_classical, is_question_free, Formula, Signature, Term, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetatheoryError {
    #[error("invalid suite configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub max_domain: usize,
    pub max_vars: usize,
    pub max_formula_depth: usize,
    pub random_seed: u64,
    /// Draws per property in the randomized tier.
    pub sample_count: usize,
    pub random_domain: usize,
    /// Draws for the randomized cross-validation of the two evaluators.
    pub cross_samples: usize,
    #[serde(skip)]
    pub eval: EvalConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_domain: 2,
            max_vars: 2,
            max_formula_depth: 2,
            random_seed: 0x1_9A7E,
            sample_count: 10_000,
            random_domain: 3,
            cross_samples: 1_000,
            eval: EvalConfig::default(),
        }
    }
}

impl SuiteConfig {
    fn validate(&self) -> Result<(), MetatheoryError> {
        let fields = [
            ("max_domain", self.max_domain),
            ("max_vars", self.max_vars),
            ("max_formula_depth", self.max_formula_depth),
            ("random_domain", self.random_domain),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| *v == 0) {
            return Err(MetatheoryError::Config(format!("{name} must be positive")));
        }
        if self.max_vars > CORPUS_VARS.len() {
            return Err(MetatheoryError::Config(format!(
                "max_vars is at most {}",
                CORPUS_VARS.len()
            )));
        }
        if self.max_formula_depth > 3 {
            return Err(MetatheoryError::Config(
                "max_formula_depth is at most 3".into(),
            ));
        }
        Ok(())
    }

    fn vars(&self) -> Vec<Var> {
        CORPUS_VARS[..self.max_vars]
            .iter()
            .map(|v| Var::new(v))
            .collect()
    }
}

const CORPUS_VARS: [&str; 3] = ["x", "y", "w"];
const DUMMY_VAR: &str = "d0";

/// `{P unary, Q binary, c}`.
pub fn corpus_signature() -> Signature {
    Signature::new()
        .with_predicate("P", 1)
        .with_predicate("Q", 2)
        .with_constant("c")
}

fn corpus_atoms(vars: &[&str]) -> Vec<Formula> {
    let v = |s: &str| Term::var(s);
    let c = Term::constant("c");
    let mut atoms: Vec<Formula> = vars
        .iter()
        .map(|x| Formula::atom("P", vec![v(x)]))
        .collect();
    atoms.push(Formula::atom("P", vec![c.clone()]));
    for a in vars {
        for b in vars {
            if a != b {
                atoms.push(Formula::atom("Q", vec![v(a), v(b)]));
            }
        }
    }
    let last = vars.last().expect("at least one variable");
    atoms.push(Formula::atom("Q", vec![c.clone(), v(last)]));
    for (i, a) in vars.iter().enumerate() {
        for b in &vars[i + 1..] {
            atoms.push(Formula::eq(v(a), v(b)));
        }
    }
    atoms.push(Formula::eq(v(vars[0]), c));
    atoms.push(Formula::Bot);
    atoms
}

/// One layer of the corpus: atoms, then `forall`, `iexists`, `[.]` over every
/// variable and every formula of the previous layer, then `&`, `ior`, `->` over
/// every ordered pair of previous formulas.
struct Layer {
    prev: Vec<Formula>,
    atoms: Vec<Formula>,
    vars: Vec<&'static str>,
    next: usize,
}

impl Iterator for Layer {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        let (a, v, p) = (self.atoms.len(), self.vars.len(), self.prev.len());
        let mut i = self.next;
        self.next += 1;
        if i < a {
            return Some(self.atoms[i].clone());
        }
        i -= a;
        if i < 3 * v * p {
            let (kind, rest) = (i / (v * p), i % (v * p));
            let (x, body) = (self.vars[rest / p], self.prev[rest % p].clone());
            return Some(match kind {
                0 => Formula::forall(x, body),
                1 => Formula::iexists(x, body),
                _ => Formula::range_all(x, body),
            });
        }
        i -= 3 * v * p;
        if i < 3 * p * p {
            let (kind, rest) = (i / (p * p), i % (p * p));
            let (l, r) = (self.prev[rest / p].clone(), self.prev[rest % p].clone());
            return Some(match kind {
                0 => Formula::and(l, r),
                1 => Formula::idisj(l, r),
                _ => Formula::implies(l, r),
            });
        }
        None
    }
}

/// Core formulas over [`corpus_signature`] of depth at most `depth`, using the
/// first `max_vars` of `x, y, w`. The deepest layer is produced lazily.
pub fn core_corpus(max_vars: usize, depth: usize) -> Box<dyn Iterator<Item = Formula> + Send> {
    let vars: Vec<&'static str> = CORPUS_VARS[..max_vars.clamp(1, CORPUS_VARS.len())].to_vec();
    let atoms = corpus_atoms(&vars);
    let mut prev = atoms.clone();
    for _ in 2..depth {
        prev = Layer {
            prev,
            atoms: atoms.clone(),
            vars: vars.clone(),
            next: 0,
        }
        .collect();
    }
    if depth <= 1 {
        return Box::new(atoms.into_iter());
    }
    Box::new(Layer {
        prev,
        atoms,
        vars,
        next: 0,
    })
}

/// The named empty-vocabulary formulas appended to every corpus.
pub fn named_corpus_formulas() -> Vec<Formula> {
    [
        PaperFormula::PhiXy,
        PaperFormula::PsiFiniteness,
        PaperFormula::PsiNegInfinity,
    ]
    .into_iter()
    .map(PaperFormula::formula)
    .collect()
}

/// The core corpus to the configured depth, followed by the named formulas.
pub fn formula_corpus(cfg: &SuiteConfig) -> impl Iterator<Item = Formula> {
    core_corpus(cfg.max_vars, cfg.max_formula_depth).chain(named_corpus_formulas())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Persistency,
    EmptyTeam,
    Locality,
    ClassicalFlatness,
    RangeForall,
    SentenceNegation,
    CrossValidation,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Persistency,
        Property::EmptyTeam,
        Property::Locality,
        Property::ClassicalFlatness,
        Property::RangeForall,
        Property::SentenceNegation,
        Property::CrossValidation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Persistency => "persistency",
            Property::EmptyTeam => "empty_team",
            Property::Locality => "locality",
            Property::ClassicalFlatness => "classical_flatness",
            Property::RangeForall => "range_forall",
            Property::SentenceNegation => "sentence_negation",
            Property::CrossValidation => "cross_validation",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Whether the property says anything about `phi`.
    pub fn applies(self, phi: &Formula) -> bool {
        match self {
            Property::ClassicalFlatness => is_classical(phi),
            Property::RangeForall => is_question_free(phi),
            Property::SentenceNegation => phi.is_sentence(),
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Exhaustive,
    Randomized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub tier: Tier,
    pub checked: u64,
    pub violated: u64,
}

/// A replayable violation: the model and team in the structures JSON format
/// and the formula as parseable text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub property: Property,
    pub tier: Tier,
    pub model: Value,
    pub team: Value,
    pub formula: String,
    pub detail: String,
}

const MAX_COUNTEREXAMPLES: usize = 32;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    counts: BTreeMap<(Property, Tier), (u64, u64)>,
    counterexamples: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn new() -> Self {
        Self::default()
    }

    fn tally(&mut self, property: Property, tier: Tier, ok: bool) {
        let e = self.counts.entry((property, tier)).or_default();
        e.0 += 1;
        e.1 += u64::from(!ok);
    }

    fn record(&mut self, c: Counterexample) {
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(c);
        }
    }

    /// Associative merge; counterexamples keep `self`'s first.
    pub fn merge(mut self, other: SuiteReport) -> SuiteReport {
        for (k, (c, v)) in other.counts {
            let e = self.counts.entry(k).or_default();
            e.0 += c;
            e.1 += v;
        }
        for c in other.counterexamples {
            self.record(c);
        }
        self
    }

    pub fn properties(&self) -> Vec<PropertyReport> {
        self.counts
            .iter()
            .map(|(&(property, tier), &(checked, violated))| PropertyReport {
                property,
                tier,
                checked,
                violated,
            })
            .collect()
    }

    pub fn get(&self, property: Property, tier: Tier) -> Option<PropertyReport> {
        self.counts
            .get(&(property, tier))
            .map(|&(checked, violated)| PropertyReport {
                property,
                tier,
                checked,
                violated,
            })
    }

    pub fn counterexamples(&self) -> &[Counterexample] {
        &self.counterexamples
    }

    pub fn total_violations(&self) -> u64 {
        self.counts.values().map(|(_, v)| v).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "passed": self.passed(),
            "properties": self.properties(),
            "counterexamples": self.counterexamples,
        })
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<20} {:<11} {:>12} {:>9}\n",
            "property", "tier", "checked", "violated"
        );
        for r in self.properties() {
            let tier = match r.tier {
                Tier::Exhaustive => "exhaustive",
                Tier::Randomized => "randomized",
            };
            let _ = writeln!(
                out,
                "{:<20} {:<11} {:>12} {:>9}",
                r.property.name(),
                tier,
                r.checked,
                r.violated
            );
        }
        for c in &self.counterexamples {
            let _ = writeln!(
                out,
                "counterexample [{}]: {} | model {} | team {} | {}",
                c.property.name(),
                c.formula,
                c.model,
                c.team,
                c.detail
            );
        }
        out
    }
}

/// Removes rows one at a time while `still_violates` keeps holding, until no
/// single removal preserves it.
pub fn minimize_team(team: &Team, still_violates: impl Fn(&Team) -> bool) -> Team {
    let mut cur = team.clone();
    'shrink: loop {
        for i in 0..cur.len() {
            let cand = cur.without_row(i);
            if still_violates(&cand) {
                cur = cand;
                continue 'shrink;
            }
        }
        return cur;
    }
}

fn counterexample(
    property: Property,
    tier: Tier,
    m: &Structure,
    team: &Team,
    phi: &Formula,
    detail: String,
) -> Counterexample {
    Counterexample {
        property,
        tier,
        model: m.to_json(),
        team: team.to_json(),
        formula: render(phi),
        detail,
    }
}

struct Checker<'a> {
    m: &'a Structure,
    cfg: &'a EvalConfig,
    tier: Tier,
    report: SuiteReport,
}

impl<'a> Checker<'a> {
    fn sup(&self, team: &Team, phi: &Formula) -> Result<bool, EvalError> {
        supports(self.m, team, phi, self.cfg)
    }

    fn fail(&mut self, p: Property, team: &Team, phi: &Formula, detail: String) {
        let c = counterexample(p, self.tier, self.m, team, phi, detail);
        self.report.record(c);
    }

    fn persistency(
        &mut self,
        x: &Team,
        vx: bool,
        y: &Team,
        phi: &Formula,
    ) -> Result<(), EvalError> {
        let ok = !vx || self.sup(y, phi)?;
        self.report.tally(Property::Persistency, self.tier, ok);
        if !ok {
            let min = minimize_team(x, |t| {
                y.is_subteam_of(t) && self.sup(t, phi).unwrap_or(false)
            });
            self.fail(
                Property::Persistency,
                &min,
                phi,
                format!("supported, but its sub-team {} is not", y.to_json()),
            );
        }
        Ok(())
    }

    fn empty_team(&mut self, vars: &[Var], phi: &Formula) -> Result<(), EvalError> {
        let empty = Team::empty(vars.to_vec());
        let ok = self.sup(&empty, phi)?;
        self.report.tally(Property::EmptyTeam, self.tier, ok);
        if !ok {
            self.fail(
                Property::EmptyTeam,
                &empty,
                phi,
                "empty team does not support the formula".into(),
            );
        }
        Ok(())
    }

    fn locality(
        &mut self,
        x: &Team,
        vx: bool,
        phi: &Formula,
        dummy_value: usize,
    ) -> Result<(), EvalError> {
        let fv = phi.free_vars();
        let restricted = x
            .restrict(fv.iter())
            .expect("free variables are team variables");
        let extended = x
            .extend_const(&Var::new(DUMMY_VAR), dummy_value, self.m.domain_size())
            .expect("value in domain");
        for (variant, label) in [
            (restricted, "restriction to the free variables"),
            (extended, "extension by a dummy variable"),
        ] {
            let ok = self.sup(&variant, phi)? == vx;
            self.report.tally(Property::Locality, self.tier, ok);
            if !ok {
                self.fail(
                    Property::Locality,
                    x,
                    phi,
                    format!("verdict {vx} changes under {label}"),
                );
            }
        }
        Ok(())
    }

    fn flatness(&mut self, x: &Team, vx: bool, phi: &Formula) -> Result<(), EvalError> {
        let mut pointwise = true;
        for g in x.assignments() {
            pointwise &= tarski(self.m, &g, phi)?;
        }
        let ok = pointwise == vx;
        self.report
            .tally(Property::ClassicalFlatness, self.tier, ok);
        if !ok {
            let min = minimize_team(x, |t| {
                let tv = self.sup(t, phi).unwrap_or(vx);
                let pw = t
                    .assignments()
                    .all(|g| tarski(self.m, &g, phi).unwrap_or(pointwise));
                tv != pw
            });
            self.fail(
                Property::ClassicalFlatness,
                &min,
                phi,
                format!("support {vx} but pointwise truth {pointwise}"),
            );
        }
        Ok(())
    }

    fn range_forall(&mut self, x: &Team, phi: &Formula, v: &str) -> Result<(), EvalError> {
        let ranged = Formula::range_all(v, phi.clone());
        let universal = Formula::forall(v, phi.clone());
        let (a, b) = (self.sup(x, &ranged)?, self.sup(x, &universal)?);
        let ok = a == b;
        self.report.tally(Property::RangeForall, self.tier, ok);
        if !ok {
            self.fail(
                Property::RangeForall,
                x,
                &ranged,
                format!("[{v}] gives {a}, forall {v} gives {b}"),
            );
        }
        Ok(())
    }

    fn negation(&mut self, sentence: &Formula) -> Result<(), EvalError> {
        let a = satisfies(self.m, sentence, self.cfg)?;
        let b = satisfies(self.m, &Formula::not(sentence.clone()), self.cfg)?;
        let ok = a != b;
        self.report.tally(Property::SentenceNegation, self.tier, ok);
        if !ok {
            self.fail(
                Property::SentenceNegation,
                &Team::unit(),
                sentence,
                format!("sentence {a}, negation {b}"),
            );
        }
        Ok(())
    }

    fn cross(
        &mut self,
        fast: &mut FastEvaluator,
        x: &Team,
        vx: bool,
        phi: &Formula,
    ) -> Result<(), EvalError> {
        let f = fast.supports(x, phi)?;
        let ok = f == vx;
        self.report.tally(Property::CrossValidation, self.tier, ok);
        if !ok {
            let min = minimize_team(x, |t| {
                let slow = self.sup(t, phi).ok();
                let quick = FastEvaluator::new(self.m, *self.cfg).supports(t, phi).ok();
                slow.is_some() && slow != quick
            });
            self.fail(
                Property::CrossValidation,
                &min,
                phi,
                format!("reference {vx}, fast {f}"),
            );
        }
        Ok(())
    }
}

fn exhaustive_structure(
    m: &Structure,
    corpus: &[Formula],
    vars: &[Var],
    props: &[Property],
    cfg: &EvalConfig,
) -> Result<SuiteReport, MetatheoryError> {
    let n = m.domain_size();
    let space = TeamSpace::new(vars, n, 20)?;
    let mut ck = Checker {
        m,
        cfg,
        tier: Tier::Exhaustive,
        report: SuiteReport::new(),
    };
    let mut fast = FastEvaluator::new(m, *cfg);
    let has = |p: Property| props.contains(&p);
    let teams: Vec<Team> = space.iter().collect();
    for phi in corpus {
        if !props.iter().any(|p| p.applies(phi)) {
            continue;
        }
        let verdicts: Vec<bool> = teams
            .iter()
            .map(|t| ck.sup(t, phi))
            .collect::<Result<_, _>>()?;
        if has(Property::EmptyTeam) {
            ck.empty_team(vars, phi)?;
        }
        if has(Property::SentenceNegation) && phi.is_sentence() {
            ck.negation(phi)?;
        }
        for (mask, x) in teams.iter().enumerate() {
            let vx = verdicts[mask];
            if has(Property::Persistency) {
                let mut sub = mask;
                loop {
                    // Sub-team verdicts are already known; re-evaluate only on violation.
                    let ok = !vx || verdicts[sub];
                    if ok {
                        ck.report
                            .tally(Property::Persistency, Tier::Exhaustive, true);
                    } else {
                        ck.persistency(x, vx, &teams[sub], phi)?;
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & mask;
                }
            }
            if has(Property::Locality) {
                for d in 0..n {
                    ck.locality(x, vx, phi, d)?;
                }
            }
            if has(Property::ClassicalFlatness) && is_classical(phi) {
                ck.flatness(x, vx, phi)?;
            }
            if has(Property::RangeForall) && is_question_free(phi) {
                for v in vars {
                    ck.range_forall(x, phi, v.name())?;
                }
            }
            if has(Property::CrossValidation) {
                ck.cross(&mut fast, x, vx, phi)?;
            }
        }
    }
    Ok(ck.report)
}

fn exhaustive_tier(cfg: &SuiteConfig, props: &[Property]) -> Result<SuiteReport, MetatheoryError> {
    let corpus: Vec<Formula> = formula_corpus(cfg).collect();
    let vars = cfg.vars();
    let sig = corpus_signature();
    let spaces: Vec<StructureSpace> = (1..=cfg.max_domain)
        .map(|n| StructureSpace::new(&sig, n, 1 << 20))
        .collect::<Result<_, _>>()?;
    let jobs: Vec<(&StructureSpace, u64)> = spaces
        .iter()
        .flat_map(|space| (0..space.count()).map(move |i| (space, i)))
        .collect();
    let reports: Vec<SuiteReport> = jobs
        .par_iter()
        .map(|&(space, i)| exhaustive_structure(&space.get(i), &corpus, &vars, props, &cfg.eval))
        .collect::<Result<_, _>>()?;
    Ok(reports
        .into_iter()
        .fold(SuiteReport::new(), SuiteReport::merge))
}

fn item_rng(seed: u64, property: Property, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((property as u64) << 40) | i as u64);
    rng
}

fn random_team(rng: &mut ChaCha8Rng, space: &TeamSpace, max_rows: usize) -> Team {
    let mut mask = rng.gen_range(0..space.count());
    while mask.count_ones() as usize > max_rows {
        mask &= mask - 1;
    }
    space.get(mask)
}

fn randomized_tier(cfg: &SuiteConfig, props: &[Property]) -> Result<SuiteReport, MetatheoryError> {
    let corpus: Vec<Formula> = formula_corpus(cfg).collect();
    let vars = cfg.vars();
    let n = cfg.random_domain;
    let structures = StructureSpace::new(&corpus_signature(), n, u64::MAX)?;
    let teams = TeamSpace::new(&vars, n, 20)?;
    let mut total = SuiteReport::new();
    for &p in props.iter().filter(|&&p| p != Property::CrossValidation) {
        let pool: Vec<&Formula> = corpus.iter().filter(|f| p.applies(f)).collect();
        let reports: Vec<SuiteReport> = (0..cfg.sample_count)
            .into_par_iter()
            .map(|i| -> Result<SuiteReport, MetatheoryError> {
                let mut rng = item_rng(cfg.random_seed, p, i);
                let m = structures.get(rng.gen_range(0..structures.count()));
                let x = random_team(&mut rng, &teams, usize::MAX);
                let phi = pool[rng.gen_range(0..pool.len())];
                let mut ck = Checker {
                    m: &m,
                    cfg: &cfg.eval,
                    tier: Tier::Randomized,
                    report: SuiteReport::new(),
                };
                match p {
                    Property::Persistency => {
                        let vx = ck.sup(&x, phi)?;
                        let sub = rng.gen_range(0..1u64 << x.len());
                        ck.persistency(&x, vx, &x.select(sub), phi)?;
                    }
                    Property::EmptyTeam => ck.empty_team(&vars, phi)?,
                    Property::Locality => {
                        let vx = ck.sup(&x, phi)?;
                        ck.locality(&x, vx, phi, rng.gen_range(0..n))?;
                    }
                    Property::ClassicalFlatness => {
                        let vx = ck.sup(&x, phi)?;
                        ck.flatness(&x, vx, phi)?;
                    }
                    Property::RangeForall => {
                        let v = &vars[rng.gen_range(0..vars.len())];
                        ck.range_forall(&x, phi, v.name())?;
                    }
                    Property::SentenceNegation => ck.negation(phi)?,
                    Property::CrossValidation => unreachable!(),
                }
                Ok(ck.report)
            })
            .collect::<Result<_, _>>()?;
        total = reports.into_iter().fold(total, SuiteReport::merge);
    }
    if props.contains(&Property::CrossValidation) {
        total = total.merge(randomized_cross_validation(cfg)?);
    }
    Ok(total)
}

/// A random core formula of depth at most `depth` over the corpus signature.
pub fn random_formula(rng: &mut impl Rng, vars: &[&str], depth: usize) -> Formula {
    let atoms = corpus_atoms(vars);
    random_formula_from(rng, vars, &atoms, depth)
}

fn random_formula_from<R: Rng>(
    rng: &mut R,
    vars: &[&str],
    atoms: &[Formula],
    depth: usize,
) -> Formula {
    if depth <= 1 || rng.gen_bool(0.2) {
        return atoms[rng.gen_range(0..atoms.len())].clone();
    }
    let x = vars[rng.gen_range(0..vars.len())];
    let kind = rng.gen_range(0..6);
    let a = random_formula_from(rng, vars, atoms, depth - 1);
    if kind < 3 {
        return match kind {
            0 => Formula::forall(x, a),
            1 => Formula::iexists(x, a),
            _ => Formula::range_all(x, a),
        };
    }
    let b = random_formula_from(rng, vars, atoms, depth - 1);
    match kind {
        3 => Formula::and(a, b),
        4 => Formula::idisj(a, b),
        _ => Formula::implies(a, b),
    }
}

fn randomized_cross_validation(cfg: &SuiteConfig) -> Result<SuiteReport, MetatheoryError> {
    let vars = cfg.vars();
    let names: Vec<&str> = CORPUS_VARS[..cfg.max_vars].to_vec();
    let sig = corpus_signature();
    let reports: Vec<SuiteReport> = (0..cfg.cross_samples)
        .into_par_iter()
        .map(|i| -> Result<SuiteReport, MetatheoryError> {
            let mut rng = item_rng(cfg.random_seed, Property::CrossValidation, i);
            // Alternate between the random-tier domain and one element more.
            let n = cfg.random_domain + i % 2;
            let structures = StructureSpace::new(&sig, n, u64::MAX)?;
            let teams = TeamSpace::new(&vars, n, 24)?;
            let m = structures.get(rng.gen_range(0..structures.count()));
            let x = random_team(&mut rng, &teams, 10);
            let phi = random_formula(&mut rng, &names, 3);
            let mut ck = Checker {
                m: &m,
                cfg: &cfg.eval,
                tier: Tier::Randomized,
                report: SuiteReport::new(),
            };
            let vx = ck.sup(&x, &phi)?;
            let mut fast = FastEvaluator::new(&m, cfg.eval);
            ck.cross(&mut fast, &x, vx, &phi)?;
            Ok(ck.report)
        })
        .collect::<Result<_, _>>()?;
    Ok(reports
        .into_iter()
        .fold(SuiteReport::new(), SuiteReport::merge))
}

/// Runs the chosen properties on both tiers.
pub fn run_suite(cfg: &SuiteConfig, props: &[Property]) -> Result<SuiteReport, MetatheoryError> {
    cfg.validate()?;
    Ok(exhaustive_tier(cfg, props)?.merge(randomized_tier(cfg, props)?))
}

pub fn check_persistency(cfg: &SuiteConfig) -> Result<SuiteReport, MetatheoryError> {
    run_suite(cfg, &[Property::Persistency])
}

pub fn check_empty_locality_flatness(cfg: &SuiteConfig) -> Result<SuiteReport, MetatheoryError> {
    run_suite(
        cfg,
        &[
            Property::EmptyTeam,
            Property::Locality,
            Property::ClassicalFlatness,
        ],
    )
}

pub fn check_range_and_negation(cfg: &SuiteConfig) -> Result<SuiteReport, MetatheoryError> {
    run_suite(cfg, &[Property::RangeForall, Property::SentenceNegation])
}

pub fn cross_validate(cfg: &SuiteConfig) -> Result<SuiteReport, MetatheoryError> {
    run_suite(cfg, &[Property::CrossValidation])
}

/// Outcome of a bounded flatness search.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessCheck {
    pub flat: bool,
    pub witness: Option<(Structure, Team)>,
}

/// Searches every structure over `sig` with domain size up to `cfg.max_domain`
/// and every team over the free variables of `phi` for a team whose verdict
/// differs from the conjunction of its singleton verdicts. A positive answer
/// only covers the searched bounds.
pub fn is_flat_up_to(
    phi: &Formula,
    sig: &Signature,
    cfg: &SuiteConfig,
) -> Result<FlatnessCheck, MetatheoryError> {
    let vars: Vec<Var> = phi.free_vars().into_iter().collect();
    for n in 1..=cfg.max_domain {
        let structures = StructureSpace::new(sig, n, 1 << 20)?;
        let teams = TeamSpace::new(&vars, n, 20)?;
        for m in structures.iter() {
            let violates = |t: &Team| -> bool {
                let whole = supports(&m, t, phi, &cfg.eval).unwrap_or(false);
                let singles = (0..t.len())
                    .all(|i| supports(&m, &t.select(1 << i), phi, &cfg.eval).unwrap_or(false));
                whole != singles
            };
            if let Some(t) = teams.iter().find(|t| violates(t)) {
                let min = minimize_team(&t, violates);
                return Ok(FlatnessCheck {
                    flat: false,
                    witness: Some((m, min)),
                });
            }
        }
    }
    Ok(FlatnessCheck {
        flat: true,
        witness: None,
    })
}
