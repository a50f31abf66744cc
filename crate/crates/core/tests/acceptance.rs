//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use inqlab::constructions::{
    at_least_n, encode_3sat, find_model, linear_orders, phi_xy_parts, sat_oracle,
    standard_instances, PaperFormula,
};
use inqlab::evaluator::{
    dep_profile, find_falsifying_subteam, satisfies, satisfies_fast, supports, tarski, EvalConfig,
    FastEvaluator,
};
use inqlab::inqbq::{
    build_full_model, count_dedekind_states, satisfies as satisfies_info, translation_sweep,
};
use inqlab::metatheory::{core_corpus, corpus_signature, run_suite, Property, SuiteConfig, Tier};
use inqlab::parser::{parse, render};
use inqlab::structures::{Assignment, Structure, TeamSpace};
use inqlab::syntax::{Formula, Signature, Term, Var};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn cfg() -> EvalConfig {
    EvalConfig::default()
}

fn xy() -> Vec<Var> {
    vec![Var::new("x"), Var::new("y")]
}

fn sig() -> Signature {
    Signature::new()
}

fn f(text: &str) -> Formula {
    parse(text, &sig()).expect("formula parses")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dep_profile_bullets() -> Outcome {
    let dep_xy = f("dep(x;y)");
    let dep_yx = f("dep(y;x)");
    let some_not_x = f("iexists u. u != x");
    let some_not_y = f("iexists z. z != y");
    let mut teams = 0;
    for n in [2, 3] {
        let m = Structure::new(n).map_err(|e| e.to_string())?;
        for team in TeamSpace::new(&xy(), n, 16)
            .map_err(|e| e.to_string())?
            .iter()
        {
            let p = dep_profile(&m, &team).map_err(|e| e.to_string())?;
            let s = |phi: &Formula| supports(&m, &team, phi, &cfg()).expect("evaluates");
            let expected = (s(&dep_xy), s(&dep_yx), !s(&some_not_x), !s(&some_not_y));
            let got = (p.is_function, p.is_injective, p.dom_is_full, p.ran_is_full);
            ensure(got == expected, || {
                format!(
                    "n={n} team {}: profile {got:?}, support {expected:?}",
                    team.to_json()
                )
            })?;
            teams += 1;
        }
    }
    Ok(format!(
        "{teams} teams, all four fields equal the support verdicts"
    ))
}

fn finite_side() -> Outcome {
    let psi = PaperFormula::PsiFiniteness.formula();
    let neg = PaperFormula::PsiNegInfinity.formula();
    for n in 1..=4 {
        let m = Structure::new(n).map_err(|e| e.to_string())?;
        let eval = |phi: &Formula| {
            if n <= 3 {
                satisfies(&m, phi, &cfg())
            } else {
                satisfies_fast(&m, phi, &cfg())
            }
        };
        let (p, q) = (
            eval(&psi).map_err(|e| e.to_string())?,
            eval(&neg).map_err(|e| e.to_string())?,
        );
        ensure(p && !q, || format!("|D|={n}: psi {p}, negation {q}"))?;
    }
    Ok("psi holds and its negation fails for |D| = 1..3 (reference) and 4 (fast)".into())
}

fn no_falsifier() -> Outcome {
    let (ante, cons) = phi_xy_parts();
    let mut teams = 0;
    for n in 1..=3 {
        let m = Structure::new(n).map_err(|e| e.to_string())?;
        for team in TeamSpace::new(&xy(), n, 16)
            .map_err(|e| e.to_string())?
            .iter()
        {
            let hit = find_falsifying_subteam(&m, &team, &ante, &cons, &cfg())
                .map_err(|e| e.to_string())?;
            ensure(hit.is_none(), || {
                format!(
                    "n={n}: falsifier {:?} in {}",
                    hit.map(|t| t.to_json()),
                    team.to_json()
                )
            })?;
            teams += 1;
        }
    }
    Ok(format!(
        "{teams} teams over |D| <= 3, none has a falsifying sub-team"
    ))
}

fn conp_reduction() -> Outcome {
    let instances = standard_instances();
    ensure(instances.len() >= 200, || {
        format!("only {} instances", instances.len())
    })?;
    let all_polarity = |pos: bool| {
        instances
            .iter()
            .any(|c| c.clauses().iter().flatten().all(|l| l.positive == pos))
    };
    ensure(all_polarity(true) && all_polarity(false), || {
        "degenerate polarity instances missing".into()
    })?;
    let (mut sat_count, mut small_cross) = (0, 0);
    for cnf in &instances {
        let out = encode_3sat(cnf).map_err(|e| e.to_string())?;
        let mut fast = FastEvaluator::new(&out.structure, cfg());
        let supported = fast
            .supports(&out.team, &out.formula)
            .map_err(|e| e.to_string())?;
        let sat = sat_oracle(cnf).map_err(|e| e.to_string())?;
        ensure(supported == !sat, || {
            format!("{cnf}: supports {supported}, sat {sat}")
        })?;
        if cnf.clauses().len() <= 2 {
            let slow = supports(&out.structure, &out.team, &out.formula, &cfg())
                .map_err(|e| e.to_string())?;
            ensure(slow == supported, || {
                format!("{cnf}: reference {slow}, fast {supported}")
            })?;
            small_cross += 1;
        }
        if !sat {
            continue;
        }
        sat_count += 1;
        let y = fast
            .find_falsifier(&out.team, out.antecedent(), out.consequent())
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{cnf}: no falsifying sub-team"))?;
        ensure(y.is_subteam_of(&out.team), || {
            format!("{cnf}: witness is not a sub-team")
        })?;
        // The witness must meet every clause; read the clause column directly.
        let z = y.var_index(&Var::new("z")).expect("z column");
        let covered: BTreeSet<usize> = y.rows().iter().map(|r| r[z]).collect();
        ensure(covered == out.layout.clauses.clone().collect(), || {
            format!("{cnf}: witness misses a clause")
        })?;
        let partial = out
            .extract_assignment(&y)
            .map_err(|e| format!("{cnf}: {e}"))?;
        for default in [false, true] {
            let total: Vec<bool> = (0..cnf.variable_count())
                .map(|v| *partial.get(&v).unwrap_or(&default))
                .collect();
            ensure(cnf.evaluate(&total), || {
                format!("{cnf}: extracted {partial:?} does not satisfy")
            })?;
        }
        ensure(
            find_model(cnf).map_err(|e| e.to_string())?.is_some(),
            || "oracle inconsistent".into(),
        )?;
    }
    Ok(format!(
        "{} instances ({} satisfiable with extractions verified, {} unsatisfiable; {} also checked by the reference evaluator)",
        instances.len(),
        sat_count,
        instances.len() - sat_count,
        small_cross
    ))
}

fn suite_line(props: &[Property], min_random: u64) -> Outcome {
    let cfg = SuiteConfig::default();
    let report = run_suite(&cfg, props).map_err(|e| e.to_string())?;
    ensure(report.passed(), || {
        format!("violations:\n{}", report.to_table())
    })?;
    let mut parts = Vec::new();
    for &p in props {
        let ex = report
            .get(p, Tier::Exhaustive)
            .map(|r| r.checked)
            .unwrap_or(0);
        let rnd = report
            .get(p, Tier::Randomized)
            .map(|r| r.checked)
            .unwrap_or(0);
        ensure(ex > 0, || format!("{}: no exhaustive checks", p.name()))?;
        ensure(rnd >= min_random, || {
            format!("{}: only {rnd} randomized checks", p.name())
        })?;
        parts.push(format!("{} {ex}+{rnd}", p.name()));
    }
    Ok(format!(
        "0 violations; checks (exhaustive+randomized): {}",
        parts.join(", ")
    ))
}

fn metatheory_suites() -> Outcome {
    suite_line(
        &[
            Property::Persistency,
            Property::EmptyTeam,
            Property::Locality,
            Property::ClassicalFlatness,
            Property::RangeForall,
            Property::SentenceNegation,
        ],
        10_000,
    )
}

fn cross_validation() -> Outcome {
    suite_line(&[Property::CrossValidation], 1_000)
}

fn full_models() -> Outcome {
    let phi_ab = PaperFormula::PhiAb.formula();
    for n in 1..=3 {
        let m = build_full_model(n).map_err(|e| e.to_string())?;
        let sat = satisfies_info(&m, &phi_ab, &cfg()).map_err(|e| e.to_string())?;
        let witnesses = count_dedekind_states(&m).map_err(|e| e.to_string())?;
        ensure(sat && witnesses == 0, || {
            format!("n={n}: satisfied {sat}, {witnesses} witness states")
        })?;
    }
    Ok("phi(a,b) holds on the full models n = 1..3; no state relation is injective, total and non-surjective".into())
}

fn translations() -> Outcome {
    let checks = translation_sweep(2, 2, &cfg()).map_err(|e| e.to_string())?;
    ensure(checks.len() == 3, || {
        "expected three translation pairs".into()
    })?;
    for c in &checks {
        ensure(c.passed(), || {
            format!(
                "{} vs {}: {}/{}",
                c.inqbq, c.two_sorted, c.agreements, c.models
            )
        })?;
    }
    Ok(format!(
        "3 pairs agree on all {} models with |W| <= 2, |D| <= 2",
        checks[0].models
    ))
}

fn at_least_characterization() -> Outcome {
    for n in 1..=4 {
        for size in 1..=5 {
            let m = Structure::new(size).map_err(|e| e.to_string())?;
            let phi = at_least_n(n);
            let team = satisfies(&m, &phi, &cfg()).map_err(|e| e.to_string())?;
            let classical = tarski(&m, &Assignment::new(), &phi).map_err(|e| e.to_string())?;
            ensure(team == (size >= n) && classical == team, || {
                format!("n={n}, |D|={size}: {team}/{classical}")
            })?;
        }
    }
    let five = Structure::new(5).map_err(|e| e.to_string())?;
    let psi = PaperFormula::PsiFiniteness.formula();
    let joint = Formula::conj((1..=5).map(at_least_n).chain([psi]));
    ensure(
        satisfies_fast(&five, &joint, &cfg()).map_err(|e| e.to_string())?,
        || "joint set fails at |D|=5".into(),
    )?;
    for n in 1..=5 {
        let m = Structure::new(n).map_err(|e| e.to_string())?;
        ensure(
            satisfies(&m, &at_least_n(n), &cfg()).map_err(|e| e.to_string())?,
            || format!("phi_{n} unsatisfied"),
        )?;
    }
    Ok("phi_n holds iff |D| >= n (n <= 4, |D| <= 5); {phi_1..phi_5, psi} holds at |D| = 5".into())
}

fn bounded_predecessors() -> Outcome {
    let phi = PaperFormula::BoundedPredecessors.formula();
    let mut orders = 0;
    for n in 1..=3 {
        for m in linear_orders(n).map_err(|e| e.to_string())? {
            let slow = satisfies(&m, &phi, &cfg()).map_err(|e| e.to_string())?;
            let fast = satisfies_fast(&m, &phi, &cfg()).map_err(|e| e.to_string())?;
            ensure(slow && fast, || {
                format!("order {}: reference {slow}, fast {fast}", m.to_json())
            })?;
            orders += 1;
        }
    }
    Ok(format!("holds on all {orders} linear orders of size 1..3"))
}

fn parser_roundtrip() -> Outcome {
    let sig = corpus_signature();
    let mut count = 0;
    for phi in core_corpus(2, 3) {
        let text = render(&phi);
        let back = parse(&text, &sig).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == phi, || format!("roundtrip changed `{text}`"))?;
        count += 1;
    }
    for named in PaperFormula::ALL {
        let phi = named.formula();
        let text = render(&phi);
        let back = parse(&text, &named.signature()).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == phi, || format!("roundtrip changed {named}"))?;
        count += 1;
    }
    let eq = |a: &str, b: &str| Formula::eq(Term::var(a), Term::var(b));
    ensure(render(&eq("x", "y")) == "x = y", || {
        "unexpected rendering of equality".into()
    })?;
    Ok(format!(
        "{count} formulas (depth <= 3 corpus and named formulas) roundtrip"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            "dependence-profile bullets equal support verdicts",
            60,
            dep_profile_bullets,
        ),
        ("finiteness sentence on finite domains", 120, finite_side),
        ("no falsifying sub-team on finite domains", 60, no_falsifier),
        (
            "3SAT reduction agrees with the SAT oracle",
            120,
            conp_reduction,
        ),
        ("metatheory suites", 300, metatheory_suites),
        ("fast and reference evaluators agree", 300, cross_validation),
        ("full information models", 60, full_models),
        ("translation table", 60, translations),
        (
            "at-least-n characterization",
            120,
            at_least_characterization,
        ),
        (
            "bounded-predecessors kernel on linear orders",
            120,
            bounded_predecessors,
        ),
        ("parser roundtrip", 120, parser_roundtrip),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => Err(format!(
                "{detail}; took {:.1}s, limit {limit}s",
                elapsed.as_secs_f64()
            )),
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "PASS [{}] {name}: {detail} ({:.2}s)",
                i + 1,
                elapsed.as_secs_f64()
            ),
            Err(detail) => {
                failures += 1;
                println!(
                    "FAIL [{}] {name}: {detail} ({:.2}s)",
                    i + 1,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
