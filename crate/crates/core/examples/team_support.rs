//! Support of dependence formulas on a small team, with both evaluators and a
//! falsifying sub-team for a failed implication.

use inqlab::evaluator::{
    dep_profile, find_falsifying_subteam, supports, EvalConfig, FastEvaluator,
};
use inqlab::parser::parse;
use inqlab::structures::{Structure, Team};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut m = Structure::new(3)?;
    m.set_predicate("P", 1, [[0], [2]])?;
    let sig = m.signature();
    let cfg = EvalConfig::default();

    let team = Team::from_names(
        &["x", "y"],
        vec![vec![0, 1], vec![0, 2], vec![1, 1], vec![2, 0]],
    )?;
    println!("team over (x, y): {:?}", team.rows());
    println!("profile: {:?}", dep_profile(&m, &team)?);

    let mut fast = FastEvaluator::new(&m, cfg);
    let functional = team.without_row(1);
    println!("{:<28} {:>6} {:>12}", "", "team", "minus row 1");
    for src in [
        "dep(x;y)",
        "dep(y;x)",
        "lam y",
        "?P(x)",
        "?P(x) -> lam y",
        "iexists z. (P(z) & z != x)",
    ] {
        let phi = parse(src, &sig)?;
        let mut verdicts = Vec::new();
        for t in [&team, &functional] {
            let reference = supports(&m, t, &phi, &cfg)?;
            assert_eq!(reference, fast.supports(t, &phi)?);
            verdicts.push(reference);
        }
        println!("{src:<28} {:>6} {:>12}", verdicts[0], verdicts[1]);
    }
    println!("fast evaluator stats: {:?}", fast.stats());

    let (ante, cons) = (parse("lam x", &sig)?, parse("lam y", &sig)?);
    let slow = find_falsifying_subteam(&m, &team, &ante, &cons, &cfg)?;
    let quick = fast.find_falsifier(&team, &ante, &cons)?;
    println!("least falsifier: {:?}", slow.map(|t| t.rows().to_vec()));
    println!("search falsifier: {:?}", quick.map(|t| t.rows().to_vec()));
    Ok(())
}
