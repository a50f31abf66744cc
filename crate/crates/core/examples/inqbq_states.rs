//! Information states over the full model of pairs, and the two-sorted
//! first-order translation checked against state-based support.

use inqlab::constructions::PaperFormula;
use inqlab::evaluator::EvalConfig;
use inqlab::inqbq::{
    build_full_model, count_dedekind_states, state_relation, state_supports, translation_sweep,
    State,
};
use inqlab::structures::Assignment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = EvalConfig::default();
    let phi = PaperFormula::PhiAb.formula();

    let m = build_full_model(2)?;
    let states: Vec<State> = m.full_state().substates().collect();
    let supported = states
        .iter()
        .filter(|&&s| state_supports(&m, s, &Assignment::new(), &phi, &cfg).unwrap_or(false))
        .count();
    println!(
        "full model n=2: {} worlds, {} states",
        m.world_count(),
        states.len()
    );
    println!("phi(a,b) supported at {supported} of them");
    println!("Dedekind states: {}", count_dedekind_states(&m)?);

    let s = State::from_worlds([0, 3]);
    println!(
        "state {:?} encodes the relation {:?}",
        s.worlds().collect::<Vec<_>>(),
        state_relation(&m, s)?
    );

    println!();
    for check in translation_sweep(2, 2, &cfg)? {
        println!("{:<24} ~> {}", check.inqbq, check.two_sorted);
        println!("    agrees on {}/{} models", check.agreements, check.models);
    }
    Ok(())
}
