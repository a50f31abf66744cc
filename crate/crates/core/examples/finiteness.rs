//! The finiteness sentence at growing domain sizes, and the bounded-predecessor
//! sentence on every linear order of size three.

use inqlab::constructions::{finiteness_report, linear_orders, PaperFormula};
use inqlab::evaluator::{satisfies_fast, EvalConfig};
use inqlab::parser::render;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = EvalConfig::default();
    println!("psi = {}", render(&PaperFormula::PsiFiniteness.formula()));
    println!();
    println!(
        "{:>3} {:>5} {:>6} {:>7} {:>10} {:>9}",
        "|D|", "psi", "~psi", "teams", "inj+total", "dedekind"
    );
    for n in 1..=4 {
        let r = finiteness_report(n, &cfg)?;
        println!(
            "{:>3} {:>5} {:>6} {:>7} {:>10} {:>9}",
            n,
            r.psi_satisfied,
            r.neg_psi_satisfied,
            r.teams,
            r.injective_total_functions,
            r.dedekind_witnesses
        );
    }

    let bounded = PaperFormula::BoundedPredecessors.formula();
    let orders = linear_orders(3)?;
    let holding = orders
        .iter()
        .map(|m| satisfies_fast(m, &bounded, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    println!();
    println!(
        "bounded_predecessors on {} orders of size 3: {:?}",
        orders.len(),
        holding
    );
    Ok(())
}
