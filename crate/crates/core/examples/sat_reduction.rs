//! Encodes a 3CNF instance as a team-logic support problem and reads a
//! satisfying assignment back off the falsifying sub-team.

use inqlab::constructions::{encode_3sat, find_model, CnfInstance};
use inqlab::evaluator::{EvalConfig, FastEvaluator};
use inqlab::parser::render;

const INSTANCES: [(&str, &str); 2] = [
    (
        "satisfiable",
        "c (p | ~q | r) & (~p | q | q)\np cnf 3 2\n1 -2 3 0\n-1 2 2 0\n",
    ),
    ("unsatisfiable", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n"),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (label, text) in INSTANCES {
        let cnf = CnfInstance::from_dimacs(text)?;
        let out = encode_3sat(&cnf)?;
        println!("{label}: {cnf}");
        println!(
            "  domain {} elements, team {} rows, formula {}",
            out.layout.domain_size(),
            out.team.len(),
            render(&out.formula)
        );

        let mut ev = FastEvaluator::new(&out.structure, EvalConfig::default());
        let falsifier = ev.find_falsifier(&out.team, out.antecedent(), out.consequent())?;
        let oracle = find_model(&cnf)?;
        println!(
            "  supported: {}, oracle model: {:?}",
            falsifier.is_none(),
            oracle
        );
        if let Some(y) = falsifier {
            let assignment = out.extract_assignment(&y)?;
            println!("  extracted assignment: {assignment:?}");
        }
    }
    Ok(())
}
