//! A reduced run of the metatheory suite, plus a flatness search.

use inqlab::metatheory::{corpus_signature, is_flat_up_to, run_suite, Property, SuiteConfig};
use inqlab::parser::parse;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SuiteConfig {
        max_domain: 2,
        max_formula_depth: 2,
        sample_count: 500,
        cross_samples: 100,
        ..SuiteConfig::default()
    };
    let props = [
        Property::Persistency,
        Property::EmptyTeam,
        Property::ClassicalFlatness,
    ];
    let report = run_suite(&cfg, &props)?;
    print!("{}", report.to_table());
    println!("passed: {}", report.passed());

    let sig = corpus_signature();
    for src in ["P(x) & ~Q(x, y)", "[y] (Q(x, y) -> P(y))", "?P(x)", "?P(c)"] {
        let check = is_flat_up_to(&parse(src, &sig)?, &sig, &cfg)?;
        match check.witness {
            None => println!("{src:<24} flat"),
            Some((m, team)) => println!(
                "{src:<24} not flat (|D|={}, team {:?})",
                m.domain_size(),
                team.rows()
            ),
        }
    }
    Ok(())
}
