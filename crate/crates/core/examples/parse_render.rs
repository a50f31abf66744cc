//! Parsing with derived operators, canonical rendering, and error positions.

use inqlab::parser::{parse, render};
use inqlab::syntax::{well_formed, Signature};

fn main() {
    let sig = Signature::new()
        .with_predicate("R", 2)
        .with_function("f", 1)
        .with_constant("c");
    let inputs = [
        "forall x. iexists y. R(x, f(y))",
        "dep(x, c; y)",
        "?R(x, y) ior lam f(x)",
        "~~R(c, c) -> bot",
        "[x] exists y. x = y",
        "R(x y)",
        "S(x)",
    ];
    for text in inputs {
        match parse(text, &sig) {
            Ok(phi) => {
                println!("{text}");
                println!("  = {}", render(&phi));
                println!("  depth {}, free {:?}", phi.depth(), phi.free_vars());
                assert!(well_formed(&phi, &sig).is_empty());
                assert_eq!(parse(&render(&phi), &sig).as_ref(), Ok(&phi));
            }
            Err(e) => println!("{text}\n  error at {e}"),
        }
    }
}
