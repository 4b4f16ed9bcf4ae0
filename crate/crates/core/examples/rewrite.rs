//! One convex double-pushout step with a user rule, showing the complement.

use egraph_bindings::cospan::is_isomorphic;
use egraph_bindings::interp::{interpret, interpret_rule};
use egraph_bindings::rewrite::{apply_rewrite, boundary_complement, find_convex_matches};
use egraph_bindings::syntax::{parse_document, parse_term};

fn main() {
    let doc = parse_document(include_str!("../fixtures/rewrites.term")).expect("fixture parses");
    let rule = doc
        .rules
        .iter()
        .find(|r| r.name == "fuse")
        .expect("rule exists");
    let rule = interpret_rule(rule).expect("rule is well typed");
    let target = parse_term("(f; g) + h", &doc.signature).unwrap();
    let g = interpret(&target).unwrap();

    for m in find_convex_matches(&rule, &g) {
        let comp = boundary_complement(&rule, &g, &m).expect("complement exists");
        println!("match {:?}", m.key());
        println!(
            "  complement ({:?}): inputs {:?}, outputs {:?}",
            comp.case, comp.cospan.inputs, comp.cospan.outputs
        );
        let out = apply_rewrite(&g, &rule, &m).unwrap().result;
        let expected = interpret(&parse_term("h + h", &doc.signature).unwrap()).unwrap();
        println!("  result iso to h + h: {}", is_isomorphic(&out, &expected));
    }
}
