//! Saturate (a * 2) / 2 with the shift-left rules and look for `a`.

use egraph_bindings::interp::interpret;
use egraph_bindings::saturate::{
    blocks_of, contains_block_iso, extract_smallest, lift_rule, saturate, SaturationConfig,
};
use egraph_bindings::syntax::parse_document;

fn main() {
    let doc = parse_document(include_str!("../fixtures/shift_left.term")).expect("fixture parses");
    let g = interpret(&doc.terms[0]).unwrap();
    let rules = doc.rules.iter().map(|r| lift_rule(r).unwrap()).collect();
    let cfg = SaturationConfig {
        max_iterations: 10,
        max_elements: 200,
        rules,
        ..Default::default()
    };
    let (out, report) = saturate(&g, &cfg);
    for step in &report.trace {
        println!("{}", serde_json::to_string(step).unwrap());
    }
    println!(
        "{} iterations, fixpoint {}, {} elements, {} alternatives",
        report.iterations,
        report.fixpoint,
        out.carrier.num_elements(),
        blocks_of(&out).len()
    );
    println!(
        "contains a: {}",
        contains_block_iso(&out, &interpret(&doc.terms[1]).unwrap())
    );
    println!(
        "smallest alternative has {} edges",
        extract_smallest(&out).carrier.edges.len()
    );
}
