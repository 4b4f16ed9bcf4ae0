//! Saturate (\x. (y + y) + x) 1 with beta: substitution is just composition.

use egraph_bindings::interp::interpret;
use egraph_bindings::rewrite::SchemaId;
use egraph_bindings::saturate::{contains_block_iso, saturate, SaturationConfig};
use egraph_bindings::syntax::parse_document;

fn main() {
    let doc = parse_document(include_str!("../fixtures/lambda_add.term")).expect("fixture parses");
    let g = interpret(&doc.terms[0]).unwrap();
    let mut schemas = SchemaId::STRUCTURAL.to_vec();
    schemas.push(SchemaId::Beta);
    let (out, report) = saturate(
        &g,
        &SaturationConfig {
            max_iterations: 3,
            schemas,
            ..Default::default()
        },
    );
    for step in &report.trace {
        println!("{}", serde_json::to_string(step).unwrap());
    }
    println!(
        "reduced form {} present: {}",
        doc.terms[1],
        contains_block_iso(&out, &interpret(&doc.terms[1]).unwrap())
    );
}
