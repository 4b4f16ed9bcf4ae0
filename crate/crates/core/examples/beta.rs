//! Beta reduction under a binder as a rewrite step.

use egraph_bindings::cospan::is_isomorphic;
use egraph_bindings::interp::interpret;
use egraph_bindings::rewrite::{
    apply_rewrite, boundary_complement, instantiate_schema, schema_anchors, SchemaId,
};
use egraph_bindings::syntax::parse_document;

fn main() {
    let doc = parse_document(include_str!("../fixtures/beta.term")).expect("fixture parses");
    let g = interpret(&doc.terms[0]).unwrap();
    let anchor = &schema_anchors(SchemaId::Beta, &g)[0];
    let (rule, m) = instantiate_schema(SchemaId::Beta, &g, anchor).unwrap();
    println!("redex at {anchor:?}");
    let comp = boundary_complement(&rule, &g, &m).unwrap();
    println!("complement inputs  {:?}", comp.cospan.inputs);
    println!("complement outputs {:?}", comp.cospan.outputs);
    let out = apply_rewrite(&g, &rule, &m).unwrap().result;
    println!(
        "reduct is {}: {}",
        doc.terms[1],
        is_isomorphic(&out, &interpret(&doc.terms[1]).unwrap())
    );
}
