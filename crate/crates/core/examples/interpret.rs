//! Interpret a term with a binder and a choice, then print it as JSON and DOT.

use egraph_bindings::ehyp::to_dot;
use egraph_bindings::interp::interpret;
use egraph_bindings::syntax::parse_document;

fn main() {
    let doc = parse_document(include_str!("../fixtures/nested.term")).expect("fixture parses");
    let term = &doc.terms[0];
    let graph = interpret(term).expect("fixture is well typed");
    println!("term: {term}");
    println!(
        "type: [{:?}] -> [{:?}]",
        graph.input_word(),
        graph.output_word()
    );
    println!("violations: {}", graph.check().len());
    println!("{}", graph.canonical().to_json_string());
    print!("{}", to_dot(&graph.carrier));
}
