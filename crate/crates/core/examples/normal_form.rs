//! Distribute joins outward until the graph is a single box of join-free blocks.

use egraph_bindings::cospan::is_isomorphic;
use egraph_bindings::interp::interpret;
use egraph_bindings::saturate::{is_sum_of_blocks, saturate, SaturationConfig};
use egraph_bindings::syntax::parse_document;
use egraph_bindings::term::normal_form_sum;

fn main() {
    let src = "type A; op f : A -> A; op g : A -> A; op m : A, A -> A;
               term (lam[A|A|A]{ m; (f + g) } * (f + g)); ev[A|A];";
    let doc = parse_document(src).expect("parses");
    let t = &doc.terms[0];
    let g = interpret(t).unwrap();
    let (out, report) = saturate(&g, &SaturationConfig::default());
    println!("{} structural steps", report.trace.len());
    println!("sum of blocks: {}", is_sum_of_blocks(&out));
    for s in normal_form_sum(t) {
        println!("  summand {s}");
    }
    let summands: Vec<_> = normal_form_sum(t)
        .iter()
        .map(|s| interpret(s).unwrap())
        .collect();
    let mut distinct: Vec<_> = Vec::new();
    for s in summands {
        if !distinct.iter().any(|d| is_isomorphic(d, &s)) {
            distinct.push(s);
        }
    }
    let expected = egraph_bindings::cospan::join_many(&distinct).unwrap();
    println!("matches the summands: {}", is_isomorphic(&out, &expected));
}
