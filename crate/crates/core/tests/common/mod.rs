//! Term populations and fixture loading shared by the integration tests.
#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;

use egraph_bindings::signature::{Signature, VertexType, Word};
use egraph_bindings::syntax::{parse_document, Document};
use egraph_bindings::term::{join, lambda, seq, tensor, type_of, Term};
use rand::Rng;

pub fn a() -> VertexType {
    VertexType::base("A")
}

/// One type, three generators: `f : A -> A`, `m : A, A -> A`, `c : -> A`.
pub fn sig3() -> Signature {
    let mut s = Signature::new();
    s.add_type("A");
    s.add_op("f", vec![a()], vec![a()]);
    s.add_op("m", vec![a(), a()], vec![a()]);
    s.add_op("c", vec![], vec![a()]);
    s
}

fn leaves(s: &Signature) -> Vec<Term> {
    vec![
        Term::Gen(s.op("f").unwrap()),
        Term::Gen(s.op("m").unwrap()),
        Term::Gen(s.op("c").unwrap()),
        Term::Id(vec![a()]),
        Term::Sym(vec![a()], vec![a()]),
    ]
}

/// Every well-typed join-free term built from `;` and `*` with at most
/// `max_size` AST nodes.
pub fn join_free_terms(s: &Signature, max_size: usize) -> Vec<Term> {
    // by_size[n] holds the well-typed terms with exactly n nodes
    let mut by_size: Vec<Vec<(Term, Word, Word)>> = vec![Vec::new(); max_size + 1];
    for t in leaves(s) {
        let (i, o) = type_of(&t).unwrap();
        by_size[1].push((t, i, o));
    }
    for n in 2..=max_size {
        let mut here = Vec::new();
        for left in 1..n - 1 {
            let right = n - 1 - left;
            for (x, xi, xo) in &by_size[left] {
                for (y, yi, yo) in &by_size[right] {
                    if xo == yi {
                        here.push((seq(x.clone(), y.clone()), xi.clone(), yo.clone()));
                    }
                    let (mut i, mut o) = (xi.clone(), xo.clone());
                    i.extend(yi.iter().cloned());
                    o.extend(yo.iter().cloned());
                    if i.len() <= 3 && o.len() <= 3 {
                        here.push((tensor(x.clone(), y.clone()), i, o));
                    }
                }
            }
        }
        by_size[n] = here;
    }
    by_size.into_iter().flatten().map(|(t, _, _)| t).collect()
}

fn random_leaf(s: &Signature, rng: &mut impl Rng) -> Term {
    let mut ls = leaves(s);
    ls.push(Term::Ev(vec![a()], vec![a()]));
    ls.swap_remove(rng.gen_range(0..ls.len()))
}

fn random_node(s: &Signature, rng: &mut impl Rng, budget: usize, joins: usize) -> Option<Term> {
    if budget < 3 || rng.gen_bool(0.25) {
        if budget >= 2 && rng.gen_bool(0.3) {
            let body = random_node(s, rng, budget - 1, joins)?;
            let (mut ins, outs) = type_of(&body).ok()?;
            let bound = vec![ins.pop()?];
            if outs.is_empty() {
                return None;
            }
            return Some(lambda(ins, bound, outs, body));
        }
        return Some(random_leaf(s, rng));
    }
    let left_budget = rng.gen_range(1..budget - 1);
    let x = random_node(s, rng, left_budget, joins)?;
    let (xi, xo) = type_of(&x).ok()?;
    let rest = budget - 1 - x.size();
    let kind = rng.gen_range(0..3);
    let want_join = kind == 2 && joins > x.join_count();
    for _ in 0..30 {
        let y = random_node(
            s,
            rng,
            rest,
            joins - x.join_count() - usize::from(want_join),
        )?;
        let (yi, yo) = type_of(&y).ok()?;
        let t = match kind {
            0 if xo == yi => seq(x.clone(), y),
            2 if want_join && xi == yi && xo == yo => join(x.clone(), y),
            1 => tensor(x.clone(), y),
            _ => continue,
        };
        return Some(t);
    }
    None
}

/// A random well-typed term with joins and binders.
pub fn random_term(s: &Signature, rng: &mut impl Rng, max_nodes: usize, max_joins: usize) -> Term {
    loop {
        if let Some(t) = random_node(s, rng, max_nodes, max_joins) {
            if t.size() <= max_nodes && t.join_count() <= max_joins && type_of(&t).is_ok() {
                return t;
            }
        }
    }
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Document {
    let src = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_document(&src).unwrap()
}

/// Writes past the test harness's output capture so the line always shows.
pub fn report(line: &str) {
    let mut err = std::io::stderr();
    let _ = writeln!(err, "{line}");
}
