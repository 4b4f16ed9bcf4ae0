//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --release --test acceptance`; the summary lines go
//! straight to stderr and show even when output is captured.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::{fixture, join_free_terms, random_term, report, sig3};
use egraph_bindings::cospan::{
    compose, interface_violations, is_isomorphic, is_mda, is_well_typed, join, join_many, tensor,
    ExtendedCospan,
};
use egraph_bindings::ehyp::{
    is_directed_acyclic, pushout, search_homomorphisms, validate, EHypergraph, EdgeId, EdgeKind,
    Elem, Homomorphism, SearchMode, SearchOptions, Site, VertexId,
};
use egraph_bindings::interp::{interpret, interpret_rule};
use egraph_bindings::rewrite::{
    apply_rewrite, boundary_complement, find_convex_matches, instantiate_schema, rewrite_all,
    schema_anchors, ComplementCase, Match, RewriteRule, SchemaId,
};
use egraph_bindings::saturate::{
    contains_block_iso, is_sum_of_blocks, lift_rule, replay, saturate, SaturationConfig,
};
use egraph_bindings::syntax::parse_term;
use egraph_bindings::term::{normal_form_sum, smc_closure, term_rewrite_step_capped, TermRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// pinned limits
const SMC_DEPTH: usize = 4;
// one more step than absorption: sliding a constant off a wire costs five moves
const REWRITE_DEPTH: usize = 5;
const CLOSURE_CAP: usize = 4000;
const TERM_NODES: usize = 6;
const LEG_POOL: usize = 400;
const LIMIT_ABSORPTION: Duration = Duration::from_secs(60);
const LIMIT_REWRITE: Duration = Duration::from_secs(120);
const LIMIT_PUSHOUT: Duration = Duration::from_secs(30);
const LIMIT_NORMAL_FORM: Duration = Duration::from_secs(120);

fn verdict(n: usize, name: &str, ok: bool, detail: String) {
    report(&format!(
        "acceptance {n} {name}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    ));
}

/// Representatives of the distinct isomorphism classes in `cs`.
fn iso_classes(cs: Vec<ExtendedCospan>) -> Vec<ExtendedCospan> {
    let mut out: Vec<ExtendedCospan> = Vec::new();
    for c in cs {
        if !out.iter().any(|d| is_isomorphic(d, &c)) {
            out.push(c);
        }
    }
    out
}

fn same_classes(xs: &[ExtendedCospan], ys: &[ExtendedCospan]) -> bool {
    xs.len() == ys.len() && xs.iter().all(|x| ys.iter().any(|y| is_isomorphic(x, y)))
}

#[test]
fn c1_smc_absorption() {
    let start = Instant::now();
    let terms = join_free_terms(&sig3(), TERM_NODES);
    let (mut pairs, mut bad, mut capped) = (0usize, Vec::new(), 0usize);
    for t in &terms {
        let g = interpret(t).unwrap();
        let closure = smc_closure(t, SMC_DEPTH, CLOSURE_CAP);
        capped += usize::from(closure.bound_exhausted);
        for u in &closure.terms[1..] {
            pairs += 1;
            if !is_isomorphic(&g, &interpret(u).unwrap()) {
                bad.push(format!("{t} vs {u}"));
            }
        }
    }
    let took = start.elapsed();
    let ok = bad.is_empty() && took < LIMIT_ABSORPTION;
    verdict(
        1,
        "SMC absorption",
        ok,
        format!(
            "{} terms, {pairs} equal pairs, {} disagreements, {capped} capped closures, {took:.1?}",
            terms.len(),
            bad.len()
        ),
    );
    assert!(ok, "{:?}", &bad[..bad.len().min(5)]);
}

fn user_rule() -> TermRule {
    let s = sig3();
    TermRule::new(
        "push_f",
        parse_term("m; f", &s).unwrap(),
        parse_term("(f * f); m", &s).unwrap(),
    )
}

#[test]
fn c2_rewriting_agrees_with_terms() {
    let start = Instant::now();
    let rule = user_rule();
    let graph_rule = interpret_rule(&rule).unwrap();
    let terms = join_free_terms(&sig3(), TERM_NODES);
    let (mut bad, mut steps) = (Vec::new(), 0usize);
    for t in &terms {
        let by_terms = term_rewrite_step_capped(t, &rule, REWRITE_DEPTH, CLOSURE_CAP);
        let from_terms = iso_classes(
            by_terms
                .terms
                .iter()
                .map(|u| interpret(u).unwrap())
                .collect(),
        );
        let from_graph = iso_classes(
            rewrite_all(&interpret(t).unwrap(), &graph_rule)
                .into_iter()
                .map(|(_, r)| r.result)
                .collect(),
        );
        steps += from_graph.len();
        if !same_classes(&from_terms, &from_graph) {
            bad.push(format!(
                "{t}: terms {} graphs {}",
                from_terms.len(),
                from_graph.len()
            ));
        }
    }
    let took = start.elapsed();
    let ok = bad.is_empty() && took < LIMIT_REWRITE;
    verdict(
        2,
        "rewriting agrees with terms",
        ok,
        format!(
            "{} terms, {steps} steps, {} disagreements, {took:.1?}",
            terms.len(),
            bad.len()
        ),
    );
    assert!(ok, "{:?}", &bad[..bad.len().min(5)]);
}

/// A small random e-hypergraph: a few wires, plain edges over them and
/// sometimes a box. Returns the graph and one site's vertices to glue along.
fn random_piece(rng: &mut ChaCha8Rng, nested: bool) -> (EHypergraph, Vec<VertexId>) {
    let s = sig3();
    let mut g = EHypergraph::new();
    let mut top: Vec<VertexId> = (0..rng.gen_range(1..=3))
        .map(|_| g.add_vertex(common::a()))
        .collect();
    let mut inner = Vec::new();
    if nested {
        let kind = if rng.gen_bool(0.5) {
            EdgeKind::EBox
        } else {
            EdgeKind::LambdaBox
        };
        let bx = g.add_edge(kind.clone(), vec![], vec![]);
        let blocks = if kind == EdgeKind::EBox { 2 } else { 1 };
        for b in 0..blocks {
            let v = g.add_vertex(common::a());
            g.set_parent(Elem::V(v), Some(bx));
            if kind == EdgeKind::EBox {
                g.set_block(Elem::V(v), Some(b));
            }
            if b == 0 {
                inner.push(v);
            }
        }
    }
    while g.num_elements() < 6 && rng.gen_bool(0.6) {
        let pick = |rng: &mut ChaCha8Rng, vs: &[VertexId]| vs[rng.gen_range(0..vs.len())];
        let x = pick(rng, &top);
        if rng.gen_bool(0.5) {
            g.add_edge(
                EdgeKind::Plain(s.op("f").unwrap()),
                vec![x],
                vec![pick(rng, &top)],
            );
        } else if g.num_elements() < 5 {
            let y = g.add_vertex(common::a());
            top.push(y);
            g.add_edge(
                EdgeKind::Plain(s.op("m").unwrap()),
                vec![x, pick(rng, &top)],
                vec![y],
            );
        }
    }
    let glue = if nested { inner } else { top };
    (g, glue)
}

/// Maps `p -> t` extending `fixed`, at most `cap` of them.
fn maps(
    p: &EHypergraph,
    t: &EHypergraph,
    fixed: BTreeMap<VertexId, VertexId>,
    cap: usize,
) -> Vec<Homomorphism> {
    let mut opts = SearchOptions::new(SearchMode::Homomorphism);
    opts.fixed = fixed;
    let mut out = Vec::new();
    search_homomorphisms(p, t, &opts, &mut |h| {
        out.push(h.clone());
        out.len() >= cap
    });
    out
}

fn sample<T: Clone>(rng: &mut ChaCha8Rng, xs: Vec<T>, n: usize) -> Vec<T> {
    rand::seq::index::sample(rng, xs.len(), n.min(xs.len()))
        .into_iter()
        .map(|i| xs[i].clone())
        .collect()
}

#[test]
fn c3_pushout_universal_property() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut spans, mut cocones, mut bad) = (0usize, 0usize, Vec::new());
    while spans < 200 {
        let nested = rng.gen_bool(0.3);
        let (x, xs) = random_piece(&mut rng, nested);
        let (y, ys) = random_piece(&mut rng, false);
        let k = rng.gen_range(0..=xs.len().min(ys.len()));
        let mut z = EHypergraph::new();
        let (mut f, mut g) = (Homomorphism::default(), Homomorphism::default());
        for i in 0..k {
            let v = z.add_vertex(common::a());
            f.on_vertices.insert(v, xs[i]);
            g.on_vertices.insert(v, ys[ys.len() - 1 - i]);
        }
        let Ok((p, p1, p2)) = pushout(&z, &x, &f, &y, &g) else {
            continue;
        };
        spans += 1;
        // a second target with room for legs that do not cover it
        let mut wider = p.clone();
        wider.add_vertex(common::a());
        for w in [&p, &wider] {
            // cocones are sampled; the search for mediating maps is exhaustive
            let legs = maps(&x, w, BTreeMap::new(), LEG_POOL);
            for hx in sample(&mut rng, legs, 16) {
                let fixed: BTreeMap<VertexId, VertexId> = g
                    .on_vertices
                    .iter()
                    .map(|(zv, yv)| (*yv, hx.v(f.v(*zv))))
                    .collect();
                let partners = maps(&y, w, fixed, LEG_POOL);
                for hy in sample(&mut rng, partners, 8) {
                    cocones += 1;
                    // the legs fix the mediating map on their images; any
                    // other vertex of the pushout stays free in the search
                    let pinned: BTreeMap<VertexId, VertexId> = x
                        .vertices
                        .keys()
                        .map(|v| (p1.v(*v), hx.v(*v)))
                        .chain(y.vertices.keys().map(|v| (p2.v(*v), hy.v(*v))))
                        .collect();
                    let n = maps(&p, w, pinned, usize::MAX)
                        .into_iter()
                        .filter(|u| p1.then(u) == hx && p2.then(u) == hy)
                        .count();
                    if n != 1 {
                        bad.push(format!("span {spans}: {n} mediating maps"));
                    }
                }
            }
        }
    }
    let took = start.elapsed();
    let ok = bad.is_empty() && took < LIMIT_PUSHOUT;
    verdict(
        3,
        "pushout universal property",
        ok,
        format!(
            "{spans} spans, {cocones} cocones, {} failures, {took:.1?}",
            bad.len()
        ),
    );
    assert!(ok, "{:?}", &bad[..bad.len().min(5)]);
}

/// Candidate complement carriers: sub-hypergraphs of `g` with the right
/// number of edges and vertices, where kept vertices may also be split in two.
fn complement_carriers(g: &EHypergraph, edges: usize, vertices: usize) -> Vec<EHypergraph> {
    let es: Vec<EdgeId> = g.edges.keys().copied().collect();
    let vs: Vec<VertexId> = g.vertices.keys().copied().collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << es.len()) {
        if mask.count_ones() as usize != edges {
            continue;
        }
        let kept_e: Vec<EdgeId> = es
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        let touched: BTreeSet<VertexId> = kept_e
            .iter()
            .flat_map(|e| {
                g.edge(*e)
                    .sources
                    .iter()
                    .chain(&g.edge(*e).targets)
                    .copied()
            })
            .collect();
        // per vertex: 0 deleted, 1 kept, 2 kept and split
        let mut choice = vec![0u8; vs.len()];
        loop {
            let count: usize = choice.iter().map(|c| *c as usize).sum();
            let ok = vs
                .iter()
                .zip(&choice)
                .all(|(v, c)| *c > 0 || !touched.contains(v));
            if ok && count == vertices {
                let mut keep: BTreeSet<Elem> = kept_e.iter().map(|e| Elem::E(*e)).collect();
                keep.extend(
                    vs.iter()
                        .zip(&choice)
                        .filter(|(_, c)| **c > 0)
                        .map(|(v, _)| Elem::V(*v)),
                );
                let parents_kept = keep
                    .iter()
                    .all(|x| g.parent_of(*x).is_none_or(|p| keep.contains(&Elem::E(p))));
                if parents_kept {
                    let mut c = g.restrict(&keep);
                    for (v, _) in vs.iter().zip(&choice).filter(|(_, c)| **c == 2) {
                        // the copy takes the consumers; the other way round is isomorphic
                        let w = c.add_vertex(g.vertex_type(*v).clone());
                        c.set_site(Elem::V(w), g.site(Elem::V(*v)));
                        for edge in c.edges.values_mut() {
                            edge.sources
                                .iter_mut()
                                .filter(|s| **s == *v)
                                .for_each(|s| *s = w);
                        }
                    }
                    out.push(c);
                }
            }
            // next choice vector
            let mut i = 0;
            while i < choice.len() && choice[i] == 2 {
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
            choice[i] += 1;
        }
    }
    out
}

fn injective_maps(
    n: usize,
    targets: &[VertexId],
    ok: &dyn Fn(usize, VertexId) -> bool,
) -> Vec<Vec<VertexId>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for prefix in injective_maps(n - 1, targets, ok) {
        for t in targets {
            if !prefix.contains(t) && ok(n - 1, *t) {
                let mut p = prefix.clone();
                p.push(*t);
                out.push(p);
            }
        }
    }
    out
}

/// Every graph-level complement of the match, up to isomorphism over the
/// foot: a valid monogamous acyclic carrier `c` with an injective foot map
/// such that gluing the pattern back yields `g`, agreeing with the match.
fn brute_force_complements(
    rule: &RewriteRule,
    g: &ExtendedCospan,
    m: &Match,
) -> Vec<(EHypergraph, Vec<VertexId>)> {
    let l = &rule.lhs.carrier;
    let foot_l: Vec<VertexId> = rule
        .lhs
        .inputs
        .external_vertices()
        .into_iter()
        .chain(rule.lhs.outputs.external_vertices())
        .collect();
    let gc = &g.carrier;
    let n_edges = gc.edges.len() - l.edges.len();
    let n_vertices = gc.vertices.len() + foot_l.len() - l.vertices.len();
    let site = l
        .elems()
        .find(|x| l.is_top_level(*x))
        .map(|x| gc.site(m.embedding.elem(x)))
        .unwrap_or(Site::TOP);
    let mut found: Vec<(EHypergraph, Vec<VertexId>)> = Vec::new();
    for c in complement_carriers(gc, n_edges, n_vertices) {
        let monogamous = c
            .vertices
            .keys()
            .all(|v| c.in_degree(*v) <= 1 && c.out_degree(*v) <= 1);
        if !monogamous || !validate(&c).is_empty() || !is_directed_acyclic(&c) {
            continue;
        }
        let targets: Vec<VertexId> = c.vertices.keys().copied().collect();
        let n_in = rule.lhs.inputs.external.len();
        // pattern inputs leave the complement as outputs and so have no
        // consumers there; pattern outputs enter it and have no producers
        let typed = |i: usize, v: VertexId| {
            c.vertex_type(v) == l.vertex_type(foot_l[i])
                && if i < n_in {
                    c.out_degree(v) == 0
                } else {
                    c.in_degree(v) == 0
                }
        };
        for j in injective_maps(foot_l.len(), &targets, &typed) {
            let mut z = EHypergraph::new();
            let (mut to_c, mut to_l) = (Homomorphism::default(), Homomorphism::default());
            for (i, lv) in foot_l.iter().enumerate() {
                let zv = z.add_vertex(l.vertex_type(*lv).clone());
                to_c.on_vertices.insert(zv, j[i]);
                to_l.on_vertices.insert(zv, *lv);
            }
            let Ok((mut glued, _, into)) = pushout(&z, &c, &to_c, l, &to_l) else {
                continue;
            };
            for x in l.elems().filter(|x| l.is_top_level(*x)) {
                glued.set_site(into.elem(x), site);
            }
            let mut opts = SearchOptions::new(SearchMode::Iso);
            opts.fixed = l
                .vertices
                .keys()
                .map(|v| (into.v(*v), m.embedding.v(*v)))
                .collect();
            let mut agrees = false;
            search_homomorphisms(&glued, gc, &opts, &mut |iso| {
                agrees = into.then(iso) == m.embedding;
                agrees
            });
            if agrees && !found.iter().any(|(d, dj)| same_over_foot(d, dj, &c, &j)) {
                found.push((c.clone(), j));
            }
        }
    }
    found
}

fn same_over_foot(c1: &EHypergraph, j1: &[VertexId], c2: &EHypergraph, j2: &[VertexId]) -> bool {
    let mut opts = SearchOptions::new(SearchMode::Iso);
    opts.fixed = j1.iter().zip(j2).map(|(a, b)| (*a, *b)).collect();
    search_homomorphisms(c1, c2, &opts, &mut |_| true)
}

fn rewrite_fixtures() -> Vec<(String, ExtendedCospan, RewriteRule)> {
    let doc = fixture("rewrites.term");
    let mut out = Vec::new();
    for t in &doc.terms {
        for r in &doc.rules {
            out.push((
                format!("{} on {t}", r.name),
                interpret(t).unwrap(),
                interpret_rule(r).unwrap(),
            ));
        }
    }
    let shift = fixture("shift_left.term");
    let g = interpret(&shift.terms[0]).unwrap();
    for r in &shift.rules {
        out.push((
            format!("{} on the shift-left source", r.name),
            g.clone(),
            interpret_rule(r).unwrap(),
        ));
    }
    for name in ["beta.term", "lambda_add.term"] {
        let g = interpret(&fixture(name).terms[0]).unwrap();
        for anchor in schema_anchors(SchemaId::Beta, &g) {
            let (rule, _) = instantiate_schema(SchemaId::Beta, &g, &anchor).unwrap();
            out.push((format!("beta on {name}"), g.clone(), rule));
        }
    }
    out
}

#[test]
fn c4_complement_uniqueness() {
    let (mut checked, mut built, mut bad) = (0usize, 0usize, Vec::new());
    for (name, g, rule) in rewrite_fixtures() {
        for m in find_convex_matches(&rule, &g) {
            checked += 1;
            let all = brute_force_complements(&rule, &g, &m);
            match boundary_complement(&rule, &g, &m) {
                Ok(comp) => {
                    built += 1;
                    let j: Vec<VertexId> = comp.c_in.iter().chain(&comp.c_out).copied().collect();
                    if all.len() != 1
                        || !same_over_foot(&all[0].0, &all[0].1, &comp.cospan.carrier, &j)
                    {
                        bad.push(format!(
                            "{name}: {} complements, constructed one not among them",
                            all.len()
                        ));
                    }
                }
                Err(e) if all.len() > 1 => {
                    bad.push(format!("{name}: {} complements ({e})", all.len()))
                }
                Err(_) => {}
            }
        }
    }
    let ok = bad.is_empty() && checked > 0;
    verdict(
        4,
        "complement uniqueness",
        ok,
        format!(
            "{checked} matches, {built} complements, {} failures",
            bad.len()
        ),
    );
    assert!(ok, "{bad:?}");
}

fn load_json(name: &str) -> ExtendedCospan {
    let text = std::fs::read_to_string(common::fixture_path(name)).unwrap();
    ExtendedCospan::from_json(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn names(vs: &[VertexId], roles: &BTreeMap<VertexId, &str>) -> String {
    let parts: Vec<&str> = vs
        .iter()
        .map(|v| roles.get(v).copied().unwrap_or("?"))
        .collect();
    format!("[{}]", parts.join(","))
}

#[test]
fn c5_beta_under_a_binder() {
    let g = load_json("beta_source.egjson");
    let expected = load_json("beta_expected.egjson");
    let anchors = schema_anchors(SchemaId::Beta, &g);
    let (rule, m) = instantiate_schema(SchemaId::Beta, &g, &anchors[0]).unwrap();
    let comp = boundary_complement(&rule, &g, &m).unwrap();
    let out = apply_rewrite(&g, &rule, &m).unwrap().result;

    // name the wires the way the worked example does
    let h = |v: VertexId| m.embedding.v(v);
    let l_in = rule.lhs.inputs.external_vertices();
    let l_out = rule.lhs.outputs.external_vertices();
    let mut roles = BTreeMap::new();
    roles.insert(g.inputs.external_vertices()[0], "u1");
    roles.insert(g.outputs.external_vertices()[0], "u2");
    roles.insert(h(l_in[0]), "v1");
    roles.insert(h(l_in[1]), "v2");
    roles.insert(h(l_out[0]), "v3");
    let ni = comp.cospan.inputs.internal.len() - comp.c_out.len();
    let no = comp.cospan.outputs.internal.len() - comp.c_in.len();
    let inputs = format!(
        "{} + {}",
        names(&comp.cospan.inputs.internal[..ni], &roles),
        names(&comp.cospan.inputs.internal[ni..], &roles)
    );
    let outputs = format!(
        "{} + {}",
        names(&comp.cospan.outputs.internal[..no], &roles),
        names(&comp.cospan.outputs.internal[no..], &roles)
    );
    let ext_in = names(&comp.cospan.inputs.external_vertices(), &roles);
    let ext_out = names(&comp.cospan.outputs.external_vertices(), &roles);
    // the external output u2 sits in the kept part of the output list
    let shape = inputs == "[u1,v1,v2] + [v3]"
        && outputs == "[u2,v3] + [v1,v2]"
        && ext_in == "[u1]"
        && ext_out == "[u2]";
    let ok = is_isomorphic(&out, &expected) && shape && l_in.len() == 2 && l_out.len() == 1;
    verdict(
        5,
        "beta under a binder",
        ok,
        format!("{ext_in} -> {inputs} ; {outputs} <- {ext_out}"),
    );
    assert!(ok);
}

fn lifted_rules(doc: &egraph_bindings::syntax::Document) -> Vec<RewriteRule> {
    doc.rules.iter().map(|r| lift_rule(r).unwrap()).collect()
}

#[test]
fn c6_shift_left_scenario() {
    let doc = fixture("shift_left.term");
    let g = interpret(&doc.terms[0]).unwrap();
    let cfg = SaturationConfig {
        max_iterations: 10,
        max_elements: 200,
        rules: lifted_rules(&doc),
        ..Default::default()
    };
    let (out, rep) = saturate(&g, &cfg);
    let found = contains_block_iso(&out, &interpret(&doc.terms[1]).unwrap());
    let ok = rep.fixpoint && rep.iterations <= 10 && rep.peak_elements <= 200 && found;
    verdict(
        6,
        "shift-left saturation",
        ok,
        format!(
            "{} iterations, peak {} elements, fixpoint {}, block iso to a: {found}",
            rep.iterations, rep.peak_elements, rep.fixpoint
        ),
    );
    assert!(ok);
}

#[test]
fn c7_beta_scenario() {
    let doc = fixture("lambda_add.term");
    let g = interpret(&doc.terms[0]).unwrap();
    let mut schemas = SchemaId::STRUCTURAL.to_vec();
    schemas.push(SchemaId::Beta);
    let cfg = SaturationConfig {
        max_iterations: 3,
        schemas,
        ..Default::default()
    };
    let (out, rep) = saturate(&g, &cfg);
    let reduced = interpret(&doc.terms[1]).unwrap();
    // the first iteration that holds the reduced block
    let first = (1..=3).find(|n| {
        let steps: Vec<_> = rep
            .trace
            .iter()
            .filter(|s| s.iteration <= *n)
            .cloned()
            .collect();
        contains_block_iso(&replay(&g, &[], &steps).unwrap(), &reduced)
    });
    let ok = contains_block_iso(&out, &reduced) && first.is_some();
    verdict(
        7,
        "beta saturation",
        ok,
        format!(
            "reduced block after iteration {first:?}, {} iterations run",
            rep.iterations
        ),
    );
    assert!(ok);
}

#[test]
fn c8_normal_form() {
    let start = Instant::now();
    let s = sig3();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut bad, mut two_joins, mut binders) = (Vec::new(), 0usize, 0usize);
    for _ in 0..100 {
        // join-free draws say nothing about distributivity
        let t = std::iter::repeat_with(|| random_term(&s, &mut rng, 8, 2))
            .find(|t| t.join_count() > 0)
            .unwrap();
        two_joins += usize::from(t.join_count() == 2);
        binders += usize::from(t.to_string().contains("lam"));
        let (out, _) = saturate(&interpret(&t).unwrap(), &SaturationConfig::default());
        let summands = iso_classes(
            normal_form_sum(&t)
                .iter()
                .map(|u| interpret(u).unwrap())
                .collect(),
        );
        let expected = join_many(&summands).unwrap();
        if !is_sum_of_blocks(&out) || !is_isomorphic(&out, &expected) {
            bad.push(t.to_string());
        }
    }
    let took = start.elapsed();
    let ok = bad.is_empty() && took < LIMIT_NORMAL_FORM;
    verdict(8, "normal form", ok, format!("100 terms with joins ({two_joins} with two, {binders} with binders), {} mismatches, {took:.1?}", bad.len()));
    assert!(ok, "{bad:?}");
}

/// Every contracted check on a cospan: validity, interfaces, MDA and, when
/// `typed`, well-typedness.
fn violations(c: &ExtendedCospan, typed: bool) -> usize {
    let mut n = validate(&c.carrier).len() + interface_violations(c).len() + is_mda(c).len();
    if typed {
        n += is_well_typed(c).len();
    }
    n
}

#[test]
fn c9_validator_invariants() {
    let s = sig3();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut terms = join_free_terms(&s, 5);
    terms.extend((0..60).map(|_| random_term(&s, &mut rng, 8, 2)));
    let (mut outputs, mut bad) = (0usize, Vec::new());
    let mut tally = |what: &str, c: &ExtendedCospan, typed: bool| {
        outputs += 1;
        let n = violations(c, typed);
        if n > 0 {
            bad.push(format!("{what}: {n}"));
        }
    };
    let graphs: Vec<ExtendedCospan> = terms.iter().map(|t| interpret(t).unwrap()).collect();
    for g in &graphs {
        tally("interpret", g, true);
    }
    for pair in graphs.windows(2) {
        tally("tensor", &tensor(&pair[0], &pair[1]), true);
        if let Ok(c) = compose(&pair[0], &pair[1]) {
            tally("compose", &c, true);
        }
        if let Ok(c) = join(&pair[0], &pair[1]) {
            tally("join", &c, true);
        }
    }
    let mut rules = vec![interpret_rule(&user_rule()).unwrap()];
    rules.extend(
        fixture("rewrites.term")
            .rules
            .iter()
            .map(|r| interpret_rule(r).unwrap()),
    );
    let mut targets = graphs.clone();
    targets.extend(rewrite_fixtures().into_iter().map(|(_, g, _)| g));
    for g in &targets {
        for r in &rules {
            for m in find_convex_matches(r, g) {
                if let Ok(comp) = boundary_complement(r, g, &m) {
                    tally(
                        "complement",
                        &comp.cospan,
                        comp.case == ComplementCase::TopLevel,
                    );
                }
                if let Ok(out) = apply_rewrite(g, r, &m) {
                    tally("rewrite", &out.result, true);
                }
            }
        }
        for schema in SchemaId::ALL {
            for anchor in schema_anchors(schema, g) {
                if let Ok((r, m)) = instantiate_schema(schema, g, &anchor) {
                    tally("schema rule", &r.lhs, true);
                    tally("schema rule", &r.rhs, true);
                    if let Ok(out) = apply_rewrite(g, &r, &m) {
                        tally("schema", &out.result, true);
                    }
                }
            }
        }
        tally(
            "saturate",
            &saturate(g, &SaturationConfig::default()).0,
            true,
        );
    }
    for name in ["shift_left.term", "lambda_add.term", "nested.term"] {
        let doc = fixture(name);
        let mut schemas = SchemaId::STRUCTURAL.to_vec();
        schemas.push(SchemaId::Beta);
        let cfg = SaturationConfig {
            rules: lifted_rules(&doc),
            schemas,
            ..Default::default()
        };
        tally(
            "saturate",
            &saturate(&interpret(&doc.terms[0]).unwrap(), &cfg).0,
            true,
        );
    }
    let ok = bad.is_empty();
    verdict(
        9,
        "validator invariants",
        ok,
        format!("{outputs} outputs, {} with violations", bad.len()),
    );
    assert!(ok, "{:?}", &bad[..bad.len().min(10)]);
}
