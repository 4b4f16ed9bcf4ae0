use std::sync::Arc;

use super::*;
use crate::signature::OpSymbol;

fn a() -> VertexType {
    VertexType::base("A")
}

fn op(name: &str, ins: usize, outs: usize) -> Op {
    Arc::new(OpSymbol::new(name, vec![a(); ins], vec![a(); outs]))
}

/// `v0 -f-> v1`
fn single(name: &str) -> EHypergraph {
    let mut g = EHypergraph::new();
    let x = g.add_vertex(a());
    let y = g.add_vertex(a());
    g.add_edge(EdgeKind::Plain(op(name, 1, 1)), vec![x], vec![y]);
    g
}

/// An e-box with two blocks holding `f` and `g`, listed in the given order.
fn two_blocks(first: &str, second: &str) -> EHypergraph {
    let mut g = EHypergraph::new();
    let s = g.add_vertex(a());
    let t = g.add_vertex(a());
    let bx = g.add_edge(EdgeKind::EBox, vec![s], vec![t]);
    for (b, name) in [(0, first), (1, second)] {
        let x = g.add_vertex(a());
        let y = g.add_vertex(a());
        let e = g.add_edge(EdgeKind::Plain(op(name, 1, 1)), vec![x], vec![y]);
        for el in [Elem::V(x), Elem::V(y), Elem::E(e)] {
            g.set_parent(el, Some(bx));
            g.set_block(el, Some(b));
        }
    }
    g
}

/// An e-box with two blocks, the first of which holds a lambda box.
fn nested() -> EHypergraph {
    let arrow = VertexType::arrow_of_words(&[a()], &[a()]);
    let mut g = EHypergraph::new();
    let s = g.add_vertex(a());
    let t = g.add_vertex(arrow.clone());
    let bx = g.add_edge(EdgeKind::EBox, vec![s], vec![t]);
    // block 0: lambda box whose body is f
    let c = g.add_vertex(a());
    let out = g.add_vertex(arrow.clone());
    let lam = g.add_edge(EdgeKind::LambdaBox, vec![c], vec![out]);
    for el in [Elem::V(c), Elem::V(out), Elem::E(lam)] {
        g.set_parent(el, Some(bx));
        g.set_block(el, Some(0));
    }
    let x = g.add_vertex(a());
    let y = g.add_vertex(a());
    let z = g.add_vertex(a());
    let f = g.add_edge(EdgeKind::Plain(op("m", 2, 1)), vec![x, y], vec![z]);
    for el in [Elem::V(x), Elem::V(y), Elem::V(z), Elem::E(f)] {
        g.set_parent(el, Some(lam));
    }
    // block 1: a constant arrow
    let c2 = g.add_vertex(a());
    let k = g.add_vertex(arrow.clone());
    let kop = Arc::new(OpSymbol::new("k", vec![a()], vec![arrow]));
    let ke = g.add_edge(EdgeKind::Plain(kop), vec![c2], vec![k]);
    for el in [Elem::V(c2), Elem::V(k), Elem::E(ke)] {
        g.set_parent(el, Some(bx));
        g.set_block(el, Some(1));
    }
    g
}

#[test]
fn validate_examples() {
    assert!(validate(&EHypergraph::new()).is_empty());
    assert!(validate(&two_blocks("f", "g")).is_empty());
    assert_eq!(validate(&nested()), vec![]);

    let mut one = two_blocks("f", "g");
    let members: Vec<Elem> = one.block.keys().copied().collect();
    for x in members {
        one.set_block(x, Some(0));
    }
    let v = validate(&one);
    assert!(
        v.iter()
            .any(|x| x.clause == "blocks" && x.message.contains("single block")),
        "{v:?}"
    );
}

#[test]
fn validate_catches_structural_errors() {
    let mut g = single("f");
    let bx = g.add_edge(EdgeKind::LambdaBox, vec![], vec![]);
    assert!(validate(&g).iter().any(|x| x.clause == "childless"));
    // a vertex moved into the box while its edge stays outside
    g.set_parent(Elem::V(VertexId(0)), Some(bx));
    assert!(validate(&g).iter().any(|x| x.clause == "connectivity"));

    let mut g = single("f");
    g.vertices.insert(VertexId(1), VertexType::base("B"));
    assert!(validate(&g).iter().any(|x| x.clause == "typing"));
}

#[test]
fn degrees_and_cycles() {
    let g = single("f");
    assert!(is_directed_acyclic(&g));
    assert_eq!(in_degree(&g, VertexId(0)), 0);
    assert_eq!(out_degree(&g, VertexId(0)), 1);

    let mut loopy = EHypergraph::new();
    let v = loopy.add_vertex(a());
    loopy.add_edge(EdgeKind::Plain(op("f", 1, 1)), vec![v], vec![v]);
    assert!(!is_directed_acyclic(&loopy));

    let mut chain = single("f");
    let z = chain.add_vertex(a());
    chain.add_edge(EdgeKind::Plain(op("g", 1, 1)), vec![VertexId(1)], vec![z]);
    assert!(is_directed_acyclic(&chain));
    assert_eq!(
        (
            in_degree(&chain, VertexId(1)),
            out_degree(&chain, VertexId(1))
        ),
        (1, 1)
    );
}

#[test]
fn coproduct_is_disjoint_and_valid() {
    let g = nested();
    let (u, i1, i2) = coproduct(&g, &EHypergraph::new());
    assert!(find_isomorphism(&u, &g).is_some());
    assert!(is_homomorphism(&i1, &g, &u));
    assert!(i2.on_vertices.is_empty());

    let (u, i1, i2) = coproduct(&g, &g);
    assert!(validate(&u).is_empty());
    assert_eq!(
        u.edges
            .values()
            .filter(|e| e.kind == EdgeKind::EBox)
            .count(),
        2
    );
    assert!(is_homomorphism(&i1, &g, &u) && is_homomorphism(&i2, &g, &u));
    assert!(i1.is_injective() && i2.is_injective());
    let mut hit: BTreeSet<Elem> = g.elems().map(|x| i1.elem(x)).collect();
    hit.extend(g.elems().map(|x| i2.elem(x)));
    assert_eq!(hit.len(), u.num_elements());
}

#[test]
fn homomorphism_clauses() {
    let g = nested();
    assert!(is_homomorphism(&Homomorphism::identity(&g), &g, &g));

    // a lambda box cannot map onto an e-box
    let mut lam = EHypergraph::new();
    let s = lam.add_vertex(a());
    let t = lam.add_vertex(a());
    let l = lam.add_edge(EdgeKind::LambdaBox, vec![s], vec![t]);
    let c = lam.add_vertex(a());
    lam.set_parent(Elem::V(c), Some(l));
    let target = two_blocks("f", "g");
    let phi = Homomorphism {
        on_vertices: BTreeMap::from([(s, VertexId(0)), (t, VertexId(1)), (c, VertexId(2))]),
        on_edges: BTreeMap::from([(l, EdgeId(0))]),
    };
    assert!(!is_homomorphism(&phi, &lam, &target));
}

#[test]
fn block_collapse_needs_related_images() {
    // two isolated vertices in different blocks of one box
    let mut f = EHypergraph::new();
    let s = f.add_vertex(a());
    let bx = f.add_edge(EdgeKind::EBox, vec![s], vec![]);
    let x = f.add_vertex(a());
    let y = f.add_vertex(a());
    for (v, b) in [(x, 0), (y, 1)] {
        f.set_parent(Elem::V(v), Some(bx));
        f.set_block(Elem::V(v), Some(b));
    }
    let mut g = f.clone();
    let z = g.add_vertex(a());
    g.set_parent(Elem::V(z), Some(bx));
    g.set_block(Elem::V(z), Some(0));
    // collapsing both onto block 0 preserves the relation
    let mut phi = Homomorphism::identity(&f);
    phi.on_vertices.insert(y, z);
    assert!(is_homomorphism(&phi, &f, &g));
    // but two vertices of one block may not be split apart
    let mut f2 = f.clone();
    f2.set_block(Elem::V(y), Some(0));
    let mut psi = Homomorphism::identity(&f2);
    psi.on_vertices.insert(x, z);
    psi.on_vertices.insert(y, y);
    let mut g2 = g.clone();
    g2.set_block(Elem::V(y), Some(1));
    assert!(!is_homomorphism(&psi, &f2, &g2));
}

#[test]
fn pushout_glues_chain() {
    let mut z = EHypergraph::new();
    let zv = z.add_vertex(a());
    let x = single("f");
    let y = single("g");
    let f = Homomorphism {
        on_vertices: BTreeMap::from([(zv, VertexId(1))]),
        on_edges: BTreeMap::new(),
    };
    let g = Homomorphism {
        on_vertices: BTreeMap::from([(zv, VertexId(0))]),
        on_edges: BTreeMap::new(),
    };
    let (q, j1, j2) = pushout(&z, &x, &f, &y, &g).unwrap();
    assert_eq!((q.vertices.len(), q.edges.len()), (3, 2));
    assert!(validate(&q).is_empty());
    assert!(is_homomorphism(&j1, &x, &q) && is_homomorphism(&j2, &y, &q));
    assert_eq!(j1.v(VertexId(1)), j2.v(VertexId(0)));
}

#[test]
fn pushout_into_lambda_context_inherits_parent() {
    // x: a lambda box holding three isolated body vertices
    let mut x = EHypergraph::new();
    let s = x.add_vertex(a());
    let out = x.add_vertex(VertexType::arrow_of_words(&[a(), a()], &[a()]));
    let lam = x.add_edge(EdgeKind::LambdaBox, vec![s], vec![out]);
    let body: Vec<VertexId> = (0..3).map(|_| x.add_vertex(a())).collect();
    for v in &body {
        x.set_parent(Elem::V(*v), Some(lam));
    }
    // y: a top-level m edge
    let mut y = EHypergraph::new();
    let ys: Vec<VertexId> = (0..3).map(|_| y.add_vertex(a())).collect();
    let m = y.add_edge(
        EdgeKind::Plain(op("m", 2, 1)),
        vec![ys[0], ys[1]],
        vec![ys[2]],
    );
    let mut z = EHypergraph::new();
    let zs: Vec<VertexId> = (0..3).map(|_| z.add_vertex(a())).collect();
    let f = Homomorphism {
        on_vertices: zs.iter().copied().zip(body.iter().copied()).collect(),
        on_edges: BTreeMap::new(),
    };
    let g = Homomorphism {
        on_vertices: zs.iter().copied().zip(ys.iter().copied()).collect(),
        on_edges: BTreeMap::new(),
    };
    let (q, _, j2) = pushout(&z, &x, &f, &y, &g).unwrap();
    assert_eq!(validate(&q), vec![]);
    assert_eq!(q.parent_of(Elem::E(j2.e(m))), Some(lam));
    for v in &body {
        assert_eq!(q.parent_of(Elem::V(*v)), Some(lam));
    }
}

#[test]
fn pushout_rejects_ambiguous_parents() {
    let x = two_blocks("f", "g");
    let mut z = EHypergraph::new();
    let zv = z.add_vertex(a());
    // gluing a block-0 vertex to a block-0 vertex of a second box: both nested
    let f = Homomorphism {
        on_vertices: BTreeMap::from([(zv, VertexId(2))]),
        on_edges: BTreeMap::new(),
    };
    let err = pushout(&z, &x, &f, &x, &f).unwrap_err();
    assert!(matches!(
        err,
        PushoutError::PreconditionViolated { clause: 3, .. }
    ));

    let mut z2 = EHypergraph::new();
    let p = z2.add_vertex(a());
    let q = z2.add_vertex(a());
    let f2 = Homomorphism {
        on_vertices: BTreeMap::from([(p, VertexId(2)), (q, VertexId(0))]),
        on_edges: BTreeMap::new(),
    };
    let y = single("h");
    let g2 = Homomorphism {
        on_vertices: BTreeMap::from([(p, VertexId(0)), (q, VertexId(1))]),
        on_edges: BTreeMap::new(),
    };
    let err = pushout(&z2, &x, &f2, &y, &g2).unwrap_err();
    assert!(matches!(
        err,
        PushoutError::PreconditionViolated { clause: 2, .. }
    ));
}

#[test]
fn isomorphism_examples() {
    let g = nested();
    let id = find_isomorphism(&g, &g).unwrap();
    assert_eq!(id, Homomorphism::identity(&g));

    // renamed ids
    let mut renamed = EHypergraph::new();
    renamed.add_vertex(a());
    renamed.add_edge(EdgeKind::Plain(op("pad", 0, 1)), vec![], vec![VertexId(0)]);
    let _ = renamed.absorb(&g);
    renamed.remove_vertex(VertexId(0));
    renamed.remove_edge(EdgeId(0));
    assert!(find_isomorphism(&g, &renamed).is_some());

    // blocks are unordered
    assert!(find_isomorphism(&two_blocks("f", "g"), &two_blocks("g", "f")).is_some());
    assert!(find_isomorphism(&two_blocks("f", "g"), &two_blocks("f", "f")).is_none());
}

#[test]
fn json_round_trip() {
    let g = nested();
    let js = GraphJson::from_graph(&g);
    let text = serde_json::to_string(&js).unwrap();
    let back: GraphJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_graph().unwrap(), g);
}

#[test]
fn dot_mentions_clusters() {
    let dot = to_dot(&nested());
    assert!(dot.contains("cluster_e0") && dot.contains("dashed") && dot.contains("rounded"));
}
