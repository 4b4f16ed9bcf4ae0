//! Rule schemas: the join-semilattice laws, distributivity, and the
//! beta/eta/naturality equations of lambda boxes.
//!
//! A schema is instantiated at an anchor in a concrete graph. The left-hand
//! side is the anchored subgraph itself, so the match is an identity
//! embedding, and the right-hand side is computed from it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::{is_convex, Match, RewriteError, RewriteRule};
use crate::cospan::{box_interface, identity, is_isomorphic, join_many, ExtendedCospan, Interface};
use crate::ehyp::{BlockId, EdgeId, EdgeKind, Elem, Homomorphism, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    AssocPlus,
    CommPlus,
    IdemPlus,
    DistTensorPlus,
    DistSeqPlus,
    DistLambdaPlus,
    Beta,
    Eta,
    LambdaNat,
}

impl SchemaId {
    pub const ALL: [SchemaId; 9] = [
        SchemaId::AssocPlus,
        SchemaId::CommPlus,
        SchemaId::IdemPlus,
        SchemaId::DistTensorPlus,
        SchemaId::DistSeqPlus,
        SchemaId::DistLambdaPlus,
        SchemaId::Beta,
        SchemaId::Eta,
        SchemaId::LambdaNat,
    ];

    /// The structural laws used to bring a graph into sum-of-blocks form.
    pub const STRUCTURAL: [SchemaId; 5] = [
        SchemaId::IdemPlus,
        SchemaId::AssocPlus,
        SchemaId::DistLambdaPlus,
        SchemaId::DistTensorPlus,
        SchemaId::DistSeqPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::AssocPlus => "assoc+",
            SchemaId::CommPlus => "comm+",
            SchemaId::IdemPlus => "idem+",
            SchemaId::DistTensorPlus => "dist-tensor",
            SchemaId::DistSeqPlus => "dist-seq",
            SchemaId::DistLambdaPlus => "dist-lambda",
            SchemaId::Beta => "beta",
            SchemaId::Eta => "eta",
            SchemaId::LambdaNat => "lambda-nat",
        }
    }

    /// Semilattice and distributivity laws; the rest are equations between
    /// terms and are applied non-destructively during saturation.
    pub fn is_structural(self) -> bool {
        !matches!(self, SchemaId::Beta | SchemaId::Eta | SchemaId::LambdaNat)
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemaId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemaId::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown schema `{s}`"))
    }
}

fn shape(msg: impl Into<String>) -> RewriteError {
    RewriteError::ShapeMismatch(msg.into())
}

fn sort_by_interface(vs: &mut [VertexId], list: &[VertexId]) {
    vs.sort_by_key(|v| match list.iter().position(|w| w == v) {
        Some(p) => (0, p as u32),
        None => (1, v.0),
    });
}

/// The subgraph spanned by `seeds`, their descendants and incident vertices,
/// as a cospan. Ids are kept, so the returned match is an identity.
pub fn extract(g: &ExtendedCospan, seeds: &[Elem]) -> (ExtendedCospan, Match) {
    let gc = &g.carrier;
    let mut keep: BTreeSet<Elem> = BTreeSet::new();
    for x in seeds {
        keep.insert(*x);
        if let Elem::E(e) = x {
            keep.extend(gc.descendants(*e));
        }
    }
    let edges: Vec<EdgeId> = keep
        .iter()
        .filter_map(|x| if let Elem::E(e) = x { Some(*e) } else { None })
        .collect();
    for e in edges {
        let edge = gc.edge(e);
        keep.extend(
            edge.sources
                .iter()
                .chain(&edge.targets)
                .map(|v| Elem::V(*v)),
        );
    }
    let carrier = gc.restrict(&keep);
    let inc = carrier.incidence();
    let side = |producers: bool, list: &[VertexId]| {
        let free: Vec<VertexId> = carrier
            .vertices
            .keys()
            .filter(|v| {
                if producers {
                    inc.producers(**v).is_empty()
                } else {
                    inc.consumers(**v).is_empty()
                }
            })
            .copied()
            .collect();
        let (mut ext, mut strict): (Vec<VertexId>, Vec<VertexId>) = free
            .into_iter()
            .partition(|v| carrier.is_top_level(Elem::V(*v)));
        sort_by_interface(&mut ext, list);
        sort_by_interface(&mut strict, list);
        let n = ext.len();
        ext.extend(strict);
        Interface {
            internal: ext,
            external: (0..n).collect(),
        }
    };
    let inputs = side(true, &g.inputs.internal);
    let outputs = side(false, &g.outputs.internal);
    let embedding = Homomorphism::identity(&carrier);
    (
        ExtendedCospan {
            carrier,
            inputs,
            outputs,
        },
        Match { embedding },
    )
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    In,
    Out,
}

/// Identifies each `gone` vertex with its `keep` partner. Interface entries
/// of `gone` vertices are dropped on the pair's side and renamed elsewhere.
fn merge_vertices(mut c: ExtendedCospan, pairs: &[(VertexId, VertexId, Side)]) -> ExtendedCospan {
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    fn find(p: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
        let mut r = v;
        while let Some(&q) = p.get(&r) {
            if q == r {
                break;
            }
            r = q;
        }
        p.insert(v, r);
        r
    }
    let keeps: BTreeSet<VertexId> = pairs.iter().map(|(k, _, _)| *k).collect();
    for (k, g, _) in pairs {
        let (a, b) = (find(&mut parent, *k), find(&mut parent, *g));
        if a != b {
            // prefer a keep vertex, then the smaller id
            let (root, child) = match (keeps.contains(&a), keeps.contains(&b)) {
                (true, false) => (a, b),
                (false, true) => (b, a),
                _ => (a.min(b), a.max(b)),
            };
            parent.insert(child, root);
            parent.insert(root, root);
        }
    }
    let members: Vec<VertexId> = parent.keys().copied().collect();
    let rep: BTreeMap<VertexId, VertexId> = members
        .iter()
        .map(|v| (*v, find(&mut parent, *v)))
        .collect();
    let r = |v: VertexId| rep.get(&v).copied().unwrap_or(v);
    for edge in c.carrier.edges.values_mut() {
        for v in edge.sources.iter_mut().chain(edge.targets.iter_mut()) {
            *v = r(*v);
        }
    }
    for (v, root) in &rep {
        if v != root {
            c.carrier.remove_vertex(*v);
        }
    }
    let gone_in: BTreeSet<VertexId> = pairs
        .iter()
        .filter(|p| p.2 == Side::In)
        .map(|p| p.1)
        .collect();
    let gone_out: BTreeSet<VertexId> = pairs
        .iter()
        .filter(|p| p.2 == Side::Out)
        .map(|p| p.1)
        .collect();
    let carrier = &c.carrier;
    let fix = |itf: &Interface, gone: &BTreeSet<VertexId>| {
        let ext: BTreeSet<usize> = itf.external.iter().copied().collect();
        let mut out = Interface::default();
        let mut new_pos = BTreeMap::new();
        for (i, v) in itf.internal.iter().enumerate() {
            if gone.contains(v) && !ext.contains(&i) {
                continue;
            }
            let w = r(*v);
            if !carrier.vertices.contains_key(&w) {
                continue;
            }
            new_pos.insert(i, out.internal.len());
            out.internal.push(w);
        }
        out.external = itf.external.iter().map(|i| new_pos[i]).collect();
        out
    };
    let inputs = fix(&c.inputs, &gone_in);
    let outputs = fix(&c.outputs, &gone_out);
    c.inputs = inputs;
    c.outputs = outputs;
    c
}

/// Replaces the e-box `e` by the contents of its block `k`, wired to the
/// box's own sources and targets. Other blocks are discarded.
pub fn inline_block(
    c: &ExtendedCospan,
    e: EdgeId,
    k: BlockId,
) -> Result<ExtendedCospan, RewriteError> {
    let g = &c.carrier;
    if g.edges.get(&e).map(|x| &x.kind) != Some(&EdgeKind::EBox) {
        return Err(shape(format!("{e} is not an e-box")));
    }
    let blocks = g.blocks(e);
    let members = blocks
        .get(&k)
        .ok_or_else(|| shape(format!("{e} has no block {k}")))?;
    let in_block = |v: &VertexId| g.block_of(Elem::V(*v)) == Some(k);
    let bin: Vec<VertexId> = box_interface(c, e, false)
        .into_iter()
        .filter(in_block)
        .collect();
    let bout: Vec<VertexId> = box_interface(c, e, true)
        .into_iter()
        .filter(in_block)
        .collect();
    let edge = g.edge(e).clone();
    if bin.len() != edge.sources.len() || bout.len() != edge.targets.len() {
        return Err(shape(format!("block {k} of {e} is not well-typed")));
    }
    let site = g.site(Elem::E(e));
    let mut out = c.clone();
    for (b, xs) in &blocks {
        if *b == k {
            continue;
        }
        for x in xs {
            if let Elem::E(d) = x {
                for y in g.descendants(*d) {
                    out.carrier.remove(y);
                }
            }
            out.carrier.remove(*x);
        }
    }
    for x in members {
        out.carrier.set_site(*x, site);
    }
    out.carrier.remove_edge(e);
    let mut pairs: Vec<(VertexId, VertexId, Side)> = Vec::new();
    pairs.extend(
        edge.sources
            .iter()
            .zip(&bin)
            .map(|(a, b)| (*a, *b, Side::In)),
    );
    pairs.extend(
        edge.targets
            .iter()
            .zip(&bout)
            .map(|(a, b)| (*a, *b, Side::Out)),
    );
    Ok(merge_vertices(out, &pairs))
}

/// Splices the body of lambda box `lam` over the application `app` that
/// consumes its arrow output.
pub fn inline_lambda(
    c: &ExtendedCospan,
    lam: EdgeId,
    app: EdgeId,
) -> Result<ExtendedCospan, RewriteError> {
    let g = &c.carrier;
    let (Some(l), Some(a)) = (g.edges.get(&lam), g.edges.get(&app)) else {
        return Err(shape("missing edge"));
    };
    let is_app = matches!(&a.kind, EdgeKind::Plain(op) if op.is_application());
    if l.kind != EdgeKind::LambdaBox
        || !is_app
        || l.targets.len() != 1
        || a.sources.first() != Some(&l.targets[0])
    {
        return Err(shape(format!("{app} does not apply {lam}")));
    }
    if g.site(Elem::E(lam)) != g.site(Elem::E(app)) {
        return Err(shape("lambda box and application sit at different sites"));
    }
    let bin = box_interface(c, lam, false);
    let bout = box_interface(c, lam, true);
    let outer_in: Vec<VertexId> = l.sources.iter().chain(&a.sources[1..]).copied().collect();
    if bin.len() != outer_in.len() || bout.len() != a.targets.len() {
        return Err(shape(format!("{lam} is not well-typed")));
    }
    let site = g.site(Elem::E(lam));
    let arrow = l.targets[0];
    let targets = a.targets.clone();
    let mut out = c.clone();
    for x in g.children(lam) {
        out.carrier.set_site(x, site);
    }
    out.carrier.remove_edge(lam);
    out.carrier.remove_edge(app);
    out.carrier.remove_vertex(arrow);
    let mut pairs: Vec<(VertexId, VertexId, Side)> = Vec::new();
    pairs.extend(outer_in.iter().zip(&bin).map(|(a, b)| (*a, *b, Side::In)));
    pairs.extend(targets.iter().zip(&bout).map(|(a, b)| (*a, *b, Side::Out)));
    Ok(merge_vertices(out, &pairs))
}

/// Block `k` of e-box `e`, as a cospan over the box's interface.
pub fn block_cospan(
    g: &ExtendedCospan,
    e: EdgeId,
    k: BlockId,
) -> Result<ExtendedCospan, RewriteError> {
    let (mut l, _) = extract(g, &[Elem::E(e)]);
    let edge = g.carrier.edge(e);
    // the box's own port order, not the surrounding interface order
    l.inputs
        .internal
        .splice(..edge.sources.len(), edge.sources.iter().copied());
    l.outputs
        .internal
        .splice(..edge.targets.len(), edge.targets.iter().copied());
    inline_block(&l, e, k)
}

fn alternatives(l: &ExtendedCospan, e: EdgeId) -> Result<Vec<ExtendedCospan>, RewriteError> {
    l.carrier
        .blocks(e)
        .keys()
        .map(|k| inline_block(l, e, *k))
        .collect()
}

fn expect_kind(g: &ExtendedCospan, x: Elem, kind: &EdgeKind) -> Result<EdgeId, RewriteError> {
    match x {
        Elem::E(e) if g.carrier.edges.get(&e).map(|d| &d.kind) == Some(kind) => Ok(e),
        _ => Err(shape(format!("{x} is not a {}", kind.label()))),
    }
}

fn incident(g: &ExtendedCospan, e: EdgeId, v: VertexId) -> bool {
    let edge = g.carrier.edge(e);
    edge.sources.contains(&v) || edge.targets.contains(&v)
}

/// `members` are `e` plus vertices incident to it.
fn only_box(g: &ExtendedCospan, members: &[Elem], e: EdgeId) -> bool {
    members.iter().all(|x| match x {
        Elem::E(d) => *d == e,
        Elem::V(v) => incident(g, e, *v),
    })
}

/// Instantiates schema `s` at `anchor`, returning the concrete rule and the
/// identity match of its left-hand side.
///
/// Anchors: `[box, context]` or `[box]` for the distributivity laws,
/// `[outer, inner]` for associativity, `[box]` for the remaining join laws
/// and for distribution over lambda, `[lambda, application]` for beta,
/// `[lambda]` for eta and `[edge, lambda]` for naturality.
pub fn instantiate_schema(
    s: SchemaId,
    g: &ExtendedCospan,
    anchor: &[Elem],
) -> Result<(RewriteRule, Match), RewriteError> {
    for x in anchor {
        if !g.carrier.contains(*x) {
            return Err(shape(format!("{x} is not in the graph")));
        }
    }
    let first = *anchor.first().ok_or_else(|| shape("empty anchor"))?;
    let (l, m, r) = match s {
        SchemaId::DistSeqPlus | SchemaId::DistTensorPlus => {
            let e = expect_kind(g, first, &EdgeKind::EBox)?;
            let site = g.carrier.site(first);
            for x in &anchor[1..] {
                if g.carrier.site(*x) != site {
                    return Err(shape(format!("{x} is not beside {e}")));
                }
                let adjacent = match x {
                    Elem::E(d) => {
                        let edge = g.carrier.edge(*d);
                        edge.sources
                            .iter()
                            .chain(&edge.targets)
                            .any(|v| incident(g, e, *v))
                    }
                    Elem::V(v) => incident(g, e, *v),
                };
                if adjacent != (s == SchemaId::DistSeqPlus) {
                    return Err(shape(format!("{x} is the wrong kind of context for {s}")));
                }
            }
            let (l, m) = extract(g, anchor);
            if !is_convex(&g.carrier, &m.image()) {
                return Err(shape("context is not convex with the box"));
            }
            let r = join_many(&alternatives(&l, e)?)?;
            (l, m, r)
        }
        SchemaId::DistLambdaPlus => {
            let lam = expect_kind(g, first, &EdgeKind::LambdaBox)?;
            let kids = g.carrier.children(lam);
            let boxes: Vec<EdgeId> = kids
                .iter()
                .filter_map(|x| if let Elem::E(d) = x { Some(*d) } else { None })
                .collect();
            let [e] = boxes[..] else {
                return Err(shape("lambda body is not a single box"));
            };
            if g.carrier.edge(e).kind != EdgeKind::EBox || !only_box(g, &kids, e) {
                return Err(shape("lambda body is not a single e-box"));
            }
            let (l, m) = extract(g, &[first]);
            let r = join_many(&alternatives(&l, e)?)?;
            (l, m, r)
        }
        SchemaId::AssocPlus => {
            let p = expect_kind(g, first, &EdgeKind::EBox)?;
            let e = expect_kind(
                g,
                *anchor.get(1).ok_or_else(|| shape("missing inner box"))?,
                &EdgeKind::EBox,
            )?;
            if g.carrier.parent_of(Elem::E(e)) != Some(p) {
                return Err(shape(format!("{e} is not a child of {p}")));
            }
            let b = g
                .carrier
                .block_of(Elem::E(e))
                .expect("child of an e-box has a block");
            if !only_box(g, &g.carrier.blocks(p)[&b], e) {
                return Err(shape(format!("block {b} of {p} holds more than {e}")));
            }
            let (l, m) = extract(g, &[first]);
            let mut alts = Vec::new();
            for k in l.carrier.blocks(p).keys() {
                let c = inline_block(&l, p, *k)?;
                if *k == b {
                    alts.extend(alternatives(&c, e)?);
                } else {
                    alts.push(c);
                }
            }
            (l, m, join_many(&alts)?)
        }
        SchemaId::IdemPlus | SchemaId::CommPlus => {
            let p = expect_kind(g, first, &EdgeKind::EBox)?;
            let (l, m) = extract(g, &[first]);
            let mut alts = alternatives(&l, p)?;
            if s == SchemaId::CommPlus {
                alts.reverse();
            } else {
                let mut unique: Vec<ExtendedCospan> = Vec::new();
                for a in alts {
                    if !unique.iter().any(|u| is_isomorphic(u, &a)) {
                        unique.push(a);
                    }
                }
                if unique.len() == l.carrier.blocks(p).len() {
                    return Err(shape(format!("{p} has no duplicate blocks")));
                }
                alts = unique;
            }
            (l, m, join_many(&alts)?)
        }
        SchemaId::Beta => {
            let lam = expect_kind(g, first, &EdgeKind::LambdaBox)?;
            let app = match anchor.get(1) {
                Some(Elem::E(a)) => *a,
                _ => return Err(shape("missing application")),
            };
            let (l, m) = extract(g, &[Elem::E(lam), Elem::E(app)]);
            let r = inline_lambda(&l, lam, app)?;
            (l, m, r)
        }
        SchemaId::Eta => {
            let lam = expect_kind(g, first, &EdgeKind::LambdaBox)?;
            let (l, m) = extract(g, &[first]);
            let edge = l.carrier.edge(lam);
            let kids = l.carrier.children(lam);
            let apps: Vec<EdgeId> = kids
                .iter()
                .filter_map(|x| if let Elem::E(d) = x { Some(*d) } else { None })
                .collect();
            let bin = box_interface(&l, lam, false);
            let bout = box_interface(&l, lam, true);
            let fits = match apps[..] {
                [a] => {
                    let app = l.carrier.edge(a);
                    matches!(&app.kind, EdgeKind::Plain(op) if op.is_application())
                        && edge.sources.len() == 1
                        && app.sources == bin
                        && app.targets == bout
                        && l.carrier.vertex_type(edge.sources[0])
                            == l.carrier.vertex_type(edge.targets[0])
                }
                _ => false,
            };
            if !fits {
                return Err(shape(
                    "lambda body is not a bare application of its context",
                ));
            }
            let r = identity(&[l.carrier.vertex_type(edge.sources[0]).clone()]);
            (l, m, r)
        }
        SchemaId::LambdaNat => {
            let Elem::E(h) = first else {
                return Err(shape("anchor must start with an edge"));
            };
            let lam = expect_kind(
                g,
                *anchor.get(1).ok_or_else(|| shape("missing lambda box"))?,
                &EdgeKind::LambdaBox,
            )?;
            let (l, m) = extract(g, &[first, Elem::E(lam)]);
            let r = hoist_into_lambda(&l, h, lam)?;
            (l, m, r)
        }
    };
    let rule = RewriteRule::new(format!("{s}@{}", anchor_name(anchor)), l, r)?;
    Ok((rule, m))
}

pub(crate) fn anchor_name(anchor: &[Elem]) -> String {
    anchor
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// `h ; lam(f)` becomes `lam((h * id) ; f)`, for an edge `h` all of whose
/// outputs feed the lambda box.
fn hoist_into_lambda(
    l: &ExtendedCospan,
    h: EdgeId,
    lam: EdgeId,
) -> Result<ExtendedCospan, RewriteError> {
    let g = &l.carrier;
    let he = g.edge(h).clone();
    let le = g.edge(lam).clone();
    if he.targets.is_empty() || !he.targets.iter().all(|v| le.sources.contains(v)) {
        return Err(shape(format!("outputs of {h} do not all feed {lam}")));
    }
    if g.site(Elem::E(h)) != g.site(Elem::E(lam)) {
        return Err(shape("edge and lambda box sit at different sites"));
    }
    let bin = box_interface(l, lam, false);
    let ys = l.inputs.external_vertices();
    let mut c = l.clone();
    let kids = g.children(lam);
    c.carrier.remove_edge(lam);
    let lam2 = c
        .carrier
        .add_edge(EdgeKind::LambdaBox, ys.clone(), le.targets.clone());
    for x in kids {
        c.carrier.set_parent(x, Some(lam2));
    }
    let fresh: Vec<VertexId> = ys
        .iter()
        .map(|y| {
            let v = c.carrier.add_vertex(g.vertex_type(*y).clone());
            c.carrier.set_parent(Elem::V(v), Some(lam2));
            v
        })
        .collect();
    c.carrier.set_parent(Elem::E(h), Some(lam2));
    for v in &he.targets {
        c.carrier.set_parent(Elem::V(*v), Some(lam2));
    }
    let inner_of = |y: &VertexId| fresh[ys.iter().position(|w| w == y).expect("context input")];
    c.carrier.edge_mut(h).sources = he.sources.iter().map(inner_of).collect();
    let mut pairs = Vec::new();
    for (x, b) in le.sources.iter().zip(&bin) {
        let keep = if he.targets.contains(x) {
            *x
        } else {
            inner_of(x)
        };
        pairs.push((keep, *b, Side::In));
    }
    let n = c.inputs.external.len();
    let mut internal = c.inputs.internal[..n].to_vec();
    internal.extend(&fresh);
    internal.extend(&c.inputs.internal[n..]);
    c.inputs = Interface {
        internal,
        external: (0..n).collect(),
    };
    Ok(merge_vertices(c, &pairs))
}

/// Candidate anchors for `s` in `g`, in id order.
pub fn schema_anchors(s: SchemaId, g: &ExtendedCospan) -> Vec<Vec<Elem>> {
    let gc = &g.carrier;
    let boxes = |kind: EdgeKind| -> Vec<EdgeId> {
        gc.edges
            .iter()
            .filter(|(_, e)| e.kind == kind)
            .map(|(id, _)| *id)
            .collect()
    };
    let mut out = Vec::new();
    match s {
        SchemaId::DistSeqPlus | SchemaId::DistTensorPlus => {
            for e in boxes(EdgeKind::EBox) {
                let site = gc.site(Elem::E(e));
                let peers: Vec<Elem> = gc
                    .elems()
                    .filter(|x| *x != Elem::E(e) && gc.site(*x) == site)
                    .collect();
                for x in &peers {
                    let adjacent = match x {
                        Elem::E(d) => {
                            let edge = gc.edge(*d);
                            edge.sources
                                .iter()
                                .chain(&edge.targets)
                                .any(|v| incident(g, e, *v))
                        }
                        Elem::V(v) => {
                            if incident(g, e, *v) {
                                continue;
                            }
                            if !gc
                                .edges
                                .values()
                                .all(|d| !d.sources.contains(v) && !d.targets.contains(v))
                            {
                                continue;
                            }
                            false
                        }
                    };
                    if adjacent == (s == SchemaId::DistSeqPlus) {
                        out.push(vec![Elem::E(e), *x]);
                    }
                }
                if s == SchemaId::DistSeqPlus && site.parent.is_none() {
                    let alone = peers
                        .iter()
                        .all(|x| matches!(x, Elem::V(v) if incident(g, e, *v)));
                    let edge = gc.edge(e);
                    if alone
                        && (edge.sources != g.inputs.external_vertices()
                            || edge.targets != g.outputs.external_vertices())
                    {
                        out.push(vec![Elem::E(e)]);
                    }
                }
            }
        }
        SchemaId::DistLambdaPlus | SchemaId::Eta => {
            out.extend(
                boxes(EdgeKind::LambdaBox)
                    .into_iter()
                    .map(|e| vec![Elem::E(e)]),
            );
        }
        SchemaId::AssocPlus => {
            for e in boxes(EdgeKind::EBox) {
                if let Some(p) = gc.parent_of(Elem::E(e)) {
                    if gc.edge(p).kind == EdgeKind::EBox {
                        out.push(vec![Elem::E(p), Elem::E(e)]);
                    }
                }
            }
        }
        SchemaId::IdemPlus | SchemaId::CommPlus => {
            out.extend(boxes(EdgeKind::EBox).into_iter().map(|e| vec![Elem::E(e)]));
        }
        SchemaId::Beta => {
            let inc = gc.incidence();
            for lam in boxes(EdgeKind::LambdaBox) {
                for u in &gc.edge(lam).targets {
                    for (a, pos) in inc.consumers(*u) {
                        if *pos == 0
                            && matches!(&gc.edge(*a).kind, EdgeKind::Plain(op) if op.is_application())
                        {
                            out.push(vec![Elem::E(lam), Elem::E(*a)]);
                        }
                    }
                }
            }
        }
        SchemaId::LambdaNat => {
            let inc = gc.incidence();
            for lam in boxes(EdgeKind::LambdaBox) {
                let mut feeders: BTreeSet<EdgeId> = BTreeSet::new();
                for v in &gc.edge(lam).sources {
                    feeders.extend(inc.producers(*v).iter().map(|(e, _)| *e));
                }
                out.extend(feeders.into_iter().map(|h| vec![Elem::E(h), Elem::E(lam)]));
            }
        }
    }
    out
}
