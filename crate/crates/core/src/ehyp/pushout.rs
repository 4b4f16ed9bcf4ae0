//! Pushouts along discrete feet.
//!
//! Vertices glued by the span are merged; edges never are. Elements that end
//! up connected to a nested element inherit its parent and block, so a graph
//! glued into a box lands inside that box.

use std::collections::BTreeMap;

use super::{EHypergraph, Edge, EdgeId, Elem, Homomorphism, ParentRef, Site, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PushoutError {
    #[error("pushout precondition ({clause}) violated: {detail}")]
    PreconditionViolated { clause: u8, detail: String },
    #[error("span leg is not a homomorphism: {0}")]
    BadLeg(String),
}

fn violated(clause: u8, detail: impl Into<String>) -> PushoutError {
    PushoutError::PreconditionViolated {
        clause,
        detail: detail.into(),
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let n = self.parent[c];
            self.parent[c] = r;
            c = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so X ids win
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn check_leg(
    z: &EHypergraph,
    x: &EHypergraph,
    f: &Homomorphism,
    side: &str,
) -> Result<(), PushoutError> {
    for (v, ty) in &z.vertices {
        match f.on_vertices.get(v).and_then(|w| x.vertices.get(w)) {
            Some(t) if t == ty => {}
            _ => {
                return Err(PushoutError::BadLeg(format!(
                    "{side} leg misses or mislabels {v}"
                )))
            }
        }
    }
    Ok(())
}

/// The pushout of `x <-f- z -g-> y`.
///
/// The result keeps `x`'s ids (a merged vertex takes the smallest `x` id in
/// its class); elements of `y` receive fresh ids.
pub fn pushout(
    z: &EHypergraph,
    x: &EHypergraph,
    f: &Homomorphism,
    y: &EHypergraph,
    g: &Homomorphism,
) -> Result<(EHypergraph, Homomorphism, Homomorphism), PushoutError> {
    if !z.is_discrete() {
        return Err(violated(1, "the foot has edges"));
    }
    check_leg(z, x, f, "left")?;
    check_leg(z, y, g, "right")?;
    let zs: Vec<VertexId> = z.vertices.keys().copied().collect();
    if let Some((first, rest)) = zs.split_first() {
        let fx = x.ancestors(Elem::V(f.v(*first)));
        let gy = y.ancestors(Elem::V(g.v(*first)));
        for v in rest {
            if x.ancestors(Elem::V(f.v(*v))) != fx || y.ancestors(Elem::V(g.v(*v))) != gy {
                return Err(violated(
                    2,
                    format!("images of {first} and {v} sit under different boxes"),
                ));
            }
        }
        for v in &zs {
            let nested_x = !x.is_top_level(Elem::V(f.v(*v)));
            let nested_y = !y.is_top_level(Elem::V(g.v(*v)));
            if nested_x && nested_y {
                return Err(violated(3, format!("both images of {v} are nested")));
            }
        }
        let bx = x.block_of(Elem::V(f.v(*first)));
        let by = y.block_of(Elem::V(g.v(*first)));
        for v in rest {
            if x.block_of(Elem::V(f.v(*v))) != bx || y.block_of(Elem::V(g.v(*v))) != by {
                return Err(violated(
                    4,
                    format!("images of {first} and {v} lie in different blocks"),
                ));
            }
        }
    }

    // Index vertices of x then y, glue, and pick representatives.
    let xv: Vec<VertexId> = x.vertices.keys().copied().collect();
    let yv: Vec<VertexId> = y.vertices.keys().copied().collect();
    let xi: BTreeMap<VertexId, usize> = xv.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let yi: BTreeMap<VertexId, usize> = yv
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, xv.len() + i))
        .collect();
    let mut uf = UnionFind::new(xv.len() + yv.len());
    for v in &zs {
        uf.union(xi[&f.v(*v)], yi[&g.v(*v)]);
    }

    let mut q = EHypergraph::new();
    q.reserve_ids_past(x);
    let mut j1 = Homomorphism::default();
    let mut j2 = Homomorphism::default();
    let mut rep: BTreeMap<usize, VertexId> = BTreeMap::new();
    for (i, v) in xv.iter().enumerate() {
        let r = uf.find(i);
        let id = *rep.entry(r).or_insert(*v);
        if id == *v {
            q.insert_vertex(*v, x.vertices[v].clone());
        }
        j1.on_vertices.insert(*v, id);
    }
    for (i, v) in yv.iter().enumerate() {
        let r = uf.find(xv.len() + i);
        let id = match rep.get(&r) {
            Some(id) => *id,
            None => {
                let id = q.add_vertex(y.vertices[v].clone());
                rep.insert(r, id);
                id
            }
        };
        j2.on_vertices.insert(*v, id);
    }
    for (e, edge) in &x.edges {
        let mapped = Edge {
            kind: edge.kind.clone(),
            sources: edge.sources.iter().map(|v| j1.v(*v)).collect(),
            targets: edge.targets.iter().map(|v| j1.v(*v)).collect(),
        };
        q.insert_edge(*e, mapped);
        j1.on_edges.insert(*e, *e);
    }
    for (e, edge) in &y.edges {
        let mapped = Edge {
            kind: edge.kind.clone(),
            sources: edge.sources.iter().map(|v| j2.v(*v)).collect(),
            targets: edge.targets.iter().map(|v| j2.v(*v)).collect(),
        };
        let id = q.add_edge(mapped.kind, mapped.sources, mapped.targets);
        j2.on_edges.insert(*e, id);
    }

    // Sites defined directly on either side.
    let mut defined: BTreeMap<Elem, Site> = BTreeMap::new();
    let mut record = |qx: Elem, site: Site| -> Result<(), PushoutError> {
        match defined.insert(qx, site) {
            Some(prev) if prev != site => {
                Err(violated(3, format!("{qx} inherits two different parents")))
            }
            _ => Ok(()),
        }
    };
    for (xe, p) in &x.parent {
        record(
            j1.elem(*xe),
            Site {
                parent: Some(j1.e(p.parent)),
                block: x.block_of(*xe),
            },
        )?;
    }
    for (ye, p) in &y.parent {
        record(
            j2.elem(*ye),
            Site {
                parent: Some(j2.e(p.parent)),
                block: y.block_of(*ye),
            },
        )?;
    }

    // Propagate along undirected incidence inside each connected component.
    let elems: Vec<Elem> = q.elems().collect();
    let idx: BTreeMap<Elem, usize> = elems.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut comp = UnionFind::new(elems.len());
    for (e, edge) in &q.edges {
        for v in edge.sources.iter().chain(&edge.targets) {
            comp.union(idx[&Elem::E(*e)], idx[&Elem::V(*v)]);
        }
    }
    let mut comp_site: BTreeMap<usize, Site> = BTreeMap::new();
    for (qx, site) in &defined {
        let c = comp.find(idx[qx]);
        match comp_site.insert(c, *site) {
            Some(prev) if prev != *site => {
                return Err(violated(
                    3,
                    format!("component of {qx} inherits two different parents"),
                ))
            }
            _ => {}
        }
    }
    for (i, qx) in elems.iter().enumerate() {
        if let Some(site) = comp_site.get(&comp.find(i)) {
            let p = site.parent.expect("defined sites are nested");
            let kind = q.parent_kind_for(p);
            q.parent.insert(*qx, ParentRef { parent: p, kind });
            if let Some(b) = site.block {
                q.block.insert(*qx, b);
            }
        }
    }
    Ok((q, j1, j2))
}

impl EHypergraph {
    fn parent_kind_for(&self, p: EdgeId) -> super::ParentKind {
        match self.edges[&p].kind {
            super::EdgeKind::EBox => super::ParentKind::EParent,
            _ => super::ParentKind::LamParent,
        }
    }
}
