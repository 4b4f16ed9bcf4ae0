//! Hierarchical e-hypergraphs.
//!
//! Edges come in three kinds: plain operation edges, e-boxes whose children
//! are split into alternative blocks, and lambda boxes. Nesting is recorded by
//! a parent map on vertices and edges; the consistency relation of an e-box is
//! stored as a partition of its children (`block`).

mod dot;
mod json;
mod pushout;
mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::signature::{Op, VertexType};

pub use dot::to_dot;
pub use json::{GraphJson, JsonError};
pub use pushout::{pushout, PushoutError};
pub use search::{find_isomorphism, search_homomorphisms, SearchMode, SearchOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

pub type BlockId = u32;

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A vertex or an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    V(VertexId),
    E(EdgeId),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::V(v) => v.fmt(f),
            Elem::E(e) => e.fmt(f),
        }
    }
}

impl std::str::FromStr for Elem {
    type Err = JsonError;

    /// Reads `v3` or `e5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || JsonError::BadElement(s.to_string());
        let (head, num) = s.split_at(1.min(s.len()));
        let n: u32 = num.parse().map_err(|_| bad())?;
        match head {
            "v" => Ok(Elem::V(VertexId(n))),
            "e" => Ok(Elem::E(EdgeId(n))),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeKind {
    Plain(Op),
    EBox,
    LambdaBox,
}

impl EdgeKind {
    pub fn is_hierarchical(&self) -> bool {
        !matches!(self, EdgeKind::Plain(_))
    }

    pub fn label(&self) -> String {
        match self {
            EdgeKind::Plain(op) => op.name.clone(),
            EdgeKind::EBox => "ebox".into(),
            EdgeKind::LambdaBox => "lambda".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub kind: EdgeKind,
    pub sources: Vec<VertexId>,
    pub targets: Vec<VertexId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParentKind {
    EParent,
    LamParent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParentRef {
    pub parent: EdgeId,
    pub kind: ParentKind,
}

/// Where an element lives: its immediate parent box and, inside an e-box, its block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub parent: Option<EdgeId>,
    pub block: Option<BlockId>,
}

impl Site {
    pub const TOP: Site = Site {
        parent: None,
        block: None,
    };
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EHypergraph {
    pub vertices: BTreeMap<VertexId, VertexType>,
    pub edges: BTreeMap<EdgeId, Edge>,
    pub parent: BTreeMap<Elem, ParentRef>,
    pub block: BTreeMap<Elem, BlockId>,
    next_vertex: u32,
    next_edge: u32,
}

impl EHypergraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, ty: VertexType) -> VertexId {
        let v = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.vertices.insert(v, ty);
        v
    }

    pub fn add_edge(
        &mut self,
        kind: EdgeKind,
        sources: Vec<VertexId>,
        targets: Vec<VertexId>,
    ) -> EdgeId {
        let e = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(
            e,
            Edge {
                kind,
                sources,
                targets,
            },
        );
        e
    }

    /// Inserts a vertex under a chosen id; used by loaders and the pushout.
    pub fn insert_vertex(&mut self, v: VertexId, ty: VertexType) {
        self.next_vertex = self.next_vertex.max(v.0 + 1);
        self.vertices.insert(v, ty);
    }

    pub fn insert_edge(&mut self, e: EdgeId, edge: Edge) {
        self.next_edge = self.next_edge.max(e.0 + 1);
        self.edges.insert(e, edge);
    }

    /// Reserves ids so that later allocations never collide with `other`'s.
    pub fn reserve_ids_past(&mut self, other: &EHypergraph) {
        self.next_vertex = self.next_vertex.max(other.next_vertex);
        self.next_edge = self.next_edge.max(other.next_edge);
    }

    pub fn next_ids(&self) -> (u32, u32) {
        (self.next_vertex, self.next_edge)
    }

    /// Places `x` under `parent` (or at top level). The parent kind follows
    /// the parent edge's kind. Clears the block when leaving an e-box.
    pub fn set_parent(&mut self, x: Elem, parent: Option<EdgeId>) {
        match parent {
            None => {
                self.parent.remove(&x);
                self.block.remove(&x);
            }
            Some(p) => {
                let kind = match self.edges.get(&p).map(|e| &e.kind) {
                    Some(EdgeKind::EBox) => ParentKind::EParent,
                    Some(EdgeKind::LambdaBox) => ParentKind::LamParent,
                    _ => panic!("parent {p} is not a hierarchical edge"),
                };
                self.parent.insert(x, ParentRef { parent: p, kind });
                if kind == ParentKind::LamParent {
                    self.block.remove(&x);
                }
            }
        }
    }

    pub fn set_block(&mut self, x: Elem, block: Option<BlockId>) {
        match block {
            Some(b) => {
                self.block.insert(x, b);
            }
            None => {
                self.block.remove(&x);
            }
        }
    }

    pub fn set_site(&mut self, x: Elem, site: Site) {
        self.set_parent(x, site.parent);
        self.set_block(x, site.block);
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        self.vertices.remove(&v);
        self.parent.remove(&Elem::V(v));
        self.block.remove(&Elem::V(v));
    }

    pub fn remove_edge(&mut self, e: EdgeId) {
        self.edges.remove(&e);
        self.parent.remove(&Elem::E(e));
        self.block.remove(&Elem::E(e));
    }

    pub fn remove(&mut self, x: Elem) {
        match x {
            Elem::V(v) => self.remove_vertex(v),
            Elem::E(e) => self.remove_edge(e),
        }
    }

    pub fn contains(&self, x: Elem) -> bool {
        match x {
            Elem::V(v) => self.vertices.contains_key(&v),
            Elem::E(e) => self.edges.contains_key(&e),
        }
    }

    pub fn vertex_type(&self, v: VertexId) -> &VertexType {
        &self.vertices[&v]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[&e]
    }

    pub fn edge_mut(&mut self, e: EdgeId) -> &mut Edge {
        self.edges.get_mut(&e).expect("edge exists")
    }

    pub fn parent_ref(&self, x: Elem) -> Option<ParentRef> {
        self.parent.get(&x).copied()
    }

    pub fn parent_of(&self, x: Elem) -> Option<EdgeId> {
        self.parent.get(&x).map(|p| p.parent)
    }

    pub fn block_of(&self, x: Elem) -> Option<BlockId> {
        self.block.get(&x).copied()
    }

    pub fn site(&self, x: Elem) -> Site {
        Site {
            parent: self.parent_of(x),
            block: self.block_of(x),
        }
    }

    pub fn is_top_level(&self, x: Elem) -> bool {
        !self.parent.contains_key(&x)
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> + '_ {
        self.vertices
            .keys()
            .map(|v| Elem::V(*v))
            .chain(self.edges.keys().map(|e| Elem::E(*e)))
    }

    pub fn num_elements(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn is_discrete(&self) -> bool {
        self.edges.is_empty()
    }

    /// Immediate children of a box, in id order (vertices first).
    pub fn children(&self, e: EdgeId) -> Vec<Elem> {
        self.parent
            .iter()
            .filter(|(_, p)| p.parent == e)
            .map(|(x, _)| *x)
            .collect()
    }

    /// Children of an e-box grouped by block.
    pub fn blocks(&self, e: EdgeId) -> BTreeMap<BlockId, Vec<Elem>> {
        let mut out: BTreeMap<BlockId, Vec<Elem>> = BTreeMap::new();
        for x in self.children(e) {
            if let Some(b) = self.block_of(x) {
                out.entry(b).or_default().push(x);
            }
        }
        out
    }

    /// All transitive children of a box.
    pub fn descendants(&self, e: EdgeId) -> BTreeSet<Elem> {
        let mut out = BTreeSet::new();
        let mut stack = vec![e];
        while let Some(p) = stack.pop() {
            for x in self.children(p) {
                if out.insert(x) {
                    if let Elem::E(c) = x {
                        stack.push(c);
                    }
                }
            }
        }
        out
    }

    /// Enclosing boxes from the innermost outwards.
    pub fn ancestors(&self, x: Elem) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut cur = x;
        while let Some(p) = self.parent_of(cur) {
            if out.contains(&p) {
                break;
            }
            out.push(p);
            cur = Elem::E(p);
        }
        out
    }

    /// Enclosing boxes together with the block taken in each, innermost first.
    pub fn predecessor_sequence(&self, x: Elem) -> Vec<(ParentRef, Option<BlockId>)> {
        let mut out = Vec::new();
        let mut cur = x;
        while let Some(p) = self.parent_ref(cur) {
            if out
                .iter()
                .any(|(q, _): &(ParentRef, _)| q.parent == p.parent)
            {
                break;
            }
            out.push((p, self.block_of(cur)));
            cur = Elem::E(p.parent);
        }
        out
    }

    pub fn depth(&self, x: Elem) -> usize {
        self.ancestors(x).len()
    }

    pub fn incidence(&self) -> Incidence {
        let mut inc = Incidence::default();
        for (e, edge) in &self.edges {
            for (i, v) in edge.targets.iter().enumerate() {
                inc.producers.entry(*v).or_default().push((*e, i));
            }
            for (i, v) in edge.sources.iter().enumerate() {
                inc.consumers.entry(*v).or_default().push((*e, i));
            }
        }
        inc
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|e| e.targets.iter().filter(|x| **x == v).count())
            .sum()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|e| e.sources.iter().filter(|x| **x == v).count())
            .sum()
    }

    /// Copies `other` into `self` under fresh ids and returns the injection.
    pub fn absorb(&mut self, other: &EHypergraph) -> Homomorphism {
        let mut h = Homomorphism::default();
        for (v, ty) in &other.vertices {
            h.on_vertices.insert(*v, self.add_vertex(ty.clone()));
        }
        for e in other.edges.keys() {
            h.on_edges.insert(*e, EdgeId(self.next_edge));
            self.next_edge += 1;
        }
        for (e, edge) in &other.edges {
            let edge = Edge {
                kind: edge.kind.clone(),
                sources: edge.sources.iter().map(|v| h.on_vertices[v]).collect(),
                targets: edge.targets.iter().map(|v| h.on_vertices[v]).collect(),
            };
            self.edges.insert(h.on_edges[e], edge);
        }
        for (x, p) in &other.parent {
            self.parent.insert(
                h.elem(*x),
                ParentRef {
                    parent: h.on_edges[&p.parent],
                    kind: p.kind,
                },
            );
        }
        for (x, b) in &other.block {
            self.block.insert(h.elem(*x), *b);
        }
        h
    }

    /// The sub-e-hypergraph on `keep`, with ids preserved. Parents outside
    /// `keep` are dropped, making those elements top-level.
    pub fn restrict(&self, keep: &BTreeSet<Elem>) -> EHypergraph {
        let mut g = EHypergraph {
            next_vertex: self.next_vertex,
            next_edge: self.next_edge,
            ..Default::default()
        };
        for x in keep {
            match x {
                Elem::V(v) => {
                    g.vertices.insert(*v, self.vertices[v].clone());
                }
                Elem::E(e) => {
                    g.edges.insert(*e, self.edges[e].clone());
                }
            }
        }
        for x in keep {
            if let Some(p) = self.parent_ref(*x) {
                if keep.contains(&Elem::E(p.parent)) {
                    g.parent.insert(*x, p);
                    if let Some(b) = self.block_of(*x) {
                        g.block.insert(*x, b);
                    }
                }
            }
        }
        g
    }

    /// A copy with ids renumbered densely in their current order.
    pub fn compacted(&self) -> (EHypergraph, Homomorphism) {
        let mut h = Homomorphism::default();
        for (i, v) in self.vertices.keys().enumerate() {
            h.on_vertices.insert(*v, VertexId(i as u32));
        }
        for (i, e) in self.edges.keys().enumerate() {
            h.on_edges.insert(*e, EdgeId(i as u32));
        }
        (h.image_graph(self), h)
    }

    /// Vertices that appear in no edge.
    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        let mut used = BTreeSet::new();
        for e in self.edges.values() {
            used.extend(e.sources.iter().copied());
            used.extend(e.targets.iter().copied());
        }
        self.vertices
            .keys()
            .filter(|v| !used.contains(v))
            .copied()
            .collect()
    }
}

/// Producer and consumer positions of every vertex.
#[derive(Debug, Clone, Default)]
pub struct Incidence {
    pub producers: BTreeMap<VertexId, Vec<(EdgeId, usize)>>,
    pub consumers: BTreeMap<VertexId, Vec<(EdgeId, usize)>>,
}

impl Incidence {
    pub fn producers(&self, v: VertexId) -> &[(EdgeId, usize)] {
        self.producers.get(&v).map(|x| x.as_slice()).unwrap_or(&[])
    }

    pub fn consumers(&self, v: VertexId) -> &[(EdgeId, usize)] {
        self.consumers.get(&v).map(|x| x.as_slice()).unwrap_or(&[])
    }
}

pub fn in_degree(g: &EHypergraph, v: VertexId) -> usize {
    g.in_degree(v)
}

pub fn out_degree(g: &EHypergraph, v: VertexId) -> usize {
    g.out_degree(v)
}

/// No nonempty path returns to its starting edge.
pub fn is_directed_acyclic(g: &EHypergraph) -> bool {
    let inc = g.incidence();
    // Kahn's algorithm on the edge graph
    let mut indeg: BTreeMap<EdgeId, usize> = g.edges.keys().map(|e| (*e, 0)).collect();
    let succ = |e: &EdgeId| -> Vec<EdgeId> {
        g.edges[e]
            .targets
            .iter()
            .flat_map(|v| inc.consumers(*v).iter().map(|(c, _)| *c))
            .collect()
    };
    for e in g.edges.keys() {
        for s in succ(e) {
            *indeg.get_mut(&s).unwrap() += 1;
        }
    }
    let mut queue: Vec<EdgeId> = indeg
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(e, _)| *e)
        .collect();
    let mut seen = 0;
    while let Some(e) = queue.pop() {
        seen += 1;
        for s in succ(&e) {
            let d = indeg.get_mut(&s).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push(s);
            }
        }
    }
    seen == g.edges.len()
}

/// A broken invariant, naming the element and the rule it breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub element: Option<Elem>,
    pub clause: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.element {
            Some(x) => write!(f, "[{}] {}: {}", self.clause, x, self.message),
            None => write!(f, "[{}] {}", self.clause, self.message),
        }
    }
}

fn violation(element: Option<Elem>, clause: &'static str, message: impl Into<String>) -> Violation {
    Violation {
        element,
        clause,
        message: message.into(),
    }
}

/// Checks typing of plain edges, the parent forest, box children,
/// connectivity closure and the block partition of every e-box.
pub fn validate(g: &EHypergraph) -> Vec<Violation> {
    let mut out = Vec::new();
    for (e, edge) in &g.edges {
        let x = Some(Elem::E(*e));
        let mut dangling = false;
        for v in edge.sources.iter().chain(&edge.targets) {
            if !g.vertices.contains_key(v) {
                out.push(violation(
                    x,
                    "incidence",
                    format!("refers to missing vertex {v}"),
                ));
                dangling = true;
            }
        }
        if dangling {
            continue;
        }
        if let EdgeKind::Plain(op) = &edge.kind {
            let s: Vec<VertexType> = edge.sources.iter().map(|v| g.vertices[v].clone()).collect();
            let t: Vec<VertexType> = edge.targets.iter().map(|v| g.vertices[v].clone()).collect();
            if s != op.inputs || t != op.outputs {
                out.push(violation(
                    x,
                    "typing",
                    format!("incident labels do not match `{op}`"),
                ));
            }
        }
    }
    for (x, p) in &g.parent {
        if !g.contains(*x) {
            out.push(violation(
                Some(*x),
                "hierarchy",
                "parent recorded for missing element",
            ));
            continue;
        }
        match g.edges.get(&p.parent).map(|e| &e.kind) {
            None => out.push(violation(
                Some(*x),
                "hierarchy",
                format!("parent {} does not exist", p.parent),
            )),
            Some(EdgeKind::Plain(_)) => out.push(violation(
                Some(*x),
                "hierarchy",
                format!("parent {} is not hierarchical", p.parent),
            )),
            Some(EdgeKind::EBox) if p.kind != ParentKind::EParent => out.push(violation(
                Some(*x),
                "hierarchy",
                "e-box parent recorded as lambda parent",
            )),
            Some(EdgeKind::LambdaBox) if p.kind != ParentKind::LamParent => out.push(violation(
                Some(*x),
                "hierarchy",
                "lambda parent recorded as e-box parent",
            )),
            _ => {}
        }
    }
    // forest: walking up never revisits an element
    for x in g.parent.keys() {
        let mut seen = BTreeSet::from([*x]);
        let mut cur = *x;
        while let Some(p) = g.parent_of(cur) {
            if !seen.insert(Elem::E(p)) {
                out.push(violation(
                    Some(*x),
                    "hierarchy",
                    "element is its own ancestor",
                ));
                break;
            }
            cur = Elem::E(p);
        }
    }
    let mut child_count: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for p in g.parent.values() {
        *child_count.entry(p.parent).or_default() += 1;
    }
    for (e, edge) in &g.edges {
        if edge.kind.is_hierarchical() && child_count.get(e).copied().unwrap_or(0) == 0 {
            out.push(violation(
                Some(Elem::E(*e)),
                "childless",
                "hierarchical edge without children",
            ));
        }
    }
    for (e, edge) in &g.edges {
        let here = g.site(Elem::E(*e));
        for v in edge.sources.iter().chain(&edge.targets) {
            if g.vertices.contains_key(v) && g.site(Elem::V(*v)) != here {
                out.push(violation(
                    Some(Elem::V(*v)),
                    "connectivity",
                    format!("not in the same box and block as incident edge {e}"),
                ));
            }
        }
    }
    for x in g.block.keys() {
        match g.parent_ref(*x) {
            Some(p) if p.kind == ParentKind::EParent => {}
            _ => out.push(violation(
                Some(*x),
                "blocks",
                "block recorded outside an e-box",
            )),
        }
    }
    for (e, edge) in &g.edges {
        if edge.kind != EdgeKind::EBox {
            continue;
        }
        let mut ids = BTreeSet::new();
        for x in g.children(*e) {
            match g.block_of(x) {
                Some(b) => {
                    ids.insert(b);
                }
                None => out.push(violation(
                    Some(x),
                    "blocks",
                    format!("child of e-box {e} has no block"),
                )),
            }
        }
        if ids.len() == 1 {
            out.push(violation(
                Some(Elem::E(*e)),
                "blocks",
                "e-box with a single block",
            ));
        }
    }
    out
}

/// A pair of maps on vertices and edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Homomorphism {
    pub on_vertices: BTreeMap<VertexId, VertexId>,
    pub on_edges: BTreeMap<EdgeId, EdgeId>,
}

impl Homomorphism {
    pub fn identity(g: &EHypergraph) -> Self {
        Homomorphism {
            on_vertices: g.vertices.keys().map(|v| (*v, *v)).collect(),
            on_edges: g.edges.keys().map(|e| (*e, *e)).collect(),
        }
    }

    pub fn v(&self, v: VertexId) -> VertexId {
        self.on_vertices[&v]
    }

    pub fn e(&self, e: EdgeId) -> EdgeId {
        self.on_edges[&e]
    }

    pub fn elem(&self, x: Elem) -> Elem {
        match x {
            Elem::V(v) => Elem::V(self.on_vertices[&v]),
            Elem::E(e) => Elem::E(self.on_edges[&e]),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Homomorphism) -> Homomorphism {
        Homomorphism {
            on_vertices: self
                .on_vertices
                .iter()
                .map(|(a, b)| (*a, next.on_vertices[b]))
                .collect(),
            on_edges: self
                .on_edges
                .iter()
                .map(|(a, b)| (*a, next.on_edges[b]))
                .collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let vs: BTreeSet<_> = self.on_vertices.values().collect();
        let es: BTreeSet<_> = self.on_edges.values().collect();
        vs.len() == self.on_vertices.len() && es.len() == self.on_edges.len()
    }

    /// Inverse of an injective map.
    pub fn inverse(&self) -> Homomorphism {
        Homomorphism {
            on_vertices: self.on_vertices.iter().map(|(a, b)| (*b, *a)).collect(),
            on_edges: self.on_edges.iter().map(|(a, b)| (*b, *a)).collect(),
        }
    }

    /// Transports `g` along an injective renaming.
    pub fn image_graph(&self, g: &EHypergraph) -> EHypergraph {
        let mut out = EHypergraph::new();
        for (v, ty) in &g.vertices {
            out.insert_vertex(self.v(*v), ty.clone());
        }
        for (e, edge) in &g.edges {
            out.insert_edge(
                self.e(*e),
                Edge {
                    kind: edge.kind.clone(),
                    sources: edge.sources.iter().map(|v| self.v(*v)).collect(),
                    targets: edge.targets.iter().map(|v| self.v(*v)).collect(),
                },
            );
        }
        for (x, p) in &g.parent {
            out.parent.insert(
                self.elem(*x),
                ParentRef {
                    parent: self.e(p.parent),
                    kind: p.kind,
                },
            );
        }
        for (x, b) in &g.block {
            out.block.insert(self.elem(*x), *b);
        }
        out
    }
}

/// Checks the homomorphism conditions: structure and labels, kinds,
/// immediate parents of nested elements, and the consistency relation.
pub fn is_homomorphism(phi: &Homomorphism, f: &EHypergraph, g: &EHypergraph) -> bool {
    for (v, ty) in &f.vertices {
        match phi.on_vertices.get(v).and_then(|w| g.vertices.get(w)) {
            Some(t) if t == ty => {}
            _ => return false,
        }
    }
    if phi.on_vertices.len() != f.vertices.len() || phi.on_edges.len() != f.edges.len() {
        return false;
    }
    for (e, edge) in &f.edges {
        let Some(ge) = phi.on_edges.get(e).and_then(|x| g.edges.get(x)) else {
            return false;
        };
        if ge.kind != edge.kind {
            return false;
        }
        let s: Vec<VertexId> = edge.sources.iter().map(|v| phi.v(*v)).collect();
        let t: Vec<VertexId> = edge.targets.iter().map(|v| phi.v(*v)).collect();
        if s != ge.sources || t != ge.targets {
            return false;
        }
    }
    for (x, p) in &f.parent {
        if !f.contains(*x) {
            continue;
        }
        let want = ParentRef {
            parent: phi.e(p.parent),
            kind: p.kind,
        };
        if g.parent_ref(phi.elem(*x)) != Some(want) {
            return false;
        }
    }
    // same block in f implies same block in g
    let mut image_block: BTreeMap<(EdgeId, BlockId), BlockId> = BTreeMap::new();
    for (x, b) in &f.block {
        let Some(p) = f.parent_of(*x) else { continue };
        let Some(gb) = g.block_of(phi.elem(*x)) else {
            return false;
        };
        match image_block.insert((p, *b), gb) {
            Some(prev) if prev != gb => return false,
            _ => {}
        }
    }
    true
}

/// Disjoint union; `g` keeps its ids and `h` is copied under fresh ones.
pub fn coproduct(g: &EHypergraph, h: &EHypergraph) -> (EHypergraph, Homomorphism, Homomorphism) {
    let mut out = g.clone();
    let left = Homomorphism::identity(g);
    let right = out.absorb(h);
    (out, left, right)
}

#[cfg(test)]
mod tests;
