//! Backtracking search for homomorphisms, monomorphisms and isomorphisms.
//!
//! Pattern edges are visited outer boxes first and then along incidence, so
//! most candidates come from an already mapped neighbour. Block assignments
//! of e-boxes are tracked per box, which lets blocks permute freely.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    is_homomorphism, BlockId, EHypergraph, EdgeId, Elem, Homomorphism, Incidence, VertexId,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Any homomorphism.
    Homomorphism,
    /// Injective homomorphisms.
    Mono,
    /// Bijections whose inverse is also a homomorphism.
    Iso,
}

pub struct SearchOptions<'a> {
    pub mode: SearchMode,
    /// Vertices whose image is fixed in advance.
    pub fixed: BTreeMap<VertexId, VertexId>,
    pub vertex_ok: Option<&'a dyn Fn(VertexId, VertexId) -> bool>,
    pub edge_ok: Option<&'a dyn Fn(EdgeId, EdgeId) -> bool>,
}

impl SearchOptions<'_> {
    pub fn new(mode: SearchMode) -> Self {
        SearchOptions {
            mode,
            fixed: BTreeMap::new(),
            vertex_ok: None,
            edge_ok: None,
        }
    }
}

enum Undo {
    V(VertexId),
    E(EdgeId),
    Block(EdgeId, BlockId),
}

struct State<'a> {
    p: &'a EHypergraph,
    t: &'a EHypergraph,
    t_inc: Incidence,
    opts: &'a SearchOptions<'a>,
    vmap: BTreeMap<VertexId, VertexId>,
    vrev: BTreeMap<VertexId, VertexId>,
    emap: BTreeMap<EdgeId, EdgeId>,
    erev: BTreeMap<EdgeId, EdgeId>,
    bmap: BTreeMap<(EdgeId, BlockId), BlockId>,
    brev: BTreeMap<(EdgeId, BlockId), BlockId>,
    trail: Vec<Undo>,
    edge_order: Vec<EdgeId>,
    vertex_order: Vec<VertexId>,
}

impl<'a> State<'a> {
    fn injective(&self) -> bool {
        self.opts.mode != SearchMode::Homomorphism
    }

    fn iso(&self) -> bool {
        self.opts.mode == SearchMode::Iso
    }

    /// Parent and block compatibility of `px -> tx`; may record a block pairing.
    fn site_ok(&mut self, px: Elem, tx: Elem) -> bool {
        let pp = self.p.parent_ref(px);
        let tp = self.t.parent_ref(tx);
        match pp {
            None => {
                if self.iso() && tp.is_some() {
                    return false;
                }
                true
            }
            Some(pp) => {
                let Some(tp) = tp else { return false };
                if pp.kind != tp.kind {
                    return false;
                }
                match self.emap.get(&pp.parent) {
                    Some(img) if *img == tp.parent => {}
                    _ => return false,
                }
                match (self.p.block_of(px), self.t.block_of(tx)) {
                    (None, None) => true,
                    (Some(pb), Some(tb)) => {
                        let key = (pp.parent, pb);
                        match self.bmap.get(&key) {
                            Some(b) => *b == tb,
                            None => {
                                if self.iso() && self.brev.contains_key(&(tp.parent, tb)) {
                                    return false;
                                }
                                self.bmap.insert(key, tb);
                                self.brev.insert((tp.parent, tb), pb);
                                self.trail.push(Undo::Block(pp.parent, pb));
                                true
                            }
                        }
                    }
                    _ => false,
                }
            }
        }
    }

    fn map_vertex(&mut self, pv: VertexId, tv: VertexId) -> bool {
        if let Some(cur) = self.vmap.get(&pv) {
            return *cur == tv;
        }
        if self.p.vertices[&pv] != self.t.vertices[&tv] {
            return false;
        }
        if self.injective() && self.vrev.contains_key(&tv) {
            return false;
        }
        if let Some(ok) = self.opts.vertex_ok {
            if !ok(pv, tv) {
                return false;
            }
        }
        if !self.site_ok(Elem::V(pv), Elem::V(tv)) {
            return false;
        }
        self.vmap.insert(pv, tv);
        self.vrev.insert(tv, pv);
        self.trail.push(Undo::V(pv));
        true
    }

    fn map_edge(&mut self, pe: EdgeId, te: EdgeId) -> bool {
        let (pd, td) = (self.p.edge(pe), self.t.edge(te));
        if pd.kind != td.kind
            || pd.sources.len() != td.sources.len()
            || pd.targets.len() != td.targets.len()
        {
            return false;
        }
        if self.injective() && self.erev.contains_key(&te) {
            return false;
        }
        if let Some(ok) = self.opts.edge_ok {
            if !ok(pe, te) {
                return false;
            }
        }
        if !self.site_ok(Elem::E(pe), Elem::E(te)) {
            return false;
        }
        self.emap.insert(pe, te);
        self.erev.insert(te, pe);
        self.trail.push(Undo::E(pe));
        let pairs: Vec<(VertexId, VertexId)> = pd
            .sources
            .iter()
            .zip(&td.sources)
            .chain(pd.targets.iter().zip(&td.targets))
            .map(|(a, b)| (*a, *b))
            .collect();
        pairs.into_iter().all(|(a, b)| self.map_vertex(a, b))
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::V(pv) => {
                    let tv = self.vmap.remove(&pv).unwrap();
                    if self.vrev.get(&tv) == Some(&pv) {
                        self.vrev.remove(&tv);
                    }
                }
                Undo::E(pe) => {
                    let te = self.emap.remove(&pe).unwrap();
                    if self.erev.get(&te) == Some(&pe) {
                        self.erev.remove(&te);
                    }
                }
                Undo::Block(pp, pb) => {
                    let tb = self.bmap.remove(&(pp, pb)).unwrap();
                    let tp = self.emap.get(&pp).copied();
                    if let Some(tp) = tp {
                        if self.brev.get(&(tp, tb)) == Some(&pb) {
                            self.brev.remove(&(tp, tb));
                        }
                    } else {
                        self.brev.retain(|_, v| *v != pb);
                    }
                }
            }
        }
    }

    fn edge_candidates(&self, pe: EdgeId) -> Vec<EdgeId> {
        let pd = self.p.edge(pe);
        for (i, v) in pd.sources.iter().enumerate() {
            if let Some(tv) = self.vmap.get(v) {
                return self
                    .t_inc
                    .consumers(*tv)
                    .iter()
                    .filter(|(_, j)| *j == i)
                    .map(|(e, _)| *e)
                    .collect();
            }
        }
        for (i, v) in pd.targets.iter().enumerate() {
            if let Some(tv) = self.vmap.get(v) {
                return self
                    .t_inc
                    .producers(*tv)
                    .iter()
                    .filter(|(_, j)| *j == i)
                    .map(|(e, _)| *e)
                    .collect();
            }
        }
        if let Some(pp) = self.p.parent_of(Elem::E(pe)) {
            if let Some(tp) = self.emap.get(&pp) {
                return self
                    .t
                    .children(*tp)
                    .into_iter()
                    .filter_map(|x| match x {
                        Elem::E(e) => Some(e),
                        _ => None,
                    })
                    .collect();
            }
        }
        self.t.edges.keys().copied().collect()
    }

    fn vertex_candidates(&self, pv: VertexId) -> Vec<VertexId> {
        if let Some(pp) = self.p.parent_of(Elem::V(pv)) {
            if let Some(tp) = self.emap.get(&pp) {
                return self
                    .t
                    .children(*tp)
                    .into_iter()
                    .filter_map(|x| match x {
                        Elem::V(v) => Some(v),
                        _ => None,
                    })
                    .collect();
            }
        }
        self.t.vertices.keys().copied().collect()
    }

    fn run_edges(&mut self, k: usize, visit: &mut dyn FnMut(&Homomorphism) -> bool) -> bool {
        if k == self.edge_order.len() {
            return self.run_vertices(0, visit);
        }
        let pe = self.edge_order[k];
        for te in self.edge_candidates(pe) {
            let mark = self.trail.len();
            if self.map_edge(pe, te) && self.run_edges(k + 1, visit) {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }

    fn run_vertices(&mut self, k: usize, visit: &mut dyn FnMut(&Homomorphism) -> bool) -> bool {
        if k == self.vertex_order.len() {
            let h = Homomorphism {
                on_vertices: self.vmap.clone(),
                on_edges: self.emap.clone(),
            };
            if !is_homomorphism(&h, self.p, self.t) {
                return false;
            }
            if self.iso() && !is_homomorphism(&h.inverse(), self.t, self.p) {
                return false;
            }
            return visit(&h);
        }
        let pv = self.vertex_order[k];
        if self.vmap.contains_key(&pv) {
            return self.run_vertices(k + 1, visit);
        }
        for tv in self.vertex_candidates(pv) {
            let mark = self.trail.len();
            if self.map_vertex(pv, tv) && self.run_vertices(k + 1, visit) {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Pattern edges ordered by depth, then breadth-first along shared vertices.
fn edge_order(p: &EHypergraph) -> Vec<EdgeId> {
    let inc = p.incidence();
    let mut by_depth: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    for e in p.edges.keys() {
        by_depth.entry(p.depth(Elem::E(*e))).or_default().push(*e);
    }
    let mut order = Vec::new();
    let mut done = BTreeSet::new();
    for level in by_depth.values() {
        let here: BTreeSet<EdgeId> = level.iter().copied().collect();
        for start in level {
            if done.contains(start) {
                continue;
            }
            let mut queue = std::collections::VecDeque::from([*start]);
            done.insert(*start);
            while let Some(e) = queue.pop_front() {
                order.push(e);
                let edge = p.edge(e);
                for v in edge.sources.iter().chain(&edge.targets) {
                    for (n, _) in inc.producers(*v).iter().chain(inc.consumers(*v)) {
                        if here.contains(n) && done.insert(*n) {
                            queue.push_back(*n);
                        }
                    }
                }
            }
        }
    }
    order
}

fn label_profile(g: &EHypergraph) -> (BTreeMap<String, usize>, BTreeMap<String, usize>) {
    let mut vs = BTreeMap::new();
    for ty in g.vertices.values() {
        *vs.entry(ty.to_string()).or_insert(0) += 1;
    }
    let mut es = BTreeMap::new();
    for e in g.edges.values() {
        let key = format!("{}/{}/{}", e.kind.label(), e.sources.len(), e.targets.len());
        *es.entry(key).or_insert(0) += 1;
    }
    (vs, es)
}

/// Enumerates maps from `p` to `t` in deterministic order. `visit` returns
/// `true` to stop; the function returns whether it was stopped.
pub fn search_homomorphisms(
    p: &EHypergraph,
    t: &EHypergraph,
    opts: &SearchOptions<'_>,
    visit: &mut dyn FnMut(&Homomorphism) -> bool,
) -> bool {
    if opts.mode == SearchMode::Iso
        && (p.vertices.len() != t.vertices.len()
            || p.edges.len() != t.edges.len()
            || p.parent.len() != t.parent.len()
            || label_profile(p) != label_profile(t))
    {
        return false;
    }
    let eo = edge_order(p);
    let mut vo: Vec<VertexId> = p.vertices.keys().copied().collect();
    vo.sort_by_key(|v| (p.depth(Elem::V(*v)), *v));
    let mut st = State {
        p,
        t,
        t_inc: t.incidence(),
        opts,
        vmap: BTreeMap::new(),
        vrev: BTreeMap::new(),
        emap: BTreeMap::new(),
        erev: BTreeMap::new(),
        bmap: BTreeMap::new(),
        brev: BTreeMap::new(),
        trail: Vec::new(),
        edge_order: eo,
        vertex_order: vo,
    };
    // Fixed vertices must be top-level or have their parents mapped later;
    // only their label and injectivity are checked up front.
    for (pv, tv) in &opts.fixed {
        if !p.vertices.contains_key(pv)
            || !t.vertices.contains_key(tv)
            || p.vertices[pv] != t.vertices[tv]
        {
            return false;
        }
        if st.injective() && st.vrev.contains_key(tv) {
            return false;
        }
        st.vmap.insert(*pv, *tv);
        st.vrev.insert(*tv, *pv);
    }
    st.run_edges(0, visit)
}

/// An isomorphism from `g` to `h`, if there is one.
pub fn find_isomorphism(g: &EHypergraph, h: &EHypergraph) -> Option<Homomorphism> {
    let mut found = None;
    search_homomorphisms(g, h, &SearchOptions::new(SearchMode::Iso), &mut |m| {
        found = Some(m.clone());
        true
    });
    found
}
