//! Extended cospans: an e-hypergraph with ordered input and output interfaces.
//!
//! Each interface lists internal vertices, some of which are external and take
//! part in composition. The rest (strictly internal) are the inputs and
//! outputs of nested boxes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ehyp::{
    coproduct, is_directed_acyclic, pushout, search_homomorphisms, validate, EHypergraph, EdgeId,
    EdgeKind, Elem, GraphJson, Homomorphism, JsonError, ParentKind, PushoutError, SearchMode,
    SearchOptions, VertexId, Violation,
};
use crate::signature::{display_word, VertexType, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CospanError {
    #[error("interface mismatch: [{left}] vs [{right}]")]
    TypeMismatch { left: String, right: String },
    #[error(transparent)]
    Pushout(#[from] PushoutError),
    #[error("cannot join an empty diagram with a non-empty one")]
    EmptyJoinBlock,
    #[error("join of no diagrams")]
    EmptyJoin,
}

fn mismatch(l: &[VertexType], r: &[VertexType]) -> CospanError {
    CospanError::TypeMismatch {
        left: display_word(l),
        right: display_word(r),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interface {
    pub internal: Vec<VertexId>,
    /// Positions into `internal` of the external vertices, in external order.
    pub external: Vec<usize>,
}

impl Interface {
    /// Every vertex is external, in the given order.
    pub fn external_only(vs: Vec<VertexId>) -> Self {
        let external = (0..vs.len()).collect();
        Interface {
            internal: vs,
            external,
        }
    }

    pub fn external_vertices(&self) -> Vec<VertexId> {
        self.external.iter().map(|i| self.internal[*i]).collect()
    }

    pub fn strictly_internal(&self) -> Vec<VertexId> {
        let ext: BTreeSet<usize> = self.external.iter().copied().collect();
        self.internal
            .iter()
            .enumerate()
            .filter(|(i, _)| !ext.contains(i))
            .map(|(_, v)| *v)
            .collect()
    }

    pub fn is_external(&self, v: VertexId) -> bool {
        self.external.iter().any(|i| self.internal[*i] == v)
    }

    pub fn map(&self, h: &Homomorphism) -> Interface {
        Interface {
            internal: self.internal.iter().map(|v| h.v(*v)).collect(),
            external: self.external.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtendedCospan {
    pub carrier: EHypergraph,
    pub inputs: Interface,
    pub outputs: Interface,
}

impl ExtendedCospan {
    pub fn empty() -> Self {
        Self::default()
    }

    fn word(&self, vs: &[VertexId]) -> Word {
        vs.iter()
            .map(|v| self.carrier.vertex_type(*v).clone())
            .collect()
    }

    pub fn input_word(&self) -> Word {
        self.word(&self.inputs.external_vertices())
    }

    pub fn output_word(&self) -> Word {
        self.word(&self.outputs.external_vertices())
    }

    /// A copy with dense ids: vertices in order of first appearance along the
    /// inputs, the edges and the outputs, and edges in their current order.
    pub fn canonical(&self) -> ExtendedCospan {
        let g = &self.carrier;
        let mut order: Vec<VertexId> = Vec::new();
        let mut seen = BTreeSet::new();
        let edge_ends = g
            .edges
            .values()
            .flat_map(|e| e.sources.iter().chain(&e.targets));
        let all = self
            .inputs
            .internal
            .iter()
            .chain(edge_ends)
            .chain(&self.outputs.internal)
            .chain(g.vertices.keys());
        for v in all {
            if seen.insert(*v) {
                order.push(*v);
            }
        }
        let mut h = Homomorphism::default();
        for (i, v) in order.iter().enumerate() {
            h.on_vertices.insert(*v, VertexId(i as u32));
        }
        for (i, e) in g.edges.keys().enumerate() {
            h.on_edges.insert(*e, EdgeId(i as u32));
        }
        let mut carrier = h.image_graph(g);
        // block ids become 0, 1, ... within each box
        for (e, edge) in &g.edges {
            if edge.kind == EdgeKind::EBox {
                for (i, members) in g.blocks(*e).values().enumerate() {
                    for x in members {
                        carrier.set_block(h.elem(*x), Some(i as u32));
                    }
                }
            }
        }
        ExtendedCospan {
            carrier,
            inputs: self.inputs.map(&h),
            outputs: self.outputs.map(&h),
        }
    }

    /// Every check this crate knows about: carrier validity, interface
    /// invariants, MDA and well-typedness.
    pub fn check(&self) -> Vec<Violation> {
        let mut out = validate(&self.carrier);
        out.extend(interface_violations(self));
        out.extend(is_mda(self));
        if out.is_empty() {
            out.extend(is_well_typed(self));
        }
        out
    }
}

fn violation(element: Option<Elem>, clause: &'static str, message: impl Into<String>) -> Violation {
    Violation {
        element,
        clause,
        message: message.into(),
    }
}

/// External positions are in range and injective, external vertices are
/// top-level and strictly internal ones are nested.
pub fn interface_violations(c: &ExtendedCospan) -> Vec<Violation> {
    let mut out = Vec::new();
    for (side, itf) in [("inputs", &c.inputs), ("outputs", &c.outputs)] {
        let pos: BTreeSet<usize> = itf.external.iter().copied().collect();
        if pos.len() != itf.external.len() || itf.external.iter().any(|i| *i >= itf.internal.len())
        {
            out.push(violation(
                None,
                "interface",
                format!("{side}: external map is not injective into the internal interface"),
            ));
            continue;
        }
        for v in &itf.internal {
            if !c.carrier.vertices.contains_key(v) {
                out.push(violation(
                    Some(Elem::V(*v)),
                    "interface",
                    format!("{side}: missing vertex"),
                ));
            }
        }
        if !out.is_empty() {
            continue;
        }
        for v in itf.external_vertices() {
            if !c.carrier.is_top_level(Elem::V(v)) {
                out.push(violation(
                    Some(Elem::V(v)),
                    "interface",
                    format!("{side}: external vertex is nested"),
                ));
            }
        }
        for v in itf.strictly_internal() {
            if c.carrier.is_top_level(Elem::V(v)) {
                out.push(violation(
                    Some(Elem::V(v)),
                    "interface",
                    format!("{side}: strictly internal vertex is top-level"),
                ));
            }
        }
    }
    out
}

/// Monogamous directed acyclic: acyclic, degrees at most one, injective
/// internal interfaces which are exactly the vertices of degree zero.
pub fn is_mda(c: &ExtendedCospan) -> Vec<Violation> {
    let g = &c.carrier;
    let mut out = Vec::new();
    if !is_directed_acyclic(g) {
        out.push(violation(None, "mda", "carrier has a directed cycle"));
    }
    let inc = g.incidence();
    let ins: BTreeSet<VertexId> = c.inputs.internal.iter().copied().collect();
    let outs: BTreeSet<VertexId> = c.outputs.internal.iter().copied().collect();
    if ins.len() != c.inputs.internal.len() {
        out.push(violation(None, "mda", "input interface is not injective"));
    }
    if outs.len() != c.outputs.internal.len() {
        out.push(violation(None, "mda", "output interface is not injective"));
    }
    for v in g.vertices.keys() {
        let (i, o) = (inc.producers(*v).len(), inc.consumers(*v).len());
        if i > 1 {
            out.push(violation(
                Some(Elem::V(*v)),
                "mda",
                format!("in-degree {i}"),
            ));
        }
        if o > 1 {
            out.push(violation(
                Some(Elem::V(*v)),
                "mda",
                format!("out-degree {o}"),
            ));
        }
        if (i == 0) != ins.contains(v) {
            out.push(violation(
                Some(Elem::V(*v)),
                "mda",
                "in-degree 0 exactly on the input interface",
            ));
        }
        if (o == 0) != outs.contains(v) {
            out.push(violation(
                Some(Elem::V(*v)),
                "mda",
                "out-degree 0 exactly on the output interface",
            ));
        }
    }
    out
}

/// The strictly internal interface vertices that are immediate children of `e`, in interface order.
pub fn box_interface(c: &ExtendedCospan, e: EdgeId, outputs: bool) -> Vec<VertexId> {
    let itf = if outputs { &c.outputs } else { &c.inputs };
    itf.strictly_internal()
        .into_iter()
        .filter(|v| c.carrier.parent_of(Elem::V(*v)) == Some(e))
        .collect()
}

/// Hierarchical edges agree with the interfaces of their contents.
pub fn is_well_typed(c: &ExtendedCospan) -> Vec<Violation> {
    let g = &c.carrier;
    let mut out = Vec::new();
    for (e, edge) in &g.edges {
        let x = Some(Elem::E(*e));
        let src = c.word(&edge.sources);
        let tgt = c.word(&edge.targets);
        match edge.kind {
            EdgeKind::EBox => {
                let blocks: BTreeSet<u32> = g
                    .children(*e)
                    .iter()
                    .filter_map(|x| g.block_of(*x))
                    .collect();
                for (outputs, want) in [(false, &src), (true, &tgt)] {
                    let vs = box_interface(c, *e, outputs);
                    for b in &blocks {
                        let part: Vec<VertexId> = vs
                            .iter()
                            .filter(|v| g.block_of(Elem::V(**v)) == Some(*b))
                            .copied()
                            .collect();
                        if c.word(&part) != *want {
                            let side = if outputs { "outputs" } else { "inputs" };
                            out.push(violation(
                                x,
                                "well-typed",
                                format!(
                                    "block {b} {side} [{}] differ from [{}]",
                                    display_word(&c.word(&part)),
                                    display_word(want)
                                ),
                            ));
                        }
                    }
                }
            }
            EdgeKind::LambdaBox => {
                let ins = c.word(&box_interface(c, *e, false));
                let outs = c.word(&box_interface(c, *e, true));
                if tgt.len() != 1 {
                    out.push(violation(
                        x,
                        "well-typed",
                        "lambda box must have exactly one target",
                    ));
                    continue;
                }
                if ins.len() < src.len() || ins[..src.len()] != src[..] {
                    out.push(violation(
                        x,
                        "well-typed",
                        "lambda box inputs do not start with its sources",
                    ));
                    continue;
                }
                let bound = &ins[src.len()..];
                let want = VertexType::arrow_of_words(bound, &outs);
                if tgt[0] != want {
                    out.push(violation(
                        x,
                        "well-typed",
                        format!("lambda box target should be `{want}`, found `{}`", tgt[0]),
                    ));
                }
            }
            EdgeKind::Plain(_) => {}
        }
    }
    out
}

pub fn identity(w: &[VertexType]) -> ExtendedCospan {
    let mut g = EHypergraph::new();
    let vs: Vec<VertexId> = w.iter().map(|t| g.add_vertex(t.clone())).collect();
    ExtendedCospan {
        carrier: g,
        inputs: Interface::external_only(vs.clone()),
        outputs: Interface::external_only(vs),
    }
}

pub fn symmetry(w1: &[VertexType], w2: &[VertexType]) -> ExtendedCospan {
    let mut g = EHypergraph::new();
    let a: Vec<VertexId> = w1.iter().map(|t| g.add_vertex(t.clone())).collect();
    let b: Vec<VertexId> = w2.iter().map(|t| g.add_vertex(t.clone())).collect();
    let ins = [a.as_slice(), b.as_slice()].concat();
    let outs = [b.as_slice(), a.as_slice()].concat();
    ExtendedCospan {
        carrier: g,
        inputs: Interface::external_only(ins),
        outputs: Interface::external_only(outs),
    }
}

/// Sequential composition: glue the outputs of `c1` to the inputs of `c2`.
pub fn compose(c1: &ExtendedCospan, c2: &ExtendedCospan) -> Result<ExtendedCospan, CospanError> {
    let (o1, i2) = (c1.output_word(), c2.input_word());
    if o1 != i2 {
        return Err(mismatch(&o1, &i2));
    }
    let mut foot = EHypergraph::new();
    let zs: Vec<VertexId> = o1.iter().map(|t| foot.add_vertex(t.clone())).collect();
    let f = Homomorphism {
        on_vertices: zs
            .iter()
            .copied()
            .zip(c1.outputs.external_vertices())
            .collect(),
        on_edges: BTreeMap::new(),
    };
    let g = Homomorphism {
        on_vertices: zs
            .iter()
            .copied()
            .zip(c2.inputs.external_vertices())
            .collect(),
        on_edges: BTreeMap::new(),
    };
    let (h, p1, p2) = pushout(&foot, &c1.carrier, &f, &c2.carrier, &g)?;
    let mut inputs = c1.inputs.map(&p1);
    inputs
        .internal
        .extend(c2.inputs.strictly_internal().iter().map(|v| p2.v(*v)));
    let mut outputs = c2.outputs.map(&p2);
    outputs
        .internal
        .extend(c1.outputs.strictly_internal().iter().map(|v| p1.v(*v)));
    Ok(ExtendedCospan {
        carrier: h,
        inputs,
        outputs,
    })
}

/// Parallel composition: disjoint union with concatenated interfaces.
pub fn tensor(c1: &ExtendedCospan, c2: &ExtendedCospan) -> ExtendedCospan {
    let (g, i1, i2) = coproduct(&c1.carrier, &c2.carrier);
    let cat = |a: &Interface, b: &Interface| {
        let mut itf = a.map(&i1);
        let shift = itf.internal.len();
        let b = b.map(&i2);
        itf.internal.extend(b.internal);
        itf.external.extend(b.external.iter().map(|i| i + shift));
        itf
    };
    ExtendedCospan {
        inputs: cat(&c1.inputs, &c2.inputs),
        outputs: cat(&c1.outputs, &c2.outputs),
        carrier: g,
    }
}

pub fn join(c1: &ExtendedCospan, c2: &ExtendedCospan) -> Result<ExtendedCospan, CospanError> {
    join_many(&[c1.clone(), c2.clone()])
}

/// Puts each diagram in its own block of a fresh e-box.
pub fn join_many(cs: &[ExtendedCospan]) -> Result<ExtendedCospan, CospanError> {
    let first = cs.first().ok_or(CospanError::EmptyJoin)?;
    let (iw, ow) = (first.input_word(), first.output_word());
    for c in &cs[1..] {
        if c.input_word() != iw {
            return Err(mismatch(&iw, &c.input_word()));
        }
        if c.output_word() != ow {
            return Err(mismatch(&ow, &c.output_word()));
        }
    }
    let empties = cs.iter().filter(|c| c.carrier.num_elements() == 0).count();
    if empties == cs.len() {
        return Ok(ExtendedCospan::empty());
    }
    if empties > 0 {
        return Err(CospanError::EmptyJoinBlock);
    }
    if cs.len() == 1 {
        return Ok(first.clone());
    }
    let mut g = EHypergraph::new();
    let s: Vec<VertexId> = iw.iter().map(|t| g.add_vertex(t.clone())).collect();
    let t: Vec<VertexId> = ow.iter().map(|t| g.add_vertex(t.clone())).collect();
    let e = g.add_edge(EdgeKind::EBox, s.clone(), t.clone());
    let mut inputs = Interface::external_only(s);
    let mut outputs = Interface::external_only(t);
    for (k, c) in cs.iter().enumerate() {
        let h = g.absorb(&c.carrier);
        for x in c.carrier.elems().filter(|x| c.carrier.is_top_level(*x)) {
            g.set_parent(h.elem(x), Some(e));
            g.set_block(h.elem(x), Some(k as u32));
        }
        for (itf, src) in [(&mut inputs, &c.inputs), (&mut outputs, &c.outputs)] {
            itf.internal
                .extend(src.external_vertices().iter().map(|v| h.v(*v)));
            itf.internal
                .extend(src.strictly_internal().iter().map(|v| h.v(*v)));
        }
    }
    Ok(ExtendedCospan {
        carrier: g,
        inputs,
        outputs,
    })
}

/// Partition of interface positions: same e-box block, or same lambda box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterfacePartition {
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inputs,
    Outputs,
}

/// Box, block and external slot shared by the wires of one group.
type GroupKey = (Option<EdgeId>, Option<u32>, usize);

pub fn interface_partition(c: &ExtendedCospan, side: Side) -> InterfacePartition {
    let itf = match side {
        Side::Inputs => &c.inputs,
        Side::Outputs => &c.outputs,
    };
    let mut groups: Vec<(GroupKey, Vec<usize>)> = Vec::new();
    for (i, v) in itf.internal.iter().enumerate() {
        let x = Elem::V(*v);
        let key = match c.carrier.parent_ref(x) {
            None => (None, None, i),
            Some(p) if p.kind == ParentKind::EParent => (Some(p.parent), c.carrier.block_of(x), 0),
            Some(p) => (Some(p.parent), None, 0),
        };
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, ps)) => ps.push(i),
            None => groups.push((key, vec![i])),
        }
    }
    InterfacePartition {
        blocks: groups.into_iter().map(|(_, ps)| ps).collect(),
    }
}

/// An isomorphism of extended cospans: a carrier iso that fixes the external
/// interfaces, maps internal interfaces onto each other and keeps order
/// inside each partition block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CospanIso {
    pub carrier: Homomorphism,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

fn position_map(a: &Interface, b: &Interface, h: &Homomorphism) -> Option<Vec<usize>> {
    let pos: BTreeMap<VertexId, usize> = b
        .internal
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, i))
        .collect();
    a.internal
        .iter()
        .map(|v| pos.get(&h.v(*v)).copied())
        .collect()
}

fn keeps_order(part: &InterfacePartition, map: &[usize]) -> bool {
    part.blocks
        .iter()
        .all(|b| b.windows(2).all(|w| map[w[0]] < map[w[1]]))
}

pub fn find_cospan_iso(c1: &ExtendedCospan, c2: &ExtendedCospan) -> Option<CospanIso> {
    let sizes = |c: &ExtendedCospan| {
        (
            c.inputs.internal.len(),
            c.inputs.external.len(),
            c.outputs.internal.len(),
            c.outputs.external.len(),
        )
    };
    if sizes(c1) != sizes(c2) {
        return None;
    }
    let mut fixed = BTreeMap::new();
    for (a, b) in c1
        .inputs
        .external_vertices()
        .into_iter()
        .zip(c2.inputs.external_vertices())
        .chain(
            c1.outputs
                .external_vertices()
                .into_iter()
                .zip(c2.outputs.external_vertices()),
        )
    {
        if let Some(prev) = fixed.insert(a, b) {
            if prev != b {
                return None;
            }
        }
    }
    let in1: BTreeSet<VertexId> = c1.inputs.internal.iter().copied().collect();
    let in2: BTreeSet<VertexId> = c2.inputs.internal.iter().copied().collect();
    let out1: BTreeSet<VertexId> = c1.outputs.internal.iter().copied().collect();
    let out2: BTreeSet<VertexId> = c2.outputs.internal.iter().copied().collect();
    let ok = |p: VertexId, t: VertexId| {
        in1.contains(&p) == in2.contains(&t) && out1.contains(&p) == out2.contains(&t)
    };
    let mut opts = SearchOptions::new(SearchMode::Iso);
    opts.fixed = fixed;
    opts.vertex_ok = Some(&ok);
    let pin = interface_partition(c1, Side::Inputs);
    let pout = interface_partition(c1, Side::Outputs);
    let mut found = None;
    search_homomorphisms(&c1.carrier, &c2.carrier, &opts, &mut |h| {
        let (Some(mi), Some(mo)) = (
            position_map(&c1.inputs, &c2.inputs, h),
            position_map(&c1.outputs, &c2.outputs, h),
        ) else {
            return false;
        };
        if keeps_order(&pin, &mi) && keeps_order(&pout, &mo) {
            found = Some(CospanIso {
                carrier: h.clone(),
                inputs: mi,
                outputs: mo,
            });
            return true;
        }
        false
    });
    found
}

pub fn is_isomorphic(c1: &ExtendedCospan, c2: &ExtendedCospan) -> bool {
    find_cospan_iso(c1, c2).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceJson {
    pub internal: Vec<u32>,
    pub external: Vec<usize>,
}

/// Cospan JSON: the graph fields plus the two interfaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CospanJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    pub inputs: InterfaceJson,
    pub outputs: InterfaceJson,
}

impl ExtendedCospan {
    /// Serializes with ids renumbered densely, so equal runs give equal bytes.
    pub fn to_json(&self) -> CospanJson {
        let (g, h) = self.carrier.compacted();
        let itf = |i: &Interface| InterfaceJson {
            internal: i.internal.iter().map(|v| h.v(*v).0).collect(),
            external: i.external.clone(),
        };
        CospanJson {
            graph: GraphJson::from_graph(&g),
            inputs: itf(&self.inputs),
            outputs: itf(&self.outputs),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable") + "\n"
    }

    pub fn from_json(js: &CospanJson) -> Result<Self, JsonError> {
        let carrier = js.graph.to_graph()?;
        let itf = |i: &InterfaceJson| Interface {
            internal: i.internal.iter().map(|v| VertexId(*v)).collect(),
            external: i.external.clone(),
        };
        Ok(ExtendedCospan {
            carrier,
            inputs: itf(&js.inputs),
            outputs: itf(&js.outputs),
        })
    }
}
