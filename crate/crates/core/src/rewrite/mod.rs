//! Convex matching and double-pushout rewriting of extended cospans.
//!
//! A rule is a pair of cospans with equal external words. Applying it at a
//! match first cuts the redex out of the target, leaving a boundary
//! complement whose interfaces record where the redex was attached, and then
//! glues the right-hand side into the hole with a pushout.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::cospan::{
    interface_violations, is_mda, is_well_typed, CospanError, ExtendedCospan, Interface,
};
use crate::ehyp::{
    pushout, search_homomorphisms, validate, EHypergraph, EdgeId, Elem, Homomorphism, PushoutError,
    SearchMode, SearchOptions, Site, VertexId,
};
use crate::signature::display_word;

mod schema;

pub use schema::{
    block_cospan, extract, inline_block, inline_lambda, instantiate_schema, schema_anchors,
    SchemaId,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("rule `{rule}`: sides disagree on {side} ([{left}] vs [{right}])")]
    InterfaceMismatch {
        rule: String,
        side: &'static str,
        left: String,
        right: String,
    },
    #[error("no boundary complement (clause {clause}): {reason}")]
    NoComplement { clause: u8, reason: String },
    #[error("schema does not fit the site: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Pushout(#[from] PushoutError),
    #[error(transparent)]
    Cospan(#[from] CospanError),
    #[error("rewrite produced an invalid diagram: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: ExtendedCospan,
    pub rhs: ExtendedCospan,
}

impl RewriteRule {
    pub fn new(
        name: impl Into<String>,
        lhs: ExtendedCospan,
        rhs: ExtendedCospan,
    ) -> Result<Self, RewriteError> {
        let name = name.into();
        for (side, l, r) in [
            ("inputs", lhs.input_word(), rhs.input_word()),
            ("outputs", lhs.output_word(), rhs.output_word()),
        ] {
            if l != r {
                return Err(RewriteError::InterfaceMismatch {
                    rule: name,
                    side,
                    left: display_word(&l),
                    right: display_word(&r),
                });
            }
        }
        Ok(RewriteRule { name, lhs, rhs })
    }

    pub fn reversed(&self) -> RewriteRule {
        RewriteRule {
            name: format!("{}'", self.name),
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
        }
    }
}

/// An embedding of a rule's left-hand side into a target carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub embedding: Homomorphism,
}

impl Match {
    /// Edge images in pattern order, then vertex images.
    pub fn key(&self) -> (Vec<u32>, Vec<u32>) {
        (
            self.embedding.on_edges.values().map(|e| e.0).collect(),
            self.embedding.on_vertices.values().map(|v| v.0).collect(),
        )
    }

    pub fn image(&self) -> BTreeSet<Elem> {
        let vs = self.embedding.on_vertices.values().map(|v| Elem::V(*v));
        vs.chain(self.embedding.on_edges.values().map(|e| Elem::E(*e)))
            .collect()
    }
}

/// No path between two vertices of the image leaves the image.
pub fn is_convex(g: &EHypergraph, image: &BTreeSet<Elem>) -> bool {
    let inc = g.incidence();
    let reach = |forward: bool| {
        let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
        let mut queue: VecDeque<VertexId> = image
            .iter()
            .filter_map(|x| if let Elem::V(v) = x { Some(*v) } else { None })
            .collect();
        let mut visited: BTreeSet<VertexId> = queue.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            let next = if forward {
                inc.consumers(v)
            } else {
                inc.producers(v)
            };
            for (e, _) in next {
                if seen.insert(*e) {
                    let edge = g.edge(*e);
                    let vs = if forward {
                        &edge.targets
                    } else {
                        &edge.sources
                    };
                    for w in vs {
                        if visited.insert(*w) {
                            queue.push_back(*w);
                        }
                    }
                }
            }
        }
        seen
    };
    let fwd = reach(true);
    let bwd = reach(false);
    fwd.intersection(&bwd).all(|e| image.contains(&Elem::E(*e)))
}

/// Every child of an image box is in the image, and image boxes keep their
/// number of blocks.
pub fn is_down_closed(l: &EHypergraph, g: &EHypergraph, m: &Homomorphism) -> bool {
    l.edges
        .keys()
        .filter(|e| l.edge(**e).kind.is_hierarchical())
        .all(|e| {
            let ge = m.e(*e);
            g.children(ge).len() == l.children(*e).len() && g.blocks(ge).len() == l.blocks(*e).len()
        })
}

/// Site of the images of the top-level pattern elements, if they agree.
fn match_site(l: &EHypergraph, g: &EHypergraph, m: &Homomorphism) -> Option<Option<Site>> {
    let mut sites = l
        .elems()
        .filter(|x| l.is_top_level(*x))
        .map(|x| g.site(m.elem(x)));
    let first = sites.next();
    match first {
        None => Some(None),
        Some(s) => sites.all(|t| t == s).then_some(Some(s)),
    }
}

/// All convex, down-closed monomorphisms from the left-hand side into `g`
/// whose top-level elements land at a single site, sorted by image ids.
pub fn find_convex_matches(rule: &RewriteRule, g: &ExtendedCospan) -> Vec<Match> {
    let l = &rule.lhs.carrier;
    if l.num_elements() == 0 {
        return Vec::new();
    }
    let opts = SearchOptions::new(SearchMode::Mono);
    let mut out = Vec::new();
    search_homomorphisms(l, &g.carrier, &opts, &mut |h| {
        if matches!(match_site(l, &g.carrier, h), Some(Some(_)))
            && is_down_closed(l, &g.carrier, h)
            && is_convex(
                &g.carrier,
                &Match {
                    embedding: h.clone(),
                }
                .image(),
            )
        {
            out.push(Match {
                embedding: h.clone(),
            });
        }
        false
    });
    out.sort_by_key(|m| m.key());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplementCase {
    /// The redex interface is top-level; the complement exposes it externally.
    TopLevel,
    /// The redex sits inside a box; its interface stays internal.
    Nested,
}

/// The target with the redex cut out, plus the bookkeeping needed to glue a
/// right-hand side back in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complement {
    pub cospan: ExtendedCospan,
    pub case: ComplementCase,
    pub site: Site,
    /// Where the rule's external inputs and outputs sit in the complement.
    pub c_in: Vec<VertexId>,
    pub c_out: Vec<VertexId>,
    /// Surviving internal interfaces of the target, in target order.
    kept_in: Vec<VertexId>,
    kept_out: Vec<VertexId>,
    /// The target's external interfaces, as complement vertices.
    ext_in: Vec<VertexId>,
    ext_out: Vec<VertexId>,
}

fn fail(clause: u8, reason: impl Into<String>) -> RewriteError {
    RewriteError::NoComplement {
        clause,
        reason: reason.into(),
    }
}

fn positions(list: &[VertexId], vs: &[VertexId]) -> Option<Vec<usize>> {
    vs.iter()
        .map(|v| list.iter().position(|w| w == v))
        .collect()
}

pub fn boundary_complement(
    rule: &RewriteRule,
    g: &ExtendedCospan,
    m: &Match,
) -> Result<Complement, RewriteError> {
    let l = &rule.lhs;
    let gc = &g.carrier;
    let h = &m.embedding;
    if !h.is_injective() || !crate::ehyp::is_homomorphism(h, &l.carrier, gc) {
        return Err(fail(1, "not a monomorphism"));
    }
    if !is_down_closed(&l.carrier, gc, h) {
        return Err(fail(1, "image is not down-closed"));
    }
    if !is_convex(gc, &m.image()) {
        return Err(fail(1, "image is not convex"));
    }
    let site = match match_site(&l.carrier, gc, h) {
        Some(s) => s.unwrap_or(Site::TOP),
        None => {
            return Err(fail(
                1,
                "top-level elements of the pattern land at different sites",
            ))
        }
    };
    let li: Vec<VertexId> = l
        .inputs
        .external_vertices()
        .iter()
        .map(|v| h.v(*v))
        .collect();
    let lj: Vec<VertexId> = l
        .outputs
        .external_vertices()
        .iter()
        .map(|v| h.v(*v))
        .collect();

    // (3)/(4): interface images cohabit
    for v in li.iter().chain(&lj) {
        if gc.site(Elem::V(*v)) != site {
            return Err(fail(
                3,
                format!("{v} does not share the predecessors of the redex"),
            ));
        }
    }

    let mut c = gc.clone();
    let keep: BTreeSet<VertexId> = li.iter().chain(&lj).copied().collect();
    for e in h.on_edges.values() {
        c.remove_edge(*e);
    }
    for v in h.on_vertices.values() {
        if !keep.contains(v) {
            c.remove_vertex(*v);
        }
    }
    // A wire through the redex becomes two vertices: the input side keeps
    // its producer, the output side takes over the consumers.
    let mut split: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for v in li.iter().filter(|v| lj.contains(v)) {
        let w = c.add_vertex(gc.vertex_type(*v).clone());
        c.set_site(Elem::V(w), site);
        for edge in c.edges.values_mut() {
            for s in edge.sources.iter_mut().filter(|s| **s == *v) {
                *s = w;
            }
        }
        split.insert(*v, w);
    }
    let c_in = li.clone();
    let c_out: Vec<VertexId> = lj
        .iter()
        .map(|v| split.get(v).copied().unwrap_or(*v))
        .collect();
    let all: BTreeSet<VertexId> = c_in.iter().chain(&c_out).copied().collect();
    if all.len() != c_in.len() + c_out.len() {
        return Err(fail(2, "the rule feet do not embed injectively"));
    }

    let strict_in: BTreeSet<VertexId> = l
        .inputs
        .strictly_internal()
        .iter()
        .map(|v| h.v(*v))
        .collect();
    let strict_out: BTreeSet<VertexId> = l
        .outputs
        .strictly_internal()
        .iter()
        .map(|v| h.v(*v))
        .collect();
    let kept_in: Vec<VertexId> = g
        .inputs
        .internal
        .iter()
        .filter(|v| !strict_in.contains(v))
        .copied()
        .collect();
    let kept_out: Vec<VertexId> = g
        .outputs
        .internal
        .iter()
        .filter(|v| !strict_out.contains(v))
        .map(|v| split.get(v).copied().unwrap_or(*v))
        .collect();
    for v in kept_in.iter().chain(&kept_out) {
        if !c.vertices.contains_key(v) {
            return Err(fail(
                5,
                format!("interface vertex {v} lies inside the redex"),
            ));
        }
    }
    let ext_in = g.inputs.external_vertices();
    let ext_out: Vec<VertexId> = g
        .outputs
        .external_vertices()
        .iter()
        .map(|v| split.get(v).copied().unwrap_or(*v))
        .collect();
    let (Some(pin), Some(pout)) = (positions(&kept_in, &ext_in), positions(&kept_out, &ext_out))
    else {
        return Err(fail(
            5,
            "external interface does not factor through the complement",
        ));
    };

    let case = if site == Site::TOP {
        ComplementCase::TopLevel
    } else {
        ComplementCase::Nested
    };
    let mut inputs = Interface {
        internal: kept_in.clone(),
        external: pin,
    };
    let mut outputs = Interface {
        internal: kept_out.clone(),
        external: pout,
    };
    let (ni, no) = (inputs.internal.len(), outputs.internal.len());
    inputs.internal.extend(&c_out);
    outputs.internal.extend(&c_in);
    if case == ComplementCase::TopLevel {
        inputs.external.extend(ni..ni + c_out.len());
        outputs.external.extend(no..no + c_in.len());
    }
    let cospan = ExtendedCospan {
        carrier: c,
        inputs,
        outputs,
    };
    let mut problems = validate(&cospan.carrier);
    problems.extend(interface_violations(&cospan));
    problems.extend(is_mda(&cospan));
    let clause = if case == ComplementCase::TopLevel {
        6
    } else {
        7
    };
    if let Some(p) = problems.first() {
        return Err(fail(clause, p.to_string()));
    }
    if case == ComplementCase::TopLevel {
        if let Some(p) = is_well_typed(&cospan).first() {
            return Err(fail(6, p.to_string()));
        }
    }
    Ok(Complement {
        cospan,
        case,
        site,
        c_in,
        c_out,
        kept_in,
        kept_out,
        ext_in,
        ext_out,
    })
}

/// Result of one rewrite step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewritten {
    pub result: ExtendedCospan,
    pub case: ComplementCase,
}

/// One convex double-pushout step.
pub fn apply_rewrite(
    g: &ExtendedCospan,
    rule: &RewriteRule,
    m: &Match,
) -> Result<Rewritten, RewriteError> {
    let comp = boundary_complement(rule, g, m)?;
    let r = &rule.rhs;
    let mut foot = EHypergraph::new();
    let mut to_c = Homomorphism::default();
    let mut to_r = Homomorphism::default();
    let sides = [
        (&comp.c_in, r.inputs.external_vertices()),
        (&comp.c_out, r.outputs.external_vertices()),
    ];
    for (cs, rs) in sides {
        for (cv, rv) in cs.iter().zip(rs) {
            let z = foot.add_vertex(comp.cospan.carrier.vertex_type(*cv).clone());
            to_c.on_vertices.insert(z, *cv);
            to_r.on_vertices.insert(z, rv);
        }
    }
    let (mut h, p1, p2) = pushout(&foot, &comp.cospan.carrier, &to_c, &r.carrier, &to_r)?;
    for x in r.carrier.elems().filter(|x| r.carrier.is_top_level(*x)) {
        h.set_site(p2.elem(x), comp.site);
    }
    let assemble = |kept: &[VertexId],
                    ext: &[VertexId],
                    extra: Vec<VertexId>|
     -> Result<Interface, RewriteError> {
        let mut internal: Vec<VertexId> = kept.iter().map(|v| p1.v(*v)).collect();
        internal.extend(extra.iter().map(|v| p2.v(*v)));
        let ext: Vec<VertexId> = ext.iter().map(|v| p1.v(*v)).collect();
        let external = positions(&internal, &ext)
            .ok_or_else(|| RewriteError::Invalid("lost an external vertex".into()))?;
        Ok(Interface { internal, external })
    };
    let inputs = assemble(&comp.kept_in, &comp.ext_in, r.inputs.strictly_internal())?;
    let outputs = assemble(&comp.kept_out, &comp.ext_out, r.outputs.strictly_internal())?;
    let result = ExtendedCospan {
        carrier: h,
        inputs,
        outputs,
    };
    let mut problems = validate(&result.carrier);
    problems.extend(interface_violations(&result));
    problems.extend(is_mda(&result));
    if let Some(p) = problems.first() {
        return Err(RewriteError::Invalid(p.to_string()));
    }
    Ok(Rewritten {
        result,
        case: comp.case,
    })
}

/// Every rewrite of `g` by `rule` whose complement exists, in match order.
pub fn rewrite_all(g: &ExtendedCospan, rule: &RewriteRule) -> Vec<(Match, Rewritten)> {
    find_convex_matches(rule, g)
        .into_iter()
        .filter_map(|m| apply_rewrite(g, rule, &m).ok().map(|r| (m, r)))
        .collect()
}
