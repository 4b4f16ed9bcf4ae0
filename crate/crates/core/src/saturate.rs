//! Equality saturation over e-hypergraphs.
//!
//! Destructive rules are lifted so that a redex is replaced by an e-box
//! holding both sides. After every step the graph is brought back to
//! sum-of-blocks form with the structural schemas, and a step counts only if
//! the result differs (up to isomorphism) from the state before it.

use serde::{Deserialize, Serialize};

use crate::cospan::{is_isomorphic, join, ExtendedCospan};
use crate::ehyp::{EdgeId, EdgeKind, Elem, Homomorphism, VertexId};
use crate::interp::{interpret, InterpError};
use crate::rewrite::{
    apply_rewrite, block_cospan, find_convex_matches, instantiate_schema, schema_anchors,
    ComplementCase, Match, RewriteError, RewriteRule, SchemaId,
};
use crate::term::TermRule;

/// `<l, l + r>`: applying it keeps the redex and adds the contractum beside it.
pub fn lift_rule(r: &TermRule) -> Result<RewriteRule, InterpError> {
    r.check()?;
    let l = interpret(&r.lhs)?;
    let rhs = interpret(&r.rhs)?;
    Ok(lift(&RewriteRule::new(r.name.clone(), l, rhs)?)?)
}

/// Lifts an already interpreted rule.
pub fn lift(r: &RewriteRule) -> Result<RewriteRule, RewriteError> {
    RewriteRule::new(r.name.clone(), r.lhs.clone(), join(&r.lhs, &r.rhs)?)
}

#[derive(Debug, Clone)]
pub struct SaturationConfig {
    pub max_iterations: usize,
    pub max_elements: usize,
    /// Applied as given; pass lifted rules for non-destructive saturation.
    pub rules: Vec<RewriteRule>,
    /// Structural schemas normalize after every step; the lambda equations
    /// are applied lifted, like rules.
    pub schemas: Vec<SchemaId>,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig {
            max_iterations: 16,
            max_elements: 2000,
            rules: Vec::new(),
            schemas: SchemaId::STRUCTURAL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StepSource {
    Rule {
        name: String,
        embedding: Vec<(String, String)>,
    },
    Schema {
        schema: String,
        anchor: Vec<String>,
        lifted: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub iteration: usize,
    #[serde(flatten)]
    pub source: StepSource,
    pub case: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SaturationReport {
    pub iterations: usize,
    /// Elements of the final graph minus those of the input.
    pub elements_created: usize,
    pub peak_elements: usize,
    pub fixpoint: bool,
    pub limit_exceeded: Option<String>,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("step {0}: unknown rule `{1}`")]
    UnknownRule(usize, String),
    #[error("step {0}: {1}")]
    Bad(usize, String),
    #[error("step {0}: {1}")]
    Rewrite(usize, RewriteError),
}

fn case_name(c: ComplementCase) -> String {
    match c {
        ComplementCase::TopLevel => "top-level".into(),
        ComplementCase::Nested => "nested".into(),
    }
}

fn embedding_pairs(m: &Match) -> Vec<(String, String)> {
    let vs = m
        .embedding
        .on_vertices
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()));
    vs.chain(
        m.embedding
            .on_edges
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string())),
    )
    .collect()
}

/// Applies one schema step, lifting it when asked.
fn schema_step(
    g: &ExtendedCospan,
    s: SchemaId,
    anchor: &[Elem],
    lifted: bool,
) -> Result<(ExtendedCospan, ComplementCase), RewriteError> {
    let (rule, m) = instantiate_schema(s, g, anchor)?;
    let rule = if lifted { lift(&rule)? } else { rule };
    let out = apply_rewrite(g, &rule, &m)?;
    Ok((out.result, out.case))
}

fn schema_trace(
    iteration: usize,
    s: SchemaId,
    anchor: &[Elem],
    lifted: bool,
    case: ComplementCase,
) -> TraceStep {
    TraceStep {
        iteration,
        source: StepSource::Schema {
            schema: s.name().into(),
            anchor: anchor.iter().map(|x| x.to_string()).collect(),
            lifted,
        },
        case: case_name(case),
    }
}

/// Applies the structural schemas until none fires. CommPlus is never used
/// here: its result is always isomorphic to its input.
pub fn normalize(
    g: &ExtendedCospan,
    schemas: &[SchemaId],
    iteration: usize,
    trace: &mut Vec<TraceStep>,
    max_elements: usize,
) -> ExtendedCospan {
    let order: Vec<SchemaId> = SchemaId::STRUCTURAL
        .into_iter()
        .filter(|s| schemas.contains(s))
        .collect();
    let mut g = g.clone();
    'outer: loop {
        if g.carrier.num_elements() > max_elements {
            return g;
        }
        for s in &order {
            for anchor in schema_anchors(*s, &g) {
                if let Ok((next, case)) = schema_step(&g, *s, &anchor, false) {
                    trace.push(schema_trace(iteration, *s, &anchor, false, case));
                    g = next;
                    continue 'outer;
                }
            }
        }
        return g;
    }
}

enum Candidate {
    Rule(usize, Match),
    Schema(SchemaId, Vec<Elem>),
}

/// Runs the rules and schemas to a fixpoint or until a limit is hit.
pub fn saturate(g: &ExtendedCospan, cfg: &SaturationConfig) -> (ExtendedCospan, SaturationReport) {
    let mut report = SaturationReport::default();
    let start = g.carrier.num_elements();
    let mut g = normalize(g, &cfg.schemas, 0, &mut report.trace, cfg.max_elements);
    report.peak_elements = start.max(g.carrier.num_elements());
    let equations: Vec<SchemaId> = cfg
        .schemas
        .iter()
        .copied()
        .filter(|s| !s.is_structural())
        .collect();
    'iterations: for iteration in 1..=cfg.max_iterations {
        report.iterations = iteration;
        let mut progress = false;
        let sources = cfg.rules.len() + equations.len();
        for src in 0..sources {
            loop {
                let candidates: Vec<Candidate> = if src < cfg.rules.len() {
                    find_convex_matches(&cfg.rules[src], &g)
                        .into_iter()
                        .map(|m| Candidate::Rule(src, m))
                        .collect()
                } else {
                    let s = equations[src - cfg.rules.len()];
                    schema_anchors(s, &g)
                        .into_iter()
                        .map(|a| Candidate::Schema(s, a))
                        .collect()
                };
                let mut applied = false;
                for cand in candidates {
                    let (step, next) = match &cand {
                        Candidate::Rule(i, m) => match apply_rewrite(&g, &cfg.rules[*i], m) {
                            Ok(out) => (
                                TraceStep {
                                    iteration,
                                    source: StepSource::Rule {
                                        name: cfg.rules[*i].name.clone(),
                                        embedding: embedding_pairs(m),
                                    },
                                    case: case_name(out.case),
                                },
                                out.result,
                            ),
                            Err(_) => continue,
                        },
                        Candidate::Schema(s, a) => match schema_step(&g, *s, a, true) {
                            Ok((next, case)) => (schema_trace(iteration, *s, a, true, case), next),
                            Err(_) => continue,
                        },
                    };
                    let mut steps = vec![step];
                    let next =
                        normalize(&next, &cfg.schemas, iteration, &mut steps, cfg.max_elements);
                    if is_isomorphic(&next, &g) {
                        continue;
                    }
                    report.trace.extend(steps);
                    report.peak_elements = report.peak_elements.max(next.carrier.num_elements());
                    g = next;
                    applied = true;
                    progress = true;
                    break;
                }
                if g.carrier.num_elements() > cfg.max_elements {
                    report.limit_exceeded =
                        Some(format!("more than {} elements", cfg.max_elements));
                    break 'iterations;
                }
                if !applied {
                    break;
                }
            }
        }
        if !progress {
            report.fixpoint = true;
            break;
        }
    }
    if !report.fixpoint && report.limit_exceeded.is_none() {
        report.limit_exceeded = Some(format!(
            "no fixpoint after {} iterations",
            cfg.max_iterations
        ));
    }
    report.elements_created = g.carrier.num_elements().saturating_sub(start);
    (g, report)
}

fn parse_elems(i: usize, xs: &[String]) -> Result<Vec<Elem>, ReplayError> {
    xs.iter()
        .map(|x| {
            x.parse::<Elem>()
                .map_err(|e| ReplayError::Bad(i, e.to_string()))
        })
        .collect()
}

/// Re-applies a recorded trace.
pub fn replay(
    g: &ExtendedCospan,
    rules: &[RewriteRule],
    trace: &[TraceStep],
) -> Result<ExtendedCospan, ReplayError> {
    let mut g = g.clone();
    for (i, step) in trace.iter().enumerate() {
        g = match &step.source {
            StepSource::Rule { name, embedding } => {
                let rule = rules
                    .iter()
                    .find(|r| &r.name == name)
                    .ok_or_else(|| ReplayError::UnknownRule(i, name.clone()))?;
                let mut h = Homomorphism::default();
                for (a, b) in embedding {
                    let pair = parse_elems(i, &[a.clone(), b.clone()])?;
                    match (pair[0], pair[1]) {
                        (Elem::V(x), Elem::V(y)) => {
                            h.on_vertices.insert(x, y);
                        }
                        (Elem::E(x), Elem::E(y)) => {
                            h.on_edges.insert(x, y);
                        }
                        _ => return Err(ReplayError::Bad(i, format!("{a} -> {b} mixes kinds"))),
                    }
                }
                apply_rewrite(&g, rule, &Match { embedding: h })
                    .map_err(|e| ReplayError::Rewrite(i, e))?
                    .result
            }
            StepSource::Schema {
                schema,
                anchor,
                lifted,
            } => {
                let s: SchemaId = schema.parse().map_err(|e: String| ReplayError::Bad(i, e))?;
                let anchor = parse_elems(i, anchor)?;
                schema_step(&g, s, &anchor, *lifted)
                    .map_err(|e| ReplayError::Rewrite(i, e))?
                    .0
            }
        };
    }
    Ok(g)
}

/// Blocks of every e-box, each as a cospan over its box's ports.
pub fn blocks_of(g: &ExtendedCospan) -> Vec<(EdgeId, ExtendedCospan)> {
    let mut out = Vec::new();
    for (e, edge) in &g.carrier.edges {
        if edge.kind == EdgeKind::EBox {
            for k in g.carrier.blocks(*e).keys() {
                if let Ok(c) = block_cospan(g, *e, *k) {
                    out.push((*e, c));
                }
            }
        }
    }
    out
}

/// Whether `candidate` appears as the whole graph or as one block of some
/// e-box.
pub fn contains_block_iso(g: &ExtendedCospan, candidate: &ExtendedCospan) -> bool {
    is_isomorphic(g, candidate)
        || blocks_of(g)
            .iter()
            .any(|(_, b)| is_isomorphic(b, candidate))
}

/// The top-level alternative with the fewest edges, or the graph itself when
/// its top level is not a single e-box.
pub fn extract_smallest(g: &ExtendedCospan) -> ExtendedCospan {
    let top: Vec<EdgeId> = g
        .carrier
        .edges
        .keys()
        .filter(|e| g.carrier.is_top_level(Elem::E(**e)))
        .copied()
        .collect();
    match top[..] {
        [e] if g.carrier.edge(e).kind == EdgeKind::EBox => {
            let mut best: Option<ExtendedCospan> = None;
            for k in g.carrier.blocks(e).keys() {
                if let Ok(c) = block_cospan(g, e, *k) {
                    if best
                        .as_ref()
                        .is_none_or(|b| c.carrier.edges.len() < b.carrier.edges.len())
                    {
                        best = Some(c);
                    }
                }
            }
            best.unwrap_or_else(|| g.clone())
        }
        _ => g.clone(),
    }
}

/// Top level holds at most one e-box besides vertices, and no block holds a box.
pub fn is_sum_of_blocks(g: &ExtendedCospan) -> bool {
    let gc = &g.carrier;
    let top: Vec<EdgeId> = gc
        .edges
        .keys()
        .filter(|e| gc.is_top_level(Elem::E(**e)))
        .copied()
        .collect();
    let ebox_count = gc
        .edges
        .values()
        .filter(|e| e.kind == EdgeKind::EBox)
        .count();
    match top[..] {
        [e] if gc.edge(e).kind == EdgeKind::EBox => {
            ebox_count == 1
                && gc.vertices.keys().all(|v: &VertexId| {
                    !gc.is_top_level(Elem::V(*v)) || {
                        let edge = gc.edge(e);
                        edge.sources.contains(v) || edge.targets.contains(v)
                    }
                })
        }
        _ => ebox_count == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{Signature, VertexType};
    use crate::syntax::parse_term;

    fn sig() -> Signature {
        let a = || VertexType::base("A");
        let mut s = Signature::new();
        s.add_type("A");
        s.add_op("f", vec![a()], vec![a()]);
        s.add_op("g", vec![a()], vec![a()]);
        s.add_op("a", vec![], vec![a()]);
        s
    }

    fn c(src: &str) -> ExtendedCospan {
        interpret(&parse_term(src, &sig()).unwrap()).unwrap()
    }

    fn rule(name: &str, l: &str, r: &str) -> RewriteRule {
        let s = sig();
        lift_rule(&TermRule::new(
            name,
            parse_term(l, &s).unwrap(),
            parse_term(r, &s).unwrap(),
        ))
        .unwrap()
    }

    #[test]
    fn empty_rule_set_is_a_fixpoint() {
        let (out, rep) = saturate(&c("a"), &SaturationConfig::default());
        assert!(rep.fixpoint);
        assert!(rep.trace.is_empty());
        assert!(is_isomorphic(&out, &c("a")));
    }

    #[test]
    fn trivial_rule_adds_nothing() {
        let cfg = SaturationConfig {
            rules: vec![rule("same", "f", "f")],
            ..Default::default()
        };
        let (out, rep) = saturate(&c("a;f"), &cfg);
        assert!(rep.fixpoint);
        assert!(is_isomorphic(&out, &c("a;f")));
    }

    #[test]
    fn lifted_rule_keeps_both_sides() {
        let cfg = SaturationConfig {
            rules: vec![rule("fg", "f", "g")],
            ..Default::default()
        };
        let (out, rep) = saturate(&c("a;f;f"), &cfg);
        assert!(rep.fixpoint, "{rep:?}");
        assert!(is_sum_of_blocks(&out));
        for t in ["a;f;f", "a;g;f", "a;f;g", "a;g;g"] {
            assert!(contains_block_iso(&out, &c(t)), "{t}");
        }
        assert_eq!(blocks_of(&out).len(), 4);
        let back = replay(&c("a;f;f"), &cfg.rules, &rep.trace).unwrap();
        assert_eq!(back, out);
        assert_eq!(extract_smallest(&out).carrier.edges.len(), 3);
    }

    #[test]
    fn lifted_rule_is_typed() {
        let r = rule("fg", "f", "g");
        assert_eq!(r.lhs.input_word(), r.rhs.input_word());
        assert_eq!(r.lhs.output_word(), r.rhs.output_word());
    }

    #[test]
    fn block_search_misses_foreign_graphs() {
        let mut other = Signature::new();
        other.add_type("B");
        other.add_op("z", vec![], vec![VertexType::base("B")]);
        let foreign = interpret(&parse_term("z", &other).unwrap()).unwrap();
        assert!(!contains_block_iso(&c("(a;f) + (a;g)"), &foreign));
        assert!(contains_block_iso(&c("(a;f) + (a;g)"), &c("a;g")));
    }
}
