use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{EHypergraph, Edge, EdgeId, EdgeKind, Elem, ParentKind, ParentRef, VertexId};
use crate::signature::{OpSymbol, VertexType};
use crate::syntax::parse_vertex_type;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonError {
    #[error("bad vertex type `{0}`: {1}")]
    BadType(String, String),
    #[error("bad element reference `{0}`")]
    BadElement(String),
    #[error("unknown edge kind `{0}`")]
    BadKind(String),
    #[error("plain edge e{0} has no label")]
    MissingLabel(u32),
    #[error("edge e{0} refers to missing vertex v{1}")]
    MissingVertex(u32, u32),
    #[error("parent e{0} is not a box")]
    BadParent(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: u32,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: u32,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub sources: Vec<u32>,
    pub targets: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParentJson {
    pub child: String,
    pub parent: u32,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub ebox: u32,
    pub block: u32,
    pub members: Vec<String>,
}

/// Serialized form of an e-hypergraph. Plain edges store only their operation
/// name; the operation's type is recovered from the incident vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub parents: Vec<ParentJson>,
    #[serde(default)]
    pub blocks: Vec<BlockJson>,
}

fn elem_name(x: Elem) -> String {
    x.to_string()
}

fn parse_elem(s: &str) -> Result<Elem, JsonError> {
    s.parse()
}

impl GraphJson {
    pub fn from_graph(g: &EHypergraph) -> Self {
        let vertices = g
            .vertices
            .iter()
            .map(|(v, ty)| VertexJson {
                id: v.0,
                ty: ty.to_string(),
            })
            .collect();
        let edges = g
            .edges
            .iter()
            .map(|(e, edge)| {
                let (kind, label) = match &edge.kind {
                    EdgeKind::Plain(op) => ("plain", Some(op.name.clone())),
                    EdgeKind::EBox => ("ebox", None),
                    EdgeKind::LambdaBox => ("lambda", None),
                };
                EdgeJson {
                    id: e.0,
                    kind: kind.into(),
                    label,
                    sources: edge.sources.iter().map(|v| v.0).collect(),
                    targets: edge.targets.iter().map(|v| v.0).collect(),
                }
            })
            .collect();
        let parents = g
            .parent
            .iter()
            .map(|(x, p)| ParentJson {
                child: elem_name(*x),
                parent: p.parent.0,
                kind: match p.kind {
                    ParentKind::EParent => "ebox".into(),
                    ParentKind::LamParent => "lambda".into(),
                },
            })
            .collect();
        let mut blocks = Vec::new();
        for (e, edge) in &g.edges {
            if edge.kind == EdgeKind::EBox {
                for (b, members) in g.blocks(*e) {
                    blocks.push(BlockJson {
                        ebox: e.0,
                        block: b,
                        members: members.into_iter().map(elem_name).collect(),
                    });
                }
            }
        }
        GraphJson {
            vertices,
            edges,
            parents,
            blocks,
        }
    }

    pub fn to_graph(&self) -> Result<EHypergraph, JsonError> {
        let mut g = EHypergraph::new();
        for v in &self.vertices {
            let ty: VertexType = parse_vertex_type(&v.ty)
                .map_err(|e| JsonError::BadType(v.ty.clone(), e.to_string()))?;
            g.insert_vertex(VertexId(v.id), ty);
        }
        for e in &self.edges {
            for v in e.sources.iter().chain(&e.targets) {
                if !g.vertices.contains_key(&VertexId(*v)) {
                    return Err(JsonError::MissingVertex(e.id, *v));
                }
            }
            let sources: Vec<VertexId> = e.sources.iter().map(|v| VertexId(*v)).collect();
            let targets: Vec<VertexId> = e.targets.iter().map(|v| VertexId(*v)).collect();
            let kind = match e.kind.as_str() {
                "plain" => {
                    let name = e.label.clone().ok_or(JsonError::MissingLabel(e.id))?;
                    let ins = sources.iter().map(|v| g.vertices[v].clone()).collect();
                    let outs = targets.iter().map(|v| g.vertices[v].clone()).collect();
                    EdgeKind::Plain(Arc::new(OpSymbol::new(name, ins, outs)))
                }
                "ebox" => EdgeKind::EBox,
                "lambda" => EdgeKind::LambdaBox,
                other => return Err(JsonError::BadKind(other.to_string())),
            };
            g.insert_edge(
                EdgeId(e.id),
                Edge {
                    kind,
                    sources,
                    targets,
                },
            );
        }
        for p in &self.parents {
            let child = parse_elem(&p.child)?;
            let kind = match g.edges.get(&EdgeId(p.parent)).map(|e| &e.kind) {
                Some(EdgeKind::EBox) => ParentKind::EParent,
                Some(EdgeKind::LambdaBox) => ParentKind::LamParent,
                _ => return Err(JsonError::BadParent(p.parent)),
            };
            g.parent.insert(
                child,
                ParentRef {
                    parent: EdgeId(p.parent),
                    kind,
                },
            );
        }
        for b in &self.blocks {
            for m in &b.members {
                g.block.insert(parse_elem(m)?, b.block);
            }
        }
        Ok(g)
    }
}
