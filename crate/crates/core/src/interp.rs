//! Interpretation of terms as extended cospans.

use std::sync::Arc;

use crate::cospan::{
    compose, identity, join, symmetry, tensor, CospanError, ExtendedCospan, Interface,
};
use crate::ehyp::{EHypergraph, EdgeKind, VertexId};
use crate::rewrite::{RewriteError, RewriteRule};
use crate::signature::{OpSymbol, VertexType};
use crate::term::{type_of, Term, TermRule, TypeError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InterpError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Cospan(#[from] CospanError),
    #[error(transparent)]
    Rule(#[from] RewriteError),
    #[error("lambda with an empty body has no diagram")]
    EmptyLambdaBody,
}

/// Interprets a well-typed term. Every operation becomes one plain edge, and
/// the join and lambda constructors become boxes.
pub fn interpret(t: &Term) -> Result<ExtendedCospan, InterpError> {
    type_of(t)?;
    go(t)
}

fn vertices(g: &mut EHypergraph, w: &[VertexType]) -> Vec<VertexId> {
    w.iter().map(|t| g.add_vertex(t.clone())).collect()
}

fn edge_cospan(kind: EdgeKind, ins: &[VertexType], outs: &[VertexType]) -> ExtendedCospan {
    let mut g = EHypergraph::new();
    let s = vertices(&mut g, ins);
    let t = vertices(&mut g, outs);
    g.add_edge(kind, s.clone(), t.clone());
    ExtendedCospan {
        carrier: g,
        inputs: Interface::external_only(s),
        outputs: Interface::external_only(t),
    }
}

fn go(t: &Term) -> Result<ExtendedCospan, InterpError> {
    Ok(match t {
        Term::Gen(op) => edge_cospan(EdgeKind::Plain(op.clone()), &op.inputs, &op.outputs),
        Term::IdUnit => ExtendedCospan::empty(),
        Term::Id(w) => identity(w),
        Term::Sym(a, b) => symmetry(a, b),
        Term::Ev(a, b) => {
            let op = Arc::new(OpSymbol::application(a, b));
            edge_cospan(EdgeKind::Plain(op.clone()), &op.inputs, &op.outputs)
        }
        Term::Seq(a, b) => compose(&go(a)?, &go(b)?)?,
        Term::Tensor(a, b) => tensor(&go(a)?, &go(b)?),
        Term::Join(a, b) => join(&go(a)?, &go(b)?)?,
        Term::Lambda {
            ctx,
            bound,
            res,
            body,
        } => {
            let inner = go(body)?;
            if inner.carrier.num_elements() == 0 {
                return Err(InterpError::EmptyLambdaBody);
            }
            wrap_lambda(&inner, ctx, bound, res)
        }
    })
}

/// Wraps a body cospan `ctx ++ bound -> res` into a lambda box.
fn wrap_lambda(
    inner: &ExtendedCospan,
    ctx: &[VertexType],
    bound: &[VertexType],
    res: &[VertexType],
) -> ExtendedCospan {
    let mut g = EHypergraph::new();
    let xs = vertices(&mut g, ctx);
    let u = g.add_vertex(VertexType::arrow_of_words(bound, res));
    let e = g.add_edge(EdgeKind::LambdaBox, xs.clone(), vec![u]);
    let h = g.absorb(&inner.carrier);
    for x in inner
        .carrier
        .elems()
        .filter(|x| inner.carrier.is_top_level(*x))
    {
        g.set_parent(h.elem(x), Some(e));
    }
    let mut inputs = Interface::external_only(xs);
    let mut outputs = Interface::external_only(vec![u]);
    for (itf, src) in [(&mut inputs, &inner.inputs), (&mut outputs, &inner.outputs)] {
        itf.internal
            .extend(src.external_vertices().iter().map(|v| h.v(*v)));
        itf.internal
            .extend(src.strictly_internal().iter().map(|v| h.v(*v)));
    }
    ExtendedCospan {
        carrier: g,
        inputs,
        outputs,
    }
}

/// Both sides of a term equation as a graph rule.
pub fn interpret_rule(r: &TermRule) -> Result<RewriteRule, InterpError> {
    r.check()?;
    Ok(RewriteRule::new(
        r.name.clone(),
        interpret(&r.lhs)?,
        interpret(&r.rhs)?,
    )?)
}
