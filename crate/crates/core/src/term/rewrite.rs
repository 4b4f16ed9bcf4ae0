//! Term rewriting modulo the symmetric monoidal laws.
//!
//! Equality modulo the laws is approximated by a bounded breadth-first closure
//! under the axioms read in both directions. This is the slow reference
//! implementation; the hypergraph engine absorbs the same laws structurally.

use std::collections::HashSet;

use super::{join_all, normal_form_sum, seq, tensor, type_of, Term, TermRule};
use crate::signature::Word;

/// Upper bound on the number of presentations kept per closure.
pub const DEFAULT_CLOSURE_CAP: usize = 4000;

#[derive(Debug, Clone)]
pub struct Closure {
    /// Presentations in breadth-first order; the first one is the input.
    pub terms: Vec<Term>,
    /// Set when the size cap cut the enumeration short.
    pub bound_exhausted: bool,
}

impl Closure {
    pub fn contains(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }
}

/// All presentations reachable from `t` with at most `depth` axiom steps.
pub fn smc_closure(t: &Term, depth: usize, cap: usize) -> Closure {
    let mut seen: HashSet<Term> = HashSet::new();
    let mut terms = vec![t.clone()];
    seen.insert(t.clone());
    let mut frontier = vec![t.clone()];
    let mut exhausted = false;
    'outer: for _ in 0..depth {
        let mut next = Vec::new();
        for cur in &frontier {
            let mut nbrs = Vec::new();
            neighbours(cur, false, &mut nbrs);
            for n in nbrs {
                if seen.contains(&n) {
                    continue;
                }
                if terms.len() >= cap {
                    exhausted = true;
                    break 'outer;
                }
                seen.insert(n.clone());
                terms.push(n.clone());
                next.push(n);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Closure {
        terms,
        bound_exhausted: exhausted,
    }
}

fn ty(t: &Term) -> (Word, Word) {
    type_of(t).expect("closure only visits well-typed terms")
}

fn is_identity(t: &Term) -> bool {
    matches!(t, Term::IdUnit | Term::Id(_))
}

fn is_unit_identity(t: &Term) -> bool {
    match t {
        Term::IdUnit => true,
        Term::Id(w) => w.is_empty(),
        _ => false,
    }
}

/// One-step axiom applications at every position of `t`.
fn neighbours(t: &Term, under_tensor: bool, out: &mut Vec<Term>) {
    local_moves(t, under_tensor, out);
    match t {
        Term::Seq(a, b) => {
            let mut xs = Vec::new();
            neighbours(a, false, &mut xs);
            out.extend(xs.into_iter().map(|x| seq(x, (**b).clone())));
            let mut ys = Vec::new();
            neighbours(b, false, &mut ys);
            out.extend(ys.into_iter().map(|y| seq((**a).clone(), y)));
        }
        Term::Tensor(a, b) => {
            let mut xs = Vec::new();
            neighbours(a, true, &mut xs);
            out.extend(xs.into_iter().map(|x| tensor(x, (**b).clone())));
            let mut ys = Vec::new();
            neighbours(b, true, &mut ys);
            out.extend(ys.into_iter().map(|y| tensor((**a).clone(), y)));
        }
        Term::Join(a, b) => {
            let mut xs = Vec::new();
            neighbours(a, false, &mut xs);
            out.extend(xs.into_iter().map(|x| super::join(x, (**b).clone())));
            let mut ys = Vec::new();
            neighbours(b, false, &mut ys);
            out.extend(ys.into_iter().map(|y| super::join((**a).clone(), y)));
        }
        Term::Lambda {
            ctx,
            bound,
            res,
            body,
        } => {
            let mut xs = Vec::new();
            neighbours(body, false, &mut xs);
            out.extend(
                xs.into_iter()
                    .map(|x| super::lambda(ctx.clone(), bound.clone(), res.clone(), x)),
            );
        }
        _ => {}
    }
}

fn local_moves(t: &Term, under_tensor: bool, out: &mut Vec<Term>) {
    match t {
        Term::Seq(a, b) => {
            // associativity
            if let Term::Seq(x, y) = &**a {
                out.push(seq((**x).clone(), seq((**y).clone(), (**b).clone())));
            }
            if let Term::Seq(x, y) = &**b {
                out.push(seq(seq((**a).clone(), (**x).clone()), (**y).clone()));
            }
            // units
            if is_identity(a) {
                out.push((**b).clone());
            }
            if is_identity(b) {
                out.push((**a).clone());
            }
            // interchange, left to right
            if let (Term::Tensor(p, q), Term::Tensor(r, s)) = (&**a, &**b) {
                if ty(p).1 == ty(r).0 {
                    out.push(tensor(
                        seq((**p).clone(), (**r).clone()),
                        seq((**q).clone(), (**s).clone()),
                    ));
                }
            }
            // symmetry naturality, both directions
            if let (Term::Tensor(p, q), Term::Sym(bw, dw)) = (&**a, &**b) {
                let (pa, pb) = ty(p);
                let (qc, qd) = ty(q);
                if &pb == bw && &qd == dw {
                    out.push(seq(Term::Sym(pa, qc), tensor((**q).clone(), (**p).clone())));
                }
            }
            if let (Term::Sym(aw, cw), Term::Tensor(q, p)) = (&**a, &**b) {
                let (qc, qd) = ty(q);
                let (pa, pb) = ty(p);
                if &qc == cw && &pa == aw {
                    out.push(seq(tensor((**p).clone(), (**q).clone()), Term::Sym(pb, qd)));
                }
            }
            // involution
            if let (Term::Sym(x, y), Term::Sym(y2, x2)) = (&**a, &**b) {
                if x == x2 && y == y2 {
                    out.push(Term::Id([x.as_slice(), y.as_slice()].concat()));
                }
            }
            // hexagons, folding direction
            if let (Term::Tensor(l1, r1), Term::Tensor(l2, r2)) = (&**a, &**b) {
                if let (Term::Id(aw), Term::Sym(bw, cw), Term::Sym(aw2, cw2), Term::Id(bw2)) =
                    (&**l1, &**r1, &**l2, &**r2)
                {
                    if aw == aw2 && bw == bw2 && cw == cw2 && !aw.is_empty() && !bw.is_empty() {
                        out.push(Term::Sym(
                            [aw.as_slice(), bw.as_slice()].concat(),
                            cw.clone(),
                        ));
                    }
                }
                if let (Term::Sym(aw, bw), Term::Id(cw), Term::Id(bw2), Term::Sym(aw2, cw2)) =
                    (&**l1, &**r1, &**l2, &**r2)
                {
                    if aw == aw2 && bw == bw2 && cw == cw2 && !bw.is_empty() && !cw.is_empty() {
                        out.push(Term::Sym(
                            aw.clone(),
                            [bw.as_slice(), cw.as_slice()].concat(),
                        ));
                    }
                }
            }
        }
        Term::Tensor(a, b) => {
            if let Term::Tensor(x, y) = &**a {
                out.push(tensor((**x).clone(), tensor((**y).clone(), (**b).clone())));
            }
            if let Term::Tensor(x, y) = &**b {
                out.push(tensor(tensor((**a).clone(), (**x).clone()), (**y).clone()));
            }
            if is_unit_identity(a) {
                out.push((**b).clone());
            }
            if is_unit_identity(b) {
                out.push((**a).clone());
            }
            if let (Term::Id(x), Term::Id(y)) = (&**a, &**b) {
                out.push(Term::Id([x.as_slice(), y.as_slice()].concat()));
            }
            // interchange, right to left
            if let (Term::Seq(p, r), Term::Seq(q, s)) = (&**a, &**b) {
                out.push(seq(
                    tensor((**p).clone(), (**q).clone()),
                    tensor((**r).clone(), (**s).clone()),
                ));
            }
        }
        Term::Id(w) => {
            if w.is_empty() {
                out.push(Term::IdUnit);
            }
            for k in 1..w.len() {
                out.push(tensor(Term::Id(w[..k].to_vec()), Term::Id(w[k..].to_vec())));
                out.push(seq(
                    Term::Sym(w[..k].to_vec(), w[k..].to_vec()),
                    Term::Sym(w[k..].to_vec(), w[..k].to_vec()),
                ));
            }
        }
        Term::IdUnit => out.push(Term::Id(vec![])),
        Term::Sym(a, b) => {
            if a.is_empty() || b.is_empty() {
                out.push(Term::Id([a.as_slice(), b.as_slice()].concat()));
            }
            for k in 1..a.len() {
                let (x, y) = (a[..k].to_vec(), a[k..].to_vec());
                out.push(seq(
                    tensor(Term::Id(x.clone()), Term::Sym(y.clone(), b.clone())),
                    tensor(Term::Sym(x, b.clone()), Term::Id(y)),
                ));
            }
            for k in 1..b.len() {
                let (y, z) = (b[..k].to_vec(), b[k..].to_vec());
                out.push(seq(
                    tensor(Term::Sym(a.clone(), y.clone()), Term::Id(z.clone())),
                    tensor(Term::Id(y), Term::Sym(a.clone(), z)),
                ));
            }
        }
        _ => {}
    }
    // unit introduction, only where interchange can use it
    if under_tensor && !is_identity(t) {
        let (i, o) = ty(t);
        // an empty side gets the unit so that interchange can slide past it
        out.push(seq(
            if i.is_empty() {
                Term::IdUnit
            } else {
                Term::Id(i)
            },
            t.clone(),
        ));
        out.push(seq(
            t.clone(),
            if o.is_empty() {
                Term::IdUnit
            } else {
                Term::Id(o)
            },
        ));
    }
}

/// Replaces each syntactic occurrence of `pat` in `t` by `rep`, one at a time.
pub fn replace_occurrences(t: &Term, pat: &Term, rep: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if t == pat {
        out.push(rep.clone());
    }
    match t {
        Term::Seq(a, b) | Term::Tensor(a, b) | Term::Join(a, b) => {
            let mk = |x: Term, y: Term| match t {
                Term::Seq(..) => seq(x, y),
                Term::Tensor(..) => tensor(x, y),
                _ => super::join(x, y),
            };
            for x in replace_occurrences(a, pat, rep) {
                out.push(mk(x, (**b).clone()));
            }
            for y in replace_occurrences(b, pat, rep) {
                out.push(mk((**a).clone(), y));
            }
        }
        Term::Lambda {
            ctx,
            bound,
            res,
            body,
        } => {
            for x in replace_occurrences(body, pat, rep) {
                out.push(super::lambda(ctx.clone(), bound.clone(), res.clone(), x));
            }
        }
        _ => {}
    }
    out
}

#[derive(Debug, Clone)]
pub struct RewriteResults {
    pub terms: Vec<Term>,
    /// Some closure hit its size cap; `terms` is then an under-approximation.
    pub bound_exhausted: bool,
}

/// All `g` with `f` rewriting to `g` by `rule`, searching presentations of
/// each summand up to `depth_bound` axiom steps.
pub fn term_rewrite_step(f: &Term, rule: &TermRule, depth_bound: usize) -> RewriteResults {
    term_rewrite_step_capped(f, rule, depth_bound, DEFAULT_CLOSURE_CAP)
}

pub fn term_rewrite_step_capped(
    f: &Term,
    rule: &TermRule,
    depth_bound: usize,
    cap: usize,
) -> RewriteResults {
    let summands = normal_form_sum(f);
    let mut raw: Vec<Term> = Vec::new();
    let mut exhausted = false;
    for (i, s) in summands.iter().enumerate() {
        let closure = smc_closure(s, depth_bound, cap);
        exhausted |= closure.bound_exhausted;
        let mut local: Vec<Term> = Vec::new();
        for p in &closure.terms {
            for r in replace_occurrences(p, &rule.lhs, &rule.rhs) {
                if !local.contains(&r) {
                    local.push(r);
                }
            }
        }
        for r in local {
            let mut parts = summands.clone();
            parts[i] = r;
            let g = join_all(parts).expect("normal form is non-empty");
            if !raw.contains(&g) {
                raw.push(g);
            }
        }
    }
    // Collapse results that are equal modulo the laws within the same bound.
    let mut terms: Vec<Term> = Vec::new();
    let mut closures: Vec<Closure> = Vec::new();
    for g in raw {
        if closures.iter().any(|c| c.contains(&g)) {
            continue;
        }
        let c = smc_closure(&g, depth_bound, cap);
        exhausted |= c.bound_exhausted;
        if terms.iter().any(|t| c.contains(t)) {
            continue;
        }
        closures.push(c);
        terms.push(g);
    }
    RewriteResults {
        terms,
        bound_exhausted: exhausted,
    }
}
