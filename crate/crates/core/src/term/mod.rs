//! Closed terms with join: the syntax side of the correspondence.
//!
//! Terms are typed by pairs of words. Rewriting modulo the symmetric monoidal
//! laws lives in [`rewrite`]; it is deliberately naive and serves as the
//! reference that the graph engine is tested against.

pub mod rewrite;

use std::fmt;

use crate::signature::{display_word, fold_word, Op, VertexType, Word};

pub use rewrite::{
    smc_closure, term_rewrite_step, term_rewrite_step_capped, Closure, RewriteResults,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Gen(Op),
    IdUnit,
    Id(Word),
    Sym(Word, Word),
    Seq(Box<Term>, Box<Term>),
    Tensor(Box<Term>, Box<Term>),
    /// `ev[A|B] : [A -o B] ++ A -> B`
    Ev(Word, Word),
    /// `lam[X|A|B]{ body }` with `body : X ++ A -> B`; has type `X -> [A -o B]`.
    Lambda {
        ctx: Word,
        bound: Word,
        res: Word,
        body: Box<Term>,
    },
    Join(Box<Term>, Box<Term>),
}

/// A typed equation read left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermRule {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
}

impl TermRule {
    pub fn new(name: impl Into<String>, lhs: Term, rhs: Term) -> Self {
        TermRule {
            name: name.into(),
            lhs,
            rhs,
        }
    }

    /// Both sides must have the same type.
    pub fn check(&self) -> Result<(Word, Word), TypeError> {
        let l = type_of(&self.lhs)?;
        let r = type_of(&self.rhs)?;
        if l != r {
            return Err(TypeError {
                path: vec![],
                message: format!(
                    "rule `{}` sides differ: [{}] -> [{}] vs [{}] -> [{}]",
                    self.name,
                    display_word(&l.0),
                    display_word(&l.1),
                    display_word(&r.0),
                    display_word(&r.1)
                ),
            });
        }
        Ok(l)
    }

    pub fn reversed(&self) -> TermRule {
        TermRule {
            name: format!("{}~rev", self.name),
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
        }
    }
}

/// A type error, located by the child indices leading to the offending node.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("type error at {path:?}: {message}")]
pub struct TypeError {
    pub path: Vec<usize>,
    pub message: String,
}

impl TypeError {
    fn at(mut self, i: usize) -> Self {
        self.path.insert(0, i);
        self
    }
}

pub fn seq(a: Term, b: Term) -> Term {
    Term::Seq(Box::new(a), Box::new(b))
}

pub fn tensor(a: Term, b: Term) -> Term {
    Term::Tensor(Box::new(a), Box::new(b))
}

pub fn join(a: Term, b: Term) -> Term {
    Term::Join(Box::new(a), Box::new(b))
}

pub fn lambda(ctx: Word, bound: Word, res: Word, body: Term) -> Term {
    Term::Lambda {
        ctx,
        bound,
        res,
        body: Box::new(body),
    }
}

/// Right-nested join of a non-empty list.
pub fn join_all(mut terms: Vec<Term>) -> Option<Term> {
    let mut acc = terms.pop()?;
    while let Some(t) = terms.pop() {
        acc = join(t, acc);
    }
    Some(acc)
}

/// Input and output words of a term.
pub fn type_of(t: &Term) -> Result<(Word, Word), TypeError> {
    match t {
        Term::Gen(op) => Ok((op.inputs.clone(), op.outputs.clone())),
        Term::IdUnit => Ok((vec![], vec![])),
        Term::Id(w) => Ok((w.clone(), w.clone())),
        Term::Sym(a, b) => {
            let ab = [a.as_slice(), b.as_slice()].concat();
            let ba = [b.as_slice(), a.as_slice()].concat();
            Ok((ab, ba))
        }
        Term::Seq(f, g) => {
            let (fi, fo) = type_of(f).map_err(|e| e.at(0))?;
            let (gi, go) = type_of(g).map_err(|e| e.at(1))?;
            if fo != gi {
                return Err(TypeError {
                    path: vec![],
                    message: format!(
                        "composition mismatch: [{}] vs [{}]",
                        display_word(&fo),
                        display_word(&gi)
                    ),
                });
            }
            Ok((fi, go))
        }
        Term::Tensor(f, g) => {
            let (mut fi, mut fo) = type_of(f).map_err(|e| e.at(0))?;
            let (gi, go) = type_of(g).map_err(|e| e.at(1))?;
            fi.extend(gi);
            fo.extend(go);
            Ok((fi, fo))
        }
        Term::Ev(a, b) => {
            let mut inputs = vec![VertexType::arrow_of_words(a, b)];
            inputs.extend(a.iter().cloned());
            Ok((inputs, b.clone()))
        }
        Term::Lambda {
            ctx,
            bound,
            res,
            body,
        } => {
            let (bi, bo) = type_of(body).map_err(|e| e.at(0))?;
            let expect_in = [ctx.as_slice(), bound.as_slice()].concat();
            if bi != expect_in || &bo != res {
                return Err(TypeError {
                    path: vec![],
                    message: format!(
                        "lambda body has type [{}] -> [{}], expected [{}] -> [{}]",
                        display_word(&bi),
                        display_word(&bo),
                        display_word(&expect_in),
                        display_word(res)
                    ),
                });
            }
            Ok((
                ctx.clone(),
                vec![VertexType::Arrow(fold_word(bound), fold_word(res))],
            ))
        }
        Term::Join(f, g) => {
            let ft = type_of(f).map_err(|e| e.at(0))?;
            let gt = type_of(g).map_err(|e| e.at(1))?;
            if ft != gt {
                return Err(TypeError {
                    path: vec![],
                    message: format!(
                        "join sides differ: [{}] -> [{}] vs [{}] -> [{}]",
                        display_word(&ft.0),
                        display_word(&ft.1),
                        display_word(&gt.0),
                        display_word(&gt.1)
                    ),
                });
            }
            Ok(ft)
        }
    }
}

impl Term {
    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Gen(_) | Term::IdUnit | Term::Id(_) | Term::Sym(..) | Term::Ev(..) => 1,
            Term::Seq(a, b) | Term::Tensor(a, b) | Term::Join(a, b) => 1 + a.size() + b.size(),
            Term::Lambda { body, .. } => 1 + body.size(),
        }
    }

    pub fn join_count(&self) -> usize {
        match self {
            Term::Seq(a, b) | Term::Tensor(a, b) => a.join_count() + b.join_count(),
            Term::Join(a, b) => 1 + a.join_count() + b.join_count(),
            Term::Lambda { body, .. } => body.join_count(),
            _ => 0,
        }
    }

    pub fn is_join_free(&self) -> bool {
        self.join_count() == 0
    }
}

/// Distributes joins outwards, returning join-free summands whose join equals
/// `t`. Syntactic duplicates are dropped; the first occurrence wins.
pub fn normal_form_sum(t: &Term) -> Vec<Term> {
    let raw = distribute(t);
    let mut out: Vec<Term> = Vec::with_capacity(raw.len());
    for s in raw {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn distribute(t: &Term) -> Vec<Term> {
    match t {
        Term::Seq(a, b) => product(&distribute(a), &distribute(b), seq),
        Term::Tensor(a, b) => product(&distribute(a), &distribute(b), tensor),
        Term::Join(a, b) => {
            let mut v = distribute(a);
            v.extend(distribute(b));
            v
        }
        Term::Lambda {
            ctx,
            bound,
            res,
            body,
        } => distribute(body)
            .into_iter()
            .map(|b| lambda(ctx.clone(), bound.clone(), res.clone(), b))
            .collect(),
        other => vec![other.clone()],
    }
}

fn product(xs: &[Term], ys: &[Term], mk: fn(Term, Term) -> Term) -> Vec<Term> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push(mk(x.clone(), y.clone()));
        }
    }
    out
}

// Precedence for printing: `;` (0) < `+` (1) < `*` (2).
fn prec(t: &Term) -> u8 {
    match t {
        Term::Seq(..) => 0,
        Term::Join(..) => 1,
        Term::Tensor(..) => 2,
        _ => 3,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
    if prec(t) < min {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Gen(op) => f.write_str(&op.name),
            Term::IdUnit => f.write_str("id[]"),
            Term::Id(w) => write!(f, "id[{}]", display_word(w)),
            Term::Sym(a, b) => write!(f, "sym[{}|{}]", display_word(a), display_word(b)),
            Term::Ev(a, b) => write!(f, "ev[{}|{}]", display_word(a), display_word(b)),
            Term::Lambda {
                ctx,
                bound,
                res,
                body,
            } => write!(
                f,
                "lam[{}|{}|{}]{{ {} }}",
                display_word(ctx),
                display_word(bound),
                display_word(res),
                body
            ),
            // `;` is left associative, `+` right associative, `*` left associative.
            Term::Seq(a, b) => {
                write_child(f, a, 0)?;
                f.write_str(" ; ")?;
                write_child(f, b, 1)
            }
            Term::Join(a, b) => {
                write_child(f, a, 2)?;
                f.write_str(" + ")?;
                write_child(f, b, 1)
            }
            Term::Tensor(a, b) => {
                write_child(f, a, 2)?;
                f.write_str(" * ")?;
                write_child(f, b, 3)
            }
        }
    }
}
