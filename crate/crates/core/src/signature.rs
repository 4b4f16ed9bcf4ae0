//! Monoidal signatures: base types, object expressions with the arrow
//! constructor, vertex types and typed generators.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A generating object of the signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseType(pub String);

impl BaseType {
    pub fn new(name: impl Into<String>) -> Self {
        BaseType(name.into())
    }
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Object expressions in strict monoidal normal form.
///
/// `Tensor` children are never `Unit` or `Tensor`, and a `Tensor` always has at
/// least two children. Use [`ObjectExpr::tensor`] to build tensors so the
/// normal form is maintained.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectExpr {
    Unit,
    Base(BaseType),
    Tensor(Vec<ObjectExpr>),
    Arrow(Box<ObjectExpr>, Box<ObjectExpr>),
}

impl ObjectExpr {
    pub fn base(name: impl Into<String>) -> Self {
        ObjectExpr::Base(BaseType::new(name))
    }

    pub fn arrow(from: ObjectExpr, to: ObjectExpr) -> Self {
        ObjectExpr::Arrow(Box::new(from), Box::new(to))
    }

    /// Tensor of the given factors, flattened and with units dropped.
    pub fn tensor(parts: impl IntoIterator<Item = ObjectExpr>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                ObjectExpr::Unit => {}
                ObjectExpr::Tensor(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => ObjectExpr::Unit,
            1 => flat.pop().unwrap(),
            _ => ObjectExpr::Tensor(flat),
        }
    }

    /// Re-normalizes an expression that may have been built by hand.
    pub fn normalized(&self) -> ObjectExpr {
        match self {
            ObjectExpr::Unit => ObjectExpr::Unit,
            ObjectExpr::Base(b) => ObjectExpr::Base(b.clone()),
            ObjectExpr::Tensor(parts) => ObjectExpr::tensor(parts.iter().map(|p| p.normalized())),
            ObjectExpr::Arrow(a, b) => ObjectExpr::arrow(a.normalized(), b.normalized()),
        }
    }

    fn base_types(&self, out: &mut BTreeSet<BaseType>) {
        match self {
            ObjectExpr::Unit => {}
            ObjectExpr::Base(b) => {
                out.insert(b.clone());
            }
            ObjectExpr::Tensor(parts) => parts.iter().for_each(|p| p.base_types(out)),
            ObjectExpr::Arrow(a, b) => {
                a.base_types(out);
                b.base_types(out);
            }
        }
    }
}

impl fmt::Display for ObjectExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectExpr::Unit => f.write_str("I"),
            ObjectExpr::Base(b) => write!(f, "{b}"),
            ObjectExpr::Tensor(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    match p {
                        ObjectExpr::Arrow(..) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            ObjectExpr::Arrow(a, b) => {
                match **a {
                    ObjectExpr::Arrow(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, " -o {b}")
            }
        }
    }
}

/// Label of a single vertex: never the unit and never a tensor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexType {
    Base(BaseType),
    Arrow(ObjectExpr, ObjectExpr),
}

/// A word of vertex types: the flattened form of an object.
pub type Word = Vec<VertexType>;

impl VertexType {
    pub fn base(name: impl Into<String>) -> Self {
        VertexType::Base(BaseType::new(name))
    }

    /// The arrow `fold(from) -o fold(to)`.
    pub fn arrow_of_words(from: &[VertexType], to: &[VertexType]) -> Self {
        VertexType::Arrow(fold_word(from), fold_word(to))
    }

    pub fn to_expr(&self) -> ObjectExpr {
        match self {
            VertexType::Base(b) => ObjectExpr::Base(b.clone()),
            VertexType::Arrow(a, b) => ObjectExpr::arrow(a.clone(), b.clone()),
        }
    }

    /// Converts an object expression that denotes a single wire.
    pub fn from_expr(e: &ObjectExpr) -> Result<Self, SignatureError> {
        match e.normalized() {
            ObjectExpr::Base(b) => Ok(VertexType::Base(b)),
            ObjectExpr::Arrow(a, b) => Ok(VertexType::Arrow(*a, *b)),
            other => Err(SignatureError::NotAVertexType(other.to_string())),
        }
    }

    fn base_types(&self, out: &mut BTreeSet<BaseType>) {
        self.to_expr().base_types(out)
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Writes a word as a comma separated list.
pub fn display_word(w: &[VertexType]) -> String {
    w.iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Flattens an object into the word of its wires.
pub fn word_of(expr: &ObjectExpr) -> Word {
    match expr {
        ObjectExpr::Unit => Vec::new(),
        ObjectExpr::Base(b) => vec![VertexType::Base(b.clone())],
        ObjectExpr::Arrow(a, b) => vec![VertexType::Arrow(a.normalized(), b.normalized())],
        ObjectExpr::Tensor(parts) => parts.iter().flat_map(word_of).collect(),
    }
}

/// Inverse of [`word_of`] on normal forms.
pub fn fold_word(w: &[VertexType]) -> ObjectExpr {
    ObjectExpr::tensor(w.iter().map(VertexType::to_expr))
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("`{0}` is not a vertex type (vertices carry base or arrow types)")]
    NotAVertexType(String),
    #[error("duplicate base type `{0}`")]
    DuplicateType(String),
    #[error("duplicate operation `{0}`")]
    DuplicateOp(String),
    #[error("operation `{op}` uses unregistered base type `{ty}`")]
    UnknownType { op: String, ty: String },
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
}

/// A typed generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpSymbol {
    pub name: String,
    pub inputs: Word,
    pub outputs: Word,
}

impl OpSymbol {
    pub fn new(name: impl Into<String>, inputs: Word, outputs: Word) -> Self {
        OpSymbol {
            name: name.into(),
            inputs,
            outputs,
        }
    }

    /// The reserved application symbol `@[A|B]` used to interpret `ev[A|B]`.
    pub fn application(arg: &[VertexType], res: &[VertexType]) -> Self {
        let mut inputs = vec![VertexType::arrow_of_words(arg, res)];
        inputs.extend_from_slice(arg);
        OpSymbol {
            name: format!("@[{}|{}]", display_word(arg), display_word(res)),
            inputs,
            outputs: res.to_vec(),
        }
    }

    pub fn is_application(&self) -> bool {
        self.name.starts_with("@[")
    }
}

impl fmt::Display for OpSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} : {} -> {}",
            self.name,
            display_word(&self.inputs),
            display_word(&self.outputs)
        )
    }
}

/// Shared handle to a generator; edges and terms hold these.
pub type Op = Arc<OpSymbol>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub base_types: Vec<BaseType>,
    pub ops: Vec<Op>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_type(&mut self, name: impl Into<String>) -> &mut Self {
        self.base_types.push(BaseType::new(name));
        self
    }

    pub fn add_op(&mut self, name: impl Into<String>, inputs: Word, outputs: Word) -> Op {
        let op = Arc::new(OpSymbol::new(name, inputs, outputs));
        self.ops.push(op.clone());
        op
    }

    pub fn op(&self, name: &str) -> Result<Op, SignatureError> {
        self.ops
            .iter()
            .find(|o| o.name == name)
            .cloned()
            .ok_or_else(|| SignatureError::UnknownOp(name.to_string()))
    }

    pub fn has_type(&self, name: &str) -> bool {
        self.base_types.iter().any(|b| b.0 == name)
    }
}

/// Reports duplicate names and unregistered base types. An empty list means
/// the signature is well formed.
pub fn validate_signature(sig: &Signature) -> Vec<SignatureError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for b in &sig.base_types {
        if !seen.insert(b.clone()) {
            out.push(SignatureError::DuplicateType(b.0.clone()));
        }
    }
    let mut names = BTreeSet::new();
    for op in &sig.ops {
        if !names.insert(op.name.clone()) {
            out.push(SignatureError::DuplicateOp(op.name.clone()));
        }
        let mut used = BTreeSet::new();
        op.inputs
            .iter()
            .chain(&op.outputs)
            .for_each(|t| t.base_types(&mut used));
        for ty in used {
            if !seen.contains(&ty) {
                out.push(SignatureError::UnknownType {
                    op: op.name.clone(),
                    ty: ty.0,
                });
            }
        }
    }
    out
}
