//! Text format for signatures, terms and rules.
//!
//! ```text
//! type N;
//! op mul : N, N -> N;
//! op two : -> N;
//! term (id[N] * two) ; mul;
//! rule shift: (id[N] * two) ; mul => (id[N] * one) ; shl;
//! ```
//!
//! Vertex types use `*` for tensor, `-o` for the arrow and `I` for the unit.
//! Term operators bind as `;` < `+` < `*`. Comments start with `#` or `//`.

use crate::signature::{ObjectExpr, Signature, VertexType, Word};
use crate::term::{lambda, seq, tensor, Term, TermRule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 15] = [
    "=>", "->", "-o", ";", "+", "*", "(", ")", "[", "]", "{", "}", "|", ",", ":",
];

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = match (raw.find('#'), raw.find("//")) {
            (Some(a), Some(b)) => &raw[..a.min(b)],
            (Some(a), None) | (None, Some(a)) => &raw[..a],
            (None, None) => raw,
        };
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        'scan: while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_alphanumeric() || c == '_' || c == '@' {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: ln + 1,
                    col: start + 1,
                });
                continue;
            }
            for s in SYMBOLS {
                let n = s.chars().count();
                if chars[i..].iter().take(n).copied().eq(s.chars()) {
                    out.push(Token {
                        tok: Tok::Sym(s),
                        line: ln + 1,
                        col: i + 1,
                    });
                    i += n;
                    continue 'scan;
                }
            }
            return Err(ParseError {
                line: ln + 1,
                col: i + 1,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// A parsed file: declarations accumulate into `signature`.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub signature: Signature,
    pub terms: Vec<Term>,
    pub rules: Vec<TermRule>,
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'a mut Signature,
}

const KEYWORDS: [&str; 8] = ["id", "sym", "ev", "lam", "type", "op", "rule", "term"];
const STATEMENT_WORDS: [&str; 4] = ["type", "op", "rule", "term"];

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        };
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn ends_statement(&self) -> bool {
        match self.peek_at(1) {
            None => true,
            Some(Tok::Ident(w)) => STATEMENT_WORDS.contains(&w.as_str()),
            _ => false,
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == w)
    }

    // object := tensor ('-o' object)?
    fn object(&mut self) -> Result<ObjectExpr, ParseError> {
        let lhs = self.tensor_obj()?;
        if self.eat("-o") {
            let rhs = self.object()?;
            return Ok(ObjectExpr::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn tensor_obj(&mut self) -> Result<ObjectExpr, ParseError> {
        let mut parts = vec![self.atom_obj()?];
        while self.eat("*") {
            parts.push(self.atom_obj()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            ObjectExpr::tensor(parts)
        })
    }

    fn atom_obj(&mut self) -> Result<ObjectExpr, ParseError> {
        if self.eat("(") {
            let e = self.object()?;
            self.expect(")")?;
            return Ok(e);
        }
        let name = self.ident()?;
        if name == "I" {
            return Ok(ObjectExpr::Unit);
        }
        if self.sig.base_types.iter().all(|b| b.0 != name) && !self.sig.base_types.is_empty() {
            return Err(self.err(format!("unknown type `{name}`")));
        }
        Ok(ObjectExpr::base(name))
    }

    fn vertex_type(&mut self) -> Result<VertexType, ParseError> {
        let e = self.object()?;
        VertexType::from_expr(&e).map_err(|x| self.err(x.to_string()))
    }

    /// Comma separated vertex types, possibly empty, up to `stop`.
    fn word(&mut self, stop: &[&str]) -> Result<Word, ParseError> {
        let mut w = Vec::new();
        if stop.iter().any(|s| self.is_sym(s)) {
            return Ok(w);
        }
        loop {
            w.push(self.vertex_type()?);
            if !self.eat(",") {
                return Ok(w);
            }
        }
    }

    fn bracket_words(&mut self, n: usize) -> Result<Vec<Word>, ParseError> {
        self.expect("[")?;
        let mut out = Vec::new();
        for i in 0..n {
            out.push(self.word(&["|", "]"])?);
            if i + 1 < n {
                self.expect("|")?;
            }
        }
        self.expect("]")?;
        Ok(out)
    }

    // term := join (';' join)*
    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.join_term()?;
        // a `;` before the end or before a declaration ends the statement
        while self.is_sym(";")
            && !matches!(self.peek_at(1), None | Some(Tok::Ident(_)) if self.ends_statement())
        {
            self.pos += 1;
            let r = self.join_term()?;
            t = seq(t, r);
        }
        Ok(t)
    }

    fn join_term(&mut self) -> Result<Term, ParseError> {
        let l = self.tensor_term()?;
        if self.eat("+") {
            let r = self.join_term()?;
            return Ok(crate::term::join(l, r));
        }
        Ok(l)
    }

    fn tensor_term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom_term()?;
        while self.eat("*") {
            let r = self.atom_term()?;
            t = tensor(t, r);
        }
        Ok(t)
    }

    fn atom_term(&mut self) -> Result<Term, ParseError> {
        if self.eat("(") {
            let t = self.term()?;
            self.expect(")")?;
            return Ok(t);
        }
        let name = self.ident()?;
        match name.as_str() {
            "id" => {
                let w = self.bracket_words(1)?.remove(0);
                Ok(if w.is_empty() {
                    Term::IdUnit
                } else {
                    Term::Id(w)
                })
            }
            "sym" => {
                let mut ws = self.bracket_words(2)?;
                let b = ws.pop().unwrap();
                Ok(Term::Sym(ws.pop().unwrap(), b))
            }
            "ev" => {
                let mut ws = self.bracket_words(2)?;
                let b = ws.pop().unwrap();
                Ok(Term::Ev(ws.pop().unwrap(), b))
            }
            "lam" => {
                let mut ws = self.bracket_words(3)?;
                self.expect("{")?;
                let body = self.term()?;
                self.expect("}")?;
                let res = ws.pop().unwrap();
                let bound = ws.pop().unwrap();
                Ok(lambda(ws.pop().unwrap(), bound, res, body))
            }
            _ => {
                self.pos -= 1;
                let op = self.sig.op(&name).map_err(|e| self.err(e.to_string()))?;
                self.pos += 1;
                Ok(Term::Gen(op))
            }
        }
    }

    fn statement(&mut self, doc: &mut Vec<Stmt>) -> Result<(), ParseError> {
        if self.is_word("type") && matches!(self.peek_at(1), Some(Tok::Ident(_))) {
            self.pos += 1;
            loop {
                let n = self.ident()?;
                if KEYWORDS.contains(&n.as_str()) || n == "I" {
                    return Err(self.err(format!("`{n}` is reserved")));
                }
                self.sig.add_type(n);
                if !self.eat(",") {
                    break;
                }
            }
            return self.expect(";");
        }
        if self.is_word("op") && matches!(self.peek_at(1), Some(Tok::Ident(_))) {
            self.pos += 1;
            let name = self.ident()?;
            if KEYWORDS.contains(&name.as_str()) {
                return Err(self.err(format!("`{name}` is reserved")));
            }
            self.expect(":")?;
            let ins = self.word(&["->"])?;
            self.expect("->")?;
            let outs = self.word(&[";"])?;
            self.expect(";")?;
            if self.sig.op(&name).is_ok() {
                return Err(self.err(format!("operation `{name}` declared twice")));
            }
            self.sig.add_op(name, ins, outs);
            return Ok(());
        }
        if self.is_word("rule")
            && matches!(self.peek_at(1), Some(Tok::Ident(_)))
            && self.peek_at(2) == Some(&Tok::Sym(":"))
        {
            self.pos += 1;
            let name = self.ident()?;
            self.expect(":")?;
            let lhs = self.term()?;
            self.expect("=>")?;
            let rhs = self.term()?;
            self.expect(";")?;
            doc.push(Stmt::Rule(TermRule::new(name, lhs, rhs)));
            return Ok(());
        }
        if self.is_word("term") && !matches!(self.peek_at(1), Some(Tok::Sym(";" | "*" | "+"))) {
            self.pos += 1;
        }
        let t = self.term()?;
        self.expect(";")?;
        doc.push(Stmt::Term(t));
        Ok(())
    }
}

enum Stmt {
    Term(Term),
    Rule(TermRule),
}

/// Parses a document, extending `base` with its declarations.
pub fn parse_document_with(src: &str, base: &Signature) -> Result<Document, ParseError> {
    let mut sig = base.clone();
    let toks = lex(src)?;
    let mut stmts = Vec::new();
    {
        let mut p = Parser {
            toks,
            pos: 0,
            sig: &mut sig,
        };
        while p.peek().is_some() {
            p.statement(&mut stmts)?;
        }
    }
    let mut doc = Document {
        signature: sig,
        ..Default::default()
    };
    for s in stmts {
        match s {
            Stmt::Term(t) => doc.terms.push(t),
            Stmt::Rule(r) => doc.rules.push(r),
        }
    }
    Ok(doc)
}

pub fn parse_document(src: &str) -> Result<Document, ParseError> {
    parse_document_with(src, &Signature::new())
}

/// Parses a single term against a signature.
pub fn parse_term(src: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut sig = sig.clone();
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        sig: &mut sig,
    };
    let t = p.term()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

/// Parses a vertex type such as `N`, `A * B -o C` or `(A -o B) -o C`.
pub fn parse_vertex_type(src: &str) -> Result<VertexType, ParseError> {
    let mut sig = Signature::new();
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        sig: &mut sig,
    };
    let t = p.vertex_type()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}
