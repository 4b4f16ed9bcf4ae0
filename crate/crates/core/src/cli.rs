//! The `egb` command line.
//!
//! Graphs travel as cospan JSON (`.egjson` or `.json`); anything else is read
//! as the text format and its first term (or `--index`) is interpreted.
//! Exit codes: 0 success, 1 domain error, 2 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cospan::{find_cospan_iso, ExtendedCospan};
use crate::ehyp::{to_dot, Elem};
use crate::interp::{interpret, interpret_rule};
use crate::rewrite::{
    apply_rewrite, find_convex_matches, instantiate_schema, schema_anchors, RewriteRule, SchemaId,
};
use crate::saturate::{lift_rule, saturate, SaturationConfig};
use crate::signature::validate_signature;
use crate::syntax::{parse_document, Document};

#[derive(Debug, Parser)]
#[command(
    name = "egb",
    version,
    about = "E-hypergraphs with bindings: interpret, rewrite, saturate"
)]
pub struct Cli {
    /// Print nothing but requested output.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Describe each step on standard error.
    #[arg(long, global = true)]
    pub trace: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate text files (signature, terms, rules) and graph files.
    Check { files: Vec<PathBuf> },
    /// Interpret a term as a cospan.
    Interpret {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Apply one rule or schema at one match.
    Apply {
        graph: PathBuf,
        /// A schema name such as `beta`, or a rule name from `--rules`.
        #[arg(long)]
        rule: String,
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Which match (or schema anchor) to use, in enumeration order.
        #[arg(long = "match", default_value_t = 0)]
        which: usize,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Saturate a graph with lifted rules and the schemas.
    Saturate {
        graph: PathBuf,
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long = "max-iters", default_value_t = 16)]
        max_iters: usize,
        #[arg(long = "max-elems", default_value_t = 2000)]
        max_elems: usize,
        /// Comma-separated schema names; defaults to the structural ones.
        #[arg(long, value_delimiter = ',')]
        schemas: Option<Vec<String>>,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decide whether two graphs are isomorphic as cospans.
    Iso { left: PathBuf, right: PathBuf },
    /// Convert a graph to JSON or DOT.
    Export {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        to: Format,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

/// A failure that is not a usage error.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct DomainError(String);

fn domain(e: impl std::fmt::Display) -> DomainError {
    DomainError(e.to_string())
}

fn read(path: &Path) -> Result<String, DomainError> {
    fs::read_to_string(path).map_err(|e| DomainError(format!("{}: {e}", path.display())))
}

fn is_json(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("json" | "egjson")
    )
}

fn document(path: &Path) -> Result<Document, DomainError> {
    parse_document(&read(path)?).map_err(|e| DomainError(format!("{}:{e}", path.display())))
}

fn load_graph(path: &Path, index: usize) -> Result<ExtendedCospan, DomainError> {
    if is_json(path) {
        let js = serde_json::from_str(&read(path)?).map_err(domain)?;
        return ExtendedCospan::from_json(&js).map_err(domain);
    }
    let doc = document(path)?;
    let t = doc
        .terms
        .get(index)
        .ok_or_else(|| DomainError(format!("{}: no term #{index}", path.display())))?;
    interpret(t).map_err(domain)
}

fn render(c: &ExtendedCospan, f: Format) -> String {
    let c = c.canonical();
    match f {
        Format::Json => c.to_json_string() + "\n",
        Format::Dot => to_dot(&c.carrier),
    }
}

fn emit(out: &mut dyn Write, text: &str, to: Option<&Path>) -> Result<(), DomainError> {
    match to {
        Some(p) => fs::write(p, text).map_err(|e| DomainError(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(domain),
    }
}

struct Ctx<'a> {
    quiet: bool,
    trace: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn note(&mut self, msg: &str) {
        if !self.quiet {
            let _ = writeln!(self.err, "{msg}");
        }
    }

    fn trace(&mut self, msg: &str) {
        if self.trace {
            let _ = writeln!(self.err, "{msg}");
        }
    }
}

fn check(cx: &mut Ctx, files: &[PathBuf]) -> Result<(), DomainError> {
    let mut problems = Vec::new();
    for f in files {
        if is_json(f) {
            let c = load_graph(f, 0)?;
            problems.extend(c.check().iter().map(|v| format!("{}: {v}", f.display())));
            continue;
        }
        let doc = document(f)?;
        problems.extend(
            validate_signature(&doc.signature)
                .iter()
                .map(|e| format!("{}: {e}", f.display())),
        );
        for (i, t) in doc.terms.iter().enumerate() {
            match interpret(t) {
                Ok(c) => problems.extend(
                    c.check()
                        .iter()
                        .map(|v| format!("{}: term #{i}: {v}", f.display())),
                ),
                Err(e) => problems.push(format!("{}: term #{i}: {e}", f.display())),
            }
        }
        for r in &doc.rules {
            if let Err(e) = interpret_rule(r) {
                problems.push(format!("{}: rule {}: {e}", f.display(), r.name));
            }
        }
        cx.trace(&format!(
            "{}: {} terms, {} rules",
            f.display(),
            doc.terms.len(),
            doc.rules.len()
        ));
    }
    if problems.is_empty() {
        let _ = writeln!(cx.out, "ok");
        Ok(())
    } else {
        Err(DomainError(problems.join("\n")))
    }
}

fn find_rule(name: &str, rules: Option<&Path>) -> Result<Option<RewriteRule>, DomainError> {
    let Some(path) = rules else { return Ok(None) };
    let doc = document(path)?;
    match doc.rules.iter().find(|r| r.name == name) {
        Some(r) => Ok(Some(interpret_rule(r).map_err(domain)?)),
        None => Ok(None),
    }
}

fn anchor_text(anchor: &[Elem]) -> String {
    anchor
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn apply(
    cx: &mut Ctx,
    g: &ExtendedCospan,
    rule: &str,
    rules: Option<&Path>,
    which: usize,
) -> Result<ExtendedCospan, DomainError> {
    if let Some(r) = find_rule(rule, rules)? {
        let ms = find_convex_matches(&r, g);
        let m = ms
            .get(which)
            .ok_or_else(|| DomainError(format!("rule `{rule}` has {} matches", ms.len())))?;
        cx.trace(&format!("{rule} at match {which} of {}", ms.len()));
        return Ok(apply_rewrite(g, &r, m).map_err(domain)?.result);
    }
    let s: SchemaId = rule
        .parse()
        .map_err(|_| DomainError(format!("no rule or schema named `{rule}`")))?;
    let anchors = schema_anchors(s, g);
    let anchor = anchors
        .get(which)
        .ok_or_else(|| DomainError(format!("{s} has {} anchors", anchors.len())))?;
    cx.trace(&format!("{s} at [{}]", anchor_text(anchor)));
    let (r, m) = instantiate_schema(s, g, anchor).map_err(domain)?;
    Ok(apply_rewrite(g, &r, &m).map_err(domain)?.result)
}

fn run_command(cx: &mut Ctx, cmd: Command) -> Result<(), DomainError> {
    match cmd {
        Command::Check { files } => check(cx, &files),
        Command::Interpret {
            file,
            index,
            out,
            output,
        } => {
            let c = load_graph(&file, index)?;
            emit(cx.out, &render(&c, out), output.as_deref())
        }
        Command::Apply {
            graph,
            rule,
            rules,
            which,
            out,
            output,
        } => {
            let g = load_graph(&graph, 0)?;
            let r = apply(cx, &g, &rule, rules.as_deref(), which)?;
            emit(cx.out, &render(&r, out), output.as_deref())
        }
        Command::Saturate {
            graph,
            rules,
            max_iters,
            max_elems,
            schemas,
            out,
            output,
            report,
        } => {
            let g = load_graph(&graph, 0)?;
            let mut cfg = SaturationConfig {
                max_iterations: max_iters,
                max_elements: max_elems,
                ..Default::default()
            };
            if let Some(path) = &rules {
                for r in &document(path)?.rules {
                    cfg.rules.push(lift_rule(r).map_err(domain)?);
                }
            }
            if let Some(names) = schemas {
                cfg.schemas = names
                    .iter()
                    .map(|n| n.parse::<SchemaId>().map_err(DomainError))
                    .collect::<Result<_, _>>()?;
            }
            let (result, rep) = saturate(&g, &cfg);
            for step in &rep.trace {
                cx.trace(&serde_json::to_string(step).map_err(domain)?);
            }
            cx.note(&format!(
                "{} iterations, {} elements created, fixpoint: {}",
                rep.iterations, rep.elements_created, rep.fixpoint
            ));
            if let Some(p) = report {
                let text = serde_json::to_string_pretty(&rep).map_err(domain)? + "\n";
                fs::write(&p, text).map_err(|e| DomainError(format!("{}: {e}", p.display())))?;
            }
            emit(cx.out, &render(&result, out), output.as_deref())
        }
        Command::Iso { left, right } => {
            let (a, b) = (load_graph(&left, 0)?, load_graph(&right, 0)?);
            if find_cospan_iso(&a, &b).is_some() {
                let _ = writeln!(cx.out, "isomorphic");
                Ok(())
            } else {
                Err(DomainError("not isomorphic".into()))
            }
        }
        Command::Export { graph, to, output } => {
            let c = load_graph(&graph, 0)?;
            emit(cx.out, &render(&c, to), output.as_deref())
        }
    }
}

/// Runs the command line with explicit streams and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // help and version requests are not errors
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let mut cx = Ctx {
        quiet: cli.quiet,
        trace: cli.trace,
        out,
        err,
    };
    match run_command(&mut cx, cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(cx.err, "error: {e}");
            1
        }
    }
}

pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}
