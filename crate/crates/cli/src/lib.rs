//! The file-oriented driver behind the `idxcheck` binary: parse a `.idx`
//! file, typecheck its definitions in order, and report results. Separated
//! from `main` so the behavior (including exit-code classification) is
//! testable as a library.

use std::fmt::Write as _;
use std::path::Path;

use idxtc::concrete::{parse_program, print_ctx, print_ty};
use idxtc::context::{CompleteCtx, DeclCtx, Entry, TyCtx};
use idxtc::oracle::{Fuel, V3, decl_typecheck};
use idxtc::syntax::{Expr, Principality, Span};
use idxtc::{Session, Tc};
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct Options {
    pub dump_context: bool,
    pub trace: bool,
    pub oracle_check: bool,
    pub guess_size: usize,
    pub depth: usize,
    pub json: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            dump_context: false,
            trace: false,
            oracle_check: false,
            guess_size: 3,
            depth: 32,
            json: false,
        }
    }
}

/// How a whole run ended; ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitClass {
    Ok = 0,
    TypeError = 1,
    UsageError = 2,
}

#[derive(Debug, Serialize)]
pub struct SpanReport {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Serialize)]
pub struct ItemReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", rename = "type")]
    pub ty: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub principality: Option<String>,
    pub status: String,
    pub span: SpanReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_class: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct FileReport {
    pub path: String,
    pub status: String,
    pub items: Vec<ItemReport>,
    #[serde(skip)]
    pub stdout: String,
    #[serde(skip)]
    pub stderr: String,
    #[serde(skip)]
    pub exit: ExitClass,
}

fn line_col(text: &str, span: Span) -> (u32, u32) {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in text.char_indices() {
        if i as u32 >= span.lo {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

/// Typecheck one file. Never panics on user input; IO and parse problems are
/// usage errors (exit 2), type and coverage problems are type errors (exit 1).
pub fn typecheck_path(path: &Path, opts: &Options) -> FileReport {
    let display = path.display().to_string();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            return FileReport {
                path: display.clone(),
                status: "usage-error".into(),
                items: Vec::new(),
                stdout: String::new(),
                stderr: format!("{display}: cannot read file: {e}\n"),
                exit: ExitClass::UsageError,
            };
        }
    };
    typecheck_source(&display, &text, opts)
}

pub fn typecheck_source(display: &str, text: &str, opts: &Options) -> FileReport {
    let mut sess = Session::new();
    let file = match parse_program(&mut sess, display, text) {
        Ok(f) => f,
        Err(e) => {
            let mut stderr = format!("{display}:{}:{}: error[syntax]: {}\n", e.line, e.col, e.msg);
            if !e.expected.is_empty() {
                let _ = writeln!(stderr, "  expected one of: {}", e.expected.join(", "));
            }
            return FileReport {
                path: display.to_string(),
                status: "parse-error".into(),
                items: Vec::new(),
                stdout: String::new(),
                stderr,
                exit: ExitClass::UsageError,
            };
        }
    };

    if opts.trace {
        sess.enable_trace();
    }

    let fuel = Fuel { guess_size: opts.guess_size, depth: opts.depth };
    let mut items = Vec::new();
    let mut stdout = String::new();
    let mut stderr = String::new();
    let mut exit = ExitClass::Ok;
    let mut ctx = TyCtx::empty();

    struct Checked {
        before: TyCtx,
        after: TyCtx,
        expr: Expr,
        ty: idxtc::Ty,
        prin: Principality,
        name: String,
        span: Span,
    }
    let mut accepted: Vec<Checked> = Vec::new();

    let mut final_items: Vec<(String, Option<idxtc::Ty>, Expr, Span)> = Vec::new();
    for def in &file.defs {
        final_items.push((
            def.name.name().to_string(),
            def.anno.clone(),
            def.body.clone(),
            def.span,
        ));
    }
    if let Some(e) = &file.final_expr {
        final_items.push(("it".to_string(), None, e.clone(), e.span));
    }

    let def_vars: Vec<_> = file.defs.iter().map(|d| d.name.clone()).collect();

    for (i, (name, anno, body, span)) in final_items.iter().enumerate() {
        let annotated = match anno {
            Some(a) => Expr::anno(body.clone(), a.clone()).at(*span),
            None => body.clone(),
        };
        let before = ctx.clone();
        let mut tc = Tc::new(&mut sess);
        match tc.synth(&ctx, &annotated) {
            Ok(out) => {
                let ty = out.out.apply_ty(&out.ty);
                let (line, col) = line_col(text, *span);
                let _ = writeln!(stdout, "{name} : {} {}", print_ty(&ty), out.prin);
                items.push(ItemReport {
                    name: name.clone(),
                    ty: Some(print_ty(&ty)),
                    principality: Some(out.prin.to_string()),
                    status: "ok".into(),
                    span: SpanReport { line, col },
                    error: None,
                    error_class: None,
                });
                accepted.push(Checked {
                    before,
                    after: out.out.clone(),
                    expr: annotated,
                    ty: ty.clone(),
                    prin: out.prin,
                    name: name.clone(),
                    span: *span,
                });
                ctx = out.out;
                // Bind the definition for the defs that follow.
                if i < def_vars.len() {
                    ctx = ctx.pushed(Entry::Hyp(def_vars[i].clone(), ty, out.prin));
                }
            }
            Err(err) => {
                let err_span = err.span().unwrap_or(*span);
                let (line, col) = line_col(text, err_span);
                let msg = match (&err, anno) {
                    (idxtc::TypeError::CannotSynthesize { .. }, None) => {
                        "cannot synthesize: annotate this definition".to_string()
                    }
                    _ => err.to_string(),
                };
                let _ = writeln!(
                    stderr,
                    "{display}:{line}:{col}: error[{}]: {msg}",
                    err.class()
                );
                items.push(ItemReport {
                    name: name.clone(),
                    ty: None,
                    principality: None,
                    status: "error".into(),
                    span: SpanReport { line, col },
                    error: Some(msg),
                    error_class: Some(err.class().into()),
                });
                exit = exit.max(ExitClass::TypeError);
                break;
            }
        }
    }

    if opts.trace {
        for line in sess.take_trace() {
            let _ = writeln!(stdout, "{line}");
        }
    }

    if opts.dump_context {
        let _ = writeln!(stdout, "context: {}", print_ctx(&ctx));
    }

    if opts.oracle_check && exit == ExitClass::Ok {
        let mut unknown = 0usize;
        for checked in &accepted {
            // Complete this definition's own output context; it extends the
            // input context, so applying it yields the declarative context
            // the definition was checked under.
            let omega = CompleteCtx::canonical(&checked.after);
            let psi: DeclCtx = match omega.apply_to_ctx(&checked.before) {
                Ok(p) => p,
                Err(e) => {
                    let _ = writeln!(stderr, "{display}: oracle-check internal error: {e}");
                    exit = exit.max(ExitClass::TypeError);
                    continue;
                }
            };
            let e2 = omega.as_ctx().apply_expr(&checked.expr);
            let t2 = omega.apply_ty(&checked.ty);
            match decl_typecheck(&psi, checked.prin, &e2, &t2, fuel) {
                V3::True => {}
                V3::Unknown => unknown += 1,
                V3::False => {
                    let (line, col) = line_col(text, checked.span);
                    let _ = writeln!(
                        stderr,
                        "{display}:{line}:{col}: error[oracle-disagreement]: `{}` was accepted \
                         but the declarative oracle rejects it",
                        checked.name
                    );
                    exit = exit.max(ExitClass::TypeError);
                }
            }
        }
        if unknown > 0 {
            let _ = writeln!(
                stderr,
                "{display}: oracle-check: {unknown} definition(s) not confirmed within fuel \
                 (guess size {}, depth {})",
                fuel.guess_size, fuel.depth
            );
        }
    }

    let status = match exit {
        ExitClass::Ok => "ok",
        ExitClass::TypeError => "type-error",
        ExitClass::UsageError => "usage-error",
    };
    FileReport {
        path: display.to_string(),
        status: status.into(),
        items,
        stdout,
        stderr,
        exit,
    }
}

pub fn render_json(reports: &[FileReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}
