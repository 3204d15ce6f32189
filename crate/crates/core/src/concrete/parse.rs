//! Recursive-descent parser with one-token backtracking points for the
//! guarded-type ambiguity. Name resolution happens during parsing: binders
//! allocate fresh identifiers from the session, bound occurrences reuse them,
//! and free type-level names are consistently auto-bound (so `parse_type`
//! accepts open types like `(n = Z) => 1`). Unknown expression variables
//! become fresh identifiers and are reported by the typechecker, not here.

use std::collections::HashMap;

use super::lex::{Tok, Token, lex};
use crate::session::Session;
use crate::syntax::{
    Branch, Branches, EVar, Expr, Inj, Pat, Prop, Sort, Span, Term, TermVar, Ty, UVar,
};

/// A parsed `.idx` file: named definitions in order, plus an optional final
/// expression.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: String,
    pub defs: Vec<Def>,
    pub final_expr: Option<Expr>,
}

#[derive(Debug, Clone)]
pub struct Def {
    pub name: TermVar,
    pub anno: Option<Ty>,
    pub body: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{line}:{col}: syntax error: {msg}")]
pub struct ParseError {
    pub msg: String,
    pub span: Span,
    pub line: u32,
    pub col: u32,
    /// Token descriptions that would have been accepted here.
    pub expected: Vec<String>,
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

struct Parser<'s, 't> {
    sess: &'s mut Session,
    text: &'t str,
    toks: Vec<Token>,
    pos: usize,
    /// Lexical scope for type/index variables (innermost last).
    ty_scope: Vec<(String, UVar)>,
    /// Free type-level names, auto-bound consistently across the parse.
    free_tyvars: HashMap<String, UVar>,
    /// Free existential names (`^a`), for parsing printed types back in.
    free_evars: HashMap<String, EVar>,
    /// Lexical scope for expression variables (innermost last).
    term_scope: Vec<(String, TermVar)>,
}

type PResult<T> = Result<T, ParseError>;

impl<'s, 't> Parser<'s, 't> {
    fn new(sess: &'s mut Session, text: &'t str) -> PResult<Self> {
        let toks = lex(text).map_err(|(msg, span)| {
            let (line, col) = line_col(text, span);
            ParseError { msg, span, line, col, expected: vec![] }
        })?;
        Ok(Parser {
            sess,
            text,
            toks,
            pos: 0,
            ty_scope: Vec::new(),
            free_tyvars: HashMap::new(),
            free_evars: HashMap::new(),
            term_scope: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek() == tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>, expected: Vec<String>) -> PResult<T> {
        let span = self.peek_span();
        let (line, col) = line_col(self.text, span);
        Err(ParseError { msg: msg.into(), span, line, col, expected })
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if self.at(&tok) {
            Ok(self.bump())
        } else {
            self.error(
                format!("expected {}, found {}", tok.describe(), self.peek().describe()),
                vec![tok.describe()],
            )
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok((name, span))
            }
            other => self.error(
                format!("expected {what}, found {}", other.describe()),
                vec!["identifier".into()],
            ),
        }
    }

    // -- scoping helpers ------------------------------------------------------

    fn lookup_tyvar(&mut self, name: &str) -> UVar {
        if let Some((_, v)) = self.ty_scope.iter().rev().find(|(n, _)| n == name) {
            return v.clone();
        }
        if let Some(v) = self.free_tyvars.get(name) {
            return v.clone();
        }
        let v = self.sess.fresh_uvar(name);
        self.free_tyvars.insert(name.to_string(), v.clone());
        v
    }

    fn lookup_evar(&mut self, name: &str) -> EVar {
        if let Some(v) = self.free_evars.get(name) {
            return v.clone();
        }
        let v = self.sess.fresh_evar(name);
        self.free_evars.insert(name.to_string(), v.clone());
        v
    }

    fn lookup_termvar(&mut self, name: &str) -> TermVar {
        if let Some((_, v)) = self.term_scope.iter().rev().find(|(n, _)| n == name) {
            return v.clone();
        }
        // Unbound: allocate a fresh variable; typing reports it.
        self.sess.fresh_termvar(name)
    }

    fn with_tyvar<T>(
        &mut self,
        name: String,
        var: UVar,
        f: impl FnOnce(&mut Self) -> PResult<T>,
    ) -> PResult<T> {
        self.ty_scope.push((name, var));
        let out = f(self);
        self.ty_scope.pop();
        out
    }

    // -- types ----------------------------------------------------------------

    fn ty(&mut self) -> PResult<Ty> {
        let lo = self.peek_span();
        let left = self.ty_no_assert()?;
        if self.eat(&Tok::AndProp) {
            let p = self.prop_maybe_parens()?;
            let span = lo.join(self.toks[self.pos.saturating_sub(1)].span);
            Ok(Ty::with(left, p).at(span))
        } else {
            Ok(left)
        }
    }

    /// Quantified, guarded, or arrow types; an asserting `/\ P` is not
    /// consumed here (it binds the whole type, so it needs parentheses when
    /// nested under an arrow).
    fn ty_no_assert(&mut self) -> PResult<Ty> {
        let lo = self.peek_span();
        match self.peek().clone() {
            Tok::Forall | Tok::Exists => {
                let is_forall = matches!(self.peek(), Tok::Forall);
                self.bump();
                let (name, _) = self.expect_ident("a type variable")?;
                self.expect(Tok::Colon)?;
                let sort = self.sort()?;
                self.expect(Tok::Dot)?;
                let var = self.sess.fresh_uvar(&name);
                let body = self.with_tyvar(name, var.clone(), |p| p.ty())?;
                let span = lo.join(body.span);
                Ok(if is_forall {
                    Ty::forall(var, sort, body).at(span)
                } else {
                    Ty::exists(var, sort, body).at(span)
                })
            }
            _ => {
                // A guarded type `P => A` starts with a term; try that first
                // and roll back if it is not followed by `=` ... `=>`.
                let snapshot = self.pos;
                if let Ok(p) = self.prop() {
                    if self.eat(&Tok::FatArrow) {
                        let body = self.ty_no_assert()?;
                        let span = lo.join(body.span);
                        return Ok(Ty::implies(p, body).at(span));
                    }
                }
                self.pos = snapshot;
                self.arrow_ty()
            }
        }
    }

    fn arrow_ty(&mut self) -> PResult<Ty> {
        let left = self.sum_ty()?;
        if self.eat(&Tok::Arrow) {
            let right = self.ty_no_assert()?;
            let span = left.span.join(right.span);
            Ok(Ty::arrow(left, right).at(span))
        } else {
            Ok(left)
        }
    }

    fn sum_ty(&mut self) -> PResult<Ty> {
        let mut left = self.prod_ty()?;
        while self.eat(&Tok::Plus) {
            let right = self.prod_ty()?;
            let span = left.span.join(right.span);
            left = Ty::sum(left, right).at(span);
        }
        Ok(left)
    }

    fn prod_ty(&mut self) -> PResult<Ty> {
        let mut left = self.atom_ty()?;
        while self.eat(&Tok::Star) {
            let right = self.atom_ty()?;
            let span = left.span.join(right.span);
            left = Ty::prod(left, right).at(span);
        }
        Ok(left)
    }

    fn atom_ty(&mut self) -> PResult<Ty> {
        let lo = self.peek_span();
        match self.peek().clone() {
            Tok::One => {
                self.bump();
                Ok(Ty::unit().at(lo))
            }
            Tok::Ident(name) => {
                self.bump();
                let v = self.lookup_tyvar(&name);
                Ok(Ty::uvar(v).at(lo))
            }
            Tok::Caret => {
                self.bump();
                let (name, span) = self.expect_ident("an existential variable name")?;
                let v = self.lookup_evar(&name);
                Ok(Ty::evar(v).at(lo.join(span)))
            }
            Tok::Vec => {
                self.bump();
                let idx = self.term_atom()?;
                let elem = self.atom_ty()?;
                let span = lo.join(elem.span);
                Ok(Ty::vec(idx, elem).at(span))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => self.error(
                format!("expected a type, found {}", other.describe()),
                vec![
                    "`1`".into(),
                    "identifier".into(),
                    "`Vec`".into(),
                    "`forall`".into(),
                    "`exists`".into(),
                    "`(`".into(),
                ],
            ),
        }
    }

    fn sort(&mut self) -> PResult<Sort> {
        match self.peek() {
            Tok::Star => {
                self.bump();
                Ok(Sort::Star)
            }
            Tok::NatSort => {
                self.bump();
                Ok(Sort::Nat)
            }
            other => {
                let d = other.describe();
                self.error(
                    format!("expected a sort (`*` or `N`), found {d}"),
                    vec!["`*`".into(), "`N`".into()],
                )
            }
        }
    }

    // -- index terms and propositions ------------------------------------------

    fn term_atom(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Term::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(Term::Unit)
            }
            Tok::Succ => {
                self.bump();
                let t = self.term_atom()?;
                Ok(Term::succ(t))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Term::UVar(self.lookup_tyvar(&name)))
            }
            Tok::Caret => {
                self.bump();
                let (name, _) = self.expect_ident("an existential variable name")?;
                Ok(Term::EVar(self.lookup_evar(&name)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => self.error(
                format!("expected an index term, found {}", other.describe()),
                vec!["`Z`".into(), "`S`".into(), "`1`".into(), "identifier".into(), "`(`".into()],
            ),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        self.term_atom()
    }

    fn prop(&mut self) -> PResult<Prop> {
        // Propositions may be written with or without parentheses.
        if self.at(&Tok::LParen) {
            let snapshot = self.pos;
            self.bump();
            if let Ok(p) = self.prop_body() {
                if self.eat(&Tok::RParen) {
                    return Ok(p);
                }
            }
            self.pos = snapshot;
        }
        self.prop_body()
    }

    fn prop_body(&mut self) -> PResult<Prop> {
        let l = self.term()?;
        self.expect(Tok::Eq)?;
        let r = self.term()?;
        Ok(Prop(l, r))
    }

    fn prop_maybe_parens(&mut self) -> PResult<Prop> {
        self.prop()
    }

    // -- patterns ---------------------------------------------------------------

    fn pattern(&mut self) -> PResult<Pat> {
        let left = self.pattern_app()?;
        if self.eat(&Tok::ColonColon) {
            let right = self.pattern()?;
            let span = left.span.join(right.span);
            Ok(Pat::cons(left, right).at(span))
        } else {
            Ok(left)
        }
    }

    fn pattern_app(&mut self) -> PResult<Pat> {
        let lo = self.peek_span();
        match self.peek().clone() {
            Tok::Inj1 | Tok::Inj2 => {
                let which = if matches!(self.peek(), Tok::Inj1) { Inj::Inj1 } else { Inj::Inj2 };
                self.bump();
                let p = self.pattern_atom()?;
                let span = lo.join(p.span);
                Ok(Pat::inj(which, p).at(span))
            }
            _ => self.pattern_atom(),
        }
    }

    fn pattern_atom(&mut self) -> PResult<Pat> {
        let lo = self.peek_span();
        match self.peek().clone() {
            Tok::Underscore => {
                self.bump();
                Ok(Pat::wild().at(lo))
            }
            Tok::Ident(name) => {
                self.bump();
                // Pattern variables always bind fresh.
                let v = self.sess.fresh_termvar(&name);
                Ok(Pat::var(v).at(lo))
            }
            Tok::LBracket => {
                self.bump();
                self.expect(Tok::RBracket)?;
                Ok(Pat::nil().at(lo))
            }
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(Pat::unit().at(lo));
                }
                let first = self.pattern()?;
                if self.eat(&Tok::Comma) {
                    let second = self.pattern()?;
                    let close = self.expect(Tok::RParen)?;
                    Ok(Pat::pair(first, second).at(lo.join(close.span)))
                } else {
                    self.expect(Tok::RParen)?;
                    Ok(first)
                }
            }
            other => self.error(
                format!("expected a pattern, found {}", other.describe()),
                vec![
                    "identifier".into(),
                    "`_`".into(),
                    "`[]`".into(),
                    "`(`".into(),
                    "`inj1`".into(),
                    "`inj2`".into(),
                ],
            ),
        }
    }

    // -- expressions -------------------------------------------------------------

    fn expr(&mut self) -> PResult<Expr> {
        let lo = self.peek_span();
        match self.peek().clone() {
            Tok::Backslash => {
                self.bump();
                let (name, _) = self.expect_ident("a parameter name")?;
                self.expect(Tok::Arrow)?;
                let var = self.sess.fresh_termvar(&name);
                self.term_scope.push((name, var.clone()));
                let body = self.expr();
                self.term_scope.pop();
                let body = body?;
                let span = lo.join(body.span);
                Ok(Expr::lam(var, body).at(span))
            }
            Tok::Rec => {
                self.bump();
                let (name, _) = self.expect_ident("a name for the fixed point")?;
                self.expect(Tok::Dot)?;
                let var = self.sess.fresh_termvar(&name);
                self.term_scope.push((name, var.clone()));
                let body = self.expr();
                self.term_scope.pop();
                let body = body?;
                if !body.is_value() {
                    let (line, col) = line_col(self.text, body.span);
                    return Err(ParseError {
                        msg: "the body of `rec` must be a value".into(),
                        span: body.span,
                        line,
                        col,
                        expected: vec![],
                    });
                }
                let span = lo.join(body.span);
                Ok(Expr::new(crate::syntax::ExprKind::Rec(var, Box::new(body))).at(span))
            }
            _ => self.cons_expr(),
        }
    }

    fn cons_expr(&mut self) -> PResult<Expr> {
        let left = self.app_expr()?;
        if self.eat(&Tok::ColonColon) {
            let right = self.cons_expr()?;
            let span = left.span.join(right.span);
            Ok(Expr::cons(left, right).at(span))
        } else {
            Ok(left)
        }
    }

    fn app_expr(&mut self) -> PResult<Expr> {
        let lo = self.peek_span();
        match self.peek().clone() {
            Tok::Inj1 | Tok::Inj2 => {
                let which = if matches!(self.peek(), Tok::Inj1) { Inj::Inj1 } else { Inj::Inj2 };
                self.bump();
                let arg = self.atom_expr()?;
                let span = lo.join(arg.span);
                Ok(Expr::inj(which, arg).at(span))
            }
            _ => {
                let head = self.atom_expr()?;
                let mut args = Vec::new();
                while self.starts_atom() {
                    args.push(self.atom_expr()?);
                }
                if args.is_empty() {
                    Ok(head)
                } else {
                    let span = lo.join(args.last().unwrap().span);
                    Ok(Expr::app(head, args).at(span))
                }
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::LParen | Tok::LBracket | Tok::Ident(_) | Tok::Case
        )
    }

    fn atom_expr(&mut self) -> PResult<Expr> {
        let lo = self.peek_span();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                let v = self.lookup_termvar(&name);
                Ok(Expr::var(v).at(lo))
            }
            Tok::LBracket => {
                self.bump();
                self.expect(Tok::RBracket)?;
                Ok(Expr::nil().at(lo))
            }
            Tok::Case => {
                self.bump();
                self.expect(Tok::LParen)?;
                let scrut = self.expr()?;
                self.expect(Tok::Comma)?;
                let mut branches = Vec::new();
                loop {
                    branches.push(self.branch()?);
                    if !self.eat(&Tok::Pipe) {
                        break;
                    }
                }
                let close = self.expect(Tok::RParen)?;
                Ok(Expr::case(scrut, Branches::new(branches)).at(lo.join(close.span)))
            }
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(Expr::unit().at(lo));
                }
                let first = self.expr()?;
                match self.peek().clone() {
                    Tok::Comma => {
                        self.bump();
                        let second = self.expr()?;
                        let close = self.expect(Tok::RParen)?;
                        Ok(Expr::pair(first, second).at(lo.join(close.span)))
                    }
                    Tok::Colon => {
                        self.bump();
                        let ty = self.ty()?;
                        if !ty.fev().is_empty() {
                            let (line, col) = line_col(self.text, ty.span);
                            return Err(ParseError {
                                msg: "type annotations may not mention existential variables"
                                    .into(),
                                span: ty.span,
                                line,
                                col,
                                expected: vec![],
                            });
                        }
                        let close = self.expect(Tok::RParen)?;
                        Ok(Expr::anno(first, ty).at(lo.join(close.span)))
                    }
                    _ => {
                        self.expect(Tok::RParen)?;
                        Ok(first)
                    }
                }
            }
            other => self.error(
                format!("expected an expression, found {}", other.describe()),
                vec![
                    "identifier".into(),
                    "`()`".into(),
                    "`[]`".into(),
                    "`case`".into(),
                    "`(`".into(),
                    "`\\`".into(),
                ],
            ),
        }
    }

    fn branch(&mut self) -> PResult<Branch> {
        let scope_depth = self.term_scope.len();
        let pat = self.pattern()?;

        // Pattern variables are in scope in the body and must be distinct.
        let mut vars = Vec::new();
        pat.vars_into(&mut vars);
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name() == v.name()) {
                let (line, col) = line_col(self.text, pat.span);
                return Err(ParseError {
                    msg: format!("pattern binds `{}` more than once", v.name()),
                    span: pat.span,
                    line,
                    col,
                    expected: vec![],
                });
            }
            self.term_scope.push((v.name().to_string(), v.clone()));
        }
        self.expect(Tok::FatArrow)?;
        let body = self.expr();
        self.term_scope.truncate(scope_depth);
        Ok(Branch::new(vec![pat], body?))
    }

    // -- programs -----------------------------------------------------------------

    fn program(&mut self, path: &str) -> PResult<SourceFile> {
        let mut defs: Vec<Def> = Vec::new();
        let mut final_expr = None;
        loop {
            match self.peek() {
                Tok::Eof => break,
                Tok::Def => {
                    let lo = self.peek_span();
                    self.bump();
                    let (name, name_span) = self.expect_ident("a definition name")?;
                    if defs.iter().any(|d| d.name.name() == name) {
                        let (line, col) = line_col(self.text, name_span);
                        return Err(ParseError {
                            msg: format!("duplicate definition of `{name}`"),
                            span: name_span,
                            line,
                            col,
                            expected: vec![],
                        });
                    }
                    let anno = if self.eat(&Tok::Colon) { Some(self.ty()?) } else { None };
                    if let Some(a) = &anno {
                        if !a.fev().is_empty() {
                            let (line, col) = line_col(self.text, a.span);
                            return Err(ParseError {
                                msg: "type annotations may not mention existential variables"
                                    .into(),
                                span: a.span,
                                line,
                                col,
                                expected: vec![],
                            });
                        }
                    }
                    self.expect(Tok::Eq)?;
                    let body = self.expr()?;
                    let semi = self.expect(Tok::Semi)?;
                    let var = self.sess.fresh_termvar(&name);
                    self.term_scope.push((name, var.clone()));
                    defs.push(Def { name: var, anno, body, span: lo.join(semi.span) });
                }
                _ => {
                    let e = self.expr()?;
                    self.expect(Tok::Eof)?;
                    final_expr = Some(e);
                    break;
                }
            }
        }
        Ok(SourceFile { path: path.to_string(), defs, final_expr })
    }
}

/// Parse a whole program.
pub fn parse_program(sess: &mut Session, path: &str, text: &str) -> Result<SourceFile, ParseError> {
    let mut p = Parser::new(sess, text)?;
    p.program(path)
}

/// Parse a single type; free type-level names are bound to fresh universal
/// variables, consistently within this call.
pub fn parse_type(sess: &mut Session, text: &str) -> Result<Ty, ParseError> {
    let mut p = Parser::new(sess, text)?;
    let t = p.ty()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

/// Parse a single closed expression.
pub fn parse_expr(sess: &mut Session, text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(sess, text)?;
    let e = p.expr()?;
    p.expect(Tok::Eof)?;
    Ok(e)
}
