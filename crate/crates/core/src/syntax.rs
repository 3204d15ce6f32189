//! Abstract syntax: expressions, patterns, types, index terms, propositions,
//! sorts, and principalities, together with the purely syntactic predicates
//! the judgments dispatch on.
//!
//! Binders are identified by globally unique ids handed out by a
//! [`Session`](crate::session::Session); equality of identifiers is equality
//! of ids, and alpha-equivalence is id-insensitive structural comparison
//! ([`alpha_eq_ty`], [`alpha_eq_expr`]).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Byte range into the source text. Spans never participate in equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub lo: u32,
    pub hi: u32,
}

impl Span {
    pub const DUMMY: Span = Span { lo: 0, hi: 0 };

    pub fn new(lo: u32, hi: u32) -> Span {
        Span { lo, hi }
    }

    pub fn join(self, other: Span) -> Span {
        if self.lo == 0 && self.hi == 0 {
            return other;
        }
        if other.lo == 0 && other.hi == 0 {
            return self;
        }
        Span { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }
}

/// An identifier: a display name plus a globally unique id. The id alone
/// decides equality; the name is kept for printing (with a disambiguating
/// suffix when two distinct ids share a name).
#[derive(Debug, Clone)]
pub struct Ident {
    pub name: Arc<str>,
    pub uid: u64,
}

impl Ident {
    pub fn new(name: impl AsRef<str>, uid: u64) -> Ident {
        Ident { name: Arc::from(name.as_ref()), uid }
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Ident) -> bool {
        self.uid == other.uid
    }
}
impl Eq for Ident {}
impl PartialOrd for Ident {
    fn partial_cmp(&self, other: &Ident) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ident {
    fn cmp(&self, other: &Ident) -> std::cmp::Ordering {
        self.uid.cmp(&other.uid)
    }
}
impl std::hash::Hash for Ident {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.uid.hash(state);
    }
}
impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

macro_rules! ident_wrapper {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub Ident);

        impl $name {
            pub fn name(&self) -> &str {
                &self.0.name
            }
            pub fn uid(&self) -> u64 {
                self.0.uid
            }
        }
        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

ident_wrapper!(
    /// A universal type or index variable (bound by `forall`/`exists` or
    /// declared in a context).
    UVar
);
ident_wrapper!(
    /// An existential (solver) variable; never occurs in source programs.
    EVar
);
ident_wrapper!(
    /// An expression variable.
    TermVar
);

/// The two sorts: `*` classifies monotypes, `N` classifies natural-number
/// index terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Star,
    Nat,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Star => write!(f, "*"),
            Sort::Nat => write!(f, "N"),
        }
    }
}

/// Binary type connectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conn {
    Arrow,
    Sum,
    Prod,
}

/// Whether a judgment's type is forced (`!`) or possibly a guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Principality {
    Bang,
    Slash,
}

impl Principality {
    pub fn is_bang(self) -> bool {
        self == Principality::Bang
    }

    /// The ordering `! ⊑ p`: bang is at least as principal as anything.
    pub fn at_least_as_principal_as(self, other: Principality) -> bool {
        self == Principality::Bang || other == Principality::Slash
    }
}

impl fmt::Display for Principality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Principality::Bang => write!(f, "!"),
            Principality::Slash => write!(f, "/"),
        }
    }
}

/// Head polarity of a type: positive for exists-headed, negative for
/// forall-headed, nonpolar otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Pos,
    Neg,
    Non,
}

/// Index terms and monotypes. The monotype fragment is shared with [`Ty`];
/// [`Term::to_ty`] is the injection and [`Ty::as_term`] its partial inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    Succ(Box<Term>),
    Unit,
    UVar(UVar),
    EVar(EVar),
    Bin(Conn, Box<Term>, Box<Term>),
}

impl Term {
    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn bin(op: Conn, l: Term, r: Term) -> Term {
        Term::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn nat(n: u64) -> Term {
        let mut t = Term::Zero;
        for _ in 0..n {
            t = Term::succ(t);
        }
        t
    }

    /// Free existential variables.
    pub fn fev(&self) -> BTreeSet<EVar> {
        let mut acc = BTreeSet::new();
        self.fev_into(&mut acc);
        acc
    }

    pub(crate) fn fev_into(&self, acc: &mut BTreeSet<EVar>) {
        match self {
            Term::Zero | Term::Unit | Term::UVar(_) => {}
            Term::EVar(e) => {
                acc.insert(e.clone());
            }
            Term::Succ(t) => t.fev_into(acc),
            Term::Bin(_, l, r) => {
                l.fev_into(acc);
                r.fev_into(acc);
            }
        }
    }

    /// Free universal variables.
    pub fn fuv(&self) -> BTreeSet<UVar> {
        let mut acc = BTreeSet::new();
        self.fuv_into(&mut acc);
        acc
    }

    pub(crate) fn fuv_into(&self, acc: &mut BTreeSet<UVar>) {
        match self {
            Term::Zero | Term::Unit | Term::EVar(_) => {}
            Term::UVar(u) => {
                acc.insert(u.clone());
            }
            Term::Succ(t) => t.fuv_into(acc),
            Term::Bin(_, l, r) => {
                l.fuv_into(acc);
                r.fuv_into(acc);
            }
        }
    }

    pub fn subst_uvar(&self, var: &UVar, t: &Term) -> Term {
        match self {
            Term::Zero | Term::Unit | Term::EVar(_) => self.clone(),
            Term::UVar(u) => {
                if u == var {
                    t.clone()
                } else {
                    self.clone()
                }
            }
            Term::Succ(s) => Term::succ(s.subst_uvar(var, t)),
            Term::Bin(op, l, r) => Term::bin(*op, l.subst_uvar(var, t), r.subst_uvar(var, t)),
        }
    }

    /// The injection into the type grammar: identity on the shared monotype
    /// constructors. Index terms (`Z`, `S t`) have no type counterpart and
    /// only arise here from ill-sorted inputs.
    pub fn to_ty(&self) -> Ty {
        match self {
            Term::Unit => Ty::unit(),
            Term::UVar(u) => Ty::uvar(u.clone()),
            Term::EVar(e) => Ty::evar(e.clone()),
            Term::Bin(op, l, r) => Ty::bin(*op, l.to_ty(), r.to_ty()),
            Term::Zero | Term::Succ(_) => {
                unreachable!("index term used in type position")
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::Unit | Term::UVar(_) | Term::EVar(_) => 1,
            Term::Succ(t) => 1 + t.size(),
            Term::Bin(_, l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// An index proposition `t = t'` (well-formed at sort `N`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Prop(pub Term, pub Term);

impl Prop {
    pub fn fev(&self) -> BTreeSet<EVar> {
        let mut acc = BTreeSet::new();
        self.0.fev_into(&mut acc);
        self.1.fev_into(&mut acc);
        acc
    }

    pub fn subst_uvar(&self, var: &UVar, t: &Term) -> Prop {
        Prop(self.0.subst_uvar(var, t), self.1.subst_uvar(var, t))
    }
}

/// A type, carrying a source span for diagnostics. Spans never affect
/// equality or hashing.
#[derive(Debug, Clone)]
pub struct Ty {
    pub kind: TyKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TyKind {
    Unit,
    Bin(Conn, Box<Ty>, Box<Ty>),
    UVar(UVar),
    EVar(EVar),
    Forall(UVar, Sort, Box<Ty>),
    Exists(UVar, Sort, Box<Ty>),
    /// Guarded type `P => A`.
    Implies(Prop, Box<Ty>),
    /// Asserting type `A /\ P`.
    With(Box<Ty>, Prop),
    Vec(Term, Box<Ty>),
}

impl PartialEq for Ty {
    fn eq(&self, other: &Ty) -> bool {
        self.kind == other.kind
    }
}
impl Eq for Ty {}
impl std::hash::Hash for Ty {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
    }
}

impl Ty {
    pub fn new(kind: TyKind) -> Ty {
        Ty { kind, span: Span::DUMMY }
    }

    pub fn at(mut self, span: Span) -> Ty {
        self.span = span;
        self
    }

    pub fn unit() -> Ty {
        Ty::new(TyKind::Unit)
    }
    pub fn uvar(v: UVar) -> Ty {
        Ty::new(TyKind::UVar(v))
    }
    pub fn evar(v: EVar) -> Ty {
        Ty::new(TyKind::EVar(v))
    }
    pub fn bin(op: Conn, l: Ty, r: Ty) -> Ty {
        Ty::new(TyKind::Bin(op, Box::new(l), Box::new(r)))
    }
    pub fn arrow(l: Ty, r: Ty) -> Ty {
        Ty::bin(Conn::Arrow, l, r)
    }
    pub fn sum(l: Ty, r: Ty) -> Ty {
        Ty::bin(Conn::Sum, l, r)
    }
    pub fn prod(l: Ty, r: Ty) -> Ty {
        Ty::bin(Conn::Prod, l, r)
    }
    pub fn forall(v: UVar, sort: Sort, body: Ty) -> Ty {
        Ty::new(TyKind::Forall(v, sort, Box::new(body)))
    }
    pub fn exists(v: UVar, sort: Sort, body: Ty) -> Ty {
        Ty::new(TyKind::Exists(v, sort, Box::new(body)))
    }
    pub fn implies(p: Prop, body: Ty) -> Ty {
        Ty::new(TyKind::Implies(p, Box::new(body)))
    }
    pub fn with(body: Ty, p: Prop) -> Ty {
        Ty::new(TyKind::With(Box::new(body), p))
    }
    pub fn vec(idx: Term, elem: Ty) -> Ty {
        Ty::new(TyKind::Vec(idx, Box::new(elem)))
    }

    /// Free existential variables; bound and universal variables excluded.
    pub fn fev(&self) -> BTreeSet<EVar> {
        let mut acc = BTreeSet::new();
        self.fev_into(&mut acc);
        acc
    }

    pub(crate) fn fev_into(&self, acc: &mut BTreeSet<EVar>) {
        match &self.kind {
            TyKind::Unit | TyKind::UVar(_) => {}
            TyKind::EVar(e) => {
                acc.insert(e.clone());
            }
            TyKind::Bin(_, l, r) => {
                l.fev_into(acc);
                r.fev_into(acc);
            }
            TyKind::Forall(_, _, b) | TyKind::Exists(_, _, b) => b.fev_into(acc),
            TyKind::Implies(p, b) => {
                p.0.fev_into(acc);
                p.1.fev_into(acc);
                b.fev_into(acc);
            }
            TyKind::With(b, p) => {
                b.fev_into(acc);
                p.0.fev_into(acc);
                p.1.fev_into(acc);
            }
            TyKind::Vec(t, b) => {
                t.fev_into(acc);
                b.fev_into(acc);
            }
        }
    }

    /// Head polarity: positive iff exists-headed, negative iff forall-headed.
    pub fn polarity(&self) -> Polarity {
        match &self.kind {
            TyKind::Forall(..) => Polarity::Neg,
            TyKind::Exists(..) => Polarity::Pos,
            _ => Polarity::Non,
        }
    }

    pub fn is_forall(&self) -> bool {
        matches!(self.kind, TyKind::Forall(..))
    }
    pub fn is_exists(&self) -> bool {
        matches!(self.kind, TyKind::Exists(..))
    }
    pub fn is_quantifier(&self) -> bool {
        self.is_forall() || self.is_exists()
    }
    /// Headed by `∧` or `∃` (the exclusion in the variable/wildcard match
    /// rules).
    pub fn is_with_or_exists(&self) -> bool {
        matches!(self.kind, TyKind::With(..) | TyKind::Exists(..))
    }

    /// Capture-avoiding substitution of a term/monotype for a universal
    /// variable. A binder for the same variable shadows.
    pub fn subst_uvar(&self, var: &UVar, t: &Term) -> Ty {
        let kind = match &self.kind {
            TyKind::Unit | TyKind::EVar(_) => self.kind.clone(),
            TyKind::UVar(u) => {
                if u == var {
                    return t.to_ty().at(self.span);
                }
                self.kind.clone()
            }
            TyKind::Bin(op, l, r) => TyKind::Bin(
                *op,
                Box::new(l.subst_uvar(var, t)),
                Box::new(r.subst_uvar(var, t)),
            ),
            TyKind::Forall(v, k, b) => {
                if v == var {
                    self.kind.clone()
                } else {
                    TyKind::Forall(v.clone(), *k, Box::new(b.subst_uvar(var, t)))
                }
            }
            TyKind::Exists(v, k, b) => {
                if v == var {
                    self.kind.clone()
                } else {
                    TyKind::Exists(v.clone(), *k, Box::new(b.subst_uvar(var, t)))
                }
            }
            TyKind::Implies(p, b) => {
                TyKind::Implies(p.subst_uvar(var, t), Box::new(b.subst_uvar(var, t)))
            }
            TyKind::With(b, p) => {
                TyKind::With(Box::new(b.subst_uvar(var, t)), p.subst_uvar(var, t))
            }
            TyKind::Vec(idx, b) => {
                TyKind::Vec(idx.subst_uvar(var, t), Box::new(b.subst_uvar(var, t)))
            }
        };
        Ty { kind, span: self.span }
    }

    /// The partial inverse of [`Term::to_ty`]: defined exactly on the
    /// monotype fragment.
    pub fn as_term(&self) -> Option<Term> {
        match &self.kind {
            TyKind::Unit => Some(Term::Unit),
            TyKind::UVar(u) => Some(Term::UVar(u.clone())),
            TyKind::EVar(e) => Some(Term::EVar(e.clone())),
            TyKind::Bin(op, l, r) => Some(Term::bin(*op, l.as_term()?, r.as_term()?)),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match &self.kind {
            TyKind::Unit | TyKind::UVar(_) | TyKind::EVar(_) => 1,
            TyKind::Bin(_, l, r) => 1 + l.size() + r.size(),
            TyKind::Forall(_, _, b) | TyKind::Exists(_, _, b) => 1 + b.size(),
            TyKind::Implies(p, b) => 1 + p.0.size() + p.1.size() + b.size(),
            TyKind::With(b, p) => 1 + b.size() + p.0.size() + p.1.size(),
            TyKind::Vec(t, b) => 1 + t.size() + b.size(),
        }
    }
}

/// Which injection into a sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Inj {
    Inj1,
    Inj2,
}

/// A spine: the argument list of an application, typed left to right.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spine(pub Vec<Expr>);

/// An expression, carrying a source span that never affects equality.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Var(TermVar),
    Unit,
    Lam(TermVar, Box<Expr>),
    /// Application of a head to a nonempty spine.
    App(Box<Expr>, Spine),
    /// Fixed point; the body must be a value.
    Rec(TermVar, Box<Expr>),
    Anno(Box<Expr>, Ty),
    Pair(Box<Expr>, Box<Expr>),
    Inj(Inj, Box<Expr>),
    Case(Box<Expr>, Branches),
    Nil,
    Cons(Box<Expr>, Box<Expr>),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        self.kind == other.kind
    }
}
impl Eq for Expr {}

impl Expr {
    pub fn new(kind: ExprKind) -> Expr {
        Expr { kind, span: Span::DUMMY }
    }

    pub fn at(mut self, span: Span) -> Expr {
        self.span = span;
        self
    }

    pub fn var(v: TermVar) -> Expr {
        Expr::new(ExprKind::Var(v))
    }
    pub fn unit() -> Expr {
        Expr::new(ExprKind::Unit)
    }
    pub fn lam(x: TermVar, body: Expr) -> Expr {
        Expr::new(ExprKind::Lam(x, Box::new(body)))
    }
    pub fn app(head: Expr, spine: Vec<Expr>) -> Expr {
        debug_assert!(!spine.is_empty(), "application spine must be nonempty");
        Expr::new(ExprKind::App(Box::new(head), Spine(spine)))
    }
    pub fn rec(x: TermVar, body: Expr) -> Expr {
        debug_assert!(body.is_value(), "fixed-point body must be a value");
        Expr::new(ExprKind::Rec(x, Box::new(body)))
    }
    pub fn anno(e: Expr, ty: Ty) -> Expr {
        Expr::new(ExprKind::Anno(Box::new(e), ty))
    }
    pub fn pair(l: Expr, r: Expr) -> Expr {
        Expr::new(ExprKind::Pair(Box::new(l), Box::new(r)))
    }
    pub fn inj(which: Inj, e: Expr) -> Expr {
        Expr::new(ExprKind::Inj(which, Box::new(e)))
    }
    pub fn case(scrut: Expr, branches: Branches) -> Expr {
        Expr::new(ExprKind::Case(Box::new(scrut), branches))
    }
    pub fn nil() -> Expr {
        Expr::new(ExprKind::Nil)
    }
    pub fn cons(hd: Expr, tl: Expr) -> Expr {
        Expr::new(ExprKind::Cons(Box::new(hd), Box::new(tl)))
    }

    /// Checked introduction forms: lambda, unit, pair, injection, nil, cons.
    /// Fixed points and case expressions are checking forms but not
    /// introduction forms.
    pub fn is_checked_intro(&self) -> bool {
        matches!(
            self.kind,
            ExprKind::Lam(..)
                | ExprKind::Unit
                | ExprKind::Pair(..)
                | ExprKind::Inj(..)
                | ExprKind::Nil
                | ExprKind::Cons(..)
        )
    }

    pub fn is_case(&self) -> bool {
        matches!(self.kind, ExprKind::Case(..))
    }

    /// Values of the call-by-value semantics.
    pub fn is_value(&self) -> bool {
        match &self.kind {
            ExprKind::Var(_) | ExprKind::Unit | ExprKind::Lam(..) | ExprKind::Nil => true,
            ExprKind::Rec(_, v) | ExprKind::Anno(v, _) => v.is_value(),
            ExprKind::Pair(l, r) | ExprKind::Cons(l, r) => l.is_value() && r.is_value(),
            ExprKind::Inj(_, v) => v.is_value(),
            ExprKind::App(..) | ExprKind::Case(..) => false,
        }
    }

    /// Substitute a term for a universal variable in every embedded
    /// annotation type.
    pub fn subst_uvar(&self, var: &UVar, t: &Term) -> Expr {
        let kind = match &self.kind {
            ExprKind::Var(_) | ExprKind::Unit | ExprKind::Nil => self.kind.clone(),
            ExprKind::Lam(x, b) => ExprKind::Lam(x.clone(), Box::new(b.subst_uvar(var, t))),
            ExprKind::Rec(x, b) => ExprKind::Rec(x.clone(), Box::new(b.subst_uvar(var, t))),
            ExprKind::Anno(b, ty) => {
                ExprKind::Anno(Box::new(b.subst_uvar(var, t)), ty.subst_uvar(var, t))
            }
            ExprKind::App(h, s) => ExprKind::App(
                Box::new(h.subst_uvar(var, t)),
                Spine(s.0.iter().map(|a| a.subst_uvar(var, t)).collect()),
            ),
            ExprKind::Pair(l, r) => ExprKind::Pair(
                Box::new(l.subst_uvar(var, t)),
                Box::new(r.subst_uvar(var, t)),
            ),
            ExprKind::Cons(l, r) => ExprKind::Cons(
                Box::new(l.subst_uvar(var, t)),
                Box::new(r.subst_uvar(var, t)),
            ),
            ExprKind::Inj(i, b) => ExprKind::Inj(*i, Box::new(b.subst_uvar(var, t))),
            ExprKind::Case(s, bs) => ExprKind::Case(
                Box::new(s.subst_uvar(var, t)),
                Branches(
                    bs.0.iter()
                        .map(|b| Branch::new(b.pats.clone(), b.body.subst_uvar(var, t)))
                        .collect(),
                ),
            ),
        };
        Expr { kind, span: self.span }
    }

    /// The three synthesizing forms: variables, annotations, applications.
    pub fn synthesizes(&self) -> bool {
        matches!(self.kind, ExprKind::Var(_) | ExprKind::Anno(..) | ExprKind::App(..))
    }

    pub fn size(&self) -> usize {
        match &self.kind {
            ExprKind::Var(_) | ExprKind::Unit | ExprKind::Nil => 1,
            ExprKind::Lam(_, b) | ExprKind::Rec(_, b) | ExprKind::Inj(_, b) => 1 + b.size(),
            ExprKind::Anno(b, _) => 1 + b.size(),
            ExprKind::App(h, s) => 1 + h.size() + s.0.iter().map(Expr::size).sum::<usize>(),
            ExprKind::Pair(l, r) | ExprKind::Cons(l, r) => 1 + l.size() + r.size(),
            ExprKind::Case(s, bs) => {
                1 + s.size()
                    + bs.0
                        .iter()
                        .map(|b| b.body.size() + b.pats.len())
                        .sum::<usize>()
            }
        }
    }
}

/// A pattern. Source branches carry exactly one pattern; the checker extends
/// the vector when it decomposes pairs and cons cells.
#[derive(Debug, Clone)]
pub struct Pat {
    pub kind: PatKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatKind {
    Var(TermVar),
    Wild,
    Unit,
    Pair(Box<Pat>, Box<Pat>),
    Inj(Inj, Box<Pat>),
    Nil,
    Cons(Box<Pat>, Box<Pat>),
}

impl PartialEq for Pat {
    fn eq(&self, other: &Pat) -> bool {
        self.kind == other.kind
    }
}

impl Pat {
    pub fn new(kind: PatKind) -> Pat {
        Pat { kind, span: Span::DUMMY }
    }

    pub fn at(mut self, span: Span) -> Pat {
        self.span = span;
        self
    }

    pub fn wild() -> Pat {
        Pat::new(PatKind::Wild)
    }
    pub fn var(v: TermVar) -> Pat {
        Pat::new(PatKind::Var(v))
    }
    pub fn unit() -> Pat {
        Pat::new(PatKind::Unit)
    }
    pub fn pair(l: Pat, r: Pat) -> Pat {
        Pat::new(PatKind::Pair(Box::new(l), Box::new(r)))
    }
    pub fn inj(which: Inj, p: Pat) -> Pat {
        Pat::new(PatKind::Inj(which, Box::new(p)))
    }
    pub fn nil() -> Pat {
        Pat::new(PatKind::Nil)
    }
    pub fn cons(l: Pat, r: Pat) -> Pat {
        Pat::new(PatKind::Cons(Box::new(l), Box::new(r)))
    }

    pub fn is_var_or_wild(&self) -> bool {
        matches!(self.kind, PatKind::Var(_) | PatKind::Wild)
    }

    pub fn vars_into(&self, acc: &mut Vec<TermVar>) {
        match &self.kind {
            PatKind::Var(v) => acc.push(v.clone()),
            PatKind::Wild | PatKind::Unit | PatKind::Nil => {}
            PatKind::Pair(l, r) | PatKind::Cons(l, r) => {
                l.vars_into(acc);
                r.vars_into(acc);
            }
            PatKind::Inj(_, p) => p.vars_into(acc),
        }
    }
}

/// One branch: a pattern vector and a body.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub pats: Vec<Pat>,
    pub body: Expr,
}

impl Branch {
    pub fn new(pats: Vec<Pat>, body: Expr) -> Branch {
        Branch { pats, body }
    }
}

/// An ordered list of branches.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Branches(pub Vec<Branch>);

impl Branches {
    pub fn new(branches: Vec<Branch>) -> Branches {
        Branches(branches)
    }
}

// ---------------------------------------------------------------------------
// Alpha-equivalence
// ---------------------------------------------------------------------------

#[derive(Default)]
struct AlphaCx {
    /// Bijection between bound uids of the left and right trees.
    l2r: std::collections::HashMap<u64, u64>,
    r2l: std::collections::HashMap<u64, u64>,
    /// Compare free variables by display name instead of uid (used for
    /// parse/print round trips, where reparsing renumbers).
    frees_by_name: bool,
}

impl AlphaCx {
    fn bind(&mut self, l: u64, r: u64) -> (Option<u64>, Option<u64>) {
        (self.l2r.insert(l, r), self.r2l.insert(r, l))
    }

    fn unbind(&mut self, l: u64, r: u64, saved: (Option<u64>, Option<u64>)) {
        match saved.0 {
            Some(old) => {
                self.l2r.insert(l, old);
            }
            None => {
                self.l2r.remove(&l);
            }
        }
        match saved.1 {
            Some(old) => {
                self.r2l.insert(r, old);
            }
            None => {
                self.r2l.remove(&r);
            }
        }
    }

    /// Bound variables must correspond through the bijection; free variables
    /// compare by uid (or by name when `frees_by_name` is set).
    fn var_eq(&self, a: &Ident, b: &Ident) -> bool {
        match (self.l2r.get(&a.uid), self.r2l.get(&b.uid)) {
            (Some(&to), Some(&back)) => to == b.uid && back == a.uid,
            (None, None) => {
                if self.frees_by_name {
                    a.name == b.name
                } else {
                    a.uid == b.uid
                }
            }
            _ => false,
        }
    }

    fn scoped<T>(&mut self, l: u64, r: u64, f: impl FnOnce(&mut Self) -> T) -> T {
        let saved = self.bind(l, r);
        let out = f(self);
        self.unbind(l, r, saved);
        out
    }
}

/// Alpha-equivalence of types; free variables must be identical.
pub fn alpha_eq_ty(a: &Ty, b: &Ty) -> bool {
    go_ty(&mut AlphaCx::default(), a, b)
}

/// Alpha-equivalence with free variables compared by display name, for
/// comparing a tree against its reparse.
pub fn alpha_eq_ty_printed(a: &Ty, b: &Ty) -> bool {
    let mut cx = AlphaCx { frees_by_name: true, ..AlphaCx::default() };
    go_ty(&mut cx, a, b)
}

fn go_ty(cx: &mut AlphaCx, a: &Ty, b: &Ty) -> bool {
    fn go(cx: &mut AlphaCx, a: &Ty, b: &Ty) -> bool {
        match (&a.kind, &b.kind) {
            (TyKind::Unit, TyKind::Unit) => true,
            (TyKind::UVar(x), TyKind::UVar(y)) => cx.var_eq(&x.0, &y.0),
            (TyKind::EVar(x), TyKind::EVar(y)) => cx.var_eq(&x.0, &y.0),
            (TyKind::Bin(o1, l1, r1), TyKind::Bin(o2, l2, r2)) => {
                o1 == o2 && go(cx, l1, l2) && go(cx, r1, r2)
            }
            (TyKind::Forall(v1, k1, b1), TyKind::Forall(v2, k2, b2))
            | (TyKind::Exists(v1, k1, b1), TyKind::Exists(v2, k2, b2))
                if std::mem::discriminant(&a.kind) == std::mem::discriminant(&b.kind) =>
            {
                k1 == k2 && cx.scoped(v1.uid(), v2.uid(), |cx| go(cx, b1, b2))
            }
            (TyKind::Implies(p1, b1), TyKind::Implies(p2, b2)) => {
                go_prop(cx, p1, p2) && go(cx, b1, b2)
            }
            (TyKind::With(b1, p1), TyKind::With(b2, p2)) => {
                go(cx, b1, b2) && go_prop(cx, p1, p2)
            }
            (TyKind::Vec(t1, b1), TyKind::Vec(t2, b2)) => {
                go_term(cx, t1, t2) && go(cx, b1, b2)
            }
            _ => false,
        }
    }
    go(cx, a, b)
}

fn go_term(cx: &mut AlphaCx, a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Zero, Term::Zero) | (Term::Unit, Term::Unit) => true,
        (Term::Succ(x), Term::Succ(y)) => go_term(cx, x, y),
        (Term::UVar(x), Term::UVar(y)) => cx.var_eq(&x.0, &y.0),
        (Term::EVar(x), Term::EVar(y)) => cx.var_eq(&x.0, &y.0),
        (Term::Bin(o1, l1, r1), Term::Bin(o2, l2, r2)) => {
            o1 == o2 && go_term(cx, l1, l2) && go_term(cx, r1, r2)
        }
        _ => false,
    }
}

fn go_prop(cx: &mut AlphaCx, a: &Prop, b: &Prop) -> bool {
    go_term(cx, &a.0, &b.0) && go_term(cx, &a.1, &b.1)
}

pub fn alpha_eq_term(a: &Term, b: &Term) -> bool {
    go_term(&mut AlphaCx::default(), a, b)
}

/// Alpha-equivalence of expressions; free variables must be identical.
pub fn alpha_eq_expr(a: &Expr, b: &Expr) -> bool {
    go_expr(&mut AlphaCx::default(), a, b)
}

/// Expression alpha-equivalence with frees compared by name (reparse form).
pub fn alpha_eq_expr_printed(a: &Expr, b: &Expr) -> bool {
    let mut cx = AlphaCx { frees_by_name: true, ..AlphaCx::default() };
    go_expr(&mut cx, a, b)
}

fn go_expr(cx: &mut AlphaCx, a: &Expr, b: &Expr) -> bool {
    fn go(cx: &mut AlphaCx, a: &Expr, b: &Expr) -> bool {
        match (&a.kind, &b.kind) {
            (ExprKind::Var(x), ExprKind::Var(y)) => cx.var_eq(&x.0, &y.0),
            (ExprKind::Unit, ExprKind::Unit) | (ExprKind::Nil, ExprKind::Nil) => true,
            (ExprKind::Lam(x, b1), ExprKind::Lam(y, b2))
            | (ExprKind::Rec(x, b1), ExprKind::Rec(y, b2))
                if std::mem::discriminant(&a.kind) == std::mem::discriminant(&b.kind) =>
            {
                cx.scoped(x.uid(), y.uid(), |cx| go(cx, b1, b2))
            }
            (ExprKind::App(h1, s1), ExprKind::App(h2, s2)) => {
                go(cx, h1, h2)
                    && s1.0.len() == s2.0.len()
                    && s1.0.iter().zip(&s2.0).all(|(x, y)| go(cx, x, y))
            }
            (ExprKind::Anno(e1, t1), ExprKind::Anno(e2, t2)) => {
                // Annotation types are closed up to their own binders.
                let mut tycx = AlphaCx {
                    frees_by_name: cx.frees_by_name,
                    ..AlphaCx::default()
                };
                go(cx, e1, e2) && go_ty(&mut tycx, t1, t2)
            }
            (ExprKind::Pair(l1, r1), ExprKind::Pair(l2, r2))
            | (ExprKind::Cons(l1, r1), ExprKind::Cons(l2, r2))
                if std::mem::discriminant(&a.kind) == std::mem::discriminant(&b.kind) =>
            {
                go(cx, l1, l2) && go(cx, r1, r2)
            }
            (ExprKind::Inj(i1, e1), ExprKind::Inj(i2, e2)) => i1 == i2 && go(cx, e1, e2),
            (ExprKind::Case(s1, bs1), ExprKind::Case(s2, bs2)) => {
                go(cx, s1, s2)
                    && bs1.0.len() == bs2.0.len()
                    && bs1.0.iter().zip(&bs2.0).all(|(b1, b2)| go_branch(cx, b1, b2))
            }
            _ => false,
        }
    }

    fn go_branch(cx: &mut AlphaCx, b1: &Branch, b2: &Branch) -> bool {
        if b1.pats.len() != b2.pats.len() {
            return false;
        }
        let mut lv = Vec::new();
        let mut rv = Vec::new();
        for p in &b1.pats {
            p.vars_into(&mut lv);
        }
        for p in &b2.pats {
            p.vars_into(&mut rv);
        }
        if lv.len() != rv.len() {
            return false;
        }
        if !b1
            .pats
            .iter()
            .zip(&b2.pats)
            .all(|(p1, p2)| pat_shape_eq(p1, p2))
        {
            return false;
        }
        let mut saved = Vec::new();
        for (l, r) in lv.iter().zip(&rv) {
            saved.push(((l.uid(), r.uid()), cx.bind(l.uid(), r.uid())));
        }
        let out = go(cx, &b1.body, &b2.body);
        for ((l, r), s) in saved.into_iter().rev() {
            cx.unbind(l, r, s);
        }
        out
    }

    fn pat_shape_eq(a: &Pat, b: &Pat) -> bool {
        match (&a.kind, &b.kind) {
            (PatKind::Var(_), PatKind::Var(_)) => true,
            (PatKind::Wild, PatKind::Wild)
            | (PatKind::Unit, PatKind::Unit)
            | (PatKind::Nil, PatKind::Nil) => true,
            (PatKind::Pair(l1, r1), PatKind::Pair(l2, r2))
            | (PatKind::Cons(l1, r1), PatKind::Cons(l2, r2)) => {
                pat_shape_eq(l1, l2) && pat_shape_eq(r1, r2)
            }
            (PatKind::Inj(i1, p1), PatKind::Inj(i2, p2)) => i1 == i2 && pat_shape_eq(p1, p2),
            _ => false,
        }
    }

    go(cx, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv(name: &str, uid: u64) -> UVar {
        UVar(Ident::new(name, uid))
    }
    fn ev(name: &str, uid: u64) -> EVar {
        EVar(Ident::new(name, uid))
    }

    #[test]
    fn fev_excludes_bound_and_universal() {
        assert!(Ty::arrow(Ty::unit(), Ty::unit()).fev().is_empty());

        let a = ev("a", 1);
        let c = ev("c", 2);
        let b = uv("b", 3);
        // ^a -> forall b:*. ^c
        let ty = Ty::arrow(
            Ty::evar(a.clone()),
            Ty::forall(b, Sort::Star, Ty::evar(c.clone())),
        );
        let fev = ty.fev();
        assert_eq!(fev.into_iter().collect::<Vec<_>>(), vec![a.clone(), c]);

        // Vec (S ^n) alpha
        let n = ev("n", 4);
        let alpha = uv("alpha", 5);
        let ty = Ty::vec(Term::succ(Term::EVar(n.clone())), Ty::uvar(alpha));
        assert_eq!(ty.fev().into_iter().collect::<Vec<_>>(), vec![n]);
    }

    #[test]
    fn polarity_by_head() {
        let a = uv("a", 1);
        assert_eq!(
            Ty::forall(a.clone(), Sort::Star, Ty::uvar(a.clone())).polarity(),
            Polarity::Neg
        );
        let n = uv("n", 2);
        assert_eq!(
            Ty::exists(n.clone(), Sort::Nat, Ty::vec(Term::UVar(n), Ty::unit())).polarity(),
            Polarity::Pos
        );
        assert_eq!(Ty::arrow(Ty::unit(), Ty::unit()).polarity(), Polarity::Non);
    }

    #[test]
    fn subst_uvar_basics() {
        let a = uv("a", 1);
        // [1/a](a -> a) = 1 -> 1
        let ty = Ty::arrow(Ty::uvar(a.clone()), Ty::uvar(a.clone()));
        assert_eq!(
            ty.subst_uvar(&a, &Term::Unit),
            Ty::arrow(Ty::unit(), Ty::unit())
        );

        // shadowing: [1/a](forall a. a) = forall a. a
        let ty = Ty::forall(a.clone(), Sort::Star, Ty::uvar(a.clone()));
        assert_eq!(ty.subst_uvar(&a, &Term::Unit), ty);

        // [succ m / n](Vec n a) = Vec (succ m) a
        let n = uv("n", 2);
        let m = uv("m", 3);
        let ty = Ty::vec(Term::UVar(n.clone()), Ty::uvar(a.clone()));
        assert_eq!(
            ty.subst_uvar(&n, &Term::succ(Term::UVar(m.clone()))),
            Ty::vec(Term::succ(Term::UVar(m)), Ty::uvar(a))
        );
    }

    #[test]
    fn subst_identity_and_fev_bound() {
        let a = uv("a", 1);
        let e = ev("e", 2);
        let ty = Ty::forall(
            uv("b", 3),
            Sort::Star,
            Ty::arrow(Ty::uvar(a.clone()), Ty::evar(e)),
        );
        // identity substitution
        assert_eq!(ty.subst_uvar(&a, &Term::UVar(a.clone())), ty);
        // fev(subst) ⊆ fev(A) ∪ fev(τ)
        let tau = Term::EVar(ev("f", 4));
        let mut all = ty.fev();
        all.extend(tau.fev());
        assert!(ty.subst_uvar(&a, &tau).fev().is_subset(&all));
    }

    #[test]
    fn intro_case_value_predicates() {
        let x = TermVar(Ident::new("x", 1));
        let lam = Expr::lam(x.clone(), Expr::var(x.clone()));
        assert!(lam.is_checked_intro());
        assert!(Expr::unit().is_checked_intro());
        assert!(Expr::nil().is_checked_intro());

        let fix = Expr::rec(x.clone(), Expr::var(x.clone()));
        assert!(!fix.is_checked_intro());
        assert!(fix.is_value());
        assert!(!fix.is_case());

        let app = Expr::app(Expr::var(x.clone()), vec![Expr::unit()]);
        assert!(!app.is_value());
        assert!(!app.is_checked_intro());

        let kase = Expr::case(
            Expr::var(x.clone()),
            Branches::new(vec![Branch::new(vec![Pat::wild()], Expr::unit())]),
        );
        assert!(kase.is_case());
        assert!(!kase.is_checked_intro());
        assert!(!kase.is_value());
    }

    #[test]
    fn alpha_eq_renames_binders() {
        let a1 = uv("a", 1);
        let a2 = uv("zzz", 2);
        let t1 = Ty::forall(a1.clone(), Sort::Star, Ty::uvar(a1));
        let t2 = Ty::forall(a2.clone(), Sort::Star, Ty::uvar(a2));
        assert!(alpha_eq_ty(&t1, &t2));

        let b1 = uv("b", 3);
        let t3 = Ty::forall(b1.clone(), Sort::Nat, Ty::uvar(b1));
        assert!(!alpha_eq_ty(&t1, &t3));
    }
}
