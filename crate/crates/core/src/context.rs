//! Ordered algorithmic contexts: declarations, existential solutions,
//! universal-variable equations, and scope markers. A context doubles as a
//! substitution ([`TyCtx::apply_ty`] and friends), supports hole surgery
//! ([`TyCtx::split_at`]), and is related to more-solved contexts by
//! [`extends`]. Applying a complete context erases every existential
//! ([`CompleteCtx::apply_to_ctx`]).

use std::fmt;

use crate::error::TypeError;
use crate::syntax::{
    Branch, Branches, EVar, Expr, ExprKind, Principality, Prop, Sort, Spine, Term, TermVar, Ty,
    TyKind, UVar,
};

/// A scope marker `▸u` / `▸P`. Markers are identified by a fresh uid, so two
/// markers for textually identical propositions stay distinct.
#[derive(Debug, Clone)]
pub struct Marker {
    pub uid: u64,
    pub tag: MarkTag,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MarkTag {
    EVar(EVar),
    Prop(Prop),
}

impl PartialEq for Marker {
    fn eq(&self, other: &Marker) -> bool {
        self.uid == other.uid
    }
}
impl Eq for Marker {}

/// One context entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    /// `α : κ`
    UVarDecl(UVar, Sort),
    /// `α̂ : κ`
    Unsolved(EVar, Sort),
    /// `α̂ : κ = τ`
    Solved(EVar, Sort, Term),
    /// `x : A p`
    Hyp(TermVar, Ty, Principality),
    /// `α = t` (an equation on a universal variable declared to the left)
    Eqn(UVar, Term),
    /// `▸u` / `▸P`
    Mark(Marker),
}

/// What to look for when splitting or truncating a context.
#[derive(Debug, Clone)]
pub enum EntryKey {
    UVar(UVar),
    EVar(EVar),
    Hyp(TermVar),
    Mark(Marker),
}

impl Entry {
    fn matches_key(&self, key: &EntryKey) -> bool {
        match (self, key) {
            (Entry::UVarDecl(u, _), EntryKey::UVar(v)) => u == v,
            (Entry::Unsolved(e, _) | Entry::Solved(e, _, _), EntryKey::EVar(f)) => e == f,
            (Entry::Hyp(x, _, _), EntryKey::Hyp(y)) => x == y,
            (Entry::Mark(m), EntryKey::Mark(n)) => m == n,
            _ => false,
        }
    }
}

/// An ordered algorithmic context (leftmost entry is earliest). All
/// operations are functional: they return new contexts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TyCtx {
    entries: Vec<Entry>,
}

impl TyCtx {
    pub fn empty() -> TyCtx {
        TyCtx::default()
    }

    pub fn from_entries(entries: Vec<Entry>) -> TyCtx {
        TyCtx { entries }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn pushed(&self, entry: Entry) -> TyCtx {
        let mut out = self.clone();
        out.entries.push(entry);
        out
    }

    pub fn pushed_many(&self, entries: impl IntoIterator<Item = Entry>) -> TyCtx {
        let mut out = self.clone();
        out.entries.extend(entries);
        out
    }

    // -- lookups ------------------------------------------------------------

    pub fn hyp(&self, x: &TermVar) -> Option<(&Ty, Principality)> {
        self.entries.iter().rev().find_map(|e| match e {
            Entry::Hyp(y, ty, p) if y == x => Some((ty, *p)),
            _ => None,
        })
    }

    pub fn uvar_sort(&self, u: &UVar) -> Option<Sort> {
        self.entries.iter().find_map(|e| match e {
            Entry::UVarDecl(v, k) if v == u => Some(*k),
            _ => None,
        })
    }

    pub fn unsolved_sort(&self, e: &EVar) -> Option<Sort> {
        self.entries.iter().find_map(|en| match en {
            Entry::Unsolved(f, k) if f == e => Some(*k),
            _ => None,
        })
    }

    pub fn is_unsolved(&self, e: &EVar) -> bool {
        self.unsolved_sort(e).is_some()
    }

    pub fn solution(&self, e: &EVar) -> Option<(Sort, &Term)> {
        self.entries.iter().find_map(|en| match en {
            Entry::Solved(f, k, t) if f == e => Some((*k, t)),
            _ => None,
        })
    }

    /// Sort of an existential variable, solved or not.
    pub fn evar_sort(&self, e: &EVar) -> Option<Sort> {
        self.entries.iter().find_map(|en| match en {
            Entry::Unsolved(f, k) | Entry::Solved(f, k, _) if f == e => Some(*k),
            _ => None,
        })
    }

    pub fn eqn(&self, u: &UVar) -> Option<&Term> {
        self.entries.iter().find_map(|en| match en {
            Entry::Eqn(v, t) if v == u => Some(t),
            _ => None,
        })
    }

    pub fn unsolved_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e, Entry::Unsolved(..)))
            .count()
    }

    pub fn position(&self, key: &EntryKey) -> Option<usize> {
        self.entries.iter().position(|e| e.matches_key(key))
    }

    // -- hole surgery ---------------------------------------------------------

    /// Split at the unique entry matching `target`: concatenating the pieces
    /// restores the context.
    pub fn split_at(&self, target: &EntryKey) -> Option<(TyCtx, Entry, TyCtx)> {
        let idx = self.position(target)?;
        let left = TyCtx::from_entries(self.entries[..idx].to_vec());
        let right = TyCtx::from_entries(self.entries[idx + 1..].to_vec());
        Some((left, self.entries[idx].clone(), right))
    }

    /// Drop the entry matching `key` and everything to its right.
    pub fn truncate_at(&self, key: &EntryKey) -> TyCtx {
        match self.position(key) {
            Some(idx) => TyCtx::from_entries(self.entries[..idx].to_vec()),
            None => self.clone(),
        }
    }

    /// Replace the (unsolved) declaration of `target` by `entries`,
    /// realizing rewrites like `Γ[α̂₁, α̂₂, α̂ = α̂₁ → α̂₂]`.
    pub fn replace_evar(&self, target: &EVar, entries: Vec<Entry>) -> TyCtx {
        let idx = self
            .position(&EntryKey::EVar(target.clone()))
            .expect("replace_evar: target not in context");
        let mut out = self.entries[..idx].to_vec();
        out.extend(entries);
        out.extend_from_slice(&self.entries[idx + 1..]);
        TyCtx::from_entries(out)
    }

    /// Solve `α̂ := τ` in place (the declaration keeps its position).
    pub fn solve(&self, target: &EVar, sort: Sort, term: Term) -> TyCtx {
        self.replace_evar(target, vec![Entry::Solved(target.clone(), sort, term)])
    }

    // -- substitution -------------------------------------------------------

    /// Apply the context as a substitution: solved existentials and equated
    /// universals are replaced, transitively; everything else is fixed.
    pub fn apply_ty(&self, ty: &Ty) -> Ty {
        let kind = match &ty.kind {
            TyKind::Unit => TyKind::Unit,
            TyKind::UVar(u) => match self.eqn(u) {
                Some(t) => return self.apply_term(t).to_ty().at(ty.span),
                None => TyKind::UVar(u.clone()),
            },
            TyKind::EVar(e) => match self.solution(e) {
                Some((_, t)) => return self.apply_term(t).to_ty().at(ty.span),
                None => TyKind::EVar(e.clone()),
            },
            TyKind::Bin(op, l, r) => {
                TyKind::Bin(*op, Box::new(self.apply_ty(l)), Box::new(self.apply_ty(r)))
            }
            TyKind::Forall(v, k, b) => TyKind::Forall(v.clone(), *k, Box::new(self.apply_ty(b))),
            TyKind::Exists(v, k, b) => TyKind::Exists(v.clone(), *k, Box::new(self.apply_ty(b))),
            TyKind::Implies(p, b) => TyKind::Implies(self.apply_prop(p), Box::new(self.apply_ty(b))),
            TyKind::With(b, p) => TyKind::With(Box::new(self.apply_ty(b)), self.apply_prop(p)),
            TyKind::Vec(t, b) => TyKind::Vec(self.apply_term(t), Box::new(self.apply_ty(b))),
        };
        Ty { kind, span: ty.span }
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Zero | Term::Unit => t.clone(),
            Term::UVar(u) => match self.eqn(u) {
                Some(s) => self.apply_term(s),
                None => t.clone(),
            },
            Term::EVar(e) => match self.solution(e) {
                Some((_, s)) => self.apply_term(s),
                None => t.clone(),
            },
            Term::Succ(s) => Term::succ(self.apply_term(s)),
            Term::Bin(op, l, r) => Term::bin(*op, self.apply_term(l), self.apply_term(r)),
        }
    }

    pub fn apply_prop(&self, p: &Prop) -> Prop {
        Prop(self.apply_term(&p.0), self.apply_term(&p.1))
    }

    pub fn apply_tys(&self, tys: &[Ty]) -> Vec<Ty> {
        tys.iter().map(|t| self.apply_ty(t)).collect()
    }

    /// Apply the context to the annotation types embedded in an expression.
    pub fn apply_expr(&self, e: &Expr) -> Expr {
        let kind = match &e.kind {
            ExprKind::Var(_) | ExprKind::Unit | ExprKind::Nil => e.kind.clone(),
            ExprKind::Lam(x, b) => ExprKind::Lam(x.clone(), Box::new(self.apply_expr(b))),
            ExprKind::Rec(x, b) => ExprKind::Rec(x.clone(), Box::new(self.apply_expr(b))),
            ExprKind::Anno(b, t) => ExprKind::Anno(Box::new(self.apply_expr(b)), self.apply_ty(t)),
            ExprKind::App(h, s) => ExprKind::App(
                Box::new(self.apply_expr(h)),
                Spine(s.0.iter().map(|a| self.apply_expr(a)).collect()),
            ),
            ExprKind::Pair(l, r) => {
                ExprKind::Pair(Box::new(self.apply_expr(l)), Box::new(self.apply_expr(r)))
            }
            ExprKind::Cons(l, r) => {
                ExprKind::Cons(Box::new(self.apply_expr(l)), Box::new(self.apply_expr(r)))
            }
            ExprKind::Inj(i, b) => ExprKind::Inj(*i, Box::new(self.apply_expr(b))),
            ExprKind::Case(s, bs) => {
                ExprKind::Case(Box::new(self.apply_expr(s)), self.apply_branches(bs))
            }
        };
        Expr { kind, span: e.span }
    }

    pub fn apply_branches(&self, bs: &Branches) -> Branches {
        Branches(
            bs.0.iter()
                .map(|b| Branch::new(b.pats.clone(), self.apply_expr(&b.body)))
                .collect(),
        )
    }

    // -- sorting and well-formedness -----------------------------------------

    /// Sort of a term under this context.
    pub fn sort_of(&self, t: &Term) -> Result<Sort, TypeError> {
        match t {
            Term::Zero => Ok(Sort::Nat),
            Term::Unit => Ok(Sort::Star),
            Term::Succ(s) => {
                let k = self.sort_of(s)?;
                if k == Sort::Nat {
                    Ok(Sort::Nat)
                } else {
                    Err(TypeError::SortMismatch {
                        term: crate::concrete::print_term(s),
                        expected: "N".into(),
                    })
                }
            }
            Term::UVar(u) => self.uvar_sort(u).ok_or_else(|| TypeError::UnboundVariable {
                name: u.name().to_string(),
                span: crate::syntax::Span::DUMMY,
            }),
            Term::EVar(e) => self.evar_sort(e).ok_or_else(|| TypeError::UnboundVariable {
                name: format!("^{}", e.name()),
                span: crate::syntax::Span::DUMMY,
            }),
            Term::Bin(_, l, r) => {
                for side in [l, r] {
                    let k = self.sort_of(side)?;
                    if k != Sort::Star {
                        return Err(TypeError::SortMismatch {
                            term: crate::concrete::print_term(side),
                            expected: "*".into(),
                        });
                    }
                }
                Ok(Sort::Star)
            }
        }
    }

    fn check_sort(&self, t: &Term, want: Sort) -> Result<(), TypeError> {
        let got = self.sort_of(t)?;
        if got == want {
            Ok(())
        } else {
            Err(TypeError::SortMismatch {
                term: crate::concrete::print_term(t),
                expected: want.to_string(),
            })
        }
    }

    pub fn prop_wf(&self, p: &Prop) -> Result<(), TypeError> {
        self.check_sort(&p.0, Sort::Nat)?;
        self.check_sort(&p.1, Sort::Nat)
    }

    /// Structural type well-formedness, with the failing subterm reported.
    pub fn ty_wf(&self, ty: &Ty) -> Result<(), TypeError> {
        match &ty.kind {
            TyKind::Unit => Ok(()),
            TyKind::UVar(u) => match self.uvar_sort(u) {
                Some(Sort::Star) => Ok(()),
                Some(Sort::Nat) => Err(TypeError::IllFormedType {
                    ty: crate::concrete::print_ty(ty),
                    reason: format!("`{}` is an index variable, not a type", u.name()),
                    span: ty.span,
                }),
                None => Err(TypeError::IllFormedType {
                    ty: crate::concrete::print_ty(ty),
                    reason: format!("unbound type variable `{}`", u.name()),
                    span: ty.span,
                }),
            },
            TyKind::EVar(e) => match self.evar_sort(e) {
                Some(Sort::Star) => Ok(()),
                Some(Sort::Nat) => Err(TypeError::IllFormedType {
                    ty: crate::concrete::print_ty(ty),
                    reason: format!("`^{}` is an index variable, not a type", e.name()),
                    span: ty.span,
                }),
                None => Err(TypeError::IllFormedType {
                    ty: crate::concrete::print_ty(ty),
                    reason: format!("unbound existential variable `^{}`", e.name()),
                    span: ty.span,
                }),
            },
            TyKind::Bin(_, l, r) => {
                self.ty_wf(l)?;
                self.ty_wf(r)
            }
            TyKind::Forall(v, k, b) | TyKind::Exists(v, k, b) => self
                .pushed(Entry::UVarDecl(v.clone(), *k))
                .ty_wf(b),
            TyKind::Implies(p, b) => {
                self.prop_wf(p)?;
                self.ty_wf(b)
            }
            TyKind::With(b, p) => {
                self.ty_wf(b)?;
                self.prop_wf(p)
            }
            TyKind::Vec(t, b) => {
                self.check_sort(t, Sort::Nat)?;
                self.ty_wf(b)
            }
        }
    }

    /// Well-formedness respecting principality: at `!` the context-applied
    /// type must have no free existential variables.
    pub fn ty_wf_prin(&self, ty: &Ty, p: Principality) -> Result<(), TypeError> {
        self.ty_wf(ty)?;
        if p == Principality::Bang {
            let applied = self.apply_ty(ty);
            if !applied.fev().is_empty() {
                return Err(TypeError::AnnotationNotPrincipal {
                    ty: crate::concrete::print_ty(&applied),
                    span: ty.span,
                });
            }
        }
        Ok(())
    }

    pub fn wf_type(&self, ty: &Ty, p: Principality) -> bool {
        self.ty_wf_prin(ty, p).is_ok()
    }

    /// Context well-formedness: unique declarations, well-sorted solutions
    /// and equations, at most one equation per universal variable.
    pub fn is_wf(&self) -> bool {
        let mut prefix = TyCtx::empty();
        for entry in &self.entries {
            let ok = match entry {
                Entry::UVarDecl(u, _) => {
                    prefix.uvar_sort(u).is_none() && prefix.evar_sort(&EVar(u.0.clone())).is_none()
                }
                Entry::Unsolved(e, _) => {
                    prefix.evar_sort(e).is_none() && prefix.uvar_sort(&UVar(e.0.clone())).is_none()
                }
                Entry::Solved(e, k, t) => {
                    prefix.evar_sort(e).is_none() && prefix.sort_of(t).is_ok_and(|s| s == *k)
                }
                Entry::Hyp(x, ty, p) => {
                    prefix.hyp(x).is_none()
                        && prefix.ty_wf(ty).is_ok()
                        && (*p == Principality::Slash
                            || prefix.apply_ty(ty).fev().is_empty())
                }
                Entry::Eqn(u, t) => match prefix.uvar_sort(u) {
                    Some(k) => prefix.eqn(u).is_none() && prefix.sort_of(t).is_ok_and(|s| s == k),
                    None => false,
                },
                Entry::Mark(m) => !prefix
                    .entries
                    .iter()
                    .any(|e| matches!(e, Entry::Mark(n) if n == m)),
            };
            if !ok {
                return false;
            }
            prefix.entries.push(entry.clone());
        }
        true
    }
}

/// `Γ ⟶ Δ`: the deterministic right-to-left matcher for context extension.
/// Entries of `Δ` that are existential declarations absent from the current
/// suffix of `Γ` are consumed greedily; equality side conditions compare
/// under `[Δ]`.
pub fn extends(gamma: &TyCtx, delta: &TyCtx) -> bool {
    let mut g = gamma.entries.as_slice();
    let mut d = delta.entries.as_slice();
    loop {
        let Some(dl) = d.last() else {
            return g.is_empty();
        };
        let matched = match (g.last(), dl) {
            (Some(Entry::UVarDecl(u, k)), Entry::UVarDecl(v, k2)) if u == v => Some(k == k2),
            (Some(Entry::Eqn(u, t)), Entry::Eqn(v, t2)) if u == v => {
                Some(delta.apply_term(t) == delta.apply_term(t2))
            }
            (Some(Entry::Hyp(x, a, p)), Entry::Hyp(y, b, q)) if x == y => {
                Some(p == q && delta.apply_ty(a) == delta.apply_ty(b))
            }
            (Some(Entry::Mark(m)), Entry::Mark(n)) if m == n => Some(true),
            (Some(Entry::Unsolved(e, k)), Entry::Unsolved(f, k2)) if e == f => Some(k == k2),
            (Some(Entry::Unsolved(e, k)), Entry::Solved(f, k2, _)) if e == f => Some(k == k2),
            (Some(Entry::Solved(e, k, t)), Entry::Solved(f, k2, t2)) if e == f => {
                Some(k == k2 && delta.apply_term(t) == delta.apply_term(t2))
            }
            (Some(Entry::Solved(e, _, _)), Entry::Unsolved(f, _)) if e == f => Some(false),
            _ => None,
        };
        match matched {
            Some(true) => {
                g = &g[..g.len() - 1];
                d = &d[..d.len() - 1];
            }
            Some(false) => return false,
            None => {
                // An existential entry of Δ with no counterpart here is an
                // insertion; anything else is a mismatch.
                if matches!(dl, Entry::Unsolved(..) | Entry::Solved(..)) {
                    d = &d[..d.len() - 1];
                } else {
                    return false;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Declarative contexts and complete contexts
// ---------------------------------------------------------------------------

/// A declarative context: universal declarations and hypotheses only, no
/// existentials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DeclCtx {
    pub entries: Vec<DeclEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeclEntry {
    UVar(UVar, Sort),
    Hyp(TermVar, Ty, Principality),
}

impl DeclCtx {
    pub fn empty() -> DeclCtx {
        DeclCtx::default()
    }

    pub fn pushed(&self, e: DeclEntry) -> DeclCtx {
        let mut out = self.clone();
        out.entries.push(e);
        out
    }

    pub fn hyp(&self, x: &TermVar) -> Option<(&Ty, Principality)> {
        self.entries.iter().rev().find_map(|e| match e {
            DeclEntry::Hyp(y, ty, p) if y == x => Some((ty, *p)),
            _ => None,
        })
    }

    pub fn uvar_sort(&self, u: &UVar) -> Option<Sort> {
        self.entries.iter().find_map(|e| match e {
            DeclEntry::UVar(v, k) if v == u => Some(*k),
            _ => None,
        })
    }

    /// View as an algorithmic context (purely for the shared syntactic
    /// well-formedness and sorting checks).
    pub fn to_tyctx(&self) -> TyCtx {
        TyCtx::from_entries(
            self.entries
                .iter()
                .map(|e| match e {
                    DeclEntry::UVar(u, k) => Entry::UVarDecl(u.clone(), *k),
                    DeclEntry::Hyp(x, ty, p) => Entry::Hyp(x.clone(), ty.clone(), *p),
                })
                .collect(),
        )
    }

    pub fn subst_uvar(&self, var: &UVar, t: &Term) -> DeclCtx {
        DeclCtx {
            entries: self
                .entries
                .iter()
                .map(|e| match e {
                    DeclEntry::UVar(..) => e.clone(),
                    DeclEntry::Hyp(x, ty, p) => {
                        DeclEntry::Hyp(x.clone(), ty.subst_uvar(var, t), *p)
                    }
                })
                .collect(),
        }
    }
}

/// A complete context: an algorithmic context with no unsolved existentials.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteCtx(TyCtx);

impl CompleteCtx {
    pub fn new(ctx: TyCtx) -> Result<CompleteCtx, TypeError> {
        if let Some(Entry::Unsolved(e, _)) = ctx
            .entries
            .iter()
            .find(|en| matches!(en, Entry::Unsolved(..)))
        {
            return Err(TypeError::IllFormedType {
                ty: format!("^{}", e.name()),
                reason: "complete context has an unsolved existential".into(),
                span: crate::syntax::Span::DUMMY,
            });
        }
        Ok(CompleteCtx(ctx))
    }

    /// Complete a context by solving every unsolved existential with a ground
    /// default (`1` at sort `*`, `Z` at sort `N`).
    pub fn canonical(ctx: &TyCtx) -> CompleteCtx {
        let entries = ctx
            .entries
            .iter()
            .map(|e| match e {
                Entry::Unsolved(v, k) => {
                    let t = match k {
                        Sort::Star => Term::Unit,
                        Sort::Nat => Term::Zero,
                    };
                    Entry::Solved(v.clone(), *k, t)
                }
                other => other.clone(),
            })
            .collect();
        CompleteCtx(TyCtx::from_entries(entries))
    }

    pub fn as_ctx(&self) -> &TyCtx {
        &self.0
    }

    pub fn apply_ty(&self, ty: &Ty) -> Ty {
        self.0.apply_ty(ty)
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        self.0.apply_term(t)
    }

    /// `[Ω]Γ`: map a context this one extends down to a declarative context.
    /// Existential entries are erased, hypotheses become `x : [Ω]A`, equated
    /// universals are substituted into the remainder, markers are dropped.
    pub fn apply_to_ctx(&self, gamma: &TyCtx) -> Result<DeclCtx, TypeError> {
        fn mismatch(om: Option<&Entry>, ga: Option<&Entry>) -> TypeError {
            TypeError::IllFormedType {
                ty: format!("{:?} vs {:?}", om, ga),
                reason: "complete context does not extend this context".into(),
                span: crate::syntax::Span::DUMMY,
            }
        }

        fn go(omega: &CompleteCtx, om: &[Entry], ga: &[Entry]) -> Result<DeclCtx, TypeError> {
            match (om.last(), ga.last()) {
                (None, None) => Ok(DeclCtx::empty()),
                (Some(Entry::Solved(e, _, _)), gl) => {
                    // Existential entries of Ω are erased; they may or may not
                    // have a counterpart in Γ.
                    let ga2 = match gl {
                        Some(Entry::Solved(f, _, _)) if f == e => &ga[..ga.len() - 1],
                        Some(Entry::Unsolved(f, _)) if f == e => &ga[..ga.len() - 1],
                        _ => ga,
                    };
                    go(omega, &om[..om.len() - 1], ga2)
                }
                (Some(Entry::Hyp(x, a, p)), Some(Entry::Hyp(y, a2, q))) if x == y && p == q => {
                    let oa = omega.apply_ty(a);
                    if oa != omega.apply_ty(a2) {
                        return Err(mismatch(om.last(), ga.last()));
                    }
                    let mut rest = go(omega, &om[..om.len() - 1], &ga[..ga.len() - 1])?;
                    rest.entries.push(DeclEntry::Hyp(x.clone(), oa, *p));
                    Ok(rest)
                }
                (Some(Entry::UVarDecl(u, k)), Some(Entry::UVarDecl(v, k2))) if u == v && k == k2 => {
                    let mut rest = go(omega, &om[..om.len() - 1], &ga[..ga.len() - 1])?;
                    rest.entries.push(DeclEntry::UVar(u.clone(), *k));
                    Ok(rest)
                }
                (Some(Entry::Mark(m)), Some(Entry::Mark(n))) if m == n => {
                    go(omega, &om[..om.len() - 1], &ga[..ga.len() - 1])
                }
                (Some(Entry::Eqn(u, t)), Some(Entry::Eqn(v, t2))) if u == v => {
                    let ot = omega.apply_term(t);
                    if ot != omega.apply_term(t2) {
                        return Err(mismatch(om.last(), ga.last()));
                    }
                    let rest = go(omega, &om[..om.len() - 1], &ga[..ga.len() - 1])?;
                    Ok(rest.subst_uvar(u, &ot))
                }
                (om_l, ga_l) => Err(mismatch(om_l, ga_l)),
            }
        }

        go(self, &self.0.entries, &gamma.entries)
    }
}

impl fmt::Display for TyCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::concrete::print_ctx(self))
    }
}
