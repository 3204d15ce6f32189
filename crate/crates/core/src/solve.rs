//! Existential-variable instantiation, equation checking, proposition
//! checking, and the assumption-incorporating (eliminating) judgments.
//!
//! Inputs to these judgments are context-normalized at entry; the rules whose
//! premises mention `[Θ]` re-normalize pending arguments against the
//! intermediate context.

use crate::concrete::print_term;
use crate::context::{Entry, EntryKey, TyCtx};
use crate::error::TypeError;
use crate::session::Tc;
use crate::syntax::{EVar, Prop, Sort, Term};

/// Result of an eliminating judgment: a (possibly extended) context, or
/// inconsistency.
#[derive(Debug, Clone, PartialEq)]
pub enum MaybeBottomCtx {
    Ok(TyCtx),
    Bottom,
}

/// `σ # τ`: the two terms have incompatible head constructors.
pub fn clash(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Zero, Term::Succ(_)) | (Term::Succ(_), Term::Zero) => true,
        (Term::Unit, Term::Bin(..)) | (Term::Bin(..), Term::Unit) => true,
        (Term::Bin(o1, ..), Term::Bin(o2, ..)) => o1 != o2,
        _ => false,
    }
}

impl Tc<'_> {
    /// `Γ ⊢ α̂ := t : κ ⊣ Δ`: instantiate `α̂` so that `α̂ = t`.
    ///
    /// Preconditions: `α̂` unsolved in `Γ`, `[Γ]t = t`, `α̂ ∉ FEV(t)`, and `t`
    /// well-sorted at `κ`. Dispatch tries `InstSolve` whenever `t` is
    /// well-sorted under the prefix left of `α̂`, then `InstReach`, then the
    /// structural rules.
    pub fn instantiate(
        &mut self,
        ctx: &TyCtx,
        alpha: &EVar,
        t: &Term,
        k: Sort,
    ) -> Result<TyCtx, TypeError> {
        self.sess.step();
        debug_assert!(ctx.is_wf(), "instantiate: ill-formed context");
        debug_assert!(ctx.is_unsolved(alpha), "instantiate: target must be unsolved");
        debug_assert_eq!(ctx.apply_term(t), *t, "instantiate: term must be normalized");
        debug_assert!(!t.fev().contains(alpha), "instantiate: occurs violation");

        let (left, _, _) = ctx
            .split_at(&EntryKey::EVar(alpha.clone()))
            .expect("instantiate: target not declared");

        // InstSolve: t is well-formed under the prefix strictly left of α̂.
        if left.sort_of(t).is_ok_and(|s| s == k) {
            self.sess.trace("InstSolve", || format!("^{} := {}", alpha.name(), print_term(t)));
            return Ok(ctx.solve(alpha, k, t.clone()));
        }

        match t {
            // InstReach: t is an unsolved existential declared right of α̂.
            Term::EVar(beta) if ctx.is_unsolved(beta) => {
                let alpha_pos = ctx.position(&EntryKey::EVar(alpha.clone())).unwrap();
                let beta_pos = ctx.position(&EntryKey::EVar(beta.clone())).unwrap();
                if beta_pos > alpha_pos && ctx.unsolved_sort(beta) == Some(k) {
                    self.sess
                        .trace("InstReach", || format!("^{} := ^{}", beta.name(), alpha.name()));
                    Ok(ctx.solve(beta, k, Term::EVar(alpha.clone())))
                } else {
                    Err(TypeError::CannotInstantiate {
                        var: format!("^{}", alpha.name()),
                        term: print_term(t),
                    })
                }
            }
            // InstBin: articulate α̂ = α̂₁ ⊕ α̂₂ and recurse.
            Term::Bin(op, t1, t2) if k == Sort::Star => {
                self.sess.trace("InstBin", || format!("^{} := {}", alpha.name(), print_term(t)));
                let a1 = self.sess.fresh_evar(alpha.name());
                let a2 = self.sess.fresh_evar(alpha.name());
                let ctx2 = ctx.replace_evar(
                    alpha,
                    vec![
                        Entry::Unsolved(a2.clone(), Sort::Star),
                        Entry::Unsolved(a1.clone(), Sort::Star),
                        Entry::Solved(
                            alpha.clone(),
                            Sort::Star,
                            Term::bin(*op, Term::EVar(a1.clone()), Term::EVar(a2.clone())),
                        ),
                    ],
                );
                let theta = self.instantiate(&ctx2, &a1, t1, Sort::Star)?;
                let t2n = theta.apply_term(t2);
                self.instantiate(&theta, &a2, &t2n, Sort::Star)
            }
            // InstSucc: articulate α̂ = S α̂₁ and recurse.
            Term::Succ(t1) if k == Sort::Nat => {
                self.sess.trace("InstSucc", || format!("^{} := {}", alpha.name(), print_term(t)));
                let a1 = self.sess.fresh_evar(alpha.name());
                let ctx2 = ctx.replace_evar(
                    alpha,
                    vec![
                        Entry::Unsolved(a1.clone(), Sort::Nat),
                        Entry::Solved(alpha.clone(), Sort::Nat, Term::succ(Term::EVar(a1.clone()))),
                    ],
                );
                self.instantiate(&ctx2, &a1, t1, Sort::Nat)
            }
            _ => Err(TypeError::CannotInstantiate {
                var: format!("^{}", alpha.name()),
                term: print_term(t),
            }),
        }
    }

    /// `Γ ⊢ σ ≐ t : κ ⊣ Δ`: check that the two terms are equal, solving
    /// existentials as needed. Inputs must be `[Γ]`-normalized.
    pub fn check_eq(
        &mut self,
        ctx: &TyCtx,
        a: &Term,
        b: &Term,
        k: Sort,
    ) -> Result<TyCtx, TypeError> {
        self.sess.step();
        debug_assert!(ctx.is_wf(), "check_eq: ill-formed context");
        match (a, b) {
            // CheckeqVar
            (Term::UVar(x), Term::UVar(y)) if x == y => {
                self.sess.trace("CheckeqVar", String::new);
                Ok(ctx.clone())
            }
            (Term::EVar(x), Term::EVar(y)) if x == y => {
                self.sess.trace("CheckeqVar", String::new);
                Ok(ctx.clone())
            }
            // CheckeqUnit / CheckeqZero
            (Term::Unit, Term::Unit) if k == Sort::Star => {
                self.sess.trace("CheckeqUnit", String::new);
                Ok(ctx.clone())
            }
            (Term::Zero, Term::Zero) if k == Sort::Nat => {
                self.sess.trace("CheckeqZero", String::new);
                Ok(ctx.clone())
            }
            // CheckeqSucc
            (Term::Succ(a1), Term::Succ(b1)) if k == Sort::Nat => {
                self.sess.trace("CheckeqSucc", String::new);
                self.check_eq(ctx, a1, b1, Sort::Nat)
            }
            // CheckeqBin
            (Term::Bin(o1, a1, a2), Term::Bin(o2, b1, b2)) if o1 == o2 && k == Sort::Star => {
                self.sess.trace("CheckeqBin", String::new);
                let theta = self.check_eq(ctx, a1, b1, Sort::Star)?;
                let a2n = theta.apply_term(a2);
                let b2n = theta.apply_term(b2);
                self.check_eq(&theta, &a2n, &b2n, Sort::Star)
            }
            // CheckeqInstL (preferred when both sides are distinct unsolved
            // existentials; the outputs coincide either way).
            (Term::EVar(alpha), t) if ctx.is_unsolved(alpha) => {
                if t.fev().contains(alpha) {
                    return Err(TypeError::OccursCheck {
                        var: format!("^{}", alpha.name()),
                        term: print_term(t),
                    });
                }
                self.sess.trace("CheckeqInstL", String::new);
                self.instantiate(ctx, alpha, t, k)
            }
            // CheckeqInstR
            (t, Term::EVar(alpha)) if ctx.is_unsolved(alpha) => {
                if t.fev().contains(alpha) {
                    return Err(TypeError::OccursCheck {
                        var: format!("^{}", alpha.name()),
                        term: print_term(t),
                    });
                }
                self.sess.trace("CheckeqInstR", String::new);
                self.instantiate(ctx, alpha, t, k)
            }
            // A universal variable equated with a term containing it: report
            // the occurs failure specifically.
            (Term::UVar(x), t) | (t, Term::UVar(x)) if t.fuv().contains(x) => {
                Err(TypeError::OccursCheck { var: x.name().to_string(), term: print_term(t) })
            }
            _ => Err(TypeError::NotEqual { left: print_term(a), right: print_term(b) }),
        }
    }

    /// `Γ ⊢ P true ⊣ Δ`: check a proposition (rule `CheckpropEq`).
    pub fn check_prop(&mut self, ctx: &TyCtx, p: &Prop) -> Result<TyCtx, TypeError> {
        self.sess.step();
        self.sess.trace("CheckpropEq", || crate::concrete::print_prop(p));
        let l = ctx.apply_term(&p.0);
        let r = ctx.apply_term(&p.1);
        self.check_eq(ctx, &l, &r, Sort::Nat)
    }

    /// `Γ / σ ≐ τ : κ ⊣ Δ⊥`: unify the two sides, extending the context with
    /// universal-variable equations, or return inconsistency.
    pub fn elim_eq(
        &mut self,
        ctx: &TyCtx,
        a: &Term,
        b: &Term,
        k: Sort,
    ) -> Result<MaybeBottomCtx, TypeError> {
        self.sess.step();
        debug_assert!(ctx.is_wf(), "elim_eq: ill-formed context");
        match (a, b) {
            // ElimeqUvarRefl
            (Term::UVar(x), Term::UVar(y)) if x == y => {
                self.sess.trace("ElimeqUvarRefl", String::new);
                Ok(MaybeBottomCtx::Ok(ctx.clone()))
            }
            // ElimeqZero / ElimeqUnit
            (Term::Zero, Term::Zero) if k == Sort::Nat => {
                self.sess.trace("ElimeqZero", String::new);
                Ok(MaybeBottomCtx::Ok(ctx.clone()))
            }
            (Term::Unit, Term::Unit) if k == Sort::Star => {
                self.sess.trace("ElimeqUnit", String::new);
                Ok(MaybeBottomCtx::Ok(ctx.clone()))
            }
            // ElimeqSucc
            (Term::Succ(a1), Term::Succ(b1)) if k == Sort::Nat => {
                self.sess.trace("ElimeqSucc", String::new);
                self.elim_eq(ctx, a1, b1, Sort::Nat)
            }
            // ElimeqUvarL / ElimeqUvarL⊥
            (Term::UVar(x), t) => {
                if t.fuv().contains(x) {
                    self.sess.trace("ElimeqUvarLBot", String::new);
                    return Ok(MaybeBottomCtx::Bottom);
                }
                debug_assert!(ctx.eqn(x).is_none(), "elim_eq: input not normalized");
                self.sess
                    .trace("ElimeqUvarL", || format!("{} = {}", x.name(), print_term(t)));
                Ok(MaybeBottomCtx::Ok(ctx.pushed(Entry::Eqn(x.clone(), t.clone()))))
            }
            // ElimeqUvarR / ElimeqUvarR⊥
            (t, Term::UVar(x)) => {
                if t.fuv().contains(x) {
                    self.sess.trace("ElimeqUvarRBot", String::new);
                    return Ok(MaybeBottomCtx::Bottom);
                }
                debug_assert!(ctx.eqn(x).is_none(), "elim_eq: input not normalized");
                self.sess
                    .trace("ElimeqUvarR", || format!("{} = {}", x.name(), print_term(t)));
                Ok(MaybeBottomCtx::Ok(ctx.pushed(Entry::Eqn(x.clone(), t.clone()))))
            }
            // ElimeqBin / ElimeqBinBot
            (Term::Bin(o1, a1, a2), Term::Bin(o2, b1, b2)) if o1 == o2 && k == Sort::Star => {
                self.sess.trace("ElimeqBin", String::new);
                match self.elim_eq(ctx, a1, b1, Sort::Star)? {
                    MaybeBottomCtx::Ok(theta) => {
                        let a2n = theta.apply_term(a2);
                        let b2n = theta.apply_term(b2);
                        self.elim_eq(&theta, &a2n, &b2n, Sort::Star)
                    }
                    MaybeBottomCtx::Bottom => {
                        self.sess.trace("ElimeqBinBot", String::new);
                        Ok(MaybeBottomCtx::Bottom)
                    }
                }
            }
            // ElimeqInstL / ElimeqInstR: the existential cases delegate to
            // instantiation; an occurs violation is inconsistency.
            (Term::EVar(alpha), t) if ctx.is_unsolved(alpha) => {
                if t.fev().contains(alpha) {
                    return Ok(MaybeBottomCtx::Bottom);
                }
                self.sess.trace("ElimeqInstL", String::new);
                self.instantiate(ctx, alpha, t, k).map(MaybeBottomCtx::Ok)
            }
            (t, Term::EVar(alpha)) if ctx.is_unsolved(alpha) => {
                if t.fev().contains(alpha) {
                    return Ok(MaybeBottomCtx::Bottom);
                }
                self.sess.trace("ElimeqInstR", String::new);
                self.instantiate(ctx, alpha, t, k).map(MaybeBottomCtx::Ok)
            }
            // ElimeqClash
            _ if clash(a, b) => {
                self.sess.trace("ElimeqClash", String::new);
                Ok(MaybeBottomCtx::Bottom)
            }
            _ => Err(TypeError::NotEqual { left: print_term(a), right: print_term(b) }),
        }
    }

    /// `Γ / P ⊣ Δ⊥`: incorporate a hypothesis (rule `ElimpropEq`).
    pub fn elim_prop(&mut self, ctx: &TyCtx, p: &Prop) -> Result<MaybeBottomCtx, TypeError> {
        self.sess.step();
        self.sess.trace("ElimpropEq", || crate::concrete::print_prop(p));
        let l = ctx.apply_term(&p.0);
        let r = ctx.apply_term(&p.1);
        self.elim_eq(ctx, &l, &r, Sort::Nat)
    }
}
