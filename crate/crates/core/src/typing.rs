//! The main algorithmic judgments: checking, synthesis, spine typing with
//! principality recovery, branch typing with equality elimination, and match
//! coverage with pattern expansion.
//!
//! Dispatch is driven by the (expression form, type head) pair; the one
//! genuine overlap — a synthesizing expression checked against an asserting
//! type — is resolved by attempting the introduction rule first and falling
//! back to subsumption.

use crate::concrete::{print_pat, print_ty};
use crate::context::{Entry, EntryKey, MarkTag, Marker, TyCtx};
use crate::error::TypeError;
use crate::session::Tc;
use crate::solve::MaybeBottomCtx;
use crate::subtype::sub_polarity_for;
use crate::syntax::{
    Branch, Branches, Conn, Expr, ExprKind, Inj, Pat, PatKind, Principality, Prop, Sort, Term, Ty,
    TyKind,
};

/// Result of synthesis: the type, its principality, and the output context.
#[derive(Debug, Clone, PartialEq)]
pub struct Synth {
    pub ty: Ty,
    pub prin: Principality,
    pub out: TyCtx,
}

/// Result of a spine judgment.
#[derive(Debug, Clone, PartialEq)]
pub struct SpineOut {
    pub ty: Ty,
    pub prin: Principality,
    pub out: TyCtx,
}

/// Coverage failure witness: a human-readable description of an unhandled
/// case.
#[derive(Debug, Clone)]
pub struct Uncovered(pub String);

/// Pattern expansion modes used by coverage checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpandMode {
    Var,
    Unit,
    Pair,
    Sum,
    Vec,
}

/// One or two branch lists produced by [`expand`].
#[derive(Debug, Clone)]
pub enum Expansion {
    One(Branches),
    Two(Branches, Branches),
}

/// Expand the head patterns of every branch. Returns the offending pattern
/// when a head has the wrong shape for the mode; the enclosing coverage check
/// turns that into an uncovered-case witness.
pub fn expand(mode: ExpandMode, branches: &Branches) -> Result<Expansion, Pat> {
    let mut one = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for b in &branches.0 {
        let Some(head) = b.pats.first() else {
            // Branches must be nonempty in their pattern vectors here.
            return Err(Pat::wild());
        };
        let rest = || b.pats[1..].to_vec();
        match (mode, &head.kind) {
            (ExpandMode::Var, PatKind::Var(_) | PatKind::Wild) => {
                one.push(Branch::new(rest(), b.body.clone()));
            }
            (ExpandMode::Unit, PatKind::Var(_) | PatKind::Wild | PatKind::Unit) => {
                one.push(Branch::new(rest(), b.body.clone()));
            }
            (ExpandMode::Pair, PatKind::Pair(p1, p2)) => {
                let mut pats = vec![(**p1).clone(), (**p2).clone()];
                pats.extend(rest());
                one.push(Branch::new(pats, b.body.clone()));
            }
            (ExpandMode::Pair, PatKind::Var(_) | PatKind::Wild) => {
                let mut pats = vec![Pat::wild(), Pat::wild()];
                pats.extend(rest());
                one.push(Branch::new(pats, b.body.clone()));
            }
            (ExpandMode::Sum, PatKind::Inj(Inj::Inj1, p)) => {
                let mut pats = vec![(**p).clone()];
                pats.extend(rest());
                left.push(Branch::new(pats, b.body.clone()));
            }
            (ExpandMode::Sum, PatKind::Inj(Inj::Inj2, p)) => {
                let mut pats = vec![(**p).clone()];
                pats.extend(rest());
                right.push(Branch::new(pats, b.body.clone()));
            }
            (ExpandMode::Sum, PatKind::Var(_) | PatKind::Wild) => {
                let mut pats = vec![Pat::wild()];
                pats.extend(rest());
                left.push(Branch::new(pats.clone(), b.body.clone()));
                right.push(Branch::new(pats, b.body.clone()));
            }
            (ExpandMode::Vec, PatKind::Nil) => {
                left.push(Branch::new(rest(), b.body.clone()));
            }
            (ExpandMode::Vec, PatKind::Cons(p1, p2)) => {
                let mut pats = vec![(**p1).clone(), (**p2).clone()];
                pats.extend(rest());
                right.push(Branch::new(pats, b.body.clone()));
            }
            (ExpandMode::Vec, PatKind::Var(_) | PatKind::Wild) => {
                // Variables and wildcards go to both partitions, with the
                // arity adjusted per side: the nil branch consumes no
                // sub-values, the cons branch two.
                left.push(Branch::new(rest(), b.body.clone()));
                let mut pats = vec![Pat::wild(), Pat::wild()];
                pats.extend(rest());
                right.push(Branch::new(pats, b.body.clone()));
            }
            _ => return Err(head.clone()),
        }
    }
    Ok(match mode {
        ExpandMode::Var | ExpandMode::Unit | ExpandMode::Pair => Expansion::One(Branches(one)),
        ExpandMode::Sum | ExpandMode::Vec => {
            Expansion::Two(Branches(left), Branches(right))
        }
    })
}

impl Tc<'_> {
    /// `Γ ⊢ e ⇐ A p ⊣ Δ`: check `e` against `A` (which must be
    /// `[Γ]`-normalized and well-formed at `p`).
    pub fn check(
        &mut self,
        ctx: &TyCtx,
        p: Principality,
        e: &Expr,
        a: &Ty,
    ) -> Result<TyCtx, TypeError> {
        self.sess.step();
        debug_assert!(ctx.is_wf(), "check: ill-formed context");
        debug_assert_eq!(ctx.apply_ty(a), *a, "check: type must be normalized");

        // Fixed points and case expressions are checking forms for every
        // type head.
        match &e.kind {
            ExprKind::Rec(x, v) => {
                self.sess.trace("Rec", || x.name().to_string());
                let hyp = Entry::Hyp(x.clone(), a.clone(), p);
                let ctx2 = ctx.pushed(hyp);
                let out = self.check(&ctx2, p, v, a)?;
                return Ok(out.truncate_at(&EntryKey::Hyp(x.clone())));
            }
            ExprKind::Case(scrut, branches) => {
                self.sess.trace("Case", String::new);
                let Synth { ty: a0, prin: q, out: theta } = self.synth(ctx, scrut)?;
                if q != Principality::Bang {
                    return Err(TypeError::ScrutineeNotPrincipal { span: scrut.span });
                }
                let scrut_ty = theta.apply_ty(&a0);
                let target = theta.apply_ty(a);
                let tys = vec![scrut_ty.clone()];
                let delta = self.match_branches(&theta, p, branches, &tys, &target)?;
                let cov_ty = delta.apply_ty(&scrut_ty);
                debug_assert!(cov_ty.fev().is_empty(), "Case: pattern types must be ground");
                self.covers(&delta, branches, &[cov_ty])
                    .map_err(|w| TypeError::CoverageFailure { witness: w.0, span: e.span })?;
                return Ok(delta);
            }
            _ => {}
        }

        match &a.kind {
            TyKind::Forall(v, k, body) if e.is_checked_intro() => {
                // AllIntro
                self.sess.trace("AllIntro", || print_ty(a));
                let fresh = self.sess.fresh_uvar(v.name());
                let ctx2 = ctx.pushed(Entry::UVarDecl(fresh.clone(), *k));
                let body_r = body.subst_uvar(v, &Term::UVar(fresh.clone()));
                let out = self.check(&ctx2, p, e, &body_r)?;
                Ok(out.truncate_at(&EntryKey::UVar(fresh)))
            }
            TyKind::Implies(prop, body) if e.is_checked_intro() => {
                if p != Principality::Bang {
                    return Err(TypeError::GuardedNotPrincipal {
                        ty: print_ty(a),
                        span: e.span,
                    });
                }
                let marker = Marker {
                    uid: self.sess.fresh("mark").uid,
                    tag: MarkTag::Prop(prop.clone()),
                };
                let ctx2 = ctx.pushed(Entry::Mark(marker.clone()));
                match self.elim_prop(&ctx2, prop)? {
                    MaybeBottomCtx::Bottom => {
                        // ImpliesIntroBot: the hypothesis is impossible.
                        self.sess.trace("ImpliesIntroBot", || print_ty(a));
                        Ok(ctx.clone())
                    }
                    MaybeBottomCtx::Ok(theta) => {
                        self.sess.trace("ImpliesIntro", || print_ty(a));
                        let body_n = theta.apply_ty(body);
                        let out = self.check(&theta, Principality::Bang, e, &body_n)?;
                        Ok(out.truncate_at(&EntryKey::Mark(marker)))
                    }
                }
            }
            TyKind::With(body, prop) if !e.is_case() => {
                // WithIntro; for synthesizing forms, fall back to Sub when the
                // introduction path fails (both rules apply there).
                let attempt = self.with_intro(ctx, p, e, body, prop);
                match attempt {
                    Ok(out) => Ok(out),
                    Err(err) => {
                        if e.synthesizes() {
                            self.subsume(ctx, e, a)
                        } else {
                            Err(err)
                        }
                    }
                }
            }
            TyKind::EVar(alpha) if ctx.is_unsolved(alpha) => match &e.kind {
                ExprKind::Unit => {
                    // UnitIntroSolve
                    self.sess.trace("UnitIntroSolve", || format!("^{} := 1", alpha.name()));
                    Ok(ctx.solve(alpha, Sort::Star, Term::Unit))
                }
                ExprKind::Lam(x, body) => {
                    // ArrIntroSolve: articulate α̂ = α̂₁ -> α̂₂.
                    self.sess.trace("ArrIntroSolve", String::new);
                    let a1 = self.sess.fresh_evar(alpha.name());
                    let a2 = self.sess.fresh_evar(alpha.name());
                    let ctx2 = ctx.replace_evar(
                        alpha,
                        vec![
                            Entry::Unsolved(a1.clone(), Sort::Star),
                            Entry::Unsolved(a2.clone(), Sort::Star),
                            Entry::Solved(
                                alpha.clone(),
                                Sort::Star,
                                Term::bin(
                                    Conn::Arrow,
                                    Term::EVar(a1.clone()),
                                    Term::EVar(a2.clone()),
                                ),
                            ),
                        ],
                    );
                    let hyp = Entry::Hyp(x.clone(), Ty::evar(a1), Principality::Slash);
                    let ctx3 = ctx2.pushed(hyp);
                    let out =
                        self.check(&ctx3, Principality::Slash, body, &Ty::evar(a2))?;
                    Ok(out.truncate_at(&EntryKey::Hyp(x.clone())))
                }
                ExprKind::Pair(e1, e2) => {
                    // PairIntroSolve: articulate α̂ = α̂₁ × α̂₂.
                    self.sess.trace("PairIntroSolve", String::new);
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
                                Term::bin(
                                    Conn::Prod,
                                    Term::EVar(a1.clone()),
                                    Term::EVar(a2.clone()),
                                ),
                            ),
                        ],
                    );
                    let theta =
                        self.check(&ctx2, Principality::Slash, e1, &Ty::evar(a1))?;
                    let a2n = theta.apply_ty(&Ty::evar(a2));
                    self.check(&theta, Principality::Slash, e2, &a2n)
                }
                ExprKind::Inj(which, e0) => {
                    // SumIntroSolve_k: articulate α̂ = α̂₁ + α̂₂.
                    let rule = match which {
                        Inj::Inj1 => "SumIntroSolve1",
                        Inj::Inj2 => "SumIntroSolve2",
                    };
                    self.sess.trace(rule, String::new);
                    let a1 = self.sess.fresh_evar(alpha.name());
                    let a2 = self.sess.fresh_evar(alpha.name());
                    let ctx2 = ctx.replace_evar(
                        alpha,
                        vec![
                            Entry::Unsolved(a1.clone(), Sort::Star),
                            Entry::Unsolved(a2.clone(), Sort::Star),
                            Entry::Solved(
                                alpha.clone(),
                                Sort::Star,
                                Term::bin(
                                    Conn::Sum,
                                    Term::EVar(a1.clone()),
                                    Term::EVar(a2.clone()),
                                ),
                            ),
                        ],
                    );
                    let target = match which {
                        Inj::Inj1 => Ty::evar(a1),
                        Inj::Inj2 => Ty::evar(a2),
                    };
                    self.check(&ctx2, Principality::Slash, e0, &target)
                }
                _ if e.synthesizes() => self.subsume(ctx, e, a),
                _ => Err(self.mismatch(e, a)),
            },
            TyKind::Unit => match &e.kind {
                ExprKind::Unit => {
                    self.sess.trace("UnitIntro", String::new);
                    Ok(ctx.clone())
                }
                _ if e.synthesizes() => self.subsume(ctx, e, a),
                _ => Err(self.mismatch(e, a)),
            },
            TyKind::Bin(Conn::Arrow, a1, a2) => match &e.kind {
                ExprKind::Lam(x, body) => {
                    // ArrIntro
                    self.sess.trace("ArrIntro", || x.name().to_string());
                    let hyp = Entry::Hyp(x.clone(), (**a1).clone(), p);
                    let ctx2 = ctx.pushed(hyp);
                    let out = self.check(&ctx2, p, body, a2)?;
                    Ok(out.truncate_at(&EntryKey::Hyp(x.clone())))
                }
                _ if e.synthesizes() => self.subsume(ctx, e, a),
                _ => Err(self.mismatch(e, a)),
            },
            TyKind::Bin(Conn::Sum, a1, a2) => match &e.kind {
                ExprKind::Inj(which, e0) => {
                    let (rule, target) = match which {
                        Inj::Inj1 => ("SumIntro1", a1),
                        Inj::Inj2 => ("SumIntro2", a2),
                    };
                    self.sess.trace(rule, String::new);
                    self.check(ctx, p, e0, target)
                }
                _ if e.synthesizes() => self.subsume(ctx, e, a),
                _ => Err(self.mismatch(e, a)),
            },
            TyKind::Bin(Conn::Prod, a1, a2) => match &e.kind {
                ExprKind::Pair(e1, e2) => {
                    // PairIntro
                    self.sess.trace("PairIntro", String::new);
                    let theta = self.check(ctx, p, e1, a1)?;
                    let a2n = theta.apply_ty(a2);
                    self.check(&theta, p, e2, &a2n)
                }
                _ if e.synthesizes() => self.subsume(ctx, e, a),
                _ => Err(self.mismatch(e, a)),
            },
            TyKind::Vec(idx, elem) => match &e.kind {
                ExprKind::Nil => {
                    // Nil: the length must be zero.
                    self.sess.trace("Nil", String::new);
                    self.check_prop(ctx, &Prop(idx.clone(), Term::Zero))
                }
                ExprKind::Cons(e1, e2) => {
                    // Cons: the length must be a successor.
                    self.sess.trace("Cons", String::new);
                    let alpha = self.sess.fresh_evar("n");
                    let marker = Marker {
                        uid: self.sess.fresh("mark").uid,
                        tag: MarkTag::EVar(alpha.clone()),
                    };
                    let ctx2 = ctx.pushed_many([
                        Entry::Mark(marker.clone()),
                        Entry::Unsolved(alpha.clone(), Sort::Nat),
                    ]);
                    let gamma1 = self.check_prop(
                        &ctx2,
                        &Prop(idx.clone(), Term::succ(Term::EVar(alpha.clone()))),
                    )?;
                    let elem_n = gamma1.apply_ty(elem);
                    let theta = self.check(&gamma1, p, e1, &elem_n)?;
                    let tail_ty =
                        theta.apply_ty(&Ty::vec(Term::EVar(alpha), (**elem).clone()));
                    let out = self.check(&theta, Principality::Slash, e2, &tail_ty)?;
                    Ok(out.truncate_at(&EntryKey::Mark(marker)))
                }
                _ if e.synthesizes() => self.subsume(ctx, e, a),
                _ => Err(self.mismatch(e, a)),
            },
            TyKind::Exists(..) => {
                if e.synthesizes() || e.is_checked_intro() {
                    self.subsume(ctx, e, a)
                } else {
                    Err(self.mismatch(e, a))
                }
            }
            TyKind::UVar(_) | TyKind::Forall(..) | TyKind::Implies(..) | TyKind::With(..)
            | TyKind::EVar(_) => {
                if e.synthesizes() {
                    self.subsume(ctx, e, a)
                } else {
                    Err(self.mismatch(e, a))
                }
            }
        }
    }

    /// Rule `WithIntro`: check the proposition, then the body against the
    /// updated asserting type.
    fn with_intro(
        &mut self,
        ctx: &TyCtx,
        p: Principality,
        e: &Expr,
        body: &Ty,
        prop: &Prop,
    ) -> Result<TyCtx, TypeError> {
        self.sess.trace("WithIntro", String::new);
        let theta = self.check_prop(ctx, prop)?;
        let body_n = theta.apply_ty(body);
        self.check(&theta, p, e, &body_n)
    }

    /// Rule `Sub`: synthesize, then compare at the polarity of the target.
    fn subsume(&mut self, ctx: &TyCtx, e: &Expr, b: &Ty) -> Result<TyCtx, TypeError> {
        self.sess.trace("Sub", String::new);
        let Synth { ty: a, prin: _, out: theta } = self.synth(ctx, e)?;
        let an = theta.apply_ty(&a);
        let bn = theta.apply_ty(b);
        self.subtype(&theta, sub_polarity_for(&bn), &an, &bn)
    }

    fn mismatch(&self, e: &Expr, a: &Ty) -> TypeError {
        TypeError::TypeMismatch { expected: print_ty(a), span: e.span }
    }

    /// `Γ ⊢ e ⇒ A p ⊣ Δ`: synthesis. Only variables, annotations, and
    /// applications synthesize.
    pub fn synth(&mut self, ctx: &TyCtx, e: &Expr) -> Result<Synth, TypeError> {
        self.sess.step();
        debug_assert!(ctx.is_wf(), "synth: ill-formed context");
        match &e.kind {
            ExprKind::Var(x) => {
                let Some((ty, p)) = ctx.hyp(x) else {
                    return Err(TypeError::UnboundVariable {
                        name: x.name().to_string(),
                        span: e.span,
                    });
                };
                self.sess.trace("Var", || x.name().to_string());
                let ty = ty.clone();
                Ok(Synth { ty: ctx.apply_ty(&ty), prin: p, out: ctx.clone() })
            }
            ExprKind::Anno(body, anno) => {
                debug_assert!(anno.fev().is_empty(), "annotations carry no existentials");
                ctx.ty_wf_prin(anno, Principality::Bang).map_err(|err| match err {
                    TypeError::IllFormedType { ty, reason, .. } => {
                        TypeError::IllFormedType { ty, reason, span: anno.span }
                    }
                    other => other,
                })?;
                self.sess.trace("Anno", || print_ty(anno));
                let target = ctx.apply_ty(anno);
                let delta = self.check(ctx, Principality::Bang, body, &target)?;
                Ok(Synth {
                    ty: delta.apply_ty(anno),
                    prin: Principality::Bang,
                    out: delta,
                })
            }
            ExprKind::App(head, spine) => {
                self.sess.trace("ArrElim", String::new);
                let Synth { ty: a, prin: p, out: theta } = self.synth(ctx, head)?;
                let an = theta.apply_ty(&a);
                let SpineOut { ty, prin, out } = self.recspine(&theta, &spine.0, &an, p)?;
                Ok(Synth { ty, prin, out })
            }
            _ => Err(TypeError::CannotSynthesize { span: e.span }),
        }
    }

    /// `Γ ⊢ s : A p ≫ C q ⊣ Δ`: spine typing.
    pub fn spine(
        &mut self,
        ctx: &TyCtx,
        s: &[Expr],
        a: &Ty,
        p: Principality,
    ) -> Result<SpineOut, TypeError> {
        self.sess.step();
        debug_assert!(ctx.is_wf(), "spine: ill-formed context");
        let Some((arg, rest)) = s.split_first() else {
            // EmptySpine
            self.sess.trace("EmptySpine", String::new);
            return Ok(SpineOut { ty: a.clone(), prin: p, out: ctx.clone() });
        };

        match &a.kind {
            TyKind::Forall(v, k, body) => {
                // AllSpine: instantiate with a fresh existential; the result
                // is no longer principal.
                self.sess.trace("AllSpine", || print_ty(a));
                let alpha = self.sess.fresh_evar(v.name());
                let ctx2 = ctx.pushed(Entry::Unsolved(alpha.clone(), *k));
                let body_i = body.subst_uvar(v, &Term::EVar(alpha));
                self.spine(&ctx2, s, &body_i, Principality::Slash)
            }
            TyKind::Implies(prop, body) => {
                // ImpliesSpine
                self.sess.trace("ImpliesSpine", String::new);
                let theta = self.check_prop(ctx, prop)?;
                let body_n = theta.apply_ty(body);
                self.spine(&theta, s, &body_n, p)
            }
            TyKind::Bin(Conn::Arrow, a1, a2) => {
                // ArrSpine
                self.sess.trace("ArrSpine", String::new);
                let theta = self.check(ctx, p, arg, a1)?;
                let a2n = theta.apply_ty(a2);
                self.spine(&theta, rest, &a2n, p)
            }
            TyKind::EVar(alpha) if ctx.is_unsolved(alpha) => {
                // SolveSpine: articulate α̂ = α̂₁ -> α̂₂.
                self.sess.trace("SolveSpine", String::new);
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
                            Term::bin(Conn::Arrow, Term::EVar(a1.clone()), Term::EVar(a2.clone())),
                        ),
                    ],
                );
                let arrow = Ty::arrow(Ty::evar(a1), Ty::evar(a2));
                self.spine(&ctx2, s, &arrow, Principality::Slash)
            }
            _ => Err(TypeError::NotAFunction { ty: print_ty(a), span: arg.span }),
        }
    }

    /// `Γ ⊢ s : A p ≫ C ⌈q⌉ ⊣ Δ`: spine typing, recovering principality when
    /// the result type came out ground.
    pub fn recspine(
        &mut self,
        ctx: &TyCtx,
        s: &[Expr],
        a: &Ty,
        p: Principality,
    ) -> Result<SpineOut, TypeError> {
        self.sess.step();
        let SpineOut { ty, prin, out } = self.spine(ctx, s, a, p)?;
        if p == Principality::Bang && prin == Principality::Slash {
            let resolved = out.apply_ty(&ty);
            if resolved.fev().is_empty() {
                // Recover: no other result type was possible.
                self.sess.trace("Recover", || print_ty(&resolved));
                return Ok(SpineOut { ty: resolved, prin: Principality::Bang, out });
            }
        }
        self.sess.trace("Pass", String::new);
        Ok(SpineOut { ty, prin, out })
    }

    /// `Γ ⊢ Π :: A⃗ ⇐ C p ⊣ Δ`: check every branch.
    pub fn match_branches(
        &mut self,
        ctx: &TyCtx,
        p: Principality,
        branches: &Branches,
        tys: &[Ty],
        c: &Ty,
    ) -> Result<TyCtx, TypeError> {
        self.sess.step();
        match branches.0.split_first() {
            None => {
                // MatchEmpty
                self.sess.trace("MatchEmpty", String::new);
                Ok(ctx.clone())
            }
            Some((first, [])) => self.match_branch(ctx, p, first, tys, c),
            Some((first, rest)) => {
                // MatchSeq
                self.sess.trace("MatchSeq", String::new);
                let theta = self.match_branch(ctx, p, first, tys, c)?;
                self.match_branches(&theta, p, &Branches(rest.to_vec()), tys, c)
            }
        }
    }

    /// Check a single branch. Pattern types and the body type are normalized
    /// against the current context on entry, so equations introduced by
    /// earlier eliminations take effect.
    fn match_branch(
        &mut self,
        ctx: &TyCtx,
        p: Principality,
        branch: &Branch,
        tys: &[Ty],
        c: &Ty,
    ) -> Result<TyCtx, TypeError> {
        self.sess.step();
        debug_assert!(ctx.is_wf(), "match_branch: ill-formed context");
        let tys: Vec<Ty> = ctx.apply_tys(tys);
        let c = ctx.apply_ty(c);

        let (pat, pats_rest) = match branch.pats.split_first() {
            None if tys.is_empty() => {
                // MatchBase
                self.sess.trace("MatchBase", String::new);
                return self.check(ctx, p, &branch.body, &c);
            }
            None => {
                return Err(TypeError::PatternArity {
                    pats: 0,
                    tys: tys.len(),
                    span: branch.body.span,
                });
            }
            Some((pat, rest)) => {
                if tys.is_empty() {
                    return Err(TypeError::PatternArity {
                        pats: branch.pats.len(),
                        tys: 0,
                        span: pat.span,
                    });
                }
                (pat, rest)
            }
        };
        let (ty, tys_rest) = tys.split_first().unwrap();

        // The first type's head decides the existential/asserting cases for
        // every pattern shape.
        match &ty.kind {
            TyKind::Exists(v, k, body) => {
                // MatchExists
                self.sess.trace("MatchExists", String::new);
                let fresh = self.sess.fresh_uvar(v.name());
                let ctx2 = ctx.pushed(Entry::UVarDecl(fresh.clone(), *k));
                let body_r = body.subst_uvar(v, &Term::UVar(fresh.clone()));
                let mut new_tys = vec![body_r];
                new_tys.extend(tys_rest.iter().cloned());
                let out = self.match_branch(&ctx2, p, branch, &new_tys, &c)?;
                return Ok(out.truncate_at(&EntryKey::UVar(fresh)));
            }
            TyKind::With(body, prop) => {
                // MatchWith
                self.sess.trace("MatchWith", String::new);
                let mut new_tys = vec![(**body).clone()];
                new_tys.extend(tys_rest.iter().cloned());
                return self.match_elim(ctx, p, branch, prop, &new_tys, &c);
            }
            _ => {}
        }

        match (&pat.kind, &ty.kind) {
            (PatKind::Var(z), _) if !ty.is_with_or_exists() => {
                // MatchNeg: the variable binds at principality !.
                self.sess.trace("MatchNeg", || z.name().to_string());
                let hyp = Entry::Hyp(z.clone(), ty.clone(), Principality::Bang);
                let ctx2 = ctx.pushed(hyp);
                let rest_branch = Branch::new(pats_rest.to_vec(), branch.body.clone());
                let out = self.match_branch(&ctx2, p, &rest_branch, tys_rest, &c)?;
                Ok(out.truncate_at(&EntryKey::Hyp(z.clone())))
            }
            (PatKind::Wild, _) if !ty.is_with_or_exists() => {
                // MatchWild
                self.sess.trace("MatchWild", String::new);
                let rest_branch = Branch::new(pats_rest.to_vec(), branch.body.clone());
                self.match_branch(ctx, p, &rest_branch, tys_rest, &c)
            }
            (PatKind::Unit, TyKind::Unit) => {
                // MatchUnit
                self.sess.trace("MatchUnit", String::new);
                let rest_branch = Branch::new(pats_rest.to_vec(), branch.body.clone());
                self.match_branch(ctx, p, &rest_branch, tys_rest, &c)
            }
            (PatKind::Pair(p1, p2), TyKind::Bin(Conn::Prod, a1, a2)) => {
                // MatchPair
                self.sess.trace("MatchPair", String::new);
                let mut pats = vec![(**p1).clone(), (**p2).clone()];
                pats.extend(pats_rest.iter().cloned());
                let mut new_tys = vec![(**a1).clone(), (**a2).clone()];
                new_tys.extend(tys_rest.iter().cloned());
                self.match_branch(ctx, p, &Branch::new(pats, branch.body.clone()), &new_tys, &c)
            }
            (PatKind::Inj(which, p0), TyKind::Bin(Conn::Sum, a1, a2)) => {
                // MatchSum_k
                let (rule, target) = match which {
                    Inj::Inj1 => ("MatchSum1", a1),
                    Inj::Inj2 => ("MatchSum2", a2),
                };
                self.sess.trace(rule, String::new);
                let mut pats = vec![(**p0).clone()];
                pats.extend(pats_rest.iter().cloned());
                let mut new_tys = vec![(**target).clone()];
                new_tys.extend(tys_rest.iter().cloned());
                self.match_branch(ctx, p, &Branch::new(pats, branch.body.clone()), &new_tys, &c)
            }
            (PatKind::Nil, TyKind::Vec(idx, _)) => {
                // MatchNil: assume the length is zero.
                self.sess.trace("MatchNil", String::new);
                let rest_branch = Branch::new(pats_rest.to_vec(), branch.body.clone());
                self.match_elim(
                    ctx,
                    p,
                    &rest_branch,
                    &Prop(idx.clone(), Term::Zero),
                    tys_rest,
                    &c,
                )
            }
            (PatKind::Cons(p1, p2), TyKind::Vec(idx, elem)) => {
                // MatchCons: a fresh universal stands for the tail length.
                self.sess.trace("MatchCons", String::new);
                let n = self.sess.fresh_uvar("n");
                let ctx2 = ctx.pushed(Entry::UVarDecl(n.clone(), Sort::Nat));
                let mut pats = vec![(**p1).clone(), (**p2).clone()];
                pats.extend(pats_rest.iter().cloned());
                let mut new_tys = vec![
                    (**elem).clone(),
                    Ty::vec(Term::UVar(n.clone()), (**elem).clone()),
                ];
                new_tys.extend(tys_rest.iter().cloned());
                let prop = Prop(idx.clone(), Term::succ(Term::UVar(n.clone())));
                let out = self.match_elim(
                    &ctx2,
                    p,
                    &Branch::new(pats, branch.body.clone()),
                    &prop,
                    &new_tys,
                    &c,
                )?;
                Ok(out.truncate_at(&EntryKey::UVar(n)))
            }
            _ => Err(TypeError::PatternMismatch { ty: print_ty(ty), span: pat.span }),
        }
    }

    /// `Γ / P ⊢ π :: A⃗ ⇐ C p ⊣ Δ`: incorporate an index equation while
    /// checking one branch.
    pub fn match_elim(
        &mut self,
        ctx: &TyCtx,
        p: Principality,
        branch: &Branch,
        prop: &Prop,
        tys: &[Ty],
        c: &Ty,
    ) -> Result<TyCtx, TypeError> {
        self.sess.step();
        debug_assert!(prop.fev().is_empty(), "match_elim: proposition must be ground");
        let marker = Marker {
            uid: self.sess.fresh("mark").uid,
            tag: MarkTag::Prop(prop.clone()),
        };
        let ctx2 = ctx.pushed(Entry::Mark(marker.clone()));
        match self.elim_prop(&ctx2, prop)? {
            MaybeBottomCtx::Bottom => {
                // MatchBot: impossible case, vacuously well-typed.
                self.sess.trace("MatchBot", || crate::concrete::print_prop(prop));
                Ok(ctx.clone())
            }
            MaybeBottomCtx::Ok(theta) => {
                // MatchUnify: equations are visible inside, dropped at exit.
                self.sess.trace("MatchUnify", || crate::concrete::print_prop(prop));
                let out = self.match_branch(&theta, p, branch, tys, c)?;
                Ok(out.truncate_at(&EntryKey::Mark(marker)))
            }
        }
    }

    /// `Γ ⊢ Π covers A⃗`: coverage. The pattern types must be ground.
    pub fn covers(
        &mut self,
        ctx: &TyCtx,
        branches: &Branches,
        tys: &[Ty],
    ) -> Result<(), Uncovered> {
        self.sess.step();
        debug_assert!(
            tys.iter().all(|t| t.fev().is_empty()),
            "covers: pattern types must be ground"
        );
        let Some((ty, tys_rest)) = tys.split_first() else {
            // CoversEmpty
            self.sess.trace("CoversEmpty", String::new);
            return match branches.0.first() {
                Some(b) if b.pats.is_empty() => Ok(()),
                _ => Err(Uncovered("no branch matches".into())),
            };
        };

        match &ty.kind {
            TyKind::Unit => {
                // CoversUnit
                self.sess.trace("CoversUnit", String::new);
                let pi = expand_or_witness(ExpandMode::Unit, branches)?;
                let Expansion::One(pi) = pi else { unreachable!() };
                self.covers(ctx, &pi, tys_rest)
            }
            TyKind::Bin(Conn::Prod, a1, a2) => {
                // CoversTimes
                self.sess.trace("CoversTimes", String::new);
                let pi = expand_or_witness(ExpandMode::Pair, branches)?;
                let Expansion::One(pi) = pi else { unreachable!() };
                let mut new_tys = vec![(**a1).clone(), (**a2).clone()];
                new_tys.extend(tys_rest.iter().cloned());
                self.covers(ctx, &pi, &new_tys)
            }
            TyKind::Bin(Conn::Sum, a1, a2) => {
                // CoversSum
                self.sess.trace("CoversSum", String::new);
                let pi = expand_or_witness(ExpandMode::Sum, branches)?;
                let Expansion::Two(l, r) = pi else { unreachable!() };
                let mut l_tys = vec![(**a1).clone()];
                l_tys.extend(tys_rest.iter().cloned());
                self.covers(ctx, &l, &l_tys)
                    .map_err(|w| Uncovered(format!("in the inj1 case: {}", w.0)))?;
                let mut r_tys = vec![(**a2).clone()];
                r_tys.extend(tys_rest.iter().cloned());
                self.covers(ctx, &r, &r_tys)
                    .map_err(|w| Uncovered(format!("in the inj2 case: {}", w.0)))
            }
            TyKind::Exists(v, k, body) => {
                // CoversEx
                self.sess.trace("CoversEx", String::new);
                let fresh = self.sess.fresh_uvar(v.name());
                let ctx2 = ctx.pushed(Entry::UVarDecl(fresh.clone(), *k));
                let body_r = body.subst_uvar(v, &Term::UVar(fresh));
                let mut new_tys = vec![body_r];
                new_tys.extend(tys_rest.iter().cloned());
                self.covers(&ctx2, branches, &new_tys)
            }
            TyKind::With(body, prop) => {
                // CoversWith
                self.sess.trace("CoversWith", String::new);
                let mut new_tys = vec![(**body).clone()];
                new_tys.extend(tys_rest.iter().cloned());
                self.covers_assuming(ctx, prop, branches, &new_tys)
            }
            TyKind::Vec(idx, elem)
                if branches.0.iter().any(|b| {
                    matches!(
                        b.pats.first().map(|p| &p.kind),
                        Some(PatKind::Nil | PatKind::Cons(..))
                    )
                }) =>
            {
                // CoversVec. Applies only when some branch scrutinizes the
                // vector; otherwise every head is a variable or wildcard and
                // CoversVar below decides (expanding those into nil/cons
                // partitions forever would not terminate).
                self.sess.trace("CoversVec", String::new);
                let pi = expand_or_witness(ExpandMode::Vec, branches)?;
                let Expansion::Two(nil_part, cons_part) = pi else { unreachable!() };

                let nil_prop = Prop(idx.clone(), Term::Zero);
                self.covers_assuming(ctx, &nil_prop, &nil_part, tys_rest)
                    .map_err(|w| Uncovered(format!("in the [] case: {}", w.0)))?;

                let n = self.sess.fresh_uvar("n");
                let ctx2 = ctx.pushed(Entry::UVarDecl(n.clone(), Sort::Nat));
                let cons_prop = Prop(idx.clone(), Term::succ(Term::UVar(n.clone())));
                let mut cons_tys = vec![
                    (**elem).clone(),
                    Ty::vec(Term::UVar(n), (**elem).clone()),
                ];
                cons_tys.extend(tys_rest.iter().cloned());
                self.covers_assuming(&ctx2, &cons_prop, &cons_part, &cons_tys)
                    .map_err(|w| Uncovered(format!("in the :: case: {}", w.0)))
            }
            _ => {
                // CoversVar: variables and wildcards absorb the value.
                self.sess.trace("CoversVar", String::new);
                let pi = expand_or_witness(ExpandMode::Var, branches)?;
                let Expansion::One(pi) = pi else { unreachable!() };
                self.covers(ctx, &pi, tys_rest)
            }
        }
    }

    /// `Γ / P ⊢ Π covers A⃗`: coverage under an index equation. An
    /// unsatisfiable equation covers vacuously.
    pub fn covers_assuming(
        &mut self,
        ctx: &TyCtx,
        prop: &Prop,
        branches: &Branches,
        tys: &[Ty],
    ) -> Result<(), Uncovered> {
        self.sess.step();
        let l = ctx.apply_term(&prop.0);
        let r = ctx.apply_term(&prop.1);
        match self.elim_eq(ctx, &l, &r, Sort::Nat) {
            Ok(MaybeBottomCtx::Bottom) => {
                // CoversEqBot
                self.sess.trace("CoversEqBot", String::new);
                Ok(())
            }
            Ok(MaybeBottomCtx::Ok(delta)) => {
                // CoversEq: apply the unifier to the branches and the types.
                self.sess.trace("CoversEq", String::new);
                let branches_n = delta.apply_branches(branches);
                let tys_n = delta.apply_tys(tys);
                self.covers(&delta, &branches_n, &tys_n)
            }
            Err(e) => Err(Uncovered(format!("equation could not be processed: {e}"))),
        }
    }
}

fn expand_or_witness(mode: ExpandMode, branches: &Branches) -> Result<Expansion, Uncovered> {
    expand(mode, branches)
        .map_err(|pat| Uncovered(format!("pattern `{}` does not fit here", print_pat(&pat))))
}
