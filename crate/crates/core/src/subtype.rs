//! Algorithmic type equivalence, proposition equivalence, and polarized
//! subtyping. Quantifier rules scope their fresh declarations with markers or
//! the declaration itself and truncate the output context there.

use crate::concrete::{print_prop, print_ty};
use crate::context::{Entry, EntryKey, MarkTag, Marker, TyCtx};
use crate::error::TypeError;
use crate::session::Tc;
use crate::syntax::{Polarity, Prop, Sort, Term, Ty, TyKind};

/// The polarity at which rule `Sub` invokes subtyping: positive for
/// exists-headed types, negative otherwise.
pub fn sub_polarity_for(b: &Ty) -> Polarity {
    match b.polarity() {
        Polarity::Pos => Polarity::Pos,
        _ => Polarity::Neg,
    }
}

impl Tc<'_> {
    /// `Γ ⊢ P ≡ Q ⊣ Δ` (rule `PropequivEq`): left-hand sides first, then the
    /// right-hand sides under the intermediate context.
    pub fn equiv_props(&mut self, ctx: &TyCtx, p: &Prop, q: &Prop) -> Result<TyCtx, TypeError> {
        self.sess.step();
        self.sess
            .trace("PropequivEq", || format!("{} == {}", print_prop(p), print_prop(q)));
        let theta = self
            .check_eq(ctx, &p.0, &q.0, Sort::Nat)
            .map_err(|_| not_equiv_prop(p, q))?;
        let p1 = theta.apply_term(&p.1);
        let q1 = theta.apply_term(&q.1);
        self.check_eq(&theta, &p1, &q1, Sort::Nat)
            .map_err(|_| not_equiv_prop(p, q))
    }

    /// `Γ ⊢ A ≡ B ⊣ Δ`: structural equivalence, instantiating existentials.
    /// Inputs must be `[Γ]`-normalized.
    pub fn equiv_types(&mut self, ctx: &TyCtx, a: &Ty, b: &Ty) -> Result<TyCtx, TypeError> {
        self.sess.step();
        debug_assert!(ctx.is_wf(), "equiv_types: ill-formed context");
        let fail = || TypeError::NotEquivalent { left: print_ty(a), right: print_ty(b) };
        match (&a.kind, &b.kind) {
            // EquivVar / EquivExvar / EquivUnit
            (TyKind::UVar(x), TyKind::UVar(y)) if x == y => {
                self.sess.trace("EquivVar", String::new);
                Ok(ctx.clone())
            }
            (TyKind::EVar(x), TyKind::EVar(y)) if x == y => {
                self.sess.trace("EquivExvar", String::new);
                Ok(ctx.clone())
            }
            (TyKind::Unit, TyKind::Unit) => {
                self.sess.trace("EquivUnit", String::new);
                Ok(ctx.clone())
            }
            // EquivBin
            (TyKind::Bin(o1, a1, a2), TyKind::Bin(o2, b1, b2)) if o1 == o2 => {
                self.sess.trace("EquivBin", String::new);
                let theta = self.equiv_types(ctx, a1, b1)?;
                let a2n = theta.apply_ty(a2);
                let b2n = theta.apply_ty(b2);
                self.equiv_types(&theta, &a2n, &b2n)
            }
            // EquivVec: index terms first, then element types.
            (TyKind::Vec(t1, a1), TyKind::Vec(t2, a2)) => {
                self.sess.trace("EquivVec", String::new);
                let theta = self
                    .check_eq(ctx, t1, t2, Sort::Nat)
                    .map_err(|_| fail())?;
                let a1n = theta.apply_ty(a1);
                let a2n = theta.apply_ty(a2);
                self.equiv_types(&theta, &a1n, &a2n)
            }
            // EquivAll / EquivExists: alpha-rename to a shared fresh variable,
            // then truncate the output at its declaration.
            (TyKind::Forall(v1, k1, b1), TyKind::Forall(v2, k2, b2)) => {
                if k1 != k2 {
                    return Err(fail());
                }
                self.sess.trace("EquivAll", String::new);
                self.equiv_under_binder(ctx, v1, v2, *k1, b1, b2)
            }
            (TyKind::Exists(v1, k1, b1), TyKind::Exists(v2, k2, b2)) => {
                if k1 != k2 {
                    return Err(fail());
                }
                self.sess.trace("EquivExists", String::new);
                self.equiv_under_binder(ctx, v1, v2, *k1, b1, b2)
            }
            // EquivImplies / EquivWith
            (TyKind::Implies(p, a0), TyKind::Implies(q, b0)) => {
                self.sess.trace("EquivImplies", String::new);
                let theta = self.equiv_props(ctx, p, q)?;
                let a0n = theta.apply_ty(a0);
                let b0n = theta.apply_ty(b0);
                self.equiv_types(&theta, &a0n, &b0n)
            }
            (TyKind::With(a0, p), TyKind::With(b0, q)) => {
                self.sess.trace("EquivWith", String::new);
                let theta = self.equiv_props(ctx, p, q)?;
                let a0n = theta.apply_ty(a0);
                let b0n = theta.apply_ty(b0);
                self.equiv_types(&theta, &a0n, &b0n)
            }
            // EquivInstL / EquivInstR (InstL preferred when both sides are
            // distinct unsolved existentials).
            (TyKind::EVar(alpha), _) if ctx.is_unsolved(alpha) => {
                let Some(tau) = b.as_term() else {
                    return Err(fail());
                };
                if tau.fev().contains(alpha) {
                    return Err(TypeError::OccursCheck {
                        var: format!("^{}", alpha.name()),
                        term: print_ty(b),
                    });
                }
                self.sess.trace("EquivInstL", String::new);
                self.instantiate(ctx, alpha, &tau, Sort::Star)
            }
            (_, TyKind::EVar(alpha)) if ctx.is_unsolved(alpha) => {
                let Some(tau) = a.as_term() else {
                    return Err(fail());
                };
                if tau.fev().contains(alpha) {
                    return Err(TypeError::OccursCheck {
                        var: format!("^{}", alpha.name()),
                        term: print_ty(a),
                    });
                }
                self.sess.trace("EquivInstR", String::new);
                self.instantiate(ctx, alpha, &tau, Sort::Star)
            }
            _ => Err(fail()),
        }
    }

    fn equiv_under_binder(
        &mut self,
        ctx: &TyCtx,
        v1: &crate::syntax::UVar,
        v2: &crate::syntax::UVar,
        k: Sort,
        b1: &Ty,
        b2: &Ty,
    ) -> Result<TyCtx, TypeError> {
        let fresh = self.sess.fresh_uvar(v1.name());
        let ctx2 = ctx.pushed(Entry::UVarDecl(fresh.clone(), k));
        let b1r = b1.subst_uvar(v1, &Term::UVar(fresh.clone()));
        let b2r = b2.subst_uvar(v2, &Term::UVar(fresh.clone()));
        let out = self.equiv_types(&ctx2, &b1r, &b2r)?;
        Ok(out.truncate_at(&EntryKey::UVar(fresh)))
    }

    /// `Γ ⊢ A <:± B ⊣ Δ`: polarized subtyping. Inputs must be normalized;
    /// `pol` must be `Pos` or `Neg`.
    pub fn subtype(
        &mut self,
        ctx: &TyCtx,
        pol: Polarity,
        a: &Ty,
        b: &Ty,
    ) -> Result<TyCtx, TypeError> {
        self.sess.step();
        debug_assert!(pol != Polarity::Non, "subtype: polarity must be + or -");
        debug_assert!(ctx.is_wf(), "subtype: ill-formed context");
        let fail = |e: TypeError| TypeError::NotSubtype {
            left: print_ty(a),
            right: print_ty(b),
            detail: format!(": {e}"),
        };

        match pol {
            Polarity::Neg => {
                if let TyKind::Forall(v, k, body) = &b.kind {
                    // SubAllR: push the (renamed) universal, then truncate.
                    self.sess.trace("SubAllR", String::new);
                    let fresh = self.sess.fresh_uvar(v.name());
                    let ctx2 = ctx.pushed(Entry::UVarDecl(fresh.clone(), *k));
                    let body_r = body.subst_uvar(v, &Term::UVar(fresh.clone()));
                    let out = self
                        .subtype(&ctx2, Polarity::Neg, a, &body_r)
                        .map_err(fail)?;
                    return Ok(out.truncate_at(&EntryKey::UVar(fresh)));
                }
                if let TyKind::Forall(v, k, body) = &a.kind {
                    // SubAllL: instantiate with a marked existential.
                    self.sess.trace("SubAllL", String::new);
                    let alpha = self.sess.fresh_evar(v.name());
                    let marker = Marker {
                        uid: self.sess.fresh("mark").uid,
                        tag: MarkTag::EVar(alpha.clone()),
                    };
                    let ctx2 = ctx.pushed_many([
                        Entry::Mark(marker.clone()),
                        Entry::Unsolved(alpha.clone(), *k),
                    ]);
                    let body_i = body.subst_uvar(v, &Term::EVar(alpha));
                    let out = self
                        .subtype(&ctx2, Polarity::Neg, &body_i, b)
                        .map_err(fail)?;
                    return Ok(out.truncate_at(&EntryKey::Mark(marker)));
                }
                match (a.polarity(), b.polarity()) {
                    // SubNegPosL: A positive, B not negative.
                    (Polarity::Pos, _) => {
                        self.sess.trace("SubNegPosL", String::new);
                        self.subtype(ctx, Polarity::Pos, a, b)
                    }
                    // SubNegPosR: A not negative, B positive.
                    (_, Polarity::Pos) => {
                        self.sess.trace("SubNegPosR", String::new);
                        self.subtype(ctx, Polarity::Pos, a, b)
                    }
                    _ => {
                        self.sess.trace("SubEquiv", String::new);
                        self.equiv_types(ctx, a, b).map_err(fail)
                    }
                }
            }
            Polarity::Pos => {
                if let TyKind::Exists(v, k, body) = &a.kind {
                    // SubExistsL: push the (renamed) universal, then truncate.
                    self.sess.trace("SubExistsL", String::new);
                    let fresh = self.sess.fresh_uvar(v.name());
                    let ctx2 = ctx.pushed(Entry::UVarDecl(fresh.clone(), *k));
                    let body_r = body.subst_uvar(v, &Term::UVar(fresh.clone()));
                    let out = self
                        .subtype(&ctx2, Polarity::Pos, &body_r, b)
                        .map_err(fail)?;
                    return Ok(out.truncate_at(&EntryKey::UVar(fresh)));
                }
                if let TyKind::Exists(v, k, body) = &b.kind {
                    // SubExistsR: instantiate with a marked existential.
                    self.sess.trace("SubExistsR", String::new);
                    let beta = self.sess.fresh_evar(v.name());
                    let marker = Marker {
                        uid: self.sess.fresh("mark").uid,
                        tag: MarkTag::EVar(beta.clone()),
                    };
                    let ctx2 = ctx.pushed_many([
                        Entry::Mark(marker.clone()),
                        Entry::Unsolved(beta.clone(), *k),
                    ]);
                    let body_i = body.subst_uvar(v, &Term::EVar(beta));
                    let out = self
                        .subtype(&ctx2, Polarity::Pos, a, &body_i)
                        .map_err(fail)?;
                    return Ok(out.truncate_at(&EntryKey::Mark(marker)));
                }
                match (a.polarity(), b.polarity()) {
                    // SubPosNegL: A negative, B not positive.
                    (Polarity::Neg, _) => {
                        self.sess.trace("SubPosNegL", String::new);
                        self.subtype(ctx, Polarity::Neg, a, b)
                    }
                    // SubPosNegR: A not positive, B negative.
                    (_, Polarity::Neg) => {
                        self.sess.trace("SubPosNegR", String::new);
                        self.subtype(ctx, Polarity::Neg, a, b)
                    }
                    _ => {
                        self.sess.trace("SubEquiv", String::new);
                        self.equiv_types(ctx, a, b).map_err(fail)
                    }
                }
            }
            Polarity::Non => unreachable!(),
        }
    }
}

fn not_equiv_prop(p: &Prop, q: &Prop) -> TypeError {
    TypeError::NotEquivalent {
        left: format!("({})", print_prop(p)),
        right: format!("({})", print_prop(q)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::Session;
    use crate::syntax::{EVar, Ident, UVar};

    fn ev(n: &str, uid: u64) -> EVar {
        EVar(Ident::new(n, uid))
    }
    fn uv(n: &str, uid: u64) -> UVar {
        UVar(Ident::new(n, uid))
    }

    fn with_tc<T>(f: impl FnOnce(&mut Tc) -> T) -> T {
        let mut sess = Session::new();
        for _ in 0..1000 {
            sess.fresh("pad");
        }
        let mut tc = Tc::new(&mut sess);
        f(&mut tc)
    }

    #[test]
    fn polarity_for_sub() {
        let a = uv("a", 1);
        assert_eq!(
            sub_polarity_for(&Ty::exists(a.clone(), Sort::Star, Ty::uvar(a.clone()))),
            Polarity::Pos
        );
        assert_eq!(
            sub_polarity_for(&Ty::forall(a.clone(), Sort::Star, Ty::uvar(a))),
            Polarity::Neg
        );
        assert_eq!(sub_polarity_for(&Ty::unit()), Polarity::Neg);
    }

    #[test]
    fn equiv_prop_examples() {
        with_tc(|tc| {
            let ctx = TyCtx::empty();
            let zz = Prop(Term::Zero, Term::Zero);
            assert_eq!(tc.equiv_props(&ctx, &zz, &zz).unwrap(), ctx);

            let n = ev("n", 1);
            let nctx = TyCtx::from_entries(vec![Entry::Unsolved(n.clone(), Sort::Nat)]);
            let out = tc
                .equiv_props(&nctx, &Prop(Term::EVar(n.clone()), Term::Zero), &zz)
                .unwrap();
            assert_eq!(out.entries(), &[Entry::Solved(n.clone(), Sort::Nat, Term::Zero)]);

            assert!(
                tc.equiv_props(&ctx, &zz, &Prop(Term::succ(Term::Zero), Term::Zero))
                    .is_err()
            );
        });
    }

    #[test]
    fn equiv_type_examples() {
        with_tc(|tc| {
            // ^a == 1 -> 1 instantiates
            let a = ev("a", 1);
            let ctx = TyCtx::from_entries(vec![Entry::Unsolved(a.clone(), Sort::Star)]);
            let out = tc
                .equiv_types(&ctx, &Ty::evar(a.clone()), &Ty::arrow(Ty::unit(), Ty::unit()))
                .unwrap();
            assert_eq!(
                out.entries(),
                &[Entry::Solved(
                    a.clone(),
                    Sort::Star,
                    Term::bin(crate::syntax::Conn::Arrow, Term::Unit, Term::Unit)
                )]
            );

            // forall a. a and exists a. a are not equivalent (head mismatch)
            let v = uv("v", 2);
            let fa = Ty::forall(v.clone(), Sort::Star, Ty::uvar(v.clone()));
            let ex = Ty::exists(v.clone(), Sort::Star, Ty::uvar(v.clone()));
            assert!(tc.equiv_types(&TyCtx::empty(), &fa, &ex).is_err());

            // alpha-variant quantifiers are equivalent
            let w = uv("w", 3);
            let fa2 = Ty::forall(w.clone(), Sort::Star, Ty::uvar(w));
            assert_eq!(tc.equiv_types(&TyCtx::empty(), &fa, &fa2).unwrap(), TyCtx::empty());
        });
    }

    #[test]
    fn subtype_all_left() {
        // forall a:*. a -> a  <:-  1 -> 1, output truncated back to empty
        with_tc(|tc| {
            let a = uv("a", 1);
            let poly = Ty::forall(
                a.clone(),
                Sort::Star,
                Ty::arrow(Ty::uvar(a.clone()), Ty::uvar(a.clone())),
            );
            let mono = Ty::arrow(Ty::unit(), Ty::unit());
            let out = tc
                .subtype(&TyCtx::empty(), Polarity::Neg, &poly, &mono)
                .unwrap();
            assert_eq!(out, TyCtx::empty());

            // and not the other way around
            assert!(
                tc.subtype(&TyCtx::empty(), Polarity::Neg, &mono, &poly)
                    .is_err()
            );
        });
    }

    #[test]
    fn subtype_exists_right() {
        // 1 <:+ exists a:*. a, output truncated back to empty
        with_tc(|tc| {
            let a = uv("a", 1);
            let ex = Ty::exists(a.clone(), Sort::Star, Ty::uvar(a.clone()));
            let out = tc
                .subtype(&TyCtx::empty(), Polarity::Pos, &Ty::unit(), &ex)
                .unwrap();
            assert_eq!(out, TyCtx::empty());
        });
    }

    #[test]
    fn subtype_ground_is_equality() {
        with_tc(|tc| {
            let one_one = Ty::arrow(Ty::unit(), Ty::unit());
            assert!(
                tc.subtype(&TyCtx::empty(), Polarity::Neg, &one_one, &one_one)
                    .is_ok()
            );
            let sum = Ty::sum(Ty::unit(), Ty::unit());
            assert!(
                tc.subtype(&TyCtx::empty(), Polarity::Neg, &one_one, &sum)
                    .is_err()
            );
        });
    }
}
