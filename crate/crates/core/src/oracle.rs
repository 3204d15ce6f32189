//! A fuel-bounded implementation of the declarative system — typing,
//! subtyping, matching, and coverage, with explicit monotype guessing — plus
//! first-order unification. This exists solely for differential testing and
//! the `--oracle-check` flag: it is a desk-scale reference, exponential by
//! design, and reports `Unknown` rather than rejecting when the search was
//! bounded by fuel or by the guess size.

use std::collections::BTreeMap;

use crate::context::{DeclCtx, DeclEntry};
use crate::syntax::{
    Branch, Branches, Conn, Expr, ExprKind, Inj, PatKind, Polarity, Principality, Prop, Sort,
    Term, Ty, TyKind, UVar, alpha_eq_ty,
};
use crate::typing::{ExpandMode, Expansion, expand};

/// Search bounds: the maximum syntactic size of guessed monotypes and index
/// terms, and the maximum derivation depth.
#[derive(Debug, Clone, Copy)]
pub struct Fuel {
    pub guess_size: usize,
    pub depth: usize,
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel { guess_size: 3, depth: 32 }
    }
}

/// Three-valued verdict: fuel- or guess-bounded failures are `Unknown`,
/// never `False`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum V3 {
    True,
    False,
    Unknown,
}

impl V3 {
    pub fn is_true(self) -> bool {
        self == V3::True
    }
    pub fn definite(self) -> bool {
        self != V3::Unknown
    }
}

/// An idempotent substitution over universal variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Subst(pub BTreeMap<UVar, Term>);

impl Subst {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Zero | Term::Unit | Term::EVar(_) => t.clone(),
            Term::UVar(u) => match self.0.get(u) {
                Some(s) => s.clone(),
                None => t.clone(),
            },
            Term::Succ(s) => Term::succ(self.apply_term(s)),
            Term::Bin(op, l, r) => Term::bin(*op, self.apply_term(l), self.apply_term(r)),
        }
    }

    pub fn apply_prop(&self, p: &Prop) -> Prop {
        Prop(self.apply_term(&p.0), self.apply_term(&p.1))
    }

    pub fn apply_ty(&self, ty: &Ty) -> Ty {
        let mut out = ty.clone();
        for (v, t) in &self.0 {
            out = out.subst_uvar(v, t);
        }
        out
    }

    pub fn apply_expr(&self, e: &Expr) -> Expr {
        let mut out = e.clone();
        for (v, t) in &self.0 {
            out = out.subst_uvar(v, t);
        }
        out
    }

    pub fn apply_ctx(&self, psi: &DeclCtx) -> DeclCtx {
        let mut out = psi.clone();
        for (v, t) in &self.0 {
            out = out.subst_uvar(v, t);
        }
        out
    }

    fn bind(&mut self, x: &UVar, t: &Term) -> bool {
        if t.fuv().contains(x) {
            return false; // occurs check
        }
        // Keep the substitution idempotent.
        for v in self.0.values_mut() {
            *v = v.subst_uvar(x, t);
        }
        self.0.insert(x.clone(), t.clone());
        true
    }
}

/// Most general unifier of two existential-free terms, treating free
/// universal variables as unification variables; `None` is ⊥.
pub fn mgu(a: &Term, b: &Term) -> Option<Subst> {
    debug_assert!(a.fev().is_empty() && b.fev().is_empty(), "mgu: inputs must be evar-free");
    let mut s = Subst::default();
    if unify(&mut s, a, b) { Some(s) } else { None }
}

fn unify(s: &mut Subst, a: &Term, b: &Term) -> bool {
    let a = s.apply_term(a);
    let b = s.apply_term(b);
    match (&a, &b) {
        (Term::UVar(x), Term::UVar(y)) if x == y => true,
        (Term::UVar(x), t) | (t, Term::UVar(x)) => s.bind(x, t),
        (Term::Zero, Term::Zero) | (Term::Unit, Term::Unit) => true,
        (Term::Succ(a1), Term::Succ(b1)) => unify(s, a1, b1),
        (Term::Bin(o1, a1, a2), Term::Bin(o2, b1, b2)) if o1 == o2 => {
            unify(s, a1, b1) && unify(s, a2, b2)
        }
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Declarative search
// ---------------------------------------------------------------------------

const STEP_BUDGET: u64 = 2_000_000;

/// A synthesized result: type, principality, and whether the principality
/// rests on the bounded-enumeration approximation of `DeclRecover`.
#[derive(Clone)]
struct SynthRes {
    ty: Ty,
    prin: Principality,
    approx: bool,
}

/// A found derivation, tagged with whether it leaned on approximated
/// principality recovery anywhere.
type Proof = Option<bool>;

fn or_proof(a: Proof, b: Proof) -> Proof {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), _) | (_, Some(true)) => Some(true),
        _ => None,
    }
}

struct Search {
    fuel: Fuel,
    next_uid: u64,
    steps: u64,
    /// Set when any search path was cut by depth, by the step budget, or by
    /// the bounded guess enumeration: a failed search is then `Unknown`.
    incomplete: bool,
}

impl Search {
    fn new(fuel: Fuel) -> Search {
        // Oracle-allocated variables live far above parser/session uids.
        Search { fuel, next_uid: 1 << 40, steps: 0, incomplete: false }
    }

    fn fresh(&mut self, name: &str) -> UVar {
        self.next_uid += 1;
        UVar(crate::syntax::Ident::new(name, self.next_uid))
    }

    /// Returns false when out of budget (and records the cut).
    fn tick(&mut self, depth: usize) -> bool {
        self.steps += 1;
        if depth == 0 || self.steps > STEP_BUDGET {
            self.incomplete = true;
            return false;
        }
        true
    }

    /// All well-sorted terms of sort `k` with size ≤ the guess bound, built
    /// from constructors and the universal variables in scope. Every call
    /// marks the search incomplete: failure past a guess point is never a
    /// refutation.
    fn guesses(&mut self, psi: &DeclCtx, k: Sort) -> Vec<Term> {
        self.incomplete = true;
        let max = self.fuel.guess_size;
        let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max + 1];
        if max >= 1 {
            let mut atoms = vec![match k {
                Sort::Nat => Term::Zero,
                Sort::Star => Term::Unit,
            }];
            for e in &psi.entries {
                if let DeclEntry::UVar(u, uk) = e {
                    if *uk == k {
                        atoms.push(Term::UVar(u.clone()));
                    }
                }
            }
            by_size[1] = atoms;
        }
        match k {
            Sort::Nat => {
                for size in 2..=max {
                    let mut terms = Vec::new();
                    for t in &by_size[size - 1] {
                        terms.push(Term::succ(t.clone()));
                    }
                    by_size[size] = terms;
                }
            }
            Sort::Star => {
                for size in 2..=max {
                    let mut terms = Vec::new();
                    for lsize in 1..size.saturating_sub(1) {
                        let rsize = size - 1 - lsize;
                        for l in by_size[lsize].clone() {
                            for r in by_size[rsize].clone() {
                                for op in [Conn::Arrow, Conn::Sum, Conn::Prod] {
                                    terms.push(Term::bin(op, l.clone(), r.clone()));
                                }
                            }
                        }
                    }
                    by_size[size] = terms;
                }
            }
        }
        by_size.into_iter().flatten().collect()
    }

    // -- subtyping ------------------------------------------------------------

    /// `Ψ ⊢ A ≤± B`, with `flipped` blocking an immediate second polarity
    /// flip (flip ∘ flip is the identity).
    fn sub(&mut self, psi: &DeclCtx, pol: Polarity, a: &Ty, b: &Ty, d: usize, flipped: bool) -> bool {
        if !self.tick(d) {
            return false;
        }
        // DsubReflPm: nonpolar identical types.
        if a.polarity() == Polarity::Non && b.polarity() == Polarity::Non && alpha_eq_ty(a, b) {
            return true;
        }
        match pol {
            Polarity::Neg => {
                if let TyKind::Forall(v, k, body) = &b.kind {
                    // DsubAllR
                    let fresh = self.fresh(v.name());
                    let psi2 = psi.pushed(DeclEntry::UVar(fresh.clone(), *k));
                    let body_r = body.subst_uvar(v, &Term::UVar(fresh));
                    if self.sub(&psi2, Polarity::Neg, a, &body_r, d - 1, false) {
                        return true;
                    }
                }
                if let TyKind::Forall(v, k, body) = &a.kind {
                    // DsubAllL: guess the instance.
                    for tau in self.guesses(psi, *k) {
                        let inst = body.subst_uvar(v, &tau);
                        if self.sub(psi, Polarity::Neg, &inst, b, d - 1, false) {
                            return true;
                        }
                    }
                }
                // DsubNegPos
                if !flipped
                    && a.polarity() != Polarity::Neg
                    && b.polarity() != Polarity::Neg
                    && self.sub(psi, Polarity::Pos, a, b, d - 1, true)
                {
                    return true;
                }
                false
            }
            Polarity::Pos => {
                if let TyKind::Exists(v, k, body) = &a.kind {
                    // DsubExistsL
                    let fresh = self.fresh(v.name());
                    let psi2 = psi.pushed(DeclEntry::UVar(fresh.clone(), *k));
                    let body_r = body.subst_uvar(v, &Term::UVar(fresh));
                    if self.sub(&psi2, Polarity::Pos, &body_r, b, d - 1, false) {
                        return true;
                    }
                }
                if let TyKind::Exists(v, k, body) = &b.kind {
                    // DsubExistsR: guess the witness.
                    for tau in self.guesses(psi, *k) {
                        let inst = body.subst_uvar(v, &tau);
                        if self.sub(psi, Polarity::Pos, a, &inst, d - 1, false) {
                            return true;
                        }
                    }
                }
                // DsubPosNeg
                if !flipped
                    && a.polarity() != Polarity::Pos
                    && b.polarity() != Polarity::Pos
                    && self.sub(psi, Polarity::Neg, a, b, d - 1, true)
                {
                    return true;
                }
                false
            }
            Polarity::Non => unreachable!("subtyping polarity must be + or -"),
        }
    }

    // -- checking -------------------------------------------------------------

    fn checkprop(p: &Prop) -> bool {
        // DeclCheckpropEq: literal equality of the two sides.
        p.0 == p.1
    }

    fn check(&mut self, psi: &DeclCtx, p: Principality, e: &Expr, a: &Ty, d: usize) -> Proof {
        if !self.tick(d) {
            return None;
        }
        // DeclRec
        if let ExprKind::Rec(x, v) = &e.kind {
            let psi2 = psi.pushed(DeclEntry::Hyp(x.clone(), a.clone(), p));
            return self.check(&psi2, p, v, a, d - 1);
        }
        // DeclCase
        if let ExprKind::Case(scrut, branches) = &e.kind {
            let (synths, _) = self.synth(psi, scrut, d - 1);
            let mut best: Proof = None;
            for r in synths {
                if r.prin != Principality::Bang {
                    continue;
                }
                let tys = std::slice::from_ref(&r.ty);
                if let Some(m_approx) = self.match_branches(psi, p, branches, tys, a, d - 1) {
                    if self.covers(psi, branches, tys, d - 1) {
                        best = or_proof(best, Some(r.approx || m_approx));
                        if best == Some(false) {
                            return best;
                        }
                    }
                }
            }
            return best;
        }

        let mut best: Proof = None;

        // Introduction rules, keyed on the type.
        match &a.kind {
            TyKind::Unit if matches!(e.kind, ExprKind::Unit) => return Some(false), // DeclUnitIntro
            TyKind::Forall(v, k, body) if e.is_checked_intro() => {
                // DeclAllIntro
                let fresh = self.fresh(v.name());
                let psi2 = psi.pushed(DeclEntry::UVar(fresh.clone(), *k));
                let body_r = body.subst_uvar(v, &Term::UVar(fresh));
                best = or_proof(best, self.check(&psi2, p, e, &body_r, d - 1));
            }
            TyKind::Implies(prop, body) if e.is_checked_intro() && p == Principality::Bang => {
                // DeclImpliesIntro via DeclCheckBot / DeclCheckUnify
                match mgu(&prop.0, &prop.1) {
                    None => return Some(false),
                    Some(theta) => {
                        let psi2 = theta.apply_ctx(psi);
                        let e2 = theta.apply_expr(e);
                        let body2 = theta.apply_ty(body);
                        best = or_proof(
                            best,
                            self.check(&psi2, Principality::Bang, &e2, &body2, d - 1),
                        );
                    }
                }
            }
            TyKind::With(body, prop) => {
                // DeclWithIntro (any non-case expression reaches here)
                if Self::checkprop(prop) {
                    best = or_proof(best, self.check(psi, p, e, body, d - 1));
                }
            }
            TyKind::Bin(Conn::Arrow, a1, a2) => {
                if let ExprKind::Lam(x, ebody) = &e.kind {
                    // DeclArrIntro
                    let psi2 = psi.pushed(DeclEntry::Hyp(x.clone(), (**a1).clone(), p));
                    best = or_proof(best, self.check(&psi2, p, ebody, a2, d - 1));
                }
            }
            TyKind::Bin(Conn::Sum, a1, a2) => {
                if let ExprKind::Inj(which, e0) = &e.kind {
                    // DeclSumIntro_k
                    let target = match which {
                        Inj::Inj1 => a1,
                        Inj::Inj2 => a2,
                    };
                    best = or_proof(best, self.check(psi, p, e0, target, d - 1));
                }
            }
            TyKind::Bin(Conn::Prod, a1, a2) => {
                if let ExprKind::Pair(e1, e2) = &e.kind {
                    // DeclPairIntro
                    if let Some(x1) = self.check(psi, p, e1, a1, d - 1) {
                        if let Some(x2) = self.check(psi, p, e2, a2, d - 1) {
                            best = or_proof(best, Some(x1 || x2));
                        }
                    }
                }
            }
            TyKind::Vec(idx, elem) => match &e.kind {
                ExprKind::Nil => {
                    // DeclNil
                    if Self::checkprop(&Prop(idx.clone(), Term::Zero)) {
                        return Some(false);
                    }
                }
                ExprKind::Cons(e1, e2) => {
                    // DeclCons: the length must literally be a successor.
                    if let Term::Succ(t2) = idx {
                        if let Some(x1) = self.check(psi, p, e1, elem, d - 1) {
                            if let Some(x2) = self.check(
                                psi,
                                Principality::Slash,
                                e2,
                                &Ty::vec((**t2).clone(), (**elem).clone()),
                                d - 1,
                            ) {
                                best = or_proof(best, Some(x1 || x2));
                            }
                        }
                    }
                }
                _ => {}
            },
            _ => {}
        }
        if best == Some(false) {
            return best;
        }

        // DeclSub
        let (synths, _) = self.synth(psi, e, d - 1);
        for r in synths {
            let pol = match a.polarity() {
                Polarity::Pos => Polarity::Pos,
                _ => Polarity::Neg,
            };
            if self.sub(psi, pol, &r.ty, a, d - 1, false) {
                best = or_proof(best, Some(r.approx));
                if best == Some(false) {
                    return best;
                }
            }
        }
        best
    }

    /// All synthesizable results, with a flag that is false if some path was
    /// cut.
    fn synth(&mut self, psi: &DeclCtx, e: &Expr, d: usize) -> (Vec<SynthRes>, bool) {
        if !self.tick(d) {
            return (Vec::new(), false);
        }
        match &e.kind {
            // DeclVar
            ExprKind::Var(x) => match psi.hyp(x) {
                Some((ty, p)) => {
                    (vec![SynthRes { ty: ty.clone(), prin: p, approx: false }], true)
                }
                None => (Vec::new(), true),
            },
            // DeclAnno
            ExprKind::Anno(body, anno) => {
                if psi.to_tyctx().ty_wf(anno).is_err() {
                    return (Vec::new(), true);
                }
                let before = self.incomplete;
                self.incomplete = false;
                let proof = self.check(psi, Principality::Bang, body, anno, d - 1);
                let clean = !self.incomplete;
                self.incomplete = before || !clean;
                match proof {
                    Some(approx) => (
                        vec![SynthRes { ty: anno.clone(), prin: Principality::Bang, approx }],
                        true,
                    ),
                    None => (Vec::new(), clean),
                }
            }
            // DeclArrElim
            ExprKind::App(head, spine) => {
                let (heads, mut complete) = self.synth(psi, head, d - 1);
                let mut out = Vec::new();
                for h in heads {
                    let (results, c) = self.recspine(psi, &spine.0, &h.ty, h.prin, d - 1);
                    complete &= c;
                    for mut r in results {
                        r.approx |= h.approx;
                        out.push(r);
                    }
                }
                (dedup_results(out), complete)
            }
            _ => (Vec::new(), true),
        }
    }

    /// All ordinary spine results.
    fn spine(
        &mut self,
        psi: &DeclCtx,
        s: &[Expr],
        a: &Ty,
        p: Principality,
        d: usize,
    ) -> (Vec<SynthRes>, bool) {
        if !self.tick(d) {
            return (Vec::new(), false);
        }
        let Some((arg, rest)) = s.split_first() else {
            // DeclEmptySpine
            return (vec![SynthRes { ty: a.clone(), prin: p, approx: false }], true);
        };
        match &a.kind {
            TyKind::Forall(v, k, body) => {
                // DeclAllSpine: guess the instance; the result is never
                // principal.
                let mut out = Vec::new();
                for tau in self.guesses(psi, *k) {
                    let inst = body.subst_uvar(v, &tau);
                    let (results, _) = self.spine(psi, s, &inst, Principality::Slash, d - 1);
                    out.extend(results);
                }
                // A bounded guess enumeration is never complete.
                (dedup_results(out), false)
            }
            TyKind::Implies(prop, body) => {
                // DeclImpliesSpine
                if Self::checkprop(prop) {
                    self.spine(psi, s, body, p, d - 1)
                } else {
                    (Vec::new(), true)
                }
            }
            TyKind::Bin(Conn::Arrow, a1, a2) => {
                // DeclArrSpine
                let before = self.incomplete;
                self.incomplete = false;
                let proof = self.check(psi, p, arg, a1, d - 1);
                let clean = !self.incomplete;
                self.incomplete = before || !clean;
                match proof {
                    Some(approx) => {
                        let (results, c) = self.spine(psi, rest, a2, p, d - 1);
                        let results = results
                            .into_iter()
                            .map(|mut r| {
                                r.approx |= approx;
                                r
                            })
                            .collect();
                        (results, c)
                    }
                    None => (Vec::new(), clean),
                }
            }
            _ => (Vec::new(), true),
        }
    }

    /// Spine results with principality recovery. `DeclRecover`'s premise
    /// quantifies over all derivations; it is approximated by requiring all
    /// results obtainable under the guess bound to agree. A principality
    /// obtained this way from an incomplete enumeration is tagged `approx`,
    /// and any acceptance that leans on it is reported as `Unknown`.
    fn recspine(
        &mut self,
        psi: &DeclCtx,
        s: &[Expr],
        a: &Ty,
        p: Principality,
        d: usize,
    ) -> (Vec<SynthRes>, bool) {
        let (results, complete) = self.spine(psi, s, a, p, d);
        let mut out = results.clone(); // DeclPass
        if p == Principality::Bang {
            let slash: Vec<&SynthRes> = results
                .iter()
                .filter(|r| r.prin == Principality::Slash)
                .collect();
            if let Some((first, others)) = slash.split_first() {
                if others.iter().all(|r| alpha_eq_ty(&first.ty, &r.ty)) {
                    // DeclRecover (approximated at the guess bound)
                    let approx = !complete
                        || first.approx
                        || others.iter().any(|r| r.approx);
                    out.push(SynthRes {
                        ty: first.ty.clone(),
                        prin: Principality::Bang,
                        approx,
                    });
                }
            }
        }
        (dedup_results(out), complete)
    }

    // -- pattern matching -------------------------------------------------------

    fn match_branches(
        &mut self,
        psi: &DeclCtx,
        p: Principality,
        branches: &Branches,
        tys: &[Ty],
        c: &Ty,
        d: usize,
    ) -> Proof {
        if !self.tick(d) {
            return None;
        }
        // DeclMatchEmpty / DeclMatchSeq
        let mut approx = false;
        for b in &branches.0 {
            approx |= self.match_branch(psi, p, b, tys, c, d - 1)?;
        }
        Some(approx)
    }

    fn match_branch(
        &mut self,
        psi: &DeclCtx,
        p: Principality,
        branch: &Branch,
        tys: &[Ty],
        c: &Ty,
        d: usize,
    ) -> Proof {
        if !self.tick(d) {
            return None;
        }
        let (pat, pats_rest) = match branch.pats.split_first() {
            None if tys.is_empty() => {
                // DeclMatchBase
                return self.check(psi, p, &branch.body, c, d - 1);
            }
            None => return None,
            Some(split) => split,
        };
        let Some((ty, tys_rest)) = tys.split_first() else {
            return None;
        };

        match &ty.kind {
            TyKind::Exists(v, k, body) => {
                // DeclMatchExists
                let fresh = self.fresh(v.name());
                let psi2 = psi.pushed(DeclEntry::UVar(fresh.clone(), *k));
                let body_r = body.subst_uvar(v, &Term::UVar(fresh));
                let mut new_tys = vec![body_r];
                new_tys.extend(tys_rest.iter().cloned());
                return self.match_branch(&psi2, p, branch, &new_tys, c, d - 1);
            }
            TyKind::With(body, prop) => {
                // DeclMatchWith
                let mut new_tys = vec![(**body).clone()];
                new_tys.extend(tys_rest.iter().cloned());
                return self.match_elim(psi, p, branch, prop, &new_tys, c, d - 1);
            }
            _ => {}
        }

        match (&pat.kind, &ty.kind) {
            (PatKind::Var(z), _) if !ty.is_with_or_exists() => {
                // DeclMatchNeg
                let psi2 = psi.pushed(DeclEntry::Hyp(z.clone(), ty.clone(), Principality::Bang));
                let rest = Branch::new(pats_rest.to_vec(), branch.body.clone());
                self.match_branch(&psi2, p, &rest, tys_rest, c, d - 1)
            }
            (PatKind::Wild, _) if !ty.is_with_or_exists() => {
                // DeclMatchWild
                let rest = Branch::new(pats_rest.to_vec(), branch.body.clone());
                self.match_branch(psi, p, &rest, tys_rest, c, d - 1)
            }
            (PatKind::Unit, TyKind::Unit) => {
                // DeclMatchUnit
                let rest = Branch::new(pats_rest.to_vec(), branch.body.clone());
                self.match_branch(psi, p, &rest, tys_rest, c, d - 1)
            }
            (PatKind::Pair(p1, p2), TyKind::Bin(Conn::Prod, a1, a2)) => {
                // DeclMatchPair
                let mut pats = vec![(**p1).clone(), (**p2).clone()];
                pats.extend(pats_rest.iter().cloned());
                let mut new_tys = vec![(**a1).clone(), (**a2).clone()];
                new_tys.extend(tys_rest.iter().cloned());
                self.match_branch(psi, p, &Branch::new(pats, branch.body.clone()), &new_tys, c, d - 1)
            }
            (PatKind::Inj(which, p0), TyKind::Bin(Conn::Sum, a1, a2)) => {
                // DeclMatchSum_k
                let target = match which {
                    Inj::Inj1 => a1,
                    Inj::Inj2 => a2,
                };
                let mut pats = vec![(**p0).clone()];
                pats.extend(pats_rest.iter().cloned());
                let mut new_tys = vec![(**target).clone()];
                new_tys.extend(tys_rest.iter().cloned());
                self.match_branch(psi, p, &Branch::new(pats, branch.body.clone()), &new_tys, c, d - 1)
            }
            (PatKind::Nil, TyKind::Vec(idx, _)) => {
                // DeclMatchNil
                let rest = Branch::new(pats_rest.to_vec(), branch.body.clone());
                self.match_elim(psi, p, &rest, &Prop(idx.clone(), Term::Zero), tys_rest, c, d - 1)
            }
            (PatKind::Cons(p1, p2), TyKind::Vec(idx, elem)) => {
                // DeclMatchCons
                let n = self.fresh("n");
                let psi2 = psi.pushed(DeclEntry::UVar(n.clone(), Sort::Nat));
                let mut pats = vec![(**p1).clone(), (**p2).clone()];
                pats.extend(pats_rest.iter().cloned());
                let mut new_tys = vec![
                    (**elem).clone(),
                    Ty::vec(Term::UVar(n.clone()), (**elem).clone()),
                ];
                new_tys.extend(tys_rest.iter().cloned());
                let prop = Prop(idx.clone(), Term::succ(Term::UVar(n)));
                self.match_elim(
                    &psi2,
                    p,
                    &Branch::new(pats, branch.body.clone()),
                    &prop,
                    &new_tys,
                    c,
                    d - 1,
                )
            }
            _ => None,
        }
    }

    fn match_elim(
        &mut self,
        psi: &DeclCtx,
        p: Principality,
        branch: &Branch,
        prop: &Prop,
        tys: &[Ty],
        c: &Ty,
        d: usize,
    ) -> Proof {
        if !self.tick(d) {
            return None;
        }
        match mgu(&prop.0, &prop.1) {
            // DeclMatchBot
            None => Some(false),
            // DeclMatchUnify
            Some(theta) => {
                let psi2 = theta.apply_ctx(psi);
                let branch2 = Branch::new(branch.pats.clone(), theta.apply_expr(&branch.body));
                let tys2: Vec<Ty> = tys.iter().map(|t| theta.apply_ty(t)).collect();
                let c2 = theta.apply_ty(c);
                self.match_branches(&psi2, p, &Branches(vec![branch2]), &tys2, &c2, d - 1)
            }
        }
    }

    // -- coverage -----------------------------------------------------------------

    fn covers(&mut self, psi: &DeclCtx, branches: &Branches, tys: &[Ty], d: usize) -> bool {
        if !self.tick(d) {
            return false;
        }
        let Some((ty, tys_rest)) = tys.split_first() else {
            // DeclCoversEmpty
            return matches!(branches.0.first(), Some(b) if b.pats.is_empty());
        };
        match &ty.kind {
            TyKind::Unit => match expand(ExpandMode::Unit, branches) {
                Ok(Expansion::One(pi)) => self.covers(psi, &pi, tys_rest, d - 1),
                _ => false,
            },
            TyKind::Bin(Conn::Prod, a1, a2) => match expand(ExpandMode::Pair, branches) {
                Ok(Expansion::One(pi)) => {
                    let mut new_tys = vec![(**a1).clone(), (**a2).clone()];
                    new_tys.extend(tys_rest.iter().cloned());
                    self.covers(psi, &pi, &new_tys, d - 1)
                }
                _ => false,
            },
            TyKind::Bin(Conn::Sum, a1, a2) => match expand(ExpandMode::Sum, branches) {
                Ok(Expansion::Two(l, r)) => {
                    let mut l_tys = vec![(**a1).clone()];
                    l_tys.extend(tys_rest.iter().cloned());
                    let mut r_tys = vec![(**a2).clone()];
                    r_tys.extend(tys_rest.iter().cloned());
                    self.covers(psi, &l, &l_tys, d - 1) && self.covers(psi, &r, &r_tys, d - 1)
                }
                _ => false,
            },
            TyKind::Exists(v, k, body) => {
                // DeclCoversEx
                let fresh = self.fresh(v.name());
                let psi2 = psi.pushed(DeclEntry::UVar(fresh.clone(), *k));
                let body_r = body.subst_uvar(v, &Term::UVar(fresh));
                let mut new_tys = vec![body_r];
                new_tys.extend(tys_rest.iter().cloned());
                self.covers(&psi2, branches, &new_tys, d - 1)
            }
            TyKind::With(body, prop) => {
                // DeclCoversWith
                let mut new_tys = vec![(**body).clone()];
                new_tys.extend(tys_rest.iter().cloned());
                self.covers_assuming(psi, prop, branches, &new_tys, d - 1)
            }
            TyKind::Vec(idx, elem)
                if branches.0.iter().any(|b| {
                    matches!(
                        b.pats.first().map(|p| &p.kind),
                        Some(PatKind::Nil | PatKind::Cons(..))
                    )
                }) =>
            {
                // DeclCoversVec, guarded exactly like the algorithmic side.
                match expand(ExpandMode::Vec, branches) {
                    Ok(Expansion::Two(nil_part, cons_part)) => {
                        let nil_prop = Prop(idx.clone(), Term::Zero);
                        if !self.covers_assuming(psi, &nil_prop, &nil_part, tys_rest, d - 1) {
                            return false;
                        }
                        let n = self.fresh("n");
                        let psi2 = psi.pushed(DeclEntry::UVar(n.clone(), Sort::Nat));
                        let cons_prop = Prop(idx.clone(), Term::succ(Term::UVar(n.clone())));
                        let mut cons_tys = vec![
                            (**elem).clone(),
                            Ty::vec(Term::UVar(n), (**elem).clone()),
                        ];
                        cons_tys.extend(tys_rest.iter().cloned());
                        self.covers_assuming(&psi2, &cons_prop, &cons_part, &cons_tys, d - 1)
                    }
                    _ => false,
                }
            }
            _ => match expand(ExpandMode::Var, branches) {
                // DeclCoversVar
                Ok(Expansion::One(pi)) => self.covers(psi, &pi, tys_rest, d - 1),
                _ => false,
            },
        }
    }

    fn covers_assuming(
        &mut self,
        psi: &DeclCtx,
        prop: &Prop,
        branches: &Branches,
        tys: &[Ty],
        d: usize,
    ) -> bool {
        if !self.tick(d) {
            return false;
        }
        match mgu(&prop.0, &prop.1) {
            // DeclCoversEqBot
            None => true,
            // DeclCoversEq
            Some(theta) => {
                let psi2 = theta.apply_ctx(psi);
                let branches2 = Branches(
                    branches
                        .0
                        .iter()
                        .map(|b| Branch::new(b.pats.clone(), theta.apply_expr(&b.body)))
                        .collect(),
                );
                let tys2: Vec<Ty> = tys.iter().map(|t| theta.apply_ty(t)).collect();
                self.covers(&psi2, &branches2, &tys2, d - 1)
            }
        }
    }
}

fn dedup_results(results: Vec<SynthRes>) -> Vec<SynthRes> {
    let mut out: Vec<SynthRes> = Vec::new();
    for r in results {
        match out
            .iter_mut()
            .find(|o| o.prin == r.prin && alpha_eq_ty(&o.ty, &r.ty))
        {
            // keep the least-approximate witness of a result
            Some(o) => o.approx &= r.approx,
            None => out.push(r),
        }
    }
    out
}

fn verdict(search: Search, found: bool) -> V3 {
    if found {
        V3::True
    } else if search.incomplete {
        V3::Unknown
    } else {
        V3::False
    }
}

/// Declarative subtyping at the given polarity, by backtracking search.
pub fn decl_sub(psi: &DeclCtx, pol: Polarity, a: &Ty, b: &Ty, fuel: Fuel) -> V3 {
    let mut search = Search::new(fuel);
    let d = fuel.depth;
    let found = search.sub(psi, pol, a, b, d, false);
    verdict(search, found)
}

/// Declarative checking: does `e` check against `A` at principality `p`? A
/// derivation that relies on approximated principality recovery is reported
/// as `Unknown`, never as a definite acceptance.
pub fn decl_typecheck(psi: &DeclCtx, p: Principality, e: &Expr, a: &Ty, fuel: Fuel) -> V3 {
    let mut search = Search::new(fuel);
    let d = fuel.depth;
    match search.check(psi, p, e, a, d) {
        Some(false) => V3::True,
        Some(true) => V3::Unknown,
        None => verdict(search, false),
    }
}

/// All declaratively synthesizable (type string, principality) pairs for an
/// expression, within fuel. Exposed for the differential test suites.
pub fn decl_synth_results(
    psi: &DeclCtx,
    e: &Expr,
    fuel: Fuel,
) -> Vec<(Ty, Principality)> {
    let mut search = Search::new(fuel);
    let d = fuel.depth;
    let (results, _) = search.synth(psi, e, d);
    results.into_iter().map(|r| (r.ty, r.prin)).collect()
}

/// Declarative match coverage.
pub fn decl_covers(psi: &DeclCtx, branches: &Branches, tys: &[Ty], fuel: Fuel) -> V3 {
    let mut search = Search::new(fuel);
    let d = fuel.depth;
    let found = search.covers(psi, branches, tys, d);
    verdict(search, found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete::{parse_expr, parse_type};
    use crate::session::Session;
    use crate::syntax::Ident;

    fn uv(n: &str, uid: u64) -> UVar {
        UVar(Ident::new(n, uid))
    }

    #[test]
    fn mgu_examples() {
        let a = uv("a", 1);
        // mgu(α, Z) = {α ↦ Z}
        let s = mgu(&Term::UVar(a.clone()), &Term::Zero).unwrap();
        assert_eq!(s.apply_term(&Term::UVar(a.clone())), Term::Zero);

        // mgu(Z, S α) = ⊥
        assert!(mgu(&Term::Zero, &Term::succ(Term::UVar(a.clone()))).is_none());

        // mgu(S α, S Z) = {α ↦ Z}
        let s = mgu(&Term::succ(Term::UVar(a.clone())), &Term::succ(Term::Zero)).unwrap();
        assert_eq!(s.apply_term(&Term::UVar(a.clone())), Term::Zero);

        // occurs: mgu(α, S α) = ⊥
        assert!(mgu(&Term::UVar(a.clone()), &Term::succ(Term::UVar(a))).is_none());
    }

    #[test]
    fn mgu_result_unifies() {
        let a = uv("a", 1);
        let b = uv("b", 2);
        // (α -> 1) ≐ (β -> β): θ unifies both sides
        let l = Term::bin(Conn::Arrow, Term::UVar(a.clone()), Term::Unit);
        let r = Term::bin(Conn::Arrow, Term::UVar(b.clone()), Term::UVar(b.clone()));
        let s = mgu(&l, &r).unwrap();
        assert_eq!(s.apply_term(&l), s.apply_term(&r));
    }

    #[test]
    fn decl_sub_examples() {
        let mut sess = Session::new();
        let psi = DeclCtx::empty();
        let fuel = Fuel::default();

        // forall a:*. a -> a ≤- 1 -> 1 by guessing τ = 1
        let poly = parse_type(&mut sess, "forall a:*. a -> a").unwrap();
        let mono = parse_type(&mut sess, "1 -> 1").unwrap();
        assert_eq!(decl_sub(&psi, Polarity::Neg, &poly, &mono, fuel), V3::True);

        // reflexivity on a nonpolar type
        assert_eq!(decl_sub(&psi, Polarity::Neg, &mono, &mono, fuel), V3::True);

        // exists a:*. a ≤+ 1 fails: after unpacking, a ≠ 1 (no guessing on
        // the left), and the failure involves no guess point, so it is a
        // definite rejection.
        let ex = parse_type(&mut sess, "exists a:*. a").unwrap();
        let one = parse_type(&mut sess, "1").unwrap();
        assert_eq!(decl_sub(&psi, Polarity::Pos, &ex, &one, fuel), V3::False);
    }

    #[test]
    fn decl_typecheck_examples() {
        let mut sess = Session::new();
        let psi = DeclCtx::empty();
        let fuel = Fuel::default();

        // λx. x ⇐ forall a:*. a -> a
        let id = parse_expr(&mut sess, "\\x -> x").unwrap();
        let idty = parse_type(&mut sess, "forall a:*. a -> a").unwrap();
        assert_eq!(decl_typecheck(&psi, Principality::Bang, &id, &idty, fuel), V3::True);

        // () ⇐ 1 -> 1 is a definite rejection
        let unit = parse_expr(&mut sess, "()").unwrap();
        let arrow = parse_type(&mut sess, "1 -> 1").unwrap();
        assert_eq!(decl_typecheck(&psi, Principality::Bang, &unit, &arrow, fuel), V3::False);

        // the Appendix example: id () synthesizes 1 at ! (via recovery), so
        // checking against 1 succeeds
        let app = parse_expr(&mut sess, "(\\x -> x : forall a:*. a -> a) ()").unwrap();
        let one = parse_type(&mut sess, "1").unwrap();
        assert_eq!(decl_typecheck(&psi, Principality::Bang, &app, &one, fuel), V3::True);
    }

    #[test]
    fn decl_covers_examples() {
        let mut sess = Session::new();
        let fuel = Fuel::default();

        // head's single cons branch covers Vec (S n) a
        let e = parse_expr(&mut sess, "\\l -> case(l, x :: xs => x)").unwrap();
        let crate::syntax::ExprKind::Lam(_, body) = &e.kind else { panic!() };
        let crate::syntax::ExprKind::Case(_, branches) = &body.kind else { panic!() };
        let n = sess.fresh_uvar("n");
        let a = sess.fresh_uvar("a");
        let psi = DeclCtx::empty()
            .pushed(DeclEntry::UVar(n.clone(), Sort::Nat))
            .pushed(DeclEntry::UVar(a.clone(), Sort::Star));
        let vec_succ = Ty::vec(Term::succ(Term::UVar(n.clone())), Ty::uvar(a.clone()));
        assert_eq!(decl_covers(&psi, branches, &[vec_succ], fuel), V3::True);

        // but not Vec n a
        let vec_n = Ty::vec(Term::UVar(n.clone()), Ty::uvar(a.clone()));
        assert_eq!(decl_covers(&psi, branches, &[vec_n], fuel), V3::False);

        // inj1-only branch set does not cover 1 + 1
        let e = parse_expr(&mut sess, "case(x, inj1 y => ())").unwrap();
        let crate::syntax::ExprKind::Case(_, branches) = &e.kind else { panic!() };
        let sum = Ty::sum(Ty::unit(), Ty::unit());
        assert_eq!(decl_covers(&DeclCtx::empty(), branches, &[sum], fuel), V3::False);
    }
}

#[cfg(test)]
mod recovery_tests {
    use super::*;
    use crate::concrete::{parse_expr, print_ty};
    use crate::session::Session;

    #[test]
    fn appendix_fixture_synthesizes_principal_unit() {
        // With id : forall a:*. a -> a, the application id () declaratively
        // synthesizes 1 at principality ! via recovery.
        let mut sess = Session::new();
        let e = parse_expr(&mut sess, "(\\x -> x : forall a:*. a -> a) ()").unwrap();
        let results = decl_synth_results(&DeclCtx::empty(), &e, Fuel::default());
        assert!(
            results
                .iter()
                .any(|(ty, p)| print_ty(ty) == "1" && *p == Principality::Bang),
            "expected (1, !) among {:?}",
            results
                .iter()
                .map(|(t, p)| format!("({}, {p})", print_ty(t)))
                .collect::<Vec<_>>()
        );
    }
}
