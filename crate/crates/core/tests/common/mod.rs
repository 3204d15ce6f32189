//! Random generators for the property suites: well-formed contexts,
//! well-sorted terms, well-formed types, context extensions, and closed
//! expressions. Everything is seeded, so failures reproduce.

#![allow(dead_code)]

use idxtc::context::{DeclCtx, DeclEntry, Entry, MarkTag, Marker, TyCtx};
use idxtc::syntax::{
    Branch, Branches, Conn, EVar, Expr, Inj, Pat, Principality, Prop, Sort, Term, TermVar, Ty,
    UVar,
};
use idxtc::Session;
use rand::Rng;
use rand::rngs::StdRng;

pub fn rng_for(seed: u64) -> StdRng {
    use rand::SeedableRng;
    StdRng::seed_from_u64(seed)
}

fn coin(rng: &mut StdRng, p: f64) -> bool {
    rng.random_bool(p)
}

fn pick<'a, T>(rng: &mut StdRng, xs: &'a [T]) -> Option<&'a T> {
    if xs.is_empty() {
        None
    } else {
        Some(&xs[rng.random_range(0..xs.len())])
    }
}

fn random_sort(rng: &mut StdRng) -> Sort {
    if coin(rng, 0.5) { Sort::Star } else { Sort::Nat }
}

/// Scope of variables visible at some point of a context.
#[derive(Default, Clone)]
pub struct Scope {
    pub uvars: Vec<(UVar, Sort)>,
    pub evars_unsolved: Vec<(EVar, Sort)>,
    pub evars_solved: Vec<(EVar, Sort)>,
}

impl Scope {
    pub fn of_ctx(ctx: &TyCtx) -> Scope {
        let mut s = Scope::default();
        for e in ctx.entries() {
            match e {
                Entry::UVarDecl(u, k) => s.uvars.push((u.clone(), *k)),
                Entry::Unsolved(v, k) => s.evars_unsolved.push((v.clone(), *k)),
                Entry::Solved(v, k, _) => s.evars_solved.push((v.clone(), *k)),
                _ => {}
            }
        }
        s
    }

    fn uvars_of(&self, k: Sort) -> Vec<UVar> {
        self.uvars
            .iter()
            .filter(|(_, s)| *s == k)
            .map(|(u, _)| u.clone())
            .collect()
    }

    fn evars_of(&self, k: Sort) -> Vec<EVar> {
        self.evars_unsolved
            .iter()
            .chain(&self.evars_solved)
            .filter(|(_, s)| *s == k)
            .map(|(v, _)| v.clone())
            .collect()
    }
}

/// A random term of the given sort, well-sorted in `scope`.
pub fn gen_term(rng: &mut StdRng, scope: &Scope, k: Sort, size: usize) -> Term {
    let atom = |rng: &mut StdRng| -> Term {
        let uvars = scope.uvars_of(k);
        let evars = scope.evars_of(k);
        let mut choices: Vec<Term> = vec![match k {
            Sort::Nat => Term::Zero,
            Sort::Star => Term::Unit,
        }];
        if let Some(u) = pick(rng, &uvars) {
            choices.push(Term::UVar(u.clone()));
        }
        if let Some(v) = pick(rng, &evars) {
            choices.push(Term::EVar(v.clone()));
        }
        pick(rng, &choices).unwrap().clone()
    };
    if size <= 1 {
        return atom(rng);
    }
    match k {
        Sort::Nat => {
            if coin(rng, 0.7) {
                Term::succ(gen_term(rng, scope, Sort::Nat, size - 1))
            } else {
                atom(rng)
            }
        }
        Sort::Star => {
            if coin(rng, 0.6) {
                let op = *pick(rng, &[Conn::Arrow, Conn::Sum, Conn::Prod]).unwrap();
                let lsize = rng.random_range(1..size);
                Term::bin(
                    op,
                    gen_term(rng, scope, Sort::Star, lsize),
                    gen_term(rng, scope, Sort::Star, size - lsize),
                )
            } else {
                atom(rng)
            }
        }
    }
}

/// A random type well-formed in `scope`.
pub fn gen_ty(rng: &mut StdRng, sess: &mut Session, scope: &Scope, size: usize) -> Ty {
    if size <= 1 {
        let stars = scope.uvars_of(Sort::Star);
        let evars = scope.evars_of(Sort::Star);
        let mut choices: Vec<Ty> = vec![Ty::unit()];
        if let Some(u) = pick(rng, &stars) {
            choices.push(Ty::uvar(u.clone()));
        }
        if let Some(v) = pick(rng, &evars) {
            choices.push(Ty::evar(v.clone()));
        }
        return pick(rng, &choices).unwrap().clone();
    }
    match rng.random_range(0..10) {
        0 | 1 | 2 => {
            let op = *pick(rng, &[Conn::Arrow, Conn::Sum, Conn::Prod]).unwrap();
            let lsize = rng.random_range(1..size);
            Ty::bin(
                op,
                gen_ty(rng, sess, scope, lsize),
                gen_ty(rng, sess, scope, size - lsize),
            )
        }
        3 | 4 => {
            let k = random_sort(rng);
            let v = sess.fresh_uvar(if k == Sort::Nat { "m" } else { "c" });
            let mut inner = scope.clone();
            inner.uvars.push((v.clone(), k));
            let body = gen_ty(rng, sess, &inner, size - 1);
            if coin(rng, 0.5) {
                Ty::forall(v, k, body)
            } else {
                Ty::exists(v, k, body)
            }
        }
        5 => {
            let idx = gen_term(rng, scope, Sort::Nat, (size - 1).min(3));
            Ty::vec(idx, gen_ty(rng, sess, scope, (size - 1).max(1)))
        }
        6 => {
            let p = Prop(
                gen_term(rng, scope, Sort::Nat, 2),
                gen_term(rng, scope, Sort::Nat, 2),
            );
            Ty::implies(p, gen_ty(rng, sess, scope, size - 1))
        }
        7 => {
            let p = Prop(
                gen_term(rng, scope, Sort::Nat, 2),
                gen_term(rng, scope, Sort::Nat, 2),
            );
            Ty::with(gen_ty(rng, sess, scope, size - 1), p)
        }
        _ => gen_ty(rng, sess, scope, 1),
    }
}

/// A random well-formed algorithmic context.
pub fn gen_ctx(rng: &mut StdRng, sess: &mut Session, max_entries: usize) -> TyCtx {
    let mut ctx = TyCtx::empty();
    let n = rng.random_range(0..=max_entries);
    for _ in 0..n {
        let scope = Scope::of_ctx(&ctx);
        match rng.random_range(0..12) {
            0 | 1 | 2 => {
                let k = random_sort(rng);
                ctx = ctx.pushed(Entry::UVarDecl(
                    sess.fresh_uvar(if k == Sort::Nat { "n" } else { "a" }),
                    k,
                ));
            }
            3 | 4 | 5 => {
                let k = random_sort(rng);
                ctx = ctx.pushed(Entry::Unsolved(sess.fresh_evar("e"), k));
            }
            6 | 7 => {
                let k = random_sort(rng);
                let sz = rng.random_range(1..4);
                let t = ctx.apply_term(&gen_term(rng, &scope, k, sz));
                ctx = ctx.pushed(Entry::Solved(sess.fresh_evar("s"), k, t));
            }
            8 | 9 => {
                let sz = rng.random_range(1..5);
                let ty = gen_ty(rng, sess, &scope, sz);
                let ground = ctx.apply_ty(&ty).fev().is_empty();
                let p = if ground && coin(rng, 0.6) {
                    Principality::Bang
                } else {
                    Principality::Slash
                };
                ctx = ctx.pushed(Entry::Hyp(sess.fresh_termvar("x"), ty, p));
            }
            10 => {
                // equation on a not-yet-equated universal, normalized and
                // occurs-checked so context application terminates
                let candidates: Vec<(UVar, Sort)> = scope
                    .uvars
                    .iter()
                    .filter(|(u, _)| ctx.eqn(u).is_none())
                    .cloned()
                    .collect();
                if let Some((u, k)) = pick(rng, &candidates).cloned() {
                    let sz = rng.random_range(1..4);
                let t = ctx.apply_term(&gen_term(rng, &scope, k, sz));
                    if !t.fuv().contains(&u) {
                        ctx = ctx.pushed(Entry::Eqn(u, t));
                    }
                }
            }
            _ => {
                let v = sess.fresh_evar("m");
                ctx = ctx.pushed(Entry::Mark(Marker {
                    uid: sess.fresh("mark").uid,
                    tag: MarkTag::EVar(v),
                }));
            }
        }
    }
    debug_assert!(ctx.is_wf());
    ctx
}

/// A random extension of `ctx`: solve some unsolved existentials and insert
/// fresh existential declarations. Solutions added here are ground: a
/// solution referring back into the context could close a cycle through a
/// later equation, and context application only terminates on the acyclic
/// contexts the judgments actually produce.
pub fn gen_extension(rng: &mut StdRng, sess: &mut Session, ctx: &TyCtx) -> TyCtx {
    let mut out = TyCtx::empty();
    let ground = |rng: &mut StdRng, k: Sort| -> Term {
        let sz = rng.random_range(1..3);
        gen_ground_term(rng, &[], k, sz)
    };
    for entry in ctx.entries() {
        // occasionally insert a fresh existential (solved or unsolved)
        if coin(rng, 0.2) {
            let k = random_sort(rng);
            if coin(rng, 0.5) {
                out = out.pushed(Entry::Unsolved(sess.fresh_evar("f"), k));
            } else {
                let t = ground(rng, k);
                out = out.pushed(Entry::Solved(sess.fresh_evar("g"), k, t));
            }
        }
        match entry {
            Entry::Unsolved(v, k) if coin(rng, 0.5) => {
                let t = ground(rng, *k);
                out = out.pushed(Entry::Solved(v.clone(), *k, t));
            }
            other => out = out.pushed(other.clone()),
        }
    }
    if coin(rng, 0.3) {
        let k = random_sort(rng);
        out = out.pushed(Entry::Unsolved(sess.fresh_evar("h"), k));
    }
    debug_assert!(out.is_wf());
    out
}

/// A ground (existential-free) term over a pool of universal variables, for
/// the unification differential.
pub fn gen_ground_term(rng: &mut StdRng, pool: &[(UVar, Sort)], k: Sort, size: usize) -> Term {
    let vars: Vec<UVar> = pool
        .iter()
        .filter(|(_, s)| *s == k)
        .map(|(u, _)| u.clone())
        .collect();
    let atom = |rng: &mut StdRng| -> Term {
        let mut choices = vec![match k {
            Sort::Nat => Term::Zero,
            Sort::Star => Term::Unit,
        }];
        if let Some(u) = pick(rng, &vars) {
            choices.push(Term::UVar(u.clone()));
        }
        pick(rng, &choices).unwrap().clone()
    };
    if size <= 1 {
        return atom(rng);
    }
    match k {
        Sort::Nat => {
            if coin(rng, 0.75) {
                Term::succ(gen_ground_term(rng, pool, Sort::Nat, size - 1))
            } else {
                atom(rng)
            }
        }
        Sort::Star => {
            if coin(rng, 0.7) {
                let op = *pick(rng, &[Conn::Arrow, Conn::Sum, Conn::Prod]).unwrap();
                let lsize = rng.random_range(1..size);
                Term::bin(
                    op,
                    gen_ground_term(rng, pool, Sort::Star, lsize),
                    gen_ground_term(rng, pool, Sort::Star, size - lsize),
                )
            } else {
                atom(rng)
            }
        }
    }
}

/// Closed types for the soundness spot-check: size bound, index terms at
/// most S (S (S _)).
pub fn gen_closed_ty(rng: &mut StdRng, sess: &mut Session, size: usize) -> Ty {
    let scope = Scope::default();
    let mut t = gen_ty(rng, sess, &scope, size);
    // clamp: gen_ty already keeps index terms small (≤ 3)
    for _ in 0..3 {
        if t.fev().is_empty() {
            break;
        }
        t = gen_ty(rng, sess, &scope, size);
    }
    t
}

/// Closed expressions for the soundness spot-check.
pub fn gen_closed_expr(rng: &mut StdRng, sess: &mut Session, size: usize) -> Expr {
    let mut scope = Vec::new();
    gen_expr(rng, sess, &mut scope, size)
}

/// Expressions over the given free variables (context hypotheses).
pub fn gen_expr_in(
    rng: &mut StdRng,
    sess: &mut Session,
    vars: &[TermVar],
    size: usize,
) -> Expr {
    let mut scope = vars.to_vec();
    gen_expr(rng, sess, &mut scope, size)
}

/// Hypothesis variables of a context, for building expressions over it.
pub fn hyp_vars(ctx: &TyCtx) -> Vec<TermVar> {
    ctx.entries()
        .iter()
        .filter_map(|e| match e {
            Entry::Hyp(x, _, _) => Some(x.clone()),
            _ => None,
        })
        .collect()
}

fn gen_expr(
    rng: &mut StdRng,
    sess: &mut Session,
    scope: &mut Vec<TermVar>,
    size: usize,
) -> Expr {
    if size <= 1 {
        let mut choices = vec![0, 1];
        if !scope.is_empty() {
            choices.push(2);
            choices.push(2);
        }
        return match pick(rng, &choices).unwrap() {
            0 => Expr::unit(),
            1 => Expr::nil(),
            _ => Expr::var(pick(rng, scope).unwrap().clone()),
        };
    }
    match rng.random_range(0..12) {
        0 | 1 => {
            let x = sess.fresh_termvar("v");
            scope.push(x.clone());
            let body = gen_expr(rng, sess, scope, size - 1);
            scope.pop();
            Expr::lam(x, body)
        }
        2 => {
            let l = rng.random_range(1..size);
            Expr::pair(
                gen_expr(rng, sess, scope, l),
                gen_expr(rng, sess, scope, size - l),
            )
        }
        3 => {
            let which = if coin(rng, 0.5) { Inj::Inj1 } else { Inj::Inj2 };
            Expr::inj(which, gen_expr(rng, sess, scope, size - 1))
        }
        4 => {
            let l = rng.random_range(1..size);
            Expr::cons(
                gen_expr(rng, sess, scope, l),
                gen_expr(rng, sess, scope, size - l),
            )
        }
        5 | 6 => {
            // annotation, the engine of synthesis
            let tsz = rng.random_range(1..=4);
            let ty = gen_closed_ty(rng, sess, tsz);
            Expr::anno(gen_expr(rng, sess, scope, size - 1), ty)
        }
        7 => {
            // application of a variable or annotated lambda
            let head = if !scope.is_empty() && coin(rng, 0.6) {
                Expr::var(pick(rng, scope).unwrap().clone())
            } else {
                let tsz = rng.random_range(1..=4);
            let ty = gen_closed_ty(rng, sess, tsz);
                Expr::anno(gen_expr(rng, sess, scope, 2), ty)
            };
            let arg = gen_expr(rng, sess, scope, (size - 1).max(1));
            Expr::app(head, vec![arg])
        }
        8 => {
            // rec of a value
            let x = sess.fresh_termvar("r");
            scope.push(x.clone());
            let mut body = gen_expr(rng, sess, scope, size - 1);
            if !body.is_value() {
                body = Expr::unit();
            }
            scope.pop();
            Expr::rec(x, body)
        }
        9 | 10 => {
            // case with one or two branches
            let scrut = gen_expr(rng, sess, scope, (size / 2).max(1));
            let n_branches = rng.random_range(1..=2);
            let mut branches = Vec::new();
            for _ in 0..n_branches {
                let pat = gen_pat(rng, sess, 2);
                let mut vars = Vec::new();
                pat.vars_into(&mut vars);
                let depth = scope.len();
                scope.extend(vars);
                let body = gen_expr(rng, sess, scope, (size / 2).max(1));
                scope.truncate(depth);
                branches.push(Branch::new(vec![pat], body));
            }
            Expr::case(scrut, Branches::new(branches))
        }
        _ => gen_expr(rng, sess, scope, 1),
    }
}

fn gen_pat(rng: &mut StdRng, sess: &mut Session, size: usize) -> Pat {
    if size == 0 {
        return if coin(rng, 0.5) {
            Pat::wild()
        } else {
            Pat::var(sess.fresh_termvar("p"))
        };
    }
    match rng.random_range(0..8) {
        0 => Pat::wild(),
        1 => Pat::var(sess.fresh_termvar("p")),
        2 => Pat::unit(),
        3 => Pat::nil(),
        4 => Pat::pair(gen_pat(rng, sess, size - 1), gen_pat(rng, sess, size - 1)),
        5 => Pat::inj(
            if coin(rng, 0.5) { Inj::Inj1 } else { Inj::Inj2 },
            gen_pat(rng, sess, size - 1),
        ),
        6 => Pat::cons(gen_pat(rng, sess, size - 1), gen_pat(rng, sess, size - 1)),
        _ => Pat::var(sess.fresh_termvar("q")),
    }
}

/// A type-directed expression generator: produces expressions that are
/// likely (not guaranteed) to check against `ty`, reusing in-scope variables
/// whose hypothesis type matches exactly.
pub fn gen_typed_expr(
    rng: &mut StdRng,
    sess: &mut Session,
    tyscope: &mut Vec<(TermVar, Ty)>,
    ty: &Ty,
    depth: usize,
) -> Expr {
    use idxtc::syntax::{TyKind, alpha_eq_ty};

    let same_ty: Vec<TermVar> = tyscope
        .iter()
        .filter(|(_, t)| alpha_eq_ty(t, ty))
        .map(|(v, _)| v.clone())
        .collect();
    if (depth == 0 || coin(rng, 0.15)) && !same_ty.is_empty() {
        return Expr::var(pick(rng, &same_ty).unwrap().clone());
    }
    if depth == 0 {
        return Expr::unit();
    }
    match &ty.kind {
        TyKind::Unit => Expr::unit(),
        TyKind::Bin(Conn::Arrow, a, b) => {
            let x = sess.fresh_termvar("w");
            tyscope.push((x.clone(), (**a).clone()));
            let body = gen_typed_expr(rng, sess, tyscope, b, depth - 1);
            tyscope.pop();
            Expr::lam(x, body)
        }
        TyKind::Bin(Conn::Sum, a, b) => {
            if coin(rng, 0.5) {
                Expr::inj(Inj::Inj1, gen_typed_expr(rng, sess, tyscope, a, depth - 1))
            } else {
                Expr::inj(Inj::Inj2, gen_typed_expr(rng, sess, tyscope, b, depth - 1))
            }
        }
        TyKind::Bin(Conn::Prod, a, b) => Expr::pair(
            gen_typed_expr(rng, sess, tyscope, a, depth - 1),
            gen_typed_expr(rng, sess, tyscope, b, depth - 1),
        ),
        TyKind::Vec(Term::Zero, _) => Expr::nil(),
        TyKind::Vec(Term::Succ(t), elem) => {
            let tail_ty = Ty::vec((**t).clone(), (**elem).clone());
            Expr::cons(
                gen_typed_expr(rng, sess, tyscope, elem, depth - 1),
                gen_typed_expr(rng, sess, tyscope, &tail_ty, depth - 1),
            )
        }
        TyKind::Vec(..) => {
            if let Some(v) = pick(rng, &same_ty) {
                Expr::var(v.clone())
            } else {
                Expr::nil()
            }
        }
        TyKind::Forall(_, _, body) | TyKind::Implies(_, body) => {
            gen_typed_expr(rng, sess, tyscope, body, depth - 1)
        }
        TyKind::With(body, _) => gen_typed_expr(rng, sess, tyscope, body, depth - 1),
        _ => {
            if let Some(v) = pick(rng, &same_ty) {
                Expr::var(v.clone())
            } else {
                Expr::unit()
            }
        }
    }
}

/// Pool of universal variables for unification tests.
pub fn gen_pool(sess: &mut Session) -> Vec<(UVar, Sort)> {
    vec![
        (sess.fresh_uvar("m"), Sort::Nat),
        (sess.fresh_uvar("n"), Sort::Nat),
        (sess.fresh_uvar("k"), Sort::Nat),
        (sess.fresh_uvar("a"), Sort::Star),
        (sess.fresh_uvar("b"), Sort::Star),
    ]
}

pub fn pool_ctx(pool: &[(UVar, Sort)]) -> TyCtx {
    TyCtx::from_entries(
        pool.iter()
            .map(|(u, k)| Entry::UVarDecl(u.clone(), *k))
            .collect(),
    )
}

pub fn pool_decl_ctx(pool: &[(UVar, Sort)]) -> DeclCtx {
    let mut d = DeclCtx::empty();
    for (u, k) in pool {
        d = d.pushed(DeclEntry::UVar(u.clone(), *k));
    }
    d
}
