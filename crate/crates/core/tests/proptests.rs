//! Property tests for the purely syntactic layer: printing round-trips,
//! substitution, and free-variable bookkeeping.

mod common;

use std::sync::atomic::{AtomicU64, Ordering};

use idxtc::Session;
use idxtc::concrete::{parse_expr, parse_type, print_expr, print_ty};
use idxtc::syntax::{
    Conn, Ident, Polarity, Prop, Sort, Term, Ty, UVar, alpha_eq_expr_printed, alpha_eq_ty_printed,
};
use proptest::prelude::*;

static NEXT_UID: AtomicU64 = AtomicU64::new(1 << 32);

fn fresh_uvar(name: &str) -> UVar {
    UVar(Ident::new(name, NEXT_UID.fetch_add(1, Ordering::Relaxed)))
}

/// Free type variables available to generated types.
fn free_pool() -> Vec<UVar> {
    // Distinct names: printing keeps free names verbatim, so the
    // reparse-comparison is name-based.
    vec![fresh_uvar("p"), fresh_uvar("q"), fresh_uvar("r")]
}

fn arb_index(pool: Vec<UVar>) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Zero),
        proptest::sample::select(pool).prop_map(Term::UVar),
    ];
    leaf.prop_recursive(3, 6, 2, |inner| inner.prop_map(Term::succ))
}

fn arb_ty(pool: Vec<UVar>) -> impl Strategy<Value = Ty> {
    let upool = pool.clone();
    let leaf = prop_oneof![
        Just(Ty::unit()),
        proptest::sample::select(pool.clone()).prop_map(Ty::uvar),
    ];
    leaf.prop_recursive(4, 16, 3, move |inner| {
        let pool2 = upool.clone();
        let pool3 = upool.clone();
        prop_oneof![
            (inner.clone(), inner.clone(), proptest::sample::select(vec![
                Conn::Arrow,
                Conn::Sum,
                Conn::Prod
            ]))
                .prop_map(|(a, b, op)| Ty::bin(op, a, b)),
            (inner.clone(), proptest::bool::ANY).prop_map(|(body, star)| {
                let k = if star { Sort::Star } else { Sort::Nat };
                // binders reuse a small set of display names to exercise the
                // printer's disambiguation
                let v = fresh_uvar(if star { "a" } else { "n" });
                if k == Sort::Star {
                    Ty::forall(v, k, body)
                } else {
                    Ty::exists(v, k, body)
                }
            }),
            (arb_index(pool2.clone()), arb_index(pool2), inner.clone())
                .prop_map(|(l, r, body)| Ty::implies(Prop(l, r), body)),
            (inner.clone(), arb_index(pool3.clone()), arb_index(pool3))
                .prop_map(|(body, l, r)| Ty::with(body, Prop(l, r))),
            (arb_index(upool.clone()), inner).prop_map(|(i, body)| Ty::vec(i, body)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_parse_round_trip_ty(ty in arb_ty(free_pool())) {
        let printed = print_ty(&ty);
        let mut sess = Session::new();
        let reparsed = parse_type(&mut sess, &printed)
            .unwrap_or_else(|e| panic!("printed type failed to reparse: {printed}: {e}"));
        prop_assert!(
            alpha_eq_ty_printed(&ty, &reparsed),
            "round trip changed the type: {} vs {}",
            printed,
            print_ty(&reparsed)
        );
    }

    #[test]
    fn subst_uvar_identity(ty in arb_ty(free_pool())) {
        // substituting a variable for itself changes nothing
        let v = fresh_uvar("z");
        prop_assert_eq!(ty.subst_uvar(&v, &Term::UVar(v.clone())), ty.clone());
        for u in ty_free_uvars(&ty) {
            prop_assert_eq!(ty.subst_uvar(&u, &Term::UVar(u.clone())), ty.clone());
        }
    }

    #[test]
    fn fev_of_subst_is_bounded(ty in arb_ty(free_pool())) {
        let target = ty_free_uvars(&ty).into_iter().next();
        if let Some(u) = target {
            let tau = Term::EVar(idxtc::EVar(Ident::new(
                "hole",
                NEXT_UID.fetch_add(1, Ordering::Relaxed),
            )));
            let out = ty.subst_uvar(&u, &tau);
            let mut allowed = ty.fev();
            allowed.extend(tau.fev());
            prop_assert!(out.fev().is_subset(&allowed));
        }
    }

    #[test]
    fn polarity_total_and_head_only(ty in arb_ty(free_pool())) {
        let p = ty.polarity();
        match p {
            Polarity::Neg => prop_assert!(ty.is_forall()),
            Polarity::Pos => prop_assert!(ty.is_exists()),
            Polarity::Non => prop_assert!(!ty.is_quantifier()),
        }
    }
}

fn ty_free_uvars(ty: &Ty) -> Vec<UVar> {
    // cheap over-approximation via the printer pool: collect from the type
    fn go(ty: &Ty, bound: &mut Vec<u64>, acc: &mut Vec<UVar>) {
        use idxtc::syntax::TyKind;
        match &ty.kind {
            TyKind::UVar(u) => {
                if !bound.contains(&u.uid()) && !acc.contains(u) {
                    acc.push(u.clone());
                }
            }
            TyKind::Unit | TyKind::EVar(_) => {}
            TyKind::Bin(_, l, r) => {
                go(l, bound, acc);
                go(r, bound, acc);
            }
            TyKind::Forall(v, _, b) | TyKind::Exists(v, _, b) => {
                bound.push(v.uid());
                go(b, bound, acc);
                bound.pop();
            }
            TyKind::Implies(_, b) | TyKind::With(b, _) => go(b, bound, acc),
            TyKind::Vec(_, b) => go(b, bound, acc),
        }
    }
    let mut acc = Vec::new();
    go(ty, &mut Vec::new(), &mut acc);
    acc
}

/// Expression round trips, generator-driven.
#[test]
fn print_parse_round_trip_expr() {
    for i in 0..2000u64 {
        let mut rng = common::rng_for(0x99AA + i);
        let mut sess = Session::new();
        let e = common::gen_closed_expr(&mut rng, &mut sess, 8);
        let printed = print_expr(&e);
        let reparsed = parse_expr(&mut sess, &printed)
            .unwrap_or_else(|err| panic!("reparse failed for `{printed}`: {err}"));
        assert!(
            alpha_eq_expr_printed(&e, &reparsed),
            "round trip changed the expression:\n  {printed}\n  {}",
            print_expr(&reparsed)
        );
    }
}
