//! Differential test of algorithmic subtyping against the declarative
//! oracle: on success, any completion of the output context validates the
//! declarative judgment; on failure, the canonical completion of the input
//! refutes it (up to oracle fuel).

mod common;

use common::*;
use idxtc::concrete::{print_ctx, print_ty};
use idxtc::context::{CompleteCtx, TyCtx, extends};
use idxtc::oracle::{Fuel, V3, decl_sub};
use idxtc::syntax::Polarity;
use idxtc::{Entry, Session, Tc};

#[test]
fn subtype_agrees_with_declarative_oracle() {
    let fuel = Fuel::default();
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut confirmed = 0usize;
    let mut refuted = 0usize;
    for i in 0..4000u64 {
        let mut rng = rng_for(0x5B00_0000 + i);
        let mut sess = Session::new();
        let g = gen_ctx(&mut rng, &mut sess, 4);
        let scope = Scope::of_ctx(&g);
        let a = g.apply_ty(&gen_ty(&mut rng, &mut sess, &scope, 4));
        let b = if rng_bool(&mut rng) {
            g.apply_ty(&gen_ty(&mut rng, &mut sess, &scope, 4))
        } else {
            a.clone()
        };
        if g.ty_wf_prin(&a, idxtc::Principality::Slash).is_err()
            || g.ty_wf_prin(&b, idxtc::Principality::Slash).is_err()
        {
            continue;
        }
        let pol = if rng_bool(&mut rng) { Polarity::Pos } else { Polarity::Neg };

        let markers_in = count_markers(&g);
        let mut tc = Tc::new(&mut sess);
        match tc.subtype(&g, pol, &a, &b) {
            Ok(delta) => {
                accepted += 1;
                assert!(extends(&g, &delta), "subtyping output must extend its input");
                assert_eq!(
                    count_markers(&delta),
                    markers_in,
                    "pushed markers must not survive: {}",
                    print_ctx(&delta)
                );
                let omega = CompleteCtx::canonical(&delta);
                let psi = omega.apply_to_ctx(&delta).expect("completion applies");
                let oa = omega.apply_ty(&a);
                let ob = omega.apply_ty(&b);
                match decl_sub(&psi, pol, &oa, &ob, fuel) {
                    V3::True => confirmed += 1,
                    V3::Unknown => {}
                    V3::False => panic!(
                        "algorithm accepts but oracle rejects:\n  G: {}\n  A: {}\n  B: {}",
                        print_ctx(&g),
                        print_ty(&oa),
                        print_ty(&ob)
                    ),
                }
            }
            Err(_) => {
                rejected += 1;
                let omega = CompleteCtx::canonical(&g);
                let psi = omega.apply_to_ctx(&g).expect("completion applies");
                let oa = omega.apply_ty(&a);
                let ob = omega.apply_ty(&b);
                match decl_sub(&psi, pol, &oa, &ob, fuel) {
                    V3::False | V3::Unknown => {
                        if decl_sub(&psi, pol, &oa, &ob, fuel) == V3::False {
                            refuted += 1;
                        }
                    }
                    V3::True => panic!(
                        "oracle accepts but algorithm rejects:\n  G: {}\n  A: {}\n  B: {}",
                        print_ctx(&g),
                        print_ty(&oa),
                        print_ty(&ob)
                    ),
                }
            }
        }
    }
    assert!(accepted > 300, "too few subtyping acceptances: {accepted}");
    assert!(rejected > 300, "too few subtyping rejections: {rejected}");
    assert!(confirmed > 200, "too few oracle confirmations: {confirmed}");
    assert!(refuted > 200, "too few oracle refutations: {refuted}");
}

fn rng_bool(rng: &mut rand::rngs::StdRng) -> bool {
    use rand::Rng;
    rng.random_bool(0.5)
}

fn count_markers(ctx: &TyCtx) -> usize {
    ctx.entries()
        .iter()
        .filter(|e| matches!(e, Entry::Mark(_)))
        .count()
}

#[test]
fn subtype_determinism() {
    for i in 0..2000u64 {
        let mut rng = rng_for(0x5DD0_0000 + i);
        let mut sess = Session::new();
        let g = gen_ctx(&mut rng, &mut sess, 4);
        let scope = Scope::of_ctx(&g);
        let a = g.apply_ty(&gen_ty(&mut rng, &mut sess, &scope, 4));
        let b = g.apply_ty(&gen_ty(&mut rng, &mut sess, &scope, 4));
        if g.ty_wf_prin(&a, idxtc::Principality::Slash).is_err()
            || g.ty_wf_prin(&b, idxtc::Principality::Slash).is_err()
        {
            continue;
        }
        let pol = if rng_bool(&mut rng) { Polarity::Pos } else { Polarity::Neg };
        let mut fork = sess.fork();
        let r1 = Tc::new(&mut sess).subtype(&g, pol, &a, &b);
        let r2 = Tc::new(&mut fork).subtype(&g, pol, &a, &b);
        match (r1, r2) {
            (Ok(d1), Ok(d2)) => assert_eq!(d1, d2, "subtyping must be deterministic"),
            (Err(_), Err(_)) => {}
            _ => panic!("subtyping determinism violated"),
        }
    }
}
