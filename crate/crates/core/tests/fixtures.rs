//! Typing fixtures: the worked examples that motivate the system.

use idxtc::concrete::{parse_expr, parse_type, print_ty};
use idxtc::context::TyCtx;
use idxtc::syntax::Principality;
use idxtc::{Session, Tc};

fn synth_ok(src_expr: &str) -> (String, Principality, TyCtx, Vec<String>) {
    let mut sess = Session::new();
    sess.enable_trace();
    let e = parse_expr(&mut sess, src_expr).expect("parse");
    let mut tc = Tc::new(&mut sess);
    let out = tc.synth(&TyCtx::empty(), &e).expect("should typecheck");
    let ty = print_ty(&out.ty);
    let trace = sess.take_trace();
    (ty, out.prin, out.out, trace)
}

fn check_ok(src_expr: &str, src_ty: &str) {
    let mut sess = Session::new();
    let e = parse_expr(&mut sess, src_expr).expect("parse expr");
    let t = parse_type(&mut sess, src_ty).expect("parse type");
    let mut tc = Tc::new(&mut sess);
    tc.check(&TyCtx::empty(), Principality::Bang, &e, &t)
        .unwrap_or_else(|err| panic!("{src_expr} should check against {src_ty}: {err}"));
}

fn check_err(src_expr: &str, src_ty: &str) -> idxtc::TypeError {
    let mut sess = Session::new();
    let e = parse_expr(&mut sess, src_expr).expect("parse expr");
    let t = parse_type(&mut sess, src_ty).expect("parse type");
    let mut tc = Tc::new(&mut sess);
    match tc.check(&TyCtx::empty(), Principality::Bang, &e, &t) {
        Ok(_) => panic!("{src_expr} should NOT check against {src_ty}"),
        Err(e) => e,
    }
}

#[test]
fn unit_checks() {
    check_ok("()", "1");
    check_err("()", "1 -> 1");
}

#[test]
fn identity_checks_polymorphically() {
    check_ok("\\x -> x", "forall a:*. a -> a");
}

#[test]
fn head_fixture() {
    let (ty, prin, _, _) = synth_ok(
        "(\\l -> case(l, x :: xs => x) : forall n:N. forall a:*. Vec (S n) a -> a)",
    );
    assert_eq!(ty, "forall n:N. forall a:*. Vec (S n) a -> a");
    assert_eq!(prin, Principality::Bang);
}

#[test]
fn map_fixture() {
    let (ty, prin, _, _) = synth_ok(
        "(rec map. \\f -> \\xs -> case(xs, [] => [] | y :: ys => f y :: map f ys) \
         : forall n:N. forall a:*. forall b:*. (a -> b) -> Vec n a -> Vec n b)",
    );
    assert_eq!(ty, "forall n:N. forall a:*. forall b:*. (a -> b) -> Vec n a -> Vec n b");
    assert_eq!(prin, Principality::Bang);
}

#[test]
fn zip_fixture() {
    let (ty, prin, _, _) = synth_ok(
        "(rec zip. \\p -> case(p, ([], []) => [] | (x :: xs, y :: ys) => (x, y) :: zip (xs, ys)) \
         : forall n:N. forall a:*. forall b:*. (Vec n a * Vec n b) -> Vec n (a * b))",
    );
    assert_eq!(
        ty,
        "forall n:N. forall a:*. forall b:*. Vec n a * Vec n b -> Vec n (a * b)"
    );
    assert_eq!(prin, Principality::Bang);
}

#[test]
fn spine_recovery_fixture() {
    // id (), with id : forall a:*. a -> a !, synthesizes 1 at ! and the trace
    // applies AllSpine, ArrSpine, UnitIntroSolve, EmptySpine, Recover in order.
    let (ty, prin, out, trace) = synth_ok("(\\x -> x : forall a:*. a -> a) ()");
    assert_eq!(ty, "1");
    assert_eq!(prin, Principality::Bang);
    let ctx = idxtc::concrete::print_ctx(&out);
    assert!(ctx.contains("^a:*=1"), "context should record ^a:*=1, got: {ctx}");

    let names = ["AllSpine", "ArrSpine", "UnitIntroSolve", "EmptySpine", "Recover"];
    let mut pos = 0;
    for name in names {
        let found = trace[pos..]
            .iter()
            .position(|l| l.starts_with(name))
            .unwrap_or_else(|| panic!("trace missing {name} in order: {trace:#?}"));
        pos += found + 1;
    }
}

#[test]
fn map_without_annotation_cannot_synthesize() {
    let mut sess = Session::new();
    let e = parse_expr(
        &mut sess,
        "rec map. \\f -> \\xs -> case(xs, [] => [] | y :: ys => f y :: map f ys)",
    )
    .unwrap();
    let mut tc = Tc::new(&mut sess);
    let err = tc.synth(&TyCtx::empty(), &e).unwrap_err();
    assert_eq!(err.class(), "cannot-synthesize");
}

#[test]
fn zip_with_unequal_lengths_rejected() {
    // zip (one-element list, two-element list) must not typecheck
    let mut sess = Session::new();
    let file = idxtc::concrete::parse_program(
        &mut sess,
        "t.idx",
        "def zip : forall n:N. forall a:*. forall b:*. (Vec n a * Vec n b) -> Vec n (a * b) = \
           rec zip. \\p -> case(p, ([], []) => [] | (x :: xs, y :: ys) => (x, y) :: zip (xs, ys)); \
         def bad = zip (() :: [], () :: () :: []);",
    )
    .unwrap();
    let mut tc = Tc::new(&mut sess);
    // first def goes through
    let d0 = &file.defs[0];
    let anno = idxtc::Expr::anno(d0.body.clone(), d0.anno.clone().unwrap());
    let s0 = tc.synth(&TyCtx::empty(), &anno).expect("zip typechecks");
    let ctx = s0.out.pushed(idxtc::Entry::Hyp(
        d0.name.clone(),
        s0.ty.clone(),
        Principality::Bang,
    ));
    // second def is rejected
    let d1 = &file.defs[1];
    let err = tc.synth(&ctx, &d1.body).unwrap_err();
    assert_eq!(err.class(), "not-equal");
}

#[test]
fn noncovering_match_rejected() {
    let err = check_err(
        "\\x -> case(x, inj1 y => ())",
        "(1 + 1) -> 1",
    );
    assert_eq!(err.class(), "coverage-failure");
    let msg = err.to_string();
    assert!(msg.contains("inj2"), "witness should mention inj2: {msg}");
}

#[test]
fn head_coverage_via_bottom_equation() {
    // A single cons branch covers Vec (S n) a because the nil case is
    // impossible.
    check_ok(
        "\\l -> case(l, x :: xs => x)",
        "forall n:N. forall a:*. Vec (S n) a -> a",
    );
    // But over Vec n a (unconstrained length) the nil case is missing.
    let err = check_err(
        "\\l -> case(l, x :: xs => x)",
        "forall n:N. forall a:*. Vec n a -> a",
    );
    assert_eq!(err.class(), "coverage-failure");
}

#[test]
fn scrutinee_must_be_principal() {
    let mut sess = Session::new();
    let e = parse_expr(
        &mut sess,
        "case((\\x -> x : forall a:*. a -> a) ((\\y -> y : forall b:*. b -> b)), g => ())",
    )
    .unwrap();
    let t = parse_type(&mut sess, "1").unwrap();
    let mut tc = Tc::new(&mut sess);
    let err = tc
        .check(&TyCtx::empty(), Principality::Bang, &e, &t)
        .unwrap_err();
    assert_eq!(err.class(), "scrutinee-not-principal");
}

#[test]
fn illsorted_annotation_rejected() {
    let mut sess = Session::new();
    let e = parse_expr(&mut sess, "([] : Vec (S 1) 1)").unwrap();
    let mut tc = Tc::new(&mut sess);
    let err = tc.synth(&TyCtx::empty(), &e).unwrap_err();
    assert_eq!(err.class(), "sort-mismatch");
}

#[test]
fn occurs_equation_rejected() {
    let err = check_err("()", "forall n:N. 1 /\\ (n = S n)");
    assert_eq!(err.class(), "occurs-check");
}

#[test]
fn guarded_vacuous_truth() {
    // (Z = S Z) => 1 is vacuously inhabited by anything that is an intro form
    check_ok("()", "(Z = S Z) => 1");
    check_ok("\\x -> x", "(Z = S Z) => (1 -> 1)");
    // a satisfied guard checks the body
    check_ok("()", "(Z = Z) => 1");
    check_err("\\x -> x", "(Z = Z) => 1");
}

#[test]
fn asserting_types() {
    check_ok("()", "1 /\\ (Z = Z)");
    let err = check_err("()", "1 /\\ (Z = S Z)");
    assert_eq!(err.class(), "not-equal");
}

#[test]
fn existential_length_vectors() {
    // A vector whose length is hidden behind an existential.
    check_ok("\\x -> x", "(exists n:N. Vec n 1) -> exists n:N. Vec n 1");
}

#[test]
fn vec_literal_checks() {
    check_ok("() :: () :: []", "Vec (S (S Z)) 1");
    check_err("() :: []", "Vec (S (S Z)) 1");
    check_err("() :: () :: []", "Vec (S Z) 1");
}
