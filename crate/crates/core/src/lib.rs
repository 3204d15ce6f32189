//! A typechecker for a small functional language with implicit higher-rank
//! polymorphism (universals *and* existentials), length-indexed vectors, and
//! equality-guarded types, checked bidirectionally with an ordered context of
//! existential variables.
//!
//! The main entry points are [`Session`] (fresh-name supply and rule tracing),
//! [`concrete::parse_program`], and the judgment methods on [`Tc`]:
//! [`Tc::check`], [`Tc::synth`], and friends. A fuel-bounded implementation of
//! the corresponding declarative system lives in [`oracle`]; it exists purely
//! for differential testing and `--oracle-check`.

pub mod concrete;
pub mod context;
pub mod error;
pub mod oracle;
pub mod session;
pub mod solve;
pub mod subtype;
pub mod syntax;
pub mod typing;

pub use context::{CompleteCtx, DeclCtx, Entry, TyCtx, extends};
pub use error::TypeError;
pub use session::{Session, Tc};
pub use syntax::{
    Branch, Branches, Conn, EVar, Expr, ExprKind, Ident, Pat, PatKind, Polarity, Principality,
    Prop, Sort, Span, Spine, Term, TermVar, Ty, TyKind, UVar,
};
pub use typing::{SpineOut, Synth};
