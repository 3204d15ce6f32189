//! Type errors. Each error carries a stable class name (used in diagnostics
//! and the JSON report) and, where available, the source span of the
//! offending expression or type.

use crate::syntax::Span;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum TypeError {
    #[error("unbound variable `{name}`")]
    UnboundVariable { name: String, span: Span },

    #[error("cannot synthesize a type for this expression")]
    CannotSynthesize { span: Span },

    #[error("type mismatch: expression does not check against `{expected}`")]
    TypeMismatch { expected: String, span: Span },

    #[error("`{ty}` is not a function type; cannot apply arguments")]
    NotAFunction { ty: String, span: Span },

    #[error("index terms `{left}` and `{right}` are not equal")]
    NotEqual { left: String, right: String },

    #[error("types `{left}` and `{right}` are not equivalent")]
    NotEquivalent { left: String, right: String },

    #[error("`{left}` is not a subtype of `{right}`{detail}")]
    NotSubtype { left: String, right: String, detail: String },

    #[error("occurs check failed: `{var}` occurs in `{term}`")]
    OccursCheck { var: String, term: String },

    #[error("sort mismatch: `{term}` does not have sort `{expected}`")]
    SortMismatch { term: String, expected: String },

    #[error("ill-formed type `{ty}`: {reason}")]
    IllFormedType { ty: String, reason: String, span: Span },

    #[error("annotation is not principal: `{ty}` mentions unsolved existential variables")]
    AnnotationNotPrincipal { ty: String, span: Span },

    #[error("branches do not cover all cases: {witness}")]
    CoverageFailure { witness: String, span: Span },

    #[error("scrutinee does not synthesize a principal type; annotate the scrutinee")]
    ScrutineeNotPrincipal { span: Span },

    #[error("pattern does not match type `{ty}`")]
    PatternMismatch { ty: String, span: Span },

    #[error("branch has {pats} pattern(s) but the scrutinee provides {tys} value(s)")]
    PatternArity { pats: usize, tys: usize, span: Span },

    #[error("cannot instantiate `{var}` to `{term}`: no instantiation rule applies")]
    CannotInstantiate { var: String, term: String },

    #[error("guarded type `{ty}` can only be checked at principality !")]
    GuardedNotPrincipal { ty: String, span: Span },
}

impl TypeError {
    /// Stable kebab-case class name for this error.
    pub fn class(&self) -> &'static str {
        match self {
            TypeError::UnboundVariable { .. } => "unbound-variable",
            TypeError::CannotSynthesize { .. } => "cannot-synthesize",
            TypeError::TypeMismatch { .. } => "type-mismatch",
            TypeError::NotAFunction { .. } => "not-a-function",
            TypeError::NotEqual { .. } => "not-equal",
            TypeError::NotEquivalent { .. } => "not-equivalent",
            TypeError::NotSubtype { .. } => "not-subtype",
            TypeError::OccursCheck { .. } => "occurs-check",
            TypeError::SortMismatch { .. } => "sort-mismatch",
            TypeError::IllFormedType { .. } => "ill-formed-type",
            TypeError::AnnotationNotPrincipal { .. } => "annotation-not-principal",
            TypeError::CoverageFailure { .. } => "coverage-failure",
            TypeError::ScrutineeNotPrincipal { .. } => "scrutinee-not-principal",
            TypeError::PatternMismatch { .. } => "pattern-mismatch",
            TypeError::PatternArity { .. } => "pattern-arity",
            TypeError::CannotInstantiate { .. } => "no-rule-applies",
            TypeError::GuardedNotPrincipal { .. } => "guarded-not-principal",
        }
    }

    pub fn span(&self) -> Option<Span> {
        match self {
            TypeError::UnboundVariable { span, .. }
            | TypeError::CannotSynthesize { span }
            | TypeError::TypeMismatch { span, .. }
            | TypeError::NotAFunction { span, .. }
            | TypeError::IllFormedType { span, .. }
            | TypeError::AnnotationNotPrincipal { span, .. }
            | TypeError::CoverageFailure { span, .. }
            | TypeError::ScrutineeNotPrincipal { span }
            | TypeError::PatternMismatch { span, .. }
            | TypeError::PatternArity { span, .. }
            | TypeError::GuardedNotPrincipal { span, .. } => Some(*span),
            _ => None,
        }
    }
}
