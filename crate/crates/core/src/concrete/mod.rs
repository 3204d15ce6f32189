//! Concrete syntax: a small text format for programs (`.idx` files) and
//! types, with `--` line comments, plus precedence-aware printers for every
//! syntactic category and for contexts.
//!
//! The grammar, roughly:
//!
//! ```text
//! program  ::= def* expr?
//! def      ::= "def" ident (":" type)? "=" expr ";"
//! expr     ::= "\" ident "->" expr | "rec" ident "." expr | cons
//! cons     ::= app ("::" cons)?                 -- right-associative
//! app      ::= "inj1" atom | "inj2" atom | atom atom*
//! atom     ::= "()" | "[]" | ident | "case" "(" expr "," branches ")"
//!            | "(" expr ":" type ")" | "(" expr "," expr ")" | "(" expr ")"
//! branches ::= pat "=>" expr ("|" pat "=>" expr)*
//! type     ::= "forall" ident ":" sort "." type | "exists" ident ":" sort "." type
//!            | prop "=>" type | arrow ("/\" prop)?
//! arrow    ::= sum ("->" arrow)?                -- right-associative
//! sum      ::= prod ("+" prod)*
//! prod     ::= tatom ("*" tatom)*
//! tatom    ::= "1" | ident | "^" ident | "Vec" term tatom | "(" type ")"
//! term     ::= "Z" | "S" term-atom | "1" | ident | "^" ident | "(" term ")"
//! prop     ::= term "=" term
//! sort     ::= "*" | "N"
//! ```

mod lex;
mod parse;
mod print;

pub use parse::{Def, ParseError, SourceFile, parse_expr, parse_program, parse_type};
pub use print::{
    print_ctx, print_decl_ctx, print_expr, print_pat, print_prop, print_term, print_ty,
};
